/*
 Copyright 2026 The oogrisk Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef OOGRISK_IMPACT_HPP
#define OOGRISK_IMPACT_HPP

#include <limits>
#include <string>

#include "oogrisk/boundedness.hpp"
#include "oogrisk/model.hpp"
#include "oogrisk/sdp.hpp"

namespace oogrisk {

enum class ImpactStatus { bounded, unbounded, numerical_failure };

const char* to_string(ImpactStatus status) noexcept;

struct SolverStats {
    sdp::Status sdp_status = sdp::Status::numerical_error;
    bool inaccurate = false;
    /// The program stayed infeasible for every gamma up to SolverConfig::gamma_max.
    bool infeasible_to_bracket = false;
    int iterations = 0;
    double relative_gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    /// lambda_max of M(gamma, P) re-evaluated on the returned certificate.
    double certificate_max_eigenvalue = 0.0;
};

struct ImpactResult {
    ImpactStatus status = ImpactStatus::numerical_failure;
    double gamma = std::numeric_limits<double>::infinity();
    Matrix P;  ///< symmetric dissipation certificate, empty unless bounded
    SolverStats stats;
    BoundednessReport boundedness;
    std::string diagnostics;

    [[nodiscard]] bool bounded() const { return status == ImpactStatus::bounded; }
};

struct SolverConfig {
    sdp::Options sdp;
    /// PSD tolerance for the a-posteriori certificate check, relative to the data scale.
    double psd_tol = 1e-7;
    /// Largest gain considered finite; infeasibility up to here means unbounded.
    double gamma_max = 1e8;
    int fdi_grid = 2048;
    ZeroTolerances zero_tolerances;
    /// Use bisection over gamma with a feasibility SDP instead of the joint program.
    bool bisection = false;
    double bisection_rel_tol = 1e-7;

    void validate() const;
};

/**
 * @brief Dissipation inequality matrix
 *
 *   M = [A'PA - P, A'PB; B'PA, B'PB] + [C_p D_p]'[C_p D_p] - gamma [C_r D_r]'[C_r D_r]
 *
 * M <= 0 certifies that no stealthy attack drives |y_p|^2 above gamma |y_r|^2.
 */
Matrix build_lmi(const ClosedLoopSystem& sys, double gamma, const Matrix& P);

/**
 * @brief Output-to-output gain of one realization: the least gamma >= 0 for
 * which some symmetric P gives M(gamma, P) <= 0.
 *
 * The unbounded verdict needs the SDP and the unit-circle zero test to agree;
 * disagreement yields numerical_failure with both diagnostics attached.
 */
ImpactResult solve_oog(const ClosedLoopSystem& sys, const SolverConfig& cfg = {});

struct FdiResult {
    bool applicable = true;
    double min_eigenvalue = 0.0;
    double theta = 0.0;  ///< argmin frequency in [0, 2 pi)
};

/// min over a uniform grid on |z| = 1 of lambda_min(gamma G_r^H G_r - G_p^H G_p).
FdiResult fdi_sweep(const ClosedLoopSystem& sys, double gamma, int grid_size = 2048);

}  // namespace oogrisk

#endif  // OOGRISK_IMPACT_HPP
