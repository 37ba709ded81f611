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

#ifndef OOGRISK_BOUNDEDNESS_HPP
#define OOGRISK_BOUNDEDNESS_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "oogrisk/model.hpp"

namespace oogrisk {

/// Numerical bands for the exact-arithmetic zero conditions.
struct ZeroTolerances {
    double circle = 1e-6;  ///< | |z| - 1 | below this counts as on the unit circle
    double share = 1e-6;   ///< |G_p(z) s| relative to |[C_p D_p]| below this counts as annihilated
    double null = 1e-8;    ///< rank tolerance of the Rosenbrock pencil, relative to its scale
};

struct ZeroRecord {
    std::complex<double> z;
    CVector direction;        ///< unit-norm input direction s with G(z) s = 0
    CVector state_direction;  ///< matching x with (A - zI) x + B s = 0, same scaling as direction
    bool on_unit_circle = false;
    bool shared_with_performance = false;
    bool degraded = false;  ///< pencil rank drop was not clean at this z
};

/**
 * @brief Finite transmission zeros of (A, B, C, D) with input directions.
 *
 * Candidates are the finite generalized eigenvalues of the Rosenbrock pencil
 * [A - zI, B; C, D] (squared down by a fixed orthonormal projection when there
 * are more outputs than inputs), then confirmed by a rank test on the full
 * pencil. Zeros with no input component (unobservable modes) are omitted.
 * Returns nothing useful for pencils that are rank deficient at every z; see
 * `pencil_rank_deficient`.
 */
std::vector<ZeroRecord> transmission_zeros(const StateSpace& ss, const ZeroTolerances& tol = {});

/// True when the pencil loses column rank for every z (e.g. more inputs than outputs).
bool pencil_rank_deficient(const StateSpace& ss, const ZeroTolerances& tol = {});

enum class BoundednessClass { bounded_condition_1, bounded_condition_2, unbounded };

const char* to_string(BoundednessClass kind) noexcept;

struct BoundednessReport {
    BoundednessClass kind = BoundednessClass::bounded_condition_1;
    std::optional<ZeroRecord> witness;      ///< violating zero when unbounded
    std::vector<ZeroRecord> circle_zeros;   ///< residual zeros found on |z| = 1
    bool degraded = false;
    bool rank_deficient_everywhere = false;
    ZeroTolerances tolerances;

    [[nodiscard]] bool bounded() const { return kind != BoundednessClass::unbounded; }
};

/**
 * @brief Boundedness of the output-to-output gain from the residual zeros.
 *
 * Bounded when the residual map has no zero on the unit circle (condition 1)
 * or when every unit-circle zero direction is also blocked by the performance
 * map at the same z (condition 2).
 */
BoundednessReport classify_boundedness(const ClosedLoopSystem& sys, const ZeroTolerances& tol = {});

/// ceil(N (1 - beta)), guarded against the rounding of N (1 - beta).
std::size_t required_bounded_count(std::size_t n, double beta);

/// True iff at least ceil(N (1 - beta)) realizations are bounded.
bool aggregate_boundedness(const std::vector<bool>& bounded, double beta);

}  // namespace oogrisk

#endif  // OOGRISK_BOUNDEDNESS_HPP
