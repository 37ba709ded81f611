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

#ifndef OOGRISK_ORACLE_HPP
#define OOGRISK_ORACLE_HPP

#include "oogrisk/model.hpp"

namespace oogrisk {

/**
 * @brief Lifted finite-horizon maps from the stacked attack a[0..T-1] to the
 * stacked outputs y[0..N], zero initial state.
 */
struct FiniteHorizonProblem {
    Eigen::Index T = 0;
    Eigen::Index N = 0;
    Matrix T_p;  ///< (N+1) n_p x T n_a
    Matrix T_r;  ///< (N+1) n_r x T n_a
};

/// Block (k, j) is C A^{k-1-j} B for k > j, D for k = j and zero above the diagonal.
FiniteHorizonProblem build_stacked_operators(const ClosedLoopSystem& sys, Eigen::Index T, Eigen::Index N);

enum class OracleStatus { bounded, unbounded_at_horizon, inapplicable };

const char* to_string(OracleStatus status) noexcept;

struct OracleResult {
    OracleStatus status = OracleStatus::inapplicable;
    double bound = 0.0;     ///< largest |y_p|^2 over stacked attacks with |y_r|^2 = 1
    Vector attack;          ///< maximizer, stacked as a[0], a[1], ...
    double tail_estimate = 0.0;  ///< bound on the output energy missed after step N
    Eigen::Index T = 0;
    Eigen::Index N = 0;
};

struct OracleOptions {
    /// Attack horizon; 0 picks 20 / (1 - rho(A)) capped at `max_horizon`.
    Eigen::Index T = 0;
    /// Evaluation horizon; 0 picks 4 T.
    Eigen::Index N = 0;
    Eigen::Index max_horizon = 400;
    /// Eigenvalues of T_r' T_r below this fraction of its largest one span its null space.
    double null_threshold = 1e-10;
};

/**
 * @brief Brute-force lower bound on the output-to-output gain.
 *
 * Solves the generalized eigenproblem T_p'T_p v = lambda T_r'T_r v on the
 * range of the stealth Gramian T_r'T_r. Performance energy reachable from its
 * null space makes the bound unbounded at this horizon. Unstable systems are
 * refused since truncation no longer bounds the tail.
 */
OracleResult finite_horizon_oog(const ClosedLoopSystem& sys, const OracleOptions& options = {});

struct AttackCheck {
    bool stealthy = false;
    double impact = 0.0;
    double residual_energy = 0.0;
    double terminal_norm = 0.0;
};

/// Simulates `attack` (n_a x L) and meters outputs on [0, N]. Stealthy means residual energy
/// within the threshold and a state that has returned near the origin by step N + 1.
AttackCheck validate_attack(const ClosedLoopSystem& sys, const Matrix& attack, Eigen::Index N,
                            double residual_threshold = 1.0, double stealth_tol = 1e-8,
                            double terminal_tol = 1e-3);

/// Reshapes a stacked attack (a[0]; a[1]; ...) into n_a x T columns.
Matrix unstack_attack(const Vector& stacked, Eigen::Index n_a);

}  // namespace oogrisk

#endif  // OOGRISK_ORACLE_HPP
