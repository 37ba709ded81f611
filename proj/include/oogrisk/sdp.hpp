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

#ifndef OOGRISK_SDP_HPP
#define OOGRISK_SDP_HPP

#include <string>
#include <vector>

#include "oogrisk/model.hpp"

namespace oogrisk::sdp {

/// Block-diagonal symmetric matrix, one dense block per entry.
using BlockMatrix = std::vector<Matrix>;

/**
 * @brief Linear matrix inequality program
 *
 *     minimize    c' y
 *     subject to  F0 + sum_i y_i F_i  >= 0   (positive semidefinite)
 *
 * with block-diagonal F0, F_i sharing the same block structure. Scalar
 * inequalities are 1x1 blocks.
 */
struct LmiProblem {
    std::vector<Eigen::Index> block_sizes;
    Vector c;
    BlockMatrix F0;
    std::vector<BlockMatrix> F;

    [[nodiscard]] Eigen::Index variables() const { return c.size(); }
    void validate() const;
};

enum class Status {
    optimal,
    infeasible,      ///< no y makes F(y) PSD; `certificate` holds X >= 0 with <F_i,X> = 0, <F0,X> = -1
    unbounded,       ///< objective unbounded below
    max_iterations,
    numerical_error
};

const char* to_string(Status status) noexcept;

struct Options {
    double gap_tol = 1e-8;        ///< relative duality gap
    double feasibility_tol = 1e-8;
    double infeasibility_tol = 1e-9;
    int max_iterations = 150;
    double step_fraction = 0.98;
    /// Accept a stalled run as optimal (flagged inaccurate) below this residual.
    double stall_accept_tol = 1e-6;
    /// Print one line per iteration to stderr.
    bool verbose = false;
};

struct Result {
    Status status = Status::numerical_error;
    bool inaccurate = false;
    Vector y;
    BlockMatrix slack;        ///< F(y)
    BlockMatrix multiplier;   ///< dual matrix X
    BlockMatrix certificate;  ///< infeasibility certificate when status == infeasible
    double objective = 0.0;       ///< c' y
    double dual_objective = 0.0;  ///< -<F0, X>
    int iterations = 0;
    double relative_gap = 0.0;
    double primal_residual = 0.0;  ///< LMI (slack) residual, relative
    double dual_residual = 0.0;    ///< equality residual of X, relative
};

/// Primal-dual interior point method (NT direction, Mehrotra predictor-corrector,
/// infeasible start).
Result solve(const LmiProblem& problem, const Options& options = {});

double inner(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix evaluate(const LmiProblem& problem, const Vector& y);
double min_eigenvalue(const BlockMatrix& m);

double min_eigenvalue(const Matrix& symmetric);
double max_eigenvalue(const Matrix& symmetric);

}  // namespace oogrisk::sdp

#endif  // OOGRISK_SDP_HPP
