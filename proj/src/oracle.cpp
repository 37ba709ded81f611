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

#include "oogrisk/oracle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "oogrisk/error.hpp"

namespace oogrisk {

const char* to_string(OracleStatus status) noexcept {
    switch (status) {
        case OracleStatus::bounded: return "bounded";
        case OracleStatus::unbounded_at_horizon: return "unbounded_at_horizon";
        case OracleStatus::inapplicable: return "inapplicable";
    }
    return "?";
}

FiniteHorizonProblem build_stacked_operators(const ClosedLoopSystem& sys, Eigen::Index T, Eigen::Index N) {
    sys.validate();
    if (T < 1) throw ValidationError("T", "attack horizon must be at least 1");
    if (N < T) throw ValidationError("N", "evaluation horizon must be at least T");
    const auto na = sys.n_a();
    const auto np = sys.n_p();
    const auto nr = sys.n_r();

    FiniteHorizonProblem out;
    out.T = T;
    out.N = N;
    out.T_p = Matrix::Zero((N + 1) * np, T * na);
    out.T_r = Matrix::Zero((N + 1) * nr, T * na);

    // Markov parameters h_0 = D, h_k = C A^{k-1} B
    std::vector<Matrix> hp(static_cast<std::size_t>(N + 1));
    std::vector<Matrix> hr(static_cast<std::size_t>(N + 1));
    hp[0] = sys.D_p;
    hr[0] = sys.D_r;
    Matrix AkB = sys.B;
    for (Eigen::Index k = 1; k <= N; ++k) {
        hp[static_cast<std::size_t>(k)] = sys.C_p * AkB;
        hr[static_cast<std::size_t>(k)] = sys.C_r * AkB;
        AkB = sys.A * AkB;
    }
    for (Eigen::Index j = 0; j < T; ++j) {
        for (Eigen::Index k = j; k <= N; ++k) {
            const auto lag = static_cast<std::size_t>(k - j);
            out.T_p.block(k * np, j * na, np, na) = hp[lag];
            out.T_r.block(k * nr, j * na, nr, na) = hr[lag];
        }
    }
    return out;
}

namespace {

/// Observability Gramian sum_k (A')^k Q A^k by squaring; requires rho(A) < 1.
Matrix observability_gramian(const Matrix& A, const Matrix& Q) {
    Matrix W = Q;
    Matrix Ak = A;
    for (int it = 0; it < 64; ++it) {
        const Matrix next = W + Ak.transpose() * W * Ak;
        const double change = (next - W).norm();
        W = next;
        Ak = Ak * Ak;
        if (change <= 1e-15 * W.norm() || Ak.norm() < 1e-300) break;
    }
    return 0.5 * (W + W.transpose());
}

}  // namespace

OracleResult finite_horizon_oog(const ClosedLoopSystem& sys, const OracleOptions& options) {
    sys.validate();
    if (options.T < 0 || options.N < 0 || options.max_horizon < 1) {
        throw ValidationError("oracle", "horizons must be nonnegative");
    }
    if (!(options.null_threshold > 0.0 && options.null_threshold < 1.0)) {
        throw ValidationError("oracle.null_threshold", "must lie in (0,1)");
    }
    OracleResult out;
    const double rho = spectral_radius(sys.A);
    if (!(rho < 1.0)) return out;

    Eigen::Index T = options.T;
    if (T == 0) {
        const double pick = std::ceil(20.0 / (1.0 - rho));
        T = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::min(pick, 1e9)), 1, options.max_horizon);
    }
    const Eigen::Index N = options.N == 0 ? 4 * T : options.N;
    out.T = T;
    out.N = N;
    if (sys.n_a() == 0) {
        out.status = OracleStatus::bounded;
        return out;
    }

    const FiniteHorizonProblem fh = build_stacked_operators(sys, T, N);
    const Matrix Gr = fh.T_r.transpose() * fh.T_r;
    Eigen::SelfAdjointEigenSolver<Matrix> es(Gr);
    const Vector lam = es.eigenvalues();
    const Matrix& V = es.eigenvectors();
    const double lmax = lam.size() ? lam(lam.size() - 1) : 0.0;
    const double cut = options.null_threshold * lmax;

    Eigen::Index null_dim = 0;
    while (null_dim < lam.size() && lam(null_dim) <= cut) ++null_dim;
    const double tp_norm = fh.T_p.norm();
    if (null_dim > 0 && tp_norm > 0.0) {
        const double escape = (fh.T_p * V.leftCols(null_dim)).norm();
        if (escape > 1e-8 * tp_norm) {
            out.status = OracleStatus::unbounded_at_horizon;
            out.bound = std::numeric_limits<double>::infinity();
            return out;
        }
    }
    const Eigen::Index range_dim = lam.size() - null_dim;
    out.status = OracleStatus::bounded;
    out.attack = Vector::Zero(T * sys.n_a());
    if (range_dim == 0 || tp_norm == 0.0) return out;

    // v = W w with W = V_1 Lambda_1^{-1/2} turns the constraint into |w| = 1
    const Matrix W = V.rightCols(range_dim) * lam.tail(range_dim).cwiseSqrt().cwiseInverse().asDiagonal();
    const Matrix K = fh.T_p * W;
    Eigen::SelfAdjointEigenSolver<Matrix> ks(K.transpose() * K);
    out.bound = std::max(0.0, ks.eigenvalues()(range_dim - 1));
    Vector v = W * ks.eigenvectors().col(range_dim - 1);
    const double r = (fh.T_r * v).norm();
    if (r > 0.0) v /= r;
    // fix the sign so that the first significant entry is positive
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12 * v.norm()) {
            if (v(i) < 0.0) v = -v;
            break;
        }
    }
    out.attack = v;

    const SimulationResult sim = simulate(sys, unstack_attack(v, sys.n_a()), N);
    const Vector xend = sim.x.col(N + 1);
    const Matrix Wo = observability_gramian(sys.A, sys.C_p.transpose() * sys.C_p);
    out.tail_estimate = std::max(0.0, static_cast<double>(xend.transpose() * Wo * xend));
    return out;
}

Matrix unstack_attack(const Vector& stacked, Eigen::Index n_a) {
    if (n_a <= 0) {
        if (stacked.size() != 0) throw ValidationError("attack", "nonempty attack for zero channels");
        return Matrix(0, 0);
    }
    if (stacked.size() % n_a != 0) throw ValidationError("attack", "length is not a multiple of n_a");
    return Eigen::Map<const Matrix>(stacked.data(), n_a, stacked.size() / n_a);
}

AttackCheck validate_attack(const ClosedLoopSystem& sys, const Matrix& attack, Eigen::Index N,
                            double residual_threshold, double stealth_tol, double terminal_tol) {
    if (!(residual_threshold > 0.0)) throw ValidationError("residual_threshold", "must be positive");
    const SimulationResult sim = simulate(sys, attack, N);
    AttackCheck out;
    out.impact = sim.performance_energy;
    out.residual_energy = sim.residual_energy;
    out.terminal_norm = sim.terminal_norm;
    out.stealthy = sim.residual_energy <= residual_threshold * (1.0 + stealth_tol) && sim.terminal_norm <= terminal_tol;
    return out;
}

}  // namespace oogrisk
