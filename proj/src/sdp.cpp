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

#include "oogrisk/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "oogrisk/error.hpp"

namespace oogrisk::sdp {

// Internally the LMI program is handled as the dual of the standard pair
//
//   (P)  min <C, X>   s.t. <A_i, X> = b_i,  X >= 0
//   (D)  max b' y     s.t. Z = C - sum_i y_i A_i >= 0
//
// with C = F0, A_i = -F_i, b = -c, so that Z is exactly F(y).

const char* to_string(Status status) noexcept {
    switch (status) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
        case Status::max_iterations: return "max_iterations";
        case Status::numerical_error: return "numerical_error";
    }
    return "?";
}

void LmiProblem::validate() const {
    const auto check_blocks = [&](const BlockMatrix& m, const std::string& where) {
        if (m.size() != block_sizes.size()) throw ValidationError(where, "wrong number of blocks");
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m[k].rows() != block_sizes[k] || m[k].cols() != block_sizes[k]) {
                throw ValidationError(where, "block " + std::to_string(k) + " has the wrong size");
            }
            if (!m[k].allFinite()) throw ValidationError(where, "non-finite entries");
        }
    };
    check_blocks(F0, "F0");
    if (static_cast<Eigen::Index>(F.size()) != c.size()) {
        throw ValidationError("F", "one constraint matrix per variable required");
    }
    for (std::size_t i = 0; i < F.size(); ++i) check_blocks(F[i], "F[" + std::to_string(i) + "]");
}

double inner(const BlockMatrix& a, const BlockMatrix& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
    return s;
}

BlockMatrix evaluate(const LmiProblem& problem, const Vector& y) {
    BlockMatrix out = problem.F0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) == 0.0) continue;
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += y(i) * problem.F[i][k];
    }
    return out;
}

double min_eigenvalue(const Matrix& symmetric) {
    if (symmetric.rows() == 0) return std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double max_eigenvalue(const Matrix& symmetric) {
    if (symmetric.rows() == 0) return -std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(symmetric.rows() - 1);
}

double min_eigenvalue(const BlockMatrix& m) {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& b : m) v = std::min(v, min_eigenvalue(b));
    return v;
}

namespace {

double fro_norm(const BlockMatrix& m) {
    double s = 0.0;
    for (const auto& b : m) s += b.squaredNorm();
    return std::sqrt(s);
}

BlockMatrix scaled_identity(const std::vector<Eigen::Index>& sizes, double value) {
    BlockMatrix out;
    out.reserve(sizes.size());
    for (auto n : sizes) out.push_back(value * Matrix::Identity(n, n));
    return out;
}

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// Largest alpha in (0, inf] with M + alpha dM >= 0, given M > 0.
double max_step(const BlockMatrix& m, const BlockMatrix& dm) {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m.size(); ++k) {
        if (m[k].rows() == 0) continue;
        Eigen::LLT<Matrix> llt(m[k]);
        if (llt.info() != Eigen::Success) return 0.0;
        const Matrix linv = llt.matrixL().solve(Matrix::Identity(m[k].rows(), m[k].cols()));
        const Matrix w = sym(linv * dm[k] * linv.transpose());
        const double lmin = min_eigenvalue(w);
        if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
    }
    return alpha;
}

struct Snapshot {
    BlockMatrix X, Z;
    Vector y;
    double gap = 0.0, pres = 0.0, dres = 0.0;
    double worst = std::numeric_limits<double>::infinity();
    int iteration = 0;
};

struct Direction {
    BlockMatrix dX;
    Vector dy;
    BlockMatrix dZ;
};

class Ipm {
public:
    Ipm(const LmiProblem& p, const Options& o) : p_(p), o_(o) {
        m_ = p.variables();
        nblocks_ = p.block_sizes.size();
        total_dim_ = 0;
        for (auto n : p.block_sizes) total_dim_ += n;
        C_ = p.F0;
        A_.resize(m_);
        for (Eigen::Index i = 0; i < m_; ++i) {
            A_[i] = p.F[i];
            for (auto& b : A_[i]) b = -b;
        }
        b_ = -p.c;
        norm_C_ = fro_norm(C_);
        norm_b_ = b_.norm();
        norm_A_max_ = 0.0;
        for (const auto& a : A_) norm_A_max_ = std::max(norm_A_max_, fro_norm(a));
    }

    Result run() {
        Result res;
        const double n = static_cast<double>(std::max<Eigen::Index>(total_dim_, 1));
        double xi = std::max(10.0, std::sqrt(n));
        double eta = std::max({10.0, std::sqrt(n), norm_C_});
        for (Eigen::Index i = 0; i < m_; ++i) {
            const double ai = fro_norm(A_[i]);
            xi = std::max(xi, n * (1.0 + std::abs(b_(i))) / (1.0 + ai));
            eta = std::max(eta, ai);
        }
        X_ = scaled_identity(p_.block_sizes, xi);
        Z_ = scaled_identity(p_.block_sizes, eta);
        y_ = Vector::Zero(m_);

        int stall = 0;
        Snapshot best;
        auto give_up = [&](Status fallback) -> Result& {
            if (best.worst <= o_.stall_accept_tol) {
                X_ = best.X;
                Z_ = best.Z;
                y_ = best.y;
                res.relative_gap = best.gap;
                res.primal_residual = best.pres;
                res.dual_residual = best.dres;
                return finish(res, Status::optimal, true);
            }
            return finish(res, fallback);
        };
        for (int it = 0; it <= o_.max_iterations; ++it) {
            res.iterations = it;
            const Vector Rp = b_ - apply(X_);
            BlockMatrix Rd = C_;
            const BlockMatrix Aty = adjoint(y_);
            for (std::size_t k = 0; k < nblocks_; ++k) Rd[k] -= Z_[k] + Aty[k];

            const double pobj = inner(C_, X_);
            const double dobj = b_.dot(y_);
            const double xz = inner(X_, Z_);
            const double mu = xz / n;
            res.relative_gap = std::max(xz, std::abs(pobj - dobj)) / (1.0 + std::abs(pobj) + std::abs(dobj));
            res.dual_residual = Rp.norm() / (1.0 + norm_b_);
            res.primal_residual = fro_norm(Rd) / (1.0 + norm_C_);
            const double worst = std::max({res.relative_gap, res.dual_residual, res.primal_residual});
            if (worst < best.worst) {
                best = {X_, Z_, y_, res.relative_gap, res.primal_residual, res.dual_residual, worst, it};
            } else if (it - best.iteration >= 6 && best.worst <= o_.stall_accept_tol) {
                return give_up(Status::numerical_error);
            }
            if (o_.verbose) {
                std::fprintf(stderr, "%3d pobj=% .9e dobj=% .9e gap=%.2e pres=%.2e dres=%.2e mu=%.2e\n", it, pobj,
                             dobj, res.relative_gap, res.primal_residual, res.dual_residual, mu);
            }

            if (res.relative_gap <= o_.gap_tol && res.dual_residual <= o_.feasibility_tol &&
                res.primal_residual <= o_.feasibility_tol) {
                return finish(res, Status::optimal);
            }
            if (lmi_infeasible(pobj)) {
                res.certificate = X_;
                const double scale = -pobj;
                for (auto& blk : res.certificate) blk /= scale;
                return finish(res, Status::infeasible);
            }
            if (dobj > 0.0 && norm_C_ / dobj < o_.infeasibility_tol && res.dual_residual > o_.feasibility_tol) {
                return finish(res, Status::unbounded);
            }
            if (it == o_.max_iterations) break;

            if (!factor()) {
                return give_up(Status::numerical_error);
            }

            BlockMatrix rhs(nblocks_);
            for (std::size_t k = 0; k < nblocks_; ++k) rhs[k] = -Matrix(lambda_[k].array().square().matrix().asDiagonal());
            const Direction aff = direction(Rp, Rd, rhs);
            const double ap_aff = std::min(1.0, max_step(X_, aff.dX));
            const double ad_aff = std::min(1.0, max_step(Z_, aff.dZ));
            double xz_aff = 0.0;
            for (std::size_t k = 0; k < nblocks_; ++k) {
                xz_aff += (X_[k] + ap_aff * aff.dX[k]).cwiseProduct(Z_[k] + ad_aff * aff.dZ[k]).sum();
            }
            const double sigma = std::clamp(std::pow(std::max(xz_aff, 0.0) / std::max(xz, 1e-300), 3.0), 0.0, 1.0);

            for (std::size_t k = 0; k < nblocks_; ++k) {
                const auto nk = p_.block_sizes[k];
                const Matrix dx = Ginv_[k] * aff.dX[k] * Ginv_[k].transpose();
                const Matrix dz = G_[k].transpose() * aff.dZ[k] * G_[k];
                rhs[k] = sigma * mu * Matrix::Identity(nk, nk) - Matrix(lambda_[k].array().square().matrix().asDiagonal()) -
                         sym(dx * dz);
            }
            const Direction d = direction(Rp, Rd, rhs);
            if (o_.verbose) {
                const Vector e = Rp - apply(d.dX);
                std::fprintf(stderr, "    direction residual %.2e of %.2e\n", e.norm(), Rp.norm());
            }
            const double ap_max = max_step(X_, d.dX);
            const double ad_max = max_step(Z_, d.dZ);
            const double ap = std::min(1.0, o_.step_fraction * ap_max);
            const double ad = std::min(1.0, o_.step_fraction * ad_max);
            if (!std::isfinite(ap) || !std::isfinite(ad) || !d.dy.allFinite()) {
                return give_up(Status::numerical_error);
            }
            for (std::size_t k = 0; k < nblocks_; ++k) {
                X_[k] = sym(X_[k] + ap * d.dX[k]);
                Z_[k] = sym(Z_[k] + ad * d.dZ[k]);
            }
            y_ += ad * d.dy;

            stall = (std::max(ap, ad) < 1e-8) ? stall + 1 : 0;
            if (stall >= 3) {
                return give_up(Status::numerical_error);
            }
        }
        return give_up(Status::max_iterations);
    }

private:
    Vector apply(const BlockMatrix& X) const {
        Vector out(m_);
        for (Eigen::Index i = 0; i < m_; ++i) out(i) = inner(A_[i], X);
        return out;
    }

    BlockMatrix adjoint(const Vector& y) const {
        BlockMatrix out(nblocks_);
        for (std::size_t k = 0; k < nblocks_; ++k) out[k] = Matrix::Zero(p_.block_sizes[k], p_.block_sizes[k]);
        for (Eigen::Index i = 0; i < m_; ++i) {
            if (y(i) == 0.0) continue;
            for (std::size_t k = 0; k < nblocks_; ++k) out[k] += y(i) * A_[i][k];
        }
        return out;
    }

    // X certifies F(y) >= 0 is infeasible when <F_i, X> ~ 0 for all i and <F0, X> < 0.
    bool lmi_infeasible(double pobj) const {
        if (!(pobj < 0.0)) return false;
        const double scale = -pobj;
        const Vector ax = apply(X_) / scale;
        const double xnorm = fro_norm(X_) / scale;
        return ax.norm() <= o_.infeasibility_tol * std::max(1.0, norm_A_max_ * std::min(xnorm, 1.0)) &&
               fro_norm(X_) > 1e3;
    }

    /// Nesterov-Todd scaling: G with G^{-1} X G^{-T} = G' Z G = diag(lambda), W = G G'.
    bool factor() {
        G_.resize(nblocks_);
        Ginv_.resize(nblocks_);
        W_.resize(nblocks_);
        lambda_.resize(nblocks_);
        for (std::size_t k = 0; k < nblocks_; ++k) {
            if (p_.block_sizes[k] == 0) {
                G_[k] = Ginv_[k] = W_[k] = Matrix(0, 0);
                lambda_[k] = Vector(0);
                continue;
            }
            Eigen::LLT<Matrix> lx(X_[k]);
            Eigen::LLT<Matrix> lz(Z_[k]);
            if (lx.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
            const Matrix L = lx.matrixL();
            const Matrix R = lz.matrixL();
            Eigen::JacobiSVD<Matrix> svd(R.transpose() * L, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const Vector sv = svd.singularValues();
            if (!(sv.minCoeff() > 0.0)) return false;
            lambda_[k] = sv;
            const Vector isq = sv.cwiseSqrt().cwiseInverse();
            G_[k] = L * svd.matrixV() * isq.asDiagonal();
            // G^{-1} = Sigma^{-1/2} U' R'
            Ginv_[k] = isq.asDiagonal() * svd.matrixU().transpose() * R.transpose();
            W_[k] = sym(G_[k] * G_[k].transpose());
        }
        // H_ij = <A_i, W A_j W> = <G'A_i G, G'A_j G>; factor the stacked scaled matrices by QR
        Eigen::Index rows = 0;
        for (auto nk : p_.block_sizes) rows += nk * nk;
        Matrix M(rows + m_, m_);
        for (Eigen::Index j = 0; j < m_; ++j) {
            Eigen::Index r = 0;
            for (std::size_t k = 0; k < nblocks_; ++k) {
                const auto nk = p_.block_sizes[k];
                const Matrix t = G_[k].transpose() * A_[j][k] * G_[k];
                M.col(j).segment(r, nk * nk) = Eigen::Map<const Vector>(t.data(), nk * nk);
                r += nk * nk;
            }
        }
        const double scale = std::max(M.topRows(rows).colwise().norm().maxCoeff(), 1e-300);
        M.bottomRows(m_) = 1e-8 * scale * Matrix::Identity(m_, m_);
        Eigen::HouseholderQR<Matrix> qr(M);
        R_ = qr.matrixQR().topRows(m_).triangularView<Eigen::Upper>();
        return R_.diagonal().allFinite() && R_.diagonal().cwiseAbs().minCoeff() > 0.0;
    }

    Vector schur_solve(const Vector& r) const {
        const Vector z = R_.transpose().triangularView<Eigen::Lower>().solve(r);
        return R_.triangularView<Eigen::Upper>().solve(z);
    }

    /// Scaled complementarity right-hand side -> (dX, dy, dZ).
    /// `rhs` lives in the scaled space where X and Z both equal diag(lambda).
    Direction direction(const Vector& Rp, const BlockMatrix& Rd, const BlockMatrix& rhs) const {
        BlockMatrix R(nblocks_);
        BlockMatrix WRdW(nblocks_);
        for (std::size_t k = 0; k < nblocks_; ++k) {
            const auto nk = p_.block_sizes[k];
            Matrix S(nk, nk);
            for (Eigen::Index i = 0; i < nk; ++i)
                for (Eigen::Index j = 0; j < nk; ++j) S(i, j) = 2.0 * rhs[k](i, j) / (lambda_[k](i) + lambda_[k](j));
            R[k] = sym(G_[k] * S * G_[k].transpose());
            WRdW[k] = W_[k] * Rd[k] * W_[k];
        }
        Vector r = Rp - apply(R) + apply(WRdW);
        Direction d;
        d.dy = schur_solve(r);
        d.dZ = Rd;
        const BlockMatrix Ady = adjoint(d.dy);
        d.dX.resize(nblocks_);
        for (std::size_t k = 0; k < nblocks_; ++k) {
            d.dZ[k] -= Ady[k];
            d.dX[k] = sym(R[k] - W_[k] * d.dZ[k] * W_[k]);
        }
        return d;
    }

    Result& finish(Result& res, Status status, bool inaccurate = false) {
        res.status = status;
        res.inaccurate = inaccurate;
        res.y = y_;
        res.slack = evaluate(p_, y_);
        res.multiplier = X_;
        res.objective = p_.c.dot(y_);
        res.dual_objective = -inner(C_, X_);
        return res;
    }

    const LmiProblem& p_;
    const Options& o_;
    Eigen::Index m_ = 0;
    std::size_t nblocks_ = 0;
    Eigen::Index total_dim_ = 0;
    BlockMatrix C_;
    std::vector<BlockMatrix> A_;
    Vector b_;
    double norm_C_ = 0.0;
    double norm_b_ = 0.0;
    double norm_A_max_ = 0.0;
    BlockMatrix X_, Z_;
    Vector y_;
    BlockMatrix G_, Ginv_, W_;
    std::vector<Vector> lambda_;
    Matrix R_;
};

}  // namespace

Result solve(const LmiProblem& problem, const Options& options) {
    problem.validate();
    Ipm ipm(problem, options);
    return ipm.run();
}

}  // namespace oogrisk::sdp
