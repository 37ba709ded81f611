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

#include "oogrisk/boundedness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "oogrisk/error.hpp"

namespace oogrisk {

using cdouble = std::complex<double>;

const char* to_string(BoundednessClass kind) noexcept {
    switch (kind) {
        case BoundednessClass::bounded_condition_1: return "bounded_condition_1";
        case BoundednessClass::bounded_condition_2: return "bounded_condition_2";
        case BoundednessClass::unbounded: return "unbounded";
    }
    return "?";
}

namespace {

double pencil_scale(const StateSpace& ss, cdouble z) {
    return 1.0 + std::sqrt(ss.A.squaredNorm() + ss.B.squaredNorm() + ss.C.squaredNorm() + ss.D.squaredNorm()) +
           std::abs(z);
}

CMatrix rosenbrock(const StateSpace& ss, cdouble z) {
    const auto n = ss.states();
    const auto m = ss.inputs();
    const auto p = ss.outputs();
    CMatrix P(n + p, n + m);
    P.topLeftCorner(n, n) = ss.A.cast<cdouble>() - z * CMatrix::Identity(n, n);
    P.topRightCorner(n, m) = ss.B.cast<cdouble>();
    P.bottomLeftCorner(p, n) = ss.C.cast<cdouble>();
    P.bottomRightCorner(p, m) = ss.D.cast<cdouble>();
    return P;
}

struct NullSpace {
    CMatrix basis;  // columns span the numerical null space
    double sigma_min = 0.0;
    double scale = 1.0;
};

NullSpace pencil_null_space(const StateSpace& ss, cdouble z, double tol) {
    const CMatrix P = rosenbrock(ss, z);
    const auto cols = P.cols();
    NullSpace out;
    out.scale = pencil_scale(ss, z);
    if (cols == 0) return out;
    Eigen::JacobiSVD<CMatrix> svd(P, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol * out.scale) ++rank;
    }
    out.sigma_min = sv.size() == cols ? sv(cols - 1) : 0.0;
    out.basis = svd.matrixV().rightCols(cols - rank);
    return out;
}

/// Orthonormal rows, deterministic, for squaring down tall pencils.
Matrix projection(Eigen::Index rows, Eigen::Index cols) {
    std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(rows * 131 + cols));
    std::normal_distribution<double> nd;
    Matrix g(cols, rows);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = nd(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ() * Matrix::Identity(cols, rows);
    return q.transpose();
}

std::vector<cdouble> candidate_zeros(const StateSpace& ss) {
    const auto n = ss.states();
    const auto m = ss.inputs();
    const auto p = ss.outputs();
    Matrix C = ss.C;
    Matrix D = ss.D;
    if (p > m) {
        const Matrix W = projection(m, p);
        C = W * ss.C;
        D = W * ss.D;
    }
    const auto dim = n + m;
    if (dim == 0) return {};
    Matrix a(dim, dim);
    Matrix b = Matrix::Zero(dim, dim);
    a.topLeftCorner(n, n) = ss.A;
    a.topRightCorner(n, m) = ss.B;
    a.bottomLeftCorner(m, n) = C;
    a.bottomRightCorner(m, m) = D;
    b.topLeftCorner(n, n).setIdentity();

    Eigen::GeneralizedEigenSolver<Matrix> ges(a, b, false);
    const Eigen::VectorXcd alphas = ges.alphas();
    const Vector betas = ges.betas();
    std::vector<cdouble> out;
    const double big = 1e8 * (1.0 + a.norm());
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(betas(i)) <= 1e-12 * std::max(1.0, std::abs(alphas(i)))) continue;
        const cdouble z = alphas(i) / betas(i);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > big) continue;
        out.push_back(z);
    }
    return out;
}

}  // namespace

bool pencil_rank_deficient(const StateSpace& ss, const ZeroTolerances& tol) {
    ss.validate();
    if (ss.inputs() == 0) return false;
    if (ss.outputs() < ss.inputs()) return true;
    for (const cdouble z : {cdouble(0.6178, 0.3141), cdouble(-1.2345, 0.7771)}) {
        if (pencil_null_space(ss, z, tol.null).basis.cols() == 0) return false;
    }
    return true;
}

std::vector<ZeroRecord> transmission_zeros(const StateSpace& ss, const ZeroTolerances& tol) {
    ss.validate();
    const auto n = ss.states();
    const auto m = ss.inputs();
    std::vector<ZeroRecord> out;
    if (m == 0 || ss.outputs() < m) return out;

    std::vector<cdouble> cands = candidate_zeros(ss);
    // collapse repeated eigenvalues; directions come from the null space below
    std::vector<cdouble> distinct;
    for (const auto z : cands) {
        const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                      [&](cdouble w) { return std::abs(w - z) <= 1e-6 * (1.0 + std::abs(z)); });
        if (!seen) distinct.push_back(z);
    }

    const bool square = ss.outputs() == m;
    for (const auto z : distinct) {
        NullSpace ns = pencil_null_space(ss, z, tol.null);
        bool degraded = false;
        if (ns.basis.cols() == 0) {
            // repeated zeros are only located to about sqrt(eps); accept a softer rank drop
            if (ns.sigma_min > 1e-5 * ns.scale) {
                if (square) {
                    degraded = true;
                } else {
                    continue;  // artefact of the squaring-down projection
                }
            } else {
                degraded = true;
            }
            const CMatrix P = rosenbrock(ss, z);
            Eigen::JacobiSVD<CMatrix> svd(P, Eigen::ComputeFullV);
            ns.basis = svd.matrixV().rightCols(1);
        }
        for (Eigen::Index k = 0; k < ns.basis.cols(); ++k) {
            const CVector v = ns.basis.col(k);
            const CVector s = v.tail(m);
            const double snorm = s.norm();
            if (snorm <= 1e-8 * v.norm()) continue;
            ZeroRecord rec;
            rec.z = z;
            rec.direction = s / snorm;
            rec.state_direction = v.head(n) / snorm;
            rec.on_unit_circle = std::abs(std::abs(z) - 1.0) <= tol.circle;
            rec.degraded = degraded;
            out.push_back(std::move(rec));
        }
    }
    std::sort(out.begin(), out.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return out;
}

namespace {

bool annihilated_by_performance(const ClosedLoopSystem& sys, const CVector& x, const CVector& s, double share_tol) {
    const CVector yp = sys.C_p.cast<cdouble>() * x + sys.D_p.cast<cdouble>() * s;
    Matrix cd(sys.n_p(), sys.n() + sys.n_a());
    cd << sys.C_p, sys.D_p;
    const double scale = std::sqrt(x.squaredNorm() + s.squaredNorm()) * std::max(cd.norm(), 1e-300);
    return yp.norm() <= share_tol * scale;
}

}  // namespace

BoundednessReport classify_boundedness(const ClosedLoopSystem& sys, const ZeroTolerances& tol) {
    sys.validate();
    BoundednessReport rep;
    rep.tolerances = tol;
    if (sys.n_a() == 0) return rep;

    const StateSpace residual = sys.residual();
    if (pencil_rank_deficient(residual, tol)) {
        rep.rank_deficient_everywhere = true;
        // every z carries a blocking direction; sample the circle away from poles
        bool all_shared = true;
        for (double theta : {0.0, 0.7391, 1.9, 2.61, 3.14159265358979}) {
            const cdouble z = std::polar(1.0, theta);
            const NullSpace ns = pencil_null_space(residual, z, tol.null);
            for (Eigen::Index k = 0; k < ns.basis.cols(); ++k) {
                const CVector v = ns.basis.col(k);
                const CVector s = v.tail(sys.n_a());
                if (s.norm() <= 1e-8) continue;
                ZeroRecord rec;
                rec.z = z;
                rec.direction = s / s.norm();
                rec.state_direction = v.head(sys.n()) / s.norm();
                rec.on_unit_circle = true;
                rec.shared_with_performance =
                    annihilated_by_performance(sys, rec.state_direction, rec.direction, tol.share);
                if (!rec.shared_with_performance && all_shared) {
                    all_shared = false;
                    rep.witness = rec;
                }
                rep.circle_zeros.push_back(std::move(rec));
            }
        }
        rep.kind = all_shared ? BoundednessClass::bounded_condition_2 : BoundednessClass::unbounded;
        return rep;
    }

    for (auto& rec : transmission_zeros(residual, tol)) {
        if (!rec.on_unit_circle) continue;
        rec.shared_with_performance = annihilated_by_performance(sys, rec.state_direction, rec.direction, tol.share);
        rep.degraded = rep.degraded || rec.degraded;
        if (!rec.shared_with_performance && !rep.witness) rep.witness = rec;
        rep.circle_zeros.push_back(std::move(rec));
    }
    if (rep.witness) {
        rep.kind = BoundednessClass::unbounded;
    } else if (!rep.circle_zeros.empty()) {
        rep.kind = BoundednessClass::bounded_condition_2;
    } else {
        rep.kind = BoundednessClass::bounded_condition_1;
    }
    return rep;
}

std::size_t required_bounded_count(std::size_t n, double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("beta", "must lie in (0,1)");
    const double t = static_cast<double>(n) * (1.0 - beta);
    const double k = std::ceil(t - 1e-9 * std::max(1.0, t));
    return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

bool aggregate_boundedness(const std::vector<bool>& bounded, double beta) {
    if (bounded.empty()) throw ValidationError("statuses", "empty sample list");
    const auto count = static_cast<std::size_t>(std::count(bounded.begin(), bounded.end(), true));
    return count >= required_bounded_count(bounded.size(), beta);
}

}  // namespace oogrisk
