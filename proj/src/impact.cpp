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

#include "oogrisk/impact.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "oogrisk/error.hpp"

namespace oogrisk {

const char* to_string(ImpactStatus status) noexcept {
    switch (status) {
        case ImpactStatus::bounded: return "bounded";
        case ImpactStatus::unbounded: return "unbounded";
        case ImpactStatus::numerical_failure: return "numerical_failure";
    }
    return "?";
}

void SolverConfig::validate() const {
    if (!(sdp.gap_tol > 0.0) || !(sdp.feasibility_tol > 0.0) || !(sdp.infeasibility_tol > 0.0)) {
        throw ValidationError("solver", "tolerances must be positive");
    }
    if (!(psd_tol > 0.0)) throw ValidationError("solver.psd_tol", "must be positive");
    if (!(gamma_max > 0.0) || !std::isfinite(gamma_max)) throw ValidationError("solver.gamma_max", "must be positive");
    if (fdi_grid < 1) throw ValidationError("solver.fdi_grid", "must be at least 1");
    if (sdp.max_iterations < 1) throw ValidationError("solver.max_iterations", "must be at least 1");
}

namespace {

struct LmiData {
    Matrix AB;   // [A B]
    Matrix E;    // [I 0]
    Matrix Q;    // [C_p D_p]'[C_p D_p]
    Matrix R;    // [C_r D_r]'[C_r D_r]
};

LmiData lmi_data(const ClosedLoopSystem& sys) {
    const auto n = sys.n();
    const auto na = sys.n_a();
    LmiData d;
    d.AB.resize(n, n + na);
    d.AB << sys.A, sys.B;
    d.E = Matrix::Zero(n, n + na);
    d.E.leftCols(n).setIdentity();
    Matrix perf(sys.n_p(), n + na);
    perf << sys.C_p, sys.D_p;
    Matrix res(sys.n_r(), n + na);
    res << sys.C_r, sys.D_r;
    d.Q = perf.transpose() * perf;
    d.R = res.transpose() * res;
    return d;
}

/// A'PA - P style term for a symmetric P, lifted to (n + n_a).
Matrix dissipation_term(const LmiData& d, const Matrix& P) {
    return d.AB.transpose() * P * d.AB - d.E.transpose() * P * d.E;
}

/// Symmetric basis E_k over the upper triangle, in row-major order.
std::vector<Matrix> symmetric_basis(Eigen::Index n) {
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            Matrix e = Matrix::Zero(n, n);
            e(i, j) = 1.0;
            e(j, i) = 1.0;
            out.push_back(std::move(e));
        }
    }
    return out;
}

Matrix unpack_symmetric(const Vector& y, Eigen::Index offset, Eigen::Index n) {
    Matrix P(n, n);
    Eigen::Index k = offset;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            P(i, j) = y(k);
            P(j, i) = y(k);
            ++k;
        }
    }
    return P;
}

double data_scale(const LmiData& d, double gamma) {
    const double rnorm = d.R.size() ? d.R.norm() : 0.0;
    const double qnorm = d.Q.size() ? d.Q.norm() : 0.0;
    return 1.0 + qnorm + (std::isfinite(gamma) ? gamma * rnorm : 0.0);
}

/// minimize gamma s.t. -M(gamma, P) >= 0, 0 <= gamma <= gamma_max.
sdp::LmiProblem oog_program(const LmiData& d, Eigen::Index n, double gamma_max) {
    const auto basis = symmetric_basis(n);
    const auto big = d.Q.rows();
    sdp::LmiProblem p;
    p.block_sizes = {big, 1, 1};
    const auto vars = static_cast<Eigen::Index>(1 + basis.size());
    p.c = Vector::Zero(vars);
    p.c(0) = 1.0;
    p.F0 = {-d.Q, Matrix::Zero(1, 1), Matrix::Ones(1, 1)};
    p.F.reserve(static_cast<std::size_t>(vars));
    p.F.push_back({d.R, Matrix::Ones(1, 1), Matrix::Constant(1, 1, -1.0 / gamma_max)});
    for (const auto& e : basis) {
        p.F.push_back({-dissipation_term(d, e), Matrix::Zero(1, 1), Matrix::Zero(1, 1)});
    }
    return p;
}

/// minimize t s.t. t I - M(gamma, P) >= 0, t >= -1: feasibility margin at fixed gamma.
sdp::LmiProblem margin_program(const LmiData& d, Eigen::Index n, double gamma) {
    const auto basis = symmetric_basis(n);
    const auto big = d.Q.rows();
    const double scale = data_scale(d, gamma);
    sdp::LmiProblem p;
    p.block_sizes = {big, 1};
    const auto vars = static_cast<Eigen::Index>(1 + basis.size());
    p.c = Vector::Zero(vars);
    p.c(0) = 1.0;
    p.F0 = {(gamma * d.R - d.Q) / scale, Matrix::Ones(1, 1)};
    p.F.push_back({Matrix::Identity(big, big), Matrix::Ones(1, 1)});
    for (const auto& e : basis) {
        p.F.push_back({-dissipation_term(d, e) / scale, Matrix::Zero(1, 1)});
    }
    return p;
}

struct SdpOutcome {
    sdp::Result result;
    double gamma = std::numeric_limits<double>::infinity();
    Matrix P;
    bool infeasible_to_bracket = false;
};

/// Largest generalized eigenvalue of (G_p^H G_p, G_r^H G_r) over a coarse grid on |z| = 1.
/// Only used to scale the SDP; returns 0 when the grid cannot be evaluated.
double gain_estimate(const ClosedLoopSystem& sys, int grid) {
    double best = 0.0;
    try {
        for (int k = 0; k < grid; ++k) {
            const auto z = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / grid);
            const CMatrix gp = transfer_eval(sys, z, OutputChannel::performance);
            const CMatrix gr = transfer_eval(sys, z, OutputChannel::residual);
            CMatrix a = gp.adjoint() * gp;
            CMatrix b = gr.adjoint() * gr;
            const double floor = 1e-12 * (1.0 + b.norm() + a.norm());
            b += floor * CMatrix::Identity(b.rows(), b.cols());
            Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()), 0.5 * (b + b.adjoint()),
                                                                 Eigen::EigenvaluesOnly);
            if (es.info() != Eigen::Success) return 0.0;
            best = std::max(best, es.eigenvalues().maxCoeff());
        }
    } catch (const DomainError&) {
        return 0.0;
    }
    return std::isfinite(best) ? best : 0.0;
}

SdpOutcome joint_solve(const LmiData& d, Eigen::Index n, const SolverConfig& cfg, double estimate) {
    SdpOutcome out;
    // solve with |Q| = 1 and gamma' = gamma / ratio near 1; P rescales by |Q|
    const double qn = d.Q.norm() > 0.0 ? d.Q.norm() : 1.0;
    const double rn = d.R.norm() > 0.0 ? d.R.norm() : 1.0;
    const double ratio = estimate > 1e-12 * qn / rn && estimate < 1e-2 * cfg.gamma_max ? estimate : qn / rn;
    LmiData scaled = d;
    scaled.Q /= qn;
    scaled.R *= ratio / qn;
    const auto prog = oog_program(scaled, n, cfg.gamma_max / ratio);
    out.result = sdp::solve(prog, cfg.sdp);
    if (out.result.status == sdp::Status::infeasible) {
        out.infeasible_to_bracket = true;
        return out;
    }
    if (out.result.status == sdp::Status::optimal) {
        out.gamma = std::max(0.0, out.result.y(0)) * ratio;
        out.P = unpack_symmetric(out.result.y, 1, n) * qn;
        if (out.gamma >= (1.0 - 1e-6) * cfg.gamma_max) out.infeasible_to_bracket = true;
    }
    return out;
}

SdpOutcome bisection_solve(const LmiData& d, Eigen::Index n, const SolverConfig& cfg) {
    SdpOutcome out;
    auto feasible = [&](double gamma, Matrix* P) {
        const auto prog = margin_program(d, n, gamma);
        auto r = sdp::solve(prog, cfg.sdp);
        out.result = r;
        if (r.status != sdp::Status::optimal) return false;
        if (P) *P = unpack_symmetric(r.y, 1, n);
        return r.y(0) <= 0.0;
    };
    Matrix P;
    double hi = 1.0;
    while (!feasible(hi, &P)) {
        if (hi >= cfg.gamma_max) {
            out.infeasible_to_bracket = true;
            return out;
        }
        hi = std::min(hi * 4.0, cfg.gamma_max);
    }
    double lo = 0.0;
    Matrix best = P;
    if (feasible(0.0, &P)) {
        hi = 0.0;
        best = P;
    }
    while (hi - lo > cfg.bisection_rel_tol * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid, &P)) {
            hi = mid;
            best = P;
        } else {
            lo = mid;
        }
    }
    out.result.status = sdp::Status::optimal;
    out.gamma = hi;
    out.P = best;
    return out;
}

}  // namespace

Matrix build_lmi(const ClosedLoopSystem& sys, double gamma, const Matrix& P) {
    sys.validate();
    if (P.rows() != sys.n() || P.cols() != sys.n()) {
        throw ValidationError("P", "expected " + std::to_string(sys.n()) + "x" + std::to_string(sys.n()));
    }
    const LmiData d = lmi_data(sys);
    return dissipation_term(d, P) + d.Q - gamma * d.R;
}

ImpactResult solve_oog(const ClosedLoopSystem& sys, const SolverConfig& cfg) {
    sys.validate();
    cfg.validate();
    ImpactResult res;
    if (sys.n_a() == 0) {
        res.status = ImpactStatus::bounded;
        res.gamma = 0.0;
        res.P = Matrix::Zero(sys.n(), sys.n());
        res.stats.sdp_status = sdp::Status::optimal;
        res.diagnostics = "no attacked channels";
        return res;
    }

    res.boundedness = classify_boundedness(sys, cfg.zero_tolerances);
    const LmiData d = lmi_data(sys);
    SdpOutcome sdp_out = cfg.bisection ? bisection_solve(d, sys.n(), cfg)
                                       : joint_solve(d, sys.n(), cfg, gain_estimate(sys, 64));
    bool fell_back = false;
    if (!cfg.bisection && !sdp_out.infeasible_to_bracket && sdp_out.result.status != sdp::Status::optimal) {
        sdp_out = bisection_solve(d, sys.n(), cfg);
        fell_back = true;
    }

    res.stats.sdp_status = sdp_out.result.status;
    res.stats.inaccurate = sdp_out.result.inaccurate;
    res.stats.infeasible_to_bracket = sdp_out.infeasible_to_bracket;
    res.stats.iterations = sdp_out.result.iterations;
    res.stats.relative_gap = sdp_out.result.relative_gap;
    res.stats.primal_residual = sdp_out.result.primal_residual;
    res.stats.dual_residual = sdp_out.result.dual_residual;

    std::ostringstream diag;
    diag << "sdp=" << sdp::to_string(sdp_out.result.status) << " zeros=" << to_string(res.boundedness.kind);
    if (res.boundedness.degraded) diag << " (degraded zero confidence)";
    if (fell_back) diag << " (joint program stalled, used bisection)";

    const bool zeros_unbounded = !res.boundedness.bounded();
    if (sdp_out.infeasible_to_bracket) {
        if (zeros_unbounded) {
            res.status = ImpactStatus::unbounded;
            res.gamma = std::numeric_limits<double>::infinity();
        } else {
            res.status = ImpactStatus::numerical_failure;
            diag << "; SDP infeasible up to gamma_max but no blocking unit-circle zero found";
        }
        res.diagnostics = diag.str();
        return res;
    }
    if (sdp_out.result.status != sdp::Status::optimal) {
        res.status = ImpactStatus::numerical_failure;
        diag << "; solver did not converge";
        res.diagnostics = diag.str();
        return res;
    }
    if (zeros_unbounded) {
        res.status = ImpactStatus::numerical_failure;
        res.gamma = sdp_out.gamma;
        diag << "; SDP returned gamma=" << sdp_out.gamma << " but a unit-circle zero is not shared";
        res.diagnostics = diag.str();
        return res;
    }

    const Matrix M = build_lmi(sys, sdp_out.gamma, sdp_out.P);
    res.stats.certificate_max_eigenvalue = sdp::max_eigenvalue(0.5 * (M + M.transpose()));
    const double scale = data_scale(d, sdp_out.gamma);
    if (res.stats.certificate_max_eigenvalue > 10.0 * cfg.psd_tol * scale) {
        res.status = ImpactStatus::numerical_failure;
        res.gamma = sdp_out.gamma;
        diag << "; certificate violates M <= 0 by " << res.stats.certificate_max_eigenvalue;
        res.diagnostics = diag.str();
        return res;
    }
    res.status = ImpactStatus::bounded;
    res.gamma = sdp_out.gamma;
    res.P = sdp_out.P;
    res.diagnostics = diag.str();
    return res;
}

FdiResult fdi_sweep(const ClosedLoopSystem& sys, double gamma, int grid_size) {
    sys.validate();
    if (!(gamma >= 0.0)) throw ValidationError("gamma", "must be nonnegative");
    if (grid_size < 1) throw ValidationError("grid_size", "must be at least 1");
    FdiResult out;
    if (sys.n() > 0) {
        Eigen::EigenSolver<Matrix> es(sys.A, false);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (std::abs(std::abs(es.eigenvalues()(i)) - 1.0) <= 1e-9) {
                out.applicable = false;
                return out;
            }
        }
    }
    if (sys.n_a() == 0) return out;

    const double step = 2.0 * std::numbers::pi / grid_size;
    out.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid_size; ++k) {
        double theta = step * k;
        CMatrix gp, gr;
        try {
            gp = transfer_eval(sys, std::polar(1.0, theta), OutputChannel::performance);
            gr = transfer_eval(sys, std::polar(1.0, theta), OutputChannel::residual);
        } catch (const DomainError&) {
            theta += 0.5 * step;
            gp = transfer_eval(sys, std::polar(1.0, theta), OutputChannel::performance);
            gr = transfer_eval(sys, std::polar(1.0, theta), OutputChannel::residual);
        }
        CMatrix H = gamma * gr.adjoint() * gr - gp.adjoint() * gp;
        H = 0.5 * (H + H.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues()(0);
        if (lmin < out.min_eigenvalue) {
            out.min_eigenvalue = lmin;
            out.theta = theta;
        }
    }
    return out;
}

}  // namespace oogrisk
