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

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "oogrisk/error.hpp"
#include "oogrisk/impact.hpp"
#include "oogrisk/io.hpp"
#include "oogrisk/oracle.hpp"

#include "../support/systems.hpp"

using namespace oogrisk;
using oogrisk::testing::make_system;
using oogrisk::testing::scalar;

namespace {

double independent_max_eig(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

ClosedLoopSystem drop_input(const ClosedLoopSystem& s, Eigen::Index col) {
    auto drop = [col](const Matrix& m) {
        Matrix out(m.rows(), m.cols() - 1);
        out << m.leftCols(col), m.rightCols(m.cols() - col - 1);
        return out;
    };
    return make_system(s.A, drop(s.B), s.C_p, drop(s.D_p), s.C_r, drop(s.D_r));
}

}  // namespace

TEST_CASE("dissipation matrix") {
    const ClosedLoopSystem s = testing::scalar_four();
    const Matrix M0 = build_lmi(s, 0.0, Matrix::Zero(1, 1));
    CHECK(M0 == Matrix{{1.0, 0.0}, {0.0, 0.0}});

    for (double p : {-2.0, 0.3, 5.0}) {
        for (double g : {0.0, 1.5, 4.0}) {
            const Matrix M = build_lmi(s, g, scalar(p));
            const Matrix hand{{0.25 * p - p + 1.0, 0.5 * p}, {0.5 * p, p - g}};
            CHECK((M - hand).norm() <= 1e-14);
        }
    }

    std::mt19937_64 rng(1);
    const ClosedLoopSystem r = testing::random_stable(rng);
    Matrix P1 = testing::random_matrix(rng, r.n(), r.n());
    Matrix P2 = testing::random_matrix(rng, r.n(), r.n());
    P1 = P1 + P1.transpose();
    P2 = P2 + P2.transpose();
    const Matrix lhs = build_lmi(r, 2.0, P1 + P2) + build_lmi(r, 2.0, Matrix::Zero(r.n(), r.n()));
    const Matrix rhs = build_lmi(r, 2.0, P1) + build_lmi(r, 2.0, P2);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
}

TEST_CASE("identical outputs give gain one") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5; ++i) {
        ClosedLoopSystem s = testing::random_stable(rng);
        s.C_p = s.C_r;
        s.D_p = s.D_r;
        const ImpactResult r = solve_oog(s);
        REQUIRE(r.bounded());
        CHECK(r.gamma == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(fdi_sweep(s, 1.0).min_eigenvalue == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    }
}

TEST_CASE("scalar system gain is four") {
    const ClosedLoopSystem s = testing::scalar_four();
    const ImpactResult r = solve_oog(s);
    REQUIRE(r.bounded());
    CHECK(r.gamma == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(independent_max_eig(build_lmi(s, r.gamma, r.P)) <= 1e-6);

    // H(e^{j t}, 4) = 4 - 1 / |e^{j t} - 0.5|^2 vanishes at t = 0
    const FdiResult at = fdi_sweep(s, 4.0);
    CHECK(at.min_eigenvalue >= -1e-6);
    CHECK(std::min(at.theta, 2.0 * std::numbers::pi - at.theta) < 0.01);
    CHECK(fdi_sweep(s, 3.9).min_eigenvalue < 0.0);

    SolverConfig bis;
    bis.bisection = true;
    const ImpactResult rb = solve_oog(s, bis);
    REQUIRE(rb.bounded());
    CHECK(rb.gamma == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("residual zero on the unit circle makes the gain unbounded") {
    const ImpactResult r = solve_oog(testing::circle_zero());
    CHECK(r.status == ImpactStatus::unbounded);
    CHECK(std::isinf(r.gamma));
    CHECK(r.P.size() == 0);
    CHECK_FALSE(r.boundedness.bounded());
}

TEST_CASE("no attacked channel gives zero impact") {
    ClosedLoopSystem s = testing::scalar_four();
    s.B = Matrix::Zero(1, 0);
    s.D_p = Matrix::Zero(1, 0);
    s.D_r = Matrix::Zero(1, 0);
    const ImpactResult r = solve_oog(s);
    CHECK(r.bounded());
    CHECK(r.gamma == 0.0);
}

TEST_CASE("shipped example at the nominal realization") {
    const auto doc = io::load_model(testing::models_dir() / "example_loop.json");
    const ClosedLoopSystem s = assemble_closed_loop(doc.system, Vector::Zero(1));
    const ImpactResult r = solve_oog(s);
    REQUIRE(r.bounded());
    // value computed independently with a general-purpose conic solver
    CHECK(r.gamma == doctest::Approx(208.8644).epsilon(1e-5));
    CHECK(r.boundedness.kind == BoundednessClass::bounded_condition_1);
    CHECK(fdi_sweep(s, r.gamma).min_eigenvalue >= -1e-6);
    CHECK(fdi_sweep(s, 0.99 * r.gamma).min_eigenvalue < 0.0);
    OracleOptions opt;
    opt.T = 200;
    opt.N = 800;
    const OracleResult o = finite_horizon_oog(s, opt);
    REQUIRE(o.status == OracleStatus::bounded);
    CHECK(o.bound <= r.gamma * (1.0 + 1e-7));
    CHECK(o.bound >= 0.99 * r.gamma);
}

TEST_CASE("scaling laws and channel monotonicity") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 6; ++i) {
        const ClosedLoopSystem s = testing::random_stable(rng);
        const ImpactResult base = solve_oog(s);
        REQUIRE(base.bounded());
        for (double alpha : {0.5, 3.0}) {
            ClosedLoopSystem p = s;
            p.C_p *= alpha;
            p.D_p *= alpha;
            const ImpactResult rp = solve_oog(p);
            REQUIRE(rp.bounded());
            CHECK(rp.gamma == doctest::Approx(alpha * alpha * base.gamma).epsilon(1e-6));

            ClosedLoopSystem q = s;
            q.C_r *= alpha;
            q.D_r *= alpha;
            const ImpactResult rq = solve_oog(q);
            REQUIRE(rq.bounded());
            CHECK(rq.gamma == doctest::Approx(base.gamma / (alpha * alpha)).epsilon(1e-6));
        }
        if (s.n_a() > 1) {
            for (Eigen::Index c = 0; c < s.n_a(); ++c) {
                const ImpactResult rd = solve_oog(drop_input(s, c));
                REQUIRE(rd.bounded());
                CHECK(rd.gamma <= base.gamma * (1.0 + 1e-6));
            }
        }
    }
}

TEST_CASE("solver configuration validation") {
    SolverConfig cfg;
    cfg.psd_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    SolverConfig grid;
    grid.fdi_grid = 0;
    CHECK_THROWS_AS(grid.validate(), ValidationError);
}
