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

#include "oogrisk/error.hpp"
#include "oogrisk/sdp.hpp"

using namespace oogrisk;

namespace {

sdp::LmiProblem single_block(Eigen::Index size, Vector c, Matrix F0, std::vector<Matrix> F) {
    sdp::LmiProblem p;
    p.block_sizes = {size};
    p.c = std::move(c);
    p.F0 = {std::move(F0)};
    for (auto& f : F) p.F.push_back({std::move(f)});
    return p;
}

}  // namespace

TEST_CASE("2x2 LMI: min t with [[t, 1], [1, 1]] >= 0") {
    const auto p = single_block(2, Vector::Ones(1), Matrix{{0.0, 1.0}, {1.0, 1.0}}, {Matrix{{1.0, 0.0}, {0.0, 0.0}}});
    const sdp::Result r = sdp::solve(p);
    REQUIRE(r.status == sdp::Status::optimal);
    CHECK(r.y(0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.dual_objective == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sdp::min_eigenvalue(sdp::evaluate(p, r.y)) >= -1e-7);
}

TEST_CASE("diagonal blocks act as linear inequalities") {
    sdp::LmiProblem p;
    p.block_sizes = {1, 1};
    p.c = Vector::Ones(2);
    p.F0 = {Matrix{{-1.0}}, Matrix{{-2.0}}};
    p.F = {{Matrix{{1.0}}, Matrix{{0.0}}}, {Matrix{{0.0}}, Matrix{{1.0}}}};
    const sdp::Result r = sdp::solve(p);
    REQUIRE(r.status == sdp::Status::optimal);
    CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(r.y(0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.y(1) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("largest eigenvalue as an SDP") {
    // min t s.t. t I - S >= 0 gives lambda_max(S)
    const Matrix S{{2.0, 1.0, 0.0}, {1.0, 3.0, -1.0}, {0.0, -1.0, 0.5}};
    const auto p = single_block(3, Vector::Ones(1), -S, {Matrix::Identity(3, 3)});
    const sdp::Result r = sdp::solve(p);
    REQUIRE(r.status == sdp::Status::optimal);
    CHECK(r.y(0) == doctest::Approx(sdp::max_eigenvalue(S)).epsilon(1e-7));
}

TEST_CASE("infeasible program returns a certificate") {
    // F(y) = [[-1, 0], [0, y]] can never be PSD
    const auto p = single_block(2, Vector::Ones(1), Matrix{{-1.0, 0.0}, {0.0, 0.0}}, {Matrix{{0.0, 0.0}, {0.0, 1.0}}});
    const sdp::Result r = sdp::solve(p);
    REQUIRE(r.status == sdp::Status::infeasible);
    REQUIRE_FALSE(r.certificate.empty());
    CHECK(sdp::min_eigenvalue(r.certificate) >= -1e-9);
    CHECK(sdp::inner(p.F0, r.certificate) == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::abs(sdp::inner(p.F[0], r.certificate)) <= 1e-6);
}

TEST_CASE("unbounded objective") {
    // min y s.t. -y >= 0
    const auto p = single_block(1, Vector::Ones(1), Matrix{{0.0}}, {Matrix{{-1.0}}});
    CHECK(sdp::solve(p).status == sdp::Status::unbounded);
}

TEST_CASE("problem validation") {
    auto p = single_block(2, Vector::Ones(1), Matrix::Zero(2, 2), {Matrix::Zero(3, 3)});
    CHECK_THROWS_AS(p.validate(), ValidationError);
    auto q = single_block(2, Vector::Ones(2), Matrix::Zero(2, 2), {Matrix::Zero(2, 2)});
    CHECK_THROWS_AS(q.validate(), ValidationError);
}
