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

#include "oogrisk/uncertainty.hpp"

#include <cmath>
#include <numeric>

#include "oogrisk/error.hpp"

namespace oogrisk {

const char* to_string(PlantBlock block) noexcept {
    switch (block) {
        case PlantBlock::A: return "A";
        case PlantBlock::B: return "B";
        case PlantBlock::C: return "C";
        case PlantBlock::C_J: return "C_J";
        case PlantBlock::D_J: return "D_J";
    }
    return "?";
}

PlantBlock plant_block_from_string(const std::string& text) {
    for (auto b : {PlantBlock::A, PlantBlock::B, PlantBlock::C, PlantBlock::C_J, PlantBlock::D_J}) {
        if (text == to_string(b)) return b;
    }
    throw ValidationError("uncertainty.perturbations.block", "unknown plant block '" + text + "'");
}

namespace {

const Matrix& block_of(const PlantModel& plant, PlantBlock block) {
    switch (block) {
        case PlantBlock::A: return plant.A;
        case PlantBlock::B: return plant.B;
        case PlantBlock::C: return plant.C;
        case PlantBlock::C_J: return plant.C_J;
        case PlantBlock::D_J: return plant.D_J;
    }
    return plant.A;
}

Matrix& block_of(PlantModel& plant, PlantBlock block) {
    return const_cast<Matrix&>(block_of(std::as_const(plant), block));
}

bool probability(double p) { return p > 0.0 && p < 1.0; }

}  // namespace

bool UncertaintySpec::contains(const Vector& delta, double tol) const {
    if (static_cast<std::size_t>(delta.size()) != box.size()) return false;
    for (std::size_t j = 0; j < box.size(); ++j) {
        const double d = delta(static_cast<Eigen::Index>(j));
        if (!(d >= box[j].lo - tol && d <= box[j].hi + tol)) return false;
    }
    return true;
}

void UncertaintySpec::validate(const PlantModel& plant) const {
    for (std::size_t j = 0; j < box.size(); ++j) {
        const auto& iv = box[j];
        const std::string where = "uncertainty.box[" + std::to_string(j) + "]";
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) throw ValidationError(where, "endpoints must be finite");
        if (iv.lo > iv.hi) throw ValidationError(where, "lower endpoint exceeds upper endpoint");
        if (iv.lo > 0.0 || iv.hi < 0.0) throw ValidationError(where, "interval must contain 0");
    }
    for (std::size_t k = 0; k < perturbations.size(); ++k) {
        const auto& p = perturbations[k];
        const std::string where = "uncertainty.perturbations[" + std::to_string(k) + "]";
        if (p.parameter < 0 || static_cast<std::size_t>(p.parameter) >= box.size()) {
            throw ValidationError(where, "parameter index out of range");
        }
        const Matrix& target = block_of(plant, p.block);
        if (p.coefficient.rows() != target.rows() || p.coefficient.cols() != target.cols()) {
            throw ValidationError(where, std::string("coefficient does not match the shape of block ") +
                                             to_string(p.block));
        }
    }
}

void ScenarioConfig::validate() const {
    if (!probability(epsilon1)) throw ValidationError("epsilon1", "must lie in (0,1)");
    if (!probability(beta1)) throw ValidationError("beta1", "must lie in (0,1)");
    if (!probability(beta)) throw ValidationError("beta", "must lie in (0,1)");
    if (n_override && *n_override == 0) throw ValidationError("samples", "must be at least 1");
    for (const auto& w : distribution.weights) {
        if (w.empty()) throw ValidationError("distribution.weights", "empty weight list");
        double total = 0.0;
        for (double x : w) {
            if (!(x >= 0.0) || !std::isfinite(x)) throw ValidationError("distribution.weights", "weights must be >= 0");
            total += x;
        }
        if (!(total > 0.0)) throw ValidationError("distribution.weights", "weights must not all be zero");
    }
}

std::size_t ScenarioConfig::sample_count() const {
    return n_override ? *n_override : required_sample_count(epsilon1, beta1);
}

std::size_t required_sample_count(double epsilon1, double beta1) {
    if (!probability(epsilon1)) throw ValidationError("epsilon1", "must lie in (0,1)");
    if (!probability(beta1)) throw ValidationError("beta1", "must lie in (0,1)");
    const double n = std::log(2.0 / beta1) / (2.0 * epsilon1 * epsilon1);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(n)));
}

std::vector<Vector> sample(const UncertaintySpec& spec, std::size_t count, Rng& rng, const Distribution& distribution) {
    const auto dim = spec.dim();
    if (!distribution.weights.empty() && distribution.weights.size() != dim) {
        throw ValidationError("distribution.weights", "need one weight list per parameter");
    }
    std::vector<std::piecewise_constant_distribution<double>> weighted;
    for (std::size_t j = 0; j < distribution.weights.size(); ++j) {
        const auto& w = distribution.weights[j];
        const auto& iv = spec.box[j];
        std::vector<double> edges(w.size() + 1);
        for (std::size_t b = 0; b <= w.size(); ++b) {
            edges[b] = iv.lo + (iv.hi - iv.lo) * static_cast<double>(b) / static_cast<double>(w.size());
        }
        weighted.emplace_back(edges.begin(), edges.end(), w.begin());
    }

    std::vector<Vector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vector d(static_cast<Eigen::Index>(dim));
        for (std::size_t j = 0; j < dim; ++j) {
            const auto& iv = spec.box[j];
            double v = 0.0;
            if (iv.hi == iv.lo) {
                v = iv.lo;
            } else if (!weighted.empty()) {
                v = weighted[j](rng);
            } else {
                v = iv.lo + (iv.hi - iv.lo) * std::generate_canonical<double, 53>(rng);
            }
            d(static_cast<Eigen::Index>(j)) = v;
        }
        out.push_back(std::move(d));
    }
    return out;
}

PlantModel realize(const UncertaintySpec& spec, const PlantModel& plant, const Vector& delta) {
    if (static_cast<std::size_t>(delta.size()) != spec.dim()) {
        throw DomainError("delta", "expected " + std::to_string(spec.dim()) + " parameters, got " +
                                       std::to_string(delta.size()));
    }
    if (!spec.contains(delta)) throw DomainError("delta", "realization lies outside the uncertainty box");
    spec.validate(plant);
    PlantModel out = plant;
    for (const auto& p : spec.perturbations) {
        block_of(out, p.block) += delta(p.parameter) * p.coefficient;
    }
    return out;
}

}  // namespace oogrisk
