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

#ifndef OOGRISK_UNCERTAINTY_HPP
#define OOGRISK_UNCERTAINTY_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oogrisk/model.hpp"

namespace oogrisk {

enum class PlantBlock { A, B, C, C_J, D_J };

const char* to_string(PlantBlock block) noexcept;
PlantBlock plant_block_from_string(const std::string& text);

/// Contribution delta_j * coefficient to one plant block.
struct Perturbation {
    PlantBlock block = PlantBlock::A;
    int parameter = 0;
    Matrix coefficient;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/**
 * @brief Box-shaped parameter set with an affine perturbation map.
 *
 * Each plant block X is realized as X + sum_j delta_j M_j over the
 * perturbations that target it. The box must contain the origin so that the
 * nominal plant is a member of the family.
 */
struct UncertaintySpec {
    std::vector<Interval> box;
    std::vector<Perturbation> perturbations;

    [[nodiscard]] std::size_t dim() const { return box.size(); }
    [[nodiscard]] bool contains(const Vector& delta, double tol = 0.0) const;

    void validate(const PlantModel& plant) const;

    /// No parameters, no perturbations: the nominal plant only.
    static UncertaintySpec none() { return {}; }
};

/**
 * @brief Sampling distribution over the box.
 *
 * Empty `weights` means uniform on every interval. Otherwise weights[j] holds
 * the relative mass of equal-width bins partitioning [lo_j, hi_j]; each
 * parameter is drawn independently.
 */
struct Distribution {
    std::vector<std::vector<double>> weights;
};

struct ScenarioConfig {
    double epsilon1 = 0.05;
    double beta1 = 0.1;
    double beta = 0.1;
    std::optional<std::size_t> n_override;
    std::uint64_t seed = 0;
    Distribution distribution;

    void validate() const;
    /// n_override when present, otherwise the Hoeffding count.
    [[nodiscard]] std::size_t sample_count() const;
};

/// Smallest N with N >= ln(2/beta1) / (2 epsilon1^2).
std::size_t required_sample_count(double epsilon1, double beta1);

using Rng = std::mt19937_64;

/// i.i.d. draws over the box. Deterministic for a given generator state.
std::vector<Vector> sample(const UncertaintySpec& spec, std::size_t count, Rng& rng,
                           const Distribution& distribution = {});

/// Perturbed plant for one realization. Throws DomainError outside the box.
PlantModel realize(const UncertaintySpec& spec, const PlantModel& plant, const Vector& delta);

}  // namespace oogrisk

#endif  // OOGRISK_UNCERTAINTY_HPP
