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

#ifndef OOGRISK_RISK_HPP
#define OOGRISK_RISK_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oogrisk/impact.hpp"
#include "oogrisk/model.hpp"
#include "oogrisk/uncertainty.hpp"

namespace oogrisk {

/**
 * @brief Empirical value-at-risk: the k-th smallest entry with k = ceil(N (1 - beta)).
 *
 * Infinite entries stand for unbounded realizations, so the result is +inf
 * exactly when fewer than k entries are finite.
 */
double empirical_var(std::vector<double> gammas, double beta);

struct SampleRecord {
    std::size_t index = 0;
    Vector delta;
    double gamma = 0.0;  ///< impact at the configured residual threshold; +inf when unbounded
    ImpactStatus status = ImpactStatus::numerical_failure;
    std::string diagnostics;
};

struct RiskReport {
    double var_value = 0.0;
    double beta = 0.1;
    double epsilon1 = 0.05;
    double beta1 = 0.1;
    std::size_t n1 = 0;  ///< samples drawn
    std::vector<SampleRecord> samples;
    std::size_t bounded_count = 0;
    std::size_t failure_count = 0;  ///< numerical failures, excluded from the quantile
    std::uint64_t seed = 0;
    double residual_threshold = 1.0;
    double elapsed_seconds = 0.0;
    std::vector<std::string> warnings;

    /// Impacts of the samples that entered the quantile, in sample order.
    [[nodiscard]] std::vector<double> gammas() const;
};

struct RiskOptions {
    /// Largest tolerated share of numerical failures before the assessment aborts.
    double failure_budget = 0.02;
    /// Worker threads for the per-sample solves; 0 uses the hardware concurrency.
    unsigned workers = 0;

    void validate() const;
};

/// Draws the scenario set for a configuration (sample_count() draws from `cfg.seed`).
std::vector<Vector> draw_scenarios(const UncertaintySpec& spec, const ScenarioConfig& cfg);

/// Risk over a fixed scenario set. Throws SolverError when failures exceed the budget.
RiskReport assess_risk_on(const SystemModel& model, const UncertaintySpec& spec, const std::vector<Vector>& deltas,
                          const ScenarioConfig& cfg, const SolverConfig& solver = {}, const RiskOptions& options = {});

/// Draws the scenarios, solves every realization and takes the empirical quantile.
RiskReport assess_risk(const SystemModel& model, const UncertaintySpec& spec, const ScenarioConfig& cfg,
                       const SolverConfig& solver = {}, const RiskOptions& options = {});

/// 0.01, 0.02, ..., 0.99.
std::vector<double> default_beta_grid();

/// empirical_var of one report's samples at every grid level.
std::vector<std::pair<double, double>> var_curve(const RiskReport& report, const std::vector<double>& beta_grid);

}  // namespace oogrisk

#endif  // OOGRISK_RISK_HPP
