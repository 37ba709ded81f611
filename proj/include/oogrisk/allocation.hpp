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

#ifndef OOGRISK_ALLOCATION_HPP
#define OOGRISK_ALLOCATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "oogrisk/risk.hpp"

namespace oogrisk {

enum class AllocationMetric { var, nominal_impact };

const char* to_string(AllocationMetric metric) noexcept;
AllocationMetric allocation_metric_from_string(const std::string& text);

using ChannelSet = std::vector<int>;

struct AllocationProblem {
    ChannelSet vulnerabilities;  ///< zero-based channels of the model's attack mode
    int budget = 1;
    AllocationMetric metric = AllocationMetric::var;

    void validate(const AttackSelection& attack) const;
};

/// All subsets of `vulnerabilities` with at most `budget` members, by size and then lexicographically.
std::vector<ChannelSet> enumerate_protection_sets(const ChannelSet& vulnerabilities, int budget);

/// Removes the protected channels from the attack surface.
AttackSelection apply_protection(const AttackSelection& attack, const ChannelSet& protected_channels);

struct LedgerEntry {
    ChannelSet protected_channels;
    double value = 0.0;
    std::size_t bounded_count = 0;
    std::size_t failure_count = 0;
};

struct AllocationResult {
    ChannelSet best_set;
    double best_value = 0.0;
    AllocationMetric metric = AllocationMetric::var;
    std::vector<LedgerEntry> ledger;
    std::vector<std::string> warnings;
};

/// Value of one protection set under a metric. `deltas` is the frozen scenario set for the VaR metric.
LedgerEntry evaluate_protection(const SystemModel& model, const UncertaintySpec& spec,
                                const std::vector<Vector>& deltas, const ScenarioConfig& cfg,
                                const SolverConfig& solver, const RiskOptions& options,
                                const ChannelSet& protected_channels, AllocationMetric metric,
                                std::vector<std::string>* warnings = nullptr);

/**
 * @brief Exhaustive search over protection sets.
 *
 * Every set is scored on the same scenarios. Ties go to the earlier set in
 * enumeration order, i.e. the smaller and then lexicographically first one.
 */
AllocationResult solve_smap(const SystemModel& model, const UncertaintySpec& spec, const ScenarioConfig& cfg,
                            const AllocationProblem& problem, const SolverConfig& solver = {},
                            const RiskOptions& options = {});

struct MetricComparison {
    ChannelSet protected_channels;
    double var_value = 0.0;
    double nominal_value = 0.0;
};

/// VaR and nominal impact side by side for every protection set.
std::vector<MetricComparison> compare_metrics(const SystemModel& model, const UncertaintySpec& spec,
                                              const ScenarioConfig& cfg, const AllocationProblem& problem,
                                              const SolverConfig& solver = {}, const RiskOptions& options = {});

/// Labels such as "{S2,S3}" or "{}".
std::string set_label(const AttackSelection& attack, const ChannelSet& channels);

}  // namespace oogrisk

#endif  // OOGRISK_ALLOCATION_HPP
