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

#include "oogrisk/allocation.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "oogrisk/error.hpp"

namespace oogrisk {

const char* to_string(AllocationMetric metric) noexcept {
    switch (metric) {
        case AllocationMetric::var: return "var";
        case AllocationMetric::nominal_impact: return "nominal";
    }
    return "?";
}

AllocationMetric allocation_metric_from_string(const std::string& text) {
    if (text == "var") return AllocationMetric::var;
    if (text == "nominal" || text == "nominal_impact") return AllocationMetric::nominal_impact;
    throw ValidationError("metric", "unknown metric '" + text + "' (expected var or nominal)");
}

void AllocationProblem::validate(const AttackSelection& attack) const {
    if (vulnerabilities.empty()) throw ValidationError("vulnerabilities", "empty vulnerability set");
    std::set<int> seen;
    for (int ch : vulnerabilities) {
        if (!seen.insert(ch).second) throw ValidationError("vulnerabilities", "duplicate channel");
        const auto& chans = attack.channels();
        if (std::find(chans.begin(), chans.end(), ch) == chans.end()) {
            throw ValidationError("vulnerabilities", "channel " + std::to_string(ch) + " is not attacked in " +
                                                         to_string(attack.mode()) + " mode");
        }
    }
    if (budget < 0 || budget > static_cast<int>(vulnerabilities.size())) {
        throw ValidationError("budget", "must lie in [0, number of vulnerabilities]");
    }
}

std::vector<ChannelSet> enumerate_protection_sets(const ChannelSet& vulnerabilities, int budget) {
    const int n = static_cast<int>(vulnerabilities.size());
    if (budget < 0 || budget > n) throw ValidationError("budget", "must lie in [0, number of vulnerabilities]");
    std::vector<ChannelSet> out;
    for (int size = 0; size <= budget; ++size) {
        // positions of the chosen members, advanced in lexicographic order
        std::vector<int> pos(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) pos[static_cast<std::size_t>(i)] = i;
        for (;;) {
            ChannelSet s;
            for (int p : pos) s.push_back(vulnerabilities[static_cast<std::size_t>(p)]);
            out.push_back(std::move(s));
            int i = size - 1;
            while (i >= 0 && pos[static_cast<std::size_t>(i)] == n - size + i) --i;
            if (i < 0) break;
            ++pos[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

AttackSelection apply_protection(const AttackSelection& attack, const ChannelSet& protected_channels) {
    const auto& chans = attack.channels();
    for (int ch : protected_channels) {
        if (std::find(chans.begin(), chans.end(), ch) == chans.end()) {
            throw ValidationError("protect", "channel " + std::to_string(ch) + " is not an attacked " +
                                                 to_string(attack.mode()) + " channel");
        }
    }
    std::vector<int> keep;
    for (int ch : chans) {
        if (std::find(protected_channels.begin(), protected_channels.end(), ch) == protected_channels.end()) {
            keep.push_back(ch);
        }
    }
    return AttackSelection(attack.mode(), keep, attack.n_u(), attack.n_m());
}

LedgerEntry evaluate_protection(const SystemModel& model, const UncertaintySpec& spec,
                                const std::vector<Vector>& deltas, const ScenarioConfig& cfg,
                                const SolverConfig& solver, const RiskOptions& options,
                                const ChannelSet& protected_channels, AllocationMetric metric,
                                std::vector<std::string>* warnings) {
    SystemModel m = model;
    m.attack = apply_protection(model.attack, protected_channels);
    LedgerEntry e;
    e.protected_channels = protected_channels;
    if (metric == AllocationMetric::var) {
        const RiskReport rep = assess_risk_on(m, spec, deltas, cfg, solver, options);
        e.value = rep.var_value;
        e.bounded_count = rep.bounded_count;
        e.failure_count = rep.failure_count;
        if (warnings) {
            for (const auto& w : rep.warnings) warnings->push_back(set_label(model.attack, protected_channels) + ": " + w);
        }
        return e;
    }
    const ClosedLoopSystem sys = assemble_closed_loop(m, Vector::Zero(static_cast<Eigen::Index>(spec.dim())));
    const ImpactResult r = solve_oog(sys, solver);
    if (r.status == ImpactStatus::numerical_failure) {
        throw SolverError("nominal impact " + set_label(model.attack, protected_channels), r.diagnostics);
    }
    e.value = r.bounded() ? r.gamma * model.residual_threshold : std::numeric_limits<double>::infinity();
    e.bounded_count = r.bounded() ? 1 : 0;
    return e;
}

AllocationResult solve_smap(const SystemModel& model, const UncertaintySpec& spec, const ScenarioConfig& cfg,
                            const AllocationProblem& problem, const SolverConfig& solver, const RiskOptions& options) {
    model.validate();
    problem.validate(model.attack);
    AllocationResult out;
    out.metric = problem.metric;
    const std::vector<Vector> deltas =
        problem.metric == AllocationMetric::var ? draw_scenarios(spec, cfg) : std::vector<Vector>{};
    bool first = true;
    for (const auto& set : enumerate_protection_sets(problem.vulnerabilities, problem.budget)) {
        LedgerEntry e = evaluate_protection(model, spec, deltas, cfg, solver, options, set, problem.metric, &out.warnings);
        if (first || e.value < out.best_value) {
            out.best_value = e.value;
            out.best_set = set;
            first = false;
        }
        out.ledger.push_back(std::move(e));
    }
    return out;
}

std::vector<MetricComparison> compare_metrics(const SystemModel& model, const UncertaintySpec& spec,
                                              const ScenarioConfig& cfg, const AllocationProblem& problem,
                                              const SolverConfig& solver, const RiskOptions& options) {
    model.validate();
    problem.validate(model.attack);
    const std::vector<Vector> deltas = draw_scenarios(spec, cfg);
    std::vector<MetricComparison> out;
    for (const auto& set : enumerate_protection_sets(problem.vulnerabilities, problem.budget)) {
        MetricComparison c;
        c.protected_channels = set;
        c.var_value =
            evaluate_protection(model, spec, deltas, cfg, solver, options, set, AllocationMetric::var).value;
        c.nominal_value =
            evaluate_protection(model, spec, deltas, cfg, solver, options, set, AllocationMetric::nominal_impact).value;
        out.push_back(std::move(c));
    }
    return out;
}

std::string set_label(const AttackSelection& attack, const ChannelSet& channels) {
    std::string out = "{";
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (i) out += ",";
        out += attack.label(channels[i]);
    }
    return out + "}";
}

}  // namespace oogrisk
