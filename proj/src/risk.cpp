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

#include "oogrisk/risk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "oogrisk/boundedness.hpp"
#include "oogrisk/error.hpp"
#include "oogrisk/parallel.hpp"

namespace oogrisk {

double empirical_var(std::vector<double> gammas, double beta) {
    if (gammas.empty()) throw ValidationError("gammas", "empty sample list");
    if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("beta", "must lie in (0,1)");
    for (double g : gammas) {
        if (std::isnan(g)) throw ValidationError("gammas", "NaN entry");
    }
    const std::size_t k = required_bounded_count(gammas.size(), beta);
    std::nth_element(gammas.begin(), gammas.begin() + static_cast<std::ptrdiff_t>(k - 1), gammas.end());
    return gammas[k - 1];
}

std::vector<double> RiskReport::gammas() const {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        if (s.status != ImpactStatus::numerical_failure) out.push_back(s.gamma);
    }
    return out;
}

void RiskOptions::validate() const {
    if (!(failure_budget >= 0.0 && failure_budget < 1.0)) {
        throw ValidationError("risk.failure_budget", "must lie in [0,1)");
    }
}

std::vector<Vector> draw_scenarios(const UncertaintySpec& spec, const ScenarioConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    return sample(spec, cfg.sample_count(), rng, cfg.distribution);
}

RiskReport assess_risk_on(const SystemModel& model, const UncertaintySpec& spec, const std::vector<Vector>& deltas,
                          const ScenarioConfig& cfg, const SolverConfig& solver, const RiskOptions& options) {
    model.validate();
    spec.validate(model.plant);
    cfg.validate();
    solver.validate();
    options.validate();
    if (deltas.empty()) throw ValidationError("samples", "empty scenario set");
    if (!(model.residual_threshold > 0.0)) throw ValidationError("residual_threshold", "must be positive");

    const auto start = std::chrono::steady_clock::now();
    RiskReport rep;
    rep.beta = cfg.beta;
    rep.epsilon1 = cfg.epsilon1;
    rep.beta1 = cfg.beta1;
    rep.seed = cfg.seed;
    rep.n1 = deltas.size();
    rep.residual_threshold = model.residual_threshold;
    rep.samples.resize(deltas.size());

    parallel_for(deltas.size(), options.workers, [&](std::size_t i) {
        SampleRecord& rec = rep.samples[i];
        rec.index = i;
        rec.delta = deltas[i];
        const PlantModel plant = realize(spec, model.plant, deltas[i]);
        const ClosedLoopSystem sys =
            assemble_closed_loop(plant, model.controller, model.detector, model.attack, deltas[i]);
        const ImpactResult r = solve_oog(sys, solver);
        rec.status = r.status;
        rec.diagnostics = r.diagnostics;
        if (r.status == ImpactStatus::bounded) {
            rec.gamma = r.gamma * model.residual_threshold;
        } else {
            rec.gamma = std::numeric_limits<double>::infinity();
        }
    });

    for (const auto& s : rep.samples) {
        if (s.status == ImpactStatus::bounded) ++rep.bounded_count;
        if (s.status == ImpactStatus::numerical_failure) ++rep.failure_count;
    }
    if (rep.failure_count > 0) {
        const double share = static_cast<double>(rep.failure_count) / static_cast<double>(rep.n1);
        std::ostringstream msg;
        msg << rep.failure_count << " of " << rep.n1 << " samples failed numerically";
        if (share >= options.failure_budget || rep.failure_count == rep.n1) {
            throw SolverError("assess_risk", msg.str() + ", above the failure budget");
        }
        rep.warnings.push_back(msg.str() + "; excluded from the quantile");
    }
    rep.var_value = empirical_var(rep.gammas(), cfg.beta);
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

RiskReport assess_risk(const SystemModel& model, const UncertaintySpec& spec, const ScenarioConfig& cfg,
                       const SolverConfig& solver, const RiskOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    RiskReport rep = assess_risk_on(model, spec, draw_scenarios(spec, cfg), cfg, solver, options);
    rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

std::vector<double> default_beta_grid() {
    std::vector<double> out;
    for (int i = 1; i <= 99; ++i) out.push_back(i / 100.0);
    return out;
}

std::vector<std::pair<double, double>> var_curve(const RiskReport& report, const std::vector<double>& beta_grid) {
    const std::vector<double> g = report.gammas();
    std::vector<std::pair<double, double>> out;
    out.reserve(beta_grid.size());
    for (double b : beta_grid) out.emplace_back(b, empirical_var(g, b));
    return out;
}

}  // namespace oogrisk
