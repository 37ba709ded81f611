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

// Command-line front end: single-realization impact, scenario risk, protection allocation,
// zero analysis and oracle cross-checks.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "oogrisk/allocation.hpp"
#include "oogrisk/error.hpp"
#include "oogrisk/impact.hpp"
#include "oogrisk/io.hpp"
#include "oogrisk/oracle.hpp"
#include "oogrisk/risk.hpp"

namespace {

using namespace oogrisk;
using io::json;

enum ExitCode : int { ok = 0, other = 1, validation = 2, solver = 3, io_failure = 4 };

struct CommonArgs {
    std::string model;
    std::string config;
    std::string out_dir;
    bool canonical = false;
    std::optional<unsigned> workers;
};

struct ScenarioArgs {
    std::optional<double> beta, eps1, beta1;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("model", a.model, "Model document (JSON)")->required();
    cmd->add_option("--config", a.config, "Run configuration (JSON)");
    cmd->add_option("--out-dir", a.out_dir, "Directory for reports and tables (default: $OOGRISK_OUTPUT_DIR)");
    cmd->add_flag("--canonical", a.canonical, "Omit timing fields so reports are reproducible byte for byte");
    cmd->add_option("--workers", a.workers, "Worker threads (0: hardware concurrency)");
}

void add_scenario(CLI::App* cmd, ScenarioArgs& s) {
    cmd->add_option("--beta", s.beta, "VaR level");
    cmd->add_option("--eps1", s.eps1, "Accuracy of the empirical probability");
    cmd->add_option("--beta1", s.beta1, "Confidence parameter of the sample count");
    cmd->add_option("--seed", s.seed, "Sampling seed");
    cmd->add_option("--samples", s.samples, "Number of scenarios (overrides the computed count)");
}

io::RunConfig make_config(const CommonArgs& a, const ScenarioArgs* s) {
    io::RunConfig cfg = a.config.empty() ? io::RunConfig{} : io::load_run_config(a.config);
    if (s) {
        if (s->beta) cfg.scenario.beta = *s->beta;
        if (s->eps1) cfg.scenario.epsilon1 = *s->eps1;
        if (s->beta1) cfg.scenario.beta1 = *s->beta1;
        if (s->seed) cfg.scenario.seed = *s->seed;
        if (s->samples) cfg.scenario.n_override = *s->samples;
    }
    if (a.workers) cfg.risk.workers = *a.workers;
    if (a.canonical) cfg.canonical = true;
    if (!a.out_dir.empty()) {
        cfg.output_dir = a.out_dir;
    } else if (cfg.output_dir.empty()) {
        if (const char* env = std::getenv("OOGRISK_OUTPUT_DIR")) cfg.output_dir = env;
    }
    cfg.validate();
    return cfg;
}

Vector parse_delta(const std::vector<double>& values, const io::ModelDocument& model) {
    const auto dim = static_cast<Eigen::Index>(model.uncertainty.dim());
    if (values.empty()) return Vector::Zero(dim);
    if (static_cast<Eigen::Index>(values.size()) != dim) {
        throw ValidationError("--delta", "expected " + std::to_string(dim) + " values");
    }
    return Eigen::Map<const Vector>(values.data(), dim);
}

ClosedLoopSystem realization(const io::ModelDocument& model, const Vector& delta) {
    const PlantModel plant = realize(model.uncertainty, model.system.plant, delta);
    return assemble_closed_loop(plant, model.system.controller, model.system.detector, model.system.attack, delta);
}

void emit(const io::RunConfig& cfg, const std::string& file, const json& doc) {
    std::cout << doc.dump(2) << "\n";
    if (!cfg.output_dir.empty() && cfg.write_report) io::write_text(cfg.output_dir / file, doc.dump(2) + "\n");
}

void emit_table(const io::RunConfig& cfg, bool enabled, const std::string& file, const std::string& text) {
    if (!cfg.output_dir.empty() && enabled) io::write_text(cfg.output_dir / file, text);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_oog(const CommonArgs& a, const std::vector<double>& delta_values, bool bisection) {
    io::RunConfig cfg = make_config(a, nullptr);
    if (bisection) cfg.solver.bisection = true;
    const auto model = io::load_model(a.model);
    const Vector delta = parse_delta(delta_values, model);
    const auto t0 = std::chrono::steady_clock::now();
    const ClosedLoopSystem sys = realization(model, delta);
    const ImpactResult r = solve_oog(sys, cfg.solver);
    const double elapsed = seconds_since(t0);
    FdiResult fdi;
    if (r.bounded()) fdi = fdi_sweep(sys, r.gamma, cfg.solver.fdi_grid);
    emit(cfg, "oog.json", io::impact_report(model, delta, r, fdi, elapsed, cfg.canonical));
    return r.status == ImpactStatus::numerical_failure ? ExitCode::solver : ExitCode::ok;
}

int run_zeros(const CommonArgs& a, const std::vector<double>& delta_values) {
    const io::RunConfig cfg = make_config(a, nullptr);
    const auto model = io::load_model(a.model);
    const Vector delta = parse_delta(delta_values, model);
    const ClosedLoopSystem sys = realization(model, delta);
    const auto zeros = transmission_zeros(sys.residual(), cfg.solver.zero_tolerances);
    const auto bnd = classify_boundedness(sys, cfg.solver.zero_tolerances);
    emit(cfg, "zeros.json", io::zeros_report(model, delta, zeros, bnd));
    return ExitCode::ok;
}

int run_risk(const CommonArgs& a, const ScenarioArgs& s) {
    const io::RunConfig cfg = make_config(a, &s);
    const auto model = io::load_model(a.model);
    const RiskReport rep = assess_risk(model.system, model.uncertainty, cfg.scenario, cfg.solver, cfg.risk);
    const auto curve = var_curve(rep, default_beta_grid());
    emit(cfg, "risk.json", io::risk_report(model, rep, curve, cfg.canonical));
    emit_table(cfg, cfg.write_samples, "samples.csv", io::samples_table(rep));
    emit_table(cfg, cfg.write_plot, "var_curve.csv", io::var_curve_table(rep, curve));
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    return ExitCode::ok;
}

int run_allocate(const CommonArgs& a, const ScenarioArgs& s, int budget, const std::string& metric_text,
                 const std::vector<std::string>& vulnerabilities) {
    const io::RunConfig cfg = make_config(a, &s);
    const auto model = io::load_model(a.model);
    const AttackSelection& atk = model.system.attack;
    AllocationProblem problem;
    problem.budget = budget;
    problem.metric = allocation_metric_from_string(metric_text);
    if (vulnerabilities.empty()) {
        problem.vulnerabilities = atk.channels();
    } else {
        for (const auto& v : vulnerabilities) problem.vulnerabilities.push_back(atk.channel_from_label(v));
    }
    const auto t0 = std::chrono::steady_clock::now();
    const AllocationResult result = solve_smap(model.system, model.uncertainty, cfg.scenario, problem, cfg.solver, cfg.risk);
    AllocationProblem other_problem = problem;
    other_problem.metric =
        problem.metric == AllocationMetric::var ? AllocationMetric::nominal_impact : AllocationMetric::var;
    const AllocationResult other =
        solve_smap(model.system, model.uncertainty, cfg.scenario, other_problem, cfg.solver, cfg.risk);
    std::vector<MetricComparison> comparison;
    for (std::size_t i = 0; i < result.ledger.size(); ++i) {
        const auto& var_entry = problem.metric == AllocationMetric::var ? result.ledger[i] : other.ledger[i];
        const auto& nom_entry = problem.metric == AllocationMetric::var ? other.ledger[i] : result.ledger[i];
        comparison.push_back({result.ledger[i].protected_channels, var_entry.value, nom_entry.value});
    }
    const double elapsed = seconds_since(t0);
    emit(cfg, "allocation.json", io::allocation_report(model, problem, result, comparison, elapsed, cfg.canonical));
    emit_table(cfg, cfg.write_samples, "ledger.csv", io::ledger_table(atk, result));
    emit_table(cfg, cfg.write_plot, "metrics.csv", io::metric_table(atk, comparison));
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    return ExitCode::ok;
}

int run_validate(const CommonArgs& a, const std::vector<double>& delta_values, Eigen::Index T, Eigen::Index N) {
    io::RunConfig cfg = make_config(a, nullptr);
    if (T > 0) cfg.oracle.T = T;
    if (N > 0) cfg.oracle.N = N;
    cfg.validate();
    const auto model = io::load_model(a.model);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<io::ValidationCase> cases;
    std::vector<Vector> deltas;
    if (delta_values.empty() && model.uncertainty.dim() > 0) {
        // nominal point and the corners of the box
        deltas.push_back(Vector::Zero(static_cast<Eigen::Index>(model.uncertainty.dim())));
        Vector lo(deltas[0].size()), hi(deltas[0].size());
        for (std::size_t j = 0; j < model.uncertainty.dim(); ++j) {
            lo(static_cast<Eigen::Index>(j)) = model.uncertainty.box[j].lo;
            hi(static_cast<Eigen::Index>(j)) = model.uncertainty.box[j].hi;
        }
        deltas.push_back(lo);
        deltas.push_back(hi);
    } else {
        deltas.push_back(parse_delta(delta_values, model));
    }
    bool lower_bound_ok = true;
    for (const auto& d : deltas) {
        io::ValidationCase c;
        c.delta = d;
        const ClosedLoopSystem sys = realization(model, d);
        c.sdp = solve_oog(sys, cfg.solver);
        c.oracle = finite_horizon_oog(sys, cfg.oracle);
        if (c.oracle.status == OracleStatus::bounded && c.oracle.attack.size() > 0) {
            c.replay = validate_attack(sys, unstack_attack(c.oracle.attack, sys.n_a()), c.oracle.N);
        }
        if (c.sdp.bounded() && c.oracle.status == OracleStatus::bounded &&
            c.oracle.bound > c.sdp.gamma * (1.0 + 1e-6) + 1e-6) {
            lower_bound_ok = false;
        }
        cases.push_back(std::move(c));
    }
    emit(cfg, "validate.json", io::validation_report(model, cases, seconds_since(t0), cfg.canonical));
    return lower_bound_ok ? ExitCode::ok : ExitCode::solver;
}

int fail(const std::string& kind, const std::string& where, const std::string& message, int code) {
    std::cerr << io::error_document(kind, where, message, code).dump(2) << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk assessment of stealthy data injection attacks on uncertain control loops"};
    app.require_subcommand(1);

    CommonArgs common;
    ScenarioArgs scenario;
    std::vector<double> delta;
    bool bisection = false;
    int budget = 1;
    std::string metric = "var";
    std::vector<std::string> vulnerabilities;
    Eigen::Index horizon_T = 0, horizon_N = 0;

    auto* oog = app.add_subcommand("oog", "Output-to-output gain of one realization");
    add_common(oog, common);
    oog->add_option("--delta", delta, "Uncertainty realization (default: nominal)");
    oog->add_flag("--bisection", bisection, "Bisect over gamma instead of the joint program");

    auto* risk = app.add_subcommand("risk", "Scenario-based value-at-risk of the impact");
    add_common(risk, common);
    add_scenario(risk, scenario);

    auto* allocate = app.add_subcommand("allocate", "Choose channels to protect under a budget");
    add_common(allocate, common);
    add_scenario(allocate, scenario);
    allocate->add_option("--budget", budget, "Number of channels that can be protected")->required();
    allocate->add_option("--metric", metric, "var or nominal")->check(CLI::IsMember({"var", "nominal"}));
    allocate->add_option("--vulnerabilities", vulnerabilities, "Candidate channels, e.g. S1 S2 S3")->delimiter(',');

    auto* zeros = app.add_subcommand("zeros", "Residual transmission zeros and boundedness");
    add_common(zeros, common);
    zeros->add_option("--delta", delta, "Uncertainty realization (default: nominal)");

    auto* validate = app.add_subcommand("validate", "Compare the SDP gain with the finite-horizon oracle");
    add_common(validate, common);
    validate->add_option("--delta", delta, "Uncertainty realization (default: nominal and box corners)");
    validate->add_option("--T", horizon_T, "Attack horizon");
    validate->add_option("--N", horizon_N, "Evaluation horizon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("validation", "arguments", e.what(), ExitCode::validation);
    }

    try {
        if (*oog) return run_oog(common, delta, bisection);
        if (*risk) return run_risk(common, scenario);
        if (*allocate) return run_allocate(common, scenario, budget, metric, vulnerabilities);
        if (*zeros) return run_zeros(common, delta);
        if (*validate) return run_validate(common, delta, horizon_T, horizon_N);
    } catch (const Error& e) {
        int code = ExitCode::other;
        switch (e.kind()) {
            case ErrorKind::validation:
            case ErrorKind::domain: code = ExitCode::validation; break;
            case ErrorKind::solver: code = ExitCode::solver; break;
            case ErrorKind::io: code = ExitCode::io_failure; break;
        }
        return fail(to_string(e.kind()), e.where(), e.what(), code);
    } catch (const std::exception& e) {
        return fail("internal", "", e.what(), ExitCode::other);
    }
    return ExitCode::other;
}
