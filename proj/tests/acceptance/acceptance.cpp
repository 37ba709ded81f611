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

// Acceptance checks for the shipped example and the randomized corpora.
// Prints one line per criterion and exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "oogrisk/allocation.hpp"
#include "oogrisk/boundedness.hpp"
#include "oogrisk/impact.hpp"
#include "oogrisk/io.hpp"
#include "oogrisk/oracle.hpp"
#include "oogrisk/risk.hpp"

#include "../support/systems.hpp"

using namespace oogrisk;

namespace {

// Pinned reference values and tolerances.
constexpr double kNominalReference = 197.76;
constexpr double kNominalBand = 0.01;
constexpr double kCalibrationBand = 0.05;
constexpr double kNominalSeconds = 1.0;
constexpr double kVarReference = 347.15;
constexpr double kVarBand = 0.15;
constexpr double kVarRunSeconds = 120.0;
constexpr double kSensorReference = 9081.4;
constexpr double kSensorBand = 0.25;
constexpr double kSandwichAbs = 1e-6;
constexpr double kSandwichRatio = 0.95;
constexpr double kNearSingularKappa = 5e-3;
constexpr double kCorpusSeconds = 300.0;
constexpr double kAgreement = 0.95;
constexpr double kScalingRel = 2e-6;  // twice the relative accuracy claimed for the SDP (1e-6)
constexpr double kMonotoneRel = 1e-6;
constexpr double kFdiFloor = -1e-6;
constexpr int kSeeds = 10;
constexpr std::size_t kReferenceCount = 235;

enum class Verdict { pass, fail, degraded_pass, degraded_fail };

const char* label(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::fail: return "FAIL";
        case Verdict::degraded_pass: return "PASS (degraded)";
        case Verdict::degraded_fail: return "FAIL (degraded)";
    }
    return "?";
}

struct Outcome {
    int id = 0;
    Verdict verdict = Verdict::fail;
    std::string summary;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

std::string pct(double v) { return fmt(100.0 * v, 3) + "%"; }

double rel(double value, double reference) { return std::abs(value - reference) / std::abs(reference); }

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

io::ModelDocument load(const std::string& name) { return io::load_model(testing::models_dir() / name); }

double nominal_gain(const SystemModel& model) {
    const ImpactResult r = solve_oog(assemble_closed_loop(model, Vector::Zero(1)));
    return r.bounded() ? r.gamma * model.residual_threshold : std::numeric_limits<double>::infinity();
}

ScenarioConfig reference_scenario(std::uint64_t seed, std::size_t count) {
    ScenarioConfig cfg;
    cfg.epsilon1 = 0.05;
    cfg.beta1 = 0.1;
    cfg.beta = 0.1;
    cfg.seed = seed;
    cfg.n_override = count;
    return cfg;
}

/// First strict minimum among ledger entries with at most `budget` members (enumeration order).
ChannelSet argmin_within(const std::vector<LedgerEntry>& ledger, std::size_t budget) {
    const LedgerEntry* best = nullptr;
    for (const auto& e : ledger) {
        if (e.protected_channels.size() > budget) continue;
        if (!best || e.value < best->value) best = &e;
    }
    return best ? best->protected_channels : ChannelSet{};
}

std::string majority(const std::vector<std::string>& votes, int& count) {
    std::map<std::string, int> tally;
    for (const auto& v : votes) ++tally[v];
    std::string top;
    count = 0;
    for (const auto& [k, c] : tally) {
        if (c > count) {
            top = k;
            count = c;
        }
    }
    return top;
}

/// Ledgers shared by criteria 3, 4 and 5: one allocation run per seed and attack mode.
struct SeedLedgers {
    std::vector<AllocationResult> sensors;    // budget 2 over S1..S3
    std::vector<AllocationResult> actuators;  // budget 1 over A1, A2
    double max_seconds = 0.0;
};

SeedLedgers run_ledgers(const io::ModelDocument& sensors, const io::ModelDocument& actuators) {
    SeedLedgers out;
    for (int seed = 0; seed < kSeeds; ++seed) {
        const ScenarioConfig cfg = reference_scenario(static_cast<std::uint64_t>(seed), kReferenceCount);
        AllocationProblem ps{{0, 1, 2}, 2, AllocationMetric::var};
        AllocationProblem pa{{0, 1}, 1, AllocationMetric::var};
        auto t0 = std::chrono::steady_clock::now();
        out.sensors.push_back(solve_smap(sensors.system, sensors.uncertainty, cfg, ps));
        out.actuators.push_back(solve_smap(actuators.system, actuators.uncertainty, cfg, pa));
        out.max_seconds = std::max(out.max_seconds, seconds_since(t0));
    }
    return out;
}

double empty_entry(const AllocationResult& r) {
    for (const auto& e : r.ledger)
        if (e.protected_channels.empty()) return e.value;
    return std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------------------------------

Outcome criterion_nominal(const Outcome& properties, bool note_present) {
    const auto canonical = load("example_loop.json");
    const auto literal = load("example_loop_literal.json");
    auto t0 = std::chrono::steady_clock::now();
    const double observer = nominal_gain(canonical.system);
    const double elapsed = seconds_since(t0);
    const double lit = nominal_gain(literal.system);

    // the printed controller sign under both detector readings, for the record
    SystemModel obs_printed = canonical.system;
    obs_printed.controller.D_c = -obs_printed.controller.D_c;
    SystemModel lit_printed = literal.system;
    lit_printed.controller.D_c = -lit_printed.controller.D_c;
    const double obs_p = nominal_gain(obs_printed);
    const double lit_p = nominal_gain(lit_printed);

    const double best = std::min(rel(observer, kNominalReference), rel(lit, kNominalReference));
    std::ostringstream os;
    os << "nominal OOG: observer detector " << fmt(observer) << " (" << pct(rel(observer, kNominalReference))
       << " off " << kNominalReference << "), literal detector " << fmt(lit) << " ("
       << pct(rel(lit, kNominalReference)) << "); printed gain sign: observer " << fmt(obs_p) << ", literal "
       << fmt(lit_p) << "; runtime " << fmt(elapsed, 3) << " s";
    Outcome o{1, Verdict::fail, ""};
    if (best <= kNominalBand && elapsed < kNominalSeconds) {
        o.verdict = Verdict::pass;
    } else if (best > kCalibrationBand) {
        os << "; neither reading within " << pct(kCalibrationBand) << ", falls back to property suite ("
           << label(properties.verdict) << ") and discrepancy note (" << (note_present ? "present" : "missing")
           << ")";
        o.verdict = properties.verdict == Verdict::pass && note_present && elapsed < kNominalSeconds
                        ? Verdict::degraded_pass
                        : Verdict::degraded_fail;
    } else {
        os << "; band " << pct(kNominalBand) << " (runtime limit " << kNominalSeconds << " s)";
    }
    o.summary = os.str();
    return o;
}

Outcome criterion_var(const io::ModelDocument& actuators) {
    std::ostringstream os;
    bool ok = true;
    double slowest = 0.0;
    os << "VaR_0.1 over " << kSeeds << " seeds vs " << kVarReference << ":";
    for (std::size_t count : {kReferenceCount, required_sample_count(0.05, 0.1)}) {
        std::vector<double> vars;
        for (int seed = 0; seed < kSeeds; ++seed) {
            auto t0 = std::chrono::steady_clock::now();
            const RiskReport r =
                assess_risk(actuators.system, actuators.uncertainty, reference_scenario(static_cast<std::uint64_t>(seed), count));
            slowest = std::max(slowest, seconds_since(t0));
            vars.push_back(r.var_value);
        }
        const double m = mean(vars);
        const auto [lo, hi] = std::minmax_element(vars.begin(), vars.end());
        os << " N1=" << count << " mean " << fmt(m) << " [" << fmt(*lo) << ", " << fmt(*hi) << "] (" << pct(rel(m, kVarReference))
           << " off);";
        ok = ok && rel(m, kVarReference) <= kVarBand;
    }
    os << " band " << pct(kVarBand) << "; slowest run " << fmt(slowest, 3) << " s";
    ok = ok && slowest < kVarRunSeconds;
    return {2, ok ? Verdict::pass : Verdict::fail, os.str()};
}

Outcome criterion_sensor_risk(const SeedLedgers& ledgers) {
    std::vector<double> v;
    for (const auto& r : ledgers.sensors) v.push_back(empty_entry(r));
    const double med = median(v);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    int within = 0;
    for (double x : v) within += rel(x, kSensorReference) <= kSensorBand ? 1 : 0;
    std::ostringstream os;
    os << "unprotected sensor VaR (N1=" << kReferenceCount << ", " << kSeeds << " seeds): median " << fmt(med) << " ["
       << fmt(*lo) << ", " << fmt(*hi) << "] vs " << kSensorReference << " (" << pct(rel(med, kSensorReference))
       << " off, band " << pct(kSensorBand) << "); seeds within band " << within << "/" << kSeeds;
    return {3, rel(med, kSensorReference) <= kSensorBand ? Verdict::pass : Verdict::fail, os.str()};
}

Outcome criterion_orderings(const SeedLedgers& ledgers, const io::ModelDocument& sensors,
                            const io::ModelDocument& actuators) {
    std::vector<std::string> s1, s2, a1;
    for (int i = 0; i < kSeeds; ++i) {
        s1.push_back(set_label(sensors.system.attack, argmin_within(ledgers.sensors[static_cast<std::size_t>(i)].ledger, 1)));
        s2.push_back(set_label(sensors.system.attack, ledgers.sensors[static_cast<std::size_t>(i)].best_set));
        a1.push_back(set_label(actuators.system.attack, ledgers.actuators[static_cast<std::size_t>(i)].best_set));
    }
    AllocationProblem ns{{0, 1, 2}, 1, AllocationMetric::nominal_impact};
    AllocationProblem na{{0, 1}, 1, AllocationMetric::nominal_impact};
    const std::string nom_s =
        set_label(sensors.system.attack, solve_smap(sensors.system, sensors.uncertainty, {}, ns).best_set);
    const std::string nom_a =
        set_label(actuators.system.attack, solve_smap(actuators.system, actuators.uncertainty, {}, na).best_set);

    struct Check {
        std::string what, expected, got;
        int votes;
    };
    std::vector<Check> checks;
    int c = 0;
    std::string m = majority(s1, c);
    checks.push_back({"sensors n_w=1 VaR", "{S3}", m, c});
    m = majority(s2, c);
    checks.push_back({"sensors n_w=2 VaR", "{S2,S3}", m, c});
    m = majority(a1, c);
    checks.push_back({"actuators n_w=1 VaR", "{A1}", m, c});
    checks.push_back({"sensors n_w=1 nominal", "{S2}", nom_s, -1});
    checks.push_back({"actuators n_w=1 nominal", "{A2}", nom_a, -1});

    bool ok = true;
    std::ostringstream os;
    os << "allocation argmins:";
    for (const auto& ch : checks) {
        const bool hit = ch.expected == ch.got && (ch.votes < 0 || ch.votes * 2 > kSeeds);
        ok = ok && hit;
        os << " " << ch.what << " -> " << ch.got;
        if (ch.votes >= 0) os << " (" << ch.votes << "/" << kSeeds << ")";
        os << (hit ? " ok" : " expected " + ch.expected) << ";";
    }
    return {4, ok ? Verdict::pass : Verdict::fail, os.str()};
}

Outcome criterion_sensor_vs_actuator(const SeedLedgers& ledgers) {
    int holds = 0;
    std::vector<double> s, a;
    for (int i = 0; i < kSeeds; ++i) {
        s.push_back(empty_entry(ledgers.sensors[static_cast<std::size_t>(i)]));
        a.push_back(empty_entry(ledgers.actuators[static_cast<std::size_t>(i)]));
        holds += s.back() > a.back() ? 1 : 0;
    }
    std::ostringstream os;
    os << "unprotected risk, sensors " << fmt(mean(s)) << " vs actuators " << fmt(mean(a))
       << " (mean over seeds); sensors riskier on " << holds << "/" << kSeeds << " seeds";
    return {5, holds == kSeeds ? Verdict::pass : Verdict::fail, os.str()};
}

/// Smallest over largest singular value of G_r on a grid of the unit circle.
double residual_conditioning(const ClosedLoopSystem& sys) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < 2048; ++k) {
        const auto z = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / 2048.0);
        Eigen::JacobiSVD<CMatrix> svd(transfer_eval(sys, z, OutputChannel::residual));
        lo = std::min(lo, svd.singularValues().minCoeff());
        hi = std::max(hi, svd.singularValues().maxCoeff());
    }
    return hi > 0.0 ? lo / hi : 0.0;
}

struct CorpusRun {
    std::vector<testing::CorpusCase> cases;
    std::vector<ImpactResult> sdp;
};

Outcome criterion_sandwich(const CorpusRun& corpus, std::size_t stable_count) {
    auto t0 = std::chrono::steady_clock::now();
    int upper_violations = 0, low = 0, excluded = 0, checked = 0;
    double worst_excess = -std::numeric_limits<double>::infinity(), worst_ratio = 1.0;
    std::vector<std::string> notes;
    for (std::size_t i = 0; i < stable_count; ++i) {
        const auto& c = corpus.cases[i];
        const ImpactResult& r = corpus.sdp[i];
        if (!r.bounded()) {
            ++upper_violations;
            notes.push_back(c.label + " SDP " + to_string(r.status));
            continue;
        }
        OracleOptions opt;
        opt.T = 200;
        opt.N = 800;
        const OracleResult o = finite_horizon_oog(c.sys, opt);
        worst_excess = std::max(worst_excess, o.bound - r.gamma);
        if (o.bound > r.gamma + kSandwichAbs) {
            ++upper_violations;
            notes.push_back(c.label + " oracle above SDP");
        }
        const double kappa = residual_conditioning(c.sys);
        if (kappa < kNearSingularKappa) {
            ++excluded;
            notes.push_back(c.label + " excluded (kappa " + fmt(kappa, 3) + ", ratio " + fmt(o.bound / r.gamma, 4) + ")");
            continue;
        }
        ++checked;
        worst_ratio = std::min(worst_ratio, o.bound / r.gamma);
        if (o.bound < kSandwichRatio * r.gamma) ++low;
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream os;
    os << "oracle vs SDP on " << stable_count << " stable systems: upper violations " << upper_violations
       << " (max oracle - SDP " << fmt(worst_excess, 3) << "), lower ratio min " << fmt(worst_ratio, 5) << " over "
       << checked << " cases (" << low << " below " << kSandwichRatio << "), " << excluded
       << " near-singular excluded";
    for (const auto& n : notes) os << "; " << n;
    os << "; runtime " << fmt(elapsed, 3) << " s";
    const bool ok = upper_violations == 0 && low == 0 && elapsed < kCorpusSeconds;
    return {6, ok ? Verdict::pass : Verdict::fail, os.str()};
}

Outcome criterion_classification(const CorpusRun& corpus) {
    int agree = 0, flagged = 0, silent = 0;
    std::vector<std::string> notes;
    for (std::size_t i = 0; i < corpus.cases.size(); ++i) {
        const auto& c = corpus.cases[i];
        const ImpactResult& r = corpus.sdp[i];
        const bool zeros_bounded = r.boundedness.bounded();
        const bool sdp_bounded = r.stats.sdp_status == sdp::Status::optimal && !r.stats.infeasible_to_bracket;
        const bool sdp_unbounded = r.stats.infeasible_to_bracket;
        if ((zeros_bounded && sdp_bounded) || (!zeros_bounded && sdp_unbounded)) {
            ++agree;
            continue;
        }
        if (r.status == ImpactStatus::numerical_failure) {
            ++flagged;
        } else {
            ++silent;
        }
        notes.push_back(c.label + ": " + r.diagnostics);
    }
    const double share = static_cast<double>(agree) / static_cast<double>(corpus.cases.size());
    std::ostringstream os;
    os << "zero test vs SDP feasibility on " << corpus.cases.size() << " systems: agree " << agree << " ("
       << pct(share) << "), disagreements flagged " << flagged << ", unflagged " << silent;
    for (const auto& n : notes) os << "; " << n;
    return {7, share >= kAgreement && silent == 0 ? Verdict::pass : Verdict::fail, os.str()};
}

Outcome criterion_properties(const CorpusRun& corpus, std::size_t stable_count, const io::ModelDocument& sensors,
                             const io::ModelDocument& actuators) {
    std::vector<std::string> failures;
    std::ostringstream os;

    // scaling laws
    double worst_scale = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const auto& s = corpus.cases[i].sys;
        const double g = corpus.sdp[i].gamma;
        for (double alpha : {0.5, 2.0, 10.0}) {
            ClosedLoopSystem p = s;
            p.C_p *= alpha;
            p.D_p *= alpha;
            ClosedLoopSystem q = s;
            q.C_r *= alpha;
            q.D_r *= alpha;
            const ImpactResult rp = solve_oog(p);
            const ImpactResult rq = solve_oog(q);
            worst_scale = std::max({worst_scale, rel(rp.gamma, alpha * alpha * g), rel(rq.gamma, g / (alpha * alpha))});
        }
    }
    if (worst_scale > kScalingRel) failures.push_back("scaling " + fmt(worst_scale, 3));
    os << "scaling max rel err " << fmt(worst_scale, 3) << " (tol " << kScalingRel << ")";

    // channel monotonicity
    int channel_checks = 0, channel_bad = 0;
    for (std::size_t i = 0; i < stable_count; ++i) {
        const auto& s = corpus.cases[i].sys;
        if (s.n_a() < 2) continue;
        for (Eigen::Index col = 0; col < s.n_a(); ++col) {
            const Eigen::Index keep = 1 - col;
            ClosedLoopSystem d = testing::make_system(s.A, s.B.col(keep), s.C_p, s.D_p.col(keep), s.C_r, s.D_r.col(keep));
            const ImpactResult r = solve_oog(d);
            ++channel_checks;
            if (!(r.gamma <= corpus.sdp[i].gamma * (1.0 + kMonotoneRel))) ++channel_bad;
        }
    }
    if (channel_bad) failures.push_back("channel monotonicity " + std::to_string(channel_bad));
    os << "; channel deletions " << channel_checks << " (" << channel_bad << " increases)";

    // budget and subset monotonicity on the sensor example
    const ScenarioConfig small = reference_scenario(3, 60);
    std::vector<double> best;
    AllocationResult full;
    for (int budget = 0; budget <= 3; ++budget) {
        AllocationProblem p{{0, 1, 2}, budget, AllocationMetric::var};
        const AllocationResult r = solve_smap(sensors.system, sensors.uncertainty, small, p);
        best.push_back(r.best_value);
        if (budget == 3) full = r;
    }
    bool budget_ok = std::is_sorted(best.rbegin(), best.rend());
    int subset_bad = 0;
    for (const auto& a : full.ledger) {
        for (const auto& b : full.ledger) {
            const bool sub = std::includes(b.protected_channels.begin(), b.protected_channels.end(),
                                           a.protected_channels.begin(), a.protected_channels.end());
            if (sub && a.value < b.value * (1.0 - kMonotoneRel)) ++subset_bad;
        }
    }
    if (!budget_ok) failures.push_back("budget monotonicity");
    if (subset_bad) failures.push_back("subset monotonicity " + std::to_string(subset_bad));
    os << "; budget curve";
    for (double b : best) os << " " << fmt(b, 5);
    os << " (subset violations " << subset_bad << ")";

    // quantile monotonicity in beta
    const RiskReport rep = assess_risk(actuators.system, actuators.uncertainty, reference_scenario(4, kReferenceCount));
    const auto curve = var_curve(rep, default_beta_grid());
    bool curve_ok = true;
    for (std::size_t i = 1; i < curve.size(); ++i) curve_ok = curve_ok && curve[i].second <= curve[i - 1].second;
    if (!curve_ok) failures.push_back("quantile monotonicity");
    os << "; VaR curve non-increasing " << (curve_ok ? "yes" : "no");

    // finiteness of VaR against the bounded count, on a family with a unit-circle residual zero at delta = 0.5
    SystemModel edge;
    edge.plant = {testing::scalar(0.5), testing::scalar(1.0), testing::scalar(1.0), testing::scalar(1.0),
                  testing::scalar(0.0)};
    edge.controller = ControllerModel::static_gain(testing::scalar(-0.6));
    edge.detector = {Matrix(0, 0), Matrix(0, 1), Matrix(0, 1), Matrix(1, 0), testing::scalar(0.0), testing::scalar(1.0)};
    edge.attack = AttackSelection(AttackMode::sensor, {0}, 1, 1);
    UncertaintySpec edge_spec;
    edge_spec.box = {{-0.5, 0.5}};
    edge_spec.perturbations.push_back({PlantBlock::A, 0, testing::scalar(1.0)});
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    int finiteness_checks = 0, finiteness_bad = 0;
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<Vector> deltas;
        const int n = 20, unbounded = 2 * trial;
        for (int i = 0; i < n; ++i) deltas.push_back(Vector::Constant(1, i < unbounded ? 0.5 : u(rng)));
        for (double beta : {0.05, 0.1, 0.25, 0.5}) {
            ScenarioConfig cfg;
            cfg.beta = beta;
            const RiskReport r = assess_risk_on(edge, edge_spec, deltas, cfg);
            std::vector<bool> flags;
            for (const auto& s : r.samples) flags.push_back(s.status == ImpactStatus::bounded);
            ++finiteness_checks;
            if (std::isfinite(r.var_value) != aggregate_boundedness(flags, beta)) ++finiteness_bad;
        }
    }
    if (finiteness_bad) failures.push_back("VaR finiteness " + std::to_string(finiteness_bad));
    os << "; finiteness link " << finiteness_checks - finiteness_bad << "/" << finiteness_checks;

    // determinism of canonical reports
    const ScenarioConfig det_cfg = reference_scenario(21, 40);
    RiskOptions one, many;
    one.workers = 1;
    many.workers = 4;
    const RiskReport ra = assess_risk(sensors.system, sensors.uncertainty, det_cfg, {}, one);
    const RiskReport rb = assess_risk(sensors.system, sensors.uncertainty, det_cfg, {}, many);
    const std::string da = io::risk_report(sensors, ra, var_curve(ra, default_beta_grid()), true).dump();
    const std::string db = io::risk_report(sensors, rb, var_curve(rb, default_beta_grid()), true).dump();
    AllocationProblem dp{{0, 1, 2}, 1, AllocationMetric::var};
    const auto la = io::ledger_table(sensors.system.attack, solve_smap(sensors.system, sensors.uncertainty, det_cfg, dp));
    const auto lb = io::ledger_table(sensors.system.attack, solve_smap(sensors.system, sensors.uncertainty, det_cfg, dp));
    const bool deterministic = da == db && la == lb;
    if (!deterministic) failures.push_back("determinism");
    os << "; reports byte-identical " << (deterministic ? "yes" : "no");

    // FDI at the optimum
    double worst_fdi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < corpus.cases.size(); ++i) {
        if (!corpus.sdp[i].bounded()) continue;
        worst_fdi = std::min(worst_fdi, fdi_sweep(corpus.cases[i].sys, corpus.sdp[i].gamma).min_eigenvalue);
    }
    for (const char* name : {"example_loop.json", "example_loop_sensors.json"}) {
        const auto doc = load(name);
        for (double d : {-0.5, 0.0, 0.3}) {
            const ClosedLoopSystem s = assemble_closed_loop(doc.system, Vector::Constant(1, d));
            const ImpactResult r = solve_oog(s);
            if (r.bounded()) worst_fdi = std::min(worst_fdi, fdi_sweep(s, r.gamma).min_eigenvalue);
        }
    }
    if (worst_fdi < kFdiFloor) failures.push_back("FDI " + fmt(worst_fdi, 3));
    os << "; min FDI eigenvalue at optima " << fmt(worst_fdi, 3) << " (floor " << kFdiFloor << ")";

    for (const auto& f : failures) os << "; failed: " << f;
    return {8, failures.empty() ? Verdict::pass : Verdict::fail, os.str()};
}

bool discrepancy_note_present() {
    std::ifstream in(std::filesystem::path(OOGRISK_SOURCE_DIR) / "README.md");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    return text.find("197.76") != std::string::npos && text.find("208.86") != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::vector<int> only;
    app.add_option("--only", only, "Run only these criteria (1-8)")->delimiter(',');
    CLI11_PARSE(app, argc, argv);
    auto wanted = [&only](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

    std::vector<Outcome> outcomes;
    try {
        const auto sensors = load("example_loop_sensors.json");
        const auto actuators = load("example_loop.json");

        CorpusRun corpus;
        const std::size_t stable_count = 50;
        if (wanted(6) || wanted(7) || wanted(8) || wanted(1)) {
            corpus.cases = testing::stable_corpus();
            for (auto& c : testing::circle_zero_corpus()) corpus.cases.push_back(std::move(c));
            for (const auto& c : corpus.cases) corpus.sdp.push_back(solve_oog(c.sys));
        }
        Outcome properties{8, Verdict::fail, "not run"};
        if (wanted(8) || wanted(1)) properties = criterion_properties(corpus, stable_count, sensors, actuators);
        if (wanted(1)) outcomes.push_back(criterion_nominal(properties, discrepancy_note_present()));
        if (wanted(2)) outcomes.push_back(criterion_var(actuators));
        if (wanted(3) || wanted(4) || wanted(5)) {
            const SeedLedgers ledgers = run_ledgers(sensors, actuators);
            if (wanted(3)) outcomes.push_back(criterion_sensor_risk(ledgers));
            if (wanted(4)) outcomes.push_back(criterion_orderings(ledgers, sensors, actuators));
            if (wanted(5)) outcomes.push_back(criterion_sensor_vs_actuator(ledgers));
        }
        if (wanted(6)) outcomes.push_back(criterion_sandwich(corpus, stable_count));
        if (wanted(7)) outcomes.push_back(criterion_classification(corpus));
        if (wanted(8)) outcomes.push_back(properties);
    } catch (const std::exception& e) {
        std::cout << "acceptance aborted: " << e.what() << "\n";
        return 2;
    }

    int failed = 0;
    for (const auto& o : outcomes) {
        std::cout << "criterion " << o.id << ": " << label(o.verdict) << " - " << o.summary << "\n";
        if (o.verdict == Verdict::fail || o.verdict == Verdict::degraded_fail) ++failed;
    }
    std::cout << outcomes.size() - static_cast<std::size_t>(failed) << "/" << outcomes.size() << " criteria met\n";
    return failed == 0 ? 0 : 1;
}
