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

#include "oogrisk/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "oogrisk/error.hpp"

namespace oogrisk::io {

json real_to_json(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    return value;
}

double real_from_json(const json& value, const std::string& where) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        const auto s = value.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw ValidationError(where, "expected a number or \"inf\"");
}

std::string format_real(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, r.ptr);
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& value, const std::string& where) {
    if (!value.is_array()) throw ValidationError(where, "expected a list of rows");
    const auto rows = static_cast<Eigen::Index>(value.size());
    if (rows == 0) return Matrix(0, 0);
    Eigen::Index cols = -1;
    Matrix m;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = value[static_cast<std::size_t>(i)];
        const std::string rw = where + "[" + std::to_string(i) + "]";
        if (!row.is_array()) throw ValidationError(rw, "expected a row list");
        if (cols < 0) {
            cols = static_cast<Eigen::Index>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw ValidationError(rw, "ragged row: expected " + std::to_string(cols) + " entries");
        }
        for (Eigen::Index j = 0; j < cols; ++j) {
            const json& x = row[static_cast<std::size_t>(j)];
            if (!x.is_number()) throw ValidationError(rw + "[" + std::to_string(j) + "]", "expected a number");
            m(i, j) = x.get<double>();
        }
    }
    return m;
}

namespace {

/// Reads an optional block; a missing block, or [] where the shape has a zero side, is all zeros.
Matrix block_or_zero(const json& parent, const char* key, Eigen::Index rows, Eigen::Index cols,
                     const std::string& where) {
    const std::string field = where + "." + key;
    if (!parent.contains(key)) return Matrix::Zero(rows, cols);
    Matrix m = matrix_from_json(parent.at(key), field);
    if (m.size() == 0 && (rows == 0 || cols == 0)) return Matrix::Zero(rows, cols);
    if (m.rows() != rows || m.cols() != cols) {
        throw ValidationError(field, "expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    return m;
}

Matrix required_block(const json& parent, const char* key, const std::string& where) {
    if (!parent.contains(key)) throw ValidationError(where + "." + key, "missing");
    return matrix_from_json(parent.at(key), where + "." + key);
}

const json& object_field(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc.at(key).is_object()) throw ValidationError(key, "missing or not an object");
    return doc.at(key);
}

int parse_channel(const json& v, const AttackSelection& probe, const std::string& where) {
    if (v.is_number_integer()) {
        const int one_based = v.get<int>();
        if (one_based < 1) throw ValidationError(where, "channel numbers are 1-based");
        return one_based - 1;
    }
    if (v.is_string()) {
        try {
            return probe.channel_from_label(v.get<std::string>());
        } catch (const Error& e) {
            throw ValidationError(where, e.what());
        }
    }
    throw ValidationError(where, "expected a channel label such as \"S1\" or a 1-based number");
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string(), std::string("parse error: ") + e.what());
    }
}

ModelDocument parse_model_fields(const json& doc) {
    if (!doc.is_object()) throw ValidationError("model", "document must be an object");
    if (doc.contains("schema_version")) {
        if (!doc.at("schema_version").is_number_integer() || doc.at("schema_version").get<int>() != schema_version) {
            throw ValidationError("schema_version", "unsupported version (expected " + std::to_string(schema_version) + ")");
        }
    }
    ModelDocument out;
    out.name = doc.value("name", "");
    out.description = doc.value("description", "");
    if (doc.contains("notes")) out.notes = doc.at("notes");

    const json& pj = object_field(doc, "plant");
    PlantModel& plant = out.system.plant;
    plant.A = required_block(pj, "A", "plant");
    plant.B = required_block(pj, "B", "plant");
    const auto nx = plant.A.rows();
    const auto nu = plant.B.cols();
    if (plant.B.size() == 0) throw ValidationError("plant.B", "plant needs at least one input");
    plant.C = required_block(pj, "C", "plant");
    const auto nm = plant.C.rows();
    plant.C_J = required_block(pj, "C_J", "plant");
    const auto np = plant.C_J.rows();
    plant.D_J = block_or_zero(pj, "D_J", np, nu, "plant");
    (void)nx;
    plant.validate();

    const json empty = json::object();
    const json& cj = doc.contains("controller") ? doc.at("controller") : empty;
    ControllerModel& ctrl = out.system.controller;
    const Eigen::Index nz = cj.contains("A_c") ? matrix_from_json(cj.at("A_c"), "controller.A_c").rows() : 0;
    ctrl.A_c = block_or_zero(cj, "A_c", nz, nz, "controller");
    ctrl.B_c = block_or_zero(cj, "B_c", nz, nm, "controller");
    ctrl.C_c = block_or_zero(cj, "C_c", nu, nz, "controller");
    ctrl.D_c = block_or_zero(cj, "D_c", nu, nm, "controller");

    const json& dj = doc.contains("detector") ? doc.at("detector") : empty;
    DetectorModel& det = out.system.detector;
    const Eigen::Index ns = dj.contains("A_e") ? matrix_from_json(dj.at("A_e"), "detector.A_e").rows() : 0;
    Eigen::Index nr = -1;
    for (const char* key : {"E_e", "C_e", "D_e"}) {
        if (nr < 0 && dj.contains(key)) nr = matrix_from_json(dj.at(key), std::string("detector.") + key).rows();
    }
    if (nr < 0) throw ValidationError("detector", "one of E_e, C_e or D_e is needed to fix the residual size");
    det.A_e = block_or_zero(dj, "A_e", ns, ns, "detector");
    det.B_e = block_or_zero(dj, "B_e", ns, nu, "detector");
    det.K_e = block_or_zero(dj, "K_e", ns, nm, "detector");
    det.C_e = block_or_zero(dj, "C_e", nr, ns, "detector");
    det.D_e = block_or_zero(dj, "D_e", nr, nu, "detector");
    det.E_e = block_or_zero(dj, "E_e", nr, nm, "detector");

    const json& aj = object_field(doc, "attack");
    if (!aj.contains("mode") || !aj.at("mode").is_string()) throw ValidationError("attack.mode", "missing");
    AttackMode mode;
    try {
        mode = attack_mode_from_string(aj.at("mode").get<std::string>());
    } catch (const Error& e) {
        throw ValidationError("attack.mode", e.what());
    }
    const AttackSelection probe(mode, {}, nu, nm);
    std::vector<int> channels;
    if (aj.contains("channels")) {
        if (!aj.at("channels").is_array()) throw ValidationError("attack.channels", "expected a list");
        std::size_t k = 0;
        for (const auto& c : aj.at("channels")) {
            channels.push_back(parse_channel(c, probe, "attack.channels[" + std::to_string(k++) + "]"));
        }
    } else {
        for (Eigen::Index c = 0; c < probe.interface_size(); ++c) channels.push_back(static_cast<int>(c));
    }
    out.system.attack = AttackSelection(mode, channels, nu, nm);
    if (doc.contains("residual_threshold")) {
        out.system.residual_threshold = real_from_json(doc.at("residual_threshold"), "residual_threshold");
    }
    out.system.validate();

    if (doc.contains("uncertainty")) {
        const json& uj = doc.at("uncertainty");
        if (!uj.is_object()) throw ValidationError("uncertainty", "expected an object");
        if (uj.contains("box")) {
            std::size_t j = 0;
            for (const auto& iv : uj.at("box")) {
                const std::string w = "uncertainty.box[" + std::to_string(j++) + "]";
                if (!iv.is_array() || iv.size() != 2) throw ValidationError(w, "expected [lo, hi]");
                out.uncertainty.box.push_back({real_from_json(iv[0], w), real_from_json(iv[1], w)});
            }
        }
        if (uj.contains("perturbations")) {
            std::size_t k = 0;
            for (const auto& pj2 : uj.at("perturbations")) {
                const std::string w = "uncertainty.perturbations[" + std::to_string(k++) + "]";
                if (!pj2.is_object()) throw ValidationError(w, "expected an object");
                Perturbation p;
                p.block = plant_block_from_string(pj2.value("block", ""));
                p.parameter = pj2.value("parameter", 0);
                Eigen::Index rows = 0, cols = 0;
                switch (p.block) {
                    case PlantBlock::A: rows = plant.A.rows(); cols = plant.A.cols(); break;
                    case PlantBlock::B: rows = plant.B.rows(); cols = plant.B.cols(); break;
                    case PlantBlock::C: rows = plant.C.rows(); cols = plant.C.cols(); break;
                    case PlantBlock::C_J: rows = plant.C_J.rows(); cols = plant.C_J.cols(); break;
                    case PlantBlock::D_J: rows = plant.D_J.rows(); cols = plant.D_J.cols(); break;
                }
                if (pj2.contains("coefficient")) {
                    p.coefficient = matrix_from_json(pj2.at("coefficient"), w + ".coefficient");
                } else if (pj2.contains("entries")) {
                    p.coefficient = Matrix::Zero(rows, cols);
                    for (const auto& e : pj2.at("entries")) {
                        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
                            throw ValidationError(w + ".entries", "expected [row, col, value] with 0-based indices");
                        }
                        const int r = e[0].get<int>();
                        const int c = e[1].get<int>();
                        if (r < 0 || r >= rows || c < 0 || c >= cols) {
                            throw ValidationError(w + ".entries", "index outside block " + std::string(to_string(p.block)));
                        }
                        p.coefficient(r, c) += real_from_json(e[2], w + ".entries");
                    }
                } else {
                    throw ValidationError(w, "needs coefficient or entries");
                }
                out.uncertainty.perturbations.push_back(std::move(p));
            }
        }
    }
    out.uncertainty.validate(plant);
    return out;
}

}  // namespace

ModelDocument parse_model(const json& doc) {
    try {
        return parse_model_fields(doc);
    } catch (const json::exception& e) {
        throw ValidationError("model", e.what());
    }
}

namespace {

/// Prefixes the file name to the field an error points at.
[[noreturn]] void rethrow_in_file(const std::filesystem::path& path, const ValidationError& e) {
    const std::string what = e.what();
    const std::string message = e.where().empty() ? what : what.substr(e.where().size() + 2);
    throw ValidationError(e.where().empty() ? path.string() : path.string() + ":" + e.where(), message);
}

}  // namespace

ModelDocument load_model(const std::filesystem::path& path) {
    const json doc = read_json_file(path);
    try {
        return parse_model(doc);
    } catch (const json::exception& e) {
        throw ValidationError(path.string(), e.what());
    } catch (const ValidationError& e) {
        rethrow_in_file(path, e);
    }
}

json model_to_json(const ModelDocument& model) {
    const SystemModel& s = model.system;
    json doc;
    doc["schema_version"] = schema_version;
    doc["name"] = model.name;
    doc["description"] = model.description;
    doc["plant"] = {{"A", matrix_to_json(s.plant.A)},     {"B", matrix_to_json(s.plant.B)},
                    {"C", matrix_to_json(s.plant.C)},     {"C_J", matrix_to_json(s.plant.C_J)},
                    {"D_J", matrix_to_json(s.plant.D_J)}};
    doc["controller"] = {{"A_c", matrix_to_json(s.controller.A_c)}, {"B_c", matrix_to_json(s.controller.B_c)},
                         {"C_c", matrix_to_json(s.controller.C_c)}, {"D_c", matrix_to_json(s.controller.D_c)}};
    doc["detector"] = {{"A_e", matrix_to_json(s.detector.A_e)}, {"B_e", matrix_to_json(s.detector.B_e)},
                       {"K_e", matrix_to_json(s.detector.K_e)}, {"C_e", matrix_to_json(s.detector.C_e)},
                       {"D_e", matrix_to_json(s.detector.D_e)}, {"E_e", matrix_to_json(s.detector.E_e)}};
    json chans = json::array();
    for (int c : s.attack.channels()) chans.push_back(s.attack.label(c));
    doc["attack"] = {{"mode", to_string(s.attack.mode())}, {"channels", chans}};
    doc["residual_threshold"] = real_to_json(s.residual_threshold);
    json box = json::array();
    for (const auto& iv : model.uncertainty.box) box.push_back({real_to_json(iv.lo), real_to_json(iv.hi)});
    json perts = json::array();
    for (const auto& p : model.uncertainty.perturbations) {
        perts.push_back({{"block", to_string(p.block)},
                         {"parameter", p.parameter},
                         {"coefficient", matrix_to_json(p.coefficient)}});
    }
    doc["uncertainty"] = {{"box", box}, {"perturbations", perts}};
    doc["notes"] = model.notes;
    return doc;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError(path.parent_path().string(), "cannot create directory: " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << text;
    if (!out) throw IoError(path.string(), "write failed");
}

void save_model(const ModelDocument& model, const std::filesystem::path& path) {
    write_text(path, model_to_json(model).dump(2) + "\n");
}

void RunConfig::validate() const {
    scenario.validate();
    solver.validate();
    risk.validate();
    if (oracle.T < 0 || oracle.N < 0) throw ValidationError("oracle", "horizons must be nonnegative");
    if (oracle.T > 0 && oracle.N > 0 && oracle.N < oracle.T) throw ValidationError("oracle.N", "must be at least T");
}

namespace {

RunConfig parse_run_config_fields(const json& doc) {
    if (!doc.is_object()) throw ValidationError("config", "document must be an object");
    RunConfig cfg;
    auto num = [&](const json& parent, const char* key, double& target, const std::string& where) {
        if (parent.contains(key)) target = real_from_json(parent.at(key), where + key);
    };
    num(doc, "epsilon1", cfg.scenario.epsilon1, "");
    num(doc, "beta1", cfg.scenario.beta1, "");
    num(doc, "beta", cfg.scenario.beta, "");
    if (doc.contains("seed")) cfg.scenario.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("samples") && !doc.at("samples").is_null()) {
        cfg.scenario.n_override = doc.at("samples").get<std::size_t>();
    }
    if (doc.contains("weights")) cfg.scenario.distribution.weights = doc.at("weights").get<std::vector<std::vector<double>>>();
    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        num(s, "gap_tol", cfg.solver.sdp.gap_tol, "solver.");
        num(s, "feasibility_tol", cfg.solver.sdp.feasibility_tol, "solver.");
        num(s, "infeasibility_tol", cfg.solver.sdp.infeasibility_tol, "solver.");
        num(s, "psd_tol", cfg.solver.psd_tol, "solver.");
        num(s, "gamma_max", cfg.solver.gamma_max, "solver.");
        if (s.contains("max_iterations")) cfg.solver.sdp.max_iterations = s.at("max_iterations").get<int>();
        if (s.contains("fdi_grid")) cfg.solver.fdi_grid = s.at("fdi_grid").get<int>();
        if (s.contains("bisection")) cfg.solver.bisection = s.at("bisection").get<bool>();
        if (s.contains("zeros")) {
            const json& z = s.at("zeros");
            num(z, "circle", cfg.solver.zero_tolerances.circle, "solver.zeros.");
            num(z, "share", cfg.solver.zero_tolerances.share, "solver.zeros.");
            num(z, "null", cfg.solver.zero_tolerances.null, "solver.zeros.");
        }
    }
    if (doc.contains("failure_budget")) cfg.risk.failure_budget = real_from_json(doc.at("failure_budget"), "failure_budget");
    if (doc.contains("workers")) cfg.risk.workers = doc.at("workers").get<unsigned>();
    if (doc.contains("oracle")) {
        const json& o = doc.at("oracle");
        if (o.contains("T")) cfg.oracle.T = o.at("T").get<Eigen::Index>();
        if (o.contains("N")) cfg.oracle.N = o.at("N").get<Eigen::Index>();
        if (o.contains("max_horizon")) cfg.oracle.max_horizon = o.at("max_horizon").get<Eigen::Index>();
    }
    if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("outputs")) {
        const json& o = doc.at("outputs");
        cfg.write_report = o.value("report", cfg.write_report);
        cfg.write_samples = o.value("samples", cfg.write_samples);
        cfg.write_plot = o.value("plot", cfg.write_plot);
    }
    cfg.canonical = doc.value("canonical", cfg.canonical);
    cfg.validate();
    return cfg;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
    try {
        return parse_run_config_fields(doc);
    } catch (const json::exception& e) {
        throw ValidationError("config", e.what());
    }
}

RunConfig load_run_config(const std::filesystem::path& path) {
    const json doc = read_json_file(path);
    try {
        return parse_run_config(doc);
    } catch (const json::exception& e) {
        throw ValidationError(path.string(), e.what());
    } catch (const ValidationError& e) {
        rethrow_in_file(path, e);
    }
}

namespace {

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(real_to_json(v(i)));
    return out;
}

json complex_to_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json cvector_to_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

json header(const char* kind, const ModelDocument& model) {
    json doc;
    doc["schema_version"] = schema_version;
    doc["kind"] = kind;
    doc["model"] = model.name;
    return doc;
}

json zero_to_json(const ZeroRecord& z) {
    return {{"z", complex_to_json(z.z)},
            {"modulus", std::abs(z.z)},
            {"direction", cvector_to_json(z.direction)},
            {"on_unit_circle", z.on_unit_circle},
            {"shared_with_performance", z.shared_with_performance},
            {"degraded", z.degraded}};
}

json boundedness_to_json(const BoundednessReport& b) {
    json circle = json::array();
    for (const auto& z : b.circle_zeros) circle.push_back(zero_to_json(z));
    json out = {{"class", to_string(b.kind)},
                {"bounded", b.bounded()},
                {"degraded", b.degraded},
                {"rank_deficient_everywhere", b.rank_deficient_everywhere},
                {"circle_zeros", circle}};
    out["witness"] = b.witness ? zero_to_json(*b.witness) : json(nullptr);
    return out;
}

json channels_to_json(const AttackSelection& atk, const ChannelSet& set) {
    json out = json::array();
    for (int c : set) out.push_back(atk.label(c));
    return out;
}

}  // namespace

json impact_report(const ModelDocument& model, const Vector& delta, const ImpactResult& result, const FdiResult& fdi,
                   double elapsed_seconds, bool canonical) {
    json doc = header("oog", model);
    doc["delta"] = vector_to_json(delta);
    doc["attack"] = {{"mode", to_string(model.system.attack.mode())},
                     {"channels", channels_to_json(model.system.attack, model.system.attack.channels())}};
    doc["status"] = to_string(result.status);
    doc["gamma"] = real_to_json(result.bounded() ? result.gamma * model.system.residual_threshold : result.gamma);
    doc["residual_threshold"] = real_to_json(model.system.residual_threshold);
    doc["solver"] = {{"sdp_status", sdp::to_string(result.stats.sdp_status)},
                     {"inaccurate", result.stats.inaccurate},
                     {"infeasible_to_gamma_max", result.stats.infeasible_to_bracket},
                     {"iterations", result.stats.iterations},
                     {"relative_gap", result.stats.relative_gap},
                     {"primal_residual", result.stats.primal_residual},
                     {"dual_residual", result.stats.dual_residual},
                     {"certificate_max_eigenvalue", result.stats.certificate_max_eigenvalue}};
    doc["fdi"] = {{"applicable", fdi.applicable},
                  {"min_eigenvalue", real_to_json(fdi.min_eigenvalue)},
                  {"theta", fdi.theta}};
    doc["boundedness"] = boundedness_to_json(result.boundedness);
    doc["diagnostics"] = result.diagnostics;
    if (!canonical) doc["elapsed_seconds"] = elapsed_seconds;
    return doc;
}

json zeros_report(const ModelDocument& model, const Vector& delta, const std::vector<ZeroRecord>& zeros,
                  const BoundednessReport& boundedness) {
    json doc = header("zeros", model);
    doc["delta"] = vector_to_json(delta);
    json zs = json::array();
    for (const auto& z : zeros) zs.push_back(zero_to_json(z));
    doc["zeros"] = zs;
    doc["boundedness"] = boundedness_to_json(boundedness);
    return doc;
}

json risk_report(const ModelDocument& model, const RiskReport& report,
                 const std::vector<std::pair<double, double>>& curve, bool canonical) {
    json doc = header("risk", model);
    doc["attack"] = {{"mode", to_string(model.system.attack.mode())},
                     {"channels", channels_to_json(model.system.attack, model.system.attack.channels())}};
    doc["var"] = real_to_json(report.var_value);
    doc["beta"] = report.beta;
    doc["epsilon1"] = report.epsilon1;
    doc["beta1"] = report.beta1;
    doc["n1"] = report.n1;
    doc["required_n1"] = required_sample_count(report.epsilon1, report.beta1);
    doc["seed"] = report.seed;
    doc["bounded_count"] = report.bounded_count;
    doc["failure_count"] = report.failure_count;
    doc["residual_threshold"] = real_to_json(report.residual_threshold);
    doc["warnings"] = report.warnings;
    json samples = json::array();
    for (const auto& s : report.samples) {
        samples.push_back({{"index", s.index},
                           {"delta", vector_to_json(s.delta)},
                           {"gamma", real_to_json(s.gamma)},
                           {"status", to_string(s.status)}});
    }
    doc["samples"] = samples;
    json c = json::array();
    for (const auto& [b, v] : curve) c.push_back({{"beta", b}, {"var", real_to_json(v)}});
    doc["var_curve"] = c;
    if (!canonical) doc["elapsed_seconds"] = report.elapsed_seconds;
    return doc;
}

json allocation_report(const ModelDocument& model, const AllocationProblem& problem, const AllocationResult& result,
                       const std::vector<MetricComparison>& comparison, double elapsed_seconds, bool canonical) {
    const AttackSelection& atk = model.system.attack;
    json doc = header("allocation", model);
    doc["mode"] = to_string(atk.mode());
    doc["vulnerabilities"] = channels_to_json(atk, problem.vulnerabilities);
    doc["budget"] = problem.budget;
    doc["metric"] = to_string(result.metric);
    doc["best_set"] = channels_to_json(atk, result.best_set);
    doc["best_value"] = real_to_json(result.best_value);
    json ledger = json::array();
    for (const auto& e : result.ledger) {
        ledger.push_back({{"protected", channels_to_json(atk, e.protected_channels)},
                          {"value", real_to_json(e.value)},
                          {"bounded_count", e.bounded_count},
                          {"failure_count", e.failure_count}});
    }
    doc["ledger"] = ledger;
    json cmp = json::array();
    for (const auto& c : comparison) {
        cmp.push_back({{"protected", channels_to_json(atk, c.protected_channels)},
                       {"var", real_to_json(c.var_value)},
                       {"nominal", real_to_json(c.nominal_value)}});
    }
    doc["comparison"] = cmp;
    doc["warnings"] = result.warnings;
    if (!canonical) doc["elapsed_seconds"] = elapsed_seconds;
    return doc;
}

json validation_report(const ModelDocument& model, const std::vector<ValidationCase>& cases, double elapsed_seconds,
                       bool canonical) {
    json doc = header("validate", model);
    json out = json::array();
    for (const auto& c : cases) {
        const double g = c.sdp.bounded() ? c.sdp.gamma : std::numeric_limits<double>::infinity();
        json entry = {{"delta", vector_to_json(c.delta)},
                      {"sdp_status", to_string(c.sdp.status)},
                      {"sdp_gamma", real_to_json(g)},
                      {"oracle_status", to_string(c.oracle.status)},
                      {"oracle_bound", real_to_json(c.oracle.bound)},
                      {"oracle_T", c.oracle.T},
                      {"oracle_N", c.oracle.N},
                      {"oracle_tail_estimate", c.oracle.tail_estimate},
                      {"replay_stealthy", c.replay.stealthy},
                      {"replay_impact", c.replay.impact},
                      {"replay_residual_energy", c.replay.residual_energy}};
        const bool comparable = c.sdp.bounded() && c.oracle.status == OracleStatus::bounded;
        entry["ratio"] = comparable && g > 0.0 ? json(c.oracle.bound / g) : json(nullptr);
        entry["lower_bound_holds"] = comparable ? json(c.oracle.bound <= g * (1.0 + 1e-6) + 1e-6) : json(nullptr);
        out.push_back(std::move(entry));
    }
    doc["cases"] = out;
    if (!canonical) doc["elapsed_seconds"] = elapsed_seconds;
    return doc;
}

std::string samples_table(const RiskReport& report) {
    std::ostringstream os;
    const std::size_t d = report.samples.empty() ? 0 : static_cast<std::size_t>(report.samples.front().delta.size());
    os << "index";
    for (std::size_t j = 0; j < d; ++j) os << ",delta_" << (j + 1);
    os << ",gamma,status\n";
    for (const auto& s : report.samples) {
        os << s.index;
        for (Eigen::Index j = 0; j < s.delta.size(); ++j) os << "," << format_real(s.delta(j));
        os << "," << format_real(s.gamma) << "," << to_string(s.status) << "\n";
    }
    return os.str();
}

std::string var_curve_table(const RiskReport& report, const std::vector<std::pair<double, double>>& curve) {
    std::ostringstream os;
    os << "row,beta,var,index,delta,gamma,above_var\n";
    for (const auto& [b, v] : curve) os << "curve," << format_real(b) << "," << format_real(v) << ",,,,\n";
    for (const auto& s : report.samples) {
        os << "sample," << format_real(report.beta) << "," << format_real(report.var_value) << "," << s.index << ",";
        for (Eigen::Index j = 0; j < s.delta.size(); ++j) os << (j ? ";" : "") << format_real(s.delta(j));
        os << "," << format_real(s.gamma) << "," << (s.gamma > report.var_value ? 1 : 0) << "\n";
    }
    return os.str();
}

std::string metric_table(const AttackSelection& attack, const std::vector<MetricComparison>& comparison) {
    std::ostringstream os;
    os << "protected,var,nominal\n";
    for (const auto& c : comparison) {
        os << "\"" << set_label(attack, c.protected_channels) << "\"," << format_real(c.var_value) << ","
           << format_real(c.nominal_value) << "\n";
    }
    return os.str();
}

std::string ledger_table(const AttackSelection& attack, const AllocationResult& result) {
    std::ostringstream os;
    os << "protected,metric,value,bounded_count,failure_count\n";
    for (const auto& e : result.ledger) {
        os << "\"" << set_label(attack, e.protected_channels) << "\"," << to_string(result.metric) << ","
           << format_real(e.value) << "," << e.bounded_count << "," << e.failure_count << "\n";
    }
    return os.str();
}

json error_document(const std::string& kind, const std::string& where, const std::string& message, int exit_code) {
    return {{"schema_version", schema_version},
            {"kind", "error"},
            {"error", {{"type", kind}, {"where", where}, {"message", message}}},
            {"exit_code", exit_code}};
}

}  // namespace oogrisk::io
