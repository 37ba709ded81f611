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

#ifndef OOGRISK_IO_HPP
#define OOGRISK_IO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "oogrisk/allocation.hpp"
#include "oogrisk/boundedness.hpp"
#include "oogrisk/impact.hpp"
#include "oogrisk/oracle.hpp"
#include "oogrisk/risk.hpp"
#include "oogrisk/uncertainty.hpp"

namespace oogrisk::io {

using json = nlohmann::json;

inline constexpr int schema_version = 1;

/// Model file contents: the loop, the uncertainty family and free-form metadata.
struct ModelDocument {
    std::string name;
    std::string description;
    SystemModel system;
    UncertaintySpec uncertainty;
    json notes = json::object();
};

/**
 * @brief Parses a model document.
 *
 * Matrices are row-major lists of rows. Omitted controller and detector blocks
 * default to zeros of the shape implied by the others. Perturbations either
 * give a full `coefficient` matrix or sparse `entries` of [row, col, value].
 */
ModelDocument parse_model(const json& doc);
ModelDocument load_model(const std::filesystem::path& path);

json model_to_json(const ModelDocument& model);
void save_model(const ModelDocument& model, const std::filesystem::path& path);

/// Reals with +inf and -inf written as the strings "inf" and "-inf".
json real_to_json(double value);
double real_from_json(const json& value, const std::string& where);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& value, const std::string& where);

/// Shortest round-trip decimal, "inf" for infinity; used for the CSV tables.
std::string format_real(double value);

/// Options shared by the command-line subcommands; every field may come from a config file.
struct RunConfig {
    ScenarioConfig scenario;
    SolverConfig solver;
    RiskOptions risk;
    OracleOptions oracle;
    std::filesystem::path output_dir;
    bool write_report = true;
    bool write_samples = true;
    bool write_plot = true;
    bool canonical = false;  ///< leave out timing so reports are byte-identical across runs

    void validate() const;
};

/// Reads a config document; absent fields keep their defaults.
RunConfig parse_run_config(const json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

json impact_report(const ModelDocument& model, const Vector& delta, const ImpactResult& result,
                   const FdiResult& fdi, double elapsed_seconds, bool canonical);
json zeros_report(const ModelDocument& model, const Vector& delta, const std::vector<ZeroRecord>& zeros,
                  const BoundednessReport& boundedness);
json risk_report(const ModelDocument& model, const RiskReport& report,
                 const std::vector<std::pair<double, double>>& curve, bool canonical);
json allocation_report(const ModelDocument& model, const AllocationProblem& problem, const AllocationResult& result,
                       const std::vector<MetricComparison>& comparison, double elapsed_seconds, bool canonical);

struct ValidationCase {
    Vector delta;
    ImpactResult sdp;
    OracleResult oracle;
    AttackCheck replay;
};

json validation_report(const ModelDocument& model, const std::vector<ValidationCase>& cases, double elapsed_seconds,
                       bool canonical);

/// Per-sample table: index, delta_1..delta_d, gamma, status.
std::string samples_table(const RiskReport& report);

/// VaR curve rows then one row per sample flagged above or at/below VaR_beta.
std::string var_curve_table(const RiskReport& report, const std::vector<std::pair<double, double>>& curve);

/// One row per protection set with both metrics.
std::string metric_table(const AttackSelection& attack, const std::vector<MetricComparison>& comparison);

/// One row per protection set of a single-metric search.
std::string ledger_table(const AttackSelection& attack, const AllocationResult& result);

/// Error document written to stderr on failure.
json error_document(const std::string& kind, const std::string& where, const std::string& message, int exit_code);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace oogrisk::io

#endif  // OOGRISK_IO_HPP
