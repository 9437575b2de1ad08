#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "run_config.hpp"

namespace mirrorvac::cli {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// Extra "# key: value" lines after the provenance block.
    std::vector<std::pair<std::string, std::string>> notes;
};

struct RunOutcome {
    Table table;
    bool converged = true;
    double max_rel_tol = 0.0;
    /// Flat diagnostics copied into the sidecar with a "diag_" prefix.
    nlohmann::json diagnostics = nlohmann::json::object();
};

/// Runs the configured command (and sweep, if any). Throws the library's
/// exceptions on invalid input.
RunOutcome execute(const RunConfig& config);

/// 17 significant digits, scientific.
std::string format_number(double v);

/// '#' provenance block, header row, records. Thread count and output
/// path are left out so identical configs give identical bytes.
std::string render_csv(const RunConfig& config, const RunOutcome& outcome);

nlohmann::json sidecar(const RunConfig& config, const RunOutcome& outcome, double wall_seconds);

/// Path of the JSON sidecar for a CSV path: foo.csv -> foo.json.
std::string sidecar_path(const std::string& csv_path);

}  // namespace mirrorvac::cli
