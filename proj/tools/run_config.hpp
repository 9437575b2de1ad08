#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mirrorvac/model.hpp"

namespace mirrorvac::cli {

/// Everything a run needs. Serialized verbatim into the CSV header and the
/// JSON sidecar, so a run can be repeated from either.
struct RunConfig {
    std::string command;

    double mass = 1.0;
    double omega0 = 1.0;
    double length = 1.0;
    double hbar = 1.0;
    double c = 1.0;
    std::optional<double> lambda;  ///< overrides mass when set
    bool si = false;               ///< inputs in kg, 1/s, m

    std::string cutoff = "exp:50w0";
    std::optional<int> modes;

    // single-cavity grids
    int points = 200;
    std::vector<double> x;
    std::string component = "E";
    std::string convention = "cavity";
    std::string terms = "complete";

    // correlations
    std::vector<double> x1;
    std::vector<double> x2;
    int grid = 10;
    std::vector<double> xt1;
    std::vector<double> xt2;
    std::string method;
    double rel_tol = 1e-6;
    std::string negativity = "warn";

    // spectrum
    double bin_width = 0.0;  ///< 0 means omega0 / 20

    // scaling probe
    std::string quantity = "asymptotic";
    std::string axis = "distance";
    std::vector<double> probe;
    double probe_xt = 10.0;

    // oracle
    std::string cavities = "one";
    std::string observable = "energy-shift";
    int photons = 8;
    int mirror = 8;
    std::vector<double> lambdas{0.05, 0.025, 0.0125};

    // sweep over one parameter
    std::string sweep_param;
    std::vector<double> sweep_values;

    int threads = 0;
    std::string out;  ///< CSV path; empty or "-" writes to stdout
};

nlohmann::json to_json(const RunConfig& config);
RunConfig from_json(const nlohmann::json& j);

/// Natural-unit parameters after SI conversion and the lambda override.
PhysicalParams resolve_params(const RunConfig& config);

/// "exp:50", "exp:50w0" (multiples of omega0), "sharp:20", "sharp-sum:20".
CutoffSpec parse_cutoff(const std::string& text, const PhysicalParams& params, const RunConfig& config);

/// SI conversion factors to natural units with length unit L.
struct UnitScale {
    double length = 1.0;     ///< metres per natural length
    double frequency = 1.0;  ///< 1/s per natural frequency
};
UnitScale unit_scale(const RunConfig& config);

/// Applies a sweep value to a copy of the config.
RunConfig with_sweep_value(const RunConfig& config, double value);

}  // namespace mirrorvac::cli
