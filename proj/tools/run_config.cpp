#include "run_config.hpp"

#include <cmath>
#include <sstream>

#include "mirrorvac/errors.hpp"

namespace mirrorvac::cli {

namespace {

constexpr double kHbarSI = 1.054571817e-34;
constexpr double kLightSI = 299792458.0;

template <typename T>
void read(const nlohmann::json& j, const char* key, T& into) {
    if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<T>();
}

}  // namespace

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["command"] = c.command;
    j["mass"] = c.mass;
    j["omega0"] = c.omega0;
    j["length"] = c.length;
    j["hbar"] = c.hbar;
    j["c"] = c.c;
    j["lambda"] = c.lambda ? nlohmann::json(*c.lambda) : nlohmann::json(nullptr);
    j["si"] = c.si;
    j["cutoff"] = c.cutoff;
    j["modes"] = c.modes ? nlohmann::json(*c.modes) : nlohmann::json(nullptr);
    j["points"] = c.points;
    j["x"] = c.x;
    j["component"] = c.component;
    j["convention"] = c.convention;
    j["terms"] = c.terms;
    j["x1"] = c.x1;
    j["x2"] = c.x2;
    j["grid"] = c.grid;
    j["xt1"] = c.xt1;
    j["xt2"] = c.xt2;
    j["method"] = c.method;
    j["rel_tol"] = c.rel_tol;
    j["negativity"] = c.negativity;
    j["bin_width"] = c.bin_width;
    j["quantity"] = c.quantity;
    j["axis"] = c.axis;
    j["probe"] = c.probe;
    j["probe_xt"] = c.probe_xt;
    j["cavities"] = c.cavities;
    j["observable"] = c.observable;
    j["photons"] = c.photons;
    j["mirror"] = c.mirror;
    j["lambdas"] = c.lambdas;
    j["sweep_param"] = c.sweep_param;
    j["sweep_values"] = c.sweep_values;
    j["threads"] = c.threads;
    j["out"] = c.out;
    return j;
}

RunConfig from_json(const nlohmann::json& j) {
    RunConfig c;
    read(j, "command", c.command);
    read(j, "mass", c.mass);
    read(j, "omega0", c.omega0);
    read(j, "length", c.length);
    read(j, "hbar", c.hbar);
    read(j, "c", c.c);
    if (j.contains("lambda") && !j.at("lambda").is_null()) c.lambda = j.at("lambda").get<double>();
    read(j, "si", c.si);
    read(j, "cutoff", c.cutoff);
    if (j.contains("modes") && !j.at("modes").is_null()) c.modes = j.at("modes").get<int>();
    read(j, "points", c.points);
    read(j, "x", c.x);
    read(j, "component", c.component);
    read(j, "convention", c.convention);
    read(j, "terms", c.terms);
    read(j, "x1", c.x1);
    read(j, "x2", c.x2);
    read(j, "grid", c.grid);
    read(j, "xt1", c.xt1);
    read(j, "xt2", c.xt2);
    read(j, "method", c.method);
    read(j, "rel_tol", c.rel_tol);
    read(j, "negativity", c.negativity);
    read(j, "bin_width", c.bin_width);
    read(j, "quantity", c.quantity);
    read(j, "axis", c.axis);
    read(j, "probe", c.probe);
    read(j, "probe_xt", c.probe_xt);
    read(j, "cavities", c.cavities);
    read(j, "observable", c.observable);
    read(j, "photons", c.photons);
    read(j, "mirror", c.mirror);
    read(j, "lambdas", c.lambdas);
    read(j, "sweep_param", c.sweep_param);
    read(j, "sweep_values", c.sweep_values);
    read(j, "threads", c.threads);
    read(j, "out", c.out);
    return c;
}

UnitScale unit_scale(const RunConfig& config) {
    if (!config.si) return {};
    return {config.length, kLightSI / config.length};
}

PhysicalParams resolve_params(const RunConfig& config) {
    PhysicalParams p;
    if (config.si) {
        // Natural units with hbar = c = 1 and length unit L: time unit L/c,
        // mass unit hbar / (c L).
        if (!(config.length > 0.0)) throw ParameterError("length must be positive");
        const UnitScale u = unit_scale(config);
        p.length = 1.0;
        p.omega0 = config.omega0 / u.frequency;
        p.mass = config.mass * kLightSI * config.length / kHbarSI;
        p.hbar = 1.0;
        p.c = 1.0;
    } else {
        p.mass = config.mass;
        p.omega0 = config.omega0;
        p.length = config.length;
        p.hbar = config.hbar;
        p.c = config.c;
    }
    if (config.lambda) p = PhysicalParams::from_lambda(*config.lambda, p.omega0, p.length, p.hbar, p.c);
    p.validate();
    return p;
}

CutoffSpec parse_cutoff(const std::string& text, const PhysicalParams& params, const RunConfig& config) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("cutoff must look like exp:50, exp:50w0 or sharp:20");
    const std::string kind = text.substr(0, colon);
    std::string value = text.substr(colon + 1);
    bool relative = false;
    if (value.size() > 2 && value.substr(value.size() - 2) == "w0") {
        relative = true;
        value.resize(value.size() - 2);
    }
    double omega_m = 0.0;
    try {
        std::size_t used = 0;
        omega_m = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
        throw UsageError("cannot parse cutoff frequency in '" + text + "'");
    }
    if (relative) {
        omega_m *= params.omega0;
    } else if (config.si) {
        omega_m /= unit_scale(config).frequency;
    }
    CutoffSpec spec;
    if (kind == "exp") {
        spec = CutoffSpec::exponential(omega_m);
    } else if (kind == "sharp") {
        spec = CutoffSpec::sharp(omega_m, SharpRule::PerMode);
    } else if (kind == "sharp-sum") {
        spec = CutoffSpec::sharp(omega_m, SharpRule::FrequencySum);
    } else {
        throw UsageError("unknown cutoff kind '" + kind + "' (exp, sharp, sharp-sum)");
    }
    spec.validate();
    return spec;
}

RunConfig with_sweep_value(const RunConfig& config, double value) {
    RunConfig c = config;
    const std::string& p = config.sweep_param;
    if (p == "mass") {
        c.mass = value;
        c.lambda.reset();
    } else if (p == "omega0") {
        c.omega0 = value;
    } else if (p == "length") {
        c.length = value;
    } else if (p == "lambda") {
        c.lambda = value;
    } else if (p == "omegaM" || p == "omega_m") {
        const auto colon = c.cutoff.find(':');
        const bool relative = c.cutoff.size() > 2 && c.cutoff.substr(c.cutoff.size() - 2) == "w0";
        std::ostringstream os;
        os.precision(17);
        os << c.cutoff.substr(0, colon + 1) << value << (relative ? "w0" : "");
        c.cutoff = os.str();
    } else if (p == "xt") {
        c.xt1 = {value};
        c.xt2 = {value};
    } else {
        throw UsageError("cannot sweep '" + p + "' (mass, omega0, length, lambda, omegaM, xt)");
    }
    return c;
}

}  // namespace mirrorvac::cli
