#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "mirrorvac/continuum.hpp"
#include "mirrorvac/errors.hpp"
#include "mirrorvac/oracle.hpp"
#include "mirrorvac/parallel.hpp"
#include "mirrorvac/perturb.hpp"
#include "mirrorvac/single_cavity.hpp"
#include "mirrorvac/two_cavity.hpp"

namespace mirrorvac::cli {

namespace {

using Row = std::vector<std::string>;

std::string fmt_int(long long v) { return std::to_string(v); }

std::vector<double> scaled(const std::vector<double>& v, double unit) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [unit](double x) { return x / unit; });
    return out;
}

void require_exponential(const CutoffSpec& cutoff, const std::string& what) {
    if (cutoff.kind != CutoffKind::Exponential) {
        throw UsageError(what + " is defined for the exponential cutoff only; use --cutoff exp:...");
    }
}

RunOutcome energy_shift_cmd(const RunConfig& cfg, const PhysicalParams& p, const CutoffSpec& cut) {
    RunOutcome out;
    const int modes = cfg.modes.value_or(required_mode_count(p, cut, 2));
    const double de = energy_shift(p, cut, modes);
    out.table.header = {"mass", "omega0", "length", "lambda", "omega_m", "cutoff", "modes", "delta_e"};
    out.table.rows.push_back({format_number(p.mass), format_number(p.omega0), format_number(p.length),
                              format_number(p.coupling_lambda()), format_number(cut.omega_m),
                              to_string(cut.kind), fmt_int(modes), format_number(de)});
    return out;
}

RunOutcome spectrum_cmd(const RunConfig& cfg, const PhysicalParams& p, const CutoffSpec& cut) {
    RunOutcome out;
    const auto amps = dressed_amplitudes(p, cut, cfg.modes);
    double width = cfg.bin_width > 0.0 ? cfg.bin_width : p.omega0 / 20.0;
    if (cfg.si && cfg.bin_width > 0.0) width /= unit_scale(cfg).frequency;
    const auto spec = photon_spectrum(amps, width);
    out.table.header = {"bin_lo", "bin_hi", "weight"};
    for (std::size_t i = 0; i < spec.weights.size(); ++i) {
        out.table.rows.push_back(
            {format_number(spec.bin_edges[i]), format_number(spec.bin_edges[i + 1]), format_number(spec.weights[i])});
    }
    out.table.notes = {{"peak_frequency", format_number(spec.peak_frequency)},
                       {"lambda_sq", format_number(amps.lambda_sq)},
                       {"total_weight", format_number(spec.total_weight)}};
    out.diagnostics["peak_frequency"] = spec.peak_frequency;
    out.diagnostics["peak_over_omega0"] = spec.peak_frequency / p.omega0;
    out.diagnostics["lambda_sq"] = amps.lambda_sq;
    return out;
}

ProfileOptions profile_options(const RunConfig& cfg) {
    ProfileOptions o;
    o.mode_count = cfg.modes;
    o.threads = cfg.threads;
    if (cfg.convention == "cavity") {
        o.convention = CoordinateConvention::CavityCoordinate;
    } else if (cfg.convention == "distance") {
        o.convention = CoordinateConvention::DistanceFromMovableWall;
    } else {
        throw UsageError("--convention must be cavity or distance");
    }
    if (cfg.terms == "complete") {
        o.terms = SecondOrderTerms::Complete;
    } else if (cfg.terms == "pair-population") {
        o.terms = SecondOrderTerms::PairPopulationOnly;
    } else {
        throw UsageError("--terms must be complete or pair-population");
    }
    return o;
}

RunOutcome profile_cmd(const RunConfig& cfg, const PhysicalParams& p, const CutoffSpec& cut) {
    const std::vector<double> grid = cfg.x.empty() ? default_grid(p, cfg.points) : scaled(cfg.x, unit_scale(cfg).length);
    const ProfileOptions opts = profile_options(cfg);
    ObservableProfile prof;
    if (cfg.command == "energy-density") {
        prof = delta_energy_density(p, cut, grid, opts);
    } else {
        FieldComponent comp;
        if (cfg.component == "E") {
            comp = FieldComponent::E;
        } else if (cfg.component == "B") {
            comp = FieldComponent::B;
        } else {
            throw UsageError("--component must be E or B");
        }
        prof = em_field_fluctuations(p, cut, grid, comp, opts);
    }
    RunOutcome out;
    out.table.header = {"x", "distance", "value", "method", "rel_tol"};
    for (std::size_t i = 0; i < prof.values.size(); ++i) {
        out.table.rows.push_back({format_number(prof.positions[i]), format_number(prof.distances[i]),
                                  format_number(prof.values[i]), "discrete-sum", format_number(0.0)});
    }
    out.table.notes = {{"kind", to_string(prof.kind)},
                       {"modes", fmt_int(prof.mode_count)},
                       {"convention", to_string(prof.convention)},
                       {"terms", to_string(prof.terms)}};
    out.diagnostics["modes"] = prof.mode_count;
    return out;
}

std::vector<double> reference_axis(int n, double lo, double L) {
    if (n < 1) throw UsageError("--grid must be positive");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (i + 0.5) * L / n;
    return v;
}

RunOutcome distance_table(const RunConfig& cfg, const PhysicalParams& p, const CutoffSpec& cut, bool asymptotic) {
    if (cfg.xt1.empty() || cfg.xt2.empty()) throw UsageError("--xt1 and --xt2 are required");
    const double unit = unit_scale(cfg).length;
    const auto xt1 = scaled(cfg.xt1, unit);
    const auto xt2 = scaled(cfg.xt2, unit);
    RunOutcome out;
    out.table.header = {"xt1", "xt2", "value", "separable_part", "method", "rel_tol", "evaluations", "converged"};
    std::vector<Row> rows(xt1.size() * xt2.size());
    std::vector<ContinuumPoint> pts(rows.size());
    ContinuumOptions opts;
    opts.rel_tol = cfg.rel_tol;
    opts.throw_on_failure = false;
    opts.threads = 1;
    if (cfg.method == "full") {
        opts.method = ContinuumMethod::FullQuadrature;
    } else if (cfg.method.empty() || cfg.method == "partial" || cfg.method == "continuum") {
        opts.method = ContinuumMethod::PartialAnalytic;
    } else if (!asymptotic) {
        throw UsageError("--method for continuum must be partial or full");
    }
    parallel_for(rows.size(), [&](std::size_t k) {
        const double a = xt1[k / xt2.size()];
        const double b = xt2[k % xt2.size()];
        if (asymptotic) {
            pts[k].xt1 = a;
            pts[k].xt2 = b;
            pts[k].value = asymptotic_correlation(p, a, b);
            pts[k].converged = true;
        } else {
            pts[k] = continuum_correlation(p, cut.omega_m, a, b, opts);
        }
    }, cfg.threads);
    for (const auto& pt : pts) {
        const bool exact = asymptotic;
        out.table.rows.push_back({format_number(pt.xt1), format_number(pt.xt2), format_number(pt.value),
                                  exact ? "" : format_number(pt.separable_part),
                                  exact ? "asymptotic" : to_string(pt.method), format_number(pt.rel_tol),
                                  fmt_int(static_cast<long long>(pt.evaluations)), pt.converged ? "1" : "0"});
        out.converged = out.converged && pt.converged;
        out.max_rel_tol = std::max(out.max_rel_tol, pt.rel_tol);
    }
    return out;
}

RunOutcome correlation_cmd(const RunConfig& cfg, const PhysicalParams& p, const CutoffSpec& cut) {
    const std::string method = cfg.method.empty() ? "discrete" : cfg.method;
    if (method == "asymptotic") {
        if (cut.kind == CutoffKind::Sharp) {
            throw UsageError("--method asymptotic cannot be combined with a sharp cutoff");
        }
        return distance_table(cfg, p, cut, true);
    }
    if (method == "continuum") {
        require_exponential(cut, "the continuum correlation");
        return distance_table(cfg, p, cut, false);
    }
    if (method != "discrete") throw UsageError("--method must be discrete, continuum or asymptotic");

    const double L = p.length;
    const double unit = unit_scale(cfg).length;
    const std::vector<double> x1 = cfg.x1.empty() ? reference_axis(cfg.grid, 0.0, L) : scaled(cfg.x1, unit);
    const std::vector<double> x2 = cfg.x2.empty() ? reference_axis(cfg.grid, L, L) : scaled(cfg.x2, unit);
    CorrelationOptions opts;
    opts.mode_count = cfg.modes;
    opts.threads = cfg.threads;
    if (cfg.negativity == "fail") {
        opts.negativity = NegativityEnforcement::Fail;
    } else if (cfg.negativity != "warn") {
        throw UsageError("--negativity must be warn or fail");
    }
    const CorrelationGrid g = squared_field_correlation_discrete(p, cut, x1, x2, opts);
    RunOutcome out;
    out.table.header = {"x1", "x2", "xt1", "xt2", "value", "method", "rel_tol"};
    for (std::size_t i = 0; i < x1.size(); ++i) {
        for (std::size_t j = 0; j < x2.size(); ++j) {
            out.table.rows.push_back({format_number(x1[i]), format_number(x2[j]), format_number(g.xt1(i)),
                                      format_number(g.xt2(j)), format_number(g.at(i, j)), "discrete-sum",
                                      format_number(0.0)});
        }
    }
    out.table.notes = {{"modes", fmt_int(g.mode_count)}, {"all_negative", g.all_negative ? "true" : "false"}};
    out.diagnostics["modes"] = g.mode_count;
    out.diagnostics["all_negative"] = g.all_negative;
    return out;
}

RunOutcome continuum_cmd(const RunConfig& cfg, const PhysicalParams& p, const CutoffSpec& cut) {
    require_exponential(cut, "the continuum correlation");
    return distance_table(cfg, p, cut, false);
}

RunOutcome scaling_cmd(const RunConfig& cfg, const PhysicalParams& p, const CutoffSpec& cut) {
    ScalingProbe probe;
    if (cfg.quantity == "asymptotic") {
        probe.quantity = ScalingQuantity::Asymptotic;
    } else if (cfg.quantity == "continuum") {
        require_exponential(cut, "the continuum scaling probe");
        probe.quantity = ScalingQuantity::Continuum;
    } else {
        throw UsageError("--quantity must be asymptotic or continuum");
    }
    if (cfg.axis == "mass") {
        probe.axis = ScalingAxis::Mass;
    } else if (cfg.axis == "omega0") {
        probe.axis = ScalingAxis::Omega0;
    } else if (cfg.axis == "distance") {
        probe.axis = ScalingAxis::Distance;
    } else {
        throw UsageError("--axis must be mass, omega0 or distance");
    }
    probe.points = cfg.probe;
    probe.omega_m = cut.omega_m;
    probe.xt1 = probe.xt2 = cfg.probe_xt;
    probe.options.rel_tol = cfg.rel_tol;
    probe.options.threads = cfg.threads;
    const auto samples = scaling_probe(p, probe);
    RunOutcome out;
    out.table.header = {"parameter", "value", "log_slope"};
    for (const auto& s : samples) {
        out.table.rows.push_back({format_number(s.parameter), format_number(s.value), format_number(s.log_slope)});
    }
    out.table.notes = {{"quantity", to_string(probe.quantity)}, {"axis", to_string(probe.axis)}};
    return out;
}

RunOutcome oracle_cmd(const RunConfig& cfg, const PhysicalParams& base) {
    const Cavities cav = cfg.cavities == "two" ? Cavities::Two : Cavities::One;
    if (cfg.cavities != "one" && cfg.cavities != "two") throw UsageError("--cavities must be one or two");
    TruncationSpec t;
    t.modes_per_cavity = cfg.modes.value_or(cav == Cavities::One ? 2 : 1);
    t.max_photons_per_mode = cfg.photons;
    t.max_mirror_quanta = cfg.mirror;
    const double L = base.length;
    const ModeSet ms(t.modes_per_cavity, L, base.c);
    const CutoffSpec cut = CutoffSpec::sharp(ms.frequency(t.modes_per_cavity) * (1.0 + 1e-9));
    const double unit = unit_scale(cfg).length;

    struct Point {
        double x1, x2;
    };
    std::vector<Point> points;
    const std::string& obs = cfg.observable;
    if (obs == "energy-shift") {
        points.push_back({std::nan(""), std::nan("")});
    } else if (obs == "energy-density") {
        for (double x : cfg.x.empty() ? std::vector<double>{0.5 * L, 0.9 * L} : scaled(cfg.x, unit)) {
            points.push_back({x, std::nan("")});
        }
    } else if (obs == "phi2phi2" || obs == "phi1phi2") {
        if (cav != Cavities::Two) throw UsageError("cross-cavity observables need --cavities two");
        const auto x1 = cfg.x1.empty() ? std::vector<double>{0.5 * L} : scaled(cfg.x1, unit);
        const auto x2 = cfg.x2.empty() ? std::vector<double>{1.5 * L} : scaled(cfg.x2, unit);
        for (double a : x1) {
            for (double b : x2) points.push_back({a, b});
        }
    } else {
        throw UsageError("--observable must be energy-shift, energy-density, phi2phi2 or phi1phi2");
    }
    if (cfg.lambdas.empty()) throw UsageError("--lambdas needs at least one value");

    RunOutcome out;
    out.table.header = {"lambda", "observable", "x1", "x2", "oracle", "perturbative", "rel_error",
                        "error_ratio", "residual", "odd_weight"};
    std::vector<double> prev_err(points.size(), std::nan(""));
    for (double lam : cfg.lambdas) {
        const PhysicalParams p = PhysicalParams::from_lambda(lam, base.omega0, L, base.hbar, base.c);
        const OracleState st = ground_state(build_hamiltonian(p, t, cav));
        const double odd = odd_parity_weight(st);
        for (std::size_t k = 0; k < points.size(); ++k) {
            const auto [x1, x2] = points[k];
            double oracle = 0.0, pert = 0.0;
            if (obs == "energy-shift") {
                oracle = st.result.energy_shift;
                pert = energy_shift(p, cut, t.modes_per_cavity);
            } else if (obs == "energy-density") {
                oracle = expectation(st, {ObservableKind::EnergyDensity, x1, 0.0});
                ProfileOptions po;
                po.mode_count = t.modes_per_cavity;
                const std::vector<double> g{x1};
                pert = delta_energy_density(p, cut, g, po).values[0];
            } else if (obs == "phi2phi2") {
                oracle = expectation(st, {ObservableKind::Phi2Phi2, x1, x2});
                CorrelationOptions co;
                co.mode_count = t.modes_per_cavity;
                const std::vector<double> a{x1}, b{x2};
                pert = squared_field_correlation_discrete(p, cut, a, b, co).values[0];
            } else {
                oracle = expectation(st, {ObservableKind::Phi1Phi2, x1, x2});
                pert = phi_phi_cross_correlation(p, cut, x1, x2);
            }
            const double err = pert != 0.0 ? std::abs(oracle - pert) / std::abs(pert) : std::abs(oracle - pert);
            const double ratio = prev_err[k] / err;
            prev_err[k] = err;
            out.table.rows.push_back({format_number(lam), obs, std::isnan(x1) ? "" : format_number(x1),
                                      std::isnan(x2) ? "" : format_number(x2), format_number(oracle),
                                      format_number(pert), format_number(err),
                                      std::isnan(ratio) ? "" : format_number(ratio),
                                      format_number(st.result.residual_norm), format_number(odd)});
        }
    }
    out.table.notes = {{"modes_per_cavity", fmt_int(t.modes_per_cavity)},
                       {"max_photons_per_mode", fmt_int(t.max_photons_per_mode)},
                       {"max_mirror_quanta", fmt_int(t.max_mirror_quanta)},
                       {"cavities", to_string(cav)}};
    return out;
}

RunOutcome execute_single(const RunConfig& cfg) {
    const PhysicalParams p = resolve_params(cfg);
    if (cfg.command == "oracle-validate") return oracle_cmd(cfg, p);
    const CutoffSpec cut = parse_cutoff(cfg.cutoff, p, cfg);
    if (cfg.command == "energy-shift") return energy_shift_cmd(cfg, p, cut);
    if (cfg.command == "spectrum") return spectrum_cmd(cfg, p, cut);
    if (cfg.command == "energy-density" || cfg.command == "em-fluct") return profile_cmd(cfg, p, cut);
    if (cfg.command == "correlation") return correlation_cmd(cfg, p, cut);
    if (cfg.command == "continuum") return continuum_cmd(cfg, p, cut);
    if (cfg.command == "scaling") return scaling_cmd(cfg, p, cut);
    throw UsageError("unknown command '" + cfg.command + "'");
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

RunOutcome execute(const RunConfig& config) {
    if (config.sweep_param.empty()) return execute_single(config);
    if (config.sweep_values.size() < 2) throw UsageError("a sweep needs at least 2 values");

    std::vector<RunOutcome> parts(config.sweep_values.size());
    parallel_for(parts.size(), [&](std::size_t i) {
        RunConfig c = with_sweep_value(config, config.sweep_values[i]);
        c.threads = 1;
        parts[i] = execute_single(c);
    }, config.threads);

    RunOutcome out;
    out.table.header.push_back(config.sweep_param);
    out.table.header.insert(out.table.header.end(), parts[0].table.header.begin(), parts[0].table.header.end());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (auto& row : parts[i].table.rows) {
            Row r{format_number(config.sweep_values[i])};
            r.insert(r.end(), row.begin(), row.end());
            out.table.rows.push_back(std::move(r));
        }
        out.converged = out.converged && parts[i].converged;
        out.max_rel_tol = std::max(out.max_rel_tol, parts[i].max_rel_tol);
    }
    return out;
}

std::string render_csv(const RunConfig& config, const RunOutcome& outcome) {
    nlohmann::json cfg = to_json(config);
    cfg.erase("threads");
    cfg.erase("out");
    std::ostringstream os;
    os << "# mirrorvac " << MIRRORVAC_VERSION << "\n";
    os << "# command: " << config.command << "\n";
    os << "# config: " << cfg.dump() << "\n";
    if (config.si) {
        const PhysicalParams p = resolve_params(config);
        os << "# natural_units: hbar=c=1, length unit L=" << format_number(config.length) << " m\n";
        os << "# lambda: " << format_number(p.coupling_lambda()) << "\n";
    }
    for (const auto& [k, v] : outcome.table.notes) os << "# " << k << ": " << v << "\n";
    auto emit = [&os](const Row& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            const bool quote = row[i].find_first_of(",\"\n") != std::string::npos;
            if (quote) {
                os << '"';
                for (char ch : row[i]) os << (ch == '"' ? "\"\"" : std::string(1, ch));
                os << '"';
            } else {
                os << row[i];
            }
        }
        os << "\r\n";
    };
    emit(outcome.table.header);
    for (const auto& row : outcome.table.rows) emit(row);
    return os.str();
}

nlohmann::json sidecar(const RunConfig& config, const RunOutcome& outcome, double wall_seconds) {
    nlohmann::json j = to_json(config);
    j["version"] = MIRRORVAC_VERSION;
    j["wall_clock_seconds"] = wall_seconds;
    j["rows"] = outcome.table.rows.size();
    j["converged"] = outcome.converged;
    j["max_rel_tol"] = outcome.max_rel_tol;
    const PhysicalParams p = resolve_params(config);
    j["derived_lambda"] = p.coupling_lambda();
    for (const auto& [k, v] : outcome.diagnostics.items()) j["diag_" + k] = v;
    return j;
}

std::string sidecar_path(const std::string& csv_path) {
    const auto dot = csv_path.rfind('.');
    const auto slash = csv_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv_path + ".json";
    return csv_path.substr(0, dot) + ".json";
}

}  // namespace mirrorvac::cli
