// mirrorvac command-line front end.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mirrorvac/errors.hpp"
#include "mirrorvac/parallel.hpp"
#include "run_config.hpp"
#include "runner.hpp"

namespace {

enum Exit { kOk = 0, kIo = 1, kUsage = 2, kConvergence = 3, kCapacity = 4 };

using mirrorvac::cli::RunConfig;

void add_options(CLI::App* sub, RunConfig& c, std::string& sweep) {
    sub->add_option("--m,--mass", c.mass, "mirror mass");
    sub->add_option("--omega0", c.omega0, "mirror angular frequency");
    sub->add_option("--L,--length", c.length, "cavity length");
    sub->add_option("--hbar", c.hbar);
    sub->add_option("--c", c.c, "speed of light");
    sub->add_option("--lambda", c.lambda, "coupling lambda; sets the mass");
    sub->add_flag("--si", c.si, "inputs in kg, 1/s and m");
    sub->add_option("--cutoff", c.cutoff, "exp:W, exp:Kw0, sharp:W or sharp-sum:W")->capture_default_str();
    sub->add_option("--modes", c.modes, "override the mode count");
    sub->add_option("--points", c.points, "uniform grid size")->capture_default_str();
    sub->add_option("--x", c.x, "grid positions")->delimiter(',');
    sub->add_option("--component", c.component, "E or B")->capture_default_str();
    sub->add_option("--convention", c.convention, "cavity or distance")->capture_default_str();
    sub->add_option("--terms", c.terms, "complete or pair-population")->capture_default_str();
    sub->add_option("--x1", c.x1, "left-cavity positions")->delimiter(',');
    sub->add_option("--x2", c.x2, "right-cavity positions")->delimiter(',');
    sub->add_option("--grid", c.grid, "reference grid size per cavity")->capture_default_str();
    sub->add_option("--xt1", c.xt1, "distances from the movable wall, side 1")->delimiter(',');
    sub->add_option("--xt2", c.xt2, "distances from the movable wall, side 2")->delimiter(',');
    sub->add_option("--method", c.method, "discrete|continuum|asymptotic, or partial|full");
    sub->add_option("--rel-tol", c.rel_tol)->capture_default_str();
    sub->add_option("--negativity", c.negativity, "warn or fail")->capture_default_str();
    sub->add_option("--bin-width", c.bin_width, "spectrum bin width (default omega0/20)");
    sub->add_option("--quantity", c.quantity, "asymptotic or continuum")->capture_default_str();
    sub->add_option("--axis", c.axis, "mass, omega0 or distance")->capture_default_str();
    sub->add_option("--probe", c.probe, "probe points")->delimiter(',');
    sub->add_option("--probe-xt", c.probe_xt, "fixed distance off the distance axis")->capture_default_str();
    sub->add_option("--cavities", c.cavities, "one or two")->capture_default_str();
    sub->add_option("--observable", c.observable, "energy-shift, energy-density, phi2phi2, phi1phi2")
        ->capture_default_str();
    sub->add_option("--photons", c.photons, "max photons per mode")->capture_default_str();
    sub->add_option("--mirror", c.mirror, "max mirror quanta")->capture_default_str();
    sub->add_option("--lambdas", c.lambdas, "coupling values")->delimiter(',');
    sub->add_option("--sweep", sweep, "param=v1,v2,...");
    sub->add_option("--threads", c.threads, "worker threads (0: default)");
    sub->add_option("--out", c.out, "CSV path; '-' for stdout");
}

void parse_sweep(const std::string& text, RunConfig& c) {
    if (text.empty()) return;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw mirrorvac::UsageError("--sweep must look like param=v1,v2,...");
    c.sweep_param = text.substr(0, eq);
    std::stringstream ss(text.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            c.sweep_values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw mirrorvac::UsageError("bad sweep value '" + item + "'");
        }
    }
}

int run(RunConfig cfg) {
    if (cfg.threads > 0) mirrorvac::set_default_threads(cfg.threads);
    const auto t0 = std::chrono::steady_clock::now();
    const auto outcome = mirrorvac::cli::execute(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string csv = mirrorvac::cli::render_csv(cfg, outcome);

    if (cfg.out.empty() || cfg.out == "-") {
        std::cout << csv;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!(f << csv)) {
            std::cerr << "mirrorvac: cannot write " << cfg.out << "\n";
            return kIo;
        }
        const std::string side = mirrorvac::cli::sidecar_path(cfg.out);
        std::ofstream s(side, std::ios::binary);
        if (!(s << mirrorvac::cli::sidecar(cfg, outcome, seconds).dump(2) << "\n")) {
            std::cerr << "mirrorvac: cannot write " << side << "\n";
            return kIo;
        }
    }
    if (cfg.si) {
        std::cerr << "mirrorvac: derived lambda = "
                  << mirrorvac::cli::format_number(mirrorvac::cli::resolve_params(cfg).coupling_lambda()) << "\n";
    }
    if (!outcome.converged) {
        std::cerr << "mirrorvac: quadrature missed the requested tolerance (worst estimate "
                  << outcome.max_rel_tol << ")\n";
        return kConvergence;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vacuum observables of cavities bounded by a quantum movable mirror"};
    app.set_version_flag("--version", MIRRORVAC_VERSION);
    app.require_subcommand(1);

    RunConfig cfg;
    std::string sweep;
    const char* commands[][2] = {
        {"energy-shift", "second-order ground-state energy shift"},
        {"spectrum", "virtual-photon pair spectrum"},
        {"energy-density", "change of the field energy density on a grid"},
        {"em-fluct", "E or B field fluctuation corrections on a grid"},
        {"correlation", "squared-field correlation across the mirror"},
        {"continuum", "single-mirror continuum correlation"},
        {"scaling", "log-log scaling probe"},
        {"oracle-validate", "compare perturbation theory with exact diagonalization"},
    };
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c[0], c[1]);
        add_options(sub, cfg, sweep);
        sub->callback([&cfg, name = std::string(c[0])] { cfg.command = name; });
    }
    std::string sidecar_in;
    std::string rerun_out;
    CLI::App* rerun = app.add_subcommand("rerun", "repeat a run from its JSON sidecar");
    rerun->add_option("sidecar", sidecar_in, "JSON sidecar")->required();
    rerun->add_option("--out", rerun_out, "CSV path; '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (rerun->parsed()) {
            std::ifstream f(sidecar_in);
            if (!f) {
                std::cerr << "mirrorvac: cannot read " << sidecar_in << "\n";
                return kIo;
            }
            nlohmann::json j;
            try {
                f >> j;
            } catch (const nlohmann::json::exception& e) {
                std::cerr << "mirrorvac: malformed sidecar: " << e.what() << "\n";
                return kUsage;
            }
            RunConfig again = mirrorvac::cli::from_json(j);
            again.out = rerun_out;
            return run(again);
        }
        parse_sweep(sweep, cfg);
        return run(cfg);
    } catch (const mirrorvac::CapacityError& e) {
        std::cerr << "mirrorvac: capacity: " << e.what() << "\n";
        return kCapacity;
    } catch (const mirrorvac::ConvergenceError& e) {
        std::cerr << "mirrorvac: convergence: " << e.what() << "\n";
        return kConvergence;
    } catch (const mirrorvac::SolverError& e) {
        std::cerr << "mirrorvac: solver: " << e.what() << "\n";
        return kConvergence;
    } catch (const mirrorvac::Error& e) {
        std::cerr << "mirrorvac: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "mirrorvac: " << e.what() << "\n";
        return kIo;
    }
}
