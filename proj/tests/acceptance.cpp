// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "mirrorvac/continuum.hpp"
#include "mirrorvac/oracle.hpp"
#include "mirrorvac/parallel.hpp"
#include "mirrorvac/perturb.hpp"
#include "mirrorvac/single_cavity.hpp"
#include "mirrorvac/two_cavity.hpp"

using namespace mirrorvac;
constexpr double pi = std::numbers::pi;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<double> midpoints(int n, double lo, double L) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo + (i + 0.5) * L / n);
    return v;
}

CutoffSpec modes_only(const PhysicalParams& p, int n) {
    return CutoffSpec::sharp(n * pi * p.c / p.length * (1.0 + 1e-9));
}

// 1
void asymptotic_coefficient(Verdict& v) {
    const double got = asymptotic_correlation(PhysicalParams{}, 1.0, 1.0);
    const double want = -1.0 / (512.0 * std::pow(pi, 4));
    v.detail << "C_asym(1,1) = " << got << ", rel err " << rel(got, want);
    v.require(rel(got, want) <= 1e-14, "coefficient");
}

// 2
void sign_laws(Verdict& v) {
    const PhysicalParams p = PhysicalParams::from_lambda(0.05, pi, 1.0);
    const auto cut = CutoffSpec::exponential(50.0 * p.omega0);
    const double de = energy_shift(p, cut);
    const auto g = squared_field_correlation_discrete(p, cut, midpoints(10, 0.0, 1.0), midpoints(10, 1.0, 1.0));
    const double worst = *std::max_element(g.values.begin(), g.values.end());
    v.detail << "dE = " << de << ", max C on 10x10 = " << worst;
    v.require(de < 0.0, "energy shift negative");
    v.require(g.all_negative, "correlation negative");
}

// 3
void cross_correlator(Verdict& v) {
    const PhysicalParams p = PhysicalParams::from_lambda(0.05, pi, 1.0);
    double structural = 0.0;
    for (double x1 : midpoints(5, 0.0, 1.0))
        for (double x2 : midpoints(5, 1.0, 1.0))
            structural = std::max(structural, std::abs(phi_phi_cross_correlation(p, CutoffSpec::exponential(50.0 * pi), x1, x2)));
    TruncationSpec t;
    t.modes_per_cavity = 1;
    t.max_photons_per_mode = 8;
    t.max_mirror_quanta = 8;
    const auto s = ground_state(build_hamiltonian(p, t, Cavities::Two));
    double oracle = 0.0;
    for (double x1 : {0.3, 0.5, 0.8})
        for (double x2 : {1.2, 1.5, 1.9})
            oracle = std::max(oracle, std::abs(expectation(s, {ObservableKind::Phi1Phi2, x1, x2})));
    v.detail << "structural " << structural << ", oracle " << oracle;
    v.require(structural <= 1e-14, "structural");
    v.require(oracle <= 1e-10, "oracle");
}

// 4
void scaling_suite(Verdict& v) {
    const PhysicalParams p{1.0, 1.0, 1.0, 1.0, 1.0};
    const PhysicalParams q = p.with_mass(2.0);
    const auto cut = CutoffSpec::exponential(50.0);
    const double r_de = rel(2.0 * energy_shift(q, cut), energy_shift(p, cut));
    const auto grid = default_grid(p, 50);
    const auto h1 = delta_energy_density(p, cut, grid);
    const auto h2 = delta_energy_density(q, cut, grid);
    double r_h = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) r_h = std::max(r_h, rel(2.0 * h2.values[i], h1.values[i]));
    const auto x1 = midpoints(6, 0.0, 1.0), x2 = midpoints(6, 1.0, 1.0);
    const auto c1 = squared_field_correlation_discrete(p, cut, x1, x2);
    const auto c2 = squared_field_correlation_discrete(q, cut, x1, x2);
    double r_c = 0.0;
    for (std::size_t i = 0; i < c1.values.size(); ++i) r_c = std::max(r_c, rel(2.0 * c2.values[i], c1.values[i]));
    v.detail << "mass doubling rel err dE " << r_de << " dH " << r_h << " C " << r_c;
    v.require(std::max({r_de, r_h, r_c}) <= 1e-12, "1/m scaling");

    auto slope = [](double f1, double f2, double a1, double a2) {
        return std::log(std::abs(f2 / f1)) / std::log(a2 / a1);
    };
    const double s_w0 = slope(asymptotic_correlation(p, 10, 10), asymptotic_correlation(p.with_omega0(2.0), 10, 10), 1.0, 2.0);
    const double s_x1 = slope(asymptotic_correlation(p, 10, 10), asymptotic_correlation(p, 20, 10), 10.0, 20.0);
    const double s_x2 = slope(asymptotic_correlation(p, 10, 10), asymptotic_correlation(p, 10, 20), 10.0, 20.0);
    v.detail << "; asymptotic slopes omega0 " << s_w0 << " xt1 " << s_x1 << " xt2 " << s_x2;
    v.require(std::abs(s_w0 + 3.0) <= 1e-12 && std::abs(s_x1 + 2.0) <= 1e-12 && std::abs(s_x2 + 2.0) <= 1e-12,
              "asymptotic slopes");

    ScalingProbe probe;
    probe.quantity = ScalingQuantity::Continuum;
    probe.axis = ScalingAxis::Distance;
    probe.points = {10.0, 20.0, 40.0};
    probe.omega_m = 1000.0;
    const auto samples = scaling_probe(p, probe);
    v.detail << "; continuum distance slopes";
    bool ok = true;
    for (const auto& s : samples) {
        v.detail << " " << s.log_slope;
        ok = ok && std::abs(s.log_slope + 4.0) <= 0.05;
    }
    v.require(ok, "continuum distance slope -4 +- 0.05");
}

// 5
void oracle_equivalence(Verdict& v) {
    struct Series {
        std::string name;
        std::function<std::pair<double, double>(double)> eval;  // (oracle, perturbative)
    };
    auto one_cavity = [](double lam) {
        const PhysicalParams p = PhysicalParams::from_lambda(lam, 10.0, 1.0);
        TruncationSpec t;
        t.modes_per_cavity = 2;
        t.max_photons_per_mode = 8;
        t.max_mirror_quanta = 8;
        return std::pair{p, ground_state(build_hamiltonian(p, t, Cavities::One))};
    };
    auto dh = [&](double x) {
        return [=](double lam) {
            const auto [p, s] = one_cavity(lam);
            ProfileOptions o;
            o.mode_count = 2;
            const std::vector<double> g{x};
            return std::pair{expectation(s, {ObservableKind::EnergyDensity, x, 0.0}),
                             delta_energy_density(p, modes_only(p, 2), g, o).values[0]};
        };
    };
    const std::vector<Series> series{
        {"dE", [&](double lam) {
             const auto [p, s] = one_cavity(lam);
             return std::pair{s.result.energy_shift, energy_shift(p, modes_only(p, 2))};
         }},
        {"dH(0.5L)", dh(0.5)},
        {"dH(0.9L)", dh(0.9)},
        {"C(0.5L,1.5L)", [](double lam) {
             const PhysicalParams p = PhysicalParams::from_lambda(lam, pi, 1.0);
             TruncationSpec t;
             t.modes_per_cavity = 1;
             t.max_photons_per_mode = 8;
             t.max_mirror_quanta = 8;
             const auto s = ground_state(build_hamiltonian(p, t, Cavities::Two));
             CorrelationOptions o;
             o.mode_count = 1;
             const std::vector<double> a{0.5}, b{1.5};
             return std::pair{expectation(s, {ObservableKind::Phi2Phi2, 0.5, 1.5}),
                              squared_field_correlation_discrete(p, modes_only(p, 1), a, b, o).values[0]};
         }},
    };
    for (const auto& s : series) {
        std::vector<double> err;
        for (double lam : {0.05, 0.025, 0.0125}) {
            const auto [o, pt] = s.eval(lam);
            err.push_back(rel(pt, o));
        }
        const double r1 = err[0] / err[1], r2 = err[1] / err[2];
        v.detail << s.name << " ratios " << r1 << " " << r2 << "; ";
        v.require(r1 >= 3.0 && r1 <= 5.0 && r2 >= 3.0 && r2 <= 5.0, s.name);
    }
}

// 6
void quadrature_cross_validation(Verdict& v) {
    const PhysicalParams p{};
    ContinuumOptions pa;
    pa.rel_tol = 1e-9;
    ContinuumOptions fq = pa;
    fq.method = ContinuumMethod::FullQuadrature;
    fq.rel_tol = 1e-8;
    const std::vector<std::pair<double, double>> pts{{0.5, 0.5}, {1.0, 1.0}, {0.5, 2.0}, {2.0, 2.0}, {1.0, 3.0}};
    double worst = 0.0;
    for (auto [a, b] : pts) {
        const double x = continuum_correlation(p, 20.0, a, b, pa).value;
        const double y = continuum_correlation(p, 20.0, a, b, fq).value;
        worst = std::max(worst, rel(y, x));
    }
    v.detail << "max rel difference over 5 points " << worst;
    v.require(worst <= 1e-6, "agreement");
}

// 7
void continuum_vs_asymptotic(Verdict& v) {
    const PhysicalParams p{};
    constexpr double band = 0.10;
    std::vector<double> dev;
    v.detail << "ratios";
    for (double xt : {5.0, 10.0, 20.0, 40.0}) {
        const double r = continuum_correlation(p, 1000.0, xt, xt).value / asymptotic_correlation(p, xt, xt);
        v.detail << " " << r;
        dev.push_back(std::abs(r - 1.0));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < dev.size(); ++i) monotone = monotone && dev[i] < dev[i - 1];
    v.require(monotone, "monotone approach to 1");
    v.require(dev.back() <= band, "final deviation within 0.10");
}

// 8
void near_wall(Verdict& v) {
    const PhysicalParams p = PhysicalParams::from_lambda(0.05, pi, 1.0);
    const auto grid = default_grid(p, 200);
    std::vector<double> wall;
    bool peak_ok = true;
    for (double k : {10.0, 25.0, 50.0}) {
        const auto h = delta_energy_density(p, CutoffSpec::exponential(k * p.omega0), grid);
        std::size_t arg = 0;
        for (std::size_t i = 1; i < h.values.size(); ++i)
            if (std::abs(h.values[i]) > std::abs(h.values[arg])) arg = i;
        peak_ok = peak_ok && arg == grid.size() - 1;
        wall.push_back(std::abs(h.values.back()));
        v.detail << "omegaM " << k << "w0: argmax x=" << grid[arg] << " |dH|=" << wall.back() << "; ";
    }
    v.require(peak_ok, "maximum next to the movable wall");
    v.require(wall[0] < wall[1] && wall[1] < wall[2], "growth with omegaM");
}

// 9
void brute_force(Verdict& v) {
    const PhysicalParams p{0.9, 2.3, 1.4, 1.2, 0.8};
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n) {
        for (bool expo : {false, true}) {
            const double wm = 7.0;
            const CutoffSpec cut = expo ? CutoffSpec::exponential(wm) : CutoffSpec::sharp(1e6);
            brute::Setup s{p.mass, p.omega0, p.length, p.hbar, p.c, n,
                           [=](double w) { return expo ? std::exp(-w / wm) : 1.0; }};
            worst = std::max(worst, rel(energy_shift(p, cut, n), brute::energy_shift(s)));
            const std::vector<double> grid{0.13, 0.5, 0.77, 1.21};
            ProfileOptions o;
            o.mode_count = n;
            const std::vector<std::pair<brute::Local, ObservableProfile>> prof{
                {brute::Local::DeltaH, delta_energy_density(p, cut, grid, o)},
                {brute::Local::E2, em_field_fluctuations(p, cut, grid, FieldComponent::E, o)},
                {brute::Local::B2, em_field_fluctuations(p, cut, grid, FieldComponent::B, o)},
                {brute::Local::Phi2, delta_phi_squared(p, cut, grid, o)}};
            for (const auto& [kind, pr] : prof)
                for (std::size_t i = 0; i < grid.size(); ++i)
                    worst = std::max(worst, rel(pr.values[i], brute::local(s, kind, grid[i])));
            o.terms = SecondOrderTerms::PairPopulationOnly;
            const auto hp = delta_energy_density(p, cut, grid, o);
            for (std::size_t i = 0; i < grid.size(); ++i)
                worst = std::max(worst, rel(hp.values[i], brute::delta_h_pair_only(s, grid[i])));
            CorrelationOptions co;
            co.mode_count = n;
            const std::vector<double> x1{0.2, 0.9}, x2{1.5, 2.6};
            const auto g = squared_field_correlation_discrete(p, cut, x1, x2, co);
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j)
                    worst = std::max(worst, rel(g.at(i, j), brute::correlation(s, x1[i], x2[j])));
        }
    }
    v.detail << "max rel difference " << worst;
    v.require(worst <= 1e-14, "1e-14 agreement");
}

}  // namespace

int main() {
    set_warning_handler([](const std::string&) {});
    const std::vector<std::pair<std::string, void (*)(Verdict&)>> criteria{
        {"1 asymptotic coefficient", asymptotic_coefficient},
        {"2 sign laws", sign_laws},
        {"3 vanishing field cross-correlator", cross_correlator},
        {"4 scaling suite", scaling_suite},
        {"5 oracle equivalence", oracle_equivalence},
        {"6 continuum quadrature cross-validation", quadrature_cross_validation},
        {"7 continuum vs asymptotic", continuum_vs_asymptotic},
        {"8 near-wall enhancement", near_wall},
        {"9 brute-force equivalence", brute_force},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            check(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), sec, v.detail.str().c_str());
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
