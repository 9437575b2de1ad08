#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <numbers>

#include "brute_force.hpp"
#include "mirrorvac/errors.hpp"
#include "mirrorvac/parallel.hpp"
#include "mirrorvac/perturb.hpp"

using namespace mirrorvac;
constexpr double pi = std::numbers::pi;

namespace {
const bool quiet = [] {
    set_warning_handler([](const std::string&) {});
    return true;
}();

CutoffSpec just_above(int n, const PhysicalParams& p) {
    return CutoffSpec::sharp(n * pi * p.c / p.length * (1.0 + 1e-9));
}
}  // namespace

TEST_CASE("two-mode energy shift, m = 10") {
    const PhysicalParams p{10.0, 1.0, 1.0, 1.0, 1.0};
    // -(1/40)[pi^2/(1+2pi) + 2 * 2pi^2/(1+3pi) + 4pi^2/(1+4pi)], frozen
    CHECK(energy_shift(p, just_above(2, p)) == doctest::Approx(-0.20130304425925796901).epsilon(1e-14));
}

TEST_CASE("energy shift sign and mass scaling") {
    for (const auto& cut : {CutoffSpec::exponential(50.0), CutoffSpec::sharp(40.0)}) {
        const PhysicalParams p{1.0, 2.0, 1.0, 1.0, 1.0};
        const double e1 = energy_shift(p, cut);
        CHECK(e1 < 0.0);
        for (double factor : {2.0, 10.0, 1e6}) {
            const double e2 = energy_shift(p.with_mass(factor), cut);
            CHECK(e2 / e1 == doctest::Approx(1.0 / factor).epsilon(1e-14));
        }
    }
}

TEST_CASE("energy shift is monotone in the sharp mode count") {
    const PhysicalParams p{1.0, 3.0, 1.0, 1.0, 1.0};
    double prev = 0.0;
    for (int n = 1; n <= 40; ++n) {
        const double e = std::abs(energy_shift(p, just_above(n, p)));
        CHECK(e >= prev);
        prev = e;
    }
}

TEST_CASE("empty mode set is degenerate") {
    CHECK_THROWS_AS(energy_shift(PhysicalParams{}, CutoffSpec::sharp(1.0)), DegenerateInputError);
}

TEST_CASE("energy shift matches brute force for N <= 3") {
    const PhysicalParams p{0.8, 1.7, 1.3, 1.1, 0.9};
    for (int n = 1; n <= 3; ++n) {
        for (bool expo : {false, true}) {
            const CutoffSpec cut = expo ? CutoffSpec::exponential(6.0) : just_above(n, p);
            brute::Setup s{p.mass, p.omega0, p.length, p.hbar, p.c, n,
                           [&](double w) { return expo ? std::exp(-w / 6.0) : 1.0; }};
            CHECK(energy_shift(p, cut, n) == doctest::Approx(brute::energy_shift(s)).epsilon(1e-14));
        }
    }
}

TEST_CASE("first-order coefficients") {
    const PhysicalParams p{};
    const auto a = dressed_amplitudes(p, just_above(3, p));
    // (1/sqrt 8) pi / (1 + 2 pi)
    CHECK(a.coefficient(1, 1) == doctest::Approx(0.15250480218382884565).epsilon(1e-15));
    for (int k = 1; k <= 3; ++k) {
        for (int j = 1; j <= 3; ++j) CHECK(a.coefficient(k, j) == a.coefficient(j, k));
    }
    CHECK(a.pair(1, 2).state_amplitude == doctest::Approx(2.0 * a.coefficient(1, 2)));
    CHECK(a.pair(2, 2).state_amplitude == doctest::Approx(std::sqrt(2.0) * a.coefficient(2, 2)));
}

TEST_CASE("coefficients shrink as omega0 grows") {
    const PhysicalParams p{};
    const auto a = dressed_amplitudes(p, just_above(4, p));
    const auto b = dressed_amplitudes(p.with_omega0(2.0), just_above(4, p));
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
        CHECK(std::abs(b.pairs[i].coefficient) < std::abs(a.pairs[i].coefficient));
    }
}

TEST_CASE("energy from amplitudes reproduces the energy shift") {
    const PhysicalParams p{2.0, 1.5, 1.0, 1.0, 1.0};
    for (int n : {1, 2, 5, 30}) {
        const auto cut = just_above(n, p);
        const auto a = dressed_amplitudes(p, cut);
        CHECK(a.energy_from_amplitudes() == doctest::Approx(energy_shift(p, cut)).epsilon(1e-12));
        CHECK(a.lambda_sq >= 0.0);
        CHECK(std::isfinite(a.lambda_sq));
    }
}

TEST_CASE("photon spectrum partitions the pair weights") {
    const PhysicalParams p{1.0, 5.0, 1.0, 1.0, 1.0};
    const auto a = dressed_amplitudes(p, CutoffSpec::exponential(100.0));
    const auto s = photon_spectrum(a, p.omega0 / 20.0);
    double sum = 0.0;
    for (double w : s.weights) sum += w;
    CHECK(sum == doctest::Approx(a.lambda_sq).epsilon(1e-12));
    CHECK(s.total_weight == doctest::Approx(a.lambda_sq).epsilon(1e-12));
    CHECK(s.peak_frequency > 0.0);
}

TEST_CASE("coarser bins never add nonempty bins") {
    const PhysicalParams p{1.0, 5.0, 1.0, 1.0, 1.0};
    const auto a = dressed_amplitudes(p, CutoffSpec::exponential(60.0));
    std::size_t prev = SIZE_MAX;
    for (double w = 0.1; w < 100.0; w *= 2.0) {
        const auto s = photon_spectrum(a, w);
        CHECK(s.nonempty_bins() <= prev);
        prev = s.nonempty_bins();
    }
}

TEST_CASE("three-mode spectrum equals direct grouping") {
    const PhysicalParams p{1.0, 1.0, 1.0, 1.0, 1.0};
    const auto a = dressed_amplitudes(p, just_above(3, p));
    const double width = 0.5;
    const auto s = photon_spectrum(a, width);
    // enumerate all unordered pairs and weights from the coefficient formula
    std::map<long, double> groups;
    for (int k = 1; k <= 3; ++k) {
        for (int j = k; j <= 3; ++j) {
            const double wk = k * pi, wj = j * pi;
            const double c = (((k + j) % 2) ? -1.0 : 1.0) * std::sqrt(1.0 / 8.0) * std::sqrt(wk * wj) / (1.0 + wk + wj);
            const double weight = (k == j ? 2.0 : 4.0) * c * c;
            groups[static_cast<long>(std::floor((wk + wj) / width))] += weight;
        }
    }
    for (const auto& [bin, w] : groups) {
        CHECK(s.weights.at(static_cast<std::size_t>(bin)) == doctest::Approx(w).epsilon(1e-14));
    }
    double total = 0.0;
    for (double w : s.weights) total += w;
    double grouped = 0.0;
    for (const auto& [bin, w] : groups) grouped += w;
    CHECK(total == doctest::Approx(grouped).epsilon(1e-14));
}

TEST_CASE("spectrum bin width validation") {
    const PhysicalParams p{};
    const auto a = dressed_amplitudes(p, just_above(3, p));
    CHECK_THROWS_AS(photon_spectrum(a, 0.0), UsageError);
    CHECK_THROWS_AS(photon_spectrum(a, -1.0), UsageError);
    CHECK_THROWS_AS(photon_spectrum(a, 100.0), UsageError);
}
