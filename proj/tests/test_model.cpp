#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "mirrorvac/errors.hpp"
#include "mirrorvac/model.hpp"
#include "mirrorvac/parallel.hpp"

using namespace mirrorvac;

TEST_CASE("C_11 with unit parameters") {
    // pi / sqrt(8), evaluated independently
    CHECK(coupling_matrix_element(PhysicalParams{}, 1, 1) == doctest::Approx(1.11072073453959156).epsilon(1e-15));
}

TEST_CASE("coupling is symmetric with alternating sign") {
    const PhysicalParams p{2.0, 3.0, 1.5, 1.0, 1.0};
    for (int k = 1; k <= 6; ++k) {
        for (int j = 1; j <= 6; ++j) {
            CHECK(coupling_matrix_element(p, k, j) == coupling_matrix_element(p, j, k));
            const double sign = (k + j) % 2 == 0 ? 1.0 : -1.0;
            CHECK(coupling_matrix_element(p, k, j) * sign > 0.0);
        }
    }
    CHECK(coupling_matrix_element(PhysicalParams{}, 1, 1) > 0.0);
    CHECK(coupling_matrix_element(PhysicalParams{}, 1, 2) < 0.0);
}

TEST_CASE("two-cavity couplings") {
    const PhysicalParams p{0.7, 2.0, 1.0, 1.0, 1.0};
    for (int k = 1; k <= 4; ++k) {
        for (int j = 1; j <= 4; ++j) {
            CHECK(two_cavity_coupling(p, CavityTag::Left, k, j) == coupling_matrix_element(p, k, j));
            CHECK(two_cavity_coupling(p, CavityTag::Right, k, j) == -two_cavity_coupling(p, CavityTag::Left, k, j));
        }
    }
    CHECK_THROWS_AS(two_cavity_coupling(p, CavityTag::Single, 1, 1), UsageError);
}

TEST_CASE("coupling scales as mass^-1/2") {
    const PhysicalParams p{1.0, 1.0, 1.0, 1.0, 1.0};
    for (double factor : {10.0, 2.0, 0.37}) {
        const PhysicalParams q = p.with_mass(p.mass * factor);
        for (int k = 1; k <= 5; ++k) {
            for (int j = 1; j <= 5; ++j) {
                const double ratio = coupling_matrix_element(q, k, j) / coupling_matrix_element(p, k, j);
                CHECK(ratio == doctest::Approx(1.0 / std::sqrt(factor)).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PhysicalParams({0.0, 1.0, 1.0, 1.0, 1.0}).validate(), ParameterError);
    CHECK_THROWS_AS(PhysicalParams({1.0, -1.0, 1.0, 1.0, 1.0}).validate(), ParameterError);
    CHECK_THROWS_AS(PhysicalParams({1.0, 1.0, 0.0, 1.0, 1.0}).validate(), ParameterError);
    CHECK_THROWS_AS(PhysicalParams({1.0, 1.0, 1.0, 0.0, 1.0}).validate(), ParameterError);
    CHECK_THROWS_AS(PhysicalParams({1.0, 1.0, 1.0, 1.0, std::nan("")}).validate(), ParameterError);
    CHECK_THROWS_AS(coupling_matrix_element(PhysicalParams({-1.0, 1.0, 1.0, 1.0, 1.0}), 1, 1), ParameterError);
    CHECK_THROWS_AS(coupling_matrix_element(PhysicalParams{}, 0, 1), UsageError);
}

TEST_CASE("lambda and its inverse") {
    const PhysicalParams p{3.0, 2.0, 1.5, 1.0, 1.0};
    CHECK(p.coupling_lambda() == doctest::Approx(std::sqrt(1.0 / (8.0 * 3.0 * 2.0 * 1.5 * 1.5))));
    const PhysicalParams q = PhysicalParams::from_lambda(0.05, std::numbers::pi, 1.0);
    CHECK(q.coupling_lambda() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK_THROWS_AS(PhysicalParams::from_lambda(-0.1, 1.0, 1.0), ParameterError);
}

TEST_CASE("mode set") {
    const ModeSet ms(5, 2.0, 3.0);
    for (int n = 1; n <= 5; ++n) {
        CHECK(ms.wavenumber(n) == n * std::numbers::pi / 2.0);
        CHECK(ms.frequency(n) == 3.0 * n * std::numbers::pi / 2.0);
    }
    const auto f = ms.frequencies();
    for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i] > f[i - 1]);
}

TEST_CASE("cutoff weights") {
    const auto e = CutoffSpec::exponential(4.0);
    CHECK(cutoff_weight(e, {0.0}) == 1.0);
    CHECK(cutoff_weight(e, {1.0, 3.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    const auto s = CutoffSpec::sharp(10.0);
    CHECK(cutoff_weight(s, {5.0, 11.0}) == 0.0);
    CHECK(cutoff_weight(s, {5.0, 10.0}) == 1.0);
    const auto sum = CutoffSpec::sharp(10.0, SharpRule::FrequencySum);
    CHECK(cutoff_weight(sum, {5.0, 6.0}) == 0.0);
    CHECK(cutoff_weight(sum, {5.0, 5.0}) == 1.0);
    CHECK_THROWS_AS(cutoff_weight(e, std::initializer_list<double>{}), UsageError);
    CHECK_THROWS_AS(cutoff_weight(e, {-1.0}), UsageError);
    CHECK_THROWS_AS(CutoffSpec::exponential(0.0).validate(), ParameterError);
}

TEST_CASE("cutoff weights are non-increasing in every argument") {
    for (const auto& spec : {CutoffSpec::exponential(3.0), CutoffSpec::sharp(3.0),
                             CutoffSpec::sharp(3.0, SharpRule::FrequencySum)}) {
        double prev = 2.0;
        for (int i = 0; i <= 60; ++i) {
            const double w = 0.1 * i;
            const double v = cutoff_weight(spec, {1.0, w, 0.5});
            CHECK(v <= prev);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            prev = v;
        }
    }
}

TEST_CASE("mode counts") {
    const PhysicalParams p{};
    // floor(omegaM L / (pi c))
    CHECK(required_mode_count(p, CutoffSpec::sharp(10.0)) == 3);
    CHECK(required_mode_count(p, CutoffSpec::sharp(3.0 * std::numbers::pi)) == 3);
    CHECK(required_mode_count(p, CutoffSpec::sharp(1.0)) == 0);
    // frequency-sum rule with two participants: omega_n + omega_1 <= omegaM
    CHECK(required_mode_count(p, CutoffSpec::sharp(4.0 * std::numbers::pi, SharpRule::FrequencySum), 2) == 3);
    // exponential: tail weight below 1e-8, then doubled
    const int n = required_mode_count(p, CutoffSpec::exponential(10.0));
    CHECK(n % 2 == 0);
    CHECK(std::exp(-(n / 2) * std::numbers::pi / 10.0) < kExponentialTailWeight);
    CHECK(std::exp(-(n / 2 - 1) * std::numbers::pi / 10.0) >= kExponentialTailWeight);
}

TEST_CASE("regime warnings") {
    const PhysicalParams p{1.0, 1.0, 1.0, 1.0, 1.0};
    std::vector<std::string> seen;
    set_warning_handler([&](const std::string& m) { seen.push_back(m); });
    CHECK(regime_warnings(p, CutoffSpec::exponential(1000.0)).empty());
    CHECK(!regime_warnings(p, CutoffSpec::exponential(2.0)).empty());
    CHECK(seen.size() == 1);
    set_warning_handler(nullptr);
}
