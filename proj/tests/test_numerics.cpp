#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "mirrorvac/errors.hpp"
#include "mirrorvac/quadrature.hpp"
#include "mirrorvac/special.hpp"

using namespace mirrorvac;
using cd = std::complex<double>;

TEST_CASE("polynomials and smooth functions integrate exactly") {
    const auto r = integrate([](double x) { return x * x * x - 2.0 * x; }, -1.0, 3.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(12.0).epsilon(1e-14));
    const auto s = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(s.rel_error() <= 1e-10);
}

TEST_CASE("adaptive refinement handles a sharp peak") {
    const double eps = 1e-4;
    const auto r = integrate([&](double x) { return eps / (x * x + eps * eps); }, -1.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0 * std::atan(1.0 / eps)).epsilon(1e-10));
}

TEST_CASE("semi-infinite map") {
    const auto r = integrate_semi_infinite([](double x) { return std::exp(-x); }, 1.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    const auto s = integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, 3.0);
    CHECK(s.value == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-10));
}

TEST_CASE("budget exhaustion is reported, not thrown") {
    QuadratureOptions opt;
    opt.max_evaluations = 50;
    const auto r = integrate([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, opt);
    CHECK(!r.converged);
    CHECK(r.evaluations <= 64);
}

TEST_CASE("non-finite integrand is a usage error") {
    CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0.0, 1.0), UsageError);
}

namespace {
struct E1Case {
    cd w, e1, scaled;
};
// Reference values from a 25-digit arbitrary-precision evaluation.
const E1Case cases[] = {
    {{0.5, 0}, {0.55977359477616081175, 0}, {0.92291063248373046883, 0}},
    {{0.1, 2}, {-0.37926421572217250703, 0.015894216774374120169}, {0.15845612738383580435, -0.38844359933323818846}},
    {{1.2, -0.7}, {0.068402485649178865764, 0.12830767435443382305}, {0.44813337915809324599, 0.1795155054578829492}},
    {{3, 0}, {0.013048381094197037413, 0}, {0.26208374025531849619, 0}},
    {{2, -5}, {0.022425786178833705483, -0.0052476851328826772588}, {0.084187064196772039321, 0.14789979695743789488}},
    {{10, -40}, {-9.7915303159386738843e-7, -4.8760997711553507323e-7}, {0.0063812833045773857971, 0.023233195920386152147}},
    {{0.01, -30}, {0.032704706150876472928, 0.0039886803734822438801}, {0.0011148994291945435254, 0.033259481030144402683}},
    {{0.05, -3}, {-0.11720284562626110745, -0.26178246077337959298}, {0.083142081961414626207, 0.2898378995912322497}},
    {{25, 1}, {2.7124078827528990972e-13, -4.6055381969662751687e-13}, {0.038457435079010110173, -0.0014830876138800063513}},
};
}  // namespace

TEST_CASE("exponential integral against reference values") {
    for (const auto& c : cases) {
        CAPTURE(c.w);
        CHECK(std::abs(expint_e1(c.w) - c.e1) <= 1e-13 * std::abs(c.e1));
        CHECK(std::abs(scaled_expint_e1(c.w) - c.scaled) <= 1e-13 * std::abs(c.scaled));
    }
}

TEST_CASE("series and continued fraction agree across the switch") {
    for (double r : {1.45, 1.5, 1.55}) {
        for (double th : {0.0, 0.7, 1.5, 2.5, -2.9}) {
            const cd w = std::polar(r, th);
            const cd a = scaled_expint_e1(w);
            // d/dw [e^w E1(w)] = e^w E1(w) - 1/w: check a central difference
            const double h = 1e-5;
            const cd d = (scaled_expint_e1(w + h) - scaled_expint_e1(w - h)) / (2.0 * h);
            CHECK(std::abs(d - (a - 1.0 / w)) <= 1e-7 * std::abs(a - 1.0 / w) + 1e-9);
        }
    }
}

TEST_CASE("E1 at the origin is rejected") {
    CHECK_THROWS_AS(expint_e1(cd{0.0, 0.0}), UsageError);
}
