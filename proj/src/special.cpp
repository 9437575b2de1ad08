#include "mirrorvac/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mirrorvac/errors.hpp"

namespace mirrorvac {

namespace {

using cplx = std::complex<double>;

bool use_series(cplx w) {
    // The continued fraction converges slowly near the origin.
    return std::abs(w) < 1.5;
}

cplx series_e1(cplx w) {
    cplx sum = 0.0;
    cplx term = 1.0;
    for (int n = 1; n < 500; ++n) {
        term *= -w / static_cast<double>(n);
        const cplx add = term / static_cast<double>(n);
        sum += add;
        if (std::abs(add) <= std::numeric_limits<double>::epsilon() * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(w) - sum;
}

// e^w E1(w) = 1/(w + 1 - 1/(w + 3 - 4/(w + 5 - ...))), modified Lentz.
cplx continued_fraction(cplx w) {
    constexpr double tiny = 1e-300;
    cplx b = w + 1.0;
    cplx f = b;
    cplx c = f;
    cplx d = 0.0;
    for (int n = 1; n < 5000; ++n) {
        const double a = -static_cast<double>(n) * n;
        b += 2.0;
        d = b + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const cplx delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return 1.0 / f;
    }
    throw ConvergenceError("E1 continued fraction did not converge", std::abs(1.0 / f), 0.0);
}

}  // namespace

cplx expint_e1(cplx w) {
    if (w == cplx(0.0)) throw UsageError("E1 is singular at 0");
    if (use_series(w)) return series_e1(w);
    return std::exp(-w) * continued_fraction(w);
}

cplx scaled_expint_e1(cplx w) {
    if (w == cplx(0.0)) throw UsageError("E1 is singular at 0");
    if (use_series(w)) return std::exp(w) * series_e1(w);
    return continued_fraction(w);
}

}  // namespace mirrorvac
