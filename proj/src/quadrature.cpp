#include "mirrorvac/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "mirrorvac/errors.hpp"

namespace mirrorvac {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule. Index 0 is the
// centre; the Gauss nodes sit at the odd indices.
struct RuleTables {
    const std::array<double, 11>& x = boost::math::quadrature::gauss_kronrod<double, 21>::abscissa();
    const std::array<double, 11>& wk = boost::math::quadrature::gauss_kronrod<double, 21>::weights();
    const std::array<double, 5>& wg = boost::math::quadrature::gauss<double, 10>::weights();
};

const RuleTables& rule() {
    static const RuleTables tables;
    return tables;
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel apply_rule(const std::function<double(double)>& f, double a, double b) {
    const auto& r = rule();
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = r.wk[0] * fc;
    double gauss = 0.0;
    for (std::size_t i = 1; i < r.x.size(); ++i) {
        const double dx = half * r.x[i];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += r.wk[i] * pair;
        if (i % 2 == 1) gauss += r.wg[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    double err = std::abs(kronrod - gauss);
    // QUADPACK-style scaling of the raw difference.
    if (err > 0.0) err = std::min(err, std::pow(200.0 * err, 1.5) / std::sqrt(std::abs(half) + 1e-300));
    err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
    if (!std::isfinite(kronrod)) throw UsageError("integrand returned a non-finite value");
    return {a, b, kronrod, err};
}

}  // namespace

double QuadratureResult::rel_error() const {
    return value == 0.0 ? abs_error : abs_error / std::abs(value);
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
    constexpr std::size_t kPoints = 21;
    QuadratureResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<Panel> heap;
    heap.push(apply_rule(f, a, b));
    out.evaluations = kPoints;

    auto totals = [&heap] {
        auto copy = heap;
        double v = 0.0, e = 0.0;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        return std::pair{v, e};
    };

    double value = heap.top().value;
    double error = heap.top().error;
    for (;;) {
        if (error <= std::max(options.abs_tol, options.rel_tol * std::abs(value))) {
            out.converged = true;
            break;
        }
        if (out.evaluations + 2 * kPoints > options.max_evaluations) break;
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) break;
        heap.pop();
        const Panel left = apply_rule(f, worst.a, mid);
        const Panel right = apply_rule(f, mid, worst.b);
        out.evaluations += 2 * kPoints;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if (heap.size() % 512 == 0) std::tie(value, error) = totals();
    }
    std::tie(value, error) = totals();
    out.value = value;
    out.abs_error = error;
    if (!out.converged) {
        out.converged = error <= std::max(options.abs_tol, options.rel_tol * std::abs(value));
    }
    return out;
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double scale,
                                         const QuadratureOptions& options) {
    if (!(scale > 0.0)) throw UsageError("semi-infinite map scale must be positive");
    auto mapped = [&](double u) {
        if (u >= 1.0) return 0.0;
        const double one_minus = 1.0 - u;
        const double x = scale * u / one_minus;
        const double jac = scale / (one_minus * one_minus);
        const double v = f(x);
        return v == 0.0 ? 0.0 : v * jac;
    };
    return integrate(mapped, 0.0, 1.0, options);
}

}  // namespace mirrorvac
