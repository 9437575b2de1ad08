#include "mirrorvac/continuum.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "mirrorvac/errors.hpp"
#include "mirrorvac/parallel.hpp"
#include "mirrorvac/quadrature.hpp"
#include "mirrorvac/special.hpp"

namespace mirrorvac {

namespace {

constexpr double kPi = std::numbers::pi;

void check_distances(double xt1, double xt2) {
    if (!(xt1 > 0.0) || !(xt2 > 0.0) || !std::isfinite(xt1) || !std::isfinite(xt2)) {
        std::ostringstream os;
        os << "distances from the movable wall must be positive and finite (got " << xt1 << ", " << xt2
           << ")";
        throw UsageError(os.str());
    }
}

double prefactor(const PhysicalParams& p) {
    return -p.hbar * p.hbar * p.hbar / (std::pow(kPi, 4) * p.mass * p.omega0);
}

// s(tau, a) = int_0^inf sin(w tau) exp(-a w) dw.
double sine_transform(double tau, double a) { return tau / (tau * tau + a * a); }

// ---- partial analytic ---------------------------------------------------

double partial_analytic_mixed(double omega0, double tau_outer, double tau_inner, double eps,
                              const QuadratureOptions& q, QuadratureResult& res) {
    // int_0^inf dt s(tau_outer, t + eps)^2 G(tau_inner, t + eps)
    auto f = [&](double t) {
        const double s = sine_transform(tau_outer, t + eps);
        return s * s * pair_kernel(omega0, tau_inner, t + eps);
    };
    res = integrate_semi_infinite(f, tau_outer + eps, q);
    return res.value;
}

ContinuumPoint run_partial_analytic(double omega0, double tau1, double tau2, double eps,
                                    const ContinuumOptions& options) {
    ContinuumPoint pt;
    QuadratureOptions q;
    q.rel_tol = std::max(options.rel_tol * 1e-2, 1e-13);
    q.max_evaluations = options.max_evaluations / 2;
    QuadratureResult r2, r3;
    const double sep = pair_kernel(omega0, tau1, eps) * pair_kernel(omega0, tau2, eps);
    const double t2 = partial_analytic_mixed(omega0, tau2, tau1, eps, q, r2);
    const double t3 = partial_analytic_mixed(omega0, tau1, tau2, eps, q, r3);
    const double total = sep + t2 + t3;
    pt.value = total;
    pt.separable_part = sep;
    pt.evaluations = r2.evaluations + r3.evaluations;
    pt.rel_tol = (r2.abs_error + r3.abs_error) / std::abs(total);
    pt.converged = r2.converged && r3.converged && pt.rel_tol <= options.rel_tol;
    return pt;
}

// ---- full quadrature ----------------------------------------------------

// int_0^P sin(p tau) sin((P - p) tau) dp
double pair_sum_transform(double P, double tau) {
    return 0.5 * (std::sin(P * tau) / tau - P * std::cos(P * tau));
}

struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Composite 10-point Gauss-Legendre on [0, upper] with panels of the given
// width.
AxisRule composite_rule(double upper, double width) {
    const auto& x = boost::math::quadrature::gauss<double, 10>::abscissa();
    const auto& w = boost::math::quadrature::gauss<double, 10>::weights();
    const auto panels = static_cast<std::size_t>(std::ceil(upper / width));
    const double h = upper / static_cast<double>(panels);
    AxisRule rule;
    rule.nodes.reserve(panels * 10);
    rule.weights.reserve(panels * 10);
    for (std::size_t k = 0; k < panels; ++k) {
        const double mid = (static_cast<double>(k) + 0.5) * h;
        for (std::size_t i = 0; i < x.size(); ++i) {
            rule.nodes.push_back(mid - 0.5 * h * x[i]);
            rule.weights.push_back(0.5 * h * w[i]);
            rule.nodes.push_back(mid + 0.5 * h * x[i]);
            rule.weights.push_back(0.5 * h * w[i]);
        }
    }
    return rule;
}

struct ProductResult {
    double total = 0.0;
    double separable = 0.0;
    std::size_t evaluations = 0;
};

ProductResult product_quadrature(double omega0, double tau1, double tau2, double eps, int level,
                                 int threads) {
    // exp(-40) times the polynomial growth of the pair transform leaves the
    // truncated tail far below any requested tolerance.
    const double upper = 40.0 / eps;
    auto width = [&](double tau) { return std::min(kPi / tau, omega0) * std::ldexp(2.0, -level); };
    const AxisRule ax1 = composite_rule(upper, width(tau1));
    const AxisRule ax2 = composite_rule(upper, width(tau2));

    const std::size_t n1 = ax1.nodes.size();
    const std::size_t n2 = ax2.nodes.size();
    std::vector<double> a(n1), b(n2), b_over(n2);
    double sep1 = 0.0, sep2 = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
        const double P = ax1.nodes[i];
        a[i] = ax1.weights[i] * pair_sum_transform(P, tau1) * std::exp(-eps * P);
        sep1 += a[i] / (omega0 + P);
    }
    for (std::size_t j = 0; j < n2; ++j) {
        const double R = ax2.nodes[j];
        b[j] = ax2.weights[j] * pair_sum_transform(R, tau2) * std::exp(-eps * R);
        b_over[j] = b[j] / (omega0 + R);
        sep2 += b_over[j];
    }

    std::vector<double> rows(n1);
    parallel_for(
        n1,
        [&](std::size_t i) {
            const double P = ax1.nodes[i];
            double plain = 0.0, damped = 0.0;
            for (std::size_t j = 0; j < n2; ++j) {
                const double inv = 1.0 / (P + ax2.nodes[j]);
                plain += b[j] * inv;
                damped += b_over[j] * inv;
            }
            rows[i] = a[i] * (plain / (omega0 + P) + damped);
        },
        threads);
    double mixed = 0.0;
    for (double r : rows) mixed += r;

    ProductResult out;
    out.separable = sep1 * sep2;
    out.total = out.separable + mixed;
    out.evaluations = n1 * n2;
    return out;
}

ContinuumPoint run_full_quadrature(double omega0, double tau1, double tau2, double eps,
                                   const ContinuumOptions& options) {
    ContinuumPoint pt;
    std::size_t used = 0;
    ProductResult coarse = product_quadrature(omega0, tau1, tau2, eps, 0, options.threads);
    used += coarse.evaluations;
    for (int level = 1;; ++level) {
        // Each level halves both panel widths: four times the work.
        if (used + 4 * coarse.evaluations > options.max_evaluations) {
            if (level == 1) {
                // No second level to compare against: no error estimate.
                pt.value = coarse.total;
                pt.separable_part = coarse.separable;
                pt.rel_tol = std::numeric_limits<double>::infinity();
                pt.evaluations = used;
            }
            pt.converged = false;
            break;
        }
        const ProductResult fine = product_quadrature(omega0, tau1, tau2, eps, level, options.threads);
        used += fine.evaluations;
        pt.value = fine.total;
        pt.separable_part = fine.separable;
        pt.rel_tol = std::abs(fine.total - coarse.total) / std::abs(fine.total);
        pt.evaluations = used;
        pt.converged = pt.rel_tol <= options.rel_tol;
        if (pt.converged) break;
        coarse = fine;
    }
    return pt;
}

double log_slope(double x0, double y0, double x1, double y1) {
    return (std::log(std::abs(y1)) - std::log(std::abs(y0))) / (std::log(x1) - std::log(x0));
}

}  // namespace

double pair_kernel(double omega0, double tau, double a) {
    if (a > 2.0 * tau) {
        // The closed form below cancels to O(tau^2 / a^2) here.
        QuadratureOptions q;
        q.rel_tol = 1e-13;
        auto f = [&](double u) {
            const double s = sine_transform(tau, u + a);
            return std::exp(-omega0 * u) * s * s;
        };
        return integrate_semi_infinite(f, std::min(a, 1.0 / omega0), q).value;
    }
    // G = (1/2) [ Im F / tau - Re(1/z - omega0 F) ],  z = a - i tau,
    // F = exp(omega0 z) E1(omega0 z).
    const std::complex<double> z(a, -tau);
    const std::complex<double> F = scaled_expint_e1(omega0 * z);
    return 0.5 * (F.imag() / tau - (1.0 / z - omega0 * F).real());
}

ContinuumPoint continuum_correlation(const PhysicalParams& params, double omega_m, double xt1,
                                     double xt2, const ContinuumOptions& options) {
    params.validate();
    check_distances(xt1, xt2);
    CutoffSpec::exponential(omega_m).validate();
    if (!(options.rel_tol > 0.0)) throw UsageError("requested relative tolerance must be positive");

    const double tau1 = xt1 / params.c;
    const double tau2 = xt2 / params.c;
    const double eps = 1.0 / omega_m;

    ContinuumPoint pt = options.method == ContinuumMethod::PartialAnalytic
                            ? run_partial_analytic(params.omega0, tau1, tau2, eps, options)
                            : run_full_quadrature(params.omega0, tau1, tau2, eps, options);
    const double pre = prefactor(params);
    pt.xt1 = xt1;
    pt.xt2 = xt2;
    pt.method = options.method;
    pt.value *= pre;
    pt.separable_part *= pre;
    if (!pt.converged && options.throw_on_failure) {
        std::ostringstream os;
        os << "continuum quadrature (" << to_string(options.method) << ") missed rel_tol "
           << options.rel_tol << " at (" << xt1 << ", " << xt2 << "): estimate " << pt.rel_tol
           << " after " << pt.evaluations << " evaluations";
        throw ConvergenceError(os.str(), pt.value, pt.rel_tol);
    }
    return pt;
}

double asymptotic_correlation(const PhysicalParams& params, double xt1, double xt2) {
    params.validate();
    check_distances(xt1, xt2);
    const double scale = params.c / params.omega0;
    if (std::min(xt1, xt2) < 5.0 * scale) {
        std::ostringstream os;
        os << "asymptotic correlation evaluated at distance " << std::min(xt1, xt2)
           << " below 5 c/omega0 = " << 5.0 * scale << "; outside its intended regime";
        warn(os.str());
    }
    const double h3 = params.hbar * params.hbar * params.hbar;
    const double c4 = std::pow(params.c, 4);
    return -h3 * c4 /
           (512.0 * std::pow(kPi, 4) * params.mass * std::pow(params.omega0, 3) * xt1 * xt1 * xt2 * xt2);
}

std::vector<ScalingSample> scaling_probe(const PhysicalParams& params, const ScalingProbe& probe) {
    params.validate();
    const auto& pts = probe.points;
    if (pts.size() < 3) throw UsageError("scaling probe needs at least 3 points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i] > 0.0) || !std::isfinite(pts[i])) throw UsageError("scaling probe points must be positive");
        if (i > 0 && !(std::abs(std::log(pts[i] / pts[i - 1])) > 1e-9)) {
            throw UsageError("scaling probe points are degenerate (repeated or too close)");
        }
    }

    std::vector<ScalingSample> out(pts.size());
    auto evaluate = [&](std::size_t i) {
        PhysicalParams p = params;
        double x1 = probe.xt1, x2 = probe.xt2;
        switch (probe.axis) {
            case ScalingAxis::Mass: p = p.with_mass(pts[i]); break;
            case ScalingAxis::Omega0: p = p.with_omega0(pts[i]); break;
            case ScalingAxis::Distance: x1 = x2 = pts[i]; break;
        }
        out[i].parameter = pts[i];
        if (probe.quantity == ScalingQuantity::Asymptotic) {
            out[i].value = asymptotic_correlation(p, x1, x2);
        } else {
            ContinuumOptions opts = probe.options;
            opts.threads = 1;
            out[i].value = continuum_correlation(p, probe.omega_m, x1, x2, opts).value;
        }
    };
    parallel_for(pts.size(), evaluate, probe.options.threads);

    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = (i == 0) ? 0 : i - 1;
        const std::size_t hi = (i == n - 1) ? n - 1 : i + 1;
        out[i].log_slope = log_slope(out[lo].parameter, out[lo].value, out[hi].parameter, out[hi].value);
    }
    return out;
}

std::string to_string(ContinuumMethod method) {
    return method == ContinuumMethod::PartialAnalytic ? "partial-analytic" : "full-quadrature";
}

std::string to_string(ScalingQuantity quantity) {
    return quantity == ScalingQuantity::Asymptotic ? "asymptotic" : "continuum";
}

std::string to_string(ScalingAxis axis) {
    switch (axis) {
        case ScalingAxis::Mass: return "mass";
        case ScalingAxis::Omega0: return "omega0";
        case ScalingAxis::Distance: return "distance";
    }
    return "unknown";
}

}  // namespace mirrorvac
