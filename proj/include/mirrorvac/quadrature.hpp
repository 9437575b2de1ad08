#pragma once

#include <cstddef>
#include <functional>

namespace mirrorvac {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_evaluations = 10'000'000;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;

    double rel_error() const;
};

/// Global adaptive 21-point Gauss-Kronrod on [a, b]: the interval with the
/// largest error estimate is bisected until the total estimate meets
/// max(abs_tol, rel_tol |value|) or the evaluation budget is spent. Never
/// throws on non-convergence; callers inspect `converged`.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Integral over [0, inf) after the map x = scale u / (1 - u), u in [0, 1).
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double scale,
                                         const QuadratureOptions& options = {});

}  // namespace mirrorvac
