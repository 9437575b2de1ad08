#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mirrorvac/model.hpp"

namespace mirrorvac {

enum class ContinuumMethod {
    /// Three of the four frequency integrals done in closed form (complex
    /// exponential integrals), the remaining one numerically.
    PartialAnalytic,
    /// Pair-sum integrals in closed form at fixed pair frequency, then a
    /// two-dimensional product quadrature over both pair frequencies.
    FullQuadrature,
};

struct ContinuumOptions {
    ContinuumMethod method = ContinuumMethod::PartialAnalytic;
    double rel_tol = 1e-6;
    std::size_t max_evaluations = 100'000'000;
    /// Throw ConvergenceError when the tolerance is missed. Sweeps turn this
    /// off and read `converged` instead.
    bool throw_on_failure = true;
    int threads = 0;
};

/// Single-mirror limit (L -> infinity) of the squared-field correlation at
/// distances xt1, xt2 from the movable wall, exponential cutoff omegaM.
struct ContinuumPoint {
    double xt1 = 0.0;
    double xt2 = 0.0;
    double value = 0.0;
    /// Contribution of the 1/((w0+P)(w0+R)) denominator alone; the rest
    /// comes from the two 1/(P+R) terms.
    double separable_part = 0.0;
    double rel_tol = 0.0;  ///< achieved relative error estimate
    ContinuumMethod method = ContinuumMethod::PartialAnalytic;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// C(xt1, xt2) = -hbar^3 / (pi^4 m omega0) J, where J is the L -> infinity
/// limit of the discrete mode sum (mode density L / (pi c)) in frequency
/// variables, tau_i = xt_i / c and damping exp(-sum omega / omegaM).
ContinuumPoint continuum_correlation(const PhysicalParams& params, double omega_m, double xt1,
                                     double xt2, const ContinuumOptions& options = {});

/// Large-distance closed form
/// -hbar^3 c^4 / (2^9 pi^4 m omega0^3 xt1^2 xt2^2).
double asymptotic_correlation(const PhysicalParams& params, double xt1, double xt2);

/// G(tau, a) = int_0^inf du exp(-omega0 u) tau^2 / (tau^2 + (u + a)^2)^2,
/// the building block of the analytic reduction. Exposed for tests.
double pair_kernel(double omega0, double tau, double a);

enum class ScalingQuantity { Asymptotic, Continuum };
enum class ScalingAxis { Mass, Omega0, Distance };

struct ScalingProbe {
    ScalingQuantity quantity = ScalingQuantity::Asymptotic;
    ScalingAxis axis = ScalingAxis::Distance;
    std::vector<double> points;  ///< values of the swept parameter, >= 3
    double omega_m = 1000.0;     ///< continuum only
    double xt1 = 10.0;           ///< fixed distances when the axis is not Distance
    double xt2 = 10.0;
    ContinuumOptions options;
};

struct ScalingSample {
    double parameter = 0.0;
    double value = 0.0;
    double log_slope = 0.0;  ///< d ln|value| / d ln(parameter)
};

/// Evaluates the quantity along one axis (Distance sets xt1 = xt2) and
/// returns finite-difference log-log slopes: centred in the interior,
/// one-sided at the ends.
std::vector<ScalingSample> scaling_probe(const PhysicalParams& params, const ScalingProbe& probe);

std::string to_string(ContinuumMethod method);
std::string to_string(ScalingQuantity quantity);
std::string to_string(ScalingAxis axis);

}  // namespace mirrorvac
