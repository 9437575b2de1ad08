#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mirrorvac/model.hpp"
#include "mirrorvac/single_cavity.hpp"

namespace mirrorvac {

enum class CorrelationMethod { DiscreteSum, ContinuumQuadrature, Asymptotic };

enum class NegativityEnforcement { Warn, Fail };

/// C(x1, x2) sampled on x1Grid x x2Grid, row-major in x1.
struct CorrelationGrid {
    std::vector<double> x1;  ///< left cavity, (0, L)
    std::vector<double> x2;  ///< right cavity, (L, 2L)
    std::vector<double> values;
    CorrelationMethod method = CorrelationMethod::DiscreteSum;
    PhysicalParams params;
    CutoffSpec cutoff;
    int mode_count = 0;
    bool all_negative = true;

    double at(std::size_t i, std::size_t j) const { return values[i * x2.size() + j]; }
    /// Distances from the movable wall: L - x1 and x2 - L.
    double xt1(std::size_t i) const { return params.length - x1[i]; }
    double xt2(std::size_t j) const { return x2[j] - params.length; }
};

struct CorrelationOptions {
    std::optional<int> mode_count;
    NegativityEnforcement negativity = NegativityEnforcement::Warn;
    int threads = 0;
};

/// Connected correlator <phi^2(x1) phi^2(x2)> - <phi^2(x1)><phi^2(x2)> across
/// the movable wall:
/// -hbar^3 c^4 / (L^4 m omega0) sum_{pqrs} (-1)^{p+q+r+s} S(x1,x2) {
///    1/((omega0+w_p+w_q)(omega0+w_r+w_s))
///  + 1/((omega0+w_p+w_q)(w_p+w_q+w_r+w_s)) + (x1 <-> x2) } f_pqrs.
/// Every denominator depends on p, q only through n = p + q (equally spaced
/// modes), so the sum is evaluated exactly as A(x1)^T W B(x2) with pair
/// tables A_n = sum_{p+q=n} (-1)^n sin(k_p x1) sin(k_q x1) f_p f_q.
CorrelationGrid squared_field_correlation_discrete(const PhysicalParams& params,
                                                   const CutoffSpec& cutoff,
                                                   std::span<const double> x1_grid,
                                                   std::span<const double> x2_grid,
                                                   const CorrelationOptions& options = {});

/// Connected <phi(x1) phi(x2)> on the second-order dressed state. Every
/// component of that state has an even photon number in each cavity, and
/// phi(x1) phi(x2) changes both numbers by one, so no matrix element
/// survives. The function enumerates the occupied sectors, sums the
/// connected contributions and returns the assembled value (0).
double phi_phi_cross_correlation(const PhysicalParams& params, const CutoffSpec& cutoff,
                                 double x1, double x2);

/// Photon-number sectors (mirror quanta, cavity-1 photons, cavity-2 photons)
/// reachable from the bare vacuum with at most `order` applications of the
/// interaction.
struct Sector {
    int mirror = 0;
    int left = 0;
    int right = 0;
    auto operator<=>(const Sector&) const = default;
};
std::vector<Sector> dressed_state_sectors(int order);

struct ReductionCheck {
    ObservableProfile two_cavity;     ///< <phi^2(x1)> from the two-cavity second-order state
    ObservableProfile single_cavity;  ///< single-cavity delta_phi_squared
    double max_abs_deviation = 0.0;
    double max_rel_deviation = 0.0;
};

/// <phi^2(x1)> correction in the left cavity assembled from the two-cavity
/// couplings C^1 via the second-order state (pair populations
/// 4 sum_j c_jk c_jl and two-photon amplitudes 4 D/(omega_k+omega_l),
/// D = C^1 diag(f) c), compared with delta_phi_squared.
ReductionCheck single_cavity_reduction_check(const PhysicalParams& params, const CutoffSpec& cutoff,
                                             std::span<const double> grid,
                                             std::optional<int> mode_count = std::nullopt);

std::string to_string(CorrelationMethod method);

}  // namespace mirrorvac
