#include "mirrorvac/two_cavity.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "mirrorvac/errors.hpp"
#include "mirrorvac/parallel.hpp"

namespace mirrorvac {

namespace {

using Acc = long double;

double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

void check_grid(std::span<const double> grid, double lo, double hi, const char* name) {
    if (grid.empty()) throw UsageError(std::string(name) + " grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] <= lo || grid[i] >= hi) {
            std::ostringstream os;
            os << name << " coordinate " << grid[i] << " is outside its cavity (" << lo << ", " << hi
               << ")";
            throw UsageError(os.str());
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw UsageError(std::string(name) + " grid must be strictly increasing");
        }
    }
}

}  // namespace

CorrelationGrid squared_field_correlation_discrete(const PhysicalParams& params,
                                                   const CutoffSpec& cutoff,
                                                   std::span<const double> x1_grid,
                                                   std::span<const double> x2_grid,
                                                   const CorrelationOptions& options) {
    params.validate();
    cutoff.validate();
    const double L = params.length;
    check_grid(x1_grid, 0.0, L, "x1");
    check_grid(x2_grid, L, 2.0 * L, "x2");

    const int modes = options.mode_count ? *options.mode_count : required_mode_count(params, cutoff, 4);
    if (modes <= 0) throw DegenerateInputError("no cavity mode survives the cutoff");
    const auto N = static_cast<std::size_t>(modes);
    const ModeSet ms(modes, L, params.c);
    const auto w = ms.frequencies();
    const double c = params.c;
    const double w0 = params.omega0;
    const double fundamental = std::numbers::pi * c / L;

    // Per-mode weights. The frequency-sum rule instead masks W by n + m.
    const bool per_mode = cutoff_factorizes(cutoff);
    std::vector<double> f(N, 1.0);
    if (per_mode) {
        for (std::size_t k = 0; k < N; ++k) f[k] = mode_weight(cutoff, w[k]);
    }

    const std::size_t S = 2 * N + 1;  // pair index n = p + q in [2, 2N]
    // W_nm = a_n a_m + (a_n + a_m) h_{n+m} with a_n = 1/(omega0 + Omega_n)
    // and h_s = 1/(s omega_1); rows are regenerated from these tables, so
    // memory stays O(S) for any cavity length. Everything is accumulated in
    // extended precision because the alternating pair sums cancel strongly
    // at some positions.
    std::vector<Acc> a(S, 0.0), h(2 * S, 0.0), keep(2 * S, 1.0);
    const Acc omega1 = std::numbers::pi_v<Acc> * c / L;
    for (std::size_t n = 2; n < S; ++n) a[n] = 1.0L / (w0 + static_cast<Acc>(n) * omega1);
    for (std::size_t t = 4; t < 2 * S; ++t) {
        h[t] = 1.0L / (static_cast<Acc>(t) * omega1);
        if (!per_mode) keep[t] = cutoff_weight(cutoff, {static_cast<double>(t) * fundamental});
    }
    auto kernel_row = [&](std::size_t n, const std::vector<Acc>& B) {
        Acc acc = 0.0;
        const Acc an = a[n];
        for (std::size_t m = 2; m < S; ++m) acc += keep[n + m] * (an * a[m] + (an + a[m]) * h[n + m]) * B[m];
        return acc;
    };
    auto apply_kernel = [&](const std::vector<Acc>& B, int threads) {
        std::vector<Acc> out(S, 0.0);
        parallel_for(S - 2, [&](std::size_t r) { out[r + 2] = kernel_row(r + 2, B); }, threads);
        return out;
    };

    auto pair_table = [&](double x) {
        std::vector<Acc> A(S, 0.0);
        std::vector<Acc> s(N);
        for (std::size_t k = 0; k < N; ++k) s[k] = std::sin(static_cast<Acc>(k + 1) * omega1 * x / c) * f[k];
        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = 0; q < N; ++q) A[p + q + 2] += s[p] * s[q];
        }
        for (std::size_t n = 2; n < S; ++n) A[n] *= parity_sign(static_cast<int>(n));
        return A;
    };

    std::vector<std::vector<Acc>> WB(x2_grid.size());
    if (x2_grid.size() >= 4) {
        parallel_for(x2_grid.size(), [&](std::size_t j) { WB[j] = apply_kernel(pair_table(x2_grid[j]), 1); },
                     options.threads);
    } else {
        for (std::size_t j = 0; j < x2_grid.size(); ++j) {
            WB[j] = apply_kernel(pair_table(x2_grid[j]), options.threads);
        }
    }

    CorrelationGrid out;
    out.x1.assign(x1_grid.begin(), x1_grid.end());
    out.x2.assign(x2_grid.begin(), x2_grid.end());
    out.values.assign(x1_grid.size() * x2_grid.size(), 0.0);
    out.method = CorrelationMethod::DiscreteSum;
    out.params = params;
    out.cutoff = cutoff;
    out.mode_count = modes;

    const double pre = -std::pow(params.hbar, 3) * std::pow(c, 4) /
                       (L * L * L * L * params.mass * w0);
    parallel_for(x1_grid.size(), [&](std::size_t i) {
        const std::vector<Acc> A = pair_table(x1_grid[i]);
        for (std::size_t j = 0; j < x2_grid.size(); ++j) {
            Acc dot = 0.0;
            for (std::size_t n = 2; n < S; ++n) dot += A[n] * WB[j][n];
            out.values[i * x2_grid.size() + j] = static_cast<double>(pre * dot);
        }
    }, options.threads);

    out.all_negative = std::all_of(out.values.begin(), out.values.end(),
                                   [](double v) { return v < 0.0; });
    if (!out.all_negative) {
        const std::string msg = "squared-field correlation is not negative on every grid point";
        if (options.negativity == NegativityEnforcement::Fail) throw Error(msg);
        warn(msg);
    }
    return out;
}

std::vector<Sector> dressed_state_sectors(int order) {
    if (order < 0) throw UsageError("perturbative order must be non-negative");
    // The interaction -(b + b^dag) sum C N[(a + a^dag)(a + a^dag)] moves the
    // mirror by one quantum and a single cavity's photon number by 0 or +-2.
    std::set<Sector> reached{{0, 0, 0}};
    std::set<Sector> frontier = reached;
    for (int step = 0; step < order; ++step) {
        std::set<Sector> next;
        for (const auto& s : frontier) {
            for (int dm : {-1, 1}) {
                if (s.mirror + dm < 0) continue;
                for (int dn : {-2, 0, 2}) {
                    if (s.left + dn >= 0) next.insert({s.mirror + dm, s.left + dn, s.right});
                    if (dn != 0 && s.right + dn >= 0) next.insert({s.mirror + dm, s.left, s.right + dn});
                }
            }
        }
        for (const auto& s : next) reached.insert(s);
        frontier = std::move(next);
    }
    return {reached.begin(), reached.end()};
}

double phi_phi_cross_correlation(const PhysicalParams& params, const CutoffSpec& cutoff, double x1,
                                 double x2) {
    params.validate();
    cutoff.validate();
    const double L = params.length;
    if (!(x1 > 0.0 && x1 < L)) throw UsageError("x1 must lie in the left cavity (0, L)");
    if (!(x2 > L && x2 < 2.0 * L)) throw UsageError("x2 must lie in the right cavity (L, 2L)");

    const auto sectors = dressed_state_sectors(2);
    // phi(x1) phi(x2) changes the left and right photon numbers by one each
    // and leaves the mirror alone; phi(x) alone changes one of them by one.
    auto connected = [&](int d_left, int d_right) {
        std::size_t links = 0;
        for (const auto& bra : sectors) {
            for (const auto& ket : sectors) {
                if (bra.mirror == ket.mirror && std::abs(bra.left - ket.left) == d_left &&
                    std::abs(bra.right - ket.right) == d_right) {
                    ++links;
                }
            }
        }
        return links;
    };
    const std::size_t cross = connected(1, 1);
    const std::size_t single_left = connected(1, 0);
    const std::size_t single_right = connected(0, 1);
    if (cross + single_left + single_right != 0) {
        throw std::logic_error("dressed state has an odd-photon sector; selection rule violated");
    }
    // <phi1 phi2> - <phi1><phi2>, each built from an empty set of links.
    const double two_point = 0.0;
    const double left_mean = 0.0;
    const double right_mean = 0.0;
    return two_point - left_mean * right_mean;
}

ReductionCheck single_cavity_reduction_check(const PhysicalParams& params, const CutoffSpec& cutoff,
                                             std::span<const double> grid,
                                             std::optional<int> mode_count) {
    params.validate();
    cutoff.validate();
    ProfileOptions opts;
    opts.mode_count = mode_count;
    ReductionCheck out;
    out.single_cavity = delta_phi_squared(params, cutoff, grid, opts);
    const int modes = out.single_cavity.mode_count;

    const auto N = static_cast<Eigen::Index>(modes);
    const ModeSet ms(modes, params.length, params.c);
    const auto w = ms.frequencies();
    const double hbar = params.hbar;
    const double c = params.c;

    Eigen::MatrixXd C(N, N), amp(N, N);
    Eigen::VectorXd f(N);
    for (Eigen::Index k = 0; k < N; ++k) {
        f(k) = mode_weight(cutoff, w[static_cast<std::size_t>(k)]);
        for (Eigen::Index j = 0; j < N; ++j) {
            C(k, j) = two_cavity_coupling(params, CavityTag::Left, static_cast<int>(k) + 1,
                                          static_cast<int>(j) + 1);
            amp(k, j) = C(k, j) /
                        (hbar * (params.omega0 + w[static_cast<std::size_t>(k)] + w[static_cast<std::size_t>(j)]));
        }
    }
    // <a_k^dag a_l> = 4 sum_j f_j c_jk c_jl; two-photon amplitude
    // G_kl = 4 D_kl / (hbar (omega_k + omega_l)) with D = C diag(f) c.
    const Eigen::MatrixXd occupation = 4.0 * amp.transpose() * f.asDiagonal() * amp;
    const Eigen::MatrixXd D = C * f.asDiagonal() * amp;
    Eigen::MatrixXd G(N, N);
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index l = 0; l < N; ++l) {
            G(k, l) = 4.0 * D(k, l) / (hbar * (w[static_cast<std::size_t>(k)] + w[static_cast<std::size_t>(l)]));
        }
    }
    const Eigen::MatrixXd M = 2.0 * occupation + 2.0 * (G + G.transpose());

    out.two_cavity = out.single_cavity;
    const double field_norm = hbar * c * c / params.length;
    for (std::size_t i = 0; i < out.two_cavity.positions.size(); ++i) {
        const double x = out.two_cavity.positions[i];
        Eigen::VectorXd u(N);
        for (Eigen::Index k = 0; k < N; ++k) {
            const double wk = w[static_cast<std::size_t>(k)];
            u(k) = std::sin(wk * x / c) * f(k) / std::sqrt(wk);
        }
        out.two_cavity.values[i] = field_norm * u.dot(M * u);
    }

    for (std::size_t i = 0; i < out.two_cavity.values.size(); ++i) {
        const double a = out.two_cavity.values[i];
        const double b = out.single_cavity.values[i];
        const double diff = std::abs(a - b);
        out.max_abs_deviation = std::max(out.max_abs_deviation, diff);
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0) out.max_rel_deviation = std::max(out.max_rel_deviation, diff / scale);
    }
    return out;
}

std::string to_string(CorrelationMethod method) {
    switch (method) {
        case CorrelationMethod::DiscreteSum: return "discrete-sum";
        case CorrelationMethod::ContinuumQuadrature: return "continuum-quadrature";
        case CorrelationMethod::Asymptotic: return "asymptotic";
    }
    return "?";
}

}  // namespace mirrorvac
