#include "mirrorvac/single_cavity.hpp"

#include <cmath>
#include <numbers>

#include "mirrorvac/errors.hpp"
#include "mirrorvac/parallel.hpp"

namespace mirrorvac {

namespace {

double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

struct Grid {
    std::vector<double> x;  // cavity coordinate
    std::vector<double> d;  // distance from the movable wall
};

Grid convert_grid(const PhysicalParams& params, std::span<const double> grid,
                  CoordinateConvention convention) {
    const double L = params.length;
    Grid g;
    g.x.reserve(grid.size());
    g.d.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = grid[i];
        if (!std::isfinite(v) || v <= 0.0 || v >= L) {
            throw UsageError("grid point on or outside the cavity walls; points must lie in (0, L)");
        }
        if (i > 0 && !(v > grid[i - 1])) throw UsageError("grid must be strictly increasing");
        const bool cavity = convention == CoordinateConvention::CavityCoordinate;
        g.x.push_back(cavity ? v : L - v);
        g.d.push_back(cavity ? L - v : v);
    }
    return g;
}

// Mode sums are accumulated in extended precision: the pair and
// interference terms cancel strongly at some positions.
using Acc = long double;

// Shared per-mode tables. R_l = sum_j omega_j f_j / (omega0 + omega_j + omega_l)
// is the intermediate-mode sum of the interference term. The modes are
// equally spaced, so the pair denominators depend only on j + k and are
// tabulated once: D[j + k] = 1/(omega0 + omega_j + omega_k) and
// H[k + l] = 1/(omega_k + omega_l), with 0-based indices.
struct ModeTables {
    int n = 0;
    std::vector<Acc> w;  // mode frequencies, rounded only once to extended precision
    std::vector<double> f, sg;
    std::vector<Acc> R, D, H;
};

ModeTables make_tables(const PhysicalParams& params, const CutoffSpec& cutoff, int count) {
    ModeTables t;
    t.n = count;
    const auto N = static_cast<std::size_t>(count);
    const Acc fundamental = std::numbers::pi_v<Acc> * params.c / params.length;
    t.w.resize(N);
    t.f.resize(N);
    t.sg.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        t.w[k] = static_cast<Acc>(k + 1) * fundamental;
        t.f[k] = mode_weight(cutoff, static_cast<double>(t.w[k]));
        t.sg[k] = parity_sign(static_cast<int>(k) + 1);
    }
    t.D.resize(2 * N);
    t.H.resize(2 * N);
    for (std::size_t s = 0; s < 2 * N; ++s) {
        const Acc pair = static_cast<Acc>(s + 2) * fundamental;
        t.D[s] = 1.0L / (params.omega0 + pair);
        t.H[s] = 1.0L / pair;
    }
    t.R.assign(N, 0.0);
    for (std::size_t l = 0; l < N; ++l) {
        Acc acc = 0.0;
        for (std::size_t j = 0; j < N; ++j) acc += t.w[j] * t.f[j] * t.D[j + l];
        t.R[l] = acc;
    }
    return t;
}

// sum_j omega_j f_j (sum_k u_k / (omega0 + omega_j + omega_k))^2, for one
// or two vectors at once.
Acc pair_square_sum(const ModeTables& t, const std::vector<Acc>& u) {
    Acc total = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const Acc* d = &t.D[j];
        Acc inner = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) inner += u[k] * d[k];
        total += t.w[j] * t.f[j] * inner * inner;
    }
    return total;
}

Acc pair_square_sum(const ModeTables& t, const std::vector<Acc>& u, const std::vector<Acc>& v) {
    Acc total = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const Acc* d = &t.D[j];
        Acc iu = 0.0, iv = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            iu += u[k] * d[k];
            iv += v[k] * d[k];
        }
        total += t.w[j] * t.f[j] * (iu * iu + iv * iv);
    }
    return total;
}

// sum_{kl} u_k u_l R_l / (omega_k + omega_l), and the difference of two
// such sums.
Acc interference_sum(const ModeTables& t, const std::vector<Acc>& u) {
    Acc total = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const Acc* h = &t.H[k];
        Acc row = 0.0;
        for (std::size_t l = 0; l < u.size(); ++l) row += u[l] * t.R[l] * h[l];
        total += u[k] * row;
    }
    return total;
}

Acc interference_difference(const ModeTables& t, const std::vector<Acc>& u, const std::vector<Acc>& v) {
    Acc total = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const Acc* h = &t.H[k];
        Acc ru = 0.0, rv = 0.0;
        for (std::size_t l = 0; l < u.size(); ++l) {
            const Acc rh = t.R[l] * h[l];
            ru += u[l] * rh;
            rv += v[l] * rh;
        }
        total += u[k] * ru - v[k] * rv;
    }
    return total;
}

int profile_mode_count(const PhysicalParams& params, const CutoffSpec& cutoff,
                       const ProfileOptions& options) {
    const int n = options.mode_count ? *options.mode_count : required_mode_count(params, cutoff, 3);
    if (n <= 0) throw DegenerateInputError("no cavity mode survives the cutoff");
    return n;
}

ObservableProfile make_profile(ProfileKind kind, const PhysicalParams& params,
                               const CutoffSpec& cutoff, const Grid& g, int modes,
                               const ProfileOptions& options) {
    ObservableProfile p;
    p.kind = kind;
    p.positions = g.x;
    p.distances = g.d;
    p.values.assign(g.x.size(), 0.0);
    p.params = params;
    p.cutoff = cutoff;
    p.mode_count = modes;
    p.convention = options.convention;
    p.terms = options.terms;
    return p;
}

// Frequency-sum sharp cutoffs do not factorize; the triple sums are then
// enumerated directly. Mode counts are small in that regime.
enum class Direct { E, B, H, Phi };

double direct_triple_sum(const PhysicalParams& params, const CutoffSpec& cutoff, int modes,
                         double x, Direct which, SecondOrderTerms terms) {
    const ModeSet ms(modes, params.length, params.c);
    const auto w = ms.frequencies();
    const Acc w0 = params.omega0;
    const Acc c = params.c;
    const Acc X = x;
    Acc total = 0.0;
    for (int j = 1; j <= modes; ++j) {
        const Acc wj = w[static_cast<std::size_t>(j - 1)];
        for (int k = 1; k <= modes; ++k) {
            const Acc wk = w[static_cast<std::size_t>(k - 1)];
            for (int l = 1; l <= modes; ++l) {
                const Acc wl = w[static_cast<std::size_t>(l - 1)];
                const double weight = cutoff_weight(cutoff, {double(wj), double(wk), double(wl)});
                if (weight == 0.0) continue;
                const Acc sg = parity_sign(k + l);
                const Acc pair_den = (w0 + wj + wk) * (w0 + wj + wl);
                const Acc int_den = (w0 + wj + wl) * (wk + wl);
                const Acc ss = std::sin(wk * X / c) * std::sin(wl * X / c);
                const Acc cc = std::cos(wk * X / c) * std::cos(wl * X / c);
                const bool full = terms == SecondOrderTerms::Complete;
                Acc term = 0.0;
                switch (which) {
                    case Direct::E:
                        term = wj * wk * wl * (ss / pair_den - (full ? 2 * ss / int_den : 0.0L));
                        break;
                    case Direct::B:
                        term = wj * wk * wl * (cc / pair_den + (full ? 2 * cc / int_den : 0.0L));
                        break;
                    case Direct::H:
                        term = wj * wk * wl *
                               (0.5L * std::cos((wk - wl) * X / c) / pair_den +
                                (full ? std::cos((wk + wl) * X / c) / int_den : 0.0L));
                        break;
                    case Direct::Phi:
                        term = wj * (ss / pair_den + (full ? 2 * ss / int_den : 0.0L));
                        break;
                }
                total += sg * weight * term;
            }
        }
    }
    return static_cast<double>(total);
}

double em_prefactor(const PhysicalParams& p) {
    return p.hbar * p.hbar / (p.mass * p.omega0 * p.length * p.length * p.length);
}

}  // namespace

std::vector<double> default_grid(const PhysicalParams& params, int n) {
    params.validate();
    if (n < 2) throw UsageError("grid needs at least two points");
    std::vector<double> g(static_cast<std::size_t>(n));
    const double a = 0.01 * params.length;
    const double b = 0.99 * params.length;
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return g;
}

ObservableProfile delta_energy_density(const PhysicalParams& params, const CutoffSpec& cutoff,
                                       std::span<const double> grid,
                                       const ProfileOptions& options) {
    params.validate();
    cutoff.validate();
    const Grid g = convert_grid(params, grid, options.convention);
    const int modes = profile_mode_count(params, cutoff, options);
    auto profile = make_profile(ProfileKind::DeltaEnergyDensity, params, cutoff, g, modes, options);
    const double pre = em_prefactor(params);
    const double c = params.c;
    const bool full = options.terms == SecondOrderTerms::Complete;

    if (!cutoff_factorizes(cutoff)) {
        parallel_for(g.x.size(), [&](std::size_t i) {
            profile.values[i] = pre * direct_triple_sum(params, cutoff, modes, g.x[i], Direct::H,
                                                        options.terms);
        }, options.threads);
        return profile;
    }

    const ModeTables t = make_tables(params, cutoff, modes);
    const auto N = static_cast<std::size_t>(modes);

    // cos((w_k + w_l) x) is expanded into products of single-mode factors,
    // so both terms reuse the same vectors. Positions stay in cavity
    // coordinates: L - x would add a rounding error that the cancellation
    // between the two terms amplifies.
    parallel_for(g.x.size(), [&](std::size_t i) {
        const Acc x = g.x[i];
        std::vector<Acc> uc(N), us(N);
        for (std::size_t k = 0; k < N; ++k) {
            const Acc amp = t.sg[k] * t.w[k] * t.f[k];
            uc[k] = amp * std::cos(t.w[k] * x / c);
            us[k] = amp * std::sin(t.w[k] * x / c);
        }
        Acc value = 0.5L * pair_square_sum(t, uc, us);
        if (full) value += interference_difference(t, uc, us);
        profile.values[i] = static_cast<double>(pre * value);
    }, options.threads);
    return profile;
}

ObservableProfile em_field_fluctuations(const PhysicalParams& params, const CutoffSpec& cutoff,
                                        std::span<const double> grid, FieldComponent component,
                                        const ProfileOptions& options) {
    params.validate();
    cutoff.validate();
    const Grid g = convert_grid(params, grid, options.convention);
    const int modes = profile_mode_count(params, cutoff, options);
    const auto kind = component == FieldComponent::E ? ProfileKind::ESquared : ProfileKind::BSquared;
    auto profile = make_profile(kind, params, cutoff, g, modes, options);
    const double pre = em_prefactor(params);
    const double c = params.c;
    const bool full = options.terms == SecondOrderTerms::Complete;

    if (!cutoff_factorizes(cutoff)) {
        const Direct which = component == FieldComponent::E ? Direct::E : Direct::B;
        parallel_for(g.x.size(), [&](std::size_t i) {
            profile.values[i] =
                pre * direct_triple_sum(params, cutoff, modes, g.x[i], which, options.terms);
        }, options.threads);
        return profile;
    }

    const ModeTables t = make_tables(params, cutoff, modes);
    const auto N = static_cast<std::size_t>(modes);
    // E carries sin(k x) mode factors and a negative interference term;
    // B carries cos(k x) and a positive one.
    const Acc interference_sign = component == FieldComponent::E ? -2.0 : 2.0;

    parallel_for(g.x.size(), [&](std::size_t i) {
        const Acc x = g.x[i];
        std::vector<Acc> u(N);
        for (std::size_t k = 0; k < N; ++k) {
            const Acc mode = component == FieldComponent::E ? std::sin(t.w[k] * x / c)
                                                            : std::cos(t.w[k] * x / c);
            u[k] = t.sg[k] * t.w[k] * t.f[k] * mode;
        }
        Acc value = pair_square_sum(t, u);
        if (full) value += interference_sign * interference_sum(t, u);
        profile.values[i] = static_cast<double>(pre * value);
    }, options.threads);
    return profile;
}

ObservableProfile delta_phi_squared(const PhysicalParams& params, const CutoffSpec& cutoff,
                                    std::span<const double> grid, const ProfileOptions& options) {
    params.validate();
    cutoff.validate();
    const Grid g = convert_grid(params, grid, options.convention);
    const int modes = profile_mode_count(params, cutoff, options);
    auto profile = make_profile(ProfileKind::DeltaPhiSquared, params, cutoff, g, modes, options);
    const double pre = em_prefactor(params) * params.c * params.c;
    const double c = params.c;
    const bool full = options.terms == SecondOrderTerms::Complete;

    if (!cutoff_factorizes(cutoff)) {
        parallel_for(g.x.size(), [&](std::size_t i) {
            profile.values[i] = pre * direct_triple_sum(params, cutoff, modes, g.x[i], Direct::Phi,
                                                        options.terms);
        }, options.threads);
        return profile;
    }

    const ModeTables t = make_tables(params, cutoff, modes);
    const auto N = static_cast<std::size_t>(modes);

    parallel_for(g.x.size(), [&](std::size_t i) {
        const Acc x = g.x[i];
        std::vector<Acc> u(N);
        for (std::size_t k = 0; k < N; ++k) u[k] = t.sg[k] * t.f[k] * std::sin(t.w[k] * x / c);
        Acc value = pair_square_sum(t, u);
        if (full) value += 2 * interference_sum(t, u);
        profile.values[i] = static_cast<double>(pre * value);
    }, options.threads);
    return profile;
}

std::string to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::DeltaEnergyDensity: return "delta_energy_density";
        case ProfileKind::ESquared: return "e_squared";
        case ProfileKind::BSquared: return "b_squared";
        case ProfileKind::DeltaPhiSquared: return "delta_phi_squared";
    }
    return "?";
}

std::string to_string(CoordinateConvention convention) {
    return convention == CoordinateConvention::CavityCoordinate ? "cavity-coordinate"
                                                                : "distance-from-movable-wall";
}

std::string to_string(SecondOrderTerms terms) {
    return terms == SecondOrderTerms::Complete ? "complete" : "pair-population-only";
}

}  // namespace mirrorvac
