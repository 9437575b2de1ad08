#include "mirrorvac/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mirrorvac/errors.hpp"
#include "mirrorvac/parallel.hpp"

namespace mirrorvac {

namespace {

void require_positive(double value, const char* name) {
    if (!std::isfinite(value) || value <= 0.0) {
        std::ostringstream os;
        os << name << " must be finite and positive (got " << value << ")";
        throw ParameterError(os.str());
    }
}

double sign_of_parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// omega_n <= omegaM with a relative slack, so a cutoff placed exactly on a
// mode frequency keeps that mode despite rounding in n*pi*c/L.
bool within(double omega, double omega_m) { return omega <= omega_m * (1.0 + 1e-12); }

}  // namespace

void PhysicalParams::validate() const {
    require_positive(mass, "mass");
    require_positive(omega0, "omega0");
    require_positive(length, "length");
    require_positive(hbar, "hbar");
    require_positive(c, "c");
    const double lam = std::sqrt(hbar / (8.0 * mass * omega0 * length * length));
    if (!std::isfinite(lam) || lam <= 0.0) {
        throw ParameterError("derived coupling lambda is not finite and positive");
    }
}

double PhysicalParams::coupling_lambda() const {
    validate();
    return std::sqrt(hbar / (8.0 * mass * omega0 * length * length));
}

PhysicalParams PhysicalParams::from_lambda(double lambda, double omega0, double length,
                                           double hbar, double c) {
    require_positive(lambda, "lambda");
    PhysicalParams p;
    p.omega0 = omega0;
    p.length = length;
    p.hbar = hbar;
    p.c = c;
    p.mass = hbar / (8.0 * omega0 * length * length * lambda * lambda);
    p.validate();
    return p;
}

PhysicalParams PhysicalParams::with_mass(double m) const {
    PhysicalParams p = *this;
    p.mass = m;
    return p;
}

PhysicalParams PhysicalParams::with_omega0(double w) const {
    PhysicalParams p = *this;
    p.omega0 = w;
    return p;
}

PhysicalParams PhysicalParams::with_length(double l) const {
    PhysicalParams p = *this;
    p.length = l;
    return p;
}

ModeSet::ModeSet(int count, double length, double c) : count_(count), length_(length), c_(c) {
    if (count < 0) throw UsageError("mode count must be non-negative");
    require_positive(length, "length");
    require_positive(c, "c");
}

double ModeSet::wavenumber(int n) const {
    if (n < 1 || n > count_) throw UsageError("mode index out of range");
    return n * std::numbers::pi / length_;
}

double ModeSet::frequency(int n) const { return c_ * wavenumber(n); }

std::vector<double> ModeSet::frequencies() const {
    std::vector<double> w(static_cast<std::size_t>(count_));
    for (int n = 1; n <= count_; ++n) w[static_cast<std::size_t>(n - 1)] = frequency(n);
    return w;
}

CutoffSpec CutoffSpec::sharp(double omega_m, SharpRule rule) {
    CutoffSpec s{CutoffKind::Sharp, omega_m, rule};
    s.validate();
    return s;
}

CutoffSpec CutoffSpec::exponential(double omega_m) {
    CutoffSpec s{CutoffKind::Exponential, omega_m, SharpRule::PerMode};
    s.validate();
    return s;
}

void CutoffSpec::validate() const { require_positive(omega_m, "omegaM"); }

int required_mode_count(const PhysicalParams& params, const CutoffSpec& cutoff,
                        int participating_modes) {
    params.validate();
    cutoff.validate();
    const double fundamental = std::numbers::pi * params.c / params.length;
    if (cutoff.kind == CutoffKind::Sharp) {
        // The other participating modes contribute at least omega_1 each.
        double budget = cutoff.omega_m;
        if (cutoff.sharp_rule == SharpRule::FrequencySum) {
            budget -= (participating_modes - 1) * fundamental;
        }
        if (budget < fundamental * (1.0 - 1e-12)) return 0;
        return static_cast<int>(std::floor(budget / fundamental * (1.0 + 1e-12)));
    }
    const double omega_tail = -std::log(kExponentialTailWeight) * cutoff.omega_m;
    const int n = static_cast<int>(std::ceil(omega_tail / fundamental));
    return 2 * std::max(n, 1);
}

ModeSet mode_set_for(const PhysicalParams& params, const CutoffSpec& cutoff,
                     std::optional<int> override_count, int participating_modes) {
    const int n = override_count ? *override_count
                                 : required_mode_count(params, cutoff, participating_modes);
    return ModeSet(n, params.length, params.c);
}

double coupling_matrix_element(const PhysicalParams& params, int k, int j) {
    params.validate();
    if (k < 1 || j < 1) throw UsageError("mode indices start at 1");
    const double wk = params.c * k * std::numbers::pi / params.length;
    const double wj = params.c * j * std::numbers::pi / params.length;
    const double h = params.hbar;
    return sign_of_parity(k + j) / params.length *
           std::sqrt(h * h * h * wk * wj / (8.0 * params.mass * params.omega0));
}

double two_cavity_coupling(const PhysicalParams& params, CavityTag cavity, int k, int j) {
    switch (cavity) {
        case CavityTag::Left:
            return coupling_matrix_element(params, k, j);
        case CavityTag::Right:
            return -coupling_matrix_element(params, k, j);
        case CavityTag::Single:
            break;
    }
    throw UsageError("two_cavity_coupling needs the Left or Right cavity");
}

double cutoff_weight(const CutoffSpec& spec, std::span<const double> freqs) {
    spec.validate();
    if (freqs.empty()) throw UsageError("cutoff_weight needs at least one frequency");
    double sum = 0.0;
    double max = 0.0;
    for (double w : freqs) {
        if (!(w >= 0.0)) throw UsageError("cutoff_weight frequencies must be non-negative");
        sum += w;
        max = std::max(max, w);
    }
    if (spec.kind == CutoffKind::Exponential) return std::exp(-sum / spec.omega_m);
    const double probe = spec.sharp_rule == SharpRule::PerMode ? max : sum;
    return within(probe, spec.omega_m) ? 1.0 : 0.0;
}

double cutoff_weight(const CutoffSpec& spec, std::initializer_list<double> freqs) {
    return cutoff_weight(spec, std::span<const double>(freqs.begin(), freqs.size()));
}

bool cutoff_factorizes(const CutoffSpec& spec) {
    return spec.kind == CutoffKind::Exponential || spec.sharp_rule == SharpRule::PerMode;
}

double mode_weight(const CutoffSpec& spec, double omega) {
    if (!cutoff_factorizes(spec)) {
        throw UsageError("frequency-sum sharp cutoff has no per-mode factorization");
    }
    if (spec.kind == CutoffKind::Exponential) return std::exp(-omega / spec.omega_m);
    return within(omega, spec.omega_m) ? 1.0 : 0.0;
}

std::vector<std::string> regime_warnings(const PhysicalParams& params, const CutoffSpec& cutoff) {
    std::vector<std::string> out;
    if (cutoff.omega_m < 10.0 * params.omega0) {
        std::ostringstream os;
        os << "cutoff frequency omegaM = " << cutoff.omega_m
           << " is not much larger than omega0 = " << params.omega0;
        out.push_back(os.str());
    }
    for (const auto& msg : out) warn(msg);
    return out;
}

std::string to_string(CutoffKind kind) {
    return kind == CutoffKind::Sharp ? "sharp" : "exponential";
}

std::string to_string(SharpRule rule) {
    return rule == SharpRule::PerMode ? "per-mode" : "frequency-sum";
}

std::string to_string(CavityTag tag) {
    switch (tag) {
        case CavityTag::Single: return "single";
        case CavityTag::Left: return "left";
        case CavityTag::Right: return "right";
    }
    return "?";
}

}  // namespace mirrorvac
