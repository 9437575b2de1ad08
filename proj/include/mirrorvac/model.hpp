#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mirrorvac {

/// Mirror and cavity parameters. Natural units (hbar = c = 1) unless the
/// caller sets hbar and c explicitly.
struct PhysicalParams {
    double mass = 1.0;    ///< mirror mass
    double omega0 = 1.0;  ///< mirror angular frequency
    double length = 1.0;  ///< cavity length L
    double hbar = 1.0;
    double c = 1.0;

    /// Throws ParameterError unless every field is finite and positive.
    void validate() const;

    /// lambda = sqrt(hbar / (8 m omega0 L^2)), the small parameter of the
    /// perturbative expansion.
    double coupling_lambda() const;

    /// Mass that yields the requested lambda for the other fields given.
    static PhysicalParams from_lambda(double lambda, double omega0, double length,
                                      double hbar = 1.0, double c = 1.0);

    PhysicalParams with_mass(double m) const;
    PhysicalParams with_omega0(double w) const;
    PhysicalParams with_length(double l) const;
};

/// Field modes of a Dirichlet cavity of length L: k_n = n pi / L, omega_n = c k_n.
class ModeSet {
public:
    ModeSet(int count, double length, double c);

    int count() const noexcept { return count_; }
    double length() const noexcept { return length_; }
    /// Mode index n is 1-based.
    double wavenumber(int n) const;
    double frequency(int n) const;
    /// omega_1 .. omega_N.
    std::vector<double> frequencies() const;

private:
    int count_;
    double length_;
    double c_;
};

enum class CutoffKind { Sharp, Exponential };

/// How a sharp cutoff decides whether a summand survives.
enum class SharpRule {
    PerMode,       ///< every participating frequency <= omegaM
    FrequencySum,  ///< sum of participating frequencies <= omegaM
};

struct CutoffSpec {
    CutoffKind kind = CutoffKind::Exponential;
    double omega_m = 50.0;
    SharpRule sharp_rule = SharpRule::PerMode;

    static CutoffSpec sharp(double omega_m, SharpRule rule = SharpRule::PerMode);
    static CutoffSpec exponential(double omega_m);

    void validate() const;
};

enum class CavityTag { Single, Left, Right };

/// Relative tail weight exp(-omega_N / omegaM) below which exponential-cutoff
/// sums are truncated before the doubling guard.
inline constexpr double kExponentialTailWeight = 1e-8;

/// Number of modes that a sum must carry for this cutoff. Sharp: highest n
/// with omega_n <= omegaM (per-mode) or the largest n that can still appear
/// in a frequency sum with the given number of participating modes.
/// Exponential: tail weight below kExponentialTailWeight, then doubled.
int required_mode_count(const PhysicalParams& params, const CutoffSpec& cutoff,
                        int participating_modes = 1);

ModeSet mode_set_for(const PhysicalParams& params, const CutoffSpec& cutoff,
                     std::optional<int> override_count = std::nullopt,
                     int participating_modes = 1);

/// Field-mirror coupling C_kj of the Law Hamiltonian,
/// (-1)^{k+j} L^-1 sqrt(hbar^3 omega_k omega_j / (8 m omega0)).
double coupling_matrix_element(const PhysicalParams& params, int k, int j);

/// C^1_kj for the left cavity, -C^1_kj for the right one: a displacement
/// lengthens one cavity and shortens the other.
double two_cavity_coupling(const PhysicalParams& params, CavityTag cavity, int k, int j);

/// Regularization weight for a summand whose participating mode
/// frequencies are `freqs`.
double cutoff_weight(const CutoffSpec& spec, std::span<const double> freqs);
double cutoff_weight(const CutoffSpec& spec, std::initializer_list<double> freqs);

/// Per-mode factor g(omega) such that the weight of a product of modes is
/// the product of the factors. Defined for Exponential and for Sharp with
/// the per-mode rule.
double mode_weight(const CutoffSpec& spec, double omega);
bool cutoff_factorizes(const CutoffSpec& spec);

/// Non-fatal sanity checks (omegaM >> omega0). Each message is also passed
/// to mirrorvac::warn.
std::vector<std::string> regime_warnings(const PhysicalParams& params, const CutoffSpec& cutoff);

std::string to_string(CutoffKind kind);
std::string to_string(SharpRule rule);
std::string to_string(CavityTag tag);

}  // namespace mirrorvac
