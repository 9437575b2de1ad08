#pragma once

#include <optional>
#include <vector>

#include "mirrorvac/model.hpp"

namespace mirrorvac {

/// First-order admixture of |1; {1_k 1_j}> in the dressed ground state.
struct PairAmplitude {
    int k = 0;  ///< k <= j
    int j = 0;
    /// Coefficient c_kj multiplying b^dag a_k^dag a_j^dag |0> in the
    /// ordered-pair sum, including the cutoff weight.
    double coefficient = 0.0;
    /// Amplitude on the normalized Fock state: 2 c_kj for k != j,
    /// sqrt(2) c_kk for k == j.
    double state_amplitude = 0.0;
    double pair_frequency = 0.0;  ///< omega_k + omega_j
};

struct DressedAmplitudes {
    PhysicalParams params;
    CutoffSpec cutoff;
    int mode_count = 0;
    std::vector<PairAmplitude> pairs;  ///< ordered by k, then j >= k
    /// Squared norm of the first-order correction (sum of state weights).
    double lambda_sq = 0.0;

    /// c_kj for either argument order.
    double coefficient(int k, int j) const;
    const PairAmplitude& pair(int k, int j) const;

    /// -sum_{k<=j} |state amplitude|^2 hbar (omega0 + omega_k + omega_j).
    /// Equals energy_shift() exactly when the cutoff weights are 0/1.
    double energy_from_amplitudes() const;
};

struct PhotonSpectrum {
    std::vector<double> bin_edges;  ///< size = weights.size() + 1, starting at 0
    std::vector<double> weights;    ///< summed state weights per pair-frequency bin
    double bin_width = 0.0;
    double total_weight = 0.0;
    double peak_frequency = 0.0;  ///< centre of the heaviest bin

    std::size_t nonempty_bins() const;
};

/// Second-order ground-state energy shift
/// -hbar^2/(4 L^2 m omega0) sum_{kj} omega_k omega_j / (omega0 + omega_k + omega_j).
double energy_shift(const PhysicalParams& params, const CutoffSpec& cutoff,
                    std::optional<int> mode_count = std::nullopt);

DressedAmplitudes dressed_amplitudes(const PhysicalParams& params, const CutoffSpec& cutoff,
                                     std::optional<int> mode_count = std::nullopt);

/// Histogram of pair weights against omega_k + omega_j. Default bin width
/// in callers is omega0 / 20.
PhotonSpectrum photon_spectrum(const DressedAmplitudes& amps, double bin_width);

}  // namespace mirrorvac
