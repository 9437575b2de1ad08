#include "mirrorvac/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mirrorvac/errors.hpp"

namespace mirrorvac {

namespace {

double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

std::size_t packed_index(int n_modes, int k, int j) {
    // Rows k = 1..N, each holding j = k..N.
    const auto N = static_cast<std::size_t>(n_modes);
    const auto kk = static_cast<std::size_t>(k - 1);
    return kk * N - kk * (kk - 1) / 2 + static_cast<std::size_t>(j - k);
}

}  // namespace

double DressedAmplitudes::coefficient(int k, int j) const { return pair(k, j).coefficient; }

const PairAmplitude& DressedAmplitudes::pair(int k, int j) const {
    if (k > j) std::swap(k, j);
    if (k < 1 || j > mode_count) throw UsageError("mode pair outside the dressed-state mode set");
    return pairs[packed_index(mode_count, k, j)];
}

double DressedAmplitudes::energy_from_amplitudes() const {
    double sum = 0.0;
    for (const auto& p : pairs) {
        sum += p.state_amplitude * p.state_amplitude * (params.omega0 + p.pair_frequency);
    }
    return -params.hbar * sum;
}

std::size_t PhotonSpectrum::nonempty_bins() const {
    return static_cast<std::size_t>(
        std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }));
}

double energy_shift(const PhysicalParams& params, const CutoffSpec& cutoff,
                    std::optional<int> mode_count) {
    params.validate();
    cutoff.validate();
    const ModeSet modes = mode_set_for(params, cutoff, mode_count, 2);
    if (modes.count() == 0) {
        throw DegenerateInputError("no cavity mode survives the cutoff; energy shift is undefined");
    }
    const auto w = modes.frequencies();
    const double w0 = params.omega0;
    const auto N = w.size();

    double sum = 0.0;
    if (cutoff_factorizes(cutoff)) {
        std::vector<double> g(N);
        for (std::size_t k = 0; k < N; ++k) g[k] = w[k] * mode_weight(cutoff, w[k]);
        for (std::size_t k = 0; k < N; ++k) {
            double row = 0.0;
            for (std::size_t j = 0; j < N; ++j) row += g[j] / (w0 + w[k] + w[j]);
            sum += g[k] * row;
        }
    } else {
        for (std::size_t k = 0; k < N; ++k) {
            for (std::size_t j = 0; j < N; ++j) {
                sum += w[k] * w[j] / (w0 + w[k] + w[j]) * cutoff_weight(cutoff, {w[k], w[j]});
            }
        }
    }
    if (sum == 0.0) {
        throw DegenerateInputError("every mode pair is removed by the cutoff");
    }
    const double L = params.length;
    return -params.hbar * params.hbar / (4.0 * L * L * params.mass * w0) * sum;
}

DressedAmplitudes dressed_amplitudes(const PhysicalParams& params, const CutoffSpec& cutoff,
                                     std::optional<int> mode_count) {
    params.validate();
    cutoff.validate();
    const ModeSet modes = mode_set_for(params, cutoff, mode_count, 2);
    const auto w = modes.frequencies();
    const int N = modes.count();

    DressedAmplitudes out;
    out.params = params;
    out.cutoff = cutoff;
    out.mode_count = N;
    out.pairs.reserve(static_cast<std::size_t>(N) * static_cast<std::size_t>(N + 1) / 2);

    const double scale =
        std::sqrt(params.hbar / (8.0 * params.mass * params.omega0)) / params.length;
    double norm = 0.0;
    for (int k = 1; k <= N; ++k) {
        const double wk = w[static_cast<std::size_t>(k - 1)];
        for (int j = k; j <= N; ++j) {
            const double wj = w[static_cast<std::size_t>(j - 1)];
            PairAmplitude p;
            p.k = k;
            p.j = j;
            p.pair_frequency = wk + wj;
            p.coefficient = scale * parity_sign(k + j) * std::sqrt(wk * wj) /
                            (params.omega0 + wk + wj) * cutoff_weight(cutoff, {wk, wj});
            p.state_amplitude = (k == j ? std::numbers::sqrt2 : 2.0) * p.coefficient;
            norm += p.state_amplitude * p.state_amplitude;
            out.pairs.push_back(p);
        }
    }
    out.lambda_sq = norm;
    return out;
}

PhotonSpectrum photon_spectrum(const DressedAmplitudes& amps, double bin_width) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw UsageError("bin width must be finite and positive");
    }
    double max_freq = 0.0;
    for (const auto& p : amps.pairs) max_freq = std::max(max_freq, p.pair_frequency);
    if (amps.pairs.empty() || bin_width > max_freq) {
        throw UsageError("bin width exceeds the spectral range of the pair frequencies");
    }

    const auto bins = static_cast<std::size_t>(std::floor(max_freq / bin_width)) + 1;
    PhotonSpectrum s;
    s.bin_width = bin_width;
    s.weights.assign(bins, 0.0);
    s.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) s.bin_edges[i] = static_cast<double>(i) * bin_width;

    for (const auto& p : amps.pairs) {
        auto idx = static_cast<std::size_t>(std::floor(p.pair_frequency / bin_width));
        idx = std::min(idx, bins - 1);
        s.weights[idx] += p.state_amplitude * p.state_amplitude;
    }
    for (double w : s.weights) s.total_weight += w;
    const auto peak = std::max_element(s.weights.begin(), s.weights.end()) - s.weights.begin();
    s.peak_frequency = (static_cast<double>(peak) + 0.5) * bin_width;
    return s;
}

}  // namespace mirrorvac
