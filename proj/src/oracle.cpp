#include "mirrorvac/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "mirrorvac/errors.hpp"
#include "mirrorvac/parallel.hpp"

namespace mirrorvac {

namespace {

// Occupations are packed 6 bits per slot; slot 0 is the mirror.
constexpr int kSlotBits = 6;
constexpr int kMaxOccupation = (1 << kSlotBits) - 1;
constexpr std::size_t kDenseLimit = 1000;

using Key = std::uint64_t;
using SparseState = std::map<Key, double>;

int occupation(Key key, int slot) {
    return static_cast<int>((key >> (kSlotBits * slot)) & static_cast<Key>(kMaxOccupation));
}

Key with_occupation(Key key, int slot, int n) {
    const Key mask = static_cast<Key>(kMaxOccupation) << (kSlotBits * slot);
    return (key & ~mask) | (static_cast<Key>(n) << (kSlotBits * slot));
}

Key encode(const std::vector<int>& occ) {
    Key key = 0;
    for (std::size_t s = 0; s < occ.size(); ++s) key = with_occupation(key, static_cast<int>(s), occ[s]);
    return key;
}

// Applies a ladder operator in place; returns the matrix element factor,
// or 0 if the state is annihilated or leaves the representable range.
double ladder(Key& key, int slot, bool raise) {
    const int n = occupation(key, slot);
    if (raise) {
        if (n >= kMaxOccupation) return 0.0;
        key = with_occupation(key, slot, n + 1);
        return std::sqrt(static_cast<double>(n + 1));
    }
    if (n == 0) return 0.0;
    key = with_occupation(key, slot, n - 1);
    return std::sqrt(static_cast<double>(n));
}

std::uint64_t checked_product(const TruncationSpec& t, int slots) {
    std::uint64_t dim = static_cast<std::uint64_t>(t.max_mirror_quanta + 1);
    for (int s = 0; s < slots; ++s) {
        dim *= static_cast<std::uint64_t>(t.max_photons_per_mode + 1);
        if (dim > t.dimension_limit) return dim;
    }
    return dim;
}

void enumerate_basis(const TruncationSpec& t, int field_slots, std::vector<std::vector<int>>& out) {
    const int cap = t.total_excitation_cap.value_or(std::numeric_limits<int>::max());
    std::vector<int> occ(static_cast<std::size_t>(field_slots + 1), 0);
    std::function<void(int, int)> rec = [&](int slot, int used) {
        if (slot == field_slots + 1) {
            out.push_back(occ);
            if (out.size() > t.dimension_limit) {
                std::ostringstream os;
                os << "truncated basis exceeds the dimension limit " << t.dimension_limit;
                throw CapacityError(os.str());
            }
            return;
        }
        const int limit = slot == 0 ? t.max_mirror_quanta : t.max_photons_per_mode;
        for (int n = 0; n <= limit && used + n <= cap; ++n) {
            occ[static_cast<std::size_t>(slot)] = n;
            rec(slot + 1, used + n);
        }
        occ[static_cast<std::size_t>(slot)] = 0;
    };
    rec(0, 0);
}

double max_row_sum(const Eigen::SparseMatrix<double>& H) {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(H.rows());
    for (int k = 0; k < H.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(H, k); it; ++it) sums(it.row()) += std::abs(it.value());
    }
    return sums.size() ? sums.maxCoeff() : 0.0;
}

void fix_sign(Eigen::VectorXd& v) {
    Eigen::Index idx = 0;
    v.cwiseAbs().maxCoeff(&idx);
    if (v(idx) < 0.0) v = -v;
}

struct Eigenpair {
    double value = 0.0;
    Eigen::VectorXd vector;
    int iterations = 0;
};

Eigenpair dense_lowest(const Eigen::SparseMatrix<double>& H) {
    const Eigen::MatrixXd dense(H);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) throw SolverError("dense eigensolver failed", 0, 0.0);
    return {solver.eigenvalues()(0), solver.eigenvectors().col(0), 0};
}

// Restarted Lanczos with full reorthogonalization; each restart begins from
// the current Ritz vector.
Eigenpair lanczos_lowest(const Eigen::SparseMatrix<double>& H, double tol, double scale, std::size_t start) {
    const Eigen::Index n = H.rows();
    const int krylov = static_cast<int>(std::min<Eigen::Index>(n, 160));
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1e-3);
    x(static_cast<Eigen::Index>(start)) = 1.0;
    x.normalize();
    int total = 0;
    double residual = std::numeric_limits<double>::infinity();
    double theta = 0.0;
    for (int restart = 0; restart < 60; ++restart) {
        Eigen::MatrixXd V(n, krylov);
        Eigen::VectorXd alpha(krylov), beta(krylov);
        V.col(0) = x;
        int m = krylov;
        for (int j = 0; j < krylov; ++j) {
            Eigen::VectorXd w = H * V.col(j);
            alpha(j) = V.col(j).dot(w);
            for (int pass = 0; pass < 2; ++pass) {
                w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
            }
            ++total;
            beta(j) = w.norm();
            if (j + 1 == krylov) break;
            if (beta(j) < 1e-14 * scale) {
                m = j + 1;
                break;
            }
            V.col(j + 1) = w / beta(j);
        }
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            T(j, j) = alpha(j);
            if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta(j);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(T);
        theta = tri.eigenvalues()(0);
        x = V.leftCols(m) * tri.eigenvectors().col(0);
        x.normalize();
        residual = (H * x - theta * x).norm();
        if (residual <= tol * scale) return {theta, x, total};
    }
    std::ostringstream os;
    os << "Lanczos did not converge: residual " << residual << " after " << total << " iterations";
    throw SolverError(os.str(), total, residual);
}

struct FieldTerm {
    int slot;
    double coeff;
};

// sum_k coeff_k (a_k + sign a_k^dag) applied to a sparse state.
SparseState apply_linear(const SparseState& in, const std::vector<FieldTerm>& terms, double sign) {
    SparseState out;
    for (const auto& [key, amp] : in) {
        for (const auto& t : terms) {
            Key lo = key;
            const double f_lo = ladder(lo, t.slot, false);
            if (f_lo != 0.0) out[lo] += t.coeff * f_lo * amp;
            Key hi = key;
            const double f_hi = ladder(hi, t.slot, true);
            if (f_hi != 0.0) out[hi] += sign * t.coeff * f_hi * amp;
        }
    }
    return out;
}

double inner(const SparseState& a, const SparseState& b) {
    double sum = 0.0;
    for (const auto& [key, amp] : a) {
        const auto it = b.find(key);
        if (it != b.end()) sum += amp * it->second;
    }
    return sum;
}

double norm_sq(const SparseState& a) {
    double sum = 0.0;
    for (const auto& [key, amp] : a) sum += amp * amp;
    return sum;
}

enum class FieldShape { Phi, TimeDerivative, SpaceDerivative };

// Coefficients of phi, d_t phi / c (times the -i of a - a^dag), d_x phi at x.
std::vector<FieldTerm> field_terms(const OracleHamiltonian& h, double x, FieldShape shape) {
    const PhysicalParams& p = h.params;
    const double L = p.length;
    const int M = h.truncation.modes_per_cavity;
    int first_slot = 1;
    double global = 1.0;
    if (x > 0.0 && x < L) {
        first_slot = 1;
    } else if (h.cavities == Cavities::Two && x > L && x < 2.0 * L) {
        first_slot = 1 + M;
        global = -1.0;  // cavity-2 field carries an overall minus sign
    } else {
        std::ostringstream os;
        os << "point " << x << " is not inside a modelled cavity";
        throw UsageError(os.str());
    }
    const ModeSet ms(M, L, p.c);
    std::vector<FieldTerm> out;
    for (int n = 1; n <= M; ++n) {
        const double w = ms.frequency(n);
        const double k = ms.wavenumber(n);
        const double amp = global * std::sqrt(p.hbar * p.c * p.c / (L * w));
        double coeff = 0.0;
        switch (shape) {
            case FieldShape::Phi: coeff = amp * std::sin(k * x); break;
            case FieldShape::TimeDerivative: coeff = amp * (w / p.c) * std::sin(k * x); break;
            case FieldShape::SpaceDerivative: coeff = amp * k * std::cos(k * x); break;
        }
        out.push_back({first_slot + n - 1, coeff});
    }
    return out;
}

SparseState to_sparse(const OracleHamiltonian& h, const Eigen::VectorXd& v) {
    SparseState s;
    for (std::size_t i = 0; i < h.basis.size(); ++i) {
        const double amp = v(static_cast<Eigen::Index>(i));
        if (amp != 0.0) s.emplace(encode(h.basis[i]), amp);
    }
    return s;
}

double local_square(const OracleHamiltonian& h, const SparseState& psi, double x, FieldShape shape) {
    const auto terms = field_terms(h, x, shape);
    // phi, d_x phi: Hermitian a + a^dag; d_t phi: i(a^dag - a), whose square
    // expectation is |(a - a^dag) psi|^2.
    const double sign = shape == FieldShape::TimeDerivative ? -1.0 : 1.0;
    return norm_sq(apply_linear(psi, terms, sign));
}

}  // namespace

void TruncationSpec::validate() const {
    if (modes_per_cavity < 1 || modes_per_cavity > 4) throw ParameterError("modes_per_cavity must be in 1..4");
    if (max_photons_per_mode < 1 || max_photons_per_mode > 40) {
        throw ParameterError("max_photons_per_mode must be in 1..40");
    }
    if (max_mirror_quanta < 1 || max_mirror_quanta > 40) throw ParameterError("max_mirror_quanta must be in 1..40");
    if (total_excitation_cap && *total_excitation_cap < 0) {
        throw ParameterError("total_excitation_cap must be non-negative");
    }
    if (dimension_limit == 0) throw ParameterError("dimension_limit must be positive");
}

int OracleHamiltonian::field_slots() const {
    return truncation.modes_per_cavity * (cavities == Cavities::Two ? 2 : 1);
}

std::size_t OracleHamiltonian::vacuum_index() const {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (std::all_of(basis[i].begin(), basis[i].end(), [](int n) { return n == 0; })) return i;
    }
    throw std::logic_error("bare vacuum missing from the truncated basis");
}

OracleHamiltonian build_hamiltonian(const PhysicalParams& params, const TruncationSpec& truncation,
                                    Cavities cavities, double coupling_scale) {
    params.validate();
    truncation.validate();
    if (!std::isfinite(coupling_scale)) throw ParameterError("coupling scale must be finite");

    OracleHamiltonian h;
    h.params = params;
    h.truncation = truncation;
    h.cavities = cavities;
    h.coupling_scale = coupling_scale;
    const int M = truncation.modes_per_cavity;
    const int slots = h.field_slots();

    if (!truncation.total_excitation_cap && checked_product(truncation, slots) > truncation.dimension_limit) {
        std::ostringstream os;
        os << "truncated basis exceeds the dimension limit " << truncation.dimension_limit;
        throw CapacityError(os.str());
    }
    enumerate_basis(truncation, slots, h.basis);
    if (truncation.ordering_seed != 0) {
        std::mt19937_64 rng(truncation.ordering_seed);
        std::shuffle(h.basis.begin(), h.basis.end(), rng);
    }

    std::unordered_map<Key, std::size_t> index;
    index.reserve(h.basis.size() * 2);
    for (std::size_t i = 0; i < h.basis.size(); ++i) index.emplace(encode(h.basis[i]), i);

    const ModeSet ms(M, params.length, params.c);
    std::vector<double> slot_freq(static_cast<std::size_t>(slots + 1), params.omega0);
    for (int s = 1; s <= slots; ++s) slot_freq[static_cast<std::size_t>(s)] = ms.frequency((s - 1) % M + 1);

    struct PairTerm {
        int k_slot, j_slot;
        double c;
    };
    std::vector<PairTerm> pairs;
    const int ncav = cavities == Cavities::Two ? 2 : 1;
    for (int cav = 0; cav < ncav; ++cav) {
        for (int k = 1; k <= M; ++k) {
            for (int j = 1; j <= M; ++j) {
                const double c = cavities == Cavities::One
                                     ? coupling_matrix_element(params, k, j)
                                     : two_cavity_coupling(params, cav == 0 ? CavityTag::Left : CavityTag::Right, k, j);
                pairs.push_back({1 + cav * M + k - 1, 1 + cav * M + j - 1, coupling_scale * c});
            }
        }
    }

    using Triplet = Eigen::Triplet<double>;
    std::vector<std::vector<Triplet>> columns(h.basis.size());
    parallel_for(h.basis.size(), [&](std::size_t col) {
        const Key ket = encode(h.basis[col]);
        auto& out = columns[col];
        double diag = 0.0;
        for (int s = 0; s <= slots; ++s) diag += params.hbar * slot_freq[static_cast<std::size_t>(s)] * occupation(ket, s);
        out.emplace_back(static_cast<int>(col), static_cast<int>(col), diag);
        if (coupling_scale == 0.0) return;

        auto emit = [&](Key key, double amp) {
            const auto it = index.find(key);
            if (it != index.end()) out.emplace_back(static_cast<int>(it->second), static_cast<int>(col), amp);
        };
        for (const auto& pt : pairs) {
            // (a_k a_j, a_k^dag a_j^dag, a_k^dag a_j, a_j^dag a_k): rightmost acts first.
            const std::pair<bool, bool> ops[4] = {{false, false}, {true, true}, {true, false}, {false, true}};
            for (int o = 0; o < 4; ++o) {
                Key key = ket;
                double f = 1.0;
                if (o < 3) {
                    f *= ladder(key, pt.j_slot, ops[o].second);
                    if (f != 0.0) f *= ladder(key, pt.k_slot, ops[o].first);
                } else {
                    f *= ladder(key, pt.k_slot, false);
                    if (f != 0.0) f *= ladder(key, pt.j_slot, true);
                }
                if (f == 0.0) continue;
                for (bool raise : {false, true}) {
                    Key mk = key;
                    const double g = ladder(mk, 0, raise);
                    if (g != 0.0) emit(mk, -pt.c * f * g);
                }
            }
        }
    });

    std::vector<Triplet> triplets;
    for (auto& c : columns) triplets.insert(triplets.end(), c.begin(), c.end());
    const auto dim = static_cast<Eigen::Index>(h.basis.size());
    Eigen::SparseMatrix<double> raw(dim, dim);
    raw.setFromTriplets(triplets.begin(), triplets.end());
    const Eigen::SparseMatrix<double> rawT = raw.transpose();
    const Eigen::SparseMatrix<double> diff = raw - rawT;
    double defect = 0.0;
    for (int k = 0; k < diff.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it) defect = std::max(defect, std::abs(it.value()));
    }
    h.hermiticity_defect = defect;
    h.matrix = 0.5 * (raw + rawT);
    h.matrix.makeCompressed();
    return h;
}

OracleState ground_state(std::shared_ptr<const OracleHamiltonian> hamiltonian, double solver_tol) {
    if (!hamiltonian) throw UsageError("null Hamiltonian handle");
    if (!(solver_tol > 0.0)) throw UsageError("solver tolerance must be positive");
    const auto& H = hamiltonian->matrix;
    OracleState st;
    st.hamiltonian = hamiltonian;
    const double scale = max_row_sum(H);
    Eigenpair ep = hamiltonian->dimension() <= kDenseLimit
                       ? dense_lowest(H)
                       : lanczos_lowest(H, solver_tol, scale, hamiltonian->vacuum_index());
    fix_sign(ep.vector);
    st.vector = ep.vector;
    st.result.ground_energy = ep.value;
    st.result.energy_shift = ep.value;  // bare vacuum energy is 0 (normal ordered)
    st.result.residual_norm = (H * ep.vector - ep.value * ep.vector).norm();
    st.result.matrix_scale = scale;
    st.result.iterations = ep.iterations;
    if (st.result.residual_norm > solver_tol * std::max(scale, 1.0)) {
        std::ostringstream os;
        os << "ground-state residual " << st.result.residual_norm << " exceeds " << solver_tol << " x " << scale;
        throw SolverError(os.str(), ep.iterations, st.result.residual_norm);
    }
    return st;
}

OracleState ground_state(const OracleHamiltonian& hamiltonian, double solver_tol) {
    return ground_state(std::make_shared<const OracleHamiltonian>(hamiltonian), solver_tol);
}

double expectation(const OracleState& state, const Observable& obs) {
    if (!state.hamiltonian) throw UsageError("oracle state has no Hamiltonian");
    const OracleHamiltonian& h = *state.hamiltonian;
    const double L = h.params.length;
    const SparseState psi = to_sparse(h, state.vector);
    const SparseState vac{{Key{0}, 1.0}};

    auto renormalized = [&](FieldShape shape) {
        return local_square(h, psi, obs.x1, shape) - local_square(h, vac, obs.x1, shape);
    };
    auto require_pair = [&] {
        if (h.cavities != Cavities::Two) throw UsageError("cross-cavity correlators need the two-cavity model");
        if (!(obs.x1 > 0.0 && obs.x1 < L) || !(obs.x2 > L && obs.x2 < 2.0 * L)) {
            throw UsageError("correlator points must lie in (0, L) and (L, 2L)");
        }
    };

    switch (obs.kind) {
        case ObservableKind::Phi2: return renormalized(FieldShape::Phi);
        case ObservableKind::ESquared: return renormalized(FieldShape::TimeDerivative);
        case ObservableKind::BSquared: return renormalized(FieldShape::SpaceDerivative);
        case ObservableKind::EnergyDensity:
            return 0.5 * (renormalized(FieldShape::TimeDerivative) + renormalized(FieldShape::SpaceDerivative));
        case ObservableKind::Phi2Phi2: {
            require_pair();
            const auto t1 = field_terms(h, obs.x1, FieldShape::Phi);
            const auto t2 = field_terms(h, obs.x2, FieldShape::Phi);
            const SparseState p2 = apply_linear(psi, t2, 1.0);
            const double joint = norm_sq(apply_linear(p2, t1, 1.0));
            return joint - norm_sq(apply_linear(psi, t1, 1.0)) * norm_sq(p2);
        }
        case ObservableKind::Phi1Phi2: {
            require_pair();
            const SparseState p1 = apply_linear(psi, field_terms(h, obs.x1, FieldShape::Phi), 1.0);
            const SparseState p2 = apply_linear(psi, field_terms(h, obs.x2, FieldShape::Phi), 1.0);
            return inner(p1, p2) - inner(psi, p1) * inner(psi, p2);
        }
    }
    throw UsageError("unknown observable");
}

double odd_parity_weight(const OracleState& state) {
    const OracleHamiltonian& h = *state.hamiltonian;
    const int M = h.truncation.modes_per_cavity;
    const int ncav = h.cavities == Cavities::Two ? 2 : 1;
    double weight = 0.0;
    for (std::size_t i = 0; i < h.basis.size(); ++i) {
        bool odd = false;
        for (int c = 0; c < ncav; ++c) {
            int photons = 0;
            for (int k = 0; k < M; ++k) photons += h.basis[i][static_cast<std::size_t>(1 + c * M + k)];
            odd = odd || (photons % 2 == 1);
        }
        if (odd) weight += state.vector(static_cast<Eigen::Index>(i)) * state.vector(static_cast<Eigen::Index>(i));
    }
    return weight;
}

TruncationCertificate certify_truncation(const PhysicalParams& params, const TruncationSpec& base,
                                         Cavities cavities, int step, double tolerance) {
    if (step < 1) throw UsageError("truncation step must be positive");
    auto energy = [&](const TruncationSpec& t) {
        return ground_state(build_hamiltonian(params, t, cavities)).result.ground_energy;
    };
    TruncationCertificate cert;
    cert.energy = energy(base);
    TruncationSpec photons = base;
    photons.max_photons_per_mode += step;
    TruncationSpec mirror = base;
    mirror.max_mirror_quanta += step;
    const double scale = std::max(std::abs(cert.energy), std::numeric_limits<double>::min());
    cert.photon_step_change = std::abs(energy(photons) - cert.energy) / scale;
    cert.mirror_step_change = std::abs(energy(mirror) - cert.energy) / scale;
    cert.certified = cert.photon_step_change < tolerance && cert.mirror_step_change < tolerance;
    return cert;
}

std::string to_string(ObservableKind kind) {
    switch (kind) {
        case ObservableKind::Phi2: return "phi2";
        case ObservableKind::EnergyDensity: return "energy-density";
        case ObservableKind::ESquared: return "e2";
        case ObservableKind::BSquared: return "b2";
        case ObservableKind::Phi2Phi2: return "phi2phi2";
        case ObservableKind::Phi1Phi2: return "phi1phi2";
    }
    return "unknown";
}

std::string to_string(Cavities cavities) { return cavities == Cavities::One ? "one" : "two"; }

}  // namespace mirrorvac
