#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "mirrorvac/model.hpp"

namespace mirrorvac {

/// Truncated occupation-number space for exact diagonalization.
struct TruncationSpec {
    int modes_per_cavity = 2;
    int max_photons_per_mode = 6;
    int max_mirror_quanta = 6;
    /// Optional cap on mirror quanta plus all photons.
    std::optional<int> total_excitation_cap;
    std::size_t dimension_limit = 20000;
    /// 0 keeps the canonical (lexicographic) basis order; any other value
    /// shuffles it deterministically.
    std::uint64_t ordering_seed = 0;

    void validate() const;
};

enum class Cavities { One, Two };

/// Sparse Law Hamiltonian on a truncated basis.
struct OracleHamiltonian {
    PhysicalParams params;
    TruncationSpec truncation;
    Cavities cavities = Cavities::One;
    double coupling_scale = 1.0;
    /// Occupations per basis state: mirror first, then cavity 1 modes, then
    /// cavity 2 modes.
    std::vector<std::vector<int>> basis;
    Eigen::SparseMatrix<double> matrix;
    /// max |H - H^T| of the raw assembly, before symmetrization.
    double hermiticity_defect = 0.0;

    std::size_t dimension() const { return basis.size(); }
    int field_slots() const;
    /// Index of the bare vacuum in `basis`.
    std::size_t vacuum_index() const;
};

/// Builds H = hbar omega0 b^dag b + sum hbar omega_k a_k^dag a_k
///  - (b + b^dag) sum_cavities sum_{k,j} C_kj (a_k a_j + a_k^dag a_j^dag
///    + a_k^dag a_j + a_j^dag a_k),
/// with C for cavity 2 equal to -C for cavity 1. `coupling_scale`
/// multiplies every C (0 gives the bare Hamiltonian).
/// Throws CapacityError when the basis exceeds the dimension limit.
OracleHamiltonian build_hamiltonian(const PhysicalParams& params, const TruncationSpec& truncation,
                                    Cavities cavities, double coupling_scale = 1.0);

/// Lowest eigenpair plus diagnostics.
struct OracleResult {
    double ground_energy = 0.0;
    double energy_shift = 0.0;   ///< relative to the bare vacuum (energy 0)
    double residual_norm = 0.0;  ///< |H v - E v|
    double matrix_scale = 0.0;   ///< max absolute row sum of H
    int iterations = 0;          ///< Lanczos iterations, 0 for the dense solve
    std::map<std::string, double> observables;
};

struct OracleState {
    std::shared_ptr<const OracleHamiltonian> hamiltonian;
    Eigen::VectorXd vector;
    OracleResult result;
};

/// Dense solve up to 1000 states, restarted Lanczos with full
/// reorthogonalization above. Throws SolverError if the residual stays
/// above solver_tol * matrix_scale.
OracleState ground_state(std::shared_ptr<const OracleHamiltonian> hamiltonian, double solver_tol = 1e-10);
OracleState ground_state(const OracleHamiltonian& hamiltonian, double solver_tol = 1e-10);

enum class ObservableKind {
    Phi2,           ///< <phi^2(x)> minus bare vacuum
    EnergyDensity,  ///< (E^2 + B^2)/2 minus bare vacuum
    ESquared,       ///< (d_t phi / c)^2 minus bare vacuum
    BSquared,       ///< (d_x phi)^2 minus bare vacuum
    Phi2Phi2,       ///< connected <phi^2(x1) phi^2(x2)>, two cavities
    Phi1Phi2,       ///< connected <phi(x1) phi(x2)>, two cavities
};

struct Observable {
    ObservableKind kind = ObservableKind::Phi2;
    double x1 = 0.0;  ///< cavity coordinate; (L, 2L) means cavity 2
    double x2 = 0.0;  ///< correlators only, in (L, 2L)
};

/// Operators act on the untruncated Fock space, so no truncation error
/// enters through the observable itself. Throws UsageError for points
/// outside the modelled cavities.
double expectation(const OracleState& state, const Observable& observable);

/// Weight of the ground state on basis states with an odd photon number
/// in some cavity.
double odd_parity_weight(const OracleState& state);

/// Truncation convergence protocol: the ground energy of `base` is accepted
/// only if raising the photon and the mirror limits by `step` each moves it
/// by less than `tolerance` (relative).
struct TruncationCertificate {
    double energy = 0.0;
    double photon_step_change = 0.0;
    double mirror_step_change = 0.0;
    bool certified = false;
};
TruncationCertificate certify_truncation(const PhysicalParams& params, const TruncationSpec& base,
                                         Cavities cavities, int step = 2, double tolerance = 1e-8);

std::string to_string(ObservableKind kind);
std::string to_string(Cavities cavities);

}  // namespace mirrorvac
