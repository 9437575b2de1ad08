#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mirrorvac/model.hpp"

namespace mirrorvac {

enum class ProfileKind { DeltaEnergyDensity, ESquared, BSquared, DeltaPhiSquared };

enum class FieldComponent { E, B };

/// How grid values handed to the profile functions are interpreted.
/// The mode functions sin(k_n x) vanish at the fixed wall x = 0 and the
/// movable wall sits at x = L, so distance from the movable wall is L - x.
enum class CoordinateConvention { CavityCoordinate, DistanceFromMovableWall };

/// Which parts of the second-order vacuum correction are summed.
/// Complete adds the interference of the bare vacuum with the two-photon,
/// zero-mirror component of the second-order state; PairPopulationOnly keeps
/// only the first-order pair term <g1|O|g1>.
enum class SecondOrderTerms { Complete, PairPopulationOnly };

struct ProfileOptions {
    std::optional<int> mode_count;
    CoordinateConvention convention = CoordinateConvention::CavityCoordinate;
    SecondOrderTerms terms = SecondOrderTerms::Complete;
    int threads = 0;
};

/// Sampled correction to a local vacuum observable.
struct ObservableProfile {
    ProfileKind kind = ProfileKind::DeltaEnergyDensity;
    std::vector<double> positions;  ///< cavity coordinate x in (0, L)
    std::vector<double> distances;  ///< L - x, distance from the movable wall
    std::vector<double> values;
    PhysicalParams params;
    CutoffSpec cutoff;
    int mode_count = 0;
    CoordinateConvention convention = CoordinateConvention::CavityCoordinate;
    SecondOrderTerms terms = SecondOrderTerms::Complete;
};

/// n points uniformly spaced on [0.01 L, 0.99 L].
std::vector<double> default_grid(const PhysicalParams& params, int n = 200);

/// Change of the normal-ordered energy density
/// (1/2)[c^-2 phidot^2 + (d phi/dx)^2] in the dressed vacuum. The pair term,
/// in distance d from the movable wall, is
/// hbar^2/(2 L^3 m omega0) sum_{jkl} omega_j omega_k omega_l cos((omega_k - omega_l) d / c)
///   / ((omega0+omega_j+omega_k)(omega0+omega_j+omega_l)) f_{jkl}
/// which equals the (-1)^{k+l} cos((omega_k-omega_l)x/c) form in cavity coordinates.
ObservableProfile delta_energy_density(const PhysicalParams& params, const CutoffSpec& cutoff,
                                       std::span<const double> grid,
                                       const ProfileOptions& options = {});

/// Corrections to <E_z^2> (c^-2 phidot^2, sin sin mode factors) and <B_y^2>
/// ((d phi/dx)^2, cos cos mode factors) of the 1D electromagnetic field.
ObservableProfile em_field_fluctuations(const PhysicalParams& params, const CutoffSpec& cutoff,
                                        std::span<const double> grid, FieldComponent component,
                                        const ProfileOptions& options = {});

/// Correction to <phi^2(x)>, prefactor hbar^2 c^2 / (m omega0 L^3).
ObservableProfile delta_phi_squared(const PhysicalParams& params, const CutoffSpec& cutoff,
                                    std::span<const double> grid,
                                    const ProfileOptions& options = {});

std::string to_string(ProfileKind kind);
std::string to_string(CoordinateConvention convention);
std::string to_string(SecondOrderTerms terms);

}  // namespace mirrorvac
