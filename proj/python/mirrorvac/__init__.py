"""Vacuum observables of 1D cavities bounded by a quantum movable mirror."""

from ._core import (
    CapacityError,
    ConvergenceError,
    CutoffSpec,
    DegenerateInputError,
    Error,
    ParameterError,
    PhysicalParams,
    SolverError,
    UsageError,
    __version__,
    asymptotic_correlation,
    continuum_correlation,
    coupling_matrix_element,
    cutoff_weight,
    delta_energy_density,
    delta_phi_squared,
    dressed_amplitudes,
    em_field_fluctuations,
    energy_shift,
    oracle_ground_state,
    phi_phi_cross_correlation,
    photon_spectrum,
    squared_field_correlation,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
