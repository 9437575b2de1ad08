import math

import numpy as np
import pytest

import mirrorvac as mv


def test_energy_shift_is_negative_and_scales_with_mass():
    cut = mv.CutoffSpec("exp", 50.0)
    e1 = mv.energy_shift(mv.PhysicalParams(mass=10.0), cut)
    e2 = mv.energy_shift(mv.PhysicalParams(mass=20.0), cut)
    assert e1 < 0
    assert e2 / e1 == pytest.approx(0.5, rel=1e-12)


def test_two_mode_energy_shift_closed_form():
    p = mv.PhysicalParams(mass=10.0)
    pi = math.pi
    want = -(1 / 40) * (pi**2 / (1 + 2 * pi) + 4 * pi**2 / (1 + 3 * pi) + 4 * pi**2 / (1 + 4 * pi))
    got = mv.energy_shift(p, mv.CutoffSpec("sharp", 2 * pi * (1 + 1e-9)))
    assert got == pytest.approx(want, rel=1e-13)


def test_asymptotic_coefficient():
    assert mv.asymptotic_correlation(mv.PhysicalParams(), 1.0, 1.0) == pytest.approx(
        -1 / (2**9 * math.pi**4), rel=1e-14
    )


def test_correlation_grid_is_negative():
    p = mv.PhysicalParams.from_lambda(0.05, math.pi, 1.0)
    x1 = np.linspace(0.05, 0.95, 4)
    c = mv.squared_field_correlation(p, mv.CutoffSpec("exp", 50 * math.pi), x1, x1 + 1.0)
    assert c.shape == (4, 4)
    assert (c < 0).all()


def test_profiles_have_grid_shape():
    p = mv.PhysicalParams.from_lambda(0.05, math.pi, 1.0)
    grid = [0.1, 0.5, 0.9]
    prof = mv.delta_energy_density(p, mv.CutoffSpec("sharp", 10 * math.pi), grid)
    assert list(prof["x"]) == grid
    assert np.allclose(prof["distance"], [0.9, 0.5, 0.1])
    e = mv.em_field_fluctuations(p, mv.CutoffSpec("sharp", 10 * math.pi), grid, "E")
    assert len(e["values"]) == 3


def test_continuum_paths_agree():
    p = mv.PhysicalParams()
    a = mv.continuum_correlation(p, 20.0, 1.0, 1.0)
    b = mv.continuum_correlation(p, 20.0, 1.0, 1.0, method="full")
    assert a["value"] < 0
    assert b["value"] == pytest.approx(a["value"], rel=1e-6)


def test_oracle_small_run():
    p = mv.PhysicalParams.from_lambda(0.0125, 10.0, 1.0)
    r = mv.oracle_ground_state(p, modes=2, photons=4, mirror=4)
    pert = mv.energy_shift(p, mv.CutoffSpec("sharp", 2 * math.pi * (1 + 1e-9)))
    assert r["energy_shift"] == pytest.approx(pert, rel=1e-2)
    assert r["odd_parity_weight"] < 1e-20


def test_errors_map_to_python_exceptions():
    with pytest.raises(mv.ParameterError):
        mv.PhysicalParams(mass=-1.0)
    with pytest.raises(mv.UsageError):
        mv.asymptotic_correlation(mv.PhysicalParams(), -1.0, 1.0)
    with pytest.raises(mv.UsageError):
        mv.cutoff_weight(mv.CutoffSpec("exp", 1.0), [])
    assert issubclass(mv.UsageError, mv.Error)
