"""Dispersion kinematics, potential profiles, and the guide-width map."""

import numpy as np
import pytest

from guideq import core
from guideq.core import ELECTRON, Particle, PotentialProfile
from guideq.errors import BelowCutoffError, DomainError, InfinitePhaseVelocityError
from guideq.units import C, HBAR, LENGTH_SI

RNG_SEED = 20260819


# ---------------------------------------------------------------------------
# particle

def test_electron_rest_values():
    assert ELECTRON.rest_energy == 1.0
    assert ELECTRON.rest_frequency == 1.0
    assert ELECTRON.compton_wavelength == pytest.approx(2.0 * np.pi, rel=1e-15)


def test_particle_rejects_bad_mass():
    for m in (0.0, -1.0, np.nan, np.inf):
        with pytest.raises(DomainError):
            Particle("junk", m)


def test_free_electron_guide_width_si():
    # a = pi c / omega0 = half the Compton wavelength, 1.2131551 pm
    a = core.width_from_cutoff(ELECTRON.rest_frequency)
    assert a == pytest.approx(np.pi, rel=1e-15)
    assert a * LENGTH_SI == 1.2131551193415463e-12


# ---------------------------------------------------------------------------
# dispersion law

def test_omega_k_round_trip():
    rng = np.random.default_rng(RNG_SEED)
    for _ in range(200):
        k = rng.uniform(0.0, 10.0)
        cut = rng.uniform(0.2, 5.0)
        om = core.omega_of_k(k, cut)
        rec = core.k_of_omega(om, cut)
        assert not rec.evanescent
        assert rec.value == pytest.approx(k, rel=1e-12, abs=1e-12)


def test_velocity_product_identity():
    # v_g * v_ph = c^2 wherever the phase velocity is finite
    rng = np.random.default_rng(RNG_SEED + 1)
    k = rng.uniform(1e-6, 20.0, size=500)
    cut = rng.uniform(0.1, 8.0, size=500)
    om = core.omega_of_k(k, cut)
    prod = core.group_velocity(om, k) * core.phase_velocity(om, k)
    np.testing.assert_allclose(prod, C**2, rtol=1e-12)


def test_group_velocity_below_light():
    rng = np.random.default_rng(RNG_SEED + 2)
    k = rng.uniform(0.0, 50.0, size=300)
    om = core.omega_of_k(k, 1.0)
    v = core.group_velocity(om, k)
    assert np.all(v < C)
    assert np.all(v >= 0.0)


def test_evanescent_below_cutoff():
    rec = core.k_of_omega(0.6, 1.0)
    assert rec.evanescent
    assert rec.value == pytest.approx(np.sqrt(1.0 - 0.36), rel=1e-15)
    assert rec.as_complex == pytest.approx(1j * rec.value)
    # at cutoff exactly the wave is marginal, k = 0, not evanescent
    at = core.k_of_omega(1.0, 1.0)
    assert not at.evanescent and at.value == 0.0


def test_dispersion_point_at_k_zero():
    pt = core.dispersion_point(0.0, 1.0)
    assert pt.omega == 1.0
    assert pt.v_g == 0.0
    assert pt.v_ph == np.inf


def test_phase_velocity_guards():
    with pytest.raises(InfinitePhaseVelocityError):
        core.phase_velocity(1.0, 0.0)
    with pytest.raises(DomainError):
        core.k_of_omega(-0.1, 1.0)
    with pytest.raises(DomainError):
        core.omega_of_k(1.0, 0.0)


def test_schrodinger_limit_error_scales_with_k4():
    # quadratic dispersion misses by ~ (1/8)(hbar k)^4/(m c)^4 relative
    lo = core.schrodinger_dispersion(ELECTRON, 0.01)
    hi = core.schrodinger_dispersion(ELECTRON, 0.1)
    assert hi.rel_error / lo.rel_error == pytest.approx(1e4, rel=0.01)
    assert lo.omega > lo.omega_exact  # the quadratic form overshoots


# ---------------------------------------------------------------------------
# potential profiles

def test_profile_interpolates_smooth_function():
    prof = PotentialProfile.from_callable(np.cos, 0.0, 6.0, 301)
    xq = np.linspace(0.1, 5.9, 777)
    np.testing.assert_allclose(prof(xq), np.cos(xq), atol=2e-7)
    np.testing.assert_allclose(prof.derivative(xq), -np.sin(xq), atol=2e-5)
    np.testing.assert_allclose(prof.derivative(xq, order=2), -np.cos(xq), atol=3e-3)


def test_profile_linear_keeps_steps_sharp():
    x = np.linspace(0.0, 1.0, 11)
    v = np.where(x > 0.45, 1.0, 0.0)
    prof = PotentialProfile(x, v, interpolation="linear")
    assert prof(0.3) == 0.0
    assert prof(0.8) == 1.0
    # no overshoot anywhere, unlike a cubic through a step
    xq = np.linspace(0.0, 1.0, 1001)
    assert np.all(prof(xq) <= 1.0) and np.all(prof(xq) >= 0.0)


def test_profile_rejects_bad_grids():
    with pytest.raises(DomainError):
        PotentialProfile([0.0, 1.0, 0.5, 2.0], [0.0] * 4)
    with pytest.raises(DomainError):
        PotentialProfile([0.0, 0.1, 0.5, 2.0], [0.0] * 4)  # non-uniform
    with pytest.raises(DomainError):
        PotentialProfile([0.0, 1.0, 2.0], [0.0, np.nan, 0.0], interpolation="linear")
    with pytest.raises(DomainError):
        PotentialProfile.from_callable(np.sin, 0.0, 1.0, 3)  # cubic needs 4


def test_profile_domain_enforced():
    prof = PotentialProfile.from_callable(np.sin, 0.0, 1.0, 16)
    with pytest.raises(DomainError):
        prof(1.5)
    with pytest.raises(DomainError):
        prof.derivative(-0.2)


def test_profile_csv_round_trip(tmp_path):
    prof = PotentialProfile.from_callable(lambda x: 0.1 * x**2, -2.0, 2.0, 41)
    path = tmp_path / "prof.csv"
    prof.to_csv(path)
    back = PotentialProfile.from_csv(path)
    np.testing.assert_array_equal(back.x, prof.x)
    np.testing.assert_array_equal(back.values, prof.values)


def test_profile_csv_named_units(tmp_path):
    prof = PotentialProfile.from_callable(lambda x: 0.05 * x, 1.0, 3.0, 21)
    path = tmp_path / "si.csv"
    prof.to_csv(path, length_unit="pm", energy_unit="eV")
    back = PotentialProfile.from_csv(path)
    np.testing.assert_allclose(back.x, prof.x, rtol=1e-12)
    np.testing.assert_allclose(back.values, prof.values, rtol=1e-12)


# ---------------------------------------------------------------------------
# geometry map

def test_geometry_pointwise_map():
    prof = PotentialProfile.from_callable(lambda x: 0.2 * np.exp(-(x**2)), -5.0, 5.0, 201)
    geom = core.potential_to_geometry(ELECTRON, prof)
    np.testing.assert_allclose(geom.cutoff, 1.0 + prof.values / HBAR, rtol=1e-15)
    np.testing.assert_allclose(geom.width, np.pi * C / geom.cutoff, rtol=1e-15)
    # higher potential means narrower guide
    assert geom.width[100] == np.min(geom.width)


def test_geometry_refuses_overdeep_well():
    x = np.linspace(-1.0, 1.0, 21)
    prof = PotentialProfile(x, np.full(21, -1.5))
    with pytest.raises(DomainError):
        core.potential_to_geometry(ELECTRON, prof)


def test_width_slope_matches_finite_difference():
    prof = PotentialProfile.from_callable(lambda x: 0.1 * np.sin(x), 0.0, 6.0, 401)
    geom = core.potential_to_geometry(ELECTRON, prof)
    h = 1e-6
    for xq in (1.0, 2.5, 4.8):
        fd = (geom.width_at(xq + h) - geom.width_at(xq - h)) / (2 * h)
        assert geom.width_slope_at(xq) == pytest.approx(fd, rel=1e-6)


def test_wkb_validity_flags_fast_variation():
    slow = PotentialProfile.from_callable(lambda x: 1e-4 * x, 0.0, 100.0, 501)
    fast = PotentialProfile.from_callable(lambda x: 0.3 * np.sin(40.0 * x), 0.0, 100.0, 20001)
    om = 1.5
    m_slow = core.wkb_validity(core.potential_to_geometry(ELECTRON, slow), om)
    m_fast = core.wkb_validity(core.potential_to_geometry(ELECTRON, fast), om)
    assert np.nanmax(m_slow.metric) < 1e-3
    assert np.nanmax(m_fast.metric) > 10 * np.nanmax(m_slow.metric)


def test_wkb_validity_nan_below_cutoff():
    prof = PotentialProfile.from_callable(lambda x: x, 0.0, 1.0, 51)
    geom = core.potential_to_geometry(ELECTRON, prof)
    res = core.wkb_validity(geom, 1.4)
    assert np.all(np.isnan(res.metric[~res.propagating]))
    assert np.all(np.isfinite(res.metric[res.propagating]))
    # the potential crosses hbar*(omega - omega0) = 0.4 inside the domain
    assert res.propagating.any() and (~res.propagating).any()
