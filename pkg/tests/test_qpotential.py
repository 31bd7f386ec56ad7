"""WKB dwell density, the local quantum potential, and flux diagnostics."""

import numpy as np
import pytest

from guideq import qpotential, solvers
from guideq.core import ELECTRON, PotentialProfile
from guideq.errors import DomainError, ForbiddenDomainError
from guideq.solvers import EvolutionConfig, WaveField, gaussian_packet
from guideq.units import C, HBAR


def bump_profile(height=0.3, width=2.0, span=8.0, n=4001):
    return PotentialProfile.from_callable(
        lambda x: height * np.exp(-(x**2) / (2.0 * width**2)), -span, span, n
    )


def omega_for_energy(e):
    return ELECTRON.rest_frequency + e / HBAR


# ---------------------------------------------------------------------------
# kinetic field and dwell density

def test_kinetic_energy_pointwise():
    prof = bump_profile()
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    np.testing.assert_allclose(kin.energy, 0.5 - prof.values, rtol=1e-12)
    assert not kin.forbidden.any()
    assert not kin.excluded.any()


def test_forbidden_and_excluded_masks():
    # bump taller than the energy: forbidden on top, excluded band at edges
    prof = bump_profile(height=0.8)
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    assert kin.forbidden.any()
    assert kin.excluded.any()
    # excluded is a thin collar around the turning points, small fraction
    assert np.count_nonzero(kin.excluded) < 0.05 * kin.x.size
    # the forbidden zone is exactly where V > E
    np.testing.assert_array_equal(kin.forbidden, prof.values > 0.5)


def test_wkb_density_scales_inverse_sqrt():
    prof = bump_profile()
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    dens = qpotential.wkb_density(kin)
    # normalized over the grid
    assert np.trapezoid(dens.p, dens.x) == pytest.approx(1.0, rel=1e-10)
    # p(x1)/p(x2) = sqrt(E2/E1): slow regions collect more dwell time
    i1, i2 = 2000, 500  # bump center and a point in the flat wings
    ratio = dens.p[i1] / dens.p[i2]
    assert ratio == pytest.approx(np.sqrt(kin.energy[i2] / kin.energy[i1]), rel=1e-10)
    assert ratio > 1.0


def test_wkb_density_nan_in_forbidden_zone():
    prof = bump_profile(height=0.8)
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    dens = qpotential.wkb_density(kin)
    assert np.isnan(dens.p[kin.forbidden]).all()
    assert np.isnan(dens.p[kin.excluded]).all()
    # piecewise norm: zeros bridge the forbidden gap, keeping the two
    # allowed wings normalized together
    keep = ~np.isnan(dens.p)
    total = np.trapezoid(np.where(keep, dens.p, 0.0), dens.x)
    assert total == pytest.approx(1.0, rel=1e-10)


def test_wkb_density_refuses_fully_forbidden():
    prof = bump_profile(height=0.1)
    kin = qpotential.kinetic_energy(omega_for_energy(-0.5), prof, ELECTRON)
    with pytest.raises(ForbiddenDomainError):
        qpotential.wkb_density(kin)


# ---------------------------------------------------------------------------
# quantum potential, two routes

def test_local_matches_bohm_route():
    prof = bump_profile()
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    local = qpotential.quantum_potential_local(kin, prof, ELECTRON)
    dens = qpotential.wkb_density(kin)
    bohm = qpotential.bohm_quantum_potential(kin.x, np.sqrt(dens.p), ELECTRON)
    both = np.isfinite(local.value) & np.isfinite(bohm.value)
    assert both.sum() > 3000
    dev = np.abs(local.value[both] - bohm.value[both]) / np.max(np.abs(local.value[both]))
    assert dev.max() < 1e-6


def test_bohm_route_amplitude_scale_invariant():
    # R''/R is homogeneous of degree zero; a power-of-two scale is exact
    prof = bump_profile(n=2001)
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    amp = np.sqrt(qpotential.wkb_density(kin).p)
    a = qpotential.bohm_quantum_potential(kin.x, amp, ELECTRON)
    b = qpotential.bohm_quantum_potential(kin.x, 256.0 * amp, ELECTRON)
    fa, fb = a.value[np.isfinite(a.value)], b.value[np.isfinite(b.value)]
    np.testing.assert_array_equal(fa, fb)


def test_curvature_sign_arbitration_picks_plus():
    prof = bump_profile()
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    res = qpotential.arbitrate_curvature_sign(kin, prof, ELECTRON)
    assert res.sign == 1.0
    assert res.residual_plus < 1e-6
    assert res.residual_minus > 100 * res.residual_plus


def test_quantum_potential_flat_region_is_zero():
    # where V is constant both derivative terms vanish
    x = np.linspace(-5.0, 5.0, 1001)
    prof = PotentialProfile(x, np.full_like(x, 0.2))
    kin = qpotential.kinetic_energy(omega_for_energy(0.6), prof, ELECTRON)
    u = qpotential.quantum_potential_local(kin, prof, ELECTRON)
    good = np.isfinite(u.value)
    assert np.max(np.abs(u.value[good])) < 1e-12


# ---------------------------------------------------------------------------
# polar decomposition, flux, continuity

def test_polar_decompose_round_trip():
    x = np.linspace(-20.0, 20.0, 800)
    f = gaussian_packet(x, x0=0.0, sigma=4.0, k0=0.9)
    pol = qpotential.polar_decompose(f)
    np.testing.assert_allclose(pol.amplitude**2, f.density, rtol=1e-12)
    # d(phase)/dx recovers hbar k0 for a plane-wave carrier
    mid = slice(300, 500)
    slope = np.gradient(pol.action[mid], x[mid])
    np.testing.assert_allclose(slope, HBAR * 0.9, rtol=1e-6)


def test_probability_flux_of_moving_packet():
    x = np.linspace(-20.0, 20.0, 800)
    k0 = 0.9
    f = gaussian_packet(x, x0=0.0, sigma=4.0, k0=k0)
    j = qpotential.probability_flux(f, ELECTRON)
    # j = rho * hbar k / m for a clean carrier; the finite-difference
    # gradient loses accuracy only out in the exponential tails
    expect = f.density * HBAR * k0 / ELECTRON.mass
    np.testing.assert_allclose(j, expect, atol=1e-3 * expect.max())
    core = f.density > 0.01 * f.density.max()
    np.testing.assert_allclose(j[core], expect[core], rtol=1e-3)


def test_continuity_residual_shrinks_second_order():
    # residual between two snapshots one step apart, refined in dx and dt
    errs = []
    for ref in (1, 2):
        dx = 0.1 / ref
        dt = 0.04 / ref
        x = np.arange(-60.0, 60.0, dx)
        prof = PotentialProfile(x, 0.025 * ELECTRON.mass * x**2)
        f0 = gaussian_packet(x, x0=-10.0, sigma=4.0, k0=0.7)
        n_steps = int(round(0.8 / dt)) + 1
        cfg = EvolutionConfig(dt=dt, n_steps=n_steps, store_every=n_steps - 1)
        snaps = solvers.schrodinger_evolve(f0, prof, ELECTRON, cfg, include_rest_energy=False)
        xx, resid = qpotential.continuity_residual(snaps[-2], snaps[-1], ELECTRON)
        window = np.abs(xx) < 40.0
        errs.append(float(np.sqrt(np.mean(resid[window] ** 2))))
    order = np.log2(errs[0] / errs[1])
    assert 1.7 < order < 2.3


def test_continuity_requires_matching_grids():
    x1 = np.linspace(-5.0, 5.0, 100)
    x2 = np.linspace(-5.0, 5.0, 101)
    a = gaussian_packet(x1, 0.0, 1.0)
    b = gaussian_packet(x2, 0.0, 1.0)
    with pytest.raises(DomainError):
        qpotential.continuity_residual(a, b, ELECTRON)
    with pytest.raises(DomainError):
        qpotential.continuity_residual(a, WaveField(x1, a.psi, t=0.0), ELECTRON)


# ---------------------------------------------------------------------------
# corrected-Newton trajectories

def test_trajectory_conserves_total_energy():
    prof = bump_profile()
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    qf = qpotential.quantum_potential_local(kin, prof, ELECTRON)

    def drift(dt):
        traj = qpotential.modified_newton_trajectory(-6.0, 1.0, 10.0, prof, qf, ELECTRON, dt=dt)
        assert not traj.entered_excluded
        assert traj.x[-1] > 1.5  # crossed the bump and kept going
        return np.max(np.abs(traj.energy - traj.energy[0])) / abs(traj.energy[0])

    d1, d2 = drift(0.004), drift(0.001)
    assert d1 < 1e-5
    # velocity-Verlet energy wobble scales as dt^2
    assert d1 / d2 == pytest.approx(16.0, rel=0.3)


def test_trajectory_slows_over_the_bump():
    # with U + V in play the speed dips near the top of the bump
    prof = bump_profile()
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    qf = qpotential.quantum_potential_local(kin, prof, ELECTRON)
    traj = qpotential.modified_newton_trajectory(-6.0, 1.0, 12.0, prof, qf, ELECTRON)
    center = np.argmin(np.abs(traj.x))
    assert abs(traj.v[center]) < abs(traj.v[0])


def test_trajectory_stops_at_excluded_zone():
    # energy below the bump top: the walker runs into the turning collar
    # (explicit dt; the automatic step goes very small near the collar,
    # where the quantum potential diverges)
    prof = bump_profile(height=0.8)
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    qf = qpotential.quantum_potential_local(kin, prof, ELECTRON)
    traj = qpotential.modified_newton_trajectory(-6.0, 1.5, 40.0, prof, qf, ELECTRON, dt=0.01)
    assert traj.entered_excluded
    assert traj.t[-1] < 40.0


def test_trajectory_csv(tmp_path):
    prof = bump_profile(n=2001)
    kin = qpotential.kinetic_energy(omega_for_energy(0.5), prof, ELECTRON)
    qf = qpotential.quantum_potential_local(kin, prof, ELECTRON)
    traj = qpotential.modified_newton_trajectory(-6.0, 1.0, 2.0, prof, qf, ELECTRON)
    traj.to_csv(tmp_path / "traj.csv")
    header = (tmp_path / "traj.csv").read_text().splitlines()[0]
    assert header == "t,x,v,energy"
