"""Zigzag ray kinematics in mapped guide geometry."""

import csv

import numpy as np
import pytest

from guideq import core, raytrace
from guideq.core import ELECTRON, PotentialProfile
from guideq.errors import BelowCutoffError, DomainError
from guideq.raytrace import RayState
from guideq.units import C, H


def free_geometry(span=600.0, n=301):
    prof = PotentialProfile.from_callable(lambda x: np.zeros_like(x), 0.0, span, n)
    return core.potential_to_geometry(ELECTRON, prof)


def omega_for_beta(beta):
    """Frequency whose free-space group velocity is beta*c."""
    return ELECTRON.rest_frequency / np.sqrt(1.0 - beta**2)


def test_local_angle_encodes_group_velocity():
    geom = free_geometry()
    for beta in (0.1, 0.5, 0.9):
        om = omega_for_beta(beta)
        phi = raytrace.local_angle(om, geom, 10.0)
        assert np.sin(phi) == pytest.approx(beta, rel=1e-12)
    with pytest.raises(BelowCutoffError):
        raytrace.local_angle(0.99, geom, 10.0)


def test_zigzag_period_closed_form():
    # L = h v / (m c^2 sqrt(1 - beta^2)) for the free guide
    for beta in (0.2, 0.6, 0.95):
        v = beta * C
        expect = H * v / (ELECTRON.mass * C**2 * np.sqrt(1.0 - beta**2))
        assert raytrace.zigzag_period(ELECTRON, v) == pytest.approx(expect, rel=1e-14)
    with pytest.raises(DomainError):
        raytrace.zigzag_period(ELECTRON, C)


def test_clock_frequency_time_dilated():
    assert raytrace.clock_frequency(ELECTRON, 0.0) == ELECTRON.rest_frequency
    assert raytrace.clock_frequency(ELECTRON, 0.6 * C) == pytest.approx(0.8, rel=1e-15)


def test_free_trace_measures_period_and_velocity():
    beta = 0.6
    om = omega_for_beta(beta)
    geom = free_geometry()
    L = raytrace.zigzag_period(ELECTRON, beta * C)
    tr = raytrace.trace(om, geom, duration=40.0 * np.pi / raytrace.clock_frequency(ELECTRON, beta * C), )
    # mean axial speed equals the group velocity
    assert tr.effective_velocity == pytest.approx(beta * C, rel=1e-12)
    # wall-to-wall x spacing is half a zigzag period
    hits = tr.x[tr.reflections]
    spacing = np.diff(hits)
    np.testing.assert_allclose(spacing, L / 2.0, rtol=1e-10)
    # bounce rate matches the relativistic clock, one hit per half clock cycle
    t_hits = tr.t[tr.reflections]
    rate = (len(t_hits) - 1) / (t_hits[-1] - t_hits[0])
    om_clock = raytrace.clock_frequency(ELECTRON, beta * C)
    assert rate == pytest.approx(om_clock / np.pi, rel=1e-10)


def test_trace_bounces_between_walls():
    geom = free_geometry()
    om = omega_for_beta(0.4)
    tr = raytrace.trace(om, geom, duration=50.0)
    width = geom.width_at(0.0)
    ys = tr.y[tr.reflections]
    # every reflection is on a wall, alternating floor and ceiling
    assert np.all((np.abs(ys) < 1e-9) | (np.abs(ys - width) < 1e-9))
    floor = np.abs(ys) < 1e-9
    assert np.all(floor[:-1] != floor[1:])
    # the path never leaves the guide
    assert np.all(tr.y >= -1e-9) and np.all(tr.y <= width + 1e-9)


def test_trace_outcome_domain_exit():
    geom = free_geometry(span=20.0, n=64)
    tr = raytrace.trace(omega_for_beta(0.8), geom, duration=1e4)
    assert tr.outcome == "domain_exit"
    assert tr.x[-1] == pytest.approx(20.0, abs=1e-9)


def ramp_geometry():
    # potential rising along x so a forward ray meets its turning point
    prof = PotentialProfile.from_callable(lambda x: 1e-3 * x, 0.0, 300.0, 601)
    return core.potential_to_geometry(ELECTRON, prof)


def test_trace_turning_point_reverses():
    geom = ramp_geometry()
    beta = 0.05
    om = omega_for_beta(beta)
    # hbar*(om - omega0) is the energy budget; the ray turns where V eats it
    x_turn = (om - ELECTRON.rest_frequency) / 1e-3
    tr = raytrace.trace(om, geom, duration=3e4)
    assert len(tr.turnings) >= 1
    reached = np.max(tr.x)
    assert reached == pytest.approx(x_turn, rel=5e-3)
    # after the turning the ray comes back down
    assert tr.x[-1] < reached
    assert tr.outcome in ("duration", "domain_exit")


def test_trace_stop_at_turning():
    geom = ramp_geometry()
    om = omega_for_beta(0.05)
    tr = raytrace.trace(om, geom, duration=3e4, stop_at_turning=True)
    assert tr.outcome == "turning_point"
    assert len(tr.turnings) == 1
    assert tr.states[-1] is tr.states[tr.turnings[0]]


def test_trace_clock_phase_advances_with_proper_time():
    # in a free guide the clock phase grows at omega_rel = omega0/gamma
    beta = 0.6
    om = omega_for_beta(beta)
    geom = free_geometry()
    tr = raytrace.trace(om, geom, duration=100.0)
    last = tr.states[-1]
    om_clock = raytrace.clock_frequency(ELECTRON, beta * C)
    assert last.clock_phase == pytest.approx(om_clock * last.t, rel=1e-10)


def test_trace_rejects_below_cutoff_start():
    geom = free_geometry()
    with pytest.raises(BelowCutoffError):
        raytrace.trace(0.5, geom, duration=10.0)


def test_custom_initial_state_runs_backward():
    geom = free_geometry(span=100.0)
    om = omega_for_beta(0.3)
    start = RayState(
        x=90.0, y=geom.width_at(90.0) / 2.0, phi=0.0,
        transverse_sign=1, axial_sign=-1, t=0.0, clock_phase=0.0,
    )
    tr = raytrace.trace(om, geom, duration=1e4, initial=start)
    assert tr.outcome == "domain_exit"
    assert tr.x[-1] == pytest.approx(0.0, abs=1e-9)
    assert tr.effective_velocity == pytest.approx(-0.3 * C, rel=1e-10)


def test_export_trace_csv(tmp_path):
    geom = free_geometry()
    tr = raytrace.trace(omega_for_beta(0.5), geom, duration=30.0)
    path = tmp_path / "trace.csv"
    raytrace.export_trace_csv(tr, path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "x", "y", "phi", "v_eff"]
    assert len(rows) == len(tr.states) + 1
    v = float(rows[1][4])
    assert v == pytest.approx(0.5 * C, rel=1e-12)
