"""Circular Coulomb orbits, quantization, and the overtake picture."""

import csv

import numpy as np
import pytest

from guideq import orbits
from guideq.core import ELECTRON
from guideq.errors import DomainError
from guideq.units import C, FINE_STRUCTURE, HBAR, LENGTH_SI, energy_to_ev


def test_ground_state_matches_hydrogen():
    orb = orbits.quantize_nonrelativistic(1)
    # Bohr radius and Rydberg energy, frozen from the CODATA anchors
    assert orb.r * LENGTH_SI == pytest.approx(5.2917721090608536e-11, rel=1e-14)
    assert energy_to_ev(orb.energy) == pytest.approx(-13.60569312288584, rel=1e-13)


def test_rydberg_scaling():
    levels = [orbits.quantize_nonrelativistic(n) for n in range(1, 11)]
    e1 = levels[0].energy
    for n, orb in enumerate(levels, start=1):
        assert orb.energy * n**2 == pytest.approx(e1, rel=1e-14)
        assert orb.r == pytest.approx(levels[0].r * n**2, rel=1e-14)
        assert orb.angular_momentum == pytest.approx(n * HBAR, rel=1e-14)


def test_orbit_speed_is_alpha_over_n():
    for n in (1, 2, 5):
        orb = orbits.quantize_nonrelativistic(n)
        assert orb.v_g == pytest.approx(FINE_STRUCTURE / n * C, rel=1e-14)


def test_classical_orbit_force_balance():
    rng = np.random.default_rng(8)
    for r in rng.uniform(1e3, 1e6, size=20):
        orb = orbits.classical_orbit(float(r))
        # m v^2 / r = alpha / r^2 and E = -T on a circular Coulomb orbit
        assert ELECTRON.mass * orb.v_g**2 * orb.r == pytest.approx(FINE_STRUCTURE, rel=1e-13)
        assert orb.energy == pytest.approx(-0.5 * ELECTRON.mass * orb.v_g**2, rel=1e-14)
        assert orb.period == pytest.approx(2 * np.pi * orb.r / orb.v_g, rel=1e-14)


def test_classical_orbit_relativistic_guard():
    # inside alpha Compton lengths the required speed passes c
    with pytest.raises(DomainError):
        orbits.classical_orbit(FINE_STRUCTURE * 0.9)
    with pytest.raises(DomainError):
        orbits.classical_orbit(-1.0)


def test_relativistic_radius_shift_scales_as_alpha_squared():
    for n in (1, 2, 3):
        nr = orbits.quantize_nonrelativistic(n)
        rel = orbits.quantize_relativistic(n)
        shift = abs(rel.r - nr.r) / nr.r
        # the leading correction is (alpha/n)^2 up to an order-one factor
        assert 0.5 < shift / (FINE_STRUCTURE / n) ** 2 < 2.0


def test_overtake_exact_vs_leading_order():
    orb = orbits.quantize_relativistic(1)
    ev = orbits.overtake_time(orb)
    beta2 = (orb.v_g / C) ** 2
    # tau = T beta^2/(1-beta^2) exactly, tau_leading = T beta^2
    assert ev.tau / ev.tau_leading == pytest.approx(1.0 / (1.0 - beta2), rel=1e-12)
    assert abs(ev.phase_slip_residual) < 1e-12
    assert ev.overtake_distance == pytest.approx(orb.v_g * ev.tau, rel=1e-14)


def test_quantized_orbits_fit_integer_zigzags():
    # the overtake distance covers exactly n zigzag periods on level n
    for n in (1, 2, 3):
        orb = orbits.quantize_relativistic(n)
        assert orbits.zigzag_consistency(orb) < 1e-8
        ev = orbits.overtake_time(orb)
        assert ev.zigzag_count == pytest.approx(n, rel=1e-4)


def test_generic_radius_misses_integer_condition():
    orb = orbits.classical_orbit(1.37 * orbits.quantize_nonrelativistic(1).r)
    assert orbits.zigzag_consistency(orb, n=1) > 0.1


def test_zigzag_consistency_needs_n():
    orb = orbits.classical_orbit(1e4)
    with pytest.raises(DomainError):
        orbits.zigzag_consistency(orb)


def test_transition_frequency_lyman():
    o1 = orbits.quantize_nonrelativistic(1)
    o2 = orbits.quantize_nonrelativistic(2)
    om = orbits.transition_frequency(o2, o1)
    # Rydberg formula through the same constants
    expect = -o1.energy / HBAR * (1.0 - 0.25)
    assert om == pytest.approx(expect, rel=1e-14)


def test_quantum_number_validation():
    for bad in (0, -3, 1.5, True):
        with pytest.raises(DomainError):
            orbits.quantize_nonrelativistic(bad)


def test_level_table_shape_and_monotonicity(tmp_path):
    rows = orbits.level_table(6)
    assert [r["n"] for r in rows] == [1, 2, 3, 4, 5, 6]
    energies = [r["energy"] for r in rows]
    assert all(a < b < 0 for a, b in zip(energies, energies[1:]))
    radii = [r["r"] for r in rows]
    assert all(a < b for a, b in zip(radii, radii[1:]))
    # the overtake takes a tiny fraction of a period at these speeds
    assert all(0.0 < r["tau_over_T"] < 1e-3 for r in rows)

    path = tmp_path / "levels.csv"
    orbits.export_level_table_csv(rows, path)
    with open(path, newline="") as fh:
        got = list(csv.reader(fh))
    assert got[0][0] == "n" and len(got) == 7
    assert float(got[1][1]) == pytest.approx(rows[0]["r"], rel=1e-15)
