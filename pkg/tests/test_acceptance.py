"""Acceptance gate: every numbered library check must hold.

Each test runs one check from guideq.validation and prints its verdict
line, so ``pytest tests/test_acceptance.py -v -s`` gives one pass/fail
line per criterion.  The same checks back the ``guideq validate``
subcommand.
"""

from functools import lru_cache

from guideq import validation


@lru_cache(maxsize=None)
def run(index: int):
    r = validation.ALL_CHECKS[index - 1]()
    assert r.index == index
    tag = "PASS" if r.passed else "FAIL"
    print(f"[{tag}] {r.index} {r.name}: {r.detail}")
    return r


def check(index: int) -> None:
    r = run(index)
    assert r.passed, f"criterion {r.index} ({r.name}) failed: {r.detail}"


def test_01_guide_width_matches_compton_scale():
    check(1)


def test_02_dispersion_velocity_identity():
    check(2)


def test_03_zigzag_ray_kinematics():
    check(3)


def test_04_rectangular_barrier_transmission():
    check(4)


def test_05_scattering_unitarity_and_reciprocity():
    check(5)


def test_06_circular_orbit_level_spectrum():
    check(6)


def test_07_quantum_potential_route_agreement():
    check(7)


def test_08_continuity_residual_convergence():
    check(8)


def test_09_relativistic_packet_group_velocity():
    check(9)


def test_10_wkb_density_against_eigenstates():
    check(10)
