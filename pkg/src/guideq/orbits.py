"""Circular Coulomb orbits and their phase-wave quantization.

A charge on a circular orbit of radius r balances the Coulomb pull,

    m v^2 / r = e^2 / r^2        (e^2 is the coupling q^2 / 4 pi eps0),

giving M = m v r, E = -m v^2 / 2 and period T = 2 pi r / v.  The guided
wave bound to the orbit carries a phase wave at v_ph = c^2 / v_g, which
laps the particle once every overtake time tau:

    v_ph tau = (tau + T) v_g  =>  tau = T v_g^2 / (c^2 - v_g^2),

with first-order form tau ~ T (v_g/c)^2.  Requiring the lap to advance the
zigzag pattern by a whole number of periods leads to the quantization rule

    m0 v_g^2 T sqrt(1 - (v_g/c)^2) = n h,

which reduces to M = n hbar when v_g << c and shifts the orbit by a
relative amount of order alpha^2/n^2 otherwise.  The rule is solved here
by bisection on v_g; the left side over v_g is monotone, so the root is
unique and bracketed.

Only energy differences between orbits are physical frequencies; single
levels keep their classical E = -m v^2/2.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import ELECTRON, Particle
from .errors import DomainError
from .raytrace import zigzag_period
from .units import C, COULOMB_COUPLING, H, HBAR, energy_to_ev

_REL_TOL = 1e-14  # bisection tolerance on v_g, relative


@dataclass(frozen=True)
class CircularOrbit:
    """A circular Coulomb orbit; n is None for unquantized radii."""

    r: float
    v_g: float
    period: float
    angular_momentum: float
    energy: float
    n: int | None = None


@dataclass(frozen=True)
class OvertakeEvent:
    """One lap of the phase wave around the orbiting particle.

    tau solves the exact lap condition; tau_leading is its first-order
    form T (v_g/c)^2.  phase_slip_residual is the relative residual of the
    lap condition at tau (zero up to rounding by construction), and
    zigzag_count is the number of zigzag periods the lap advances.
    """

    tau: float
    tau_leading: float
    overtake_distance: float
    phase_slip_residual: float
    zigzag_count: float


def classical_orbit(
    r: float,
    particle: Particle = ELECTRON,
    coupling: float = COULOMB_COUPLING,
    c: float = C,
) -> CircularOrbit:
    """Orbit at a given radius from force balance alone."""
    if r <= 0:
        raise DomainError("orbit radius must be positive")
    m = particle.mass
    v = np.sqrt(coupling / (m * r))
    if v >= c:
        raise DomainError(f"radius {r:.6g} requires v >= c; no circular orbit exists")
    return CircularOrbit(
        r=r,
        v_g=v,
        period=2.0 * np.pi * r / v,
        angular_momentum=m * v * r,
        energy=-0.5 * m * v**2,
    )


def quantize_nonrelativistic(
    n: int,
    particle: Particle = ELECTRON,
    coupling: float = COULOMB_COUPLING,
) -> CircularOrbit:
    """Closed-form orbit with M = n hbar.

    r_n = n^2 hbar^2/(m e^2), E_n = -m e^4/(2 hbar^2 n^2).
    """
    _check_n(n)
    m = particle.mass
    r = (n * HBAR) ** 2 / (m * coupling)
    v = coupling / (n * HBAR)
    return CircularOrbit(
        r=r,
        v_g=v,
        period=2.0 * np.pi * r / v,
        angular_momentum=n * HBAR,
        energy=-0.5 * m * v**2,
        n=n,
    )


def quantize_relativistic(
    n: int,
    particle: Particle = ELECTRON,
    coupling: float = COULOMB_COUPLING,
    c: float = C,
) -> CircularOrbit:
    """Solve m0 v^2 T sqrt(1 - (v/c)^2) = n h together with force balance.

    With T = 2 pi e^2/(m v^3) from force balance the left side is strictly
    decreasing in v on (0, c), so bisection always converges.  Reduces to
    the closed-form rule as c -> infinity.
    """
    _check_n(n)
    m = particle.mass
    target = n * H

    def lhs(v):
        period = 2.0 * np.pi * coupling / (m * v**3)
        return m * v**2 * period * np.sqrt(1.0 - (v / c) ** 2) - target

    lo = 1e-12 * c
    hi = c * (1.0 - 1e-16)
    if lhs(lo) < 0:
        raise DomainError("quantization has no root above the bracket floor")
    while (hi - lo) > _REL_TOL * lo:
        mid = 0.5 * (lo + hi)
        if lhs(mid) > 0:
            lo = mid
        else:
            hi = mid
    v = 0.5 * (lo + hi)
    r = coupling / (m * v**2)
    return CircularOrbit(
        r=r,
        v_g=v,
        period=2.0 * np.pi * r / v,
        angular_momentum=m * v * r,
        energy=-0.5 * m * v**2,
        n=n,
    )


def overtake_time(
    orbit: CircularOrbit, c: float = C, particle: Particle = ELECTRON
) -> OvertakeEvent:
    """Time for the phase wave to lap the particle once."""
    v, T = orbit.v_g, orbit.period
    if not (0 < v < c):
        raise DomainError("overtaking needs 0 < v_g < c")
    tau = T * v**2 / (c**2 - v**2)
    tau_leading = T * (v / c) ** 2
    v_ph = c**2 / v
    residual = (v_ph * tau - (tau + T) * v) / (v_ph * tau)
    length = zigzag_period_for(orbit, c, particle)
    return OvertakeEvent(
        tau=tau,
        tau_leading=tau_leading,
        overtake_distance=v * tau,
        phase_slip_residual=float(residual),
        zigzag_count=v * tau / length,
    )


def zigzag_period_for(orbit: CircularOrbit, c: float = C, particle: Particle = ELECTRON) -> float:
    """Zigzag period at the orbit speed, h v / (m0 c^2 sqrt(1 - (v/c)^2))."""
    if c == C:
        return zigzag_period(particle, orbit.v_g)
    beta = orbit.v_g / c
    return H * orbit.v_g / (particle.mass * c**2 * np.sqrt(1.0 - beta**2))


def zigzag_consistency(
    orbit: CircularOrbit,
    n: int | None = None,
    particle: Particle = ELECTRON,
    c: float = C,
) -> float:
    """Relative residual of v_g * tau = n * L.

    tau here is the first-order overtake time T (v_g/c)^2, the form the
    quantization rule is built on; L is the zigzag period from the ray
    module.  Orbits produced by the relativistic quantizer satisfy this to
    root-finder precision; generic radii miss by order one.
    """
    if n is None:
        n = orbit.n
    if n is None:
        raise DomainError("orbit carries no quantum number; pass n explicitly")
    _check_n(n)
    v, T = orbit.v_g, orbit.period
    tau_leading = T * (v / c) ** 2
    length = zigzag_period_for(orbit, c, particle)
    return float(abs(v * tau_leading - n * length) / (n * length))


def transition_frequency(orbit_a: CircularOrbit, orbit_b: CircularOrbit) -> float:
    """Angular frequency of the energy difference, (E_a - E_b)/hbar."""
    return (orbit_a.energy - orbit_b.energy) / HBAR


def level_table(
    n_max: int,
    particle: Particle = ELECTRON,
    coupling: float = COULOMB_COUPLING,
    c: float = C,
):
    """Quantized levels 1..n_max with their overtake and shift diagnostics."""
    _check_n(n_max)
    rows = []
    for n in range(1, n_max + 1):
        rel = quantize_relativistic(n, particle, coupling, c)
        nr = quantize_nonrelativistic(n, particle, coupling)
        ev = overtake_time(rel, c)
        rows.append(
            {
                "n": n,
                "r": rel.r,
                "v_over_c": rel.v_g / c,
                "energy": rel.energy,
                "energy_ev": energy_to_ev(rel.energy),
                "angular_momentum_over_hbar": rel.angular_momentum / HBAR,
                "tau_over_T": ev.tau / rel.period,
                "relativistic_shift": abs(rel.r - nr.r) / nr.r,
            }
        )
    return rows


def export_level_table_csv(rows, path):
    """CSV export: (n, r, v_g/c, E_eV, M/hbar, tau/T, relativistic shift)."""
    fields = [
        "n",
        "r",
        "v_over_c",
        "energy_ev",
        "angular_momentum_over_hbar",
        "tau_over_T",
        "relativistic_shift",
    ]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for row in rows:
            writer.writerow([repr(float(row[f])) if f != "n" else row[f] for f in fields])


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise DomainError(f"quantum number must be a positive integer, got {n!r}")
