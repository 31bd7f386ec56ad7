"""Ray-side quantum mechanics: WKB density and the local quantum potential.

A monochromatic guided ray at frequency omega has local kinetic energy

    E_kin(x) = hbar*omega - hbar*omega0 - V(x)

and spends time in proportion to 1/v ~ E_kin^(-1/2), which is the WKB
density.  The amplitude R ~ E_kin^(-1/4) implied by that density carries a
Bohm quantum potential U = -(hbar^2/2m) R''/R.  Written out in terms of
the potential alone (E_kin' = -V'):

    U(x) = -(hbar^2 / 8 m) * (1/E_kin) * [ V'' + (5/4) (V')^2 / E_kin ]

``quantum_potential_local`` evaluates that closed form;
``bohm_quantum_potential`` differentiates an amplitude numerically and is
the independent check.  The (5/4) term enters with a plus sign; see
``arbitrate_curvature_sign`` for the numerical comparison that pins it.

Near classical turning points E_kin -> 0 and all of this blows up, so a
small exclusion band |E_kin| <= eps_turn is masked to NaN throughout.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .core import Particle, PotentialProfile
from .errors import DomainError, ForbiddenDomainError
from .solvers import WaveField
from .units import HBAR

TURNING_BAND_FRACTION = 1e-3  # eps_turn = this * max|E_kin|
AMPLITUDE_FLOOR = 1e-12  # relative; below it the phase is numerically meaningless


@dataclass(frozen=True)
class KineticField:
    """Local kinetic energy of a fixed-frequency ray over the grid."""

    x: np.ndarray
    energy: np.ndarray
    omega: float
    eps_turn: float

    @property
    def excluded(self) -> np.ndarray:
        """Points inside the turning-point exclusion band."""
        return np.abs(self.energy) <= self.eps_turn

    @property
    def forbidden(self) -> np.ndarray:
        """Classically forbidden points (negative kinetic energy)."""
        return self.energy < 0.0


def kinetic_energy(
    omega: float,
    profile: PotentialProfile,
    particle: Particle,
    turning_band: float = TURNING_BAND_FRACTION,
) -> KineticField:
    e = HBAR * omega - HBAR * particle.rest_frequency - profile.values
    scale = float(np.max(np.abs(e)))
    if scale == 0.0:
        raise DomainError("kinetic energy vanishes identically on this grid")
    return KineticField(x=profile.x, energy=e, omega=omega, eps_turn=turning_band * scale)


@dataclass(frozen=True)
class DensityField:
    """Normalized time-of-flight density p(x) ~ E_kin^(-1/2)."""

    x: np.ndarray
    p: np.ndarray

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "density"])
            for xi, pi in zip(self.x, self.p):
                w.writerow([repr(float(xi)), repr(float(pi))])


def wkb_density(kin: KineticField) -> DensityField:
    """Dwell density over the allowed region, trapezoid-normalized to 1.

    Forbidden and near-turning points come back NaN.  At least two allowed
    points must survive or there is nothing to normalize.
    """
    good = (~kin.excluded) & (~kin.forbidden)
    if np.count_nonzero(good) < 2:
        raise ForbiddenDomainError(
            "no classically allowed region at this frequency (everything is "
            "forbidden or inside the turning band)"
        )
    p = np.full_like(kin.energy, np.nan)
    p[good] = kin.energy[good] ** -0.5
    norm = np.trapezoid(np.where(good, p, 0.0), kin.x)
    out = p / norm
    return DensityField(x=kin.x, p=out)


def _fd1(y, dx):
    """Fourth-order centered first derivative; two edge points are NaN."""
    out = np.full_like(y, np.nan, dtype=float)
    out[2:-2] = (-y[4:] + 8.0 * y[3:-1] - 8.0 * y[1:-3] + y[:-4]) / (12.0 * dx)
    return out


def _fd2(y, dx):
    """Fourth-order centered second derivative; two edge points are NaN."""
    out = np.full_like(y, np.nan, dtype=float)
    out[2:-2] = (
        -y[4:] + 16.0 * y[3:-1] - 30.0 * y[2:-2] + 16.0 * y[1:-3] - y[:-4]
    ) / (12.0 * dx**2)
    return out


@dataclass(frozen=True)
class QuantumPotentialField:
    """U(x) with NaN where the construction is undefined."""

    x: np.ndarray
    value: np.ndarray
    source: str  # "local" (from V derivatives) or "amplitude" (from R)


def quantum_potential_local(
    kin: KineticField,
    profile: PotentialProfile,
    particle: Particle,
    curvature_sign: float = 1.0,
) -> QuantumPotentialField:
    """Closed-form U from the potential's first two derivatives.

    ``curvature_sign`` multiplies the (5/4)(V')^2 term; the physical value
    is +1 (it descends from d2/dx2 of E_kin^(-1/4)), the parameter exists
    so the alternative can be scored numerically.
    """
    dx = float(profile.x[1] - profile.x[0])
    v1 = _fd1(profile.values, dx)
    v2 = _fd2(profile.values, dx)
    e = kin.energy
    with np.errstate(invalid="ignore", divide="ignore"):
        u = (
            -(HBAR**2)
            / (8.0 * particle.mass)
            / e
            * (v2 + curvature_sign * 1.25 * v1**2 / e)
        )
    u = np.where(kin.excluded, np.nan, u)
    return QuantumPotentialField(x=profile.x, value=u, source="local")


def bohm_quantum_potential(x, amplitude, particle: Particle) -> QuantumPotentialField:
    """U = -(hbar^2/2m) R''/R from a sampled amplitude, no reference to V."""
    x = np.asarray(x, dtype=float)
    r = np.asarray(amplitude, dtype=float)
    if x.shape != r.shape or x.ndim != 1:
        raise DomainError("x and amplitude must be 1-d arrays of equal length")
    dx = float(x[1] - x[0])
    r2 = _fd2(r, dx)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = -(HBAR**2) / (2.0 * particle.mass) * r2 / r
    u[np.abs(r) <= AMPLITUDE_FLOOR * np.max(np.abs(r))] = np.nan
    return QuantumPotentialField(x=x, value=u, source="amplitude")


@dataclass(frozen=True)
class SignArbitration:
    sign: float
    residual_plus: float
    residual_minus: float


def arbitrate_curvature_sign(
    kin: KineticField, profile: PotentialProfile, particle: Particle
) -> SignArbitration:
    """Score both signs of the (5/4) term against the amplitude route.

    The WKB amplitude R = E_kin^(-1/4) is built directly from the kinetic
    energy, its Bohm potential is differentiated numerically, and each
    closed-form candidate is compared on the jointly valid grid.  Smaller
    median relative deviation wins.
    """
    allowed = (~kin.excluded) & (~kin.forbidden)
    r = np.where(allowed, np.abs(kin.energy) ** -0.25, np.nan)
    reference = bohm_quantum_potential(kin.x, r, particle).value
    scale = np.nanmax(np.abs(reference))
    residuals = {}
    for s in (1.0, -1.0):
        cand = quantum_potential_local(kin, profile, particle, curvature_sign=s).value
        diff = np.abs(cand - reference) / scale
        residuals[s] = float(np.nanmedian(diff))
    winner = 1.0 if residuals[1.0] <= residuals[-1.0] else -1.0
    return SignArbitration(
        sign=winner, residual_plus=residuals[1.0], residual_minus=residuals[-1.0]
    )


# ---------------------------------------------------------------------------
# wavefunction side

@dataclass(frozen=True)
class PolarField:
    """Amplitude/action split psi = R exp(i S / hbar)."""

    x: np.ndarray
    amplitude: np.ndarray
    action: np.ndarray  # NaN where the amplitude is below the floor


def polar_decompose(field: WaveField) -> PolarField:
    r = np.abs(field.psi)
    floor = AMPLITUDE_FLOOR * float(np.max(r))
    # unwrap runs over the full grid; where R is at the floor the phase is
    # noise, so those points are masked after the fact
    s = HBAR * np.unwrap(np.angle(field.psi))
    s = np.where(r > floor, s, np.nan)
    return PolarField(x=field.x, amplitude=r, action=s)


def probability_flux(field: WaveField, particle: Particle) -> np.ndarray:
    """j = (hbar/m) Im(conj(psi) dpsi/dx), centered differences."""
    dpsi = np.gradient(field.psi, field.dx)
    return HBAR / particle.mass * np.imag(np.conj(field.psi) * dpsi)


def continuity_residual(before: WaveField, after: WaveField, particle: Particle):
    """Pointwise d(rho)/dt + d(j)/dx between two consecutive snapshots.

    Both terms are centered on the midpoint time: the density difference
    quotient is exactly centered there, the flux is averaged between the
    slices.  Returns (x, residual); the scheme is second order in dt and
    dx, which a refinement study can confirm.
    """
    if before.x.shape != after.x.shape or not np.allclose(before.x, after.x):
        raise DomainError("snapshots live on different grids")
    dt = after.t - before.t
    if dt <= 0:
        raise DomainError("snapshots must be time-ordered")
    drho_dt = (after.density - before.density) / dt
    j_mid = 0.5 * (probability_flux(before, particle) + probability_flux(after, particle))
    dj_dx = np.gradient(j_mid, before.dx)
    return before.x, drho_dt + dj_dx


# ---------------------------------------------------------------------------
# trajectories under V + U

@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    energy: np.ndarray  # kinetic + V + U along the path
    entered_excluded: bool

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x", "v", "energy"])
            for row in zip(self.t, self.x, self.v, self.energy):
                w.writerow([repr(float(c)) for c in row])


def modified_newton_trajectory(
    x0: float,
    v0: float,
    duration: float,
    profile: PotentialProfile,
    qfield: QuantumPotentialField,
    particle: Particle,
    dt: float | None = None,
) -> Trajectory:
    """Velocity-Verlet integration of m x'' = -d/dx [V(x) + U(x)].

    The quantum potential is interpolated with a cubic spline over its
    largest contiguous valid stretch containing x0.  If the trajectory
    reaches the edge of that stretch the run stops early and
    ``entered_excluded`` is set; the samples up to that point are kept.
    """
    if duration <= 0:
        raise DomainError("duration must be positive")
    valid = np.isfinite(qfield.value)
    if not valid.any():
        raise ForbiddenDomainError("quantum potential has no valid samples")
    # largest contiguous run of valid samples containing x0
    idx = np.flatnonzero(valid)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    segments = np.split(idx, breaks + 1)
    home = None
    for seg in segments:
        if qfield.x[seg[0]] <= x0 <= qfield.x[seg[-1]]:
            home = seg
            break
    if home is None:
        raise ForbiddenDomainError(
            f"x0 = {x0:.6g} is not inside any valid stretch of the quantum potential"
        )
    xs = qfield.x[home]
    total = CubicSpline(xs, qfield.value[home] + profile(xs))
    force = total.derivative()
    lo, hi = float(xs[0]), float(xs[-1])

    if dt is None:
        # resolve the stiffest oscillation the combined potential supports
        curv = float(np.max(np.abs(total(xs, 2))))
        omega = np.sqrt(max(curv, 1e-30) / particle.mass)
        dt = 2.0 * np.pi / omega / 1000.0 if omega > 0 else duration / 1000.0
        dt = min(dt, duration / 100.0)

    n_steps = max(1, int(np.ceil(duration / dt)))
    t = np.empty(n_steps + 1)
    x = np.empty(n_steps + 1)
    v = np.empty(n_steps + 1)
    t[0], x[0], v[0] = 0.0, x0, v0
    stopped = False
    a = -force(x0) / particle.mass
    k = 0
    for k in range(1, n_steps + 1):
        x_new = x[k - 1] + v[k - 1] * dt + 0.5 * a * dt**2
        if not lo <= x_new <= hi:
            stopped = True
            k -= 1
            break
        a_new = -force(x_new) / particle.mass
        v[k] = v[k - 1] + 0.5 * (a + a_new) * dt
        x[k] = x_new
        t[k] = t[k - 1] + dt
        a = a_new
    t, x, v = t[: k + 1], x[: k + 1], v[: k + 1]
    energy = 0.5 * particle.mass * v**2 + total(x)
    return Trajectory(t=t, x=x, v=v, energy=energy, entered_excluded=stopped)


def export_quantum_field_csv(
    path,
    profile: PotentialProfile,
    kin: KineticField,
    density: DensityField,
    qfield: QuantumPotentialField,
) -> None:
    """Side-by-side CSV: x, V, kinetic energy, WKB density, U."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "potential", "kinetic_energy", "wkb_density", "quantum_potential"])
        for xi, vi, ei, pi, ui in zip(
            profile.x, profile.values, kin.energy, density.p, qfield.value
        ):
            w.writerow([repr(float(c)) for c in (xi, vi, ei, pi, ui)])
