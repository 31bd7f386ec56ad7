"""Zigzag ray picture of a guided matter wave.

Inside the guide the wave can be read as a plane wave bouncing between the
walls at the vacuum speed c.  With phi measured from the transverse
direction, the axial advance happens at the group velocity

    v_g = c sin(phi),

one zigzag period (wall to wall and back) covers an axial distance

    L = lambda_c tan(phi),      lambda_c = 2 pi c / omega_c,

and the bounce clock runs at the redshifted rate

    omega_rel = omega_c cos(phi) = omega_c sqrt(1 - (v_g/c)^2),

which is time dilation read off a light-clock.  Rays are advanced segment
by segment: the angle is re-evaluated from the local dispersion at every
wall reflection, with sub-segment refinement wherever the width changes by
more than ``width_change_tol`` between reflections.  Where the local
cutoff rises to meet omega the ray has reached a classical turning point;
by default it reverses there, mirroring the inbound path.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np

from .core import GuideGeometry, Particle
from .errors import BelowCutoffError, DomainError, GuideqError
from .units import C, HBAR

# sin(phi) below this counts as "at the turning point"
_SIN_TURN = 1e-5
# relative frequency headroom kept on the allowed side when bisecting
_CUTOFF_MARGIN = 1e-12
# largest relative change of sin(phi) tolerated within one straight segment
_ANGLE_TOL = 0.02


@dataclass(frozen=True)
class RayState:
    """Ray sample: position, outgoing direction, time and clock phase."""

    x: float
    y: float
    phi: float
    transverse_sign: int
    axial_sign: int
    t: float
    clock_phase: float


@dataclass
class ZigzagTrace:
    """Result of a ray trace.

    ``reflections`` and ``turnings`` index into ``states``; ``outcome`` is
    one of "duration", "domain_exit", "turning_point".
    """

    omega: float
    states: list
    reflections: list
    turnings: list
    outcome: str

    @property
    def t(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    @property
    def x(self) -> np.ndarray:
        return np.array([s.x for s in self.states])

    @property
    def y(self) -> np.ndarray:
        return np.array([s.y for s in self.states])

    @property
    def phi(self) -> np.ndarray:
        return np.array([s.phi for s in self.states])

    @property
    def effective_velocity(self) -> float:
        """Mean axial dx/dt over the whole trace."""
        first, last = self.states[0], self.states[-1]
        if last.t == first.t:
            return 0.0
        return (last.x - first.x) / (last.t - first.t)


def local_angle(omega: float, geometry: GuideGeometry, x: float) -> float:
    """Ray angle from the transverse direction, sin(phi) = v_g/c."""
    cut = geometry.cutoff_at(x)
    if omega <= cut:
        raise BelowCutoffError(
            f"omega = {omega:.6g} is at or below the local cutoff {cut:.6g} at x = {x:.6g}"
        )
    return float(np.arcsin(np.sqrt(1.0 - (cut / omega) ** 2)))


def zigzag_period(particle: Particle, v_g, cutoff=None):
    """Axial length of one full zigzag, L = lambda_c tan(phi).

    Equals h v_g / (m0 c^2 sqrt(1 - (v_g/c)^2)) for a free particle; with a
    potential, pass the local cutoff to use the shifted cutoff wavelength.
    """
    v_g = np.asarray(v_g, dtype=float)
    if np.any(v_g < 0) or np.any(v_g >= C):
        raise DomainError("group velocity must satisfy 0 <= v_g < c")
    if cutoff is None:
        cutoff = particle.rest_frequency
    beta = v_g / C
    out = (2.0 * np.pi * C / cutoff) * beta / np.sqrt(1.0 - beta**2)
    return out if out.ndim else float(out)


def clock_frequency(particle: Particle, v_g):
    """Internal clock rate omega_rel = omega0 sqrt(1 - (v_g/c)^2)."""
    v_g = np.asarray(v_g, dtype=float)
    if np.any(v_g < 0) or np.any(v_g > C):
        raise DomainError("group velocity must satisfy 0 <= v_g <= c")
    out = particle.rest_frequency * np.sqrt(1.0 - (v_g / C) ** 2)
    return out if out.ndim else float(out)


def _default_initial(geometry: GuideGeometry) -> RayState:
    x0 = geometry.x_min
    return RayState(
        x=x0,
        y=0.5 * geometry.width_at(x0),
        phi=0.0,
        transverse_sign=-1,
        axial_sign=1,
        t=0.0,
        clock_phase=0.0,
    )


def trace(
    omega: float,
    geometry: GuideGeometry,
    duration: float,
    initial: RayState | None = None,
    *,
    width_change_tol: float = 1e-3,
    stop_at_turning: bool = False,
    max_steps: int = 5_000_000,
) -> ZigzagTrace:
    """Advance a ray through the guide for the given duration.

    The ray moves at speed c along straight segments; each segment ends at
    a wall contact, a width-change cap, a turning point, the domain edge
    or the end of the run.  phi is re-evaluated from the local dispersion
    at the start of every segment.
    """
    if duration <= 0:
        raise DomainError("duration must be positive")
    if initial is None:
        initial = _default_initial(geometry)
    if initial.transverse_sign not in (-1, 1) or initial.axial_sign not in (-1, 1):
        raise DomainError("direction signs must be +1 or -1")

    x, y, t = initial.x, initial.y, initial.t
    ts, ax = initial.transverse_sign, initial.axial_sign
    phase = initial.clock_phase
    t_end = initial.t + duration

    cut_at = geometry.cutoff_at
    wid_at = geometry.width_at
    x_lo, x_hi = geometry.x_min, geometry.x_max
    if not (x_lo <= x <= x_hi):
        raise DomainError(f"initial x = {x:.6g} outside geometry domain")
    a0 = wid_at(x)
    if not (0.0 <= y <= a0):
        raise DomainError(f"initial y = {y:.6g} outside the guide (width {a0:.6g})")
    # raises BelowCutoffError when the start is classically forbidden
    phi0 = local_angle(omega, geometry, x)

    def omega_rel(xq):
        return cut_at(xq) ** 2 / omega

    initial = replace(initial, phi=phi0)
    states = [initial]
    reflections: list[int] = []
    turnings: list[int] = []
    outcome = "duration"
    just_turned = False

    for _ in range(max_steps):
        if t_end - t <= 1e-15 * duration:
            break
        cut = cut_at(x)
        margin = 1.0 - (cut / omega) ** 2
        sinphi = np.sqrt(max(margin, 0.0))

        if sinphi < _SIN_TURN:
            if stop_at_turning or just_turned:
                outcome = "turning_point"
                if not just_turned:
                    turnings.append(len(states) - 1)
                break
            ax = -ax
            just_turned = True
            states[-1] = replace(states[-1], axial_sign=ax)
            turnings.append(len(states) - 1)
            sinphi = max(sinphi, 0.5 * _SIN_TURN)  # nudge off the exact point
        cosphi = np.sqrt(1.0 - sinphi**2)
        phi = float(np.arcsin(sinphi))
        vx = ax * C * sinphi
        vy = ts * C * cosphi

        event = "time"
        dt = t_end - t

        # domain exit
        if vx > 0:
            s_exit = (x_hi - x) / vx
        elif vx < 0:
            s_exit = (x_lo - x) / vx
        else:
            s_exit = np.inf
        if s_exit < dt:
            dt, event = s_exit, "exit"

        # width-change cap keeps each straight segment inside the WKB window
        slope = geometry.width_slope_at(x)
        if slope != 0.0 and vx != 0.0:
            s_wid = width_change_tol * wid_at(x) / abs(slope * vx)
            if s_wid < dt:
                dt, event = s_wid, "refine"
            # near a turning point sin(phi) is steep in x; refine harder there
            dsin_dx = cut * abs(geometry.profile.derivative(x)) / HBAR / (omega**2 * sinphi)
            if dsin_dx > 0.0:
                s_phi = _ANGLE_TOL * sinphi / (dsin_dx * abs(vx))
                if s_phi < dt:
                    dt, event = s_phi, "refine"

        # wall contact
        if vy < 0:
            s_wall = y / (-vy)
            if s_wall < dt:
                dt, event = s_wall, "wall"
        elif slope == 0.0:
            s_wall = (wid_at(x) - y) / vy
            if s_wall < dt:
                dt, event = s_wall, "wall"
        else:
            s_wall = _top_wall_time(x, y, vx, vy, dt, wid_at)
            if s_wall is not None:
                dt, event = s_wall, "wall"

        # classically forbidden region ahead: shorten the segment to its edge
        x_try = x + vx * dt
        if omega - cut_at(x_try) <= _CUTOFF_MARGIN * omega and vx != 0.0:
            dt = _allowed_edge_time(x, vx, dt, omega, cut_at)
            event = "turn_edge"
            x_try = x + vx * dt

        if dt <= 0.0:
            outcome = "turning_point"
            break

        x_new = x_try
        y_new = y + vy * dt
        if event == "wall":
            y_new = wid_at(x_new) if vy > 0 else 0.0
        else:
            y_new = min(max(y_new, 0.0), wid_at(x_new))
        phase += 0.5 * (omega_rel(x) + omega_rel(x_new)) * dt
        t += dt
        x, y = x_new, y_new
        if event == "wall":
            ts = -ts
        if event != "turn_edge":
            just_turned = False
        states.append(
            RayState(x=x, y=y, phi=phi, transverse_sign=ts, axial_sign=ax, t=t, clock_phase=phase)
        )
        if event == "wall":
            reflections.append(len(states) - 1)
        if event == "exit":
            outcome = "domain_exit"
            break
    else:
        raise GuideqError("trace exceeded max_steps; geometry varies too fast for the ray model")

    return ZigzagTrace(
        omega=omega,
        states=states,
        reflections=reflections,
        turnings=turnings,
        outcome=outcome,
    )


def _top_wall_time(x, y, vx, vy, s_max, wid_at):
    """Earliest s in (0, s_max] with y + vy*s = a(x + vx*s), else None."""
    def gap(s):
        return wid_at(x + vx * s) - (y + vy * s)

    g_end = gap(s_max)
    if g_end > 0.0:
        return None
    if g_end == 0.0:
        return s_max
    lo, hi = 0.0, s_max
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def _allowed_edge_time(x, vx, s_max, omega, cut_at):
    """Largest s in [0, s_max] keeping omega safely above the local cutoff."""
    target = _CUTOFF_MARGIN * omega

    def headroom(s):
        return omega - cut_at(x + vx * s)

    lo, hi = 0.0, s_max
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if headroom(mid) > target:
            lo = mid
        else:
            hi = mid
    return lo


def export_trace_csv(tr: ZigzagTrace, path):
    """Write the trace as CSV rows (t, x, y, phi, v_eff)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x", "y", "phi", "v_eff"])
        for s in tr.states:
            writer.writerow(
                [
                    repr(float(s.t)),
                    repr(float(s.x)),
                    repr(float(s.y)),
                    repr(float(s.phi)),
                    repr(float(s.axial_sign * C * np.sin(s.phi))),
                ]
            )
