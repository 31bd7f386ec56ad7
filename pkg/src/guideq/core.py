"""Dispersion kinematics and the potential-to-guide-width map.

A matter wave with E = hbar*omega and p = hbar*k obeys the relativistic
relation E^2 = E0^2 + (c p)^2, which is the same dispersion law

    omega^2 = omega_c^2 + (c k)^2

that governs the TE10 mode of a rectangular waveguide with cutoff omega_c.
A potential V(x) shifts the local cutoff, omega_c(x) = omega0 + V(x)/hbar,
so a potential landscape is equivalent to a guide of varying width

    a(x) = pi c / omega_c(x).

For a free electron a = pi*hbar/(m_e c) = 1.213e-12 m, half the Compton
wavelength.  The low-speed expansion of the dispersion law,

    hbar*omega = hbar*omega0 + V + (hbar k)^2 / (2 m0),

is the Schrodinger dispersion with the rest-energy term kept.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, InfinitePhaseVelocityError
from .units import C, H, HBAR, energy_to_natural, length_to_natural


@dataclass(frozen=True)
class Particle:
    """A species defined by its rest mass, in natural electron-mass units."""

    name: str
    mass: float

    def __post_init__(self):
        if not (self.mass > 0 and np.isfinite(self.mass)):
            raise DomainError(f"particle mass must be positive and finite, got {self.mass}")

    @property
    def rest_energy(self) -> float:
        return self.mass * C**2

    @property
    def rest_frequency(self) -> float:
        """Angular frequency of the rest energy, omega0 = m c^2 / hbar."""
        return self.rest_energy / HBAR

    @property
    def compton_wavelength(self) -> float:
        """h / (m c), equal to the cutoff wavelength 2 pi c / omega0."""
        return H / (self.mass * C)


ELECTRON = Particle("electron", 1.0)


class PotentialProfile:
    """A sampled one-dimensional potential V(x) on a uniform grid.

    Parameters
    ----------
    x : array
        Strictly increasing, uniformly spaced sample positions.
    values : array
        Potential samples V(x), finite.
    interpolation : {"cubic", "linear"}
        Evaluation between samples.  Cubic gives smooth first and second
        derivatives; linear keeps sharp steps sharp.
    """

    def __init__(self, x, values, interpolation: str = "cubic"):
        x = np.asarray(x, dtype=float)
        values = np.asarray(values, dtype=float)
        if x.ndim != 1 or x.shape != values.shape:
            raise DomainError("x and values must be 1-d arrays of equal length")
        n_min = 4 if interpolation == "cubic" else 2
        if x.size < n_min:
            raise DomainError(f"{interpolation} interpolation needs at least {n_min} samples")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(values))):
            raise DomainError("grid and potential samples must be finite")
        if np.any(np.diff(x) <= 0):
            raise DomainError("grid must be strictly increasing")
        if interpolation not in ("cubic", "linear"):
            raise DomainError(f"unknown interpolation {interpolation!r}")
        dx = (x[-1] - x[0]) / (x.size - 1)
        ideal = x[0] + dx * np.arange(x.size)
        scale = max(abs(x[0]), abs(x[-1]))
        if np.max(np.abs(x - ideal)) > 1e-12 * scale:
            raise DomainError("grid must be uniformly spaced")
        self._x = x
        self._values = values
        self._dx = dx
        self.interpolation = interpolation
        self._spline = None

    @property
    def x(self) -> np.ndarray:
        return self._x

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def dx(self) -> float:
        return self._dx

    @property
    def x_min(self) -> float:
        return float(self._x[0])

    @property
    def x_max(self) -> float:
        return float(self._x[-1])

    def _require_inside(self, xq):
        xq = np.asarray(xq, dtype=float)
        pad = 1e-12 * max(abs(self.x_min), abs(self.x_max), self.x_max - self.x_min)
        if np.any(xq < self.x_min - pad) or np.any(xq > self.x_max + pad):
            raise DomainError(
                f"position outside profile domain [{self.x_min:.6g}, {self.x_max:.6g}]"
            )
        return np.clip(xq, self.x_min, self.x_max)

    def _get_spline(self) -> CubicSpline:
        if self._spline is None:
            self._spline = CubicSpline(self._x, self._values)
        return self._spline

    def __call__(self, xq):
        xq = self._require_inside(xq)
        if self.interpolation == "cubic":
            out = self._get_spline()(xq)
        else:
            out = np.interp(xq, self._x, self._values)
        return out if out.ndim else float(out)

    def derivative(self, xq, order: int = 1):
        """dV/dx (order=1) or d2V/dx2 (order=2) at xq."""
        if order not in (1, 2):
            raise DomainError("derivative order must be 1 or 2")
        xq = self._require_inside(xq)
        if self.interpolation == "cubic":
            out = self._get_spline().derivative(order)(xq)
        elif order == 1:
            slopes = np.diff(self._values) / self._dx
            idx = np.clip(np.searchsorted(self._x, xq, side="right") - 1, 0, slopes.size - 1)
            out = slopes[idx]
        else:
            out = np.zeros_like(np.asarray(xq, dtype=float))
        return out if np.ndim(out) else float(out)

    @classmethod
    def from_callable(cls, func, x_min, x_max, n, interpolation="cubic"):
        x = np.linspace(x_min, x_max, n)
        return cls(x, func(x), interpolation=interpolation)

    @classmethod
    def from_csv(cls, path, interpolation="cubic"):
        """Load a profile from CSV with columns (x, V).

        A comment line of the form ``# units: <length>,<energy>`` before
        the header declares the file's units; absent, natural units are
        assumed.  Values are converted to natural units on load.
        """
        length_unit, energy_unit = "natural", "natural"
        rows = []
        with open(path, newline="") as fh:
            for record in csv.reader(fh):
                if not record:
                    continue
                first = record[0].strip()
                if first.startswith("#"):
                    text = ",".join(record).lstrip("#").strip()
                    if text.lower().startswith("units:"):
                        parts = [p.strip() for p in text[len("units:"):].split(",")]
                        if len(parts) != 2:
                            raise DomainError(
                                f"malformed units header in {path}: expected '# units: <length>,<energy>'"
                            )
                        length_unit, energy_unit = parts
                    continue
                if first.lower() == "x":
                    continue
                if len(record) < 2:
                    raise DomainError(f"malformed row in {path}: {record!r}")
                rows.append((float(record[0]), float(record[1])))
        if not rows:
            raise DomainError(f"no data rows in {path}")
        x = length_to_natural(np.array([r[0] for r in rows]), length_unit)
        v = energy_to_natural(np.array([r[1] for r in rows]), energy_unit)
        return cls(x, v, interpolation=interpolation)

    def to_csv(self, path, length_unit="natural", energy_unit="natural"):
        x = self._x / length_to_natural(1.0, length_unit)
        v = self._values / energy_to_natural(1.0, energy_unit)
        with open(path, "w", newline="") as fh:
            fh.write(f"# units: {length_unit},{energy_unit}\r\n")
            writer = csv.writer(fh)
            writer.writerow(["x", "V"])
            for xi, vi in zip(x, v):
                writer.writerow([repr(float(xi)), repr(float(vi))])


@dataclass(frozen=True)
class AxialWavenumber:
    """Axial wavenumber at a given frequency.

    ``value`` is the real propagation constant k when ``evanescent`` is
    False, and the decay constant kappa when True.
    """

    value: float
    evanescent: bool

    @property
    def as_complex(self) -> complex:
        return 1j * self.value if self.evanescent else complex(self.value)


@dataclass(frozen=True)
class DispersionPoint:
    """One point on the dispersion curve.  v_ph is inf at k = 0."""

    omega: float
    k: float
    v_g: float
    v_ph: float


def omega_of_k(k, cutoff):
    """Frequency from wavenumber, omega = sqrt(cutoff^2 + (c k)^2)."""
    cutoff = np.asarray(cutoff, dtype=float)
    if np.any(cutoff <= 0):
        raise DomainError("cutoff frequency must be positive")
    out = np.sqrt(cutoff**2 + (C * np.asarray(k, dtype=float)) ** 2)
    return out if out.ndim else float(out)


def k_of_omega(omega: float, cutoff: float) -> AxialWavenumber:
    """Invert the dispersion law at a single frequency.

    Above cutoff the wave propagates with k = sqrt(omega^2 - cutoff^2)/c;
    below cutoff it decays with kappa = sqrt(cutoff^2 - omega^2)/c and the
    result is tagged evanescent.
    """
    if cutoff <= 0:
        raise DomainError("cutoff frequency must be positive")
    if omega < 0:
        raise DomainError("frequency must be non-negative")
    if omega >= cutoff:
        return AxialWavenumber(np.sqrt(omega**2 - cutoff**2) / C, False)
    return AxialWavenumber(np.sqrt(cutoff**2 - omega**2) / C, True)


def group_velocity(omega, k):
    """v_g = c^2 k / omega, the energy transport speed."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise DomainError("frequency must be positive")
    out = C**2 * np.asarray(k, dtype=float) / omega
    return out if out.ndim else float(out)


def phase_velocity(omega, k):
    """v_ph = omega / k; diverges at k = 0."""
    k = np.asarray(k, dtype=float)
    if np.any(k == 0):
        raise InfinitePhaseVelocityError("phase velocity is infinite at k = 0")
    out = np.asarray(omega, dtype=float) / k
    return out if out.ndim else float(out)


def dispersion_point(k: float, cutoff: float) -> DispersionPoint:
    """Build the full kinematic record for a real wavenumber k >= 0."""
    if k < 0:
        raise DomainError("wavenumber must be non-negative")
    omega = omega_of_k(k, cutoff)
    v_g = group_velocity(omega, k)
    v_ph = np.inf if k == 0 else phase_velocity(omega, k)
    return DispersionPoint(omega=omega, k=k, v_g=v_g, v_ph=v_ph)


def cutoff_with_potential(particle: Particle, V):
    """Local cutoff frequency omega_c = omega0 + V/hbar."""
    out = particle.rest_frequency + np.asarray(V, dtype=float) / HBAR
    if np.any(out <= 0):
        raise DomainError(
            "potential pushes the cutoff to zero or below; the guide picture breaks down"
        )
    return out if out.ndim else float(out)


def width_from_cutoff(cutoff):
    """TE10 guide width a = pi c / cutoff."""
    cutoff = np.asarray(cutoff, dtype=float)
    if np.any(cutoff <= 0):
        raise DomainError("cutoff frequency must be positive")
    out = np.pi * C / cutoff
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GuideGeometry:
    """Guide-width equivalent of a potential profile.

    Sampled cutoff and width arrays share the profile's grid; the *_at
    methods evaluate between samples through the profile's interpolant.
    """

    particle: Particle
    profile: PotentialProfile
    x: np.ndarray
    cutoff: np.ndarray
    width: np.ndarray

    @property
    def x_min(self) -> float:
        return self.profile.x_min

    @property
    def x_max(self) -> float:
        return self.profile.x_max

    def cutoff_at(self, xq):
        return self.particle.rest_frequency + self.profile(xq) / HBAR

    def width_at(self, xq):
        return np.pi * C / self.cutoff_at(xq)

    def width_slope_at(self, xq):
        """da/dx from the analytic derivative of the interpolated potential."""
        return -np.pi * C * self.profile.derivative(xq) / HBAR / self.cutoff_at(xq) ** 2


def potential_to_geometry(particle: Particle, profile: PotentialProfile) -> GuideGeometry:
    """Map a potential profile onto the equivalent guide geometry.

    Fails when V(x) <= -m c^2 anywhere, naming the offending position.
    """
    cutoff = particle.rest_frequency + profile.values / HBAR
    bad = np.nonzero(cutoff <= 0)[0]
    if bad.size:
        i = int(bad[0])
        raise DomainError(
            f"cutoff non-positive at x = {profile.x[i]:.6g} "
            f"(V = {profile.values[i]:.6g} <= -rest energy)"
        )
    return GuideGeometry(
        particle=particle,
        profile=profile,
        x=profile.x,
        cutoff=cutoff,
        width=np.pi * C / cutoff,
    )


@dataclass(frozen=True)
class WkbValidity:
    """Pointwise adiabaticity metric |da/dx| * lambda_guide / a.

    Small values mean the width varies slowly on the scale of one guide
    wavelength, so the local-dispersion (ray) picture is trustworthy.
    ``metric`` is NaN where the wave does not propagate.
    """

    x: np.ndarray
    metric: np.ndarray
    propagating: np.ndarray


def wkb_validity(geometry: GuideGeometry, omega: float) -> WkbValidity:
    if omega <= 0:
        raise DomainError("frequency must be positive")
    x = geometry.x
    propagating = omega > geometry.cutoff
    metric = np.full(x.shape, np.nan)
    if np.any(propagating):
        k = np.sqrt(omega**2 - geometry.cutoff[propagating] ** 2) / C
        lam = 2.0 * np.pi / k
        slope = np.asarray(geometry.width_slope_at(x[propagating]))
        metric[propagating] = np.abs(slope) * lam / geometry.width[propagating]
    return WkbValidity(x=x, metric=metric, propagating=propagating)


@dataclass(frozen=True)
class SchrodingerDispersion:
    """Low-speed dispersion value and its error against the exact law."""

    omega: float
    omega_exact: float
    rel_error: float


def schrodinger_dispersion(particle: Particle, k, V=0.0):
    """Quadratic approximation hbar*omega = hbar*omega0 + V + (hbar k)^2/(2 m0).

    Returns the approximate omega together with its relative error against
    the exact relativistic branch at the same k and potential.
    """
    k = np.asarray(k, dtype=float)
    omega0 = particle.rest_frequency
    cutoff = cutoff_with_potential(particle, V)
    omega = omega0 + np.asarray(V, dtype=float) / HBAR + (C * k) ** 2 / (2.0 * omega0)
    exact = omega_of_k(k, cutoff)
    rel = np.abs(omega - exact) / exact
    if k.ndim:
        return SchrodingerDispersion(omega=omega, omega_exact=exact, rel_error=rel)
    return SchrodingerDispersion(omega=float(omega), omega_exact=float(exact), rel_error=float(rel))
