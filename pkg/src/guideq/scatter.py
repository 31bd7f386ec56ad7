"""One-dimensional scattering through piecewise-constant potentials.

A structure is a chain of segments, each with its own potential and hence
its own local cutoff omega_c = omega0 + V/hbar.  The first and last
segments are semi-infinite leads.  Within each segment the field is a pair
of counter-propagating (or growing/decaying) exponentials; matching the
field and its derivative at every interface gives 2x2 transfer matrices
whose product relates the lead amplitudes.

With incident amplitude 1 in the left lead,

    t = det(M) / M[1,1],     r = -M[1,0] / M[1,1],
    T = (k_out/k_in) |t|^2,  R = |r|^2,

where det(M) telescopes to k_in/k_out.  Evanescent segments contribute
exp(+kappa L) growth; the running scale factor is kept in log space so
deep barriers (kappa L in the hundreds) neither overflow nor lose the
transmitted flux, which is reported as ln T alongside T itself.

Two dispersion regimes are supported: the exact relativistic branch
    (c k)^2 = omega^2 - omega_c^2
and the quadratic low-speed branch
    (hbar k)^2 = 2 m0 (hbar omega - hbar omega_c),
selectable per call; both share the same cutoff, so the propagating /
evanescent classification agrees between them.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import AxialWavenumber, Particle, k_of_omega
from .errors import DomainError, NoPropagatingChannelError
from .units import C, HBAR

REGIMES = ("schrodinger", "klein_gordon")


@dataclass(frozen=True)
class Segment:
    """A stretch of constant potential.  length=None marks a lead."""

    V: float
    length: float | None = None

    def __post_init__(self):
        if self.length is not None and not (self.length > 0 and np.isfinite(self.length)):
            raise DomainError(f"segment length must be positive, got {self.length}")
        if not np.isfinite(self.V):
            raise DomainError("segment potential must be finite")

    @property
    def is_lead(self) -> bool:
        return self.length is None

    def cutoff(self, particle: Particle) -> float:
        cf = particle.rest_frequency + self.V / HBAR
        if cf <= 0:
            raise DomainError(f"segment potential {self.V:.6g} drives the cutoff non-positive")
        return cf


def lead(V: float = 0.0) -> Segment:
    return Segment(V=V, length=None)


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 complex matrix relating (forward, backward) amplitudes.

    The true matrix is exp(log_scale) * m; the split keeps deep evanescent
    growth representable.
    """

    m: np.ndarray
    log_scale: float = 0.0

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(self.m @ other.m, self.log_scale + other.log_scale)

    @property
    def det(self) -> complex:
        """Determinant of the scaled part; multiply by exp(2*log_scale) for the full value."""
        return complex(np.linalg.det(self.m))


def interface_matrix(k_from: complex, k_to: complex) -> TransferMatrix:
    """Continuity of field and derivative across a potential step.

    Maps amplitudes just left of the interface to amplitudes just right.
    det = k_from / k_to.
    """
    if k_to == 0:
        raise DomainError("marginal segment (k = 0) has no exponential basis")
    g = k_from / k_to
    m = 0.5 * np.array([[1.0 + g, 1.0 - g], [1.0 - g, 1.0 + g]], dtype=complex)
    return TransferMatrix(m)


def propagation_matrix(k: AxialWavenumber, length: float) -> TransferMatrix:
    """Carry amplitudes across a segment of the given length.

    Propagating: diag(e^{i k L}, e^{-i k L}), unit modulus.  Evanescent:
    diag(e^{-kappa L}, e^{+kappa L}), returned scaled by e^{-kappa L} with
    the growth kept in log_scale.
    """
    if length <= 0:
        raise DomainError("propagation length must be positive")
    if k.evanescent:
        s = k.value * length
        m = np.array([[np.exp(-2.0 * s), 0.0], [0.0, 1.0]], dtype=complex)
        return TransferMatrix(m, log_scale=s)
    ph = np.exp(1j * k.value * length)
    return TransferMatrix(np.array([[ph, 0.0], [0.0, np.conj(ph)]], dtype=complex))


def axial_wavenumber(
    omega: float,
    segment: Segment,
    particle: Particle,
    regime: str = "klein_gordon",
) -> AxialWavenumber:
    """Wavenumber in a segment at the given frequency.

    The relativistic branch delegates to the core dispersion inversion
    with the segment's cutoff; the Schrodinger branch uses the quadratic
    law with the same cutoff, so both tag evanescence identically.
    """
    if regime not in REGIMES:
        raise DomainError(f"unknown regime {regime!r}; expected one of {REGIMES}")
    cut = segment.cutoff(particle)
    if regime == "klein_gordon":
        return k_of_omega(omega, cut)
    # (hbar k)^2 = 2 m0 (hbar omega - hbar omega_c)
    ekin = HBAR * (omega - cut)
    k2 = 2.0 * particle.mass * ekin / HBAR**2
    if k2 >= 0:
        return AxialWavenumber(float(np.sqrt(k2)), False)
    return AxialWavenumber(float(np.sqrt(-k2)), True)


@dataclass(frozen=True)
class ScatteringResult:
    """Amplitudes and flux coefficients for one frequency.

    ln_T stays finite even when T underflows for thick barriers.
    """

    omega: float
    r: complex
    t: complex
    R: float
    T: float
    ln_T: float
    k_in: float
    k_out: float


def _segment_wavenumbers(segments, omega, particle, regime):
    ks = [axial_wavenumber(omega, s, particle, regime) for s in segments]
    for end, label in ((ks[0], "left"), (ks[-1], "right")):
        if end.evanescent or end.value == 0.0:
            raise NoPropagatingChannelError(
                f"{label} lead does not propagate at omega = {omega:.6g}"
            )
    # a marginal interior segment (exactly at cutoff) has no exponential
    # basis; nudge it infinitesimally to the evanescent side
    out = []
    for kw in ks:
        if kw.value == 0.0:
            out.append(AxialWavenumber(1e-13 * omega / C, True))
        else:
            out.append(kw)
    return out


def _validate_structure(segments):
    if len(segments) < 2:
        raise DomainError("need at least two segments (the two leads)")
    if not (segments[0].is_lead and segments[-1].is_lead):
        raise DomainError("first and last segments must be leads (length=None)")
    for s in segments[1:-1]:
        if s.is_lead:
            raise DomainError("interior segments must have finite length")


def scattering(
    particle: Particle,
    segments,
    omega: float,
    regime: str = "schrodinger",
) -> ScatteringResult:
    """Scatter a unit wave incident from the left lead at frequency omega."""
    _validate_structure(segments)
    ks = _segment_wavenumbers(segments, omega, particle, regime)
    k_in, k_out = ks[0].value, ks[-1].value

    total = interface_matrix(ks[0].as_complex, ks[1].as_complex)
    for j in range(1, len(segments) - 1):
        total = (
            interface_matrix(ks[j].as_complex, ks[j + 1].as_complex)
            @ propagation_matrix(ks[j], segments[j].length)
            @ total
        )

    m11 = total.m[1, 1]
    r = -total.m[1, 0] / m11
    # det(M) telescopes to k_in/k_out exactly; using the analytic value
    # keeps unitarity at rounding level
    det_full = k_in / k_out
    ln_abs_t = np.log(abs(det_full)) - np.log(abs(m11)) - total.log_scale
    t = det_full / m11 * np.exp(-total.log_scale)
    R = float(abs(r) ** 2)
    ln_T = float(np.log(k_out / k_in) + 2.0 * ln_abs_t)
    return ScatteringResult(
        omega=omega,
        r=complex(r),
        t=complex(t),
        R=R,
        T=float(np.exp(ln_T)),
        ln_T=ln_T,
        k_in=float(k_in),
        k_out=float(k_out),
    )


@dataclass
class TransmissionSpectrum:
    """Scattering results over a frequency grid.

    ``results[i]`` is None where a lead is below cutoff (a spectral gap,
    not a failure).
    """

    omegas: np.ndarray
    results: list

    @property
    def T(self) -> np.ndarray:
        return np.array([np.nan if r is None else r.T for r in self.results])

    @property
    def R(self) -> np.ndarray:
        return np.array([np.nan if r is None else r.R for r in self.results])

    @property
    def ln_T(self) -> np.ndarray:
        return np.array([np.nan if r is None else r.ln_T for r in self.results])

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["omega", "T", "R"])
            for w, res in zip(self.omegas, self.results):
                if res is None:
                    writer.writerow([repr(float(w)), "", ""])
                else:
                    writer.writerow([repr(float(w)), repr(res.T), repr(res.R)])

    def to_json(self, path):
        payload = {
            "omega": [float(w) for w in self.omegas],
            "T": [None if r is None else r.T for r in self.results],
            "R": [None if r is None else r.R for r in self.results],
            "ln_T": [None if r is None else r.ln_T for r in self.results],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def transmission_spectrum(
    particle: Particle,
    segments,
    omega_min: float,
    omega_max: float,
    n_points: int,
    regime: str = "schrodinger",
    workers: int | None = None,
) -> TransmissionSpectrum:
    """Sweep scattering over a uniform frequency grid.

    Frequencies where a lead is below cutoff yield gaps (None).  The sweep
    is embarrassingly parallel; ``workers`` > 1 fans it out over a thread
    pool.
    """
    if not (omega_max > omega_min):
        raise DomainError("need omega_max > omega_min")
    if n_points < 2:
        raise DomainError("need at least two sweep points")
    _validate_structure(segments)
    omegas = np.linspace(omega_min, omega_max, n_points)

    def solve(w):
        try:
            return scattering(particle, segments, float(w), regime=regime)
        except NoPropagatingChannelError:
            return None

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, omegas))
    else:
        results = [solve(w) for w in omegas]
    return TransmissionSpectrum(omegas=omegas, results=results)


def load_structure_csv(path) -> list:
    """Read a structure from CSV rows (length, V); 'lead' marks the leads."""
    segments = []
    with open(path, newline="") as fh:
        for record in csv.reader(fh):
            if not record or record[0].strip().startswith("#"):
                continue
            first = record[0].strip().lower()
            if first == "length":
                continue
            if len(record) < 2:
                raise DomainError(f"malformed structure row: {record!r}")
            v = float(record[1])
            if first == "lead":
                segments.append(lead(v))
            else:
                segments.append(Segment(V=v, length=float(first)))
    _validate_structure(segments)
    return segments


def save_structure_csv(segments, path):
    _validate_structure(segments)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["length", "V"])
        for s in segments:
            writer.writerow(["lead" if s.is_lead else repr(float(s.length)), repr(float(s.V))])
