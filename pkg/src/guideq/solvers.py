"""Finite-difference wave solvers used as cross-checks.

Three independent routes into the same physics:

* ``schrodinger_evolve``: Crank-Nicolson (implicit midpoint) stepping of
  i hbar dpsi/dt = [hbar*omega0 + V - (hbar^2/2m) d2/dx2] psi.  The
  rational update (I + i dt H/2hbar)^-1 (I - i dt H/2hbar) is unitary for
  Hermitian H, so the discrete norm sum(|psi|^2) dx is conserved to
  rounding.  The rest-energy term is a global phase and can be toggled.

* ``klein_gordon_evolve``: explicit leapfrog for
  d2phi/dt2 = c^2 d2phi/dx2 - omega_c(x)^2 phi with the spatially varying
  cutoff omega_c = omega0 + V/hbar.  Stable under the CFL bound; the
  staggered energy
      E = 1/2 |dphi/dt|^2 + 1/2 Re<phi_{n+1}, K phi_n>
  is conserved exactly by the scheme (up to rounding), so it is the right
  drift monitor.

* ``stationary_states``: tridiagonal eigensolve of the discretized
  Hamiltonian with hard-wall boundaries.

Both evolvers refuse grids that give fewer than 16 points per wavelength
of the initial data's spectral content.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal
from scipy.sparse.linalg import splu

from .core import Particle, PotentialProfile
from .errors import DomainError, ResolutionError, StabilityError
from .units import C, HBAR

BOUNDARIES = ("dirichlet", "periodic", "absorbing")
MIN_POINTS_PER_WAVELENGTH = 16


@dataclass
class WaveField:
    """A complex wave sample on a uniform grid at one instant."""

    x: np.ndarray
    psi: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.psi = np.asarray(self.psi, dtype=complex)
        if self.x.ndim != 1 or self.x.shape != self.psi.shape:
            raise DomainError("x and psi must be 1-d arrays of equal length")

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def norm(self) -> float:
        """Discrete norm sum(|psi|^2) dx, the invariant of the unitary stepper."""
        return float(np.sum(np.abs(self.psi) ** 2) * self.dx)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.psi) ** 2


@dataclass
class KGField:
    """Klein-Gordon field and its time derivative at one instant."""

    x: np.ndarray
    phi: np.ndarray
    phi_dot: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.phi = np.asarray(self.phi, dtype=complex)
        self.phi_dot = np.asarray(self.phi_dot, dtype=complex)
        if self.x.ndim != 1 or self.x.shape != self.phi.shape or self.x.shape != self.phi_dot.shape:
            raise DomainError("x, phi, phi_dot must be 1-d arrays of equal length")

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.phi) ** 2


@dataclass(frozen=True)
class EvolutionConfig:
    """Time stepping parameters shared by both evolvers.

    ``sponge_width``/``sponge_strength`` shape the absorbing layer and are
    only read when boundary="absorbing" (zero means pick automatically).
    """

    dt: float
    n_steps: int
    boundary: str = "dirichlet"
    store_every: int = 1
    sponge_width: float = 0.0
    sponge_strength: float = 0.0

    def __post_init__(self):
        if self.dt <= 0:
            raise DomainError("dt must be positive")
        if self.n_steps < 1:
            raise DomainError("n_steps must be at least 1")
        if self.boundary not in BOUNDARIES:
            raise DomainError(f"unknown boundary {self.boundary!r}; expected one of {BOUNDARIES}")
        if self.store_every < 1:
            raise DomainError("store_every must be at least 1")


def gaussian_packet(x, x0: float, sigma: float, k0: float = 0.0, t: float = 0.0) -> WaveField:
    """Normalized Gaussian wave packet centered at x0 with carrier k0."""
    if sigma <= 0:
        raise DomainError("packet width must be positive")
    x = np.asarray(x, dtype=float)
    psi = np.exp(-((x - x0) ** 2) / (4.0 * sigma**2) + 1j * k0 * (x - x0))
    psi /= np.sqrt(np.sum(np.abs(psi) ** 2) * (x[1] - x[0]))
    return WaveField(x=x, psi=psi, t=t)


def _spectral_kmax(x, data, tail=1e-4) -> float:
    """|k| containing all but ``tail`` of the power spectrum."""
    n = x.size
    spec = np.abs(np.fft.fft(np.asarray(data, dtype=complex))) ** 2
    k = 2.0 * np.pi * np.fft.fftfreq(n, float(x[1] - x[0]))
    order = np.argsort(np.abs(k))
    cum = np.cumsum(spec[order])
    if cum[-1] == 0:
        return 0.0
    cum /= cum[-1]
    idx = int(np.searchsorted(cum, 1.0 - tail))
    return float(np.abs(k[order])[min(idx, n - 1)])


def _check_resolution(x, data, label="initial data"):
    dx = float(x[1] - x[0])
    k_max = _spectral_kmax(x, data)
    if k_max > 0 and 2.0 * np.pi / k_max < MIN_POINTS_PER_WAVELENGTH * dx:
        have = 2.0 * np.pi / (k_max * dx)
        raise ResolutionError(
            f"{label} has spectral content near k = {k_max:.4g} resolved by only "
            f"{have:.1f} points per wavelength; need >= {MIN_POINTS_PER_WAVELENGTH}. "
            f"Refine dx below {2.0 * np.pi / (k_max * MIN_POINTS_PER_WAVELENGTH):.4g}."
        )


def _potential_on_grid(profile, x):
    if profile is None:
        return np.zeros_like(x)
    return np.asarray(profile(x), dtype=float)


def _sponge(x, config) -> np.ndarray:
    """Cubic absorbing ramp, zero in the interior."""
    span = float(x[-1] - x[0])
    width = config.sponge_width if config.sponge_width > 0 else 0.1 * span
    strength = config.sponge_strength
    w = np.zeros_like(x)
    left = x < x[0] + width
    right = x > x[-1] - width
    w[left] = ((x[0] + width - x[left]) / width) ** 3
    w[right] = ((x[right] - (x[-1] - width)) / width) ** 3
    return strength * w


def _laplacian_matrix(n, dx, boundary):
    main = np.full(n, -2.0)
    off = np.ones(n - 1)
    lap = sp.diags_array((off, main, off), offsets=(-1, 0, 1), format="lil")
    if boundary == "periodic":
        lap[0, n - 1] = 1.0
        lap[n - 1, 0] = 1.0
    return lap.tocsr() / dx**2


def schrodinger_evolve(
    psi0: WaveField,
    profile: PotentialProfile | None,
    particle: Particle,
    config: EvolutionConfig,
    include_rest_energy: bool = True,
) -> list:
    """Evolve psi0 with Crank-Nicolson; returns snapshots every store_every steps.

    The first snapshot is the (normalized) initial field, the last is the
    final step.  With boundary="absorbing" a negative imaginary potential
    drains outgoing waves and the norm is no longer conserved.
    """
    x = psi0.x
    n, dx = x.size, psi0.dx
    _check_resolution(x, psi0.psi)
    V = _potential_on_grid(profile, x)

    psi = psi0.psi.astype(complex)
    nrm = np.sqrt(np.sum(np.abs(psi) ** 2) * dx)
    if nrm == 0:
        raise DomainError("initial wave is identically zero")
    psi = psi / nrm

    diag = V.astype(complex)
    # the rest term hbar*omega0 commutes with H, so exp(-i omega0 dt) applied
    # after each step integrates it exactly instead of through the Cayley form
    rest_phase = (
        np.exp(-1j * particle.rest_frequency * config.dt) if include_rest_energy else 1.0
    )
    if config.boundary == "absorbing":
        strength = config.sponge_strength
        if strength <= 0:
            k_ref = max(_spectral_kmax(x, psi), 2.0 * np.pi / (x[-1] - x[0]))
            strength = (HBAR * k_ref) ** 2 / (2.0 * particle.mass)
        cfg = EvolutionConfig(
            dt=config.dt,
            n_steps=config.n_steps,
            boundary=config.boundary,
            store_every=config.store_every,
            sponge_width=config.sponge_width,
            sponge_strength=strength,
        )
        diag = diag - 1j * _sponge(x, cfg)

    lap_boundary = "periodic" if config.boundary == "periodic" else "dirichlet"
    hmat = (
        -(HBAR**2) / (2.0 * particle.mass) * _laplacian_matrix(n, dx, lap_boundary)
        + sp.diags_array(diag)
    )
    alpha = 1j * config.dt / (2.0 * HBAR)
    ident = sp.identity(n, dtype=complex, format="csr")
    a_mat = (ident + alpha * hmat).tocsc()
    b_mat = (ident - alpha * hmat).tocsr()
    lu = splu(a_mat)

    fields = [WaveField(x=x, psi=psi.copy(), t=psi0.t)]
    for step in range(1, config.n_steps + 1):
        psi = lu.solve(b_mat @ psi)
        if include_rest_energy:
            psi = psi * rest_phase
        if step % config.store_every == 0 or step == config.n_steps:
            fields.append(WaveField(x=x, psi=psi.copy(), t=psi0.t + step * config.dt))
    return fields


@dataclass
class KGRun:
    """Klein-Gordon evolution output with its staggered energy history."""

    fields: list
    energy_t: np.ndarray = field(default_factory=lambda: np.empty(0))
    energy: np.ndarray = field(default_factory=lambda: np.empty(0))


def klein_gordon_evolve(
    field0: KGField,
    profile: PotentialProfile | None,
    particle: Particle,
    config: EvolutionConfig,
) -> KGRun:
    """Leapfrog the Klein-Gordon field; refuses time steps above the CFL bound."""
    x = field0.x
    n, dx = x.size, field0.dx
    _check_resolution(x, field0.phi)
    V = _potential_on_grid(profile, x)
    cutoff = particle.rest_frequency + V / HBAR
    if np.any(cutoff <= 0):
        raise DomainError("potential drives the cutoff non-positive")

    dt = config.dt
    dt_max = 2.0 / np.sqrt(4.0 * C**2 / dx**2 + float(np.max(cutoff)) ** 2)
    if dt > dt_max:
        raise StabilityError(
            f"dt = {dt:.6g} exceeds the CFL bound {dt_max:.6g} (about dx/c); "
            "leapfrog would be unstable"
        )

    if config.boundary == "absorbing":
        strength = config.sponge_strength if config.sponge_strength > 0 else float(np.max(cutoff))
        cfg = EvolutionConfig(
            dt=dt,
            n_steps=config.n_steps,
            boundary=config.boundary,
            store_every=config.store_every,
            sponge_width=config.sponge_width,
            sponge_strength=strength,
        )
        gamma = _sponge(x, cfg)
    else:
        gamma = None

    periodic = config.boundary == "periodic"

    def lap(f):
        if periodic:
            return (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) / dx**2
        out = np.empty_like(f)
        out[1:-1] = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / dx**2
        out[0] = (f[1] - 2.0 * f[0]) / dx**2
        out[-1] = (f[-2] - 2.0 * f[-1]) / dx**2
        return out

    def stiffness(f):
        return -(C**2) * lap(f) + cutoff**2 * f

    def advance(f_old, f_cur):
        accel = -stiffness(f_cur)
        if gamma is None:
            return 2.0 * f_cur - f_old + dt**2 * accel
        return (
            2.0 * f_cur - (1.0 - 0.5 * gamma * dt) * f_old + dt**2 * accel
        ) / (1.0 + 0.5 * gamma * dt)

    def staggered_energy(f_old, f_new):
        kinetic = 0.5 * np.sum(np.abs((f_new - f_old) / dt) ** 2)
        cross = 0.5 * np.sum(np.real(np.conj(f_new) * stiffness(f_old)))
        return float((kinetic + cross) * dx)

    phi_old = field0.phi.astype(complex)
    # second-order accurate first step from the initial derivative
    phi_cur = phi_old + dt * field0.phi_dot - 0.5 * dt**2 * stiffness(phi_old)

    fields = [KGField(x=x, phi=phi_old.copy(), phi_dot=field0.phi_dot.copy(), t=field0.t)]
    energy_t = [field0.t + 0.5 * dt]
    energies = [staggered_energy(phi_old, phi_cur)]

    t0 = field0.t
    # at the top of iteration `step` phi_cur holds the field at step*dt;
    # advancing first lets every snapshot use a centered time derivative
    for step in range(1, config.n_steps + 1):
        phi_next = advance(phi_old, phi_cur)
        if step % config.store_every == 0 or step == config.n_steps:
            fields.append(
                KGField(
                    x=x,
                    phi=phi_cur.copy(),
                    phi_dot=(phi_next - phi_old) / (2.0 * dt),
                    t=t0 + step * dt,
                )
            )
            energy_t.append(t0 + (step + 0.5) * dt)
            energies.append(staggered_energy(phi_cur, phi_next))
        phi_old, phi_cur = phi_cur, phi_next
    return KGRun(fields=fields, energy_t=np.array(energy_t), energy=np.array(energies))


def apply_hamiltonian(
    field: WaveField,
    profile: PotentialProfile | None,
    particle: Particle,
    include_rest_energy: bool = False,
    boundary: str = "dirichlet",
) -> np.ndarray:
    """H psi on the grid, same stencil the evolver and eigensolver use."""
    x, psi, dx = field.x, field.psi, field.dx
    V = _potential_on_grid(profile, x)
    if boundary == "periodic":
        lap = (np.roll(psi, -1) - 2.0 * psi + np.roll(psi, 1)) / dx**2
    else:
        lap = np.empty_like(psi)
        lap[1:-1] = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / dx**2
        lap[0] = (psi[1] - 2.0 * psi[0]) / dx**2
        lap[-1] = (psi[-2] - 2.0 * psi[-1]) / dx**2
    out = -(HBAR**2) / (2.0 * particle.mass) * lap + V * psi
    if include_rest_energy:
        out = out + HBAR * particle.rest_frequency * psi
    return out


def stationary_states(
    profile: PotentialProfile,
    particle: Particle,
    n_states: int,
    box: bool = False,
):
    """Lowest bound states of the discretized Hamiltonian.

    Returns (energies, psi) with psi[i] the i-th normalized state,
    sum(|psi|^2) dx = 1.  Hard walls are imposed at the grid edges; unless
    box=True the states must also be confined by the potential itself
    (energy below the lower domain edge), otherwise the walls, not the
    physics, set the spectrum and the call is refused.
    """
    x = profile.x
    V = profile.values
    dx = float(x[1] - x[0])
    n = x.size
    if n_states < 1:
        raise DomainError("n_states must be at least 1")
    if n_states > n:
        raise DomainError(f"asked for {n_states} states on a {n}-point grid")
    kin = HBAR**2 / (2.0 * particle.mass * dx**2)
    energies, vec = eigh_tridiagonal(
        2.0 * kin + V,
        np.full(n - 1, -kin),
        select="i",
        select_range=(0, n_states - 1),
    )
    psi = (vec / np.sqrt(dx)).T.copy()
    # fix an overall sign: make each state positive at its first antinode
    for row in psi:
        peak = np.argmax(np.abs(row))
        if row[peak] < 0:
            row *= -1.0
    if not box:
        edge = min(V[0], V[-1])
        loose = energies >= edge
        if np.any(loose):
            raise DomainError(
                f"state {int(np.argmax(loose))} has energy {energies[np.argmax(loose)]:.6g} "
                f"above the domain-edge potential {edge:.6g}; the hard walls would shape it. "
                "Widen the domain or pass box=True to request particle-in-a-box states."
            )
    return energies, psi


# ---------------------------------------------------------------------------
# file output

def write_snapshot_csv(field, path) -> None:
    """Write one snapshot as CSV: x, re, im, density."""
    if isinstance(field, WaveField):
        values = field.psi
        names = ["x", "re_psi", "im_psi", "density"]
    else:
        values = field.phi
        names = ["x", "re_phi", "im_phi", "density"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for xi, vi in zip(field.x, values):
            writer.writerow(
                [repr(float(xi)), repr(float(vi.real)), repr(float(vi.imag)), repr(float(abs(vi) ** 2))]
            )


def profile_fingerprint(profile: PotentialProfile | None) -> str:
    """Stable sha256 over the sampled potential, for run manifests."""
    if profile is None:
        return hashlib.sha256(b"free").hexdigest()
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(profile.x, dtype=float).tobytes())
    h.update(np.ascontiguousarray(profile.values, dtype=float).tobytes())
    return h.hexdigest()


def write_run_manifest(path, x, config, profile=None, extra=None) -> None:
    """JSON sidecar describing an evolution run's grid and stepping."""
    x = np.asarray(x, dtype=float)
    doc = {
        "grid": {
            "n": int(x.size),
            "x_min": float(x[0]),
            "x_max": float(x[-1]),
            "dx": float(x[1] - x[0]),
        },
        "dt": config.dt,
        "n_steps": config.n_steps,
        "boundary": config.boundary,
        "store_every": config.store_every,
        "potential_sha256": profile_fingerprint(profile),
    }
    if extra:
        doc.update(extra)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
