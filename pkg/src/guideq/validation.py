"""End-to-end physics validation suite.

Each check pits at least two independent routes against each other: a
closed form against a numerical evolution, a ray picture against a wave
picture, a textbook constant against the package's own chain of
definitions.  The CLI ``validate`` subcommand and the acceptance tests
both run these, so the bar is identical everywhere.

Every check builds its own grids and returns a CriterionResult; nothing
here mutates package state.  Runtimes range from microseconds to a few
seconds (the packet-tunneling and Klein-Gordon scans dominate).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core, orbits, qpotential, raytrace, scatter, solvers
from .core import ELECTRON, PotentialProfile
from .units import C, HBAR, LENGTH_SI, FINE_STRUCTURE, energy_to_ev

# textbook reference values, rounded as commonly quoted
REFERENCE_GUIDE_WIDTH_M = 1.213e-12  # half the electron Compton wavelength
REFERENCE_BOHR_RADIUS_M = 5.292e-11
REFERENCE_HYDROGEN_E1_EV = -13.606


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str


def _verdict(index, name, parts) -> CriterionResult:
    """parts: list of (label, ok, text)."""
    passed = all(ok for _, ok, _ in parts)
    detail = "; ".join(f"{label}: {text}" for label, _, text in parts)
    return CriterionResult(index=index, name=name, passed=passed, detail=detail)


def check_guide_width() -> CriterionResult:
    a = core.width_from_cutoff(ELECTRON.rest_frequency) * LENGTH_SI
    rel = abs(a - REFERENCE_GUIDE_WIDTH_M) / REFERENCE_GUIDE_WIDTH_M
    return _verdict(
        1,
        "free electron guide width",
        [("a vs 1.213 pm", rel < 1e-3, f"{a:.6e} m, rel dev {rel:.2e} (< 1e-3)")],
    )


def check_dispersion_identity(n: int = 10_000, seed: int = 20260819) -> CriterionResult:
    rng = np.random.default_rng(seed)
    cutoffs = rng.uniform(0.2, 5.0, n)
    omegas = cutoffs * (1.0 + rng.uniform(1e-6, 3.0, n))
    worst = 0.0
    for wc, om in zip(cutoffs, omegas):
        k = core.k_of_omega(om, wc).value
        prod = core.group_velocity(om, k) * core.phase_velocity(om, k)
        worst = max(worst, abs(prod - C**2) / C**2)
    return _verdict(
        2,
        "v_g * v_ph = c^2",
        [(f"worst of {n} samples", worst < 1e-12, f"rel dev {worst:.2e} (< 1e-12)")],
    )


def check_ray_kinematics() -> CriterionResult:
    om0 = ELECTRON.rest_frequency
    beta = 0.6
    omega = om0 / np.sqrt(1.0 - beta**2)
    v_g = beta * C
    omega_clock = om0 * np.sqrt(1.0 - beta**2)
    period = raytrace.zigzag_period(ELECTRON, v_g)
    n_periods = 120
    duration = n_periods * period
    span = v_g * duration * 1.05
    x = np.linspace(0.0, span, 64)
    geom = core.potential_to_geometry(ELECTRON, PotentialProfile(x, np.zeros_like(x)))
    tr = raytrace.trace(omega, geom, duration)

    v_eff = tr.effective_velocity
    rel_v = abs(v_eff - v_g) / v_g

    # consecutive wall hits are half a zigzag apart, in space and in time
    refl = np.array(tr.reflections, dtype=int)
    t_hits, x_hits = tr.t[refl], tr.x[refl]
    spans = len(t_hits) - 1
    measured_length = 2.0 * (x_hits[-1] - x_hits[0]) / spans
    rel_p = abs(measured_length - period) / period

    rate = spans / (t_hits[-1] - t_hits[0])
    rel_r = abs(rate - omega_clock / np.pi) / (omega_clock / np.pi)

    return _verdict(
        3,
        "zigzag kinematics over 120 periods",
        [
            ("axial velocity vs v_g", rel_v < 1e-3, f"rel dev {rel_v:.2e} (< 1e-3)"),
            ("repeat length vs closed form", rel_p < 1e-3, f"rel dev {rel_p:.2e} (< 1e-3)"),
            ("bounce rate vs clock/pi", rel_r < 5e-3, f"rel dev {rel_r:.2e} (< 5e-3)"),
        ],
    )


def _rectangular_t_analytic(e, v0, length, m=1.0):
    k = np.sqrt(2.0 * m * e) / HBAR
    kappa = np.sqrt(2.0 * m * (v0 - e)) / HBAR
    s = np.sinh(kappa * length)
    return 1.0 / (1.0 + (k**2 + kappa**2) ** 2 * s**2 / (4.0 * k**2 * kappa**2))


def check_rectangular_barrier() -> CriterionResult:
    e, v0, length = 1.0, 2.0, 1.0
    omega = ELECTRON.rest_frequency + e / HBAR
    segs = [scatter.lead(), scatter.Segment(V=v0, length=length), scatter.lead()]
    res = scatter.scattering(ELECTRON, segs, omega, regime="schrodinger")
    t_exact = _rectangular_t_analytic(e, v0, length)
    dev_tm = abs(res.T - t_exact)

    # narrow-band packet through the same barrier, transmitted fraction;
    # grid offset half a cell so the barrier edges fall between nodes and
    # the sampled top-hat covers exactly [0, L]
    dx = 0.0625
    x = np.arange(-384.0 + dx / 2.0, 384.0, dx)
    sigma, x0 = 25.0, -120.0
    k0 = np.sqrt(2.0 * ELECTRON.mass * e) / HBAR
    barrier = np.where((x > 0.0) & (x < length), v0, 0.0)
    profile = PotentialProfile(x, barrier)
    packet = solvers.gaussian_packet(x, x0=x0, sigma=sigma, k0=k0)
    cfg = solvers.EvolutionConfig(dt=0.1, n_steps=1700, boundary="dirichlet", store_every=1700)
    final = solvers.schrodinger_evolve(packet, profile, ELECTRON, cfg, include_rest_energy=False)[-1]
    transmitted = float(np.sum(final.density[x > length]) * dx)
    dev_packet = abs(transmitted - t_exact) / t_exact

    # evanescent decay law: d(ln T)/dL -> -2 kappa for an opaque barrier
    kappa = np.sqrt(2.0 * ELECTRON.mass * (v0 - e)) / HBAR
    lnts = []
    for ell in (6.0, 8.0):
        segs_l = [scatter.lead(), scatter.Segment(V=v0, length=ell), scatter.lead()]
        lnts.append(scatter.scattering(ELECTRON, segs_l, omega, regime="schrodinger").ln_T)
    slope = (lnts[1] - lnts[0]) / 2.0
    dev_slope = abs(slope + 2.0 * kappa) / (2.0 * kappa)

    return _verdict(
        4,
        "rectangular barrier triple agreement",
        [
            ("transfer matrix vs closed form", dev_tm < 1e-8, f"|dT| {dev_tm:.2e} (< 1e-8)"),
            ("packet transmission", dev_packet < 0.02, f"T {transmitted:.5f} vs {t_exact:.5f}, rel {dev_packet:.2e} (< 2e-2)"),
            ("ln T slope vs -2 kappa", dev_slope < 0.02, f"slope {slope:.5f} vs {-2*kappa:.5f}, rel {dev_slope:.2e} (< 2e-2)"),
        ],
    )


def check_unitarity_reciprocity() -> CriterionResult:
    segs = [
        scatter.lead(),
        scatter.Segment(V=1.5, length=0.8),
        scatter.Segment(V=-0.5, length=1.3),
        scatter.Segment(V=2.2, length=0.6),
        scatter.lead(),
    ]
    energies = np.linspace(0.05, 4.0, 200)
    omegas = ELECTRON.rest_frequency + energies / HBAR
    worst_u = 0.0
    worst_rec = 0.0
    for om in omegas:
        fwd = scatter.scattering(ELECTRON, segs, om, regime="schrodinger")
        rev = scatter.scattering(ELECTRON, segs[::-1], om, regime="schrodinger")
        worst_u = max(worst_u, abs(fwd.R + fwd.T - 1.0))
        worst_rec = max(worst_rec, abs(fwd.T - rev.T))
    return _verdict(
        5,
        "unitarity and reciprocity, 5-segment structure",
        [
            ("max |R+T-1| over 200 pts", worst_u < 1e-10, f"{worst_u:.2e} (< 1e-10)"),
            ("max |T - T_reversed|", worst_rec < 1e-10, f"{worst_rec:.2e} (< 1e-10)"),
        ],
    )


def check_bohr_levels() -> CriterionResult:
    first = orbits.quantize_nonrelativistic(1)
    r1 = first.r * LENGTH_SI
    e1 = energy_to_ev(first.energy)
    rel_r = abs(r1 - REFERENCE_BOHR_RADIUS_M) / REFERENCE_BOHR_RADIUS_M
    rel_e = abs(e1 - REFERENCE_HYDROGEN_E1_EV) / abs(REFERENCE_HYDROGEN_E1_EV)

    en2 = np.array([orbits.quantize_nonrelativistic(n).energy * n**2 for n in range(1, 11)])
    spread = float(np.max(np.abs(en2 - en2[0])) / np.abs(en2[0]))

    r_nr = orbits.quantize_nonrelativistic(1).r
    r_rel = orbits.quantize_relativistic(1).r
    shift = abs(r_rel - r_nr) / r_nr
    shift_ratio = shift / FINE_STRUCTURE**2

    worst_res = 0.0
    for n in (1, 2, 3):
        worst_res = max(worst_res, abs(orbits.zigzag_consistency(orbits.quantize_relativistic(n), n)))

    return _verdict(
        6,
        "Bohr orbit quantization",
        [
            ("r_1 vs 52.92 pm", rel_r < 1e-3, f"{r1:.6e} m, rel {rel_r:.2e} (< 1e-3)"),
            ("E_1 vs -13.606 eV", rel_e < 1e-3, f"{e1:.6f} eV, rel {rel_e:.2e} (< 1e-3)"),
            ("E_n n^2 constancy", spread < 1e-12, f"spread {spread:.2e} (< 1e-12)"),
            ("relativistic r shift ~ alpha^2", 0.9 < shift_ratio < 1.1, f"shift/alpha^2 = {shift_ratio:.4f} (in [0.9, 1.1])"),
            ("overtake/zigzag residual n<=3", worst_res < 1e-8, f"{worst_res:.2e} (< 1e-8)"),
        ],
    )


def check_quantum_potential_routes() -> CriterionResult:
    v0, w, e_tot = 0.3, 2.0, 0.5
    x = np.arange(-14.0, 14.0 + 1e-9, 4e-3)
    profile = PotentialProfile(x, v0 * np.exp(-(x**2) / (2.0 * w**2)))
    omega = ELECTRON.rest_frequency + e_tot / HBAR
    kin = qpotential.kinetic_energy(omega, profile, ELECTRON)
    u_local = qpotential.quantum_potential_local(kin, profile, ELECTRON).value

    density = qpotential.wkb_density(kin)
    amp = np.sqrt(density.p)
    u_amp = qpotential.bohm_quantum_potential(x, amp, ELECTRON).value

    both = np.isfinite(u_local) & np.isfinite(u_amp)
    scale = np.nanmax(np.abs(u_amp[both]))
    dev = float(np.max(np.abs(u_local[both] - u_amp[both])) / scale)

    # a power-of-two factor shifts exponents only, so the R''/R cancellation
    # is bitwise and the comparison probes the algebra, not FD rounding
    u_scaled = qpotential.bohm_quantum_potential(x, 256.0 * amp, ELECTRON).value
    dev_scale = float(np.nanmax(np.abs(u_scaled[both] - u_amp[both])) / scale)

    return _verdict(
        7,
        "quantum potential, closed form vs amplitude route",
        [
            ("local vs R = sqrt(p)", dev < 1e-6, f"rel dev {dev:.2e} (< 1e-6)"),
            ("amplitude-scale invariance", dev_scale < 1e-12, f"rel dev {dev_scale:.2e} (< 1e-12)"),
        ],
    )


def check_continuity_convergence() -> CriterionResult:
    rms = []
    m = ELECTRON.mass
    for ref in (1, 2, 4):
        dx = 0.1 / ref
        dt = 0.04 / ref
        x = np.arange(-60.0, 60.0, dx)
        packet = solvers.gaussian_packet(x, x0=-10.0, sigma=4.0, k0=0.7)
        profile = PotentialProfile(x, 0.025 * m * x**2)
        n_steps = int(round(2.0 / dt)) + 1
        cfg = solvers.EvolutionConfig(dt=dt, n_steps=n_steps, store_every=n_steps - 1)
        fl = solvers.schrodinger_evolve(packet, profile, ELECTRON, cfg, include_rest_energy=False)
        _, res = qpotential.continuity_residual(fl[-2], fl[-1], ELECTRON)
        core_band = (x > -40.0) & (x < 40.0)
        rms.append(float(np.sqrt(np.mean(res[core_band] ** 2))))
    orders = [float(np.log2(rms[i] / rms[i + 1])) for i in range(2)]
    shrinking = rms[0] > rms[1] > rms[2]
    order_ok = 1.8 < orders[-1] < 2.2
    return _verdict(
        8,
        "continuity residual, 3-level refinement",
        [
            ("residual shrinks", shrinking, f"rms {rms[0]:.2e} -> {rms[1]:.2e} -> {rms[2]:.2e}"),
            ("observed order", order_ok, f"orders {orders[0]:.3f}, {orders[1]:.3f} (last in (1.8, 2.2))"),
        ],
    )


def _kg_centroid_speed(k0: float) -> float:
    om0 = ELECTRON.rest_frequency
    dx, dt, t_end = 0.1, 0.05, 40.0
    x = np.arange(-120.0, 120.0, dx)
    phi0 = np.exp(-((x + 40.0) ** 2) / (4.0 * 10.0**2) + 1j * k0 * x)
    k = 2.0 * np.pi * np.fft.fftfreq(x.size, dx)
    wk = np.sqrt(om0**2 + (C * k) ** 2)
    phid0 = np.fft.ifft(-1j * wk * np.fft.fft(phi0))
    n_steps = int(round(t_end / dt))
    run = solvers.klein_gordon_evolve(
        solvers.KGField(x, phi0, phid0),
        None,
        ELECTRON,
        solvers.EvolutionConfig(dt=dt, n_steps=n_steps, boundary="periodic", store_every=n_steps // 8),
    )
    cens, ts = [], []
    for f in run.fields:
        d = f.density
        d = d / (np.sum(d) * dx)
        cens.append(float(np.sum(f.x * d) * dx))
        ts.append(f.t)
    return float(np.polyfit(ts, cens, 1)[0])


def check_kg_group_velocity() -> CriterionResult:
    om0 = ELECTRON.rest_frequency
    ks = np.array([0.4, 0.7, 1.0, 1.3, 1.6]) * om0 / C
    worst = 0.0
    dev_root2 = None
    for k0 in ks:
        v = _kg_centroid_speed(k0)
        vg = C**2 * k0 / np.sqrt(om0**2 + (C * k0) ** 2)
        rel = abs(v - vg) / vg
        worst = max(worst, rel)
        if abs(k0 - om0 / C) < 1e-12:
            dev_root2 = abs(v - C / np.sqrt(2.0)) / (C / np.sqrt(2.0))
    return _verdict(
        9,
        "Klein-Gordon packet group velocity",
        [
            ("speed at k = omega0/c vs c/sqrt2", dev_root2 < 0.01, f"rel dev {dev_root2:.2e} (< 1e-2)"),
            ("5-point dispersion scan", worst < 0.01, f"worst rel dev {worst:.2e} (< 1e-2)"),
        ],
    )


def check_wkb_eigenstate_density() -> CriterionResult:
    m = ELECTRON.mass
    big_omega = 1.0
    n_state = 20
    x = np.arange(-14.0, 14.0 + 1e-9, 0.01)
    profile = PotentialProfile(x, 0.5 * m * big_omega**2 * x**2)
    energies, psis = solvers.stationary_states(profile, ELECTRON, n_state + 1)
    e_n = float(energies[n_state])
    dens = np.abs(psis[n_state]) ** 2

    # smooth the oscillatory |psi|^2 over the local de Broglie scale and put
    # the reference through the identical smoothing; two half-wavelength box
    # passes make a triangular kernel, which keeps the cancellation clean
    # even where the wavelength drifts toward the turning points
    e_kin = np.maximum(e_n - profile.values, 1e-9)
    lam = 2.0 * np.pi * HBAR / np.sqrt(2.0 * m * e_kin)

    def box_average(y):
        cs = np.concatenate([[0.0], np.cumsum(y)])
        lo = np.searchsorted(x, x - lam / 4.0)
        hi = np.minimum(np.searchsorted(x, x + lam / 4.0), x.size)
        return (cs[hi] - cs[lo]) / np.maximum(hi - lo, 1)

    def smooth(y):
        return box_average(box_average(y))

    averaged = smooth(dens)

    omega = ELECTRON.rest_frequency + e_n / HBAR
    kin = qpotential.kinetic_energy(omega, profile, ELECTRON)
    wkb = np.nan_to_num(qpotential.wkb_density(kin).p, nan=0.0)
    wkb_smooth = smooth(wkb)

    x_turn = np.sqrt(2.0 * e_n / (m * big_omega**2))
    window = np.abs(x) <= 0.75 * x_turn
    dx = float(x[1] - x[0])
    a = averaged[window] / (np.sum(averaged[window]) * dx)
    b = wkb_smooth[window] / (np.sum(wkb_smooth[window]) * dx)
    dev = float(np.max(np.abs(a - b) / b))
    return _verdict(
        10,
        "WKB dwell density vs harmonic eigenstate n=20",
        [("max rel dev inside 0.75 x_turn", dev < 0.05, f"{dev:.2e} (< 5e-2)")],
    )


ALL_CHECKS = (
    check_guide_width,
    check_dispersion_identity,
    check_ray_kinematics,
    check_rectangular_barrier,
    check_unitarity_reciprocity,
    check_bohr_levels,
    check_quantum_potential_routes,
    check_continuity_convergence,
    check_kg_group_velocity,
    check_wkb_eigenstate_density,
)


def run_validation(indices=None) -> list:
    """Run the numbered checks (all by default), in order."""
    wanted = set(indices) if indices else None
    results = []
    for i, fn in enumerate(ALL_CHECKS, start=1):
        if wanted is None or i in wanted:
            results.append(fn())
    return results
