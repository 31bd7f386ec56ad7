"""Transmission through one barrier and through a resonant pair.

The transfer matrix treats each barrier slab as a stretch of guide past
cutoff: the wave decays but keeps a finite amplitude on the far side.  For
a single rectangle the result lands on the cosh/sinh closed form.  Putting
two barriers back to back carves sharp resonances where the well between
them traps a standing wave, transmission swinging between near 1 and
nearly nothing.

Writes tunneling_spectra.png next to this file.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from guideq import ELECTRON, Segment, transmission_spectrum
from guideq.scatter import lead
from guideq.scenario import energy_to_omega

HERE = pathlib.Path(__file__).resolve().parent

BARRIER_V = 2.0      # natural energy units
BARRIER_L = 1.0
E_MIN, E_MAX, N_E = 0.05, 4.0, 600


def closed_form(E):
    """cosh/sinh transmission for the single rectangle, E in (0, inf)."""
    E = np.asarray(E, dtype=float)
    out = np.empty_like(E)
    k = np.sqrt(2.0 * E)
    under = E < BARRIER_V
    kap = np.sqrt(2.0 * (BARRIER_V - E[under]))
    s = np.sinh(kap * BARRIER_L)
    out[under] = 1.0 / (1.0 + (k[under] ** 2 + kap**2) ** 2 * s**2 / (4 * k[under] ** 2 * kap**2))
    k2 = np.sqrt(2.0 * np.abs(E[~under] - BARRIER_V))
    s2 = np.sin(k2 * BARRIER_L)
    denom = 4 * k[~under] ** 2 * k2**2
    out[~under] = 1.0 / (1.0 + (k[~under] ** 2 - k2**2) ** 2 * s2**2 / np.where(denom > 0, denom, np.inf))
    return out


single = [lead(), Segment(V=BARRIER_V, length=BARRIER_L), lead()]
double = [
    lead(),
    Segment(V=3.0, length=0.6),
    Segment(V=0.0, length=2.4),
    Segment(V=3.0, length=0.6),
    lead(),
]

energies = np.linspace(E_MIN, E_MAX, N_E)
w_lo = energy_to_omega(E_MIN, ELECTRON)
w_hi = energy_to_omega(E_MAX, ELECTRON)

sp1 = transmission_spectrum(ELECTRON, single, w_lo, w_hi, N_E)
sp2 = transmission_spectrum(ELECTRON, double, w_lo, w_hi, N_E)

ref = closed_form(energies)
worst = np.nanmax(np.abs(sp1.T - ref))
print(f"single barrier: worst |T - closed form| over {N_E} points: {worst:.3e}")
i_res = int(np.nanargmax(sp2.T[energies < 1.0]))
print(f"double barrier: first resonance near E = {energies[i_res]:.3f}, T = {sp2.T[i_res]:.4f}")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))

ax1.plot(energies, sp1.T, label="transfer matrix")
ax1.plot(energies, ref, "--", label="closed form")
ax1.axvline(BARRIER_V, color="gray", lw=0.8)
ax1.set_xlabel("energy above rest (natural)")
ax1.set_ylabel("T")
ax1.legend()
ax1.set_title("single rectangular barrier")

ax2.semilogy(energies, np.clip(sp2.T, 1e-8, None))
ax2.set_xlabel("energy above rest (natural)")
ax2.set_ylabel("T (log)")
ax2.set_title("double barrier: trapped-mode resonances")

fig.tight_layout()
out = HERE / "tunneling_spectra.png"
fig.savefig(out, dpi=120)
print(f"wrote {out}")
