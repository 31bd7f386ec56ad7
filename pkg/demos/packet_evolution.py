"""Wave packets on the grid: a barrier collision and a relativistic check.

Two short runs.  First a Schrodinger packet hits the standard rectangle
(V0 = 2, L = 1) and splits; the norm that ends up past the barrier should
sit near the transfer-matrix transmission at the packet's carrier energy.
Second, a Klein-Gordon packet launched at k = omega_0 / c travels at
c / sqrt(2), the group velocity the full dispersion predicts and the
nonrelativistic equation misses.

Writes packet_evolution.png next to this file.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from guideq import (
    EvolutionConfig,
    PotentialProfile,
    Segment,
    gaussian_packet,
    klein_gordon_evolve,
    schrodinger_evolve,
)
from guideq.core import C, ELECTRON, HBAR
from guideq.scatter import lead, scattering
from guideq.solvers import KGField

HERE = pathlib.Path(__file__).resolve().parent

# --- Schrodinger packet on the rectangle -----------------------------------
X = np.arange(-90.0, 90.0, 0.06)
V0, L = 2.0, 1.0
K0, SIGMA = 1.6, 9.0   # carrier energy k^2/2 = 1.28, above half the barrier

vals = np.where(np.abs(X) < L / 2, V0, 0.0)
profile = PotentialProfile(X, vals)
psi0 = gaussian_packet(X, -35.0, SIGMA, K0)
cfg = EvolutionConfig(dt=0.02, n_steps=3000, store_every=750)
snaps = schrodinger_evolve(psi0, profile, ELECTRON, cfg)

right = X > 2.0   # comfortably past the barrier edge
dens_last = np.abs(snaps[-1].psi) ** 2
T_packet = float(np.trapezoid(dens_last[right], X[right]))

E0 = HBAR**2 * K0**2 / (2 * ELECTRON.mass)
structure = [lead(), Segment(V=V0, length=L), lead()]
omega = ELECTRON.rest_frequency + E0 / HBAR
T_matrix = scattering(ELECTRON, structure, omega).T
print(f"packet transmission {T_packet:.4f} vs transfer matrix {T_matrix:.4f} "
      f"(packet has finite energy spread)")
print(f"norm drift over the run: {abs(snaps[-1].norm - snaps[0].norm):.2e}")

# --- Klein-Gordon packet at a relativistic k --------------------------------
XK = np.arange(-300.0, 300.0, 0.25)
k_rel = ELECTRON.rest_frequency / C
phi0 = gaussian_packet(XK, -80.0, 25.0, k_rel)

# single-branch start: phi_dot = -i omega(k) phi, done spectrally
kk = 2.0 * np.pi * np.fft.fftfreq(XK.size, XK[1] - XK[0])
wk = np.sqrt(ELECTRON.rest_frequency**2 + (C * kk) ** 2)
phi_dot0 = np.fft.ifft(-1j * wk * np.fft.fft(phi0.psi))

cfg_kg = EvolutionConfig(dt=0.1, n_steps=1600, store_every=400)
run_kg = klein_gordon_evolve(
    KGField(XK, phi0.psi, phi_dot0), None, ELECTRON, cfg_kg
)


def centroid(phi):
    d = np.abs(phi) ** 2
    return float(np.sum(XK * d) / np.sum(d))


t0, t1 = run_kg.fields[0].t, run_kg.fields[-1].t
speed = (centroid(run_kg.fields[-1].phi) - centroid(run_kg.fields[0].phi)) / (t1 - t0)
print(f"KG packet speed {speed:.4f} c vs c/sqrt(2) = {1 / np.sqrt(2):.4f}")
print(f"KG energy drift: {abs(run_kg.energy[-1] - run_kg.energy[0]) / abs(run_kg.energy[0]):.2e}")

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(9, 6))

for snap in snaps:
    ax1.plot(X, np.abs(snap.psi) ** 2, lw=0.9, label=f"t = {snap.t:.0f}")
ax1.axvspan(-L / 2, L / 2, color="gray", alpha=0.3)
ax1.set_xlim(-70, 70)
ax1.set_xlabel("x")
ax1.set_ylabel("|psi|^2")
ax1.legend(fontsize=8)
ax1.set_title("packet splitting on the rectangle")

for f in run_kg.fields:
    ax2.plot(XK, np.abs(f.phi) ** 2, lw=0.9, label=f"t = {f.t:.0f}")
ax2.set_xlabel("x")
ax2.set_ylabel("|phi|^2")
ax2.legend(fontsize=8)
ax2.set_title("relativistic packet, group velocity c/sqrt(2)")

fig.tight_layout()
out = HERE / "packet_evolution.png"
fig.savefig(out, dpi=120)
print(f"wrote {out}")
