"""Circular orbits quantized by closing the zigzag on itself.

Wrap the guide into a ring around a Coulomb center.  An orbit is allowed when
the internal clock of the circulating wave overtakes the orbital period by a
whole number of beats, which lands exactly on the Bohr ladder: r_n = n^2 r_1,
E_n = E_1 / n^2, and angular momentum n hbar, with a small relativistic pull
on the radius of order alpha^2.

Writes bohr_orbit_ladder.png next to this file.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from guideq import level_table
from guideq.core import ELECTRON
from guideq.units import NATURAL

HERE = pathlib.Path(__file__).resolve().parent
N_MAX = 8

rows = level_table(N_MAX, ELECTRON)
ns = np.array([r["n"] for r in rows])
energies_ev = np.array([r["energy_ev"] for r in rows])
radii_pm = np.array([NATURAL.to_si(r["r"], "length") * 1e12 for r in rows])

print(" n   r (pm)      E (eV)      v/c        L/hbar")
for r, r_pm in zip(rows, radii_pm):
    print(
        f"{r['n']:2d}  {r_pm:9.2f}  {r['energy_ev']:10.5f}  "
        f"{r['v_over_c']:.6f}  {r['angular_momentum_over_hbar']:.3f}"
    )

g = rows[0]
print(f"\nground state: r = {radii_pm[0]:.3f} pm, E = {g['energy_ev']:.5f} eV")
print(f"relativistic radius shift / (v/c)^2 = {g['relativistic_shift'] / g['v_over_c'] ** 2:.4f}")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))

ax1.plot(ns, energies_ev, "o-")
ax1.plot(ns, energies_ev[0] / ns.astype(float) ** 2, "x--", color="gray",
         label="E_1 / n^2")
ax1.set_xlabel("n")
ax1.set_ylabel("E_n  (eV)")
ax1.legend()
ax1.set_title("level ladder")

# draw the first few orbits to scale
ax2.set_aspect("equal")
theta = np.linspace(0, 2 * np.pi, 256)
for n, r_pm in zip(ns[:4], radii_pm[:4]):
    ax2.plot(r_pm * np.cos(theta), r_pm * np.sin(theta), lw=1.0, label=f"n = {n}")
ax2.plot(0, 0, "k+", ms=10)
ax2.set_xlabel("x  (pm)")
ax2.legend(loc="upper right", fontsize=8)
ax2.set_title("orbit radii, r_n = n^2 r_1")

fig.tight_layout()
out = HERE / "bohr_orbit_ladder.png"
fig.savefig(out, dpi=120)
print(f"wrote {out}")
