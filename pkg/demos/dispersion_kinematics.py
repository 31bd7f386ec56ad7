"""Free electron guide: dispersion curve and the velocity product.

The guided mode obeys omega^2 = omega_c^2 + (c k)^2, the same hyperbola a
relativistic particle traces with omega_c playing the rest frequency.  Two
things to see here:

  * the curve hugs the light line at large k and flattens at the cutoff,
  * group and phase velocity always multiply to c^2, so the phase fronts
    run faster than light exactly as much as the envelope runs slower.

Run from anywhere; writes dispersion_kinematics.png next to this file.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from guideq import dispersion_point
from guideq.core import C, ELECTRON, cutoff_with_potential, width_from_cutoff

HERE = pathlib.Path(__file__).resolve().parent
K_MAX = 3.0        # natural units, m_e c / hbar = 1
N_POINTS = 400

cutoff = cutoff_with_potential(ELECTRON, 0.0)
width = width_from_cutoff(cutoff)
ks = np.linspace(0.0, K_MAX, N_POINTS)
pts = [dispersion_point(k, cutoff) for k in ks]
omegas = np.array([p.omega for p in pts])
v_g = np.array([p.v_g for p in pts])
v_p = np.array([p.v_ph for p in pts])

print(f"cutoff frequency  {cutoff:.6f}  (rest frequency of the electron)")
print(f"guide width       {width:.6f}  = pi in natural units")
# v_phase diverges at k = 0; check the product on the interior points
prod = v_g[1:] * v_p[1:]
print(f"max |v_g v_ph - c^2| over the sweep: {np.max(np.abs(prod - C**2)):.3e}")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))

ax1.plot(ks, omegas, label="guided mode")
ax1.plot(ks, C * ks, "--", color="gray", label="light line w = ck")
ax1.axhline(cutoff, color="tab:red", lw=0.8, label="cutoff")
ax1.set_xlabel("k  (1/length, natural)")
ax1.set_ylabel("omega")
ax1.legend()
ax1.set_title("hyperbolic dispersion")

ax2.plot(ks[1:], v_g[1:] / C, label="v_group / c")
ax2.plot(ks[1:], v_p[1:] / C, label="v_phase / c")
ax2.axhline(1.0, color="gray", lw=0.8)
ax2.set_ylim(0, 4)
ax2.set_xlabel("k")
ax2.legend()
ax2.set_title("velocity pair, product pinned to c^2")

fig.tight_layout()
out = HERE / "dispersion_kinematics.png"
fig.savefig(out, dpi=120)
print(f"wrote {out}")
