"""A potential ramp as a narrowing guide, and the ray that turns back.

Mapping V(x) onto a local cutoff makes the guide pinch where the potential
rises.  A zigzag ray launched uphill steepens (its axial speed is the group
velocity, which drops with the local cutoff) until the guide becomes too
narrow to carry the frequency at all.  That point is the classical turning
point, and the ray folds back through its own track.

Writes ramp_ray_turning.png next to this file.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from guideq import PotentialProfile, RayState, trace
from guideq.core import ELECTRON, potential_to_geometry
from guideq.scenario import energy_to_omega

HERE = pathlib.Path(__file__).resolve().parent

X = np.linspace(0.0, 220.0, 1201)
SLOPE = 1.0e-3            # natural energy units per natural length
ENERGY = 0.15             # above the rest shelf; turning at E/slope = 150

profile = PotentialProfile(X, SLOPE * X)
geom = potential_to_geometry(ELECTRON, profile)
omega = energy_to_omega(ENERGY, ELECTRON)

start = RayState(
    x=0.0, y=0.5 * float(geom.width[0]), phi=0.0,
    transverse_sign=-1, axial_sign=1, t=0.0, clock_phase=0.0,
)
tr = trace(omega, geom, duration=2.0e4, initial=start)

x_turn = ENERGY / SLOPE
print(f"expected turning point  x = {x_turn:.1f}")
print(f"ray reached             x = {max(tr.x):.1f}   outcome: {tr.outcome}")
print(f"wall hits {len(tr.reflections)}, turnings {len(tr.turnings)}")

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(9, 6), sharex=True)

ax1.plot(X, geom.width, color="tab:blue")
ax1.fill_between(X, 0, geom.width, alpha=0.15)
ax1.axvline(x_turn, color="tab:red", lw=0.8, ls="--", label="turning point")
ax1.set_ylabel("guide width")
ax1.legend()
ax1.set_title("ramp potential pinches the guide")

# drop to a sparse subset of segment endpoints so the zigzag stays visible
stride = max(1, len(tr.x) // 4000)
ax2.plot(tr.x[::stride], tr.y[::stride], lw=0.5, color="tab:green")
ax2.axvline(x_turn, color="tab:red", lw=0.8, ls="--")
ax2.set_xlabel("x  (natural length)")
ax2.set_ylabel("y inside guide")
ax2.set_title("zigzag ray folds back where the guide closes")

fig.tight_layout()
out = HERE / "ramp_ray_turning.png"
fig.savefig(out, dpi=120)
print(f"wrote {out}")
