"""The quantum potential of a gaussian bump, two ways, plus a trajectory.

Where a classical particle slows down it spends more time, so the WKB dwell
density rises as 1/sqrt(E - V).  Feeding that density's amplitude back
through the curvature term gives a local quantum potential U_q(x); a Newton
trajectory driven by V + U_q then crosses the bump the way the wave does
rather than the way the bare classical particle would.

Writes quantum_potential_bump.png next to this file.
"""

import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from guideq import (
    PotentialProfile,
    modified_newton_trajectory,
    quantum_potential_local,
    wkb_density,
)
from guideq.core import ELECTRON
from guideq.qpotential import kinetic_energy
from guideq.scenario import energy_to_omega

HERE = pathlib.Path(__file__).resolve().parent

X = np.linspace(-8.0, 8.0, 4001)
HEIGHT, WIDTH = 0.3, 2.0
ENERGY = 0.5

profile = PotentialProfile(X, HEIGHT * np.exp(-(X**2) / (2 * WIDTH**2)))
kin = kinetic_energy(energy_to_omega(ENERGY, ELECTRON), profile, ELECTRON)
dens = wkb_density(kin)
qpot = quantum_potential_local(kin, profile, ELECTRON)

print(f"kinetic energy range: {np.nanmin(kin.energy):.3f} .. {np.nanmax(kin.energy):.3f}")
print(f"quantum potential at the crest: {qpot.value[len(X) // 2]:+.5f}")

traj = modified_newton_trajectory(
    x0=-6.0, v0=1.0, duration=12.0,
    profile=profile, qfield=qpot, particle=ELECTRON,
)
print(f"trajectory: x(0) = {traj.x[0]:.1f} -> x(T) = {traj.x[-1]:.3f}, "
      f"energy drift {abs(traj.energy[-1] - traj.energy[0]):.2e}")

fig, axes = plt.subplots(3, 1, figsize=(8, 8), sharex=True)

axes[0].plot(X, profile.values, label="V(x)")
axes[0].axhline(ENERGY, color="gray", lw=0.8, label="E")
axes[0].plot(X, dens.p, color="tab:green", label="WKB dwell density")
axes[0].legend()
axes[0].set_title("bump, energy, and where the particle lingers")

axes[1].plot(X, qpot.value, color="tab:purple")
axes[1].set_ylabel("U_q(x)")
axes[1].set_title("local quantum potential from the dwell amplitude")

axes[2].plot(traj.x, traj.v, color="tab:orange")
axes[2].set_xlabel("x")
axes[2].set_ylabel("v along trajectory")
axes[2].set_title("modified Newton run: slows over the bump, recovers past it")

fig.tight_layout()
out = HERE / "quantum_potential_bump.png"
fig.savefig(out, dpi=120)
print(f"wrote {out}")
