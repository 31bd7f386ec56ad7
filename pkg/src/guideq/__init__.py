"""Guided-wave picture of single-particle quantum mechanics.

A particle of rest mass m0 maps onto the TE10 mode of a hollow guide
whose cutoff frequency plays the role of rest energy: omega_c = omega0 +
V/hbar.  The package covers the kinematics of that map (dispersion,
group/phase velocity), its geometry (potential to guide width), zigzag
ray paths, transfer-matrix scattering, quantized circular orbits, the
local quantum potential, and finite-difference Schrodinger and
Klein-Gordon evolvers used to cross-check the ray picture.

Natural units throughout: hbar = c = m_electron = 1.  units.py holds the
SI conversion factors.
"""

from .core import (
    ELECTRON,
    AxialWavenumber,
    DispersionPoint,
    GuideGeometry,
    Particle,
    PotentialProfile,
    SchrodingerDispersion,
    WkbValidity,
    cutoff_with_potential,
    dispersion_point,
    group_velocity,
    k_of_omega,
    omega_of_k,
    phase_velocity,
    potential_to_geometry,
    schrodinger_dispersion,
    width_from_cutoff,
    wkb_validity,
)
from .errors import (
    BelowCutoffError,
    DomainError,
    ForbiddenDomainError,
    GuideqError,
    InfinitePhaseVelocityError,
    NoPropagatingChannelError,
    ResolutionError,
    ScenarioError,
    StabilityError,
)
from .orbits import (
    CircularOrbit,
    classical_orbit,
    level_table,
    overtake_time,
    quantize_nonrelativistic,
    quantize_relativistic,
    transition_frequency,
    zigzag_consistency,
)
from .qpotential import (
    arbitrate_curvature_sign,
    bohm_quantum_potential,
    continuity_residual,
    kinetic_energy,
    modified_newton_trajectory,
    polar_decompose,
    probability_flux,
    quantum_potential_local,
    wkb_density,
)
from .raytrace import RayState, ZigzagTrace, local_angle, trace, zigzag_period
from .scatter import (
    Segment,
    TransferMatrix,
    TransmissionSpectrum,
    scattering,
    transmission_spectrum,
)
from .solvers import (
    EvolutionConfig,
    KGField,
    WaveField,
    gaussian_packet,
    klein_gordon_evolve,
    schrodinger_evolve,
    stationary_states,
)
from .units import NATURAL, SI, UnitMode, UnitSystem, energy_from_ev, energy_to_ev
from .validation import run_validation

__version__ = "0.1.0"

__all__ = [
    "AxialWavenumber",
    "BelowCutoffError",
    "CircularOrbit",
    "DispersionPoint",
    "DomainError",
    "ELECTRON",
    "EvolutionConfig",
    "ForbiddenDomainError",
    "GuideGeometry",
    "GuideqError",
    "InfinitePhaseVelocityError",
    "KGField",
    "NATURAL",
    "NoPropagatingChannelError",
    "Particle",
    "PotentialProfile",
    "RayState",
    "ResolutionError",
    "SI",
    "ScenarioError",
    "SchrodingerDispersion",
    "Segment",
    "StabilityError",
    "TransferMatrix",
    "TransmissionSpectrum",
    "UnitMode",
    "UnitSystem",
    "WaveField",
    "WkbValidity",
    "ZigzagTrace",
    "arbitrate_curvature_sign",
    "bohm_quantum_potential",
    "classical_orbit",
    "continuity_residual",
    "cutoff_with_potential",
    "dispersion_point",
    "energy_from_ev",
    "energy_to_ev",
    "gaussian_packet",
    "group_velocity",
    "k_of_omega",
    "kinetic_energy",
    "klein_gordon_evolve",
    "level_table",
    "local_angle",
    "modified_newton_trajectory",
    "omega_of_k",
    "overtake_time",
    "phase_velocity",
    "polar_decompose",
    "potential_to_geometry",
    "probability_flux",
    "quantize_nonrelativistic",
    "quantize_relativistic",
    "quantum_potential_local",
    "run_validation",
    "scattering",
    "schrodinger_dispersion",
    "schrodinger_evolve",
    "stationary_states",
    "trace",
    "transition_frequency",
    "transmission_spectrum",
    "wkb_density",
    "wkb_validity",
    "width_from_cutoff",
    "zigzag_consistency",
    "zigzag_period",
]
