"""Physical constants and unit conversion.

All numerical work inside the library happens in natural electron units,
where c = hbar = m_e = 1.  One natural length is the reduced Compton
wavelength hbar/(m_e c), one natural energy is the electron rest energy
m_e c^2, one natural time is hbar/(m_e c^2).  SI (and electron-volt)
values appear only at I/O boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError

# SI values (CODATA 2018; exact where the SI definition makes them so)
C_SI = 299792458.0              # speed of light, m/s
H_SI = 6.62607015e-34           # Planck constant, J s
HBAR_SI = H_SI / (2.0 * np.pi)  # reduced Planck constant, J s
ME_SI = 9.1093837015e-31        # electron mass, kg
QE_SI = 1.602176634e-19         # elementary charge, C
EPS0_SI = 8.8541878128e-12      # vacuum permittivity, F/m

# SI size of one natural unit
LENGTH_SI = HBAR_SI / (ME_SI * C_SI)    # reduced Compton wavelength, m
TIME_SI = HBAR_SI / (ME_SI * C_SI**2)   # s
ENERGY_SI = ME_SI * C_SI**2             # J
ENERGY_EV = ENERGY_SI / QE_SI           # electron rest energy, eV

# fine-structure constant e^2/(4 pi eps0 hbar c)
FINE_STRUCTURE = QE_SI**2 / (4.0 * np.pi * EPS0_SI * HBAR_SI * C_SI)

# Fundamental constants in natural electron units
C = 1.0
HBAR = 1.0
H = 2.0 * np.pi
ELECTRON_MASS = 1.0
# Coulomb coupling e^2/(4 pi eps0), equal to alpha*hbar*c
COULOMB_COUPLING = FINE_STRUCTURE

_NATURAL_TO_SI = {
    "length": LENGTH_SI,
    "time": TIME_SI,
    "energy": ENERGY_SI,
    "mass": ME_SI,
    "velocity": C_SI,
    "frequency": 1.0 / TIME_SI,     # angular frequency, rad/s
    "wavenumber": 1.0 / LENGTH_SI,  # rad/m
    "momentum": ME_SI * C_SI,
    "action": HBAR_SI,
}


def _factor(dimension: str) -> float:
    try:
        return _NATURAL_TO_SI[dimension]
    except KeyError:
        raise DomainError(
            f"unknown dimension {dimension!r}; expected one of "
            + ", ".join(sorted(_NATURAL_TO_SI))
        ) from None


class UnitMode(Enum):
    NATURAL_ELECTRON = "natural"
    SI = "si"


@dataclass(frozen=True)
class UnitSystem:
    """Declares how external numbers map onto internal natural units."""

    mode: UnitMode = UnitMode.NATURAL_ELECTRON

    def to_si(self, value, dimension: str):
        """Convert a value in this system's units to SI."""
        if self.mode is UnitMode.SI:
            return value
        return value * _factor(dimension)

    def from_si(self, value, dimension: str):
        """Convert an SI value into this system's units."""
        if self.mode is UnitMode.SI:
            return value
        return value / _factor(dimension)


NATURAL = UnitSystem(UnitMode.NATURAL_ELECTRON)
SI = UnitSystem(UnitMode.SI)


def energy_to_ev(value):
    """Natural energy to electron-volts."""
    return value * ENERGY_EV


def energy_from_ev(value):
    """Electron-volts to natural energy."""
    return value / ENERGY_EV


# Named units accepted in file headers, each mapped to its size in natural units.
LENGTH_UNIT_NAMES = {
    "natural": 1.0,
    "m": 1.0 / LENGTH_SI,
    "nm": 1e-9 / LENGTH_SI,
    "pm": 1e-12 / LENGTH_SI,
    "angstrom": 1e-10 / LENGTH_SI,
}

ENERGY_UNIT_NAMES = {
    "natural": 1.0,
    "ev": QE_SI / ENERGY_SI,
    "kev": 1e3 * QE_SI / ENERGY_SI,
    "mev": 1e6 * QE_SI / ENERGY_SI,
    "j": 1.0 / ENERGY_SI,
}


def length_to_natural(value, unit: str):
    """Convert a length in a named unit to natural units."""
    try:
        return value * LENGTH_UNIT_NAMES[unit.lower()]
    except KeyError:
        raise DomainError(
            f"unknown length unit {unit!r}; expected one of "
            + ", ".join(sorted(LENGTH_UNIT_NAMES))
        ) from None


def energy_to_natural(value, unit: str):
    """Convert an energy in a named unit to natural units."""
    try:
        return value * ENERGY_UNIT_NAMES[unit.lower()]
    except KeyError:
        raise DomainError(
            f"unknown energy unit {unit!r}; expected one of "
            + ", ".join(sorted(ENERGY_UNIT_NAMES))
        ) from None
