"""JSON scenario files: the CLI's input format.

A scenario is a single JSON object with a ``schema_version``, a ``kind``
naming the subcommand it feeds, and one section of the same name holding
that subcommand's parameters.  All numbers are in natural electron units
(hbar = c = m_e = 1); energies mean hbar*omega - hbar*omega0, i.e. the
part above the rest plateau.

Unknown keys are rejected outright in --strict mode and warned about
otherwise; a typo that silently does nothing is worse than a refusal.
"""

from __future__ import annotations

import json
import sys

import numpy as np

from .core import ELECTRON, Particle, PotentialProfile
from .errors import ScenarioError
from .units import COULOMB_COUPLING, HBAR

SCHEMA_VERSION = 1

KINDS = (
    "dispersion",
    "geometry",
    "trace",
    "tunnel",
    "orbits",
    "qpotential",
    "evolve",
    "validate",
)

POTENTIAL_FAMILIES = (
    "constant",
    "ramp",
    "gaussian_bump",
    "square_barrier",
    "harmonic",
    "coulomb_radial_effective",
)


class Scenario:
    """Parsed and validated scenario: kind, particle, and the kind section."""

    def __init__(self, kind: str, particle: Particle, params: dict, raw: dict):
        self.kind = kind
        self.particle = particle
        self.params = params
        self.raw = raw


def _check_keys(obj: dict, where: str, required: dict, optional: dict, strict: bool) -> dict:
    """Validate one JSON object against {key: type} maps, return it.

    Types may be a tuple.  bool is checked before int on purpose since
    bool is an int subclass in Python.
    """
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where} must be a JSON object")
    out = {}
    for key, typ in required.items():
        if key not in obj:
            raise ScenarioError(f"{where} is missing required key {key!r}")
        out[key] = _coerce(obj[key], typ, f"{where}.{key}")
    for key, typ in optional.items():
        if key in obj:
            out[key] = _coerce(obj[key], typ, f"{where}.{key}")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        msg = f"{where} has unknown key(s): {', '.join(sorted(unknown))}"
        if strict:
            raise ScenarioError(msg)
        print(f"guideq: warning: {msg}", file=sys.stderr)
    return out


def _coerce(value, typ, where):
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ScenarioError(f"{where} must be a number")
        return float(value)
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ScenarioError(f"{where} must be an integer")
        return value
    if typ is bool:
        if not isinstance(value, bool):
            raise ScenarioError(f"{where} must be true or false")
        return value
    if typ is str:
        if not isinstance(value, str):
            raise ScenarioError(f"{where} must be a string")
        return value
    if typ in (dict, list):
        if not isinstance(value, typ):
            raise ScenarioError(f"{where} must be a JSON {'object' if typ is dict else 'array'}")
        return value
    raise ScenarioError(f"{where}: unsupported schema type {typ}")  # pragma: no cover


def load_scenario(path, strict: bool = False) -> Scenario:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario file {path} is not valid JSON: {exc}") from exc
    return parse_scenario(raw, strict=strict)


def parse_scenario(raw: dict, strict: bool = False) -> Scenario:
    if not isinstance(raw, dict):
        raise ScenarioError("scenario top level must be a JSON object")
    version = raw.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(
            f"schema_version must be {SCHEMA_VERSION}, got {version!r}"
        )
    kind = raw.get("kind")
    if kind not in KINDS:
        raise ScenarioError(f"kind must be one of {KINDS}, got {kind!r}")
    top = _check_keys(
        raw,
        "scenario",
        {"schema_version": int, "kind": str},
        {"particle": dict, kind: dict, "comment": str},
        strict,
    )
    particle = _build_particle(top.get("particle"), strict)
    params = raw.get(kind)
    if params is None:
        raise ScenarioError(f"scenario of kind {kind!r} needs a {kind!r} section")
    return Scenario(kind=kind, particle=particle, params=params, raw=raw)


def _build_particle(obj, strict) -> Particle:
    if obj is None:
        return ELECTRON
    got = _check_keys(obj, "particle", {}, {"name": str, "mass": float}, strict)
    name = got.get("name", "electron")
    mass = got.get("mass", 1.0)
    if mass <= 0:
        raise ScenarioError("particle.mass must be positive")
    return Particle(name=name, mass=mass)


def build_grid(obj, strict, where="grid") -> np.ndarray:
    got = _check_keys(obj, where, {"x_min": float, "x_max": float, "n": int}, {}, strict)
    if got["x_max"] <= got["x_min"]:
        raise ScenarioError(f"{where}: x_max must exceed x_min")
    if got["n"] < 4:
        raise ScenarioError(f"{where}: n must be at least 4")
    return np.linspace(got["x_min"], got["x_max"], got["n"])


def build_potential(obj, x, particle: Particle, strict, where="potential") -> PotentialProfile:
    if not isinstance(obj, dict) or "family" not in obj:
        raise ScenarioError(f"{where} must be an object with a 'family' key")
    family = obj["family"]
    if family not in POTENTIAL_FAMILIES:
        raise ScenarioError(f"{where}.family must be one of {POTENTIAL_FAMILIES}, got {family!r}")

    if family == "constant":
        got = _check_keys(obj, where, {"family": str, "value": float}, {}, strict)
        values = np.full_like(x, got["value"])
        return PotentialProfile(x, values, interpolation="linear")

    if family == "ramp":
        got = _check_keys(
            obj, where, {"family": str, "start_value": float, "end_value": float}, {}, strict
        )
        values = np.linspace(got["start_value"], got["end_value"], x.size)
        return PotentialProfile(x, values, interpolation="linear")

    if family == "gaussian_bump":
        got = _check_keys(
            obj,
            where,
            {"family": str, "height": float, "width": float},
            {"center": float},
            strict,
        )
        if got["width"] <= 0:
            raise ScenarioError(f"{where}.width must be positive")
        c = got.get("center", 0.0)
        values = got["height"] * np.exp(-((x - c) ** 2) / (2.0 * got["width"] ** 2))
        return PotentialProfile(x, values)

    if family == "square_barrier":
        got = _check_keys(
            obj,
            where,
            {"family": str, "height": float, "width": float},
            {"center": float},
            strict,
        )
        if got["width"] <= 0:
            raise ScenarioError(f"{where}.width must be positive")
        c = got.get("center", 0.0)
        # strict inequalities put the jump between samples, so the covered
        # length is unbiased when the edges fall mid-cell
        inside = (x > c - got["width"] / 2.0) & (x < c + got["width"] / 2.0)
        values = np.where(inside, got["height"], 0.0)
        return PotentialProfile(x, values, interpolation="linear")

    if family == "harmonic":
        got = _check_keys(
            obj,
            where,
            {"family": str, "angular_frequency": float},
            {"center": float},
            strict,
        )
        if got["angular_frequency"] <= 0:
            raise ScenarioError(f"{where}.angular_frequency must be positive")
        c = got.get("center", 0.0)
        values = 0.5 * particle.mass * got["angular_frequency"] ** 2 * (x - c) ** 2
        return PotentialProfile(x, values)

    # coulomb_radial_effective: attractive -alpha/r plus the centrifugal
    # term for angular momentum quantum l, on an r > 0 grid
    got = _check_keys(
        obj,
        where,
        {"family": str, "angular_momentum": int},
        {"coupling": float},
        strict,
    )
    if np.any(x <= 0):
        raise ScenarioError(f"{where}: coulomb_radial_effective needs a grid with x > 0")
    ell = got["angular_momentum"]
    if ell < 0:
        raise ScenarioError(f"{where}.angular_momentum must be >= 0")
    coupling = got.get("coupling", COULOMB_COUPLING)
    values = -coupling / x + HBAR**2 * ell * (ell + 1) / (2.0 * particle.mass * x**2)
    return PotentialProfile(x, values)


def energy_to_omega(energy: float, particle: Particle) -> float:
    """Scenario energies are hbar*omega - hbar*omega0; return omega."""
    return particle.rest_frequency + energy / HBAR
