"""Command line interface.

    guideq <subcommand> --scenario <file.json> --out <dir> [--units si|natural] [--strict]

Every subcommand reads one JSON scenario (see scenario.py for the
format), writes CSV data plus an SVG quick-look into the output
directory, and finishes with a manifest.json listing each file with its
sha256.  Outputs are deterministic for a given scenario and unit mode, so
the hashes are meaningful.

Exit codes: 0 success, 2 scenario/usage error, 3 physics or numerics
refusal (below cutoff, unstable step, validation failure...), 4 output
I/O failure.  GUIDEQ_THREADS caps worker threads in frequency sweeps.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import core, orbits, qpotential, raytrace, scatter, solvers, units, validation
from .errors import GuideqError, NoPropagatingChannelError, ScenarioError
from .raytrace import RayState
from .scenario import (
    KINDS,
    Scenario,
    _check_keys,
    build_grid,
    build_potential,
    energy_to_omega,
    load_scenario,
)
from .svgplot import write_line_plot
from .units import C, HBAR

_EXIT_OK = 0
_EXIT_SCENARIO = 2
_EXIT_PHYSICS = 3
_EXIT_IO = 4


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="guideq",
        description="waveguide picture of single-particle quantum mechanics",
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="subcommand")
    descriptions = {
        "dispersion": "sweep the guided dispersion relation",
        "geometry": "map a potential onto guide width and cutoff profiles",
        "trace": "follow a zigzag ray through the guide",
        "tunnel": "transfer-matrix transmission through a segmented structure",
        "orbits": "quantized circular orbits in a Coulomb potential",
        "qpotential": "WKB dwell density and local quantum potential",
        "evolve": "time-step a wave packet (Schrodinger or Klein-Gordon)",
        "validate": "run the built-in physics validation suite",
    }
    for kind in KINDS:
        q = sub.add_parser(kind, help=descriptions[kind])
        q.add_argument(
            "--scenario",
            required=(kind != "validate"),
            help="path to a JSON scenario file" + (" (optional here)" if kind == "validate" else ""),
        )
        q.add_argument("--out", required=True, help="output directory (created if missing)")
        q.add_argument(
            "--units",
            choices=("natural", "si"),
            default="natural",
            help="unit system for numeric output columns (default natural)",
        )
        q.add_argument(
            "--strict",
            action="store_true",
            help="reject unknown scenario keys instead of warning",
        )
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.scenario is not None:
            scn = load_scenario(args.scenario, strict=args.strict)
            if scn.kind != args.command:
                raise ScenarioError(
                    f"scenario is of kind {scn.kind!r} but the subcommand is {args.command!r}"
                )
        else:
            scn = Scenario(kind="validate", particle=core.ELECTRON, params={}, raw={})
        handler = _HANDLERS[args.command]
        files, status = handler(scn, out_dir, args)
        _write_manifest(out_dir, args, files)
        return status
    except ScenarioError as exc:
        print(f"guideq: scenario error: {exc}", file=sys.stderr)
        return _EXIT_SCENARIO
    except GuideqError as exc:
        print(f"guideq: {exc}", file=sys.stderr)
        return _EXIT_PHYSICS
    except OSError as exc:
        print(f"guideq: i/o error: {exc}", file=sys.stderr)
        return _EXIT_IO


# ---------------------------------------------------------------------------
# output plumbing

def _converter(args):
    """Column converter honoring --units; dimension 'none' passes through."""
    to_si = args.units == "si"

    def convert(valuesarr, dimension):
        arr = np.asarray(valuesarr, dtype=float)
        if not to_si or dimension == "none":
            return arr
        return units.NATURAL.to_si(arr, dimension)

    return convert


def _write_table(path, columns, args) -> None:
    """columns: list of (header, dimension, values). Floats via repr."""
    convert = _converter(args)
    arrays = [convert(vals, dim) for _, dim, vals in columns]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([name for name, _, _ in columns])
        for row in zip(*arrays):
            w.writerow([repr(float(v)) for v in row])


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_dir: Path, args, files) -> None:
    entries = []
    for name in files:
        p = out_dir / name
        entries.append({"name": name, "sha256": _sha256(p), "bytes": p.stat().st_size})
    doc = {
        "command": args.command,
        "units": args.units,
        "scenario_sha256": _sha256(Path(args.scenario)) if args.scenario else None,
        "outputs": entries,
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _workers() -> int | None:
    raw = os.environ.get("GUIDEQ_THREADS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        raise ScenarioError(f"GUIDEQ_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ScenarioError("GUIDEQ_THREADS must be at least 1")
    return n


# ---------------------------------------------------------------------------
# handlers; each returns (list of output file names, exit status)

def _handle_dispersion(scn, out_dir, args):
    got = _check_keys(
        scn.params,
        "dispersion",
        {"sweep": dict},
        {"potential_offset": float},
        args.strict,
    )
    sweep = _check_keys(
        got["sweep"],
        "dispersion.sweep",
        {"quantity": str, "start": float, "stop": float, "n": int},
        {},
        args.strict,
    )
    if sweep["quantity"] not in ("omega", "k", "energy"):
        raise ScenarioError("dispersion.sweep.quantity must be 'omega', 'k' or 'energy'")
    if sweep["n"] < 2 or sweep["stop"] <= sweep["start"]:
        raise ScenarioError("dispersion.sweep needs n >= 2 and stop > start")
    cutoff = core.cutoff_with_potential(scn.particle, got.get("potential_offset", 0.0))

    grid = np.linspace(sweep["start"], sweep["stop"], sweep["n"])
    if sweep["quantity"] == "k":
        ks = grid
        if np.any(ks < 0):
            raise ScenarioError("dispersion.sweep over k needs k >= 0")
        oms = np.array([core.omega_of_k(k, cutoff) for k in ks])
    else:
        if sweep["quantity"] == "energy":
            oms = np.array([energy_to_omega(e, scn.particle) for e in grid])
        else:
            oms = grid
        # evanescent points carry no propagating kinematics, leave gaps
        recs = [core.k_of_omega(om, cutoff) for om in oms]
        ks = np.array([np.nan if r.evanescent else r.value for r in recs])
    if not np.any(np.isfinite(ks)):
        raise NoPropagatingChannelError(
            f"the whole sweep sits below the cutoff {cutoff:.6g}; nothing propagates"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        v_g = C**2 * ks / oms
        v_ph = np.where(ks > 0, oms / ks, np.nan)

    _write_table(
        out_dir / "dispersion.csv",
        [
            ("omega", "frequency", oms),
            ("k", "wavenumber", ks),
            ("v_group", "velocity", v_g),
            ("v_phase", "velocity", v_ph),
        ],
        args,
    )
    good = np.isfinite(ks)
    write_line_plot(
        out_dir / "dispersion.svg",
        ks[good],
        [("omega(k)", oms[good]), ("light line c*k", C * ks[good])],
        title=f"guided dispersion, cutoff {cutoff:.6g}",
        xlabel="k (natural)",
        ylabel="omega (natural)",
    )
    return ["dispersion.csv", "dispersion.svg"], _EXIT_OK


def _handle_geometry(scn, out_dir, args):
    got = _check_keys(scn.params, "geometry", {"grid": dict, "potential": dict}, {}, args.strict)
    x = build_grid(got["grid"], args.strict, "geometry.grid")
    profile = build_potential(got["potential"], x, scn.particle, args.strict, "geometry.potential")
    geom = core.potential_to_geometry(scn.particle, profile)
    _write_table(
        out_dir / "geometry.csv",
        [
            ("x", "length", geom.x),
            ("potential", "energy", profile.values),
            ("cutoff", "frequency", geom.cutoff),
            ("width", "length", geom.width),
        ],
        args,
    )
    write_line_plot(
        out_dir / "geometry.svg",
        geom.x,
        [("guide width", geom.width)],
        title="guide width from potential",
        xlabel="x (natural)",
        ylabel="width (natural)",
    )
    return ["geometry.csv", "geometry.svg"], _EXIT_OK


def _handle_trace(scn, out_dir, args):
    got = _check_keys(
        scn.params,
        "trace",
        {"grid": dict, "potential": dict, "energy": float, "duration": float},
        {
            "start_x": float,
            "stop_at_turning": bool,
            "width_change_tol": float,
        },
        args.strict,
    )
    x = build_grid(got["grid"], args.strict, "trace.grid")
    profile = build_potential(got["potential"], x, scn.particle, args.strict, "trace.potential")
    geom = core.potential_to_geometry(scn.particle, profile)
    omega = energy_to_omega(got["energy"], scn.particle)

    initial = None
    if "start_x" in got:
        x0 = got["start_x"]
        initial = RayState(
            x=x0,
            y=0.5 * geom.width_at(x0),
            phi=0.0,
            transverse_sign=-1,
            axial_sign=1,
            t=0.0,
            clock_phase=0.0,
        )
    tr = raytrace.trace(
        omega,
        geom,
        got["duration"],
        initial,
        width_change_tol=got.get("width_change_tol", 1e-3),
        stop_at_turning=got.get("stop_at_turning", False),
    )
    v_eff = np.array([s.axial_sign * C * np.sin(s.phi) for s in tr.states])
    _write_table(
        out_dir / "trace.csv",
        [
            ("t", "time", tr.t),
            ("x", "length", tr.x),
            ("y", "length", tr.y),
            ("phi", "none", tr.phi),
            ("v_eff", "velocity", v_eff),
        ],
        args,
    )
    write_line_plot(
        out_dir / "trace.svg",
        tr.x,
        [("ray height", tr.y)],
        title=f"zigzag path, outcome: {tr.outcome}",
        xlabel="x (natural)",
        ylabel="y (natural)",
    )
    print(
        f"trace: {len(tr.states)} segment endpoints, {len(tr.reflections)} wall hits, "
        f"{len(tr.turnings)} turnings, outcome {tr.outcome}"
    )
    return ["trace.csv", "trace.svg"], _EXIT_OK


def _build_segments(items):
    if not isinstance(items, list) or len(items) < 3:
        raise ScenarioError("tunnel.structure must be an array of at least 3 segments")
    segs = []
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise ScenarioError(f"tunnel.structure[{i}] must be an object")
        if item.get("lead"):
            extra = set(item) - {"lead", "potential"}
            if extra:
                raise ScenarioError(
                    f"tunnel.structure[{i}]: lead takes only an optional 'potential'"
                )
            segs.append(scatter.Segment(V=float(item.get("potential", 0.0)), length=None))
        else:
            missing = {"potential", "length"} - set(item)
            if missing:
                raise ScenarioError(
                    f"tunnel.structure[{i}] needs keys: {', '.join(sorted(missing))}"
                )
            extra = set(item) - {"potential", "length"}
            if extra:
                raise ScenarioError(
                    f"tunnel.structure[{i}] has unknown key(s): {', '.join(sorted(extra))}"
                )
            segs.append(scatter.Segment(V=float(item["potential"]), length=float(item["length"])))
    return segs


def _handle_tunnel(scn, out_dir, args):
    got = _check_keys(
        scn.params,
        "tunnel",
        {"structure": list, "sweep": dict},
        {"regime": str, "log_scale": bool},
        args.strict,
    )
    sweep = _check_keys(
        got["sweep"],
        "tunnel.sweep",
        {"energy_start": float, "energy_stop": float, "n": int},
        {},
        args.strict,
    )
    if sweep["n"] < 2 or sweep["energy_stop"] <= sweep["energy_start"]:
        raise ScenarioError("tunnel.sweep needs n >= 2 and energy_stop > energy_start")
    regime = got.get("regime", "schrodinger")
    if regime not in scatter.REGIMES:
        raise ScenarioError(f"tunnel.regime must be one of {scatter.REGIMES}")
    segs = _build_segments(got["structure"])
    energies = np.linspace(sweep["energy_start"], sweep["energy_stop"], sweep["n"])
    spectrum = scatter.transmission_spectrum(
        scn.particle,
        segs,
        energy_to_omega(sweep["energy_start"], scn.particle),
        energy_to_omega(sweep["energy_stop"], scn.particle),
        sweep["n"],
        regime=regime,
        workers=_workers(),
    )
    _write_table(
        out_dir / "spectrum.csv",
        [
            ("omega", "frequency", spectrum.omegas),
            ("energy", "energy", energies),
            ("T", "none", spectrum.T),
            ("R", "none", spectrum.R),
            ("ln_T", "none", spectrum.ln_T),
        ],
        args,
    )
    write_line_plot(
        out_dir / "spectrum.svg",
        energies,
        [("T", spectrum.T)],
        title=f"transmission, {regime} regime",
        xlabel="energy above rest (natural)",
        ylabel="T",
        log_y=got.get("log_scale", False),
    )
    return ["spectrum.csv", "spectrum.svg"], _EXIT_OK


def _handle_orbits(scn, out_dir, args):
    got = _check_keys(scn.params, "orbits", {"n_max": int}, {}, args.strict)
    if got["n_max"] < 1:
        raise ScenarioError("orbits.n_max must be at least 1")
    rows = orbits.level_table(got["n_max"], scn.particle)
    cols = {
        "n": ("none", [r["n"] for r in rows]),
        "r": ("length", [r["r"] for r in rows]),
        "v_over_c": ("none", [r["v_over_c"] for r in rows]),
        "energy": ("energy", [r["energy"] for r in rows]),
        "energy_ev": ("none", [r["energy_ev"] for r in rows]),
        "angular_momentum_over_hbar": ("none", [r["angular_momentum_over_hbar"] for r in rows]),
        "overtake_over_period": ("none", [r["tau_over_T"] for r in rows]),
        "relativistic_shift": ("none", [r["relativistic_shift"] for r in rows]),
    }
    _write_table(
        out_dir / "levels.csv",
        [(name, dim, vals) for name, (dim, vals) in cols.items()],
        args,
    )
    ns = np.array([r["n"] for r in rows], dtype=float)
    write_line_plot(
        out_dir / "levels.svg",
        ns,
        [("E_n (eV)", np.array([r["energy_ev"] for r in rows]))],
        title="quantized orbit energies",
        xlabel="n",
        ylabel="energy (eV)",
    )
    return ["levels.csv", "levels.svg"], _EXIT_OK


def _handle_qpotential(scn, out_dir, args):
    got = _check_keys(
        scn.params,
        "qpotential",
        {"grid": dict, "potential": dict, "energy": float},
        {"curvature_sign": float, "trajectory": dict},
        args.strict,
    )
    x = build_grid(got["grid"], args.strict, "qpotential.grid")
    profile = build_potential(got["potential"], x, scn.particle, args.strict, "qpotential.potential")
    omega = energy_to_omega(got["energy"], scn.particle)
    kin = qpotential.kinetic_energy(omega, profile, scn.particle)
    density = qpotential.wkb_density(kin)
    qf = qpotential.quantum_potential_local(
        kin, profile, scn.particle, curvature_sign=got.get("curvature_sign", 1.0)
    )
    _write_table(
        out_dir / "qpotential.csv",
        [
            ("x", "length", x),
            ("potential", "energy", profile.values),
            ("kinetic_energy", "energy", kin.energy),
            ("wkb_density", "wavenumber", density.p),
            ("quantum_potential", "energy", qf.value),
        ],
        args,
    )
    write_line_plot(
        out_dir / "qpotential.svg",
        x,
        [
            ("V", profile.values),
            ("E_kin", kin.energy),
            ("U", qf.value),
        ],
        title="local quantum potential",
        xlabel="x (natural)",
        ylabel="energy (natural)",
    )
    files = ["qpotential.csv", "qpotential.svg"]

    if "trajectory" in got:
        tspec = _check_keys(
            got["trajectory"],
            "qpotential.trajectory",
            {"x0": float, "v0": float, "duration": float},
            {"dt": float},
            args.strict,
        )
        traj = qpotential.modified_newton_trajectory(
            tspec["x0"],
            tspec["v0"],
            tspec["duration"],
            profile,
            qf,
            scn.particle,
            dt=tspec.get("dt"),
        )
        _write_table(
            out_dir / "trajectory.csv",
            [
                ("t", "time", traj.t),
                ("x", "length", traj.x),
                ("v", "velocity", traj.v),
                ("energy", "energy", traj.energy),
            ],
            args,
        )
        if traj.entered_excluded:
            print("trajectory stopped at the edge of the quantum potential's valid region")
        files.append("trajectory.csv")
    return files, _EXIT_OK


def _handle_evolve(scn, out_dir, args):
    got = _check_keys(
        scn.params,
        "evolve",
        {"grid": dict, "equation": str, "packet": dict, "stepping": dict},
        {"potential": dict, "include_rest_energy": bool, "initial_motion": str},
        args.strict,
    )
    if got["equation"] not in ("schrodinger", "klein_gordon"):
        raise ScenarioError("evolve.equation must be 'schrodinger' or 'klein_gordon'")
    x = build_grid(got["grid"], args.strict, "evolve.grid")
    profile = None
    if "potential" in got:
        profile = build_potential(got["potential"], x, scn.particle, args.strict, "evolve.potential")
    packet = _check_keys(
        got["packet"],
        "evolve.packet",
        {"center": float, "sigma": float, "wavenumber": float},
        {},
        args.strict,
    )
    stepping = _check_keys(
        got["stepping"],
        "evolve.stepping",
        {"dt": float, "n_steps": int},
        {
            "boundary": str,
            "store_every": int,
            "sponge_width": float,
            "sponge_strength": float,
        },
        args.strict,
    )
    cfg = solvers.EvolutionConfig(
        dt=stepping["dt"],
        n_steps=stepping["n_steps"],
        boundary=stepping.get("boundary", "dirichlet"),
        store_every=stepping.get("store_every", max(1, stepping["n_steps"] // 8)),
        sponge_width=stepping.get("sponge_width", 0.0),
        sponge_strength=stepping.get("sponge_strength", 0.0),
    )
    psi0 = solvers.gaussian_packet(
        x, x0=packet["center"], sigma=packet["sigma"], k0=packet["wavenumber"]
    )

    files = []
    if got["equation"] == "schrodinger":
        fields = solvers.schrodinger_evolve(
            psi0, profile, scn.particle, cfg,
            include_rest_energy=got.get("include_rest_energy", False),
        )
        observables = [
            ("t", "time", [f.t for f in fields]),
            ("norm", "none", [f.norm for f in fields]),
        ]
        dens_first, dens_last = fields[0].density, fields[-1].density
        values = [(f, f.psi) for f in fields]
    else:
        motion = got.get("initial_motion", "forward")
        if motion not in ("forward", "standing"):
            raise ScenarioError("evolve.initial_motion must be 'forward' or 'standing'")
        if motion == "forward":
            # spectrally exact single-branch start: phi_dot = -i omega(k) phi
            kk = 2.0 * np.pi * np.fft.fftfreq(x.size, x[1] - x[0])
            v_here = 0.0 if profile is None else profile.values
            cut = scn.particle.rest_frequency + np.mean(v_here) / HBAR
            wk = np.sqrt(cut**2 + (C * kk) ** 2)
            phi_dot0 = np.fft.ifft(-1j * wk * np.fft.fft(psi0.psi))
        else:
            phi_dot0 = np.zeros_like(psi0.psi)
        run = solvers.klein_gordon_evolve(
            solvers.KGField(x, psi0.psi, phi_dot0), profile, scn.particle, cfg
        )
        fields = run.fields
        observables = [
            ("t_midstep", "time", run.energy_t),
            ("energy", "none", run.energy),
        ]
        dens_first, dens_last = fields[0].density, fields[-1].density
        values = [(f, f.phi) for f in fields]

    for i, (f, vals) in enumerate(values):
        name = f"snapshot_{i:04d}.csv"
        _write_table(
            out_dir / name,
            [
                ("x", "length", f.x),
                ("re", "none", vals.real),
                ("im", "none", vals.imag),
                ("density", "wavenumber", np.abs(vals) ** 2),
            ],
            args,
        )
        files.append(name)
    _write_table(out_dir / "observables.csv", observables, args)
    files.append("observables.csv")
    write_line_plot(
        out_dir / "density.svg",
        x,
        [
            (f"t = {values[0][0].t:.6g}", dens_first),
            (f"t = {values[-1][0].t:.6g}", dens_last),
        ],
        title=f"{got['equation']} packet density",
        xlabel="x (natural)",
        ylabel="density (natural)",
    )
    files.append("density.svg")
    print(f"evolve: {len(values)} snapshots over t = {values[-1][0].t:.6g}")
    return files, _EXIT_OK


def _handle_validate(scn, out_dir, args):
    wanted = None
    if scn.params:
        got = _check_keys(scn.params, "validate", {}, {"criteria": list}, args.strict)
        if "criteria" in got:
            wanted = []
            for item in got["criteria"]:
                if not isinstance(item, int) or isinstance(item, bool) or not 1 <= item <= len(validation.ALL_CHECKS):
                    raise ScenarioError(
                        f"validate.criteria entries must be integers 1..{len(validation.ALL_CHECKS)}"
                    )
                wanted.append(item)
    results = validation.run_validation(wanted)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.index:2d} {r.name}: {r.detail}")
    doc = [
        {"index": r.index, "name": r.name, "passed": r.passed, "detail": r.detail}
        for r in results
    ]
    with open(out_dir / "validation.json", "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)} of {len(results)} checks passed")
    return ["validation.json"], _EXIT_OK if ok else _EXIT_PHYSICS


_HANDLERS = {
    "dispersion": _handle_dispersion,
    "geometry": _handle_geometry,
    "trace": _handle_trace,
    "tunnel": _handle_tunnel,
    "orbits": _handle_orbits,
    "qpotential": _handle_qpotential,
    "evolve": _handle_evolve,
    "validate": _handle_validate,
}


if __name__ == "__main__":
    sys.exit(main())
