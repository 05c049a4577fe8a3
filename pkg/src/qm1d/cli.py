"""Batch front end: JSON scenarios in, CSV or JSON tables out.

The scenario file is validated against a strict schema (unknown keys are
rejected) before any computation runs.  Data outputs are byte-identical
across repeated runs: floats are serialized with their shortest round-trip
representation and row order is fixed.  Run metadata that legitimately
varies (timestamps, library versions) goes to a ``<output>.meta.json``
sidecar, never into the data files.

Exit codes: 0 success, 2 schema violation, 3 numerical failure, 4 I/O
failure.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .analytic import (
    GaussianPacketParams,
    blackbody_density,
    free_packet_xt,
    gaussian_packet_x,
    oscillator_energy,
    packet_width,
    well_energy,
)
from .constants import PhysicalConstants, si_constants
from .core import Grid, WaveFunction, make_grid, normalize
from .eigensolver import Spectrum, build_hamiltonian, solve_bound_states
from .errors import QmError
from .evolution import EvolutionConfig, Trajectory, evolve
from .observables import (
    momentum_operator,
    position_operator,
    uncertainty,
    uncertainty_bound_check,
)
from .potentials import (
    Barrier,
    Harmonic,
    InfiniteWell,
    LinearRamp,
    PiecewiseConstant,
    Potential,
    Sampled,
)
from .scattering import transmission_sweep

OUTPUT_DIR_ENV = "QM1D_OUTPUT_DIR"

COMMANDS = ("spectrum", "scatter", "evolve", "packet", "blackbody", "uncertainty")


class SchemaError(Exception):
    """Scenario file violates the schema; nothing was computed."""


# ---------------------------------------------------------------------------
# Schema helpers


def _obj(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"{where} must be an object")
    return value


def _keys(obj: dict, where: str, required: dict, optional: dict | None = None) -> dict:
    optional = optional or {}
    out = {}
    for key in obj:
        if key not in required and key not in optional:
            raise SchemaError(f"unknown key {key!r} in {where}")
    for key, parse in required.items():
        if key not in obj:
            raise SchemaError(f"missing key {key!r} in {where}")
        out[key] = parse(obj[key], f"{where}.{key}")
    for key, parse in optional.items():
        if key in obj:
            out[key] = parse(obj[key], f"{where}.{key}")
    return out


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where} must be a number")
    if not math.isfinite(value):
        raise SchemaError(f"{where} must be finite")
    return float(value)


def _positive(value, where: str) -> float:
    x = _number(value, where)
    if x <= 0.0:
        raise SchemaError(f"{where} must be positive")
    return x


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where} must be an integer")
    return value


def _positive_int(value, where: str) -> int:
    n = _integer(value, where)
    if n < 1:
        raise SchemaError(f"{where} must be at least 1")
    return n


def _boolean(value, where: str) -> bool:
    if not isinstance(value, bool):
        raise SchemaError(f"{where} must be true or false")
    return value


def _string(value, where: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{where} must be a string")
    return value


def _choice(options):
    def parse(value, where: str) -> str:
        s = _string(value, where)
        if s not in options:
            raise SchemaError(f"{where} must be one of {sorted(options)}, got {s!r}")
        return s

    return parse


def _raw(value, where: str):
    return value


def _number_list(value, where: str) -> list[float]:
    if not isinstance(value, list) or not value:
        raise SchemaError(f"{where} must be a non-empty array of numbers")
    return [_number(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _range_or_list(value, where: str) -> list[float]:
    """Either an explicit array or {start, stop, count} (endpoints included)."""
    if isinstance(value, list):
        return _number_list(value, where)
    spec = _keys(
        _obj(value, where),
        where,
        {"start": _number, "stop": _number, "count": _positive_int},
    )
    if spec["count"] == 1:
        return [spec["start"]]
    return [float(v) for v in np.linspace(spec["start"], spec["stop"], spec["count"])]


# ---------------------------------------------------------------------------
# Scenario blocks


def _parse_constants(obj, where: str) -> tuple[PhysicalConstants, float]:
    """Returns the constants profile and the particle mass."""
    spec = _keys(
        _obj(obj, where),
        where,
        {"profile": _choice({"natural", "si"})},
        {"mass": _positive},
    )
    if spec["profile"] == "si":
        if "mass" not in spec:
            raise SchemaError(f"{where}: the si profile requires an explicit mass")
        return si_constants(spec["mass"]), spec["mass"]
    mass = spec.get("mass", 1.0)
    return PhysicalConstants(mass=mass), mass


def _parse_grid(obj, where: str) -> Grid:
    spec = _keys(
        _obj(obj, where),
        where,
        {"x_min": _number, "x_max": _number, "n": _positive_int},
    )
    if spec["x_max"] <= spec["x_min"]:
        raise SchemaError(f"{where}: x_max must exceed x_min")
    if spec["n"] < 8:
        raise SchemaError(f"{where}: n must be at least 8")
    return make_grid(spec["x_min"], spec["x_max"], spec["n"])


def _parse_segments(value, where: str) -> tuple:
    """Empty array means the free particle, V = 0 everywhere."""
    if not isinstance(value, list):
        raise SchemaError(f"{where} must be an array of [start, end, value]")
    segs = []
    for i, seg in enumerate(value):
        if not isinstance(seg, list) or len(seg) != 3:
            raise SchemaError(f"{where}[{i}] must be [start, end, value]")
        start, end, v = (_number(x, f"{where}[{i}][{j}]") for j, x in enumerate(seg))
        segs.append((start, end, v))
    return tuple(segs)


def _parse_potential(obj, where: str, mass: float, grid: Grid | None) -> Potential:
    body = _obj(obj, where)
    if "kind" not in body:
        raise SchemaError(f"missing key 'kind' in {where}")
    kind = _string(body["kind"], f"{where}.kind")
    try:
        if kind == "infinite_well":
            spec = _keys(body, where, {"kind": _string, "a": _positive})
            return InfiniteWell(a=spec["a"])
        if kind == "barrier":
            spec = _keys(body, where, {"kind": _string, "v0": _positive, "a": _positive})
            return Barrier(v0=spec["v0"], a=spec["a"])
        if kind == "harmonic":
            spec = _keys(body, where, {"kind": _string, "omega": _positive})
            return Harmonic(omega=spec["omega"], mass=mass)
        if kind == "linear_ramp":
            spec = _keys(body, where, {"kind": _string, "lam": _positive})
            return LinearRamp(lam=spec["lam"])
        if kind == "piecewise_constant":
            spec = _keys(body, where, {"kind": _string, "segments": _parse_segments})
            return PiecewiseConstant(segments=spec["segments"])
        if kind == "sampled":
            spec = _keys(body, where, {"kind": _string, "values": _number_list})
            if grid is None:
                raise SchemaError(f"{where}: a sampled potential requires a grid block")
            if len(spec["values"]) != grid.n:
                raise SchemaError(
                    f"{where}: {len(spec['values'])} values for a {grid.n}-point grid"
                )
            return Sampled(values=np.asarray(spec["values"]), grid=grid)
    except QmError as exc:
        raise SchemaError(f"{where}: {exc}") from exc
    raise SchemaError(f"{where}.kind: unknown potential kind {kind!r}")


def _parse_output(obj, where: str) -> dict:
    return _keys(
        _obj(obj, where),
        where,
        {"format": _choice({"csv", "json"}), "path": _string},
    )


def _parse_gaussian(obj, where: str) -> dict:
    return _keys(
        _obj(obj, where),
        where,
        {"alpha": _positive, "k0": _number},
        {"x0": _number},
    )


# ---------------------------------------------------------------------------
# Tidy plot rows


def emit_plot_data(result) -> tuple[list[str], list[list]]:
    """Long-format (series, t, x, value) rows for spectra, trajectories,
    and transmission sweeps."""
    columns = ["series", "t", "x", "value"]
    rows: list[list] = []
    if isinstance(result, Spectrum):
        for i, state in enumerate(result.states):
            xs = state.grid.points
            for x, v in zip(xs, state.values.real):
                rows.append([f"state_{i}", "", float(x), float(v)])
        return columns, rows
    if isinstance(result, Trajectory):
        for name, series in (
            ("width", result.x_spread),
            ("x_mean", result.x_mean),
            ("p_mean", result.p_mean),
            ("norm", result.norm),
            ("energy", result.energy),
        ):
            for t, v in zip(result.times, series):
                rows.append([name, float(t), "", float(v)])
        return columns, rows
    if isinstance(result, list):  # transmission sweep
        for row in result:
            rows.append(["prob_T", "", float(row.energy), float(row.prob_t)])
        for row in result:
            rows.append(["prob_R", "", float(row.energy), float(row.prob_r)])
        return columns, rows
    raise QmError(f"no plot-data emitter for {type(result).__name__}")


def _trajectory_density_rows(trajectory: Trajectory) -> tuple[list[str], list[list]]:
    columns = ["series", "t", "x", "value"]
    rows = []
    for t, snap in zip(trajectory.times, trajectory.snapshots):
        xs = snap.grid.points
        density = np.abs(snap.values) ** 2
        for x, v in zip(xs, density):
            rows.append(["density", float(t), float(x), float(v)])
    return columns, rows


# ---------------------------------------------------------------------------
# Commands: a parse step (schema only) and an execute step (numerics)


def _parse_spectrum(body, mass):
    spec = _keys(
        body,
        "scenario",
        {
            "command": _string,
            "constants": _raw,
            "grid": _parse_grid,
            "potential": _raw,
            "count": _positive_int,
            "output": _parse_output,
        },
        {"emit_states": _boolean},
    )
    spec["potential"] = _parse_potential(
        spec["potential"], "scenario.potential", mass, spec["grid"]
    )
    return spec


def _execute_spectrum(spec, constants, mass):
    grid = spec["grid"]
    potential = spec["potential"]
    h = build_hamiltonian(grid, potential, mass, constants)
    spectrum = solve_bound_states(h, spec["count"])

    columns = ["n", "E_numeric", "E_analytic", "rel_error"]
    rows = []
    for i, energy in enumerate(spectrum.energies):
        level = i + 1
        if isinstance(potential, InfiniteWell):
            reference = well_energy(level, potential.a, constants)
        elif isinstance(potential, Harmonic):
            reference = oscillator_energy(level - 1, potential.omega, constants)
        else:
            reference = None
        if reference is None:
            rows.append([level, float(energy), "", ""])
        else:
            rel = abs(float(energy) - reference) / abs(reference)
            rows.append([level, float(energy), reference, rel])
    outputs = {spec["output"]["path"]: (columns, rows)}
    if spec.get("emit_states"):
        outputs[_derived_path(spec["output"]["path"], "states")] = emit_plot_data(spectrum)
    return outputs


def _parse_scatter(body, mass):
    spec = _keys(
        body,
        "scenario",
        {
            "command": _string,
            "constants": _raw,
            "potential": _raw,
            "energies": _range_or_list,
            "output": _parse_output,
        },
    )
    spec["potential"] = _parse_potential(spec["potential"], "scenario.potential", mass, None)
    return spec


def _execute_scatter(spec, constants, mass):
    results = transmission_sweep(spec["potential"], spec["energies"], mass, constants)
    columns = ["energy", "prob_R", "prob_T", "phase_R", "phase_T"]
    rows = [
        [r.energy, r.prob_r, r.prob_t, cmath.phase(r.r), cmath.phase(r.t)]
        for r in results
    ]
    return {spec["output"]["path"]: (columns, rows)}


def _initial_packet(grid: Grid, init: dict, mass: float,
                    constants: PhysicalConstants) -> WaveFunction:
    params = GaussianPacketParams(
        alpha=init["alpha"], k0=init["k0"], mass=mass, constants=constants
    )
    x0 = init.get("x0", 0.0)
    values = gaussian_packet_x(params, grid.points - x0)
    return normalize(WaveFunction(grid, values))


def _parse_evolve(body, mass):
    spec = _keys(
        body,
        "scenario",
        {
            "command": _string,
            "constants": _raw,
            "grid": _parse_grid,
            "potential": _raw,
            "initial": _parse_gaussian,
            "method": _choice({"crank_nicolson", "split_step"}),
            "dt": _positive,
            "steps": _positive_int,
            "output": _parse_output,
        },
        {"observables_every": _positive_int, "emit_density": _boolean},
    )
    spec["potential"] = _parse_potential(
        spec["potential"], "scenario.potential", mass, spec["grid"]
    )
    return spec


def _execute_evolve(spec, constants, mass):
    grid = spec["grid"]
    psi0 = _initial_packet(grid, spec["initial"], mass, constants)
    config = EvolutionConfig(
        dt=spec["dt"],
        steps=spec["steps"],
        method=spec["method"],
        observables_every=spec.get("observables_every", 1),
    )
    trajectory = evolve(psi0, spec["potential"], config, mass, constants)
    columns = ["t", "norm", "x_mean", "p_mean", "x_spread", "p_spread", "energy"]
    rows = [
        [
            float(trajectory.times[i]),
            float(trajectory.norm[i]),
            float(trajectory.x_mean[i]),
            float(trajectory.p_mean[i]),
            float(trajectory.x_spread[i]),
            float(trajectory.p_spread[i]),
            float(trajectory.energy[i]),
        ]
        for i in range(len(trajectory.times))
    ]
    outputs = {spec["output"]["path"]: (columns, rows)}
    if spec.get("emit_density"):
        outputs[_derived_path(spec["output"]["path"], "density")] = (
            _trajectory_density_rows(trajectory)
        )
    return outputs


def _parse_packet(body, mass):
    spec = _keys(
        body,
        "scenario",
        {
            "command": _string,
            "constants": _raw,
            "packet": _parse_gaussian,
            "times": _number_list,
            "output": _parse_output,
        },
        {"grid": _parse_grid, "emit_density": _boolean},
    )
    if spec.get("emit_density") and "grid" not in spec:
        raise SchemaError("scenario: emit_density requires a grid block")
    return spec


def _execute_packet(spec, constants, mass):
    params = GaussianPacketParams(
        alpha=spec["packet"]["alpha"], k0=spec["packet"]["k0"],
        mass=mass, constants=constants,
    )
    columns = ["series", "t", "x", "value"]
    rows = []
    for t in spec["times"]:
        rows.append(["width", float(t), "", packet_width(params, t)])
    if spec.get("emit_density"):
        xs = spec["grid"].points
        for t in spec["times"]:
            density = np.abs(free_packet_xt(params, xs, t)) ** 2
            for x, v in zip(xs, density):
                rows.append(["density", float(t), float(x), float(v)])
    return {spec["output"]["path"]: (columns, rows)}


def _parse_blackbody(body, mass):
    return _keys(
        body,
        "scenario",
        {
            "command": _string,
            "constants": _raw,
            "temperature": _positive,
            "frequencies": _range_or_list,
            "output": _parse_output,
        },
    )


def _execute_blackbody(spec, constants, mass):
    columns = ["nu", "u_planck", "u_rayleigh_jeans", "ratio"]
    rows = []
    for nu in spec["frequencies"]:
        planck = blackbody_density(nu, spec["temperature"], "planck", constants)
        rj = blackbody_density(nu, spec["temperature"], "rayleigh_jeans", constants)
        rows.append([float(nu), planck, rj, planck / rj])
    return {spec["output"]["path"]: (columns, rows)}


def _parse_uncertainty(body, mass):
    spec = _keys(
        body,
        "scenario",
        {
            "command": _string,
            "constants": _raw,
            "grid": _parse_grid,
            "state": _raw,
            "output": _parse_output,
        },
        {"potential": _raw},
    )
    state_body = _obj(spec["state"], "scenario.state")
    if "kind" not in state_body:
        raise SchemaError("missing key 'kind' in scenario.state")
    kind = _string(state_body["kind"], "scenario.state.kind")
    if kind == "gaussian":
        spec["state"] = _keys(
            state_body, "scenario.state",
            {"kind": _string, "alpha": _positive, "k0": _number},
            {"x0": _number},
        )
    elif kind == "eigenstate":
        spec["state"] = _keys(
            state_body, "scenario.state",
            {"kind": _string, "n": _positive_int},
        )
        if "potential" not in spec:
            raise SchemaError("scenario: an eigenstate state requires a potential")
    else:
        raise SchemaError("scenario.state.kind must be 'gaussian' or 'eigenstate'")
    if "potential" in spec:
        spec["potential"] = _parse_potential(
            spec["potential"], "scenario.potential", mass, spec["grid"]
        )
    return spec


def _execute_uncertainty(spec, constants, mass):
    grid = spec["grid"]
    state = spec["state"]
    if state["kind"] == "gaussian":
        psi = _initial_packet(grid, state, mass, constants)
    else:
        h = build_hamiltonian(grid, spec["potential"], mass, constants)
        spectrum = solve_bound_states(h, state["n"])
        psi = spectrum.states[state["n"] - 1]

    x_op = position_operator(grid)
    p_op = momentum_operator(grid, constants)
    report = uncertainty_bound_check(x_op, p_op, psi)
    columns = ["x_spread", "p_spread", "product", "bound", "satisfied"]
    rows = [[
        uncertainty(x_op, psi),
        uncertainty(p_op, psi),
        report.lhs,
        report.rhs,
        report.satisfied,
    ]]
    return {spec["output"]["path"]: (columns, rows)}


_PARSERS = {
    "spectrum": _parse_spectrum,
    "scatter": _parse_scatter,
    "evolve": _parse_evolve,
    "packet": _parse_packet,
    "blackbody": _parse_blackbody,
    "uncertainty": _parse_uncertainty,
}

_EXECUTORS = {
    "spectrum": _execute_spectrum,
    "scatter": _execute_scatter,
    "evolve": _execute_evolve,
    "packet": _execute_packet,
    "blackbody": _execute_blackbody,
    "uncertainty": _execute_uncertainty,
}


# ---------------------------------------------------------------------------
# Serialization


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        # coerce numpy scalars so repr is the shortest round-trip form
        return repr(float(value))
    return str(value)


def _derived_path(path: str, tag: str) -> str:
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{tag}{p.suffix}"))


def _write_table(path: Path, fmt: str, columns: list[str], rows: list[list]):
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_format_cell(v) for v in row])
    else:
        clean = [
            [float(v) if isinstance(v, float) else v for v in row] for row in rows
        ]
        payload = {"columns": columns, "rows": clean}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _write_sidecar(path: Path, scenario_path: str, command: str):
    meta = {
        "tool": "qm1d",
        "version": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "command": command,
        "scenario": str(scenario_path),
        "written_unix_time": time.time(),
    }
    with open(str(path) + ".meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def load_scenario(path: str) -> dict:
    """Read, JSON-parse, and fully schema-check a scenario; returns the
    parsed spec with constructed objects (grid, potential, ...)."""
    with open(path) as fh:
        text = fh.read()
    try:
        body = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"scenario is not valid JSON: {exc}") from exc
    body = _obj(body, "scenario")
    if "command" not in body or body["command"] not in COMMANDS:
        raise SchemaError(f"scenario.command must be one of {list(COMMANDS)}")
    if "constants" not in body:
        raise SchemaError("missing key 'constants' in scenario")
    constants, mass = _parse_constants(body["constants"], "scenario.constants")
    spec = _PARSERS[body["command"]](body, mass)
    spec["_constants"] = constants
    spec["_mass"] = mass
    return spec


def run_scenario(
    scenario_path: str,
    out_dir: str | None = None,
    format_override: str | None = None,
) -> list[Path]:
    """Validate, compute, and write the declared outputs.

    Returns the list of data files written (sidecars not included).  No
    file is touched unless the whole computation succeeded.
    """
    spec = load_scenario(scenario_path)
    constants, mass = spec["_constants"], spec["_mass"]
    outputs = _EXECUTORS[spec["command"]](spec, constants, mass)

    base = Path(out_dir or os.environ.get(OUTPUT_DIR_ENV) or ".")
    fmt = format_override or spec["output"]["format"]
    written = []
    for rel_path, (columns, rows) in outputs.items():
        target = base / rel_path
        _write_table(target, fmt, columns, rows)
        _write_sidecar(target, scenario_path, spec["command"])
        written.append(target)
    return written


# ---------------------------------------------------------------------------
# Entry point


def _error_object(exit_code: int, exc: Exception) -> str:
    return json.dumps(
        {"error": {"exit_code": exit_code, "type": type(exc).__name__, "message": str(exc)}}
    )


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qm1d", description="1D quantum mechanics scenario runner"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    run_p = sub.add_parser("run", help="execute a scenario file")
    run_p.add_argument("scenario", help="path to a JSON scenario")
    run_p.add_argument("--out", default=None, help="output directory")
    run_p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="override the scenario output format")

    val_p = sub.add_parser("validate", help="schema-check a scenario file")
    val_p.add_argument("scenario", help="path to a JSON scenario")

    sub.add_parser("version", help="print the version")

    args = parser.parse_args(argv)

    if args.subcommand == "version":
        print(__version__)
        return 0

    if args.subcommand == "validate":
        try:
            spec = load_scenario(args.scenario)
        except SchemaError as exc:
            print(_error_object(2, exc), file=sys.stderr)
            return 2
        except OSError as exc:
            print(_error_object(4, exc), file=sys.stderr)
            return 4
        print(f"{args.scenario}: valid {spec['command']} scenario")
        return 0

    try:
        written = run_scenario(args.scenario, args.out, args.format)
    except SchemaError as exc:
        print(_error_object(2, exc), file=sys.stderr)
        return 2
    except QmError as exc:
        print(_error_object(3, exc), file=sys.stderr)
        return 3
    except OSError as exc:
        print(_error_object(4, exc), file=sys.stderr)
        return 4
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
