"""
Command-line front end.

    paramagnon <command> [--config FILE] [--set key=value ...]
                         [--output PATH] [--format csv|json] [--workers N] [--tol X]

Configuration is a flat set of dotted keys (TOML). Flags and ``--set`` override
file values. Every output embeds the fully resolved configuration; pointing
``--config`` at a previous output file re-runs it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .errors import ParamagnonError, ParameterError
from .fluctuations import NoiseSpec, solve_lyapunov
from .model import (
    MODE_LABELS,
    ModelParams,
    SymmetricParams,
    build_full_matrix,
    build_reduced_matrix,
)
from .response import enhancement_factor, solve_steady_state
from .stability import compute_spectrum, trace_boundary
from .sweep import METRICS, eigenvalue_tracks, run_sweep
from .units import LabParams, lab_report

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

SCHEMA_VERSION = 1
UNSTABLE = "unstable"

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_NUMERIC = 0, 2, 3, 4

COMMANDS = ("eig", "steady", "enhance", "phase", "tracks", "lyapunov", "units")

PARAM_KEYS = {f"params.{name}" for name in ModelParams.__dataclass_fields__} | {
    "params.delta",
    "params.g",
    "params.gamma",
}

DEFAULTS: dict[str, Any] = {
    "run.workers": 1,
    "run.tol": 1e-6,
    "run.g_max": 5.0,
    "output.path": "-",
    "output.format": "csv",
    "eig.reduced": False,
    "phase.mode": "grid",
    "phase.metric": "stable",
    "phase.x": "delta",
    "phase.x_min": -6.0,
    "phase.x_max": 6.0,
    "phase.nx": 241,
    "phase.y": "G",
    "phase.y_min": 0.0,
    "phase.y_max": 3.0,
    "phase.ny": 241,
    "tracks.delta_min": 0.0,
    "tracks.delta_max": 6.0,
    "tracks.n": 601,
    "tracks.matching_radius": 1e-4,
    "noise.n_th_cavity": 0.0,
    "noise.n_th_m1": 0.0,
    "noise.n_th_m2": 0.0,
    **{f"units.{k}": v for k, v in asdict(LabParams()).items()},
}

OPTIONAL_KEYS = {"enhance.G_values", "enhance.G_min", "enhance.G_max", "enhance.n"}
KNOWN_KEYS = set(DEFAULTS) | PARAM_KEYS | OPTIONAL_KEYS


class ConfigError(ParamagnonError):
    exit_code = EXIT_CONFIG


# ---------------------------------------------------------------- config


def _flatten(tree: dict, prefix: str = "") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for key, value in tree.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, name + "."))
        else:
            flat[name] = value
    return flat


def _read_embedded(path: Path) -> dict[str, Any]:
    text = path.read_text()
    if path.suffix == ".json":
        return dict(json.loads(text)["config"])
    if path.suffix == ".csv":
        first = text.splitlines()[0]
        if not first.startswith("# "):
            raise ConfigError(f"{path} has no embedded configuration line")
        return dict(json.loads(first[2:])["config"])
    return _flatten(tomllib.loads(text))


def load_config_file(path: str) -> dict[str, Any]:
    try:
        return _read_embedded(Path(path))
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except (tomllib.TOMLDecodeError, json.JSONDecodeError, KeyError, IndexError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc


def parse_value(text: str) -> Any:
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def resolve_config(args: argparse.Namespace) -> dict[str, Any]:
    config = dict(DEFAULTS)
    if args.config:
        config.update(load_config_file(args.config))
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        config[key.strip()] = parse_value(value.strip())
    flags = {"output.path": args.output, "output.format": args.format, "run.workers": args.workers, "run.tol": args.tol}
    config.update({k: v for k, v in flags.items() if v is not None})
    unknown = sorted(set(config) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
    if config["output.format"] not in ("csv", "json"):
        raise ConfigError(f"output.format must be csv or json, got {config['output.format']!r}")
    return dict(sorted(config.items()))


def model_params(config: dict[str, Any]) -> ModelParams:
    values = {k.split(".", 1)[1]: v for k, v in config.items() if k.startswith("params.")}
    fields: dict[str, Any] = {}
    if "delta" in values:
        fields.update(delta_c=values["delta"], delta_1=values["delta"], delta_2=values["delta"])
    if "g" in values:
        fields.update(g1=values["g"], g2=values["g"])
    if "gamma" in values:
        fields.update(kappa=values["gamma"], gamma1=values["gamma"], gamma2=values["gamma"])
    fields.update({k: v for k, v in values.items() if k not in ("delta", "g", "gamma")})
    try:
        return ModelParams(**{k: (v if k == "pump_convention" else float(v)) for k, v in fields.items()})
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"invalid parameters: {exc}") from exc


def symmetric_params(p: ModelParams) -> SymmetricParams:
    if not (p.delta_c == p.delta_1 == p.delta_2 and p.g1 == p.g2 and p.kappa == p.gamma1 == p.gamma2):
        raise ConfigError("this command needs symmetric parameters (equal detunings, couplings, linewidths)")
    return SymmetricParams(
        delta=p.delta_c,
        g=p.g1,
        gamma=p.kappa,
        G=p.G,
        delta_2ph=p.delta_2ph,
        omega_rabi=p.omega_rabi,
        pump_convention=p.pump_convention,
    )


# ---------------------------------------------------------------- results


class Table:
    def __init__(self, columns: list[str], rows: list[list[Any]], summary: dict[str, Any] | None = None):
        self.columns = columns
        self.rows = rows
        self.summary = summary or {}


def _cell(value: Any) -> Any:
    if value is None:
        return "none"
    if isinstance(value, (bool, np.bool_)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return UNSTABLE if math.isnan(value) else float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def _complex_cols(name: str) -> list[str]:
    return [f"re_{name}", f"im_{name}"]


def _split(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def cmd_eig(config: dict[str, Any]) -> Table:
    p = model_params(config)
    if config["eig.reduced"]:
        sp = symmetric_params(p)
        spec = compute_spectrum(build_reduced_matrix(sp), sp)
    else:
        spec = compute_spectrum(build_full_matrix(p), p)
    rows = [[i + 1, *_split(z)] for i, z in enumerate(spec.eigenvalues)]
    return Table(["index", *_complex_cols("lambda")], rows, {"stable": spec.stable, "max_im": spec.max_im})


def cmd_steady(config: dict[str, Any]) -> Table:
    ss = solve_steady_state(model_params(config))
    rows = [[label, *_split(z)] for label, z in zip(MODE_LABELS, ss.amplitudes)]
    summary = {"spin_current": ss.spin_current, "condition_number": ss.condition_number}
    return Table(["mode", *_complex_cols("amplitude")], rows, summary)


def _enhance_G_values(config: dict[str, Any], p: ModelParams) -> list[float]:
    if "enhance.G_values" in config:
        return [float(g) for g in config["enhance.G_values"]]
    if "enhance.G_min" in config or "enhance.G_max" in config:
        n = int(config.get("enhance.n", 601))
        return [float(g) for g in np.linspace(config.get("enhance.G_min", 0.0), config["enhance.G_max"], n)]
    return [p.G]


def cmd_enhance(config: dict[str, Any]) -> Table:
    p = model_params(config)
    rows = []
    for G in _enhance_G_values(config, p):
        try:
            res = enhancement_factor(p.replace(G=G))
            rows.append([G, res.f_value, res.m_with_G, res.m_without_G])
        except ParamagnonError:
            rows.append([G, math.nan, math.nan, math.nan])
    return Table(["G", "F", "m_with_G", "m_without_G"], rows)


def _axis(config: dict[str, Any], key: str) -> tuple[str, np.ndarray]:
    return config[f"phase.{key}"], np.linspace(
        float(config[f"phase.{key}_min"]), float(config[f"phase.{key}_max"]), int(config[f"phase.n{key}"])
    )


def cmd_phase(config: dict[str, Any]) -> Table:
    p = model_params(config)
    workers = int(config["run.workers"])
    x_name, xs = _axis(config, "x")
    if config["phase.mode"] == "boundary":
        if x_name != "delta":
            raise ConfigError("boundary mode traces G_c along phase.x = delta")
        b = trace_boundary(xs, p, float(config["run.g_max"]), float(config["run.tol"]), workers)
        rows = [[d, "error" if i in b.errors else g] for i, (d, g) in enumerate(zip(b.delta_axis, b.g_c))]
        return Table(["delta", "G_c"], rows, {"tolerance": b.tolerance, "errors": {str(k): v for k, v in b.errors.items()}})
    if config["phase.mode"] != "grid":
        raise ConfigError(f"phase.mode must be grid or boundary, got {config['phase.mode']!r}")
    metric = config["phase.metric"]
    if metric not in METRICS:
        raise ConfigError(f"phase.metric must be one of {sorted(METRICS)}")
    y_name, ys = _axis(config, "y")
    grid = run_sweep(p, (x_name, xs), (y_name, ys), metric, workers).grid()
    rows = [[float(x), float(y), grid[i, j]] for i, x in enumerate(xs) for j, y in enumerate(ys)]
    return Table([x_name, y_name, metric], rows)


def cmd_tracks(config: dict[str, Any]) -> Table:
    sp = symmetric_params(model_params(config))
    deltas = np.linspace(float(config["tracks.delta_min"]), float(config["tracks.delta_max"]), int(config["tracks.n"]))
    tr = eigenvalue_tracks(sp, deltas, float(config["tracks.matching_radius"]))
    k = tr.long_lived_index()
    i_min = int(np.argmin(np.abs(tr.tracks[:, k].imag)))
    columns = ["delta"] + [c for n in range(1, 5) for c in _complex_cols(f"lambda{n}")]
    rows = [[float(d), *[v for z in row for v in _split(z)]] for d, row in zip(tr.delta, tr.tracks)]
    summary = {
        "long_lived_track": k + 1,
        "delta_at_min_abs_im": float(tr.delta[i_min]),
        "min_abs_im": float(abs(tr.tracks[i_min, k].imag)),
        "re_at_min": float(tr.tracks[i_min, k].real),
        "ambiguous_samples": tr.ambiguous,
    }
    return Table(columns, rows, summary)


def cmd_lyapunov(config: dict[str, Any]) -> Table:
    p = model_params(config)
    noise = NoiseSpec(
        float(config["noise.n_th_cavity"]), float(config["noise.n_th_m1"]), float(config["noise.n_th_m2"])
    )
    res = solve_lyapunov(p, noise)
    v = res.second_moments
    rows = [[MODE_LABELS[i], MODE_LABELS[j], *_split(v[i, j])] for i in range(6) for j in range(6)]
    summary = {
        "quantum_m2_occupancy": res.quantum_m2_occupancy,
        "semiclassical_spin_current": res.semiclassical_spin_current,
        "ratio_to_semiclassical": res.ratio_to_semiclassical,
        "residual": res.residual,
        "min_eigenvalue": res.min_eigenvalue(),
    }
    return Table(["row", "col", *_complex_cols("V")], rows, summary)


def cmd_units(config: dict[str, Any]) -> Table:
    kwargs = {k.split(".", 1)[1]: float(v) for k, v in config.items() if k.startswith("units.")}
    try:
        report = lab_report(LabParams(**kwargs))
    except ValueError as exc:
        raise ParameterError(str(exc)) from exc
    return Table(["quantity", "value"], [[k, v] for k, v in report.items()])


HANDLERS = {
    "eig": cmd_eig,
    "steady": cmd_steady,
    "enhance": cmd_enhance,
    "phase": cmd_phase,
    "tracks": cmd_tracks,
    "lyapunov": cmd_lyapunov,
    "units": cmd_units,
}


# ---------------------------------------------------------------- output


def _header(command: str, config: dict[str, Any], p: ModelParams | None, table: Table) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "command": command,
        "config": config,
        "resolved_params": None if p is None else asdict(p),
        "summary": {k: _cell(v) for k, v in table.summary.items()},
    }


def render(command: str, config: dict[str, Any], table: Table) -> str:
    p = None if command == "units" else model_params(config)
    header = _header(command, config, p, table)
    rows = [[_cell(v) for v in row] for row in table.rows]
    if config["output.format"] == "json":
        return json.dumps({**header, "columns": table.columns, "rows": rows}, indent=1) + "\n"
    buf = io.StringIO()
    buf.write("# " + json.dumps(header, separators=(",", ":")) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paramagnon", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="TOML config or a previous output file")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (repeatable)")
    parser.add_argument("--output", help="output path, '-' for stdout")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--workers", type=int)
    parser.add_argument("--tol", type=float)
    return parser


def _fail(code: int, exc: BaseException) -> int:
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    print(json.dumps(record), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        table = HANDLERS[args.command](config)
        text = render(args.command, config, table)
    except ParamagnonError as exc:
        return _fail(exc.exit_code, exc)
    except (ValueError, TypeError, KeyError) as exc:
        return _fail(EXIT_CONFIG, exc)
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        return _fail(EXIT_NUMERIC, exc)
    if config["output.path"] == "-":
        sys.stdout.write(text)
    else:
        Path(config["output.path"]).write_text(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
