"""Headless command line: batch runs, parameter sweeps, and the session
server.

Exit codes: 0 success, 2 configuration error, 3 runtime error, 4 port in
use. Config files (sweep specs, value literals) use the same JSON encoding
as the wire protocol bodies.
"""

from __future__ import annotations

import argparse
import csv
import errno
import itertools
import json
import logging
import os
import sys
from pathlib import Path

from . import kernel, models  # noqa: F401
from .errors import SimulationError
from .observation import ProbeSeries, export_csv, format_real, sample_probes
from .space import apply_layer, import_ascii_grid
from .timetravel import export_timeline, record_run

log = logging.getLogger("parsim")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_PORT = 4


class ConfigError(Exception):
    pass


def _setup_logging() -> None:
    level = os.environ.get("SIM_LOG_LEVEL", "info").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    if level not in levels:
        raise ConfigError(f"SIM_LOG_LEVEL must be one of {sorted(levels)}")
    logging.basicConfig(level=levels[level], format="%(levelname)s %(name)s: %(message)s")


def _parse_value(text: str):
    """Parameter literals are JSON; bare words fall back to symbols."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _parse_params(pairs: list[str]) -> dict:
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ConfigError(f"--param expects k=v, got {pair!r}")
        params[key] = _parse_value(value)
    return params


def _collect_series(state, model, steps: int) -> list[ProbeSeries]:
    series = [ProbeSeries(p.name) for p in model.probes]
    for s in series:
        s.append(0, state.probe_values[s.name])
    for tick in range(1, steps + 1):
        state = kernel.step(state)
        for s in series:
            s.append(tick, state.probe_values[s.name])
    return series


def cmd_run(args) -> int:
    if args.steps < 0:
        raise ConfigError("--steps must be >= 0")
    if not args.seed:
        raise ConfigError("at least one --seed is required")
    model = kernel.get_model(args.model)
    params = _parse_params(args.param)
    layers = []
    for binding in args.layer:
        attr, sep, path = binding.partition("=")
        if not sep:
            raise ConfigError(f"--layer expects attr=path, got {binding!r}")
        layers.append((attr, import_ascii_grid(Path(path).read_text(), name=attr)))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    for seed in args.seed:
        state = kernel.init_simulation(model, params, seed)
        if layers:
            for attr, layer in layers:
                state = apply_layer(state, layer, attr, clamp=(0.0, 1.0))
            state.probe_values = sample_probes(state, model.probes)
        if args.timeline_export:
            timeline = record_run(state, args.steps)
            export_timeline(timeline, Path(args.timeline_export) / f"seed{seed}")
            series = [ProbeSeries(p.name) for p in model.probes]
            for snap in timeline.snapshots:
                probes = snap.restore().probe_values
                for s in series:
                    s.append(snap.tick, probes[s.name])
        else:
            series = _collect_series(state, model, args.steps)
        path = out.with_name(f"{out.stem}_seed{seed}{out.suffix or '.csv'}")
        path.write_text(export_csv(series))
        log.info("wrote %s", path)
    return EXIT_OK


def _sweep_rows(spec: dict):
    grid = spec.get("grid") or {}
    if not isinstance(grid, dict):
        raise ConfigError("'grid' must map parameter names to value lists")
    names = sorted(grid)
    for name in names:
        if not isinstance(grid[name], list) or not grid[name]:
            raise ConfigError(f"grid entry {name!r} must be a non-empty list")
    combos = list(itertools.product(*(grid[n] for n in names))) if names else [()]
    if not combos:
        raise ConfigError("empty parameter grid")
    return names, combos


def cmd_sweep(args) -> int:
    try:
        spec = json.loads(Path(args.spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read sweep spec: {exc}")
    for key in ("model", "steps", "seeds", "out"):
        if key not in spec:
            raise ConfigError(f"sweep spec is missing {key!r}")
    model = kernel.get_model(spec["model"])
    base = spec.get("params") or {}
    names, combos = _sweep_rows(spec)
    rows = []
    # Lexicographic grid order (sorted parameter names, values as listed),
    # seeds innermost. Combinations are independent runs, so executing
    # them in any order would give the same rows.
    for combo in combos:
        overrides = dict(base)
        overrides.update(dict(zip(names, combo)))
        kernel.validate_params(model, overrides)
        for seed in spec["seeds"]:
            state = kernel.init_simulation(model, overrides, seed)
            final = kernel.run(state, spec["steps"])
            rows.append((combo, seed, final.probe_values))
    out = Path(spec["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    probe_names = [p.name for p in model.probes]
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(names) + ["seed"] + probe_names)
        for combo, seed, probes in rows:
            writer.writerow([format_real(v) if isinstance(v, float) else v
                             for v in combo]
                            + [seed]
                            + [format_real(probes[n]) for n in probe_names])
    log.info("wrote %s (%d rows)", out, len(rows))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    if args.models:
        models_dir = Path(args.models)
        if not models_dir.is_dir():
            raise ConfigError(f"models dir {args.models!r} is not a directory")
        for preset in sorted(models_dir.glob("*.json")):
            _register_preset(preset)
    app = create_app()
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            print(f"port {args.port} already in use", file=sys.stderr)
            return EXIT_PORT
        raise
    return EXIT_OK


def _register_preset(path: Path) -> None:
    """A preset file {"model": base, "params": {...}} registers a named
    variant of a built-in model with different defaults."""
    import dataclasses

    spec = json.loads(path.read_text())
    base = kernel.get_model(spec["model"])
    merged = kernel.validate_params(base, spec.get("params") or {})
    params = {name: dataclasses.replace(vs, default=merged[name])
              for name, vs in base.params.items()}
    kernel.register_model(dataclasses.replace(base, name=path.stem, params=params))
    log.info("registered preset %s (base %s)", path.stem, base.name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="parsim")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a model headless and export probe CSVs")
    p_run.add_argument("--model", required=True)
    p_run.add_argument("--steps", type=int, required=True)
    p_run.add_argument("--seed", type=int, action="append", required=True)
    p_run.add_argument("--param", action="append", default=[], metavar="K=V")
    p_run.add_argument("--layer", action="append", default=[], metavar="ATTR=PATH")
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--timeline-export", default=None, metavar="DIR")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="cartesian parameter sweep")
    p_sweep.add_argument("--spec", required=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_serve = sub.add_parser("serve", help="start the session server")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--models", default=None, help="directory of model presets")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        _setup_logging()
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, SimulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def entry() -> None:
    sys.exit(main())
