"""Command-line front end.

Subcommands: bound, scan-xi, scan-fast-h, scan-energy, experiment, selftest.
Configuration is JSON only; identical configs produce byte-identical output.
Exit codes: 0 success, 2 config error, 3 numerical-validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import selftest as selftest_mod
from .bounds import bound_split
from .errors import ConfigError, QslError
from .monotone import MonotoneFunction
from .operators import (
    HermitianOperator,
    TangentOperator,
    commutator_generator,
    matrix_from_json_dict,
    validate_density,
)
from .scans import (
    ScanResult,
    _parse_scan_config,
    experiment_csv_lines,
    parse_experiment_config,
    run_experiment,
    scan_csv_lines,
    scan_energy_bounds,
    scan_fast_h,
    scan_xi,
    write_csv,
    write_summary,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ConfigError(f"config {path!r} must hold a JSON object")
    return obj


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _matrix_field(obj: dict, key: str) -> np.ndarray:
    if key not in obj:
        raise ConfigError(f"config is missing the {key!r} matrix")
    try:
        return matrix_from_json_dict(obj[key])
    except QslError as exc:
        raise ConfigError(f"bad {key!r} matrix: {exc}") from exc


def _cmd_bound(args: argparse.Namespace) -> int:
    obj = _load_config(args.config)
    if args.config is None:
        raise ConfigError("bound requires --config with rho, observable, and a drive or tangent")
    rho = validate_density(_matrix_field(obj, "rho"))
    a = HermitianOperator(_matrix_field(obj, "observable"))
    if ("hamiltonian" in obj) == ("rdot" in obj):
        raise ConfigError("config must supply exactly one of 'hamiltonian' or 'rdot'")
    if "hamiltonian" in obj:
        rdot = commutator_generator(rho, HermitianOperator(_matrix_field(obj, "hamiltonian")))
    else:
        rdot = TangentOperator(_matrix_field(obj, "rdot"))
    beta_spec = args.beta if args.beta is not None else obj.get("beta", "sld")
    f = MonotoneFunction.from_spec(beta_spec)
    report = bound_split(rho, rdot, a, f)
    _emit(json.dumps(report.to_json_dict(), sort_keys=True), args.out)
    return EXIT_OK


def _run_scan(args: argparse.Namespace, runner, default_scenario: str) -> int:
    obj = _load_config(args.config)
    config = _parse_scan_config(obj, default_scenario)
    if args.beta is not None:
        config = replace(config, beta=args.beta)
    if args.grid_step is not None:
        config = replace(config, beta_grid_step=float(args.grid_step))
    if args.threads is not None:
        config = replace(config, threads=int(args.threads))
    result: ScanResult = runner(config)
    lines = scan_csv_lines(result)
    if args.out is None:
        _emit("\n".join(lines), None)
    else:
        write_csv(lines, args.out)
        write_summary(result, args.out)
    return EXIT_OK


def _cmd_experiment(args: argparse.Namespace) -> int:
    obj = _load_config(args.config)
    config = parse_experiment_config(obj)
    rows = run_experiment(config)
    lines = experiment_csv_lines(rows)
    if args.out is None:
        _emit("\n".join(lines), None)
    else:
        write_csv(lines, args.out)
    return EXIT_OK


def _cmd_selftest(args: argparse.Namespace) -> int:
    seed = 20260810 if args.seed is None else int(args.seed)
    ok = selftest_mod.run_selftest(seed=seed, stream=sys.stdout)
    return EXIT_OK if ok else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qslgeo",
        description="Geometric speed limits for quantum observables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON configuration file")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--beta", help="metric: a number in [-1, 1] or sld/wy/rld/log")
        p.add_argument("--grid-step", type=float, help="beta grid step for optimizers")
        p.add_argument("--threads", type=int, help="worker threads for grid scans")
        p.add_argument("--seed", type=int, help="RNG seed for randomized self-tests")

    for name, fn in (
        ("bound", _cmd_bound),
        ("scan-xi", lambda a: _run_scan(a, scan_xi, "ladder")),
        ("scan-fast-h", lambda a: _run_scan(a, scan_fast_h, "chain")),
        ("scan-energy", lambda a: _run_scan(a, scan_energy_bounds, "ladder")),
        ("experiment", _cmd_experiment),
        ("selftest", _cmd_selftest),
    ):
        p = sub.add_parser(name)
        add_common(p)
        p.set_defaults(handler=fn)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QslError as exc:
        print(f"numerical validation error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def console_main() -> None:
    raise SystemExit(main())
