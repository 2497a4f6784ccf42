"""Simplex scans over qutrit scenarios and the measurement-pipeline runner.

Each scan walks diagonal states over a probability-simplex grid, evaluates a
per-point quantity, and serializes rows as CSV (12 significant digits, fixed
row order) plus a JSON summary sidecar, so repeated runs are byte-identical.

Built-in scenarios:
    ladder          drive i(w/2)(|0><1| + |1><2|) + h.c., observable X_ge;
                    only the 01 and 12 tangent pairs are active.
    bridged-ladder  drive -iw(|0><1| + 4|1><2| + |0><2|) + h.c., same
                    observable; all three tangent pairs are active, which
                    makes interior beta optima appear.
    chain           no drive; observable |0><1| + |1><2| + h.c., used for
                    fast-Hamiltonian speed-ratio maps.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .bounds import energy_bounds, optimize_beta
from .dynamics import (
    DEFAULT_DRIVE,
    DEFAULT_T_DECAY,
    RATES_INVERSE_MS,
    DecayChainSpec,
    DriveSpec,
    ExperimentRow,
    drive_hamiltonian,
    experiment_replica,
    observable_x_ge,
)
from .errors import (
    ConfigError,
    DegenerateCoherentTerm,
    DegenerateEigenvalues,
)
from .monotone import SLD, MonotoneFunction, beta_grid
from .operators import (
    DensityMatrix,
    HermitianOperator,
    commutator_generator,
    validate_density,
)
from .simplex import DEFAULT_FLOOR, DEFAULT_STEP, simplex_grid

CSV_FLOAT_FORMAT = ".12g"


@dataclass(frozen=True)
class Scenario:
    name: str
    observable: HermitianOperator
    hamiltonian: HermitianOperator | None


def _ladder_hamiltonian(omega: float) -> HermitianOperator:
    return drive_hamiltonian(DriveSpec(omega_ge=omega, omega_ef=omega))


def _bridged_ladder_hamiltonian(omega: float) -> HermitianOperator:
    h = np.zeros((3, 3), dtype=complex)
    h[0, 1] = -1j * omega
    h[1, 2] = -4j * omega
    h[0, 2] = -1j * omega
    return HermitianOperator(h + h.conj().T)


def _chain_observable() -> HermitianOperator:
    a = np.zeros((3, 3), dtype=complex)
    a[0, 1] = a[1, 2] = 1.0
    return HermitianOperator(a + a.conj().T)


def make_scenario(name: str, omega: float | None = None) -> Scenario:
    key = name.strip().lower()
    if key == "ladder":
        w = 2.0 * math.pi * 10.0 if omega is None else omega
        return Scenario(key, observable_x_ge(), _ladder_hamiltonian(w))
    if key == "bridged-ladder":
        w = 2.0 * math.pi * 2.5 if omega is None else omega
        return Scenario(key, observable_x_ge(), _bridged_ladder_hamiltonian(w))
    if key == "chain":
        return Scenario(key, _chain_observable(), None)
    raise ConfigError(f"unknown scenario {name!r}; expected ladder, bridged-ladder, or chain")


@dataclass(frozen=True)
class ScanRow:
    point: tuple[float, ...]
    beta_star: float
    xi_star: float | None
    auxiliary: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class ScanResult:
    kind: str
    rows: tuple[ScanRow, ...]
    skipped: int

    def summary(self) -> dict:
        xis = [r.xi_star for r in self.rows if r.xi_star is not None]
        ratios = [r.auxiliary[k] for r in self.rows for k in ("speed_ratio", "bound_ratio")
                  if k in r.auxiliary]
        return {
            "rows": len(self.rows),
            "skipped": self.skipped,
            "max_ratio": max(ratios) if ratios else None,
            "min_xi": min(xis) if xis else None,
        }


@dataclass(frozen=True)
class ScanConfig:
    scenario: str = "ladder"
    step: float = DEFAULT_STEP
    floor: float = DEFAULT_FLOOR
    beta_grid_step: float = 0.01
    beta: str | float = "rld"
    omega: float | None = None
    threads: int | None = None


def _parse_scan_config(obj: dict, default_scenario: str) -> ScanConfig:
    if not isinstance(obj, dict):
        raise ConfigError(f"scan config must be a JSON object, got {type(obj).__name__}")
    known = {"scenario", "step", "floor", "beta_grid_step", "beta", "omega", "threads"}
    unknown = set(obj) - known
    if unknown:
        raise ConfigError(f"unknown scan config fields: {sorted(unknown)}")
    try:
        return ScanConfig(
            scenario=str(obj.get("scenario", default_scenario)),
            step=float(obj.get("step", DEFAULT_STEP)),
            floor=float(obj.get("floor", DEFAULT_FLOOR)),
            beta_grid_step=float(obj.get("beta_grid_step", 0.01)),
            beta=obj.get("beta", "rld"),
            omega=None if obj.get("omega") is None else float(obj["omega"]),
            threads=None if obj.get("threads") is None else int(obj["threads"]),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad scan config value: {exc}") from exc


def _diagonal_state(point: Sequence[float]) -> DensityMatrix:
    return validate_density(np.diag(np.asarray(point, dtype=float)).astype(complex))


def _map_points(points, fn: Callable, threads: int | None) -> list:
    if threads is not None and threads < 1:
        raise ConfigError(f"threads must be >= 1, got {threads}")
    if threads == 1 or len(points) < 32:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, points, chunksize=64))


def scan_xi(config: ScanConfig) -> ScanResult:
    """Minimize the coherent ratio over beta at every grid point.

    Points where the arithmetic-mean coherent product vanishes have all
    pairwise means equal, so the ratio is 1 for every beta; they are
    reported with that limit value rather than skipped.
    """
    scenario = make_scenario(config.scenario, config.omega)
    if scenario.hamiltonian is None:
        raise ConfigError(f"scenario {scenario.name!r} has no drive; cannot scan xi")
    grid = simplex_grid(dim=3, step=config.step, floor=config.floor)
    h, a = scenario.hamiltonian, scenario.observable

    def one(point: tuple[float, ...]) -> ScanRow:
        rho = _diagonal_state(point)
        rdot = commutator_generator(rho, h)
        try:
            beta_star, xi_star = optimize_beta(rho, rdot, a, grid_step=config.beta_grid_step)
        except DegenerateCoherentTerm:
            beta_star, xi_star = -1.0, 1.0
        return ScanRow(point=point, beta_star=beta_star, xi_star=xi_star)

    rows = _map_points(grid.points, one, config.threads)
    return ScanResult(kind="xi", rows=tuple(rows), skipped=0)


def _fast_speed_profile(point: Sequence[float], a_eig: np.ndarray, betas: np.ndarray) -> np.ndarray:
    """Speed achieved by the coherent-bound-saturating drive at unit spectral
    spread, for each beta; the budget cancels in ratios."""
    p = np.asarray(point, dtype=float)
    d = len(p)
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d) if abs(a_eig[j, k]) > 1e-12]
    for j, k in pairs:
        if abs(p[j] - p[k]) / max(p[j], p[k]) <= 1e-8:
            raise DegenerateEigenvalues(
                f"eigenvalue pair ({j}, {k}) is degenerate but the observable couples it"
            )
    kernels = np.zeros((len(betas), d, d), dtype=complex)
    var_c = np.zeros(len(betas))
    for idx, beta in enumerate(betas):
        f = MonotoneFunction(float(beta))
        for j, k in pairs:
            m = f.mean(p[j], p[k])
            kernels[idx, j, k] = -1j * m / (p[j] - p[k]) * a_eig[j, k]
            kernels[idx, k, j] = kernels[idx, j, k].conjugate()
            var_c[idx] += 2.0 * abs(a_eig[j, k]) ** 2 * m
    spectra = np.linalg.eigvalsh(kernels)
    spread = spectra[:, -1] - spectra[:, 0]
    return var_c / spread


def scan_fast_h(config: ScanConfig) -> ScanResult:
    """Map of max-over-beta fast-drive speed relative to the beta = 1 drive.

    Grid points whose coupled eigenvalue pairs are degenerate are skipped
    and counted; the ratio is >= 1 everywhere since beta = 1 is in the
    feasible set.
    """
    scenario = make_scenario(config.scenario, config.omega)
    a = scenario.observable
    grid = simplex_grid(dim=3, step=config.step, floor=config.floor)
    betas = beta_grid(config.beta_grid_step)
    sld_index = int(np.argmin(np.abs(betas - 1.0)))

    def one(point: tuple[float, ...]) -> ScanRow | None:
        rho = _diagonal_state(point)
        a_eig = rho.to_eigenbasis(a.matrix)
        try:
            speeds = _fast_speed_profile(rho.eigenvalues, a_eig, betas)
        except DegenerateEigenvalues:
            return None
        best = int(np.argmax(speeds))
        ratio = float(speeds[best] / speeds[sld_index])
        return ScanRow(
            point=point,
            beta_star=float(betas[best]),
            xi_star=None,
            auxiliary={"speed_ratio": ratio},
        )

    maybe_rows = _map_points(grid.points, one, config.threads)
    rows = [r for r in maybe_rows if r is not None]
    return ScanResult(kind="fast-h", rows=tuple(rows), skipped=len(maybe_rows) - len(rows))


def scan_energy_bounds(config: ScanConfig) -> ScanResult:
    """Map of the condition-number speed bound against the legacy
    energy-variance bound, at fixed beta (default harmonic mean)."""
    scenario = make_scenario(config.scenario, config.omega)
    if scenario.hamiltonian is None:
        raise ConfigError(f"scenario {scenario.name!r} has no drive; cannot scan energy bounds")
    f = MonotoneFunction.from_spec(config.beta)
    grid = simplex_grid(dim=3, step=config.step, floor=config.floor)
    h, a = scenario.hamiltonian, scenario.observable

    def one(point: tuple[float, ...]) -> ScanRow:
        rho = _diagonal_state(point)
        report = energy_bounds(rho, h, f, a)
        ratio = report.speed_bound / report.legacy_bound
        return ScanRow(
            point=point,
            beta_star=f.beta,
            xi_star=None,
            auxiliary={"kappa": report.kappa, "bound_ratio": ratio},
        )

    rows = _map_points(grid.points, one, config.threads)
    return ScanResult(kind="energy", rows=tuple(rows), skipped=0)


# --- experiment config and serialization -------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    rates: DecayChainSpec = RATES_INVERSE_MS
    drive: DriveSpec = DEFAULT_DRIVE
    t_decay: tuple[float, ...] = DEFAULT_T_DECAY
    beta_list: tuple[float, ...] = (1.0, -1.0)


def parse_experiment_config(obj: dict) -> ExperimentConfig:
    if not isinstance(obj, dict):
        raise ConfigError(f"experiment config must be a JSON object, got {type(obj).__name__}")
    known = {"rates", "drive", "t_decay", "beta_list"}
    unknown = set(obj) - known
    if unknown:
        raise ConfigError(f"unknown experiment config fields: {sorted(unknown)}")
    try:
        rates_obj = obj.get("rates")
        rates = RATES_INVERSE_MS if rates_obj is None else DecayChainSpec(
            gamma_fe=float(rates_obj["gamma_fe"]), gamma_eg=float(rates_obj["gamma_eg"])
        )
        drive_obj = obj.get("drive")
        drive = DEFAULT_DRIVE if drive_obj is None else DriveSpec(
            omega_ge=float(drive_obj["omega_ge"]), omega_ef=float(drive_obj["omega_ef"])
        )
        t_decay = tuple(float(t) for t in obj.get("t_decay", DEFAULT_T_DECAY))
        beta_list = tuple(
            MonotoneFunction.from_spec(b).beta for b in obj.get("beta_list", (1.0, -1.0))
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad experiment config value: {exc}") from exc
    if not t_decay:
        raise ConfigError("t_decay list must not be empty")
    for required in (1.0, -1.0):
        if required not in beta_list:
            raise ConfigError(f"beta_list must include {required} for the fixed CSV schema")
    return ExperimentConfig(rates=rates, drive=drive, t_decay=t_decay, beta_list=beta_list)


def run_experiment(config: ExperimentConfig) -> list[ExperimentRow]:
    return experiment_replica(
        spec=config.rates, drive=config.drive, t_decay_list=config.t_decay
    )


def _fmt(x: float) -> str:
    return format(x, CSV_FLOAT_FORMAT)


def scan_csv_lines(result: ScanResult) -> list[str]:
    dim = len(result.rows[0].point) if result.rows else 3
    p_cols = [f"p{i}" for i in range(dim)]
    if result.kind == "xi":
        header = p_cols + ["beta_star", "xi_star"]
        rows = [
            [*(_fmt(x) for x in r.point), _fmt(r.beta_star), _fmt(r.xi_star)]
            for r in result.rows
        ]
    elif result.kind == "fast-h":
        header = p_cols + ["beta_star", "speed_ratio"]
        rows = [
            [*(_fmt(x) for x in r.point), _fmt(r.beta_star), _fmt(r.auxiliary["speed_ratio"])]
            for r in result.rows
        ]
    elif result.kind == "energy":
        header = p_cols + ["kappa", "bound_ratio"]
        rows = [
            [*(_fmt(x) for x in r.point), _fmt(r.auxiliary["kappa"]),
             _fmt(r.auxiliary["bound_ratio"])]
            for r in result.rows
        ]
    else:
        raise ConfigError(f"unknown scan kind {result.kind!r}")
    return [",".join(header)] + [",".join(row) for row in rows]


def experiment_csv_lines(rows: Sequence[ExperimentRow]) -> list[str]:
    header = "t_decay,speed,bound_sld,bound_rld,xi_rld"
    return [header] + [
        ",".join(_fmt(x) for x in (r.t_decay, r.speed, r.bound_sld, r.bound_rld, r.xi_rld))
        for r in rows
    ]


def write_csv(lines: Sequence[str], path: str | Path) -> None:
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_summary(result: ScanResult, csv_path: str | Path) -> Path:
    side = Path(csv_path).with_suffix(".summary.json")
    side.write_text(json.dumps(result.summary(), sort_keys=True) + "\n", encoding="utf-8")
    return side
