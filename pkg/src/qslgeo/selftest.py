"""Randomized self-checks wired to the CLI: eigenbasis formulas against the
superoperator oracle, and bound validity on random triples."""

from __future__ import annotations

import sys
import time
from typing import TextIO

import numpy as np

from .bounds import bound_nonsplit, bound_split, observable_speed
from .geometry import qfi, qfi_superop_oracle, generalized_variance, variance_superop_oracle
from .monotone import MonotoneFunction
from .operators import (
    DensityMatrix,
    HermitianOperator,
    TangentOperator,
    validate_density,
)

ORACLE_RTOL = 1e-9
BOUND_SLACK = 1e-9


def random_density(rng: np.random.Generator, dim: int) -> DensityMatrix:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T + 1e-3 * np.eye(dim)
    return validate_density(rho / np.trace(rho).real)


def random_hermitian(rng: np.random.Generator, dim: int) -> HermitianOperator:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator(0.5 * (g + g.conj().T))


def random_tangent(rng: np.random.Generator, dim: int) -> TangentOperator:
    h = random_hermitian(rng, dim).matrix
    return TangentOperator(h - np.trace(h) / dim * np.eye(dim))


def _close(a: float, b: float, rtol: float) -> bool:
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


def check_oracle_equivalence(seed: int, samples: int = 60) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        dim = int(rng.integers(2, 5))
        rho = random_density(rng, dim)
        f = MonotoneFunction(float(rng.uniform(-1.0, 1.0)))
        rdot = random_tangent(rng, dim)
        a = random_hermitian(rng, dim)
        pairs = (
            (qfi(rho, rdot, f), qfi_superop_oracle(rho, rdot, f)),
            (generalized_variance(rho, a, f), variance_superop_oracle(rho, a, f)),
        )
        for fast, slow in pairs:
            rel = abs(fast - slow) / max(1.0, abs(fast), abs(slow))
            worst = max(worst, rel)
    ok = worst <= ORACLE_RTOL
    return ok, f"oracle equivalence on {samples} random instances: worst rel dev {worst:.3e}"


def check_bound_validity(seed: int, samples: int = 80) -> tuple[bool, str]:
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for _ in range(samples):
        dim = int(rng.integers(2, 6))
        rho = random_density(rng, dim)
        rdot = random_tangent(rng, dim)
        a = random_hermitian(rng, dim)
        f = MonotoneFunction(float(rng.uniform(-1.0, 1.0)))
        speed = abs(observable_speed(rdot, a))
        report = bound_split(rho, rdot, a, f)
        nonsplit = bound_nonsplit(rho, rdot, a, f)
        slack_split = speed - report.bound_split
        slack_order = report.bound_split - nonsplit
        worst = max(
            worst,
            slack_split / max(1.0, report.bound_split),
            slack_order / max(1.0, nonsplit),
        )
    ok = worst <= BOUND_SLACK
    return ok, f"bound validity on {samples} random triples: worst violation {worst:.3e}"


def run_selftest(seed: int, stream: TextIO = sys.stdout) -> bool:
    checks = (check_oracle_equivalence, check_bound_validity)
    all_ok = True
    for check in checks:
        start = time.perf_counter()
        ok, message = check(seed)
        elapsed = time.perf_counter() - start
        verdict = "PASS" if ok else "FAIL"
        stream.write(f"[{verdict}] {message} ({elapsed:.2f}s)\n")
        all_ok = all_ok and ok
    return all_ok
