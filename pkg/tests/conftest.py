"""Shared helpers: Pauli matrices and seeded random problem instances."""

from __future__ import annotations

import numpy as np
import pytest

from qslgeo import (
    DensityMatrix,
    HermitianOperator,
    TangentOperator,
    validate_density,
)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


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


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def diag_density(p, pd_floor: float = 1e-10) -> DensityMatrix:
    return validate_density(np.diag(np.asarray(p, dtype=float)).astype(complex), pd_floor=pd_floor)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260810)
