"""Monotone-metric information geometry on the manifold of full-rank states.

For a state rho = sum_j p_j |j><j|, a tangent rdot and an observable A, the
generalized quantities reduce to weighted sums in the state eigenbasis:

    variance:   sum_ij |  (A0)_ij|^2 * m(p_i, p_j)
    Fisher:     sum_ij |(rdot)_ij|^2 / m(p_i, p_j)

with A0 the centered observable and m the mean induced by the chosen
monotone function.  Diagonal (incoherent) terms use m(p, p) = p and are the
same for every metric; off-diagonal (coherent) terms carry the metric
dependence.  A direct d^2 x d^2 superoperator construction of the same
quantities is provided as an independent cross-check oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidDistribution,
    SingularSuperoperator,
)
from .monotone import MonotoneFunction
from .operators import (
    DensityMatrix,
    HermitianOperator,
    TangentOperator,
    expectation,
    matrix_to_json_dict,
)

_ORACLE_MAX_DIM = 8


def _require_same_dim(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(f"dimension mismatch: {a} vs {b}")


def _pair_means(f: MonotoneFunction, p: np.ndarray) -> np.ndarray:
    d = len(p)
    m = np.empty((d, d), dtype=float)
    for i in range(d):
        m[i, i] = p[i]
        for j in range(i + 1, d):
            m[i, j] = m[j, i] = f.mean(p[i], p[j])
    return m


def _centered_in_eigenbasis(rho: DensityMatrix, a: HermitianOperator) -> np.ndarray:
    a_eig = rho.to_eigenbasis(a.matrix)
    return a_eig - expectation(rho, a) * np.eye(rho.dim)


def generalized_variance(rho: DensityMatrix, a: HermitianOperator, f: MonotoneFunction) -> float:
    """Metric-weighted variance of A; equals the ordinary variance at beta = 1."""
    _require_same_dim(rho.dim, a.dim)
    a0 = _centered_in_eigenbasis(rho, a)
    m = _pair_means(f, rho.eigenvalues)
    return float(np.sum(np.abs(a0) ** 2 * m))


def split_variance(
    rho: DensityMatrix, a: HermitianOperator, f: MonotoneFunction
) -> tuple[float, float]:
    """(coherent, incoherent) variance parts in the state eigenbasis.

    The incoherent part sum_i p_i |(A0)_ii|^2 is metric independent.
    """
    _require_same_dim(rho.dim, a.dim)
    a0 = _centered_in_eigenbasis(rho, a)
    p = rho.eigenvalues
    m = _pair_means(f, p)
    abs2 = np.abs(a0) ** 2
    incoherent = float(np.sum(p * np.diag(abs2)))
    off = abs2 * m
    np.fill_diagonal(off, 0.0)
    return float(np.sum(off)), incoherent


def log_derivative(
    rho: DensityMatrix, rdot: TangentOperator, f: MonotoneFunction
) -> HermitianOperator:
    """Metric logarithmic derivative: rdot_ij / m(p_i, p_j) in the eigenbasis,
    returned in the input basis."""
    _require_same_dim(rho.dim, rdot.dim)
    r_eig = rho.to_eigenbasis(rdot.matrix)
    m = _pair_means(f, rho.eigenvalues)
    return HermitianOperator(rho.from_eigenbasis(r_eig / m))


def qfi(rho: DensityMatrix, rdot: TangentOperator, f: MonotoneFunction) -> float:
    """Generalized Fisher information of the tangent, in 1/us^2."""
    _require_same_dim(rho.dim, rdot.dim)
    r_eig = rho.to_eigenbasis(rdot.matrix)
    m = _pair_means(f, rho.eigenvalues)
    return float(np.sum(np.abs(r_eig) ** 2 / m))


def split_qfi(
    rho: DensityMatrix, rdot: TangentOperator, f: MonotoneFunction
) -> tuple[float, float]:
    """(coherent, incoherent) Fisher parts.

    The incoherent part is the classical Fisher information of the eigenvalue
    flow, computed from the rotated tangent's diagonal rather than from
    numerical eigenvalue tracking.
    """
    _require_same_dim(rho.dim, rdot.dim)
    r_eig = rho.to_eigenbasis(rdot.matrix)
    p = rho.eigenvalues
    m = _pair_means(f, p)
    abs2 = np.abs(r_eig) ** 2
    pdot = np.real(np.diag(r_eig))
    incoherent = float(np.sum(pdot**2 / p))
    off = abs2 / m
    np.fill_diagonal(off, 0.0)
    return float(np.sum(off)), incoherent


def classical_fisher(p: np.ndarray, pdot: np.ndarray) -> float:
    """Classical Fisher information sum_j pdot_j^2 / p_j of a probability flow."""
    p = np.asarray(p, dtype=float)
    pdot = np.asarray(pdot, dtype=float)
    if p.shape != pdot.shape or p.ndim != 1:
        raise InvalidDistribution(f"shape mismatch: p {p.shape}, pdot {pdot.shape}")
    if np.any(p <= 0.0):
        raise InvalidDistribution(f"probabilities must be strictly positive, got min {p.min()!r}")
    if abs(p.sum() - 1.0) > 1e-10:
        raise InvalidDistribution(f"probabilities sum to {p.sum()!r}, not 1")
    if abs(pdot.sum()) > 1e-10:
        raise InvalidDistribution(f"flow must conserve probability, sum(pdot) = {pdot.sum()!r}")
    return float(np.sum(pdot**2 / p))


@dataclass(frozen=True)
class GeometryReport:
    """All metric quantities for one (rho, rdot, A, beta) quadruple."""

    var_f: float
    var_f_coherent: float
    var_incoherent: float
    qfi_f: float
    qfi_f_coherent: float
    fisher_incoherent: float
    log_derivative: HermitianOperator

    def to_json_dict(self) -> dict:
        return {
            "var_f": self.var_f,
            "var_f_coherent": self.var_f_coherent,
            "var_incoherent": self.var_incoherent,
            "qfi_f": self.qfi_f,
            "qfi_f_coherent": self.qfi_f_coherent,
            "fisher_incoherent": self.fisher_incoherent,
            "log_derivative": matrix_to_json_dict(self.log_derivative.matrix),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def geometry_report(
    rho: DensityMatrix,
    rdot: TangentOperator,
    a: HermitianOperator,
    f: MonotoneFunction,
) -> GeometryReport:
    """One-pass evaluation of every geometric quantity; totals are the exact
    sums of their coherent and incoherent parts."""
    _require_same_dim(rho.dim, rdot.dim)
    _require_same_dim(rho.dim, a.dim)
    var_c, var_i = split_variance(rho, a, f)
    qfi_c, qfi_i = split_qfi(rho, rdot, f)
    return GeometryReport(
        var_f=var_c + var_i,
        var_f_coherent=var_c,
        var_incoherent=var_i,
        qfi_f=qfi_c + qfi_i,
        qfi_f_coherent=qfi_c,
        fisher_incoherent=qfi_i,
        log_derivative=log_derivative(rho, rdot, f),
    )


# --- superoperator oracle ----------------------------------------------------
#
# Row-major vectorization |O> = sum_ij O_ij |i>|j> turns left and right
# multiplication into L = rho (x) I and R = I (x) rho^T.  The mean
# superoperator is M = L f(L^{-1} R), built here by diagonalizing the
# d^2 x d^2 Kronecker matrix directly, with no use of rho's cached
# eigenbasis.  Intended as a test oracle only (d <= 8).


def _mean_superoperator(rho: DensityMatrix, f: MonotoneFunction) -> np.ndarray:
    d = rho.dim
    if d > _ORACLE_MAX_DIM:
        raise ValueError(f"superoperator oracle is limited to d <= {_ORACLE_MAX_DIM}, got {d}")
    eye = np.eye(d)
    big_l = np.kron(rho.matrix, eye)
    ratio = np.kron(np.linalg.inv(rho.matrix), rho.matrix.T)
    w, u = np.linalg.eigh(0.5 * (ratio + ratio.conj().T))
    fw = np.array([f(x) for x in w])
    f_ratio = (u * fw) @ u.conj().T
    return big_l @ f_ratio


def qfi_superop_oracle(rho: DensityMatrix, rdot: TangentOperator, f: MonotoneFunction) -> float:
    """Fisher information via the vectorized mean superoperator and a linear
    solve; independent of the eigenbasis formulas."""
    _require_same_dim(rho.dim, rdot.dim)
    m = _mean_superoperator(rho, f)
    vec = rdot.matrix.reshape(-1)
    try:
        sol = np.linalg.solve(m, vec)
    except np.linalg.LinAlgError as exc:
        raise SingularSuperoperator(f"mean superoperator not invertible: {exc}") from exc
    return float(np.real(np.vdot(vec, sol)))


def variance_superop_oracle(rho: DensityMatrix, a: HermitianOperator, f: MonotoneFunction) -> float:
    """Generalized variance via the vectorized mean superoperator."""
    _require_same_dim(rho.dim, a.dim)
    m = _mean_superoperator(rho, f)
    a0 = a.matrix - expectation(rho, a) * np.eye(rho.dim)
    vec = a0.reshape(-1)
    return float(np.real(np.vdot(vec, m @ vec)))
