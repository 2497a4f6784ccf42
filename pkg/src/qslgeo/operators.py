"""Core operator types: Hermitian operators, validated density matrices,
spectral decompositions, and the elementary scalar functionals built on them.

All matrices are dense complex arrays of dimension d <= 64.  Units follow
hbar = 1 with time in microseconds, so Hamiltonian entries and rates are in
rad/us and 1/us respectively.  Every type is immutable after construction
and every function is pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHermitian,
    NotPositiveDefinite,
    NotTraceless,
    TraceNotOne,
)

PD_FLOOR = 1e-10
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10


def as_complex_matrix(m: np.ndarray | list) -> np.ndarray:
    """Return a read-only square complex128 copy of ``m``."""
    arr = np.array(m, dtype=complex, order="C")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def hermiticity_defect(m: np.ndarray) -> float:
    """max_ij |M_ij - conj(M_ji)|."""
    return max_abs(m - m.conj().T)


def _require_hermitian(m: np.ndarray, what: str) -> None:
    defect = hermiticity_defect(m)
    tol = HERMITICITY_TOL * max(1.0, max_abs(m))
    if defect > tol:
        raise NotHermitian(
            f"{what} is not Hermitian: max |M_ij - conj(M_ji)| = {defect:.3e} "
            f"exceeds {tol:.3e}"
        )


def _require_same_dim(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(f"dimension mismatch: {a} vs {b}")


@dataclass(frozen=True)
class HermitianOperator:
    """A validated Hermitian matrix (observable or Hamiltonian)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        arr = as_complex_matrix(self.matrix)
        _require_hermitian(arr, "operator")
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class TangentOperator:
    """A traceless Hermitian matrix: a candidate state derivative, in 1/us."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        arr = as_complex_matrix(self.matrix)
        _require_hermitian(arr, "tangent operator")
        tr = complex(np.trace(arr))
        tol = HERMITICITY_TOL * max(1.0, max_abs(arr))
        if abs(tr) > tol:
            raise NotTraceless(
                f"tangent operator is not traceless: |trace| = {abs(tr):.3e} exceeds {tol:.3e}"
            )
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (descending) and the unitary of eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def spectral_decompose(m: np.ndarray) -> SpectralDecomposition:
    """Eigendecompose a Hermitian matrix with a reproducible convention.

    Eigenvalues are sorted descending (stable for ties) and each eigenvector
    is rephased so its largest-magnitude component is real positive, ties
    broken by lowest index.  Repeated calls on the same input are
    bit-identical.
    """
    arr = np.asarray(m, dtype=complex)
    sym = 0.5 * (arr + arr.conj().T)
    w, v = np.linalg.eigh(sym)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    for k in range(v.shape[1]):
        j = int(np.argmax(np.abs(v[:, k])))
        pivot = v[j, k]
        v[:, k] *= pivot.conjugate() / abs(pivot)
        # pin the pivot exactly real; its imaginary part is pure roundoff
        v[j, k] = v[j, k].real
    w.setflags(write=False)
    v.setflags(write=False)
    decomp = SpectralDecomposition(eigenvalues=w, eigenvectors=v)
    recon = max_abs((v * w) @ v.conj().T - arr)
    tol = RECONSTRUCTION_TOL * max(1.0, max_abs(arr))
    if recon > tol:
        raise NotHermitian(
            f"spectral reconstruction failed: residual {recon:.3e} exceeds {tol:.3e}"
        )
    return decomp


@dataclass(frozen=True)
class DensityMatrix:
    """Positive-definite unit-trace Hermitian matrix with cached spectrum.

    ``eigenvalues`` are descending, ``eigenvectors`` columns follow the
    deterministic phase convention of :func:`spectral_decompose`.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_eigenbasis(self, m: np.ndarray) -> np.ndarray:
        """Rotate a matrix into this state's eigenbasis: V^dag M V."""
        v = self.eigenvectors
        return v.conj().T @ m @ v

    def from_eigenbasis(self, m: np.ndarray) -> np.ndarray:
        """Rotate a matrix from this state's eigenbasis back: V M V^dag."""
        v = self.eigenvectors
        return v @ m @ v.conj().T


def validate_density(m: np.ndarray | list, pd_floor: float = PD_FLOOR) -> DensityMatrix:
    """Validate a matrix as a positive-definite density matrix.

    Raises NotHermitian, TraceNotOne, or NotPositiveDefinite with the
    offending value; on success returns the state with its cached spectral
    decomposition.
    """
    arr = as_complex_matrix(m)
    _require_hermitian(arr, "density matrix")
    tr = complex(np.trace(arr))
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"trace is {tr:.17g}, not 1 within {TRACE_TOL:g}")
    decomp = spectral_decompose(arr)
    p_min = float(decomp.eigenvalues[-1])
    if p_min < pd_floor:
        raise NotPositiveDefinite(
            f"smallest eigenvalue {p_min:.17g} is below the positivity floor {pd_floor:g}"
        )
    unit = max_abs(decomp.eigenvectors.conj().T @ decomp.eigenvectors - np.eye(arr.shape[0]))
    if unit > RECONSTRUCTION_TOL:
        raise NotHermitian(f"eigenvector matrix not unitary: defect {unit:.3e}")
    return DensityMatrix(
        matrix=arr,
        eigenvalues=decomp.eigenvalues,
        eigenvectors=decomp.eigenvectors,
    )


def expectation(rho: DensityMatrix, a: HermitianOperator) -> float:
    """Tr(rho A).  The imaginary residue must be pure roundoff."""
    _require_same_dim(rho.dim, a.dim)
    val = complex(np.trace(rho.matrix @ a.matrix))
    if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
        raise NotHermitian(f"expectation has imaginary residue {val.imag:.3e}")
    return val.real


def variance_sld(rho: DensityMatrix, a: HermitianOperator) -> float:
    """Ordinary variance Tr(rho A^2) - Tr(rho A)^2 >= 0."""
    _require_same_dim(rho.dim, a.dim)
    a2 = complex(np.trace(rho.matrix @ a.matrix @ a.matrix)).real
    a1 = expectation(rho, a)
    return max(a2 - a1 * a1, 0.0)


def center(rho: DensityMatrix, a: HermitianOperator) -> HermitianOperator:
    """A - Tr(rho A) * I, the zero-mean version of A in the state rho."""
    _require_same_dim(rho.dim, a.dim)
    mean = expectation(rho, a)
    return HermitianOperator(a.matrix - mean * np.eye(rho.dim))


def commutator_generator(rho: DensityMatrix, h: HermitianOperator) -> TangentOperator:
    """Unitary state derivative -i[H, rho]; Hermitian and traceless."""
    _require_same_dim(rho.dim, h.dim)
    comm = h.matrix @ rho.matrix - rho.matrix @ h.matrix
    return TangentOperator(-1j * comm)


def condition_number(rho: DensityMatrix) -> float:
    """p_max / p_min >= 1."""
    return float(rho.eigenvalues[0] / rho.eigenvalues[-1])


def seminorm(h: HermitianOperator) -> float:
    """Spectral spread lambda_max - lambda_min >= 0."""
    w = np.linalg.eigvalsh(h.matrix)
    return float(w[-1] - w[0])


# --- wire format -----------------------------------------------------------
#
# Matrices travel as {"dim": d, "re": [[...]], "im": [[...]]}, row-major,
# reals printed with 17 significant digits (lossless for doubles).


def matrix_to_json_dict(m: np.ndarray) -> dict:
    arr = as_complex_matrix(m)
    return {
        "dim": arr.shape[0],
        "re": arr.real.tolist(),
        "im": arr.imag.tolist(),
    }


def matrix_from_json_dict(obj: dict) -> np.ndarray:
    try:
        dim = int(obj["dim"])
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionMismatch(f"malformed matrix JSON: {exc}") from exc
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise DimensionMismatch(
            f"matrix JSON shape mismatch: dim={dim}, re {re.shape}, im {im.shape}"
        )
    return as_complex_matrix(re + 1j * im)


def _format_real_grid(rows: np.ndarray) -> str:
    return "[" + ", ".join(
        "[" + ", ".join(format(x, ".17g") for x in row) + "]" for row in rows
    ) + "]"


def dumps_matrix(m: np.ndarray) -> str:
    """Serialize a matrix to its JSON wire form with 17-significant-digit reals."""
    arr = as_complex_matrix(m)
    return (
        f'{{"dim": {arr.shape[0]}, '
        f'"re": {_format_real_grid(arr.real)}, '
        f'"im": {_format_real_grid(arr.imag)}}}'
    )


def loads_matrix(text: str) -> np.ndarray:
    return matrix_from_json_dict(json.loads(text))
