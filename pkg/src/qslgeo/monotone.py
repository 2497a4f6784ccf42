"""One-parameter family of symmetric normalized operator monotone functions
and the matrix means they induce.

The family is indexed by beta in [-1, 1]:

    f_beta(x) = beta*(1-beta)*(x-1)^2 / ((x^beta - 1)*(x^(1-beta) - 1)),
                                                beta in [-1, 1/2) \\ {0}
    f_0(x)    = (x - 1) / log x
    f_beta(x) = ((1 + x^beta) / 2)^(1/beta),    beta in [1/2, 1]

Every member is continuous, operator monotone, symmetric (x f(1/x) = f(x))
and normalized (f(1) = 1).  beta = 1 is the arithmetic-mean (SLD) metric,
beta = 1/2 the Wigner-Yanase metric, beta = -1 the harmonic-mean (RLD)
metric; the induced scalar mean is m(x, y) = x f(y/x).

Any object exposing ``__call__(x)`` and ``mean(x, y)`` with these properties
can stand in for a MonotoneFunction, which is the extension point for metrics
outside this family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveArgument
from .operators import DensityMatrix

# below this relative eigenvalue split all members agree to first order,
# so the arithmetic mean is used for every beta (avoids 0/0 in f_beta)
DEGENERACY_GUARD = 1e-8

# switch the beta < 1/2 branches to a second-order Taylor form near x = 1
_TAYLOR_CROSSOVER = 1e-6

BETA_ALIASES = {"sld": 1.0, "wy": 0.5, "rld": -1.0, "log": 0.0}


@dataclass(frozen=True)
class MonotoneFunction:
    """A member of the beta family; callable as the scalar function f_beta."""

    beta: float

    def __post_init__(self) -> None:
        b = float(self.beta)
        if not (-1.0 <= b <= 1.0):
            raise ValueError(f"beta must lie in [-1, 1], got {b!r}")
        object.__setattr__(self, "beta", b)

    @classmethod
    def from_spec(cls, spec: str | float) -> "MonotoneFunction":
        """Parse a beta value or one of the aliases sld / wy / rld / log."""
        if isinstance(spec, str):
            key = spec.strip().lower()
            if key in BETA_ALIASES:
                return cls(BETA_ALIASES[key])
            try:
                value = float(key)
            except ValueError:
                raise ValueError(
                    f"beta spec {spec!r} is neither a number nor one of {sorted(BETA_ALIASES)}"
                ) from None
            return cls(value)
        return cls(float(spec))

    def __call__(self, x: float) -> float:
        """Evaluate f_beta(x) for x > 0."""
        x = float(x)
        if not (x > 0.0) or not math.isfinite(x):
            raise NonPositiveArgument(f"f_beta requires x > 0, got {x!r}")
        b = self.beta
        if b >= 0.5:
            return ((1.0 + x**b) / 2.0) ** (1.0 / b)
        t = math.log(x)
        if abs(x - 1.0) < _TAYLOR_CROSSOVER:
            g = b * (1.0 - b)
            return 1.0 + t / 2.0 + (2.0 + g) * t * t / 12.0
        if b == 0.0:
            return (x - 1.0) / t
        return (
            b * (1.0 - b) * (x - 1.0) ** 2
            / (math.expm1(b * t) * math.expm1((1.0 - b) * t))
        )

    def mean(self, x: float, y: float) -> float:
        """The induced mean m(x, y) = x f(y/x); exactly symmetric in (x, y)."""
        x = float(x)
        y = float(y)
        if not (x > 0.0 and y > 0.0):
            raise NonPositiveArgument(f"mean requires positive arguments, got ({x!r}, {y!r})")
        if abs(x / y - 1.0) < DEGENERACY_GUARD:
            return 0.5 * (x + y)
        if x <= y:
            return x * self(y / x)
        return y * self(x / y)


SLD = MonotoneFunction(1.0)
WIGNER_YANASE = MonotoneFunction(0.5)
RLD = MonotoneFunction(-1.0)
LOG_MEAN = MonotoneFunction(0.0)


def beta_grid(step: float = 0.1) -> np.ndarray:
    """Uniform beta grid over [-1, 1] including both endpoints."""
    if not (0.0 < step <= 1.0):
        raise ValueError(f"grid step must lie in (0, 1], got {step!r}")
    n = int(round(2.0 / step)) + 1
    return np.linspace(-1.0, 1.0, n)


@dataclass(frozen=True)
class MeanMatrix:
    """Pairwise means m(p_i, p_j) over a state's spectrum; symmetric,
    diagonal exactly p_i, entries between min and max of each pair."""

    values: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]


def mean_matrix(f: MonotoneFunction, rho: DensityMatrix) -> MeanMatrix:
    p = rho.eigenvalues
    d = rho.dim
    out = np.empty((d, d), dtype=float)
    for i in range(d):
        out[i, i] = p[i]
        for j in range(i + 1, d):
            m = f.mean(p[i], p[j])
            out[i, j] = m
            out[j, i] = m
    out.setflags(write=False)
    return MeanMatrix(values=out)
