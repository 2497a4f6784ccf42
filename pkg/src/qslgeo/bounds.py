"""Speed limits on observable expectation values.

Stacked tightest-first, for a state rho, tangent rdot and observable A:

    |da/dt| <= D_C(f) * sqrt(I_C(f)) + D_I * sqrt(I_I)     (split bound)
            <= D(f) * sqrt(I(f))                           (non-split bound)

where D are metric standard deviations of A and I the matching Fisher
informations.  The coherent ratio xi(f) compares the coherent product
against the arithmetic-mean (beta = 1) choice; xi < 1 means the metric f
gives the tighter bound.  The module also finds the best beta on a grid
with golden-section refinement, diagnoses saturation, synthesizes the
Hamiltonian that saturates the coherent bound, and evaluates the looser
energy-variance bounds built on the state condition number.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateCoherentTerm,
    DegenerateEigenvalues,
    DimensionMismatch,
    InvalidDistribution,
    ZeroObservable,
    ZeroObservableCoherence,
    ZeroTangent,
)
from .geometry import split_qfi, split_variance
from .monotone import SLD, MonotoneFunction, beta_grid
from .operators import (
    DensityMatrix,
    HermitianOperator,
    TangentOperator,
    commutator_generator,
    condition_number,
    expectation,
    seminorm,
    variance_sld,
)

_COHERENT_EPS = 1e-300
_GOLDEN_TOL = 1e-6
# refinement must beat the grid anchor by more than float noise, otherwise
# the anchor (smaller beta) wins; keeps endpoint minimizers exactly on grid
_TIE_EPS = 1e-12

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def _require_same_dim(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(f"dimension mismatch: {a} vs {b}")


def observable_speed(rdot: TangentOperator, a: HermitianOperator) -> float:
    """Signed rate of change Tr(A rdot) of the expectation value, in 1/us."""
    _require_same_dim(rdot.dim, a.dim)
    val = complex(np.trace(a.matrix @ rdot.matrix))
    return val.real


@dataclass(frozen=True)
class BoundReport:
    """Speed, both bounds, the split terms, and saturation diagnostics."""

    speed: float
    bound_nonsplit: float
    bound_split: float
    coherent_term: float
    incoherent_term: float
    xi: float | None
    saturation_gap: float
    beta: float

    def to_json_dict(self) -> dict:
        return {
            "speed": self.speed,
            "bound_nonsplit": self.bound_nonsplit,
            "bound_split": self.bound_split,
            "coherent_term": self.coherent_term,
            "incoherent_term": self.incoherent_term,
            "xi": self.xi,
            "saturation_gap": self.saturation_gap,
            "beta": self.beta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def bound_nonsplit(
    rho: DensityMatrix,
    rdot: TangentOperator,
    a: HermitianOperator,
    f: MonotoneFunction,
) -> float:
    """Cauchy-Schwarz bound D(f) sqrt(I(f)) >= |da/dt|."""
    var_c, var_i = split_variance(rho, a, f)
    qfi_c, qfi_i = split_qfi(rho, rdot, f)
    return math.sqrt((var_c + var_i) * (qfi_c + qfi_i))


def bound_split(
    rho: DensityMatrix,
    rdot: TangentOperator,
    a: HermitianOperator,
    f: MonotoneFunction,
) -> BoundReport:
    """Full report for the split bound; the split never exceeds the
    non-split bound, with equality iff D_C(f) sqrt(I_I) = D_I sqrt(I_C(f))."""
    var_c, var_i = split_variance(rho, a, f)
    qfi_c, qfi_i = split_qfi(rho, rdot, f)
    coherent = math.sqrt(var_c * qfi_c)
    incoherent = math.sqrt(var_i * qfi_i)
    split = coherent + incoherent
    nonsplit = math.sqrt((var_c + var_i) * (qfi_c + qfi_i))
    speed = abs(observable_speed(rdot, a))
    sld_var_c, _ = split_variance(rho, a, SLD)
    sld_qfi_c, _ = split_qfi(rho, rdot, SLD)
    denom = sld_var_c * sld_qfi_c
    if denom < _COHERENT_EPS:
        xi = None
    elif f.beta == 1.0:
        xi = 1.0
    else:
        xi = (var_c * qfi_c) / denom
    gap = 1.0 - speed / split if split > 0.0 else 0.0
    return BoundReport(
        speed=speed,
        bound_nonsplit=nonsplit,
        bound_split=split,
        coherent_term=coherent,
        incoherent_term=incoherent,
        xi=xi,
        saturation_gap=gap,
        beta=f.beta,
    )


def coherent_ratio_xi(
    rho: DensityMatrix,
    rdot: TangentOperator,
    a: HermitianOperator,
    f: MonotoneFunction,
) -> float:
    """xi(f) = [D_C(f)^2 I_C(f)] / [D_C(1)^2 I_C(1)]; exactly 1 at beta = 1."""
    if f.beta == 1.0:
        return 1.0
    sld_var_c, _ = split_variance(rho, a, SLD)
    sld_qfi_c, _ = split_qfi(rho, rdot, SLD)
    denom = sld_var_c * sld_qfi_c
    if denom < _COHERENT_EPS:
        raise DegenerateCoherentTerm(
            f"arithmetic-mean coherent product is {denom:.3e}; ratio undefined"
        )
    var_c, _ = split_variance(rho, a, f)
    qfi_c, _ = split_qfi(rho, rdot, f)
    return (var_c * qfi_c) / denom


def xi_qutrit_closed_form(
    p: np.ndarray,
    v01: float,
    v02: float,
    v12: float,
    f: MonotoneFunction,
) -> float:
    """Closed-form coherent ratio for a qutrit whose observable couples only
    levels 0 and 1, with v_ij = 2 |rdot_ij|^2 the tangent pair weights."""
    p = np.asarray(p, dtype=float)
    if p.shape != (3,):
        raise InvalidDistribution(f"need a 3-outcome distribution, got shape {p.shape}")
    if np.any(p <= 0.0):
        raise InvalidDistribution(f"probabilities must be strictly positive, got {p.tolist()}")
    if abs(p.sum() - 1.0) > 1e-10:
        raise InvalidDistribution(f"probabilities sum to {p.sum()!r}, not 1")
    if min(v01, v02, v12) < 0.0:
        raise InvalidDistribution("pair weights v_ij must be nonnegative")
    m01, m02, m12 = f.mean(p[0], p[1]), f.mean(p[0], p[2]), f.mean(p[1], p[2])
    s01, s02, s12 = SLD.mean(p[0], p[1]), SLD.mean(p[0], p[2]), SLD.mean(p[1], p[2])
    num = v01 + v02 * (m01 / m02) + v12 * (m01 / m12)
    den = v01 + v02 * (s01 / s02) + v12 * (s01 / s12)
    if den < _COHERENT_EPS:
        raise DegenerateCoherentTerm(f"coherent denominator is {den:.3e}; ratio undefined")
    return num / den


def _xi_profile(
    rho: DensityMatrix, rdot: TangentOperator, a: HermitianOperator
):
    """Return xi as a cheap function of beta by pre-rotating once."""
    a0 = rho.to_eigenbasis(a.matrix) - expectation(rho, a) * np.eye(rho.dim)
    r_eig = rho.to_eigenbasis(rdot.matrix)
    p = rho.eigenvalues
    d = rho.dim
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    wa = np.array([2.0 * abs(a0[i, j]) ** 2 for i, j in pairs])
    wr = np.array([2.0 * abs(r_eig[i, j]) ** 2 for i, j in pairs])

    def coherent_product(f: MonotoneFunction) -> float:
        means = np.array([f.mean(p[i], p[j]) for i, j in pairs])
        return float(np.dot(wa, means)) * float(np.dot(wr, 1.0 / means))

    denom = coherent_product(SLD)
    if denom < _COHERENT_EPS:
        raise DegenerateCoherentTerm(
            f"arithmetic-mean coherent product is {denom:.3e}; ratio undefined"
        )

    def xi_of_beta(beta: float) -> float:
        if beta == 1.0:
            return 1.0
        return coherent_product(MonotoneFunction(beta)) / denom

    return xi_of_beta


def _golden_section(fn, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section minimum of a unimodal fn on [lo, hi] to width <= tol."""
    h = hi - lo
    if h <= tol:
        mid = 0.5 * (lo + hi)
        return mid, fn(mid)
    c = lo + _INV_PHI2 * h
    d = lo + _INV_PHI * h
    yc, yd = fn(c), fn(d)
    while h > tol:
        if yc < yd:
            hi, d, yd = d, c, yc
            h = hi - lo
            c = lo + _INV_PHI2 * h
            yc = fn(c)
        else:
            lo, c, yc = c, d, yd
            h = hi - lo
            d = lo + _INV_PHI * h
            yd = fn(d)
    best = 0.5 * (lo + hi)
    return best, fn(best)


def optimize_beta(
    rho: DensityMatrix,
    rdot: TangentOperator,
    a: HermitianOperator,
    grid_step: float = 0.01,
) -> tuple[float, float]:
    """Minimize xi over beta: uniform grid over [-1, 1], then golden-section
    refinement in the bracketing interval.  Ties resolve to the smallest
    beta, so flat profiles (e.g. any qubit) report beta = -1."""
    xi_of_beta = _xi_profile(rho, rdot, a)
    betas = beta_grid(grid_step)
    values = np.array([xi_of_beta(b) for b in betas])
    tie = _TIE_EPS * max(1.0, float(np.abs(values).max()))
    # smallest beta within float noise of the minimum, so flat profiles
    # (e.g. any qubit) deterministically report beta = -1
    k = int(np.argmax(values <= values.min() + tie))
    beta_best = float(betas[k])
    xi_best = float(values[k])
    lo = float(betas[max(k - 1, 0)])
    hi = float(betas[min(k + 1, len(betas) - 1)])
    if hi - lo > _GOLDEN_TOL:
        beta_ref, xi_ref = _golden_section(xi_of_beta, lo, hi, _GOLDEN_TOL)
        if xi_ref < xi_best - tie:
            return beta_ref, xi_ref
    return beta_best, xi_best


def saturation_residual(
    rho: DensityMatrix,
    rdot: TangentOperator,
    a: HermitianOperator,
    f: MonotoneFunction,
) -> float:
    """Alignment of the centered observable with the logarithmic derivative:
    || A0 - g* L ||_F / || A0 ||_F with g* the least-squares gain.  Zero
    means the bounds are tight for this metric."""
    _require_same_dim(rho.dim, rdot.dim)
    _require_same_dim(rho.dim, a.dim)
    a0 = rho.to_eigenbasis(a.matrix) - expectation(rho, a) * np.eye(rho.dim)
    r_eig = rho.to_eigenbasis(rdot.matrix)
    p = rho.eigenvalues
    d = rho.dim
    ell = np.empty_like(r_eig)
    for i in range(d):
        for j in range(d):
            ell[i, j] = r_eig[i, j] / f.mean(p[i], p[j])
    a_norm2 = float(np.sum(np.abs(a0) ** 2))
    l_norm2 = float(np.sum(np.abs(ell) ** 2))
    if a_norm2 == 0.0:
        raise ZeroObservable("centered observable vanishes; alignment undefined")
    if l_norm2 == 0.0:
        raise ZeroTangent("state derivative vanishes; alignment undefined")
    gain = float(np.real(np.sum(np.conj(ell) * a0))) / l_norm2
    resid2 = float(np.sum(np.abs(a0 - gain * ell) ** 2))
    return math.sqrt(max(resid2, 0.0) / a_norm2)


def fast_hamiltonian(
    rho: DensityMatrix,
    a: HermitianOperator,
    f: MonotoneFunction,
    norm_budget: float = 1.0,
) -> HermitianOperator:
    """Hamiltonian whose unitary flow saturates the coherent bound for
    (rho, A, f), scaled so its spectral spread equals ``norm_budget``.

    Requires every pair coupled by A to have nondegenerate eigenvalues
    (relative gap > 1e-8).
    """
    _require_same_dim(rho.dim, a.dim)
    if not norm_budget > 0.0:
        raise ValueError(f"norm budget must be positive, got {norm_budget!r}")
    a_eig = rho.to_eigenbasis(a.matrix)
    p = rho.eigenvalues
    d = rho.dim
    kern = np.zeros((d, d), dtype=complex)
    coupled = False
    for j in range(d):
        for k in range(d):
            if j == k or abs(a_eig[j, k]) <= 1e-12:
                continue
            gap = abs(p[j] - p[k]) / max(p[j], p[k])
            if gap <= 1e-8:
                raise DegenerateEigenvalues(
                    f"eigenvalue pair ({j}, {k}) is degenerate "
                    f"(p_j = {p[j]:.12g}, p_k = {p[k]:.12g}) but A couples it"
                )
            coupled = True
            kern[j, k] = -1j * f.mean(p[j], p[k]) / (p[j] - p[k]) * a_eig[j, k]
    if not coupled:
        raise ZeroObservableCoherence(
            "observable has no off-diagonal elements in the state eigenbasis"
        )
    h = rho.from_eigenbasis(kern)
    h = 0.5 * (h + h.conj().T)
    op = HermitianOperator(h)
    scale = norm_budget / seminorm(op)
    return HermitianOperator(scale * op.matrix)


@dataclass(frozen=True)
class EnergyBoundReport:
    """Energy-variance bound chain for unitary driving plus an optional
    environment-coupling term."""

    kappa: float
    qfi_c_bound_ratio: float
    qfi_c_bound_kappa: float
    qfi_c_bound_seminorm: float
    speed_bound: float
    legacy_bound: float

    def to_json_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "qfi_c_bound_ratio": self.qfi_c_bound_ratio,
            "qfi_c_bound_kappa": self.qfi_c_bound_kappa,
            "qfi_c_bound_seminorm": self.qfi_c_bound_seminorm,
            "speed_bound": self.speed_bound,
            "legacy_bound": self.legacy_bound,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def energy_bounds(
    rho: DensityMatrix,
    h: HermitianOperator,
    f: MonotoneFunction,
    a: HermitianOperator,
    h_int_variance: float | None = None,
) -> EnergyBoundReport:
    """Bounds on the coherent Fisher information in terms of the drive's
    energy variance, and the resulting speed bound
    sqrt(kappa) D_C(f) DH + 2 D_I DH_int.

    ``h_int_variance`` is the joint-state variance of the system-environment
    coupling; omitted for a closed system.  The internal chain

        I_C(f) <= 4 max(m_arith / m_f) DH^2 <= 4 kappa DH^2 <= kappa ||H||_s^2
        I_C(f) <= kappa DH^2

    is verified to 1e-9 slack on every call.
    """
    _require_same_dim(rho.dim, h.dim)
    _require_same_dim(rho.dim, a.dim)
    kappa = condition_number(rho)
    var_h = variance_sld(rho, h)
    dh = math.sqrt(var_h)
    rdot = commutator_generator(rho, h)
    qfi_c, _ = split_qfi(rho, rdot, f)
    p = rho.eigenvalues
    d = rho.dim
    ratio_max = 1.0
    for i in range(d):
        for j in range(i + 1, d):
            ratio_max = max(ratio_max, SLD.mean(p[i], p[j]) / f.mean(p[i], p[j]))
    s_ratio = 4.0 * ratio_max * var_h
    s_kappa = kappa * var_h
    s_semi = kappa * seminorm(h) ** 2
    slack = 1.0 + 1e-9
    if not (
        qfi_c <= s_ratio * slack + 1e-30
        and qfi_c <= s_kappa * slack + 1e-30
        and s_ratio <= 4.0 * s_kappa * slack + 1e-30
        and 4.0 * s_kappa <= s_semi * slack + 1e-30
    ):
        raise RuntimeError(
            "energy bound chain violated internally: "
            f"qfi_c={qfi_c!r}, ratio={s_ratio!r}, kappa={s_kappa!r}, semi={s_semi!r}"
        )
    var_c, var_i = split_variance(rho, a, f)
    sld_var_c, sld_var_i = split_variance(rho, a, SLD)
    coh = math.sqrt(kappa) * math.sqrt(var_c) * dh
    legacy_coh = 2.0 * math.sqrt(sld_var_c) * dh
    if h_int_variance is None:
        inc = legacy_inc = 0.0
    else:
        if h_int_variance < 0.0:
            raise ValueError(f"interaction variance must be >= 0, got {h_int_variance!r}")
        inc = legacy_inc = 2.0 * math.sqrt(sld_var_i) * math.sqrt(h_int_variance)
    return EnergyBoundReport(
        kappa=kappa,
        qfi_c_bound_ratio=s_ratio,
        qfi_c_bound_kappa=s_kappa,
        qfi_c_bound_seminorm=s_semi,
        speed_bound=coh + inc,
        legacy_bound=legacy_coh + legacy_inc,
    )
