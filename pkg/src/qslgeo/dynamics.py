"""Trajectory generation and the simulated qutrit speed-measurement pipeline.

Levels are ordered |g>, |e>, |f> = 0, 1, 2.  A qutrit decays down the chain
f -> e -> g with rates gamma_fe and gamma_eg (amplitude damping); with no
drive and a diagonal initial state this is the classic sequential-decay
rate system whose closed-form populations are used for state preparation.
The drive couples g<->e and e<->f with Rabi rates omega_ge, omega_ef about
the Y axes of the two subspaces.

Integration is fixed-step classical RK4; generators are smooth and the
dimensions tiny, so adaptive stepping would be unwarranted complexity.
Every sampled state is re-validated, with drift beyond 1e-8 treated as an
integration failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bounds import bound_split, coherent_ratio_xi
from .errors import (
    DimensionMismatch,
    NegativeTime,
    StateValidationDrift,
    WindowTooShort,
)
from .geometry import split_qfi
from .monotone import RLD, SLD
from .operators import (
    DensityMatrix,
    HermitianOperator,
    TangentOperator,
    commutator_generator,
    expectation,
    hermiticity_defect,
    max_abs,
    validate_density,
    variance_sld,
)

Generator = Callable[[np.ndarray], np.ndarray]

DRIFT_TOL = 1e-8
DEFAULT_DT = 1e-4  # us; resolves 2pi*10 MHz driving with ~10^3 steps per cycle
OMEGA_10_MHZ = 2.0 * math.pi * 10.0  # rad/us

DEFAULT_T_DECAY = tuple(np.linspace(11.0, 101.0, 10))
SPEED_FIT_WINDOW = 0.016  # us


@dataclass(frozen=True)
class DecayChainSpec:
    """Sequential decay rates, 1/us: gamma_fe for f->e, gamma_eg for e->g."""

    gamma_fe: float
    gamma_eg: float

    def __post_init__(self) -> None:
        for name in ("gamma_fe", "gamma_eg"):
            v = float(getattr(self, name))
            if not (v > 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be a positive finite rate, got {v!r}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class DriveSpec:
    """Rabi rates, rad/us, for the g<->e and e<->f transitions."""

    omega_ge: float
    omega_ef: float

    def __post_init__(self) -> None:
        for name in ("omega_ge", "omega_ef"):
            v = float(getattr(self, name))
            if not (v >= 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be a finite nonnegative rate, got {v!r}")
            object.__setattr__(self, name, v)


# The measured lifetimes put the decay over tens-to-hundreds of
# microseconds, so the device-table rates are read as 1/ms (slow preset,
# the default); the literal 1/us reading is kept as the fast preset.
RATES_INVERSE_MS = DecayChainSpec(gamma_fe=0.0184, gamma_eg=0.0147)
RATES_INVERSE_US = DecayChainSpec(gamma_fe=18.4, gamma_eg=14.7)
DEFAULT_DRIVE = DriveSpec(omega_ge=OMEGA_10_MHZ, omega_ef=OMEGA_10_MHZ)


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered (t, rho, rdot) samples; tangents are evaluated exactly
    from the generator at each sample."""

    times: np.ndarray
    states: tuple[DensityMatrix, ...]
    tangents: tuple[TangentOperator, ...]

    def __len__(self) -> int:
        return len(self.times)


def unitary_generator(h: HermitianOperator) -> Generator:
    """rho -> -i[H, rho]; preserves trace, Hermiticity, and the spectrum."""
    hm = h.matrix

    def gen(rho: np.ndarray) -> np.ndarray:
        return -1j * (hm @ rho - rho @ hm)

    return gen


def lindblad_generator(
    h: HermitianOperator | None,
    jumps: Sequence[tuple[float, np.ndarray]],
) -> Generator:
    """Standard dissipative generator with jump operators at given rates,
    plus an optional coherent part."""
    hm = None if h is None else h.matrix
    terms = [(float(rate), np.asarray(op, dtype=complex)) for rate, op in jumps]

    def gen(rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho)
        if hm is not None:
            out = out - 1j * (hm @ rho - rho @ hm)
        for rate, op in terms:
            opd = op.conj().T
            anti = opd @ op
            out = out + rate * (op @ rho @ opd - 0.5 * (anti @ rho + rho @ anti))
        return out

    return gen


def drive_hamiltonian(drive: DriveSpec) -> HermitianOperator:
    """Qutrit drive i(w_ge/2)|g><e| + i(w_ef/2)|e><f| + h.c."""
    h = np.zeros((3, 3), dtype=complex)
    h[0, 1] = 1j * drive.omega_ge / 2.0
    h[1, 2] = 1j * drive.omega_ef / 2.0
    return HermitianOperator(h + h.conj().T)


def decay_chain_generator(spec: DecayChainSpec, drive: DriveSpec | None = None) -> Generator:
    """Amplitude-damping chain |f> -> |e> -> |g>, optionally driven."""
    lower_fe = np.zeros((3, 3), dtype=complex)
    lower_fe[1, 2] = 1.0
    lower_eg = np.zeros((3, 3), dtype=complex)
    lower_eg[0, 1] = 1.0
    h = None if drive is None else drive_hamiltonian(drive)
    return lindblad_generator(h, [(spec.gamma_fe, lower_fe), (spec.gamma_eg, lower_eg)])


def bateman_populations(spec: DecayChainSpec, t: float) -> tuple[float, float, float]:
    """Closed-form (p_g, p_e, p_f) after decaying from |f> for time t.

    The generic two-rate expression switches to its equal-rate limit
    gamma*t*exp(-gamma*t) when the rates agree to 1e-10 relative.
    """
    t = float(t)
    if t < 0.0:
        raise NegativeTime(f"decay time must be >= 0, got {t!r}")
    gfe, geg = spec.gamma_fe, spec.gamma_eg
    p_f = math.exp(-gfe * t)
    if abs(gfe - geg) <= 1e-10 * max(gfe, geg):
        p_e = gfe * t * math.exp(-gfe * t)
    else:
        p_e = gfe / (geg - gfe) * (math.exp(-gfe * t) - math.exp(-geg * t))
    p_g = 1.0 - p_e - p_f
    return (p_g, p_e, p_f)


def evolve(
    rho0: DensityMatrix,
    generator: Generator,
    t_final: float,
    dt: float = DEFAULT_DT,
    pd_floor: float = 1e-10,
) -> Trajectory:
    """Fixed-step RK4 trajectory sampled at multiples of dt.

    Each sample is checked for Hermiticity/trace drift (tolerance 1e-8),
    cleaned up, and re-validated as a density matrix; positivity failures
    propagate from validation.
    """
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if t_final < dt:
        raise ValueError(f"t_final must be at least dt, got {t_final!r} < {dt!r}")
    n_steps = int(round(t_final / dt))
    times = np.arange(n_steps + 1) * dt
    states: list[DensityMatrix] = [rho0]
    tangents: list[TangentOperator] = [TangentOperator(generator(rho0.matrix))]
    current = np.array(rho0.matrix)
    for _ in range(n_steps):
        k1 = generator(current)
        k2 = generator(current + 0.5 * dt * k1)
        k3 = generator(current + 0.5 * dt * k2)
        k4 = generator(current + dt * k3)
        current = current + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        herm_drift = hermiticity_defect(current)
        trace_drift = abs(complex(np.trace(current)) - 1.0)
        if max(herm_drift, trace_drift) > DRIFT_TOL * max(1.0, max_abs(current)):
            raise StateValidationDrift(
                f"state drifted: hermiticity {herm_drift:.3e}, trace {trace_drift:.3e} "
                f"(tolerance {DRIFT_TOL:g}); reduce dt"
            )
        cleaned = 0.5 * (current + current.conj().T)
        cleaned = cleaned / complex(np.trace(cleaned)).real
        state = validate_density(cleaned, pd_floor=pd_floor)
        states.append(state)
        tangents.append(TangentOperator(generator(state.matrix)))
    times.setflags(write=False)
    return Trajectory(times=times, states=tuple(states), tangents=tuple(tangents))


def measured_speed(traj: Trajectory, a: HermitianOperator, window: float) -> float:
    """Least-squares slope of a(t) = Tr(rho(t) A) over the leading window."""
    times = traj.times
    span = float(times[-1] - times[0])
    if window > span * (1.0 + 1e-12):
        raise WindowTooShort(f"window {window!r} exceeds trajectory span {span!r}")
    mask = times - times[0] <= window * (1.0 + 1e-12)
    if int(mask.sum()) < 3:
        raise WindowTooShort(f"need >= 3 samples in window, got {int(mask.sum())}")
    ts = times[mask]
    vals = np.array([expectation(state, a) for state, keep in zip(traj.states, mask) if keep])
    slope = np.polyfit(ts, vals, 1)[0]
    return float(slope)


def observable_x_ge() -> HermitianOperator:
    """Pauli-X on the {|g>, |e>} subspace, embedded in the qutrit."""
    a = np.zeros((3, 3), dtype=complex)
    a[0, 1] = a[1, 0] = 1.0
    return HermitianOperator(a)


@dataclass(frozen=True)
class ExperimentRow:
    """One prepared state of the simulated measurement pipeline."""

    t_decay: float
    speed: float
    bound_sld: float
    bound_rld: float
    xi_rld: float


def experiment_replica(
    spec: DecayChainSpec = RATES_INVERSE_MS,
    drive: DriveSpec = DEFAULT_DRIVE,
    t_decay_list: Sequence[float] = DEFAULT_T_DECAY,
    a: HermitianOperator | None = None,
    window: float = SPEED_FIT_WINDOW,
    dt: float = DEFAULT_DT,
) -> list[ExperimentRow]:
    """Simulated version of the decay-prepare / drive / fit-speed pipeline.

    For each decay time: prepare the diagonal mixed state from the closed
    form, drive it unitarily, extract the observable speed by a linear fit
    over the short window, and evaluate both the arithmetic-mean and
    harmonic-mean split bounds on the prepared state.
    """
    a = observable_x_ge() if a is None else a
    if a.dim != 3:
        raise DimensionMismatch(f"pipeline observable must be a qutrit operator, got d={a.dim}")
    h = drive_hamiltonian(drive)
    gen = unitary_generator(h)
    rows: list[ExperimentRow] = []
    for t_decay in t_decay_list:
        p_g, p_e, p_f = bateman_populations(spec, float(t_decay))
        rho0 = validate_density(np.diag([p_g, p_e, p_f]))
        rdot0 = commutator_generator(rho0, h)
        traj = evolve(rho0, gen, t_final=window, dt=dt)
        speed = abs(measured_speed(traj, a, window))
        sld_report = bound_split(rho0, rdot0, a, SLD)
        rld_report = bound_split(rho0, rdot0, a, RLD)
        xi_rld = coherent_ratio_xi(rho0, rdot0, a, RLD)
        rows.append(
            ExperimentRow(
                t_decay=float(t_decay),
                speed=speed,
                bound_sld=sld_report.bound_split,
                bound_rld=rld_report.bound_split,
                xi_rld=xi_rld,
            )
        )
    return rows


# --- joint system-environment model ------------------------------------------


def partial_trace_env(m: np.ndarray, sys_dim: int, env_dim: int) -> np.ndarray:
    """Trace out the second (environment) factor of a bipartite operator."""
    return m.reshape(sys_dim, env_dim, sys_dim, env_dim).trace(axis1=1, axis2=3)


def partial_trace_sys(m: np.ndarray, sys_dim: int, env_dim: int) -> np.ndarray:
    """Trace out the first (system) factor of a bipartite operator."""
    return m.reshape(sys_dim, env_dim, sys_dim, env_dim).trace(axis1=0, axis2=2)


@dataclass(frozen=True)
class EnvModelSpec:
    """Joint unitary model: local Hamiltonians plus a coupling that carries
    every term with support on both factors (its partial traces vanish)."""

    sys_dim: int
    env_dim: int
    h_sys: HermitianOperator
    h_env: HermitianOperator
    h_int: HermitianOperator
    joint_state: DensityMatrix

    def __post_init__(self) -> None:
        ds, de = int(self.sys_dim), int(self.env_dim)
        if self.h_sys.dim != ds or self.h_env.dim != de:
            raise DimensionMismatch(
                f"local Hamiltonians have dims ({self.h_sys.dim}, {self.h_env.dim}), "
                f"expected ({ds}, {de})"
            )
        if self.h_int.dim != ds * de or self.joint_state.dim != ds * de:
            raise DimensionMismatch(
                f"joint operators must have dim {ds * de}, got "
                f"h_int {self.h_int.dim}, state {self.joint_state.dim}"
            )
        scale = max(1.0, max_abs(self.h_int.matrix))
        env_part = max_abs(partial_trace_env(self.h_int.matrix, ds, de)) / de
        sys_part = max_abs(partial_trace_sys(self.h_int.matrix, ds, de)) / ds
        if max(env_part, sys_part) > 1e-10 * scale:
            raise DimensionMismatch(
                "coupling contains single-factor terms: partial-trace residues "
                f"{env_part:.3e} (env), {sys_part:.3e} (sys)"
            )
        object.__setattr__(self, "sys_dim", ds)
        object.__setattr__(self, "env_dim", de)

    def total_hamiltonian(self) -> HermitianOperator:
        ds, de = self.sys_dim, self.env_dim
        total = (
            np.kron(self.h_sys.matrix, np.eye(de))
            + np.kron(np.eye(ds), self.h_env.matrix)
            + self.h_int.matrix
        )
        return HermitianOperator(total)


def env_incoherent_check(spec: EnvModelSpec, dt: float = DEFAULT_DT) -> tuple[float, float]:
    """Evolve the joint state one step, reduce, and compare the incoherent
    Fisher information of the reduced flow with 4 * Var(H_int).

    Returns (incoherent_fisher, bound); raises if the inequality fails.
    """
    h_tot = spec.total_hamiltonian()
    gen = unitary_generator(h_tot)
    traj = evolve(spec.joint_state, gen, t_final=dt, dt=dt)
    joint = traj.states[-1]
    ds, de = spec.sys_dim, spec.env_dim
    rdot_joint = traj.tangents[-1].matrix
    rho_s = validate_density(partial_trace_env(joint.matrix, ds, de))
    rdot_s = TangentOperator(partial_trace_env(rdot_joint, ds, de))
    _, incoherent = split_qfi(rho_s, rdot_s, SLD)
    bound = 4.0 * variance_sld(joint, spec.h_int)
    if incoherent > bound + 1e-9 * max(1.0, bound):
        raise RuntimeError(
            f"incoherent Fisher {incoherent!r} exceeds interaction bound {bound!r}"
        )
    return incoherent, bound
