"""Exception types raised by qslgeo.

Every validation error names the violated invariant and carries the
offending value in its message, so failures in long sweeps are traceable.
"""


class QslError(Exception):
    """Base class for all qslgeo errors."""


class DimensionMismatch(QslError):
    """Operands act on Hilbert spaces of different dimension."""


class NotHermitian(QslError):
    """Matrix fails the Hermiticity tolerance."""


class TraceNotOne(QslError):
    """Candidate density matrix has trace away from one."""


class NotTraceless(QslError):
    """Candidate tangent operator carries a nonzero trace."""


class NotPositiveDefinite(QslError):
    """Candidate density matrix has an eigenvalue below the floor."""


class NonPositiveArgument(QslError):
    """Scalar monotone function or mean evaluated at x <= 0."""


class InvalidDistribution(QslError):
    """Probability vector fails positivity/normalization checks."""


class DegenerateCoherentTerm(QslError):
    """Coherent ratio undefined: the arithmetic-mean coherent product vanishes."""


class DegenerateEigenvalues(QslError):
    """Fast-Hamiltonian synthesis hit p_j = p_k on a coupled pair."""


class ZeroObservableCoherence(QslError):
    """Observable has no off-diagonal weight in the state eigenbasis."""


class ZeroTangent(QslError):
    """Operation requires a nonzero state derivative."""


class ZeroObservable(QslError):
    """Operation requires a nonzero centered observable."""


class NegativeTime(QslError):
    """Decay populations requested at t < 0."""


class StateValidationDrift(QslError):
    """Integrated state drifted beyond tolerance (step too coarse)."""


class WindowTooShort(QslError):
    """Speed-extraction window holds fewer than three samples."""


class SingularSuperoperator(QslError):
    """Mean superoperator was not invertible; indicates an internal bug."""


class ConfigError(QslError):
    """CLI/scan configuration could not be parsed or is inconsistent."""
