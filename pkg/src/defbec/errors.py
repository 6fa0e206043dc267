"""Exception hierarchy shared by the solvers, the oracle and the CLI."""


class DefbecError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1
    code = "E1"


class DomainError(DefbecError, ValueError):
    """Input outside the domain where a formula is defined."""

    exit_code = 2
    code = "E2"


class NoConvergence(DefbecError):
    """Newton continuation failed to reach the requested tolerance."""

    exit_code = 3
    code = "E3"


class UnstableSteadyState(DefbecError):
    """A root exists but the linearized drift has Re(lambda) >= 0."""

    exit_code = 3
    code = "E3"


class TrajectoryOverflow(DefbecError, OverflowError):
    exit_code = 3
    code = "E3"


class SingularSolve(DefbecError):
    """Liouvillian solve is degenerate or inaccurate."""

    exit_code = 4
    code = "E4"


class TruncationError(DefbecError):
    """Fock-space truncation did not converge."""

    exit_code = 4
    code = "E4"
