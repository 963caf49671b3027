"""Exception hierarchy; the CLI maps each family to an exit code."""


class ChanspecError(Exception):
    exit_code = 1


class SpecError(ChanspecError, ValueError):
    """The graph or family description is malformed or violates an invariant."""

    exit_code = 2


class NumericError(ChanspecError, ArithmeticError):
    """A numerical routine failed (non-convergence, non-finite value, size cap)."""

    exit_code = 3


class PrecisionMismatch(NumericError):
    pass


class NonConvergence(NumericError):
    def __init__(self, message, worst_residual=None, precision=None):
        super().__init__(message)
        self.worst_residual = worst_residual
        self.precision = precision


class CapExceeded(NumericError):
    pass


class VerificationError(ChanspecError):
    exit_code = 4
