"""Exception types. Each carries the exit code the CLI maps it to."""

from __future__ import annotations


class ParamagnonError(Exception):
    exit_code = 3


class ParameterError(ParamagnonError, ValueError):
    """Invalid or non-finite model parameters."""

    exit_code = 2


class UnstableError(ParamagnonError):
    """A steady state was requested for parameters outside the stable region."""


class BracketError(ParamagnonError):
    """The stability bracket for a critical-G search is invalid."""


class ZeroResponseError(ParamagnonError):
    """Reference spin current is zero or underflowed; the ratio is undefined."""


class NumericalError(ParamagnonError):
    exit_code = 4


class EigensolverError(NumericalError):
    def __init__(self, message: str, matrix=None, params=None):
        super().__init__(message)
        self.matrix = matrix
        self.params = params


class SingularMatrixError(NumericalError):
    pass


class IllConditionedWarning(RuntimeWarning):
    pass
