"""Exception hierarchy.

Input problems derive from ``ValueError`` so callers that only care about
bad arguments can catch the builtin.  Numerical guards are separate: the
CLI maps them to a different exit status.
"""


class PlurikitError(Exception):
    pass


class InputError(PlurikitError, ValueError):
    pass


class AdmissibilityError(InputError):
    """All weights vanish: the discrete proxy for an admissible weight fails."""


class PreconditionError(InputError):
    pass


class RankDeficiencyError(PreconditionError):
    pass


class ConfigurationError(InputError):
    pass


class EmptyResultError(InputError):
    pass


class NumericalGuardError(PlurikitError):
    pass


class ConditioningError(NumericalGuardError):
    def __init__(self, message, condition_estimate=None):
        super().__init__(message)
        self.condition_estimate = condition_estimate


class ApproximationError(NumericalGuardError):
    pass


class SolverError(NumericalGuardError):
    pass
