"""Exception and warning types shared by all qnkit modules.

Every error carries an ``exit_code`` used by the command line front end:
1 for invalid input, 2 for unstable models, 3 for numeric failures.
"""


class QnError(Exception):
    exit_code = 1


# invalid input (exit code 1)

class InvalidInput(QnError, ValueError):
    pass


class InvalidMatrix(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class InvalidRates(InvalidInput):
    pass


class InvalidServerCount(InvalidInput):
    pass


class InvalidCapacity(InvalidInput):
    pass


class InvalidPhases(InvalidInput):
    pass


class UnsupportedMetric(InvalidInput):
    pass


class InvalidModel(InvalidInput):
    pass


class ClassDependentFcfsService(InvalidModel):
    pass


class CapacityExceeded(InvalidModel):
    def __init__(self, required, budget):
        super().__init__(
            f"population lattice needs {required} points, budget is {budget}")
        self.required = required
        self.budget = budget


class NoAbsorbingState(InvalidInput):
    pass


# unstable model (exit code 2)

class Unstable(QnError):
    exit_code = 2


# numeric failures (exit code 3)

class NumericFailure(QnError, ArithmeticError):
    exit_code = 3


class NonUniqueStationary(NumericFailure):
    pass


class SingularFundamentalMatrix(NumericFailure):
    pass


class ReducibleChain(NumericFailure):
    pass


class SingularRouting(NumericFailure):
    pass


class ReducibleRouting(NumericFailure):
    pass


class NoConvergence(NumericFailure):
    def __init__(self, message, result=None, residual=None):
        super().__init__(message)
        self.result = result
        self.residual = residual


class NumericalUnderflow(RuntimeWarning):
    """Idle probability of a load-dependent center went negative and was clamped."""
