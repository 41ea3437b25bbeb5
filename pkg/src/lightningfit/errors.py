"""Exception taxonomy.

InputError covers precondition violations (bad parameters, off-domain or
pole-coincident points); NumericError covers runtime numerical failures
(quadrature non-convergence, degenerate matrices).  The CLI maps them to
exit codes 1 and 2.
"""


class LightningError(Exception):
    pass


class InputError(LightningError, ValueError):
    pass


class EvaluationError(InputError):
    """A point hit a pole or otherwise cannot be evaluated."""


class NumericError(LightningError, RuntimeError):
    pass
