"""Exception hierarchy.

The CLI maps these onto exit codes: malformed input 1, hypothesis
violations 2, numerical non-convergence 3.
"""


class WeightspaceError(Exception):
    """Base class for all errors raised by the package."""

    exit_code = 1


class SpecError(WeightspaceError, ValueError):
    """A weight, function or experiment specification is malformed."""


class DomainError(WeightspaceError, ValueError):
    """An argument lies outside the domain of an operation."""


class NonIntegrableWeightError(WeightspaceError, ValueError):
    """A construction would produce a weight with infinite total mass."""


class TruncationError(WeightspaceError, ValueError):
    """A radius lies beyond the validity of a truncated Maclaurin series."""


class HypothesisError(WeightspaceError):
    """An experiment configuration violates a hypothesis of the statement it tests."""

    exit_code = 2

    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        msg = f"hypothesis violated: {hypothesis}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ConvergenceError(WeightspaceError, ArithmeticError):
    """A numerical procedure did not reach its tolerance."""

    exit_code = 3


class SingularMassError(ConvergenceError):
    """The excluded-disc check around zeros of f detected non-negligible mass."""
