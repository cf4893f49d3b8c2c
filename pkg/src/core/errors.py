"""Domain errors for the workbench.

Check operations return CheckResult values instead of raising; the classes
below are for violated preconditions and malformed input.
"""

from typing import Any, Dict, Optional


class WorkbenchError(Exception):
    """Base class for every error raised by the workbench."""


class DimensionMismatchError(WorkbenchError, ValueError):
    """Shapes of vectors, matrices or subspaces disagree."""


class SingularMatrixError(WorkbenchError, ArithmeticError):
    """A matrix that must be invertible is singular."""


class NotAnIdealError(WorkbenchError, ValueError):
    """A quotient was requested by a subspace that is not an ideal."""


class JacobiError(WorkbenchError, ValueError):
    """Structure constants violate the Jacobi identity."""

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.witness = witness or {}


class NotADerivationError(WorkbenchError, ValueError):
    """An endomorphism expected to be a derivation is not one."""


class NotSkewError(WorkbenchError, ValueError):
    """An endomorphism is not skew-symmetric for the metric."""


class RankError(WorkbenchError, ValueError):
    """An endomorphism has the wrong rank."""


class DegenerateFormError(WorkbenchError, ValueError):
    """The bilinear form is degenerate where nondegeneracy is required."""


class NotAdInvariantError(WorkbenchError, ValueError):
    """A metric fails ad-invariance."""


class IrrationalSpectrumError(WorkbenchError, ArithmeticError):
    """A characteristic polynomial has a root outside the rationals."""


class NikolayevskyError(WorkbenchError, ArithmeticError):
    """The trace system has no rational semisimple solution."""


class NotACocycleError(WorkbenchError, ValueError):
    """A 2-form used for a central extension is not closed."""


class CertificateError(WorkbenchError, ValueError):
    """A quotient certificate does not reproduce its target."""


class UnknownAlgebraError(WorkbenchError, KeyError):
    """A catalog name does not exist."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown algebra"


class AlgebraSyntaxError(WorkbenchError, ValueError):
    """Malformed structure-constant document or proof script."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


class ScriptStepError(WorkbenchError, ValueError):
    """A proof-script step could not be validated."""

    def __init__(self, step: str, reason: str):
        super().__init__(f"step {step}: {reason}")
        self.step = step
        self.reason = reason


class UnrecordedFactError(WorkbenchError, ValueError):
    """A deduction rule was given a subspace or element not yet known to be nice."""
