"""Value types and serializable documents for the workbench."""

from src.models.checks import CheckResult

__all__ = ["CheckResult"]
