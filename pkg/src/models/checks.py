"""
Result values shared by the check operations.

A check never raises for a failing instance; it returns a CheckResult whose
witness names the first offending basis triple, pair or derivation.
"""

from dataclasses import dataclass, field
from typing import Any, Dict


@dataclass
class CheckResult:
    """Outcome of a verification. Truthy iff the check passed."""
    ok: bool
    witness: Dict[str, Any] = field(default_factory=dict)
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, message: str = "") -> "CheckResult":
        return cls(ok=True, message=message)

    @classmethod
    def failed(cls, message: str, **witness: Any) -> "CheckResult":
        return cls(ok=False, witness=dict(witness), message=message)

    def to_dict(self) -> Dict[str, Any]:
        """Plain dict with exact numbers rendered as strings."""
        return {
            "status": "PASS" if self.ok else "FAIL",
            "message": self.message,
            "witness": {k: _render(v) for k, v in self.witness.items()},
        }


def _render(value: Any) -> Any:
    if isinstance(value, (list, tuple)):
        return [_render(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _render(v) for k, v in value.items()}
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)
