"""
Pydantic models for the acceptance report.

Every item compares an expected value with a recomputed one; both are
rendered as exact strings.
"""

from typing import List, Optional

from pydantic import BaseModel, Field, field_validator


# ============== Report ==============

class ReportItem(BaseModel):
    """One recomputed number or property."""

    name: str = Field(..., min_length=1)
    expected: str = Field(default="", description="Value as stated in the literature")
    actual: str = Field(default="", description="Recomputed value")
    status: str = Field(..., description="'PASS' or 'FAIL'")
    detail: Optional[str] = None

    @field_validator('status', mode='before')
    @classmethod
    def normalize_status(cls, v):
        if isinstance(v, bool):
            return "PASS" if v else "FAIL"
        v = str(v).upper()
        if v not in ("PASS", "FAIL"):
            raise ValueError(f"status must be PASS or FAIL, got {v!r}")
        return v

    @property
    def passed(self) -> bool:
        return self.status == "PASS"


class ReportSection(BaseModel):
    title: str
    items: List[ReportItem] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.items)

    def add(self, name: str, ok: bool, expected: str = "", actual: str = "", detail: Optional[str] = None) -> None:
        self.items.append(ReportItem(name=name, expected=expected, actual=actual, status=ok, detail=detail))


class WorkbenchReport(BaseModel):
    """The full acceptance report."""

    app_name: str
    version: str
    generated_at: str
    sections: List[ReportSection] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(section.passed for section in self.sections)

    @property
    def counts(self) -> dict:
        items = [item for section in self.sections for item in section.items]
        passed = sum(1 for item in items if item.passed)
        return {"total": len(items), "passed": passed, "failed": len(items) - passed}

    def to_text(self) -> str:
        lines = [f"{self.app_name} {self.version} report ({self.generated_at})", ""]
        for section in self.sections:
            lines.append(f"== {section.title} ==")
            for item in section.items:
                line = f"[{item.status}] {item.name}"
                if item.actual:
                    line += f": {item.actual}"
                if not item.passed and item.expected:
                    line += f" (expected {item.expected})"
                lines.append(line)
                if item.detail and not item.passed:
                    lines.append(f"       {item.detail}")
            lines.append("")
        counts = self.counts
        lines.append(f"{counts['passed']}/{counts['total']} PASS")
        lines.append("ALL PASS" if self.passed else "FAILED")
        return "\n".join(lines)
