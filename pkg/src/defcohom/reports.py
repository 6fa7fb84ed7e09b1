"""Validation reports shared by every validator in the package."""

from __future__ import annotations

from dataclasses import dataclass, field


class ValidationError(ValueError):
    """An input object failed validation; ``report`` says why."""

    def __init__(self, report: "Report"):
        super().__init__(report.summary())
        self.report = report


@dataclass
class Report:
    subject: str
    shape_errors: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.shape_errors and not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def shape(self, msg: str) -> None:
        self.shape_errors.append(msg)

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def summary(self) -> str:
        if self.ok:
            return f"{self.subject}: ok"
        lines = [f"{self.subject}: INVALID"]
        lines += [f"  shape: {m}" for m in self.shape_errors]
        lines += [f"  law: {m}" for m in self.failures]
        return "\n".join(lines)

    def raise_if_failed(self) -> None:
        if not self.ok:
            raise ValidationError(self)
