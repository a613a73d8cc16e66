from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


@dataclass(frozen=True, order=True)
class SourceSpan:
    file: str
    line: int
    column: int

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError("span line and column are 1-based")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: SourceSpan | None = None
    element: str | None = None

    def to_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "element": self.element,
            "span": None
            if self.span is None
            else {"file": self.span.file, "line": self.span.line, "column": self.span.column},
        }

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.severity.value}[{self.code}]: {self.message}"


def error(code: str, message: str, span: SourceSpan | None = None, element: str | None = None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, span, element)


def warning(code: str, message: str, span: SourceSpan | None = None, element: str | None = None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, span, element)
