"""Diagnostics shared by the parser, the CSV importer and the validator."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .model import SourceSpan


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


# code -> short rule title
CODES = {
    "E001": "duplicate identifier",
    "E002": "invalid identifier",
    "E003": "empty definition",
    "E005": "unresolved trace endpoint",
    "E006": "satisfy source is not a component",
    "E007": "satisfy target is not a requirement",
    "E008": "unresolved interface reference",
    "E009": "unresolved node reference",
    "E010": "trace level order",
    "E011": "trace cycle",
    "E012": "duplicate trace link",
    "E013": "duplicate satisfy link",
    "E014": "component containment cycle",
    "E020": "invalid enum literal",
    "E021": "syntax error",
    "E022": "lexical error",
    "E023": "missing property",
    "E024": "duplicate property",
    "E030": "bad CSV header",
    "E031": "invalid CSV enum cell",
    "E032": "CSV id collision outside target container",
    "E033": "unknown container",
    "E034": "malformed CSV row",
    "E040": "unknown component",
    "E041": "unknown package",
    "W001": "empty container or package",
    "W002": "conflicting model names",
}


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    subject: Optional[str] = None
    location: Optional[SourceSpan] = None

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def sort_key(self):
        loc = self.location
        return (
            loc.file if loc else "",
            loc.line if loc else 0,
            self.code,
            loc.column if loc else 0,
            self.subject or "",
            self.message,
        )

    def format(self) -> str:
        where = str(self.location) if self.location else "<model>"
        return f"{where} {self.code} {self.severity.value}: {self.message}"

    def to_dict(self) -> dict:
        loc = self.location
        return {
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "subject": self.subject,
            "file": loc.file if loc else None,
            "line": loc.line if loc else None,
            "column": loc.column if loc else None,
        }


def error(code: str, message: str, subject=None, location=None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, subject, location)


def warning(code: str, message: str, subject=None, location=None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, subject, location)


def sort_diagnostics(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    return sorted(diags, key=Diagnostic.sort_key)


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diags)


class ReqforgeError(Exception):
    """Raised by operations whose precondition names a missing element."""

    def __init__(self, code: str, message: str, subject: Optional[str] = None):
        super().__init__(f"{code} {message}")
        self.code = code
        self.subject = subject
        self.diagnostic = error(code, message, subject)
