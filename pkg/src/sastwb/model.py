"""Shared domain types for the workbench pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class Severity(Enum):
    HIGH = "High"
    MEDIUM = "Medium"
    LOW = "Low"


class SarifLevel(Enum):
    ERROR = "Error"
    WARNING = "Warning"
    NOTE = "Note"


LEVEL_TO_SEVERITY = {
    SarifLevel.ERROR: Severity.HIGH,
    SarifLevel.WARNING: Severity.MEDIUM,
    SarifLevel.NOTE: Severity.LOW,
}


class ExtractionMode(Enum):
    SYNTAX_AWARE = "SyntaxAware"
    LINE_WINDOW = "LineWindow"
    UNAVAILABLE = "Unavailable"


@dataclass(frozen=True)
class CodeLocation:
    """A position in a source file, 1-based lines."""

    file_uri: str
    start_line: int
    start_column: Optional[int] = None
    end_line: Optional[int] = None

    def __post_init__(self):
        if self.start_line < 1:
            raise ValueError(f"start_line must be >= 1, got {self.start_line}")
        if self.end_line is not None and self.end_line < self.start_line:
            raise ValueError("end_line must be >= start_line")


@dataclass(frozen=True)
class FlowStep:
    location: CodeLocation
    snippet: str = ""


@dataclass(frozen=True)
class DataFlow:
    """source -> intermediates -> sink taint path; built only from >= 2 steps."""

    source: FlowStep
    intermediates: tuple[FlowStep, ...]
    sink: FlowStep

    def steps(self) -> tuple[FlowStep, ...]:
        return (self.source,) + self.intermediates + (self.sink,)


@dataclass(frozen=True)
class RuleInfo:
    rule_id: str
    rule_name: str
    short_description: str = ""
    default_severity: SarifLevel = SarifLevel.WARNING
    tags: tuple[str, ...] = ()


@dataclass(frozen=True)
class RawResult:
    rule_id: str
    message: str
    severity: SarifLevel
    location: CodeLocation
    thread_flow_steps: tuple[CodeLocation, ...] = ()
    confidence: str = ""


@dataclass(frozen=True)
class SarifDocument:
    schema_version: str
    tool_name: str
    tool_version: str
    rules: tuple[RuleInfo, ...]
    results: tuple[RawResult, ...]

    def rule_for(self, rule_id: str) -> RuleInfo:
        for rule in self.rules:
            if rule.rule_id == rule_id:
                return rule
        return RuleInfo(rule_id=rule_id, rule_name=rule_id)


@dataclass(frozen=True)
class CodeContext:
    """Source context around a flagged line, with the extraction mode that produced it."""

    enclosing_source: str
    flagged_line_text: str
    flagged_line_number: int
    window_start_line: int
    window_end_line: int
    extraction_mode: ExtractionMode
    truncated: bool = False

    @classmethod
    def unavailable(cls, line: int = 1) -> "CodeContext":
        return cls(
            enclosing_source="",
            flagged_line_text="",
            flagged_line_number=line,
            window_start_line=line,
            window_end_line=line,
            extraction_mode=ExtractionMode.UNAVAILABLE,
        )


@dataclass(frozen=True)
class CweEntry:
    cwe_id: str
    name: str
    summary: str = ""
    rank: Optional[int] = None


class MethodCategory(Enum):
    SOURCE = "Source"
    SINK = "Sink"
    SANITIZER = "Sanitizer"


@dataclass(frozen=True)
class CriticalMethod:
    qualified_name: str
    category: MethodCategory
    note: str = ""

    @property
    def simple_name(self) -> str:
        return self.qualified_name.rsplit(".", 1)[-1]


@dataclass
class Finding:
    """One SARIF result enriched with code context and catalog annotations."""

    fingerprint: str
    rule_id: str
    rule_name: str
    message: str
    severity: Severity
    location: CodeLocation
    context: CodeContext
    data_flow: Optional[DataFlow] = None
    cwe: Optional[CweEntry] = None
    critical_methods: list[CriticalMethod] = field(default_factory=list)
    tool_name: str = ""
    tool_version: str = ""
    tool_confidence: str = "unreported"
