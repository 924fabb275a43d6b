"""Prompt rendering: the explanation prompt (system+user, experience-level aware)
and the benchmark detection prompts (zero-shot, few-shot, chain-of-thought).

Templates live as text files under templates/ with `{name}` placeholders;
rendering is deterministic and byte-stable.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Optional, Sequence

from .model import Finding, DataFlow


class ExperienceLevel(Enum):
    BEGINNER = "beginner"
    INTERMEDIATE = "intermediate"
    ADVANCED = "advanced"


class Strategy(Enum):
    ZERO_SHOT = "zero-shot"
    FEW_SHOT = "few-shot"
    CHAIN_OF_THOUGHT = "cot"


class UnresolvedPlaceholder(Exception):
    """A template placeholder survived rendering; indicates a template bug."""


class MissingExamples(ValueError):
    pass


@dataclass(frozen=True)
class FewShotExample:
    code: str
    label: bool
    cwe_id: Optional[str] = None
    rationale: str = ""

    def __post_init__(self):
        if not self.code:
            raise ValueError("example code must be non-empty")


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    user_text: str
    strategy: Strategy
    template_version: str
    placeholder_report: tuple[tuple[str, bool], ...]


_TEMPLATE_FILES = (
    "explain_system.txt",
    "explain_user.txt",
    "guidelines.txt",
    "detect_system.txt",
    "detect_user.txt",
    "detect_example.txt",
    "detect_cot.txt",
    "answer_format.txt",
)

_PLACEHOLDER_RE = re.compile(r"\{([A-Za-z][A-Za-z0-9_-]*(?: [A-Za-z0-9_-]+)*)\}")

VALIDATION_SENTENCE = (
    "First verify that the reported vulnerability is a true positive for this code; "
    "if it is a false positive, state so explicitly and explain why."
)


def _template(name: str) -> str:
    return resources.files("sastwb.templates").joinpath(name).read_text("utf-8")


def template_version() -> str:
    """Content hash over all template files; participates in cache keys."""
    digest = hashlib.sha256()
    for name in _TEMPLATE_FILES:
        digest.update(name.encode())
        digest.update(b"\x00")
        digest.update(_template(name).encode("utf-8"))
    return digest.hexdigest()[:12]


def _render(template: str, values: dict[str, str]) -> tuple[str, list[tuple[str, bool]]]:
    report = []

    def sub(match: re.Match) -> str:
        name = match.group(1)
        if name not in values:
            raise UnresolvedPlaceholder(f"no value for placeholder {{{name}}}")
        report.append((name, True))
        return values[name]

    return _PLACEHOLDER_RE.sub(sub, template), report


def _check_no_placeholders(*texts: str) -> None:
    for text in texts:
        leftover = _PLACEHOLDER_RE.search(text)
        if leftover:
            raise UnresolvedPlaceholder(f"unresolved placeholder {leftover.group()!r} in output")


def format_data_flow(flow: Optional[DataFlow]) -> str:
    if flow is None:
        return "not available"
    lines = []
    for label, step in (
        [("source", flow.source)]
        + [("intermediate", s) for s in flow.intermediates]
        + [("sink", flow.sink)]
    ):
        loc = step.location
        line = f"{label} {loc.file_uri}:{loc.start_line}"
        if step.snippet:
            line += f": {step.snippet}"
        lines.append(line)
    return "\n".join(lines)


def render_explanation_prompt(
    finding: Finding,
    level: ExperienceLevel,
    validate_flag: bool = False,
    include_catalog_line: bool = False,
) -> PromptBundle:
    system_text, system_report = _render(
        _template("explain_system.txt"),
        {"Formatting and output Guidelines": _template("guidelines.txt")},
    )

    location_text = finding.context.enclosing_source
    if finding.context.truncated:
        location_text += "\n[snippet truncated]"

    user_text, user_report = _render(
        _template("explain_user.txt"),
        {
            "level": level.value,
            "rule name": finding.rule_name,
            "rule message": finding.message,
            "location": location_text,
            "location-line": finding.context.flagged_line_text,
            "data-flow": format_data_flow(finding.data_flow),
        },
    )
    if include_catalog_line:
        parts = []
        if finding.cwe is not None:
            parts.append(f"{finding.cwe.cwe_id} {finding.cwe.name}".strip())
        if finding.critical_methods:
            names = ", ".join(m.qualified_name for m in finding.critical_methods)
            parts.append(f"critical methods: {names}")
        if parts:
            user_text += "\nCatalog notes: " + "; ".join(parts)
    if validate_flag:
        user_text += "\n" + VALIDATION_SENTENCE

    _check_no_placeholders(system_text, user_text)
    return PromptBundle(
        system_text=system_text,
        user_text=user_text,
        strategy=Strategy.ZERO_SHOT,
        template_version=template_version(),
        placeholder_report=tuple(system_report + user_report),
    )


def _render_example(index: int, example: FewShotExample) -> str:
    cwe_line = f"\nCWE: {example.cwe_id}" if (example.label and example.cwe_id) else ""
    text, _ = _render(
        _template("detect_example.txt"),
        {
            "index": str(index),
            "verdict-word": "vulnerable" if example.label else "not vulnerable",
            "example-code": example.code,
            "verdict": "YES" if example.label else "NO",
            "cwe-line": cwe_line,
            "rationale": example.rationale or "see verdict",
        },
    )
    return text


def render_detection_prompt(
    code: str,
    strategy: Strategy,
    examples: Sequence[FewShotExample] = (),
) -> PromptBundle:
    if strategy == Strategy.FEW_SHOT and not examples:
        raise MissingExamples("few-shot strategy requires at least one example")

    answer_format = _template("answer_format.txt")
    if strategy == Strategy.CHAIN_OF_THOUGHT:
        answer_format = _template("detect_cot.txt") + "\n\n" + answer_format

    user_text, report = _render(
        _template("detect_user.txt"),
        {"code": code, "answer-format": answer_format},
    )
    if strategy == Strategy.FEW_SHOT:
        blocks = [_render_example(i + 1, ex) for i, ex in enumerate(examples)]
        user_text = "\n\n".join(blocks) + "\n\n" + user_text

    system_text = _template("detect_system.txt")
    _check_no_placeholders(system_text, user_text)
    return PromptBundle(
        system_text=system_text,
        user_text=user_text,
        strategy=strategy,
        template_version=template_version(),
        placeholder_report=tuple(report),
    )
