"""Explanation orchestration: finding -> prompt -> LLM -> structured Explanation,
with caching, feedback capture, and feedback summaries."""

from __future__ import annotations

import re
import threading
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from typing import Any, Optional

from .gateway import ChatMessage, ChatRequest, Gateway, GatewayError, Role
from .model import Finding
from .prompts import ExperienceLevel, Strategy, render_explanation_prompt
from .store import JsonStore

CRITERIA_NAMES = ("Relevant", "Faithful", "Concise", "Coherent", "Accuracy")
LIKERT_SCALE = (1, 2, 3, 4, 5)

EXPLANATION_MAX_TOKENS = 1024


class UnknownFinding(KeyError):
    pass


class FeedbackValidationError(ValueError):
    pass


@dataclass
class Explanation:
    finding_fingerprint: str
    level: str
    cause: str
    impact: str
    mitigation: str
    vulnerability_type: str
    severity: str
    tool_confidence: str
    general_mitigations: list[str]
    raw_text: str
    model_id: str
    template_version: str
    created_at: str
    parse_ok: bool = True

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Explanation":
        return cls(**data)


@dataclass
class Feedback:
    finding_fingerprint: str
    level: str
    thumbs: str  # "Up" | "Down"
    criteria: Optional[dict[str, int]] = None
    comment: Optional[str] = None
    created_at: str = ""


def _now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


_HEADING_RE = re.compile(r"^##\s*(cause|impact|mitigation)\b.*$", re.IGNORECASE | re.MULTILINE)


def parse_sections(raw: str) -> dict[str, Any]:
    """Split markdown on the level-2 Cause/Impact/Mitigation headings.

    Order-independent; a missing heading yields an empty section and parse_ok False.
    """
    sections = {"cause": "", "impact": "", "mitigation": ""}
    matches = list(_HEADING_RE.finditer(raw))
    for i, match in enumerate(matches):
        name = match.group(1).lower()
        start = match.end()
        end = matches[i + 1].start() if i + 1 < len(matches) else len(raw)
        sections[name] = raw[start:end].strip()
    parse_ok = all(sections[name] for name in sections)
    return {**sections, "parse_ok": parse_ok}


def explanation_key(
    fingerprint: str, level: ExperienceLevel, model_id: str, strategy: Strategy, version: str
) -> str:
    parts = (fingerprint, level.value, model_id, strategy.value, version)
    if not all(parts):
        raise ValueError("all key components must be non-empty")
    return ":".join(parts)


class ExplanationService:
    def __init__(self, store: JsonStore, gateway: Gateway, model_id: str):
        self._store = store
        self._gateway = gateway
        self._model_id = model_id
        self._inflight: dict[str, threading.Lock] = {}
        self._inflight_guard = threading.Lock()

    def _key_lock(self, key: str) -> threading.Lock:
        with self._inflight_guard:
            return self._inflight.setdefault(key, threading.Lock())

    def explain(
        self,
        finding: Finding,
        level: ExperienceLevel,
        validate_flag: bool = False,
        force_refresh: bool = False,
    ) -> tuple[Explanation, bool]:
        """Returns (explanation, cache_hit). Duplicate concurrent requests for one
        key are coalesced so the gateway runs at most once per key."""
        bundle = render_explanation_prompt(finding, level, validate_flag=validate_flag)
        key = explanation_key(
            finding.fingerprint, level, self._model_id, bundle.strategy, bundle.template_version
        )
        with self._key_lock(key):
            if not force_refresh:
                stored = self._store.get("explanations", key)
                if stored is not None:
                    return Explanation.from_dict(stored), True

            request = ChatRequest(
                model_id=self._model_id,
                messages=(
                    ChatMessage(Role.SYSTEM, bundle.system_text),
                    ChatMessage(Role.USER, bundle.user_text),
                ),
                temperature=0.0,
                max_output_tokens=EXPLANATION_MAX_TOKENS,
                request_tag=finding.fingerprint,
            )
            try:
                response = self._gateway.complete(request)
            except GatewayError as exc:
                raise type(exc)(f"finding {finding.fingerprint}: {exc}") from exc

            sections = parse_sections(response.content)
            explanation = Explanation(
                finding_fingerprint=finding.fingerprint,
                level=level.value,
                cause=sections["cause"],
                impact=sections["impact"],
                mitigation=sections["mitigation"],
                vulnerability_type=(
                    finding.cwe.name if finding.cwe is not None else finding.rule_name
                ),
                severity=finding.severity.value,
                tool_confidence=finding.tool_confidence,
                general_mitigations=(
                    [finding.cwe.summary] if finding.cwe is not None and finding.cwe.summary else []
                ),
                raw_text=response.content,
                model_id=response.model_id,
                template_version=bundle.template_version,
                created_at=_now_iso(),
                parse_ok=sections["parse_ok"],
            )
            self._store.put("explanations", key, explanation.to_dict())
            return explanation, False

    def _has_explanation(self, fingerprint: str) -> bool:
        return any(
            value["finding_fingerprint"] == fingerprint
            for _, value in self._store.items("explanations")
        )

    def record_feedback(self, feedback: Feedback) -> str:
        if feedback.thumbs not in ("Up", "Down"):
            raise FeedbackValidationError(f"thumbs must be Up or Down, got {feedback.thumbs!r}")
        if feedback.criteria is not None:
            if set(feedback.criteria) != set(CRITERIA_NAMES):
                raise FeedbackValidationError(
                    f"criteria keys must be exactly {CRITERIA_NAMES}"
                )
            for name, value in feedback.criteria.items():
                if not isinstance(value, int) or not 1 <= value <= 5:
                    raise FeedbackValidationError(f"criterion {name} out of 1..5: {value!r}")
        if not self._has_explanation(feedback.finding_fingerprint):
            raise UnknownFinding(feedback.finding_fingerprint)
        record = asdict(feedback)
        record["created_at"] = feedback.created_at or _now_iso()
        return self._store.append("feedback", record)

    def feedback_records(self) -> list[dict]:
        return [value for _, value in self._store.items("feedback")]

    def summarize_feedback(self, level: Optional[str] = None) -> dict[str, dict]:
        """Per-criterion counts and percentages across the 1..5 scale."""
        table = {
            name: {"counts": {v: 0 for v in LIKERT_SCALE}, "percent": {v: 0.0 for v in LIKERT_SCALE}, "total": 0}
            for name in CRITERIA_NAMES
        }
        for record in self.feedback_records():
            if level is not None and record["level"] != level:
                continue
            criteria = record.get("criteria")
            if not criteria:
                continue
            for name, value in criteria.items():
                table[name]["counts"][int(value)] += 1
                table[name]["total"] += 1
        for name in CRITERIA_NAMES:
            total = table[name]["total"]
            if total:
                for v in LIKERT_SCALE:
                    table[name]["percent"][v] = 100.0 * table[name]["counts"][v] / total
        return table
