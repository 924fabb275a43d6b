"""End-to-end import pipeline: SARIF bytes -> parsed, contextualized, annotated,
persisted findings; plus JSON serialization for stored findings."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import sarif, snippets
from .catalogs import Catalogs, annotate
from .model import (
    CodeContext,
    CodeLocation,
    CriticalMethod,
    CweEntry,
    DataFlow,
    ExtractionMode,
    Finding,
    FlowStep,
    MethodCategory,
    Severity,
)
from .store import JsonStore


@dataclass(frozen=True)
class ScanRecord:
    scan_id: str
    sarif_path: str
    source_root: str
    imported_at: str
    finding_count: int


def _location_to_dict(loc: CodeLocation) -> dict:
    return {
        "file_uri": loc.file_uri,
        "start_line": loc.start_line,
        "start_column": loc.start_column,
        "end_line": loc.end_line,
    }


def _location_from_dict(data: dict) -> CodeLocation:
    return CodeLocation(**data)


def _flow_to_dict(flow: Optional[DataFlow]) -> Optional[dict]:
    if flow is None:
        return None

    def step(s: FlowStep) -> dict:
        return {"location": _location_to_dict(s.location), "snippet": s.snippet}

    return {
        "source": step(flow.source),
        "intermediates": [step(s) for s in flow.intermediates],
        "sink": step(flow.sink),
    }


def _flow_from_dict(data: Optional[dict]) -> Optional[DataFlow]:
    if data is None:
        return None

    def step(d: dict) -> FlowStep:
        return FlowStep(location=_location_from_dict(d["location"]), snippet=d["snippet"])

    return DataFlow(
        source=step(data["source"]),
        intermediates=tuple(step(d) for d in data["intermediates"]),
        sink=step(data["sink"]),
    )


def finding_to_dict(finding: Finding) -> dict:
    return {
        "fingerprint": finding.fingerprint,
        "rule_id": finding.rule_id,
        "rule_name": finding.rule_name,
        "message": finding.message,
        "severity": finding.severity.value,
        "location": _location_to_dict(finding.location),
        "context": {
            "enclosing_source": finding.context.enclosing_source,
            "flagged_line_text": finding.context.flagged_line_text,
            "flagged_line_number": finding.context.flagged_line_number,
            "window_start_line": finding.context.window_start_line,
            "window_end_line": finding.context.window_end_line,
            "extraction_mode": finding.context.extraction_mode.value,
            "truncated": finding.context.truncated,
        },
        "data_flow": _flow_to_dict(finding.data_flow),
        "cwe": (
            {
                "cwe_id": finding.cwe.cwe_id,
                "name": finding.cwe.name,
                "summary": finding.cwe.summary,
                "rank": finding.cwe.rank,
            }
            if finding.cwe
            else None
        ),
        "critical_methods": [
            {"qualified_name": m.qualified_name, "category": m.category.value, "note": m.note}
            for m in finding.critical_methods
        ],
        "tool_name": finding.tool_name,
        "tool_version": finding.tool_version,
        "tool_confidence": finding.tool_confidence,
    }


def finding_from_dict(data: dict) -> Finding:
    ctx = data["context"]
    return Finding(
        fingerprint=data["fingerprint"],
        rule_id=data["rule_id"],
        rule_name=data["rule_name"],
        message=data["message"],
        severity=Severity(data["severity"]),
        location=_location_from_dict(data["location"]),
        context=CodeContext(
            enclosing_source=ctx["enclosing_source"],
            flagged_line_text=ctx["flagged_line_text"],
            flagged_line_number=ctx["flagged_line_number"],
            window_start_line=ctx["window_start_line"],
            window_end_line=ctx["window_end_line"],
            extraction_mode=ExtractionMode(ctx["extraction_mode"]),
            truncated=ctx["truncated"],
        ),
        data_flow=_flow_from_dict(data["data_flow"]),
        cwe=CweEntry(**data["cwe"]) if data["cwe"] else None,
        critical_methods=[
            CriticalMethod(
                qualified_name=m["qualified_name"],
                category=MethodCategory(m["category"]),
                note=m["note"],
            )
            for m in data["critical_methods"]
        ],
        tool_name=data["tool_name"],
        tool_version=data["tool_version"],
        tool_confidence=data["tool_confidence"],
    )


def build_findings(
    document: sarif.SarifDocument,
    source_root: Path | str,
    catalogs: Optional[Catalogs] = None,
) -> list[Finding]:
    """Normalize, extract contexts and flow snippets, and annotate."""
    source_root = Path(source_root)
    findings = sarif.normalize(document)
    out = []
    for finding in findings:
        finding.context = snippets.extract_context(source_root, finding.location)
        if finding.data_flow is not None:
            finding.data_flow = snippets.attach_flow_snippets(finding.data_flow, source_root)
        if catalogs is not None:
            rule = document.rule_for(finding.rule_id)
            finding = annotate(finding, catalogs, rule_tags=rule.tags)
        out.append(finding)
    return out


def import_scan(
    raw_bytes: bytes,
    source_root: Path | str,
    store: JsonStore,
    catalogs: Optional[Catalogs] = None,
    sarif_path: str = "<upload>",
) -> ScanRecord:
    document = sarif.parse_sarif(raw_bytes)
    findings = build_findings(document, source_root, catalogs)
    scan_id = hashlib.sha256(raw_bytes + str(source_root).encode()).hexdigest()[:12]
    record = ScanRecord(
        scan_id=scan_id,
        sarif_path=sarif_path,
        source_root=str(source_root),
        imported_at=datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        finding_count=len(findings),
    )
    store.put(
        "scans",
        scan_id,
        {
            "scan_id": scan_id,
            "sarif_path": record.sarif_path,
            "source_root": record.source_root,
            "imported_at": record.imported_at,
            "finding_count": record.finding_count,
            "fingerprints": [f.fingerprint for f in findings],
        },
    )
    for finding in findings:
        store.put("findings", finding.fingerprint, finding_to_dict(finding))
    return record


def group_findings(findings: list[dict], group: str = "rule") -> dict:
    """Tree JSON: branches by rule or file, leaves are finding summaries."""
    branches: dict[str, list[dict]] = {}
    for data in findings:
        key = data["rule_name"] if group == "rule" else data["location"]["file_uri"]
        branches.setdefault(key, []).append(
            {
                "fingerprint": data["fingerprint"],
                "rule_name": data["rule_name"],
                "severity": data["severity"],
                "message": data["message"],
                "file_uri": data["location"]["file_uri"],
                "start_line": data["location"]["start_line"],
            }
        )
    return {
        "group": group,
        "branches": [
            {"label": label, "findings": leaves} for label, leaves in sorted(branches.items())
        ],
    }
