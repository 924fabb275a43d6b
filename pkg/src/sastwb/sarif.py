"""SARIF 2.1.0 ingestion: parse result files into normalized findings.

Consumes the `results` arrays of every run, including the data-flow steps
recorded under `codeFlows[0].threadFlows[0]`. Unknown SARIF properties are
ignored.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import PurePosixPath
from typing import Optional

from .model import (
    LEVEL_TO_SEVERITY,
    CodeLocation,
    DataFlow,
    Finding,
    FlowStep,
    RawResult,
    RuleInfo,
    SarifDocument,
    SarifLevel,
    Severity,
)


class SarifError(Exception):
    """Base class for SARIF ingestion failures."""


class MalformedJson(SarifError):
    pass


class NotSarif(SarifError):
    pass


class UnsupportedVersion(SarifError):
    pass


_LEVEL_NAMES = {
    "error": SarifLevel.ERROR,
    "warning": SarifLevel.WARNING,
    "note": SarifLevel.NOTE,
}


def _normalize_uri(uri: str) -> str:
    """Forward-slash relative path; absolute URIs are kept verbatim."""
    uri = uri.replace("\\", "/")
    if uri.startswith("file://"):
        uri = uri[len("file://"):]
    if uri.startswith("/") or ("://" in uri):
        return uri
    return str(PurePosixPath(uri))


def _parse_location(obj: dict) -> Optional[CodeLocation]:
    phys = obj.get("physicalLocation", {})
    artifact = phys.get("artifactLocation", {})
    uri = artifact.get("uri")
    region = phys.get("region", {})
    start_line = region.get("startLine")
    if not uri or not isinstance(start_line, int) or start_line < 1:
        return None
    end_line = region.get("endLine")
    if isinstance(end_line, int) and end_line < start_line:
        end_line = None
    start_col = region.get("startColumn")
    return CodeLocation(
        file_uri=_normalize_uri(uri),
        start_line=start_line,
        start_column=start_col if isinstance(start_col, int) and start_col >= 1 else None,
        end_line=end_line if isinstance(end_line, int) else None,
    )


def _parse_rule(obj: dict) -> RuleInfo:
    rule_id = obj.get("id", "")
    name = obj.get("name") or rule_id
    desc = obj.get("shortDescription", {}).get("text", "")
    level = _LEVEL_NAMES.get(
        obj.get("defaultConfiguration", {}).get("level", ""), SarifLevel.WARNING
    )
    tags = tuple(obj.get("properties", {}).get("tags", []) or [])
    return RuleInfo(
        rule_id=rule_id,
        rule_name=name,
        short_description=desc,
        default_severity=level,
        tags=tags,
    )


def _thread_flow_steps(result: dict) -> tuple[CodeLocation, ...]:
    # Only the first threadFlow of the first codeFlow is consumed.
    code_flows = result.get("codeFlows") or []
    if not code_flows:
        return ()
    thread_flows = code_flows[0].get("threadFlows") or []
    if not thread_flows:
        return ()
    steps = []
    for entry in thread_flows[0].get("locations", []):
        loc = _parse_location(entry.get("location", {}))
        if loc is not None:
            steps.append(loc)
    return tuple(steps)


def _result_confidence(result: dict, rule: Optional[dict]) -> str:
    for props in (result.get("properties"), (rule or {}).get("properties")):
        if isinstance(props, dict) and "confidence" in props:
            return str(props["confidence"])
    return ""


def parse_sarif(raw_bytes: bytes) -> SarifDocument:
    """Parse SARIF 2.1.0 bytes; all runs are flattened into one document."""
    try:
        data = json.loads(raw_bytes.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedJson(f"not valid UTF-8 JSON: {exc}") from exc
    if not isinstance(data, dict) or "version" not in data or "runs" not in data:
        raise NotSarif("missing required 'version' or 'runs' property")
    version = str(data["version"])
    major = version.split(".", 1)[0]
    if major != "2":
        raise UnsupportedVersion(f"unsupported SARIF major version: {version}")

    runs = data["runs"] or []
    tool_name = ""
    tool_version = ""
    rules: dict[str, RuleInfo] = {}
    results: list[RawResult] = []

    for run in runs:
        driver = run.get("tool", {}).get("driver", {})
        if not tool_name:
            tool_name = driver.get("name", "")
            tool_version = driver.get("version", "")
        rule_objs = {r.get("id", ""): r for r in driver.get("rules", [])}
        for rid, obj in rule_objs.items():
            rules.setdefault(rid, _parse_rule(obj))
        for result in run.get("results", []):
            rule_id = result.get("ruleId", "")
            if rule_id not in rules:
                rules[rule_id] = RuleInfo(rule_id=rule_id, rule_name=rule_id)
            location = None
            locs = result.get("locations") or []
            if locs:
                location = _parse_location(locs[0])
            if location is None:
                location = CodeLocation(file_uri="<unknown>", start_line=1)
            level_name = result.get("level", "")
            if level_name in _LEVEL_NAMES:
                level = _LEVEL_NAMES[level_name]
            else:
                level = rules[rule_id].default_severity
            results.append(
                RawResult(
                    rule_id=rule_id,
                    message=result.get("message", {}).get("text", ""),
                    severity=level,
                    location=location,
                    thread_flow_steps=_thread_flow_steps(result),
                    confidence=_result_confidence(result, rule_objs.get(rule_id)),
                )
            )

    return SarifDocument(
        schema_version=version,
        tool_name=tool_name,
        tool_version=tool_version,
        rules=tuple(rules.values()),
        results=tuple(results),
    )


def extract_data_flow(result: RawResult) -> Optional[DataFlow]:
    """Partition thread-flow steps into source/intermediates/sink; needs >= 2 steps."""
    steps = result.thread_flow_steps
    if len(steps) < 2:
        return None
    return DataFlow(
        source=FlowStep(location=steps[0]),
        intermediates=tuple(FlowStep(location=loc) for loc in steps[1:-1]),
        sink=FlowStep(location=steps[-1]),
    )


def fingerprint(rule_id: str, file_uri: str, start_line: int, message: str, ordinal: int) -> str:
    key = f"{rule_id}\x1f{file_uri}\x1f{start_line}\x1f{message}\x1f{ordinal}"
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


def severity_of(result: RawResult) -> Severity:
    return LEVEL_TO_SEVERITY[result.severity]


def normalize(document: SarifDocument) -> list[Finding]:
    """One Finding per result, ordered by (file_uri, start_line, rule_id).

    Contexts are not extracted here; see snippets.extract_context. Byte-identical
    results get distinct fingerprints via an ordinal disambiguator.
    """
    from .model import CodeContext  # local to keep module import order flat

    ordered = sorted(
        document.results,
        key=lambda r: (r.location.file_uri, r.location.start_line, r.rule_id),
    )
    seen: dict[tuple, int] = {}
    findings = []
    for result in ordered:
        key = (result.rule_id, result.location.file_uri, result.location.start_line, result.message)
        ordinal = seen.get(key, 0)
        seen[key] = ordinal + 1
        rule = document.rule_for(result.rule_id)
        findings.append(
            Finding(
                fingerprint=fingerprint(*key, ordinal),
                rule_id=result.rule_id,
                rule_name=rule.rule_name,
                message=result.message,
                severity=severity_of(result),
                location=result.location,
                context=CodeContext.unavailable(result.location.start_line),
                data_flow=extract_data_flow(result),
                tool_name=document.tool_name,
                tool_version=document.tool_version,
                tool_confidence=result.confidence or "unreported",
            )
        )
    return findings


def project(document: SarifDocument) -> dict:
    """Serialize the consumed subset back to SARIF-shaped JSON (round-trip check)."""
    level_name = {SarifLevel.ERROR: "error", SarifLevel.WARNING: "warning", SarifLevel.NOTE: "note"}

    def loc_obj(loc: CodeLocation) -> dict:
        region: dict = {"startLine": loc.start_line}
        if loc.start_column is not None:
            region["startColumn"] = loc.start_column
        if loc.end_line is not None:
            region["endLine"] = loc.end_line
        return {
            "physicalLocation": {
                "artifactLocation": {"uri": loc.file_uri},
                "region": region,
            }
        }

    results = []
    for r in document.results:
        obj: dict = {
            "ruleId": r.rule_id,
            "level": level_name[r.severity],
            "message": {"text": r.message},
            "locations": [loc_obj(r.location)],
        }
        if r.thread_flow_steps:
            obj["codeFlows"] = [
                {
                    "threadFlows": [
                        {"locations": [{"location": loc_obj(s)} for s in r.thread_flow_steps]}
                    ]
                }
            ]
        if r.confidence:
            obj["properties"] = {"confidence": r.confidence}
        results.append(obj)

    rules = []
    for rule in document.rules:
        rules.append(
            {
                "id": rule.rule_id,
                "name": rule.rule_name,
                "shortDescription": {"text": rule.short_description},
                "defaultConfiguration": {"level": level_name[rule.default_severity]},
                "properties": {"tags": list(rule.tags)},
            }
        )

    return {
        "version": document.schema_version,
        "runs": [
            {
                "tool": {
                    "driver": {
                        "name": document.tool_name,
                        "version": document.tool_version,
                        "rules": rules,
                    }
                },
                "results": results,
            }
        ],
    }
