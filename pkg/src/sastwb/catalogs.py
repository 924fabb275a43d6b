"""Security catalogs: CWE entries and critical methods, plus finding annotation."""

from __future__ import annotations

import dataclasses
import json
import re
from pathlib import Path
from typing import Optional

from .model import CriticalMethod, CweEntry, Finding, MethodCategory


class CatalogParseError(Exception):
    pass


class DuplicateEntry(CatalogParseError):
    pass


_CWE_ID_RE = re.compile(r"^CWE-\d+$")
_CWE_TAG_RE = re.compile(r"CWE-\d+")

# rule-id keyword -> CWE id; covers the OWASP Benchmark's 11 categories.
KEYWORD_CWE_TABLE = [
    ("xss", "CWE-79"),
    ("cross-site", "CWE-79"),
    ("sqli", "CWE-89"),
    ("sql-injection", "CWE-89"),
    ("path-traversal", "CWE-22"),
    ("pathtraversal", "CWE-22"),
    ("cmdi", "CWE-78"),
    ("command", "CWE-78"),
    ("crypto", "CWE-327"),
    ("hash", "CWE-328"),
    ("cookie", "CWE-614"),
    ("trustbound", "CWE-501"),
    ("ldap", "CWE-90"),
    ("xpath", "CWE-643"),
    ("random", "CWE-330"),
    ("weakrand", "CWE-330"),
]


class Catalogs:
    """Immutable after load; indexed by cwe_id and by method qualified_name."""

    def __init__(self, cwes: list[CweEntry], methods: list[CriticalMethod]):
        self.by_cwe_id = {entry.cwe_id: entry for entry in cwes}
        self.by_qualified_name = {m.qualified_name: m for m in methods}

    @property
    def cwes(self) -> list[CweEntry]:
        return list(self.by_cwe_id.values())

    @property
    def methods(self) -> list[CriticalMethod]:
        return list(self.by_qualified_name.values())


def _load_json_array(path: Path, what: str) -> list[dict]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogParseError(f"{what} catalog {path.name}: {exc}") from exc
    if not isinstance(data, list):
        raise CatalogParseError(f"{what} catalog {path.name}: expected a JSON array")
    return data


def load_catalogs(cwe_file: Path | str, methods_file: Path | str) -> Catalogs:
    cwe_file, methods_file = Path(cwe_file), Path(methods_file)

    cwes = []
    seen_ids = set()
    for i, obj in enumerate(_load_json_array(cwe_file, "CWE")):
        cwe_id = obj.get("cwe_id", "")
        if not _CWE_ID_RE.match(cwe_id):
            raise CatalogParseError(f"CWE catalog entry {i}: bad cwe_id {cwe_id!r}")
        if cwe_id in seen_ids:
            raise DuplicateEntry(f"CWE catalog entry {i}: duplicate {cwe_id}")
        seen_ids.add(cwe_id)
        rank = obj.get("rank")
        if rank is not None and not (isinstance(rank, int) and 1 <= rank <= 25):
            raise CatalogParseError(f"CWE catalog entry {i} ({cwe_id}): rank out of range")
        if not obj.get("name"):
            raise CatalogParseError(f"CWE catalog entry {i} ({cwe_id}): missing name")
        cwes.append(
            CweEntry(cwe_id=cwe_id, name=obj["name"], summary=obj.get("summary", ""), rank=rank)
        )

    methods = []
    seen_names = set()
    for i, obj in enumerate(_load_json_array(methods_file, "critical-method")):
        name = obj.get("qualified_name", "")
        if not name:
            raise CatalogParseError(f"method catalog entry {i}: missing qualified_name")
        if name in seen_names:
            raise DuplicateEntry(f"method catalog entry {i}: duplicate {name}")
        seen_names.add(name)
        try:
            category = MethodCategory(obj.get("category", ""))
        except ValueError:
            raise CatalogParseError(
                f"method catalog entry {i} ({name}): bad category {obj.get('category')!r}"
            ) from None
        methods.append(
            CriticalMethod(qualified_name=name, category=category, note=obj.get("note", ""))
        )

    return Catalogs(cwes, methods)


def _cwe_from_tags(tags: tuple[str, ...] | list[str]) -> Optional[str]:
    for tag in tags:
        match = _CWE_TAG_RE.search(tag)
        if match:
            return match.group()
    return None


def _cwe_from_rule_id(rule_id: str) -> Optional[str]:
    lowered = rule_id.lower()
    for keyword, cwe_id in KEYWORD_CWE_TABLE:
        if keyword in lowered:
            return cwe_id
    return None


def resolve_cwe(rule_id: str, tags: tuple[str, ...] | list[str], catalogs: Catalogs) -> Optional[CweEntry]:
    cwe_id = _cwe_from_tags(tags) or _cwe_from_rule_id(rule_id)
    if cwe_id is None:
        return None
    entry = catalogs.by_cwe_id.get(cwe_id)
    if entry is None:
        entry = CweEntry(cwe_id=cwe_id, name=cwe_id)
    return entry


def _call_tokens(source: str) -> set[str]:
    """Identifiers that appear immediately before '(' in the source."""
    return set(re.findall(r"([A-Za-z_$][\w$]*)\s*\(", source))


def annotate(finding: Finding, catalogs: Catalogs, rule_tags: tuple[str, ...] = ()) -> Finding:
    """Return a copy with cwe and critical_methods filled; all other fields untouched."""
    cwe = resolve_cwe(finding.rule_id, rule_tags, catalogs)
    calls = _call_tokens(finding.context.enclosing_source)
    matches = [m for m in catalogs.methods if m.simple_name in calls]
    return dataclasses.replace(finding, cwe=cwe, critical_methods=matches)
