import dataclasses
import json

import pytest

from sastwb.catalogs import (
    CatalogParseError,
    DuplicateEntry,
    annotate,
    load_catalogs,
    resolve_cwe,
)
from sastwb.model import MethodCategory

from conftest import FIXTURES, load_findings


def test_load_fixture_catalogs(catalogs):
    assert {e.cwe_id for e in catalogs.cwes} == {"CWE-22", "CWE-79", "CWE-89"}
    assert "javax.servlet.http.HttpServletResponse.getWriter" in catalogs.by_qualified_name


def test_empty_methods_file(tmp_path):
    methods = tmp_path / "methods.json"
    methods.write_text("[]")
    loaded = load_catalogs(FIXTURES / "catalogs/cwe.json", methods)
    assert loaded.methods == []


def test_duplicate_cwe_rejected(tmp_path):
    cwe = tmp_path / "cwe.json"
    cwe.write_text(json.dumps([
        {"cwe_id": "CWE-79", "name": "XSS"},
        {"cwe_id": "CWE-79", "name": "XSS again"},
    ]))
    methods = tmp_path / "methods.json"
    methods.write_text("[]")
    with pytest.raises(DuplicateEntry):
        load_catalogs(cwe, methods)


def test_bad_rank_rejected(tmp_path):
    cwe = tmp_path / "cwe.json"
    cwe.write_text(json.dumps([{"cwe_id": "CWE-79", "name": "XSS", "rank": 30}]))
    methods = tmp_path / "methods.json"
    methods.write_text("[]")
    with pytest.raises(CatalogParseError):
        load_catalogs(cwe, methods)


def test_bad_category_diagnostic_names_entry(tmp_path):
    methods = tmp_path / "methods.json"
    methods.write_text(json.dumps([{"qualified_name": "a.b.c", "category": "Oracle"}]))
    with pytest.raises(CatalogParseError, match="a.b.c"):
        load_catalogs(FIXTURES / "catalogs/cwe.json", methods)


def test_cwe_from_explicit_tag(catalogs):
    entry = resolve_cwe("some.rule", ("security", "CWE-79: something"), catalogs)
    assert entry is not None and entry.cwe_id == "CWE-79"
    assert entry.name == "Cross-site Scripting"


def test_cwe_from_rule_id_keyword(catalogs):
    entry = resolve_cwe("java.lang.security.audit.sqli.jdbc-sqli", (), catalogs)
    assert entry is not None and entry.cwe_id == "CWE-89"


def test_cwe_absent_when_no_signal(catalogs):
    assert resolve_cwe("style.unused-import", (), catalogs) is None


def test_keyword_outside_catalog_gets_stub(catalogs):
    entry = resolve_cwe("java.crypto.weak-cipher", (), catalogs)
    assert entry is not None
    assert entry.cwe_id == "CWE-327"
    assert entry.name == "CWE-327"


def test_annotate_critical_methods(catalogs):
    finding = load_findings("flows.sarif")[0]
    annotated = annotate(finding, catalogs, rule_tags=("CWE-79",))
    names = {m.qualified_name for m in annotated.critical_methods}
    assert "javax.servlet.http.HttpServletResponse.getWriter" in names
    assert "javax.servlet.http.HttpServletRequest.getParameter" in names
    # executeQuery does not occur in the XSS servlet
    assert "java.sql.Statement.executeQuery" not in names
    for m in annotated.critical_methods:
        assert m.simple_name in annotated.context.enclosing_source


def test_annotate_idempotent(catalogs):
    finding = load_findings("flows.sarif")[0]
    once = annotate(finding, catalogs, rule_tags=("CWE-79",))
    twice = annotate(once, catalogs, rule_tags=("CWE-79",))
    assert once == twice


def test_annotate_only_touches_cwe_and_methods(catalogs):
    finding = load_findings("flows.sarif")[0]
    annotated = annotate(finding, catalogs, rule_tags=("CWE-79",))
    stripped = dataclasses.replace(annotated, cwe=finding.cwe, critical_methods=finding.critical_methods)
    assert stripped == finding


def test_method_match_is_token_level(catalogs, tmp_path):
    # "xexecuteQuery" must not match the executeQuery sink.
    from sastwb.catalogs import _call_tokens

    calls = _call_tokens("obj.xexecuteQuery(q); other.executeQuery(q);")
    assert "executeQuery" in calls
    assert "xexecuteQuery" in calls
    assert all(sink.simple_name != "xexecuteQuery" for sink in catalogs.methods)


def test_method_category_values(catalogs):
    categories = {m.qualified_name: m.category for m in catalogs.methods}
    assert categories["javax.servlet.http.HttpServletRequest.getParameter"] == MethodCategory.SOURCE
    assert categories["java.net.URLEncoder.encode"] == MethodCategory.SANITIZER
