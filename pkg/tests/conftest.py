import json
from pathlib import Path

import pytest

from sastwb import pipeline
from sastwb.catalogs import load_catalogs
from sastwb.sarif import parse_sarif

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def source_root() -> Path:
    return FIXTURES / "src"


@pytest.fixture(scope="session")
def catalogs():
    return load_catalogs(FIXTURES / "catalogs/cwe.json", FIXTURES / "catalogs/methods.json")


def load_findings(name: str, catalogs=None):
    doc = parse_sarif((FIXTURES / "sarif" / name).read_bytes())
    return pipeline.build_findings(doc, FIXTURES / "src", catalogs)


@pytest.fixture(scope="session")
def xss_finding(catalogs):
    return load_findings("flows.sarif", catalogs)[0]


@pytest.fixture(scope="session")
def golden_findings(catalogs):
    """The three findings frozen into the prompt goldens: xss, sqli, path."""
    named = {"xss": load_findings("flows.sarif", catalogs)[0]}
    for finding in load_findings("extra.sarif", catalogs):
        named["sqli" if "sqli" in finding.rule_id else "path"] = finding
    return named


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return FIXTURES / "corpus"


def read_json(relative: str):
    return json.loads((FIXTURES / relative).read_text(encoding="utf-8"))
