"""SAST triage workbench: SARIF ingestion, LLM explanations, benchmark harness."""

__version__ = "0.1.0"
