"""HTTP API exposing the pipeline to the triage UI and to scripts."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Form, Query, Response, UploadFile
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .catalogs import Catalogs, load_catalogs
from .config import AppConfig
from .explain import (
    ExplanationService,
    Feedback,
    FeedbackValidationError,
    UnknownFinding,
)
from .gateway import Gateway, GatewayError, LiveProvider, ReplayProvider
from .pipeline import finding_from_dict, group_findings, import_scan
from .prompts import ExperienceLevel
from .sarif import MalformedJson, NotSarif, UnsupportedVersion
from .store import JsonStore


def _build_gateway(config: AppConfig) -> Optional[Gateway]:
    if config.provider_mode == "replay" and config.replay_transcript:
        return Gateway(ReplayProvider(config.replay_transcript))
    if config.provider_mode == "live":
        return Gateway(LiveProvider(config.base_url, config.api_key))
    return None


def create_app(
    config: AppConfig,
    store: Optional[JsonStore] = None,
    gateway: Optional[Gateway] = None,
    catalogs: Optional[Catalogs] = None,
) -> FastAPI:
    app = FastAPI(title="sastwb", version=__version__)

    if store is None and config.store_path:
        store = JsonStore(config.store_path)
    if gateway is None:
        gateway = _build_gateway(config)
    if catalogs is None and config.cwe_catalog and config.methods_catalog:
        catalogs = load_catalogs(config.cwe_catalog, config.methods_catalog)

    service = (
        ExplanationService(store, gateway, config.model)
        if store is not None and gateway is not None
        else None
    )

    def _error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    @app.get("/health")
    def health():
        if store is None:
            return _error(503, "no store configured")
        provider_mode = gateway.provider_name if gateway is not None else "none"
        return {"status": "ok", "version": __version__, "provider_mode": provider_mode}

    @app.post("/scans", status_code=201)
    async def post_scan(sarif: UploadFile, source_root: str = Form(...)):
        if store is None:
            return _error(503, "no store configured")
        raw = await sarif.read()
        try:
            record = import_scan(
                raw, Path(source_root), store, catalogs, sarif_path=sarif.filename or "<upload>"
            )
        except (MalformedJson, NotSarif) as exc:
            return _error(400, str(exc))
        except UnsupportedVersion as exc:
            return _error(422, str(exc))
        return {
            "scan_id": record.scan_id,
            "sarif_path": record.sarif_path,
            "source_root": record.source_root,
            "imported_at": record.imported_at,
            "finding_count": record.finding_count,
        }

    @app.get("/scans/{scan_id}/findings")
    def get_findings(scan_id: str, group: str = Query("rule")):
        if store is None:
            return _error(503, "no store configured")
        scan = store.get("scans", scan_id)
        if scan is None:
            return _error(404, "unknown scan")
        if group not in ("rule", "file"):
            return _error(422, "group must be 'rule' or 'file'")
        findings = [store.get("findings", fp) for fp in scan["fingerprints"]]
        return group_findings([f for f in findings if f is not None], group)

    @app.get("/findings/{fingerprint}")
    def get_finding(fingerprint: str):
        if store is None:
            return _error(503, "no store configured")
        data = store.get("findings", fingerprint)
        if data is None:
            return _error(404, "unknown finding")
        return data

    @app.post("/findings/{fingerprint}/explanation")
    def post_explanation(fingerprint: str, body: dict, response: Response):
        if store is None:
            return _error(503, "no store configured")
        if service is None:
            return _error(503, "no provider configured")
        data = store.get("findings", fingerprint)
        if data is None:
            return _error(404, "unknown finding")
        try:
            level = ExperienceLevel(body.get("level", ""))
        except ValueError:
            return _error(422, f"invalid level {body.get('level')!r}")
        finding = finding_from_dict(data)
        try:
            explanation, cache_hit = service.explain(
                finding,
                level,
                validate_flag=bool(body.get("validate", False)),
                force_refresh=bool(body.get("force_refresh", False)),
            )
        except GatewayError as exc:
            return _error(502, f"gateway failure: {type(exc).__name__}")
        response.headers["X-Cache"] = "hit" if cache_hit else "miss"
        return explanation.to_dict()

    @app.post("/findings/{fingerprint}/feedback", status_code=201)
    def post_feedback(fingerprint: str, body: dict):
        if store is None:
            return _error(503, "no store configured")
        if service is None:
            return _error(503, "no provider configured")
        try:
            feedback_id = service.record_feedback(
                Feedback(
                    finding_fingerprint=fingerprint,
                    level=body.get("level", ""),
                    thumbs=body.get("thumbs", ""),
                    criteria=body.get("criteria"),
                    comment=body.get("comment"),
                )
            )
        except UnknownFinding:
            return _error(404, "unknown finding")
        except FeedbackValidationError as exc:
            return _error(422, str(exc))
        return {"feedback_id": feedback_id}

    @app.get("/feedback/summary")
    def feedback_summary(level: Optional[str] = None):
        if service is None:
            return _error(503, "no provider configured")
        table = service.summarize_feedback(level)
        # JSON object keys must be strings.
        return {
            name: {
                "counts": {str(k): v for k, v in row["counts"].items()},
                "percent": {str(k): v for k, v in row["percent"].items()},
                "total": row["total"],
            }
            for name, row in table.items()
        }

    if config.ui_dir and Path(config.ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
