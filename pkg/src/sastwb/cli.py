"""Command-line interface mirroring the HTTP API plus benchmark/obfuscation tools."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from .catalogs import load_catalogs
from .config import AppConfig
from .explain import ExplanationService, Feedback
from .gateway import Gateway, LiveProvider, ReplayProvider
from .obfuscate import default_protected, obfuscate_source
from .pipeline import finding_from_dict, group_findings, import_scan
from .prompts import ExperienceLevel, Strategy
from .store import JsonStore


def _load_config(config_path):
    return AppConfig.load(config_path)


def _gateway_from_config(config: AppConfig) -> Gateway:
    if config.provider_mode == "replay":
        if not config.replay_transcript:
            raise click.ClickException("replay mode needs replay_transcript in config")
        return Gateway(ReplayProvider(config.replay_transcript))
    if config.provider_mode == "live":
        return Gateway(LiveProvider(config.base_url, config.api_key))
    raise click.ClickException("no provider configured (set provider_mode to live or replay)")


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config file; env vars LLM_API_KEY/LLM_BASE_URL/LLM_MODEL override it.")
@click.pass_context
def main(ctx, config_path):
    """SAST triage workbench."""
    ctx.obj = _load_config(config_path)


@main.command("import")
@click.argument("sarif_file", type=click.Path(exists=True))
@click.option("--source-root", type=click.Path(exists=True), required=True)
@click.pass_obj
def import_cmd(config: AppConfig, sarif_file, source_root):
    """Import a SARIF file into the store."""
    if not config.store_path:
        raise click.ClickException("store_path not configured")
    store = JsonStore(config.store_path)
    catalogs = None
    if config.cwe_catalog and config.methods_catalog:
        catalogs = load_catalogs(config.cwe_catalog, config.methods_catalog)
    record = import_scan(
        Path(sarif_file).read_bytes(), Path(source_root), store, catalogs, sarif_path=sarif_file
    )
    click.echo(json.dumps({"scan_id": record.scan_id, "finding_count": record.finding_count}))


@main.command("findings")
@click.argument("scan_id")
@click.option("--group", type=click.Choice(["rule", "file"]), default="rule")
@click.pass_obj
def findings_cmd(config: AppConfig, scan_id, group):
    """List findings of a scan as a grouped tree."""
    store = JsonStore(config.store_path)
    scan = store.get("scans", scan_id)
    if scan is None:
        raise click.ClickException(f"unknown scan {scan_id}")
    findings = [store.get("findings", fp) for fp in scan["fingerprints"]]
    click.echo(json.dumps(group_findings([f for f in findings if f], group), indent=2))


@main.command("explain")
@click.argument("fingerprint")
@click.option("--level", type=click.Choice([l.value for l in ExperienceLevel]), default="beginner")
@click.option("--validate", is_flag=True, help="Ask the model to verify true/false positive first.")
@click.option("--force-refresh", is_flag=True)
@click.pass_obj
def explain_cmd(config: AppConfig, fingerprint, level, validate, force_refresh):
    """Generate (or fetch the cached) explanation for a finding."""
    store = JsonStore(config.store_path)
    data = store.get("findings", fingerprint)
    if data is None:
        raise click.ClickException(f"unknown finding {fingerprint}")
    service = ExplanationService(store, _gateway_from_config(config), config.model)
    explanation, cache_hit = service.explain(
        finding_from_dict(data),
        ExperienceLevel(level),
        validate_flag=validate,
        force_refresh=force_refresh,
    )
    out = explanation.to_dict()
    out["cache_hit"] = cache_hit
    click.echo(json.dumps(out, indent=2))


@main.command("feedback")
@click.argument("fingerprint")
@click.option("--level", type=click.Choice([l.value for l in ExperienceLevel]), required=True)
@click.option("--thumbs", type=click.Choice(["Up", "Down"]), required=True)
@click.option("--comment", default=None)
@click.pass_obj
def feedback_cmd(config: AppConfig, fingerprint, level, thumbs, comment):
    """Record thumbs feedback for an explanation."""
    store = JsonStore(config.store_path)
    service = ExplanationService(store, _gateway_from_config(config), config.model)
    feedback_id = service.record_feedback(
        Feedback(finding_fingerprint=fingerprint, level=level, thumbs=thumbs, comment=comment)
    )
    click.echo(json.dumps({"feedback_id": feedback_id}))


@main.command("export")
@click.pass_obj
def export_cmd(config: AppConfig):
    """Emit all explanations and feedback as JSON lines."""
    store = JsonStore(config.store_path)
    for namespace in ("explanations", "feedback"):
        for key, value in store.items(namespace):
            click.echo(json.dumps({"namespace": namespace, "key": key, "value": value}))


@main.command("obfuscate")
@click.argument("input_dir", type=click.Path(exists=True, file_okay=False))
@click.argument("output_dir", type=click.Path(file_okay=False))
@click.option("--seed", type=int, default=0)
@click.option("--ext", "extensions", multiple=True, default=[".java"], show_default=True)
def obfuscate_cmd(input_dir, output_dir, seed, extensions):
    """Obfuscate a source tree; rename maps are written beside the outputs."""
    input_dir, output_dir = Path(input_dir), Path(output_dir)
    protected = default_protected()
    for path in sorted(input_dir.rglob("*")):
        if not path.is_file() or path.suffix not in extensions:
            continue
        rel = path.relative_to(input_dir)
        text, rename_map = obfuscate_source(
            path.read_text(encoding="utf-8", errors="replace"), seed=seed, protected=protected
        )
        out_path = output_dir / rel
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(text, encoding="utf-8")
        out_path.with_suffix(out_path.suffix + ".renames.json").write_text(
            rename_map.to_json(), encoding="utf-8"
        )
        click.echo(f"{rel}: {len(rename_map.entries)} identifiers renamed")


@main.command("bench")
@click.option("--manifest", type=click.Path(exists=True), required=True)
@click.option("--source-root", type=click.Path(exists=True), required=True)
@click.option("--model", default=None, help="Model id; defaults to configured model.")
@click.option("--strategy", type=click.Choice([s.value for s in Strategy]), default="zero-shot")
@click.option("--variant", type=click.Choice([v.value for v in bench_mod.Variant]), default="original")
@click.option("--parallelism", type=int, default=4)
@click.option("--out", "out_path", type=click.Path(), default=None, help="Write the report here.")
@click.option("--format", "report_format", type=click.Choice(["markdown", "csv"]), default="markdown")
@click.option("--run-dir", type=click.Path(), default=None, help="Persist raw responses here.")
@click.pass_obj
def bench_cmd(config: AppConfig, manifest, source_root, model, strategy, variant,
              parallelism, out_path, report_format, run_dir):
    """Run the detection benchmark over a labeled corpus and emit a scorecard."""
    model = model or config.model
    strategy = Strategy(strategy)
    variant = bench_mod.Variant(variant)
    corpus = bench_mod.load_corpus(manifest, source_root)
    if variant == bench_mod.Variant.OBFUSCATED:
        corpus = bench_mod.obfuscate_corpus(corpus)
    gateway = _gateway_from_config(config)
    verdicts = bench_mod.run_benchmark(
        corpus, gateway, model, strategy=strategy, parallelism=parallelism, run_dir=run_dir
    )
    counts = bench_mod.score(verdicts, corpus)
    m = bench_mod.metrics(counts)
    row = bench_mod.MetricRow(
        model_id=model, strategy=strategy, variant=variant,
        precision=m.precision, recall=m.recall, f1=m.f1, counts=counts,
    )
    report = bench_mod.emit_report([row], bench_mod.ReportFormat(report_format))
    if out_path:
        Path(out_path).write_text(report, encoding="utf-8")
    else:
        click.echo(report, nl=False)
    click.echo(
        f"cases={counts.total} tp={counts.tp} fp={counts.fp} tn={counts.tn} fn={counts.fn}",
        err=True,
    )


@main.command("serve")
@click.pass_obj
def serve_cmd(config: AppConfig):
    """Run the HTTP API (and UI, if a bundle directory is configured)."""
    import uvicorn

    from .server import create_app

    host, _, port = config.listen.partition(":")
    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port or 8777))


if __name__ == "__main__":
    sys.exit(main())
