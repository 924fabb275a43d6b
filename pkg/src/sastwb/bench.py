"""Vulnerability-detection benchmark harness: labeled corpus, prompt strategies,
original/obfuscated variants, confusion counts, and P/R/F1 scorecards."""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

from .gateway import ChatMessage, ChatRequest, Gateway, GatewayError, Role
from .obfuscate import obfuscate_source
from .prompts import FewShotExample, Strategy, render_detection_prompt

VERDICT_MAX_TOKENS = 256


class Variant(Enum):
    ORIGINAL = "original"
    OBFUSCATED = "obfuscated"


class ManifestParseError(Exception):
    pass


class MissingSource(Exception):
    pass


class CaseMismatch(Exception):
    pass


@dataclass(frozen=True)
class BenchCase:
    case_id: str
    source: str
    label: bool
    cwe_id: str
    variant: Variant = Variant.ORIGINAL


@dataclass(frozen=True)
class Verdict:
    case_id: str
    predicted: bool
    predicted_cwe: Optional[str]
    raw_response: str
    parse_ok: bool


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    degenerate: frozenset[str] = frozenset()


@dataclass(frozen=True)
class MetricRow:
    model_id: str
    strategy: Strategy
    variant: Variant
    precision: float
    recall: float
    f1: float
    counts: ConfusionCounts


def load_corpus(manifest: Path | str, source_root: Path | str) -> list[BenchCase]:
    """CSV manifest columns: case_id, relative_path, label (true/false), cwe_id."""
    manifest, source_root = Path(manifest), Path(source_root)
    cases = []
    with manifest.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"case_id", "relative_path", "label", "cwe_id"}
        if reader.fieldnames is None:
            return []
        if not required.issubset(reader.fieldnames):
            raise ManifestParseError(
                f"manifest missing columns: {sorted(required - set(reader.fieldnames))}"
            )
        for row_no, row in enumerate(reader, start=2):
            label = row["label"].strip().lower()
            if label not in ("true", "false"):
                raise ManifestParseError(f"row {row_no}: label must be true/false, got {row['label']!r}")
            path = source_root / row["relative_path"].strip()
            if not path.is_file():
                raise MissingSource(f"row {row_no} ({row['case_id']}): no such file {row['relative_path']}")
            cases.append(
                BenchCase(
                    case_id=row["case_id"].strip(),
                    source=path.read_text(encoding="utf-8", errors="replace"),
                    label=label == "true",
                    cwe_id=row["cwe_id"].strip(),
                )
            )
    return cases


def obfuscate_corpus(cases: Sequence[BenchCase], seed: int = 0) -> list[BenchCase]:
    """Per-file renaming; labels are variant-invariant."""
    out = []
    for case in cases:
        text, _ = obfuscate_source(case.source, seed=seed)
        out.append(
            BenchCase(
                case_id=case.case_id,
                source=text,
                label=case.label,
                cwe_id=case.cwe_id,
                variant=Variant.OBFUSCATED,
            )
        )
    return out


_VERDICT_RE = re.compile(r"^\s*VERDICT:\s*(YES|NO)\s*$", re.IGNORECASE | re.MULTILINE)
_CWE_RE = re.compile(r"^\s*CWE:\s*(CWE-\d+)\s*$", re.IGNORECASE | re.MULTILINE)


def parse_verdict(raw: str) -> tuple[bool, Optional[str], bool]:
    """Last VERDICT line wins; unparseable responses default to not-vulnerable."""
    matches = list(_VERDICT_RE.finditer(raw))
    if not matches:
        return False, None, False
    predicted = matches[-1].group(1).upper() == "YES"
    cwe_matches = list(_CWE_RE.finditer(raw))
    predicted_cwe = cwe_matches[-1].group(1).upper() if cwe_matches else None
    return predicted, predicted_cwe, True


def run_benchmark(
    corpus: Sequence[BenchCase],
    gateway: Gateway,
    model_id: str,
    strategy: Strategy = Strategy.ZERO_SHOT,
    examples: Sequence[FewShotExample] = (),
    parallelism: int = 4,
    run_dir: Optional[Path | str] = None,
) -> list[Verdict]:
    requests = []
    for case in corpus:
        bundle = render_detection_prompt(case.source, strategy, examples)
        requests.append(
            ChatRequest(
                model_id=model_id,
                messages=(
                    ChatMessage(Role.SYSTEM, bundle.system_text),
                    ChatMessage(Role.USER, bundle.user_text),
                ),
                temperature=0.0,
                max_output_tokens=VERDICT_MAX_TOKENS,
                request_tag=case.case_id,
            )
        )

    results = gateway.complete_batch(requests, parallelism=parallelism)
    verdicts = []
    for case, result in zip(corpus, results):
        if isinstance(result, GatewayError):
            verdicts.append(
                Verdict(case.case_id, predicted=False, predicted_cwe=None,
                        raw_response=f"<gateway error: {type(result).__name__}>", parse_ok=False)
            )
            continue
        predicted, cwe, ok = parse_verdict(result.content)
        verdicts.append(Verdict(case.case_id, predicted, cwe, result.content, ok))

    if run_dir is not None:
        _persist_run(Path(run_dir), corpus, verdicts, model_id, strategy)
    return verdicts


def _persist_run(run_dir: Path, corpus, verdicts, model_id: str, strategy: Strategy) -> None:
    run_dir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "model_id": model_id,
        "strategy": strategy.value,
        "variant": corpus[0].variant.value if corpus else Variant.ORIGINAL.value,
        "cases": len(verdicts),
    }
    (run_dir / "run-manifest.json").write_text(json.dumps(manifest, indent=2), "utf-8")
    raw = [
        {"case_id": v.case_id, "raw_response": v.raw_response, "parse_ok": v.parse_ok}
        for v in verdicts
    ]
    (run_dir / "responses.json").write_text(json.dumps(raw, indent=2), "utf-8")


def score(verdicts: Sequence[Verdict], corpus: Sequence[BenchCase]) -> ConfusionCounts:
    labels = {case.case_id: case.label for case in corpus}
    if sorted(labels) != sorted(v.case_id for v in verdicts):
        raise CaseMismatch("verdict case ids do not align with the corpus")
    tp = fp = tn = fn = 0
    for verdict in verdicts:
        label = labels[verdict.case_id]
        if verdict.predicted and label:
            tp += 1
        elif verdict.predicted and not label:
            fp += 1
        elif not verdict.predicted and label:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


def metrics(counts: ConfusionCounts) -> Metrics:
    degenerate = set()
    if counts.tp + counts.fp == 0:
        precision = 0.0
        degenerate.add("precision")
    else:
        precision = counts.tp / (counts.tp + counts.fp)
    if counts.tp + counts.fn == 0:
        recall = 0.0
        degenerate.add("recall")
    else:
        recall = counts.tp / (counts.tp + counts.fn)
    f1 = f1_score(precision, recall)
    return Metrics(precision=precision, recall=recall, f1=f1, degenerate=frozenset(degenerate))


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def round2(value: float) -> str:
    """Half-up rounding to two decimals, applied only at report emission."""
    return str(Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


class ReportFormat(Enum):
    MARKDOWN = "markdown"
    CSV = "csv"


def _paired(rows: Sequence[MetricRow]):
    """Group rows into (model, strategy) -> {variant: row}, sorted by Original F1 desc."""
    grouped: dict[tuple[str, Strategy], dict[Variant, MetricRow]] = {}
    for row in rows:
        grouped.setdefault((row.model_id, row.strategy), {})[row.variant] = row

    def sort_key(item):
        variants = item[1]
        original = variants.get(Variant.ORIGINAL)
        return -(original.f1 if original else -1.0)

    return sorted(grouped.items(), key=sort_key)


def emit_report(rows: Sequence[MetricRow], format: ReportFormat = ReportFormat.MARKDOWN) -> str:
    header = [
        "Model", "Strategy",
        "Original P", "Original R", "Original F1",
        "Obfuscated P", "Obfuscated R", "Obfuscated F1",
    ]
    table_rows = []
    for (model_id, strategy), variants in _paired(rows):
        cells = [model_id, strategy.value]
        for variant in (Variant.ORIGINAL, Variant.OBFUSCATED):
            row = variants.get(variant)
            if row is None:
                cells += ["", "", ""]
            else:
                cells += [round2(row.precision), round2(row.recall), round2(row.f1)]
        table_rows.append(cells)

    if format == ReportFormat.CSV:
        lines = [",".join(header)]
        lines += [",".join(cells) for cells in table_rows]
        return "\n".join(lines) + "\n"

    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(cells) + " |" for cells in table_rows]
    return "\n".join(lines) + "\n"
