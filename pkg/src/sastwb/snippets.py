"""Reconstruct source context for findings: enclosing method text or a line window.

The syntax-aware mode is a lexer-level brace matcher (string/char literals and
comments skipped); it looks for the smallest method-like brace block enclosing
the flagged line. No AST, no IDE.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional

from .model import CodeContext, CodeLocation, DataFlow, ExtractionMode, FlowStep
from .obfuscate import TokenKind, tokenize

WINDOW_RADIUS = 15
DEFAULT_MAX_LINES = 200

_CONTROL_KEYWORDS = frozenset(
    "if else for while switch catch try do synchronized finally".split()
)
_METHOD_HEADER_RE = re.compile(r"[A-Za-z_$][\w$]*\s*\(")


def _read_lines(source_root: Path, file_uri: str) -> Optional[list[str]]:
    if file_uri.startswith("/") or "://" in file_uri:
        path = Path(file_uri)
    else:
        path = source_root / file_uri
    try:
        text = path.read_text(encoding="utf-8", errors="replace")
    except OSError:
        return None
    return text.splitlines()


def _brace_blocks(source: str) -> list[tuple[int, int]]:
    """Matched (open_offset, close_offset) pairs for braces outside literals/comments."""
    stack = []
    pairs = []
    for tok in tokenize(source).tokens:
        if tok.kind != TokenKind.PUNCT:
            continue
        if tok.text == "{":
            stack.append(tok.start)
        elif tok.text == "}" and stack:
            pairs.append((stack.pop(), tok.start))
    return pairs


def _header_line(lines: list[str], open_line: int) -> int:
    """Line (1-based) where the block header starts: last nonblank at or before the brace."""
    idx = open_line
    if not lines[idx - 1].split("{", 1)[0].strip():
        while idx > 1 and not lines[idx - 2].strip():
            idx -= 1
        if idx > 1:
            idx -= 1
    return idx


def _looks_like_method_header(lines: list[str], header_line: int, open_line: int) -> bool:
    header_text = " ".join(lines[header_line - 1 : open_line])
    header_text = header_text.split("{", 1)[0]
    first_word = re.match(r"\s*([A-Za-z_$][\w$]*)", header_text)
    if first_word and first_word.group(1) in _CONTROL_KEYWORDS:
        return False
    return bool(_METHOD_HEADER_RE.search(header_text)) and ")" in header_text


def _line_of_offset(source: str, offset: int) -> int:
    return source.count("\n", 0, offset) + 1


def _truncate(lines: list[str], start: int, end: int, flagged: int, max_lines: int):
    """Clamp [start, end] to max_lines while keeping the flagged line inside."""
    if end - start + 1 <= max_lines:
        return start, end, False
    new_end = start + max_lines - 1
    if flagged <= new_end:
        return start, new_end, True
    half = max_lines // 2
    new_start = max(start, flagged - half)
    return new_start, min(end, new_start + max_lines - 1), True


def extract_context(
    source_root: Path | str,
    location: CodeLocation,
    max_lines: int = DEFAULT_MAX_LINES,
) -> CodeContext:
    source_root = Path(source_root)
    lines = _read_lines(source_root, location.file_uri)
    flagged = location.start_line
    if lines is None or flagged > len(lines):
        return CodeContext.unavailable(flagged)

    flagged_text = lines[flagged - 1]
    source = "\n".join(lines)

    best: Optional[tuple[int, int]] = None
    for open_off, close_off in _brace_blocks(source):
        open_line = _line_of_offset(source, open_off)
        close_line = _line_of_offset(source, close_off)
        header = _header_line(lines, open_line)
        if not (header <= flagged <= close_line):
            continue
        if not _looks_like_method_header(lines, header, open_line):
            continue
        if best is None or (close_line - header) < (best[1] - best[0]):
            best = (header, close_line)

    if best is not None:
        start, end, truncated = _truncate(lines, best[0], best[1], flagged, max_lines)
        mode = ExtractionMode.SYNTAX_AWARE
    else:
        start = max(1, flagged - WINDOW_RADIUS)
        end = min(len(lines), flagged + WINDOW_RADIUS)
        start, end, truncated = _truncate(lines, start, end, flagged, max_lines)
        mode = ExtractionMode.LINE_WINDOW

    return CodeContext(
        enclosing_source="\n".join(lines[start - 1 : end]),
        flagged_line_text=flagged_text,
        flagged_line_number=flagged,
        window_start_line=start,
        window_end_line=end,
        extraction_mode=mode,
        truncated=truncated,
    )


def line_text(source_root: Path | str, location: CodeLocation) -> str:
    lines = _read_lines(Path(source_root), location.file_uri)
    if lines is None or location.start_line > len(lines):
        return ""
    return lines[location.start_line - 1].strip()


def attach_flow_snippets(flow: DataFlow, source_root: Path | str) -> DataFlow:
    """Fill each flow step's snippet with the text of its line on disk."""

    def fill(step: FlowStep) -> FlowStep:
        return FlowStep(location=step.location, snippet=line_text(source_root, step.location))

    return DataFlow(
        source=fill(flow.source),
        intermediates=tuple(fill(s) for s in flow.intermediates),
        sink=fill(flow.sink),
    )
