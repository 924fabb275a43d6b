import hashlib

from sastwb.model import CodeLocation, ExtractionMode
from sastwb.obfuscate import TokenKind, tokenize
from sastwb.snippets import extract_context

from conftest import FIXTURES

SRC = FIXTURES / "src"


def test_syntax_aware_encloses_method():
    # doPost spans lines 10-30 of the fixture; flagged line 22.
    ctx = extract_context(SRC, CodeLocation(file_uri="XssServlet.java", start_line=22))
    assert ctx.extraction_mode == ExtractionMode.SYNTAX_AWARE
    assert ctx.window_start_line == 10
    assert ctx.window_end_line == 30
    assert ctx.flagged_line_number == 22
    assert ctx.flagged_line_text == "        writer.println(markup);"
    expected = "\n".join(
        (SRC / "XssServlet.java").read_text().splitlines()[9:30]
    )
    assert ctx.enclosing_source == expected


def test_line_window_fallback(tmp_path):
    plain = tmp_path / "short.txt"
    plain.write_text("first\nsecond\nthird\n")
    ctx = extract_context(tmp_path, CodeLocation(file_uri="short.txt", start_line=2))
    assert ctx.extraction_mode == ExtractionMode.LINE_WINDOW
    assert (ctx.window_start_line, ctx.window_end_line) == (1, 3)
    assert ctx.enclosing_source == "first\nsecond\nthird"


def test_missing_file_unavailable():
    ctx = extract_context(SRC, CodeLocation(file_uri="Nope.java", start_line=3))
    assert ctx.extraction_mode == ExtractionMode.UNAVAILABLE
    assert ctx.enclosing_source == ""
    assert ctx.flagged_line_text == ""


def test_flagged_line_beyond_eof_unavailable(tmp_path):
    (tmp_path / "tiny.java").write_text("int a;\n")
    ctx = extract_context(tmp_path, CodeLocation(file_uri="tiny.java", start_line=99))
    assert ctx.extraction_mode == ExtractionMode.UNAVAILABLE


def test_contains_flagged_line():
    for name, line in (("XssServlet.java", 22), ("SqliServlet.java", 19), ("PathServlet.java", 15)):
        ctx = extract_context(SRC, CodeLocation(file_uri=name, start_line=line))
        assert ctx.extraction_mode != ExtractionMode.UNAVAILABLE
        assert ctx.flagged_line_text in ctx.enclosing_source


def test_syntax_aware_braces_balanced():
    ctx = extract_context(SRC, CodeLocation(file_uri="SqliServlet.java", start_line=19))
    assert ctx.extraction_mode == ExtractionMode.SYNTAX_AWARE
    opens = closes = 0
    for tok in tokenize(ctx.enclosing_source).tokens:
        if tok.kind == TokenKind.PUNCT and tok.text == "{":
            opens += 1
        elif tok.kind == TokenKind.PUNCT and tok.text == "}":
            closes += 1
    assert opens == closes


def test_control_flow_block_not_chosen_as_method():
    # Line 13 sits inside the `if` block (12-14); the method block must win.
    ctx = extract_context(SRC, CodeLocation(file_uri="XssServlet.java", start_line=13))
    assert ctx.extraction_mode == ExtractionMode.SYNTAX_AWARE
    assert ctx.window_start_line == 10
    assert ctx.window_end_line == 30


def test_braces_in_literals_ignored(tmp_path):
    source = (
        'class T {\n'
        '    String open = "{";\n'
        '    // stray } in a comment\n'
        '    void act() {\n'
        '        char c = \'{\';\n'
        '        int x = 1;\n'
        '    }\n'
        '}\n'
    )
    (tmp_path / "T.java").write_text(source)
    ctx = extract_context(tmp_path, CodeLocation(file_uri="T.java", start_line=6))
    assert ctx.extraction_mode == ExtractionMode.SYNTAX_AWARE
    assert ctx.window_start_line == 4
    assert ctx.window_end_line == 7


def test_truncation_keeps_flagged_line(tmp_path):
    lines = ["void big() {"] + [f"    int x{i} = {i};" for i in range(400)] + ["}"]
    (tmp_path / "Big.java").write_text("\n".join(lines) + "\n")
    ctx = extract_context(tmp_path, CodeLocation(file_uri="Big.java", start_line=300), max_lines=50)
    assert ctx.truncated
    assert ctx.window_end_line - ctx.window_start_line + 1 <= 50
    assert ctx.flagged_line_text in ctx.enclosing_source


def test_extraction_is_read_only():
    path = SRC / "XssServlet.java"
    before = hashlib.sha256(path.read_bytes()).hexdigest()
    extract_context(SRC, CodeLocation(file_uri="XssServlet.java", start_line=22))
    assert hashlib.sha256(path.read_bytes()).hexdigest() == before
