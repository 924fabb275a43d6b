"""Name-based obfuscation for C-family sources.

Renames declared variables, methods, and classes consistently file-wide while
leaving every other byte (literals, comments, whitespace, punctuation)
untouched, so the presence of a vulnerability is unaffected.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources


class TokenKind(Enum):
    IDENTIFIER = "Identifier"
    KEYWORD = "Keyword"
    STRING_LITERAL = "StringLiteral"
    CHAR_LITERAL = "CharLiteral"
    COMMENT = "Comment"
    NUMBER_LITERAL = "NumberLiteral"
    PUNCT = "Punct"
    WHITESPACE = "Whitespace"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    start: int
    end: int


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[Token, ...]
    unterminated: bool = False

    def text(self) -> str:
        return "".join(t.text for t in self.tokens)


class RenameKind(Enum):
    CLASS = "Class"
    METHOD = "Method"
    VARIABLE = "Variable"


@dataclass(frozen=True)
class RenameMap:
    """Injective original -> (fresh, kind) mapping."""

    entries: dict[str, tuple[str, RenameKind]]
    seed: int = 0

    def inverse(self) -> "RenameMap":
        return RenameMap(
            entries={fresh: (orig, kind) for orig, (fresh, kind) in self.entries.items()},
            seed=self.seed,
        )

    def to_json(self) -> str:
        return json.dumps(
            {orig: {"fresh": fresh, "kind": kind.value} for orig, (fresh, kind) in self.entries.items()},
            indent=2,
            sort_keys=True,
        )


JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while var record sealed
    permits yield true false null""".split()
)

# Keywords that can appear as the type in a declaration.
TYPE_KEYWORDS = frozenset(
    "boolean byte char double float int long short void var".split()
)

_TOKEN_RE = re.compile(
    r"""
    (?P<whitespace>\s+)
  | (?P<comment>//[^\n]*|/\*.*?\*/|/\*.*)
  | (?P<string>"(?:\\.|[^"\\\n])*(?:"|\n|$))
  | (?P<char>'(?:\\.|[^'\\\n])*(?:'|\n|$))
  | (?P<number>\.\d[\w.]*|\d[\w.]*)
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<punct>.)
    """,
    re.VERBOSE | re.DOTALL,
)

_GROUP_KIND = {
    "whitespace": TokenKind.WHITESPACE,
    "comment": TokenKind.COMMENT,
    "string": TokenKind.STRING_LITERAL,
    "char": TokenKind.CHAR_LITERAL,
    "number": TokenKind.NUMBER_LITERAL,
    "punct": TokenKind.PUNCT,
}


def tokenize(source: str) -> TokenStream:
    """Lossless tokenization: concatenating token texts reproduces the input."""
    tokens = []
    unterminated = False
    for match in _TOKEN_RE.finditer(source):
        group = match.lastgroup
        text = match.group()
        if group == "ident":
            kind = TokenKind.KEYWORD if text in JAVA_KEYWORDS else TokenKind.IDENTIFIER
        else:
            kind = _GROUP_KIND[group]
        if group == "string" and not (len(text) >= 2 and text.endswith('"')):
            unterminated = True
        if group == "char" and not (len(text) >= 2 and text.endswith("'")):
            unterminated = True
        if group == "comment" and text.startswith("/*") and not text.endswith("*/"):
            unterminated = True
        tokens.append(Token(kind=kind, text=text, start=match.start(), end=match.end()))
    return TokenStream(tokens=tuple(tokens), unterminated=unterminated)


def default_protected() -> frozenset[str]:
    """Language keywords plus the shipped standard-library identifier list."""
    data = resources.files("sastwb.data").joinpath("protected_identifiers.json").read_text("utf-8")
    return frozenset(json.loads(data)) | JAVA_KEYWORDS


def _is_type_like(token: Token) -> bool:
    if token.kind == TokenKind.IDENTIFIER:
        return True
    if token.kind == TokenKind.KEYWORD and token.text in TYPE_KEYWORDS:
        return True
    return token.kind == TokenKind.PUNCT and token.text in (">", "]")


_VAR_FOLLOWERS = {"=", ";", ",", ")", ":", "["}


def plan_renames(stream: TokenStream, seed: int = 0, protected: frozenset[str] | None = None) -> RenameMap:
    """Classify declared identifiers and assign fresh names in first-occurrence order.

    Heuristic, not scope-aware: each declared name maps to one fresh name
    file-wide. The seed is recorded for future randomized naming schemes; the
    default scheme is deterministic (C<n>/m<n>/v<n>).
    """
    if protected is None:
        protected = default_protected()

    sig = [t for t in stream.tokens if t.kind not in (TokenKind.WHITESPACE, TokenKind.COMMENT)]
    all_idents = {t.text for t in sig if t.kind == TokenKind.IDENTIFIER}

    entries: dict[str, tuple[str, RenameKind]] = {}
    counters = {RenameKind.CLASS: 0, RenameKind.METHOD: 0, RenameKind.VARIABLE: 0}
    prefixes = {RenameKind.CLASS: "C", RenameKind.METHOD: "m", RenameKind.VARIABLE: "v"}

    def fresh_name(kind: RenameKind) -> str:
        while True:
            name = f"{prefixes[kind]}{counters[kind]}"
            counters[kind] += 1
            if name not in all_idents and name not in protected:
                return name

    for i, tok in enumerate(sig):
        if tok.kind != TokenKind.IDENTIFIER or tok.text in protected or tok.text in entries:
            continue
        prev = sig[i - 1] if i > 0 else None
        nxt = sig[i + 1] if i + 1 < len(sig) else None
        kind = None
        if prev is not None and prev.kind == TokenKind.KEYWORD and prev.text in ("class", "interface", "enum"):
            kind = RenameKind.CLASS
        elif (
            nxt is not None
            and nxt.text == "("
            and prev is not None
            and _is_type_like(prev)
            and prev.text != "."
        ):
            kind = RenameKind.METHOD
        elif (
            nxt is not None
            and nxt.text in _VAR_FOLLOWERS
            and prev is not None
            and _is_type_like(prev)
        ):
            kind = RenameKind.VARIABLE
        if kind is not None:
            entries[tok.text] = (fresh_name(kind), kind)

    return RenameMap(entries=entries, seed=seed)


def apply_renames(stream: TokenStream, rename_map: RenameMap) -> str:
    """Replace every mapped identifier token; all other tokens stay byte-identical."""
    out = []
    for tok in stream.tokens:
        if tok.kind == TokenKind.IDENTIFIER and tok.text in rename_map.entries:
            out.append(rename_map.entries[tok.text][0])
        else:
            out.append(tok.text)
    return "".join(out)


def obfuscate_source(
    source: str, seed: int = 0, protected: frozenset[str] | None = None
) -> tuple[str, RenameMap]:
    stream = tokenize(source)
    rename_map = plan_renames(stream, seed=seed, protected=protected)
    return apply_renames(stream, rename_map), rename_map
