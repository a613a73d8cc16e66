from __future__ import annotations

import re
from dataclasses import dataclass

from reqonto.diagnostics import SourceSpan


class DslSyntaxError(Exception):
    def __init__(self, message: str, span: SourceSpan, code: str = "syntax-error"):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span
        self.code = code


@dataclass(frozen=True)
class Token:
    kind: str  # ident, number, string, punct, eof
    text: str
    span: SourceSpan
    offset: int
    end: int

    def is_(self, kind: str, text: str | None = None) -> bool:
        return self.kind == kind and (text is None or self.text == text)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>//[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<number>-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>->|=>|<-|\.\.|[{}\[\]:,|>&~<=!()+*/.-])
    """,
    re.VERBOSE,
)


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        span = SourceSpan(file, line, pos - line_start + 1)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", span, "lexical-error")
        kind = m.lastgroup
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind == "string":
            raw = m.group()
            value = re.sub(r"\\(.)", r"\1", raw[1:-1])
            tokens.append(Token("string", value, span, pos, m.end()))
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), span, pos, m.end()))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(file, line, pos - line_start + 1), pos, pos))
    return tokens


def quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


class TokenStream:
    def __init__(self, tokens: list[Token], source: str):
        self.tokens = tokens
        self.source = source
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        if self.peek.is_(kind, text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        tok = self.peek
        if not tok.is_(kind, text):
            wanted = what or (repr(text) if text else kind)
            got = "end of input" if tok.kind == "eof" else repr(tok.text)
            raise DslSyntaxError(f"expected {wanted}, found {got}", tok.span)
        return self.next()

    def raw_until(self, stops: set[str]) -> tuple[str, Token]:
        """Source text of the tokens up to (not including) a stop punctuation."""
        first = self.peek
        last = None
        while not (self.peek.kind == "punct" and self.peek.text in stops) and self.peek.kind != "eof":
            last = self.next()
        if last is None:
            raise DslSyntaxError("expected a value", first.span)
        return self.source[first.offset:last.end].strip(), first

    def skip_to_next_line(self) -> None:
        line = self.peek.span.line
        while self.peek.kind != "eof" and self.peek.span.line == line:
            self.next()
