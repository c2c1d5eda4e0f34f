"""Tokenizer shared by polynomial expressions and ``.rig`` session files."""

from __future__ import annotations

import re
from dataclasses import dataclass

__all__ = ["Token", "ParseError", "tokenize", "TokenStream"]


class ParseError(ValueError):
    def __init__(self, line: int, col: int, expected: str, got: str = ""):
        self.line = line
        self.col = col
        self.expected = expected
        self.got = got
        msg = f"line {line}, col {col}: expected {expected}"
        if got:
            msg += f", got {got!r}"
        super().__init__(msg)


@dataclass(frozen=True)
class Token:
    kind: str  # NAME, INT, OP, NEWLINE, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()\[\],=<>{}:])"
)


def tokenize(text: str, newlines: bool = False) -> list[Token]:
    """Split ``text`` into tokens; ``#`` comments are dropped.

    With ``newlines=True`` line breaks are emitted as NEWLINE tokens
    (session files are line oriented), otherwise they are whitespace.
    """
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(line, col, "a token", text[pos])
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            if newlines:
                out.append(Token("NEWLINE", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind == "int":
            out.append(Token("INT", s, line, col))
        elif kind == "name":
            out.append(Token("NAME", s, line, col))
        elif kind == "op":
            out.append(Token("OP", s, line, col))
        pos = m.end()
    out.append(Token("EOF", "", line, pos - line_start + 1))
    return out


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind in ("OP", "NAME") and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind in ("OP", "NAME") and tok.text == text:
            return self.next()
        raise ParseError(tok.line, tok.col, repr(text), tok.text or "end of input")

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(tok.line, tok.col, what, tok.text or "end of input")
        return self.next()

    def error(self, expected: str):
        tok = self.peek()
        return ParseError(tok.line, tok.col, expected, tok.text or "end of input")
