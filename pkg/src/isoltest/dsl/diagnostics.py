"""Source spans, diagnostics and the tokenizer shared by the text formats."""

from __future__ import annotations

import re
from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """1-based line/column range; ``end_col`` is exclusive."""

    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        if self.line < 1 or self.col < 1 or self.end_line < 1 or self.end_col < 1:
            raise ValueError("line and column numbers start at 1")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.col}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    message: str
    span: SourceSpan | None = None

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.severity}: {self.message}"


class DslError(Exception):
    """Raised when parsing produced at least one error diagnostic."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))

    @property
    def span(self) -> SourceSpan | None:
        return self.diagnostics[0].span if self.diagnostics else None


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "num", "sym", "eof"
    text: str
    span: SourceSpan


_SYMBOLS = ("[]", "||", "&&", "==", "!=", "<=", ">=", "->", "{", "}", "(", ")", ";", ",", ".", "<", ">", "!", "?", "*", ":")
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>//[^\n]*|--[^\n]*)|(?P<block>/\*.*?\*/)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>[0-9]+)|(?P<sym>" + "|".join(re.escape(s) for s in _SYMBOLS) + ")",
    re.S,
)


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(file, line, col, line, col + 1)
            raise DslError([Diagnostic("error", f"unexpected character {text[pos]!r}", span)])
        kind = m.lastgroup
        chunk = m.group()
        if kind in ("ident", "num", "sym"):
            tokens.append(Token(kind, chunk, SourceSpan(file, line, col, line, col + len(chunk))))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(file, line, col, line, col)))
    return tokens


class TokenStream:
    """Cursor over tokens with the error helpers every parser needs."""

    def __init__(self, text: str, file: str = "<input>"):
        self.file = file
        self.tokens = tokenize(text, file)
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def ahead(self, k: int) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, *texts: str) -> bool:
        tok = self.peek
        return tok.kind != "eof" and tok.text in texts

    def accept(self, text: str) -> Token | None:
        return self.next() if self.at(text) else None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.describe(self.peek)}")
        return self.next()

    def ident(self, what: str = "identifier") -> Token:
        if self.peek.kind != "ident":
            self.fail(f"expected {what}, found {self.describe(self.peek)}")
        return self.next()

    @staticmethod
    def describe(tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def fail(self, message: str, span: SourceSpan | None = None):
        raise DslError([Diagnostic("error", message, span or self.peek.span)])
