"""Tokenizer for LogiCore source text.

`#` starts a line comment. Tokens carry the exact source text and their
1-based line/column, so concatenating token texts with the original
whitespace reproduces the input.
"""

from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = frozenset({"in", "null", "true", "false"})

# Longest first so ':-' beats ':' and '==' beats '='.
_MULTI_PUNCT = (":-", "->", "==", "!=", "<=", ">=")
_SINGLE_PUNCT = "(){}[],;:.|+-*/<>="


class LexError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # identifier | number | string | punctuation | keyword
    text: str
    line: int
    column: int


def tokenize(source: str) -> list[Token]:
    """Full token stream, or LexError with location on bad input."""
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    while i < n:
        ch = source[i]

        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue

        if ch == '"':
            start_line, start_col = line, col
            j = i + 1
            while j < n:
                c = source[j]
                if c == '"':
                    break
                if c == "\n":
                    raise LexError("unterminated string", start_line, start_col)
                if c == "\\":
                    j += 1  # escaped char consumed with its backslash
                j += 1
            if j >= n:
                raise LexError("unterminated string", start_line, start_col)
            text = source[i : j + 1]
            tokens.append(Token("string", text, start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue

        if ch.isdigit():
            start_col = col
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            tokens.append(Token("number", text, line, start_col))
            col += j - i
            i = j
            continue

        if ch.isalpha() or ch == "_":
            start_col = col
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            kind = "keyword" if text in KEYWORDS else "identifier"
            tokens.append(Token(kind, text, line, start_col))
            col += j - i
            i = j
            continue

        two = source[i : i + 2]
        if two in _MULTI_PUNCT:
            tokens.append(Token("punctuation", two, line, col))
            i += 2
            col += 2
            continue
        if ch in _SINGLE_PUNCT:
            tokens.append(Token("punctuation", ch, line, col))
            i += 1
            col += 1
            continue

        raise LexError(f"illegal character {ch!r}", line, col)

    return tokens


def decode_string(token_text: str) -> str:
    """Decode a quoted string token's escapes (\\\\ \\" \\n \\t)."""
    body = token_text[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            esc = body[i + 1]
            out.append({"n": "\n", "t": "\t"}.get(esc, esc))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def encode_string(value: str) -> str:
    """Inverse of decode_string, producing a canonical quoted literal."""
    out = ['"']
    for c in value:
        if c == '"':
            out.append('\\"')
        elif c == "\\":
            out.append("\\\\")
        elif c == "\n":
            out.append("\\n")
        elif c == "\t":
            out.append("\\t")
        else:
            out.append(c)
    out.append('"')
    return "".join(out)
