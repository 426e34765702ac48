"""Tokenizer for the MiniJS dialect.

Maximal-munch scanning; the staging tags `.<  >.  .~  .!  .&` win over
their single-character prefixes, so `a.<` is `a` `.<` and `x >. y` closes
a quote. `//` comments count as whitespace. Token texts are exact source
slices: the concatenation of texts plus skipped whitespace/comments
reproduces the input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import StagedError


class LexError(StagedError):
    pass


KEYWORDS = frozenset(
    {
        "var", "function", "return", "if", "else", "while", "for", "in",
        "new", "typeof", "true", "false", "null", "undefined", "debugger",
    }
)

# Longest first within each leading character.
_TWO_CHAR = (".<", ".~", ".!", ".&", ">.", "==", "!=", "<=", ">=", "&&", "||")
_ONE_CHAR = "(){}[],;:?.=<>+-*/%!"


@dataclass(frozen=True)
class Token:
    category: str  # keyword | ident | unique | number | string | punct | eof
    text: str
    value: object  # parsed payload for number/string/unique
    line: int  # 1-based
    col: int  # 0-based

    def __repr__(self) -> str:
        return f"Token({self.category}, {self.text!r}, {self.line}:{self.col})"


_STRING_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 0
    n = len(source)

    def error(msg: str) -> LexError:
        return LexError(msg, line)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 0
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "/" and source[i + 1 : i + 2] == "/":
            while i < n and source[i] != "\n":
                i += 1
            continue

        start_line, start_col = line, col
        pair = source[i : i + 2]
        if pair in _TWO_CHAR:
            tokens.append(Token("punct", pair, None, start_line, start_col))
            i, col = i + 2, col + 2
            continue

        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            if j < n and source[j] == "." and source[j + 1 : j + 2].isdigit():
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            text = source[i:j]
            tokens.append(Token("number", text, float(text), start_line, start_col))
            i, col = j, col + (j - i)
            continue

        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            category = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(category, text, text, start_line, start_col))
            i, col = j, col + (j - i)
            continue

        if ch == "$":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            if j == i + 1:
                raise error("'$' must be followed by an identifier")
            text = source[i:j]
            tokens.append(Token("unique", text, text[1:], start_line, start_col))
            i, col = j, col + (j - i)
            continue

        if ch == '"':
            j = i + 1
            out: list[str] = []
            while True:
                if j >= n or source[j] == "\n":
                    raise error("unterminated string literal")
                c = source[j]
                if c == '"':
                    j += 1
                    break
                if c == "\\":
                    esc = source[j + 1 : j + 2]
                    if esc not in _STRING_ESCAPES:
                        raise error(f"unsupported string escape '\\{esc}'")
                    out.append(_STRING_ESCAPES[esc])
                    j += 2
                    continue
                out.append(c)
                j += 1
            text = source[i:j]
            tokens.append(Token("string", text, "".join(out), start_line, start_col))
            i, col = j, col + (j - i)
            continue

        if ch in _ONE_CHAR:
            tokens.append(Token("punct", ch, None, start_line, start_col))
            i, col = i + 1, col + 1
            continue

        raise error(f"unexpected character {ch!r}")

    tokens.append(Token("eof", "", None, line, col))
    return tokens
