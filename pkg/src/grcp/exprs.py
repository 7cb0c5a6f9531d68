"""Tokenizing linear combinations such as ``ee* + ff* - 2*u + 1/2 w``."""

from __future__ import annotations

import re
from fractions import Fraction

from grcp.errors import ParseError

_COEF = re.compile(r"\s*(\d+(?:/\d+)?)\s*(\*)?\s*")


def split_terms(text: str, line: int = 0, offset: int = 0) -> list[tuple[Fraction, str, int]]:
    """Split into ``(coefficient, body, column)`` triples.

    A body may be empty (a bare scalar).  ``0`` alone is the empty sum.
    """
    s = text.strip()
    if not s:
        raise ParseError("empty expression", line, offset + 1)
    if s == "0":
        return []
    out = []
    i = 0
    n = len(text)
    sign = 1
    expect_term = True
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-−":
            sign = -sign if ch != "+" else sign
            expect_term = True
            i += 1
            continue
        start = i
        j = i
        depth = 0
        while j < n:
            c = text[j]
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
            elif depth == 0 and c in "+-−" and j > start:
                break
            j += 1
        chunk = text[start:j]
        m = _COEF.match(chunk)
        coef = Fraction(1)
        body = chunk
        if m and m.group(1):
            coef = Fraction(m.group(1))
            body = chunk[m.end():]
        body = body.strip()
        if body.startswith("*"):
            raise ParseError("dangling '*'", line, offset + start + 1)
        if not expect_term:
            raise ParseError("missing '+' or '-' between terms", line, offset + start + 1)
        out.append((sign * coef, body, offset + start + 1))
        sign = 1
        expect_term = False
        i = j
    if expect_term:
        raise ParseError("expression ends with an operator", line, offset + n)
    return out


def tokenize_word(body: str, symbols: set[str], line: int = 0, column: int = 0) -> list[str]:
    """Greedy longest-match split of a word into known symbols.

    Whitespace, ``.`` and ``·`` separate symbols; a trailing ``*`` marks a
    ghost (adjoint) generator and is kept on the token.
    """
    out = []
    order = sorted(symbols, key=len, reverse=True)
    i = 0
    n = len(body)
    while i < n:
        if body[i] in " \t.·":
            i += 1
            continue
        for sym in order:
            if body.startswith(sym, i):
                tok = sym
                i += len(sym)
                if i < n and body[i] == "*":
                    tok += "*"
                    i += 1
                out.append(tok)
                break
        else:
            raise ParseError(f"unknown generator at {body[i:]!r}", line, column + i)
    return out
