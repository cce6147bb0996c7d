"""Text grammar for polynomial input.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INTEGER)?
    atom   := NUMBER | VARIABLE | '(' expr ')'

Division is only allowed by nonzero constants, so rational coefficients can
be written as ``5/3``.  Juxtaposition (``2x1``) is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import ParseError
from .multipoly import DEFAULT_VARIABLES, MultiPoly

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]|−))")


@dataclass
class _Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise _error(text, pos, f"unexpected character {text[pos]!r}")
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(_Token("num", m.group(1), start))
        elif m.group(2):
            tokens.append(_Token("name", m.group(2), start))
        else:
            op = m.group(3)
            op = {"**": "^", "−": "-"}.get(op, op)
            tokens.append(_Token("op", op, start))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


def _error(text: str, offset: int, message: str, line_offset: int = 0) -> ParseError:
    line = text.count("\n", 0, offset) + 1 + line_offset
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return ParseError(message, line, col)


class _Parser:
    def __init__(self, text: str, variables: Sequence[str], line_offset: int):
        self.text = text
        self.variables = tuple(variables)
        self.line_offset = line_offset
        try:
            self.tokens = _tokenize(text)
        except ParseError as exc:
            raise ParseError(exc.reason, exc.line + line_offset, exc.column) from None
        self.i = 0

    def fail(self, tok: _Token, message: str) -> ParseError:
        return _error(self.text, tok.offset, message, self.line_offset)

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def take(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def parse(self) -> MultiPoly:
        if self.tok.kind == "end":
            raise self.fail(self.tok, "empty polynomial")
        p = self.expr()
        if self.tok.kind != "end":
            if self.tok.kind in ("num", "name") or self.tok.text == "(":
                raise self.fail(self.tok, "implicit multiplication is not allowed; use '*'")
            raise self.fail(self.tok, f"unexpected {self.tok.text!r}")
        return p

    def expr(self) -> MultiPoly:
        p = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MultiPoly:
        p = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op_tok = self.take()
            q = self.unary()
            if op_tok.text == "*":
                p = p * q
            else:
                if not q.is_constant():
                    raise self.fail(op_tok, "division is only allowed by constants")
                if not q:
                    raise self.fail(op_tok, "division by zero")
                p = p.scale(1 / q.constant_value())
        return p

    def unary(self) -> MultiPoly:
        if self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            p = self.unary()
            return -p if op == "-" else p
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.take()
            t = self.take()
            if t.kind != "num" or "." in t.text:
                raise self.fail(t, "exponent must be a non-negative integer")
            base = base ** int(t.text)
        return base

    def atom(self) -> MultiPoly:
        t = self.take()
        if t.kind == "num":
            value = Fraction(t.text)
            return MultiPoly.constant(value, self.variables)
        if t.kind == "name":
            if t.text not in self.variables:
                raise self.fail(t, f"unknown variable {t.text!r}; expected one of {', '.join(self.variables)}")
            return MultiPoly.var(t.text, self.variables)
        if t.kind == "op" and t.text == "(":
            p = self.expr()
            close = self.take()
            if close.text != ")":
                raise self.fail(close, "expected ')'")
            return p
        if t.kind == "end":
            raise self.fail(t, "unexpected end of input")
        raise self.fail(t, f"unexpected {t.text!r}")


def parse_poly(text: str, variables: Sequence[str] = DEFAULT_VARIABLES, line: int = 1) -> MultiPoly:
    """Parse a polynomial; errors carry line and column (``line`` is the first line number)."""
    return _Parser(text, variables, line - 1).parse()


def parse_input_file(content: str, variables: Sequence[str] = DEFAULT_VARIABLES) -> list[MultiPoly]:
    """Two polynomials, one per non-empty line; '#' starts a comment."""
    polys = []
    for number, raw in enumerate(content.splitlines(), start=1):
        text = raw.split("#", 1)[0]
        if not text.strip():
            continue
        polys.append(parse_poly(text, variables, line=number))
    if len(polys) != 2:
        raise ParseError(f"expected two polynomials, found {len(polys)}", max(1, len(content.splitlines())), 1)
    return polys
