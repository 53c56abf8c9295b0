"""Plain-text polynomial map files.

One assignment per line, ``#`` starts a comment::

    # the map (x + y^2, y)
    u1 = x1 + x2^2
    u2 = x2

A term is an optional rational coefficient (``3``, ``-1/2``) followed by
factors ``x<i>`` or ``x<i>^<e>``, joined by ``*`` or plain whitespace.  The
number of variables is the larger of the number of components and the highest
variable index used; both must agree.  The printer writes terms by degree,
low degree first and lex-descending inside a degree, with exact rationals, and
its output parses back to the same map.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConstantTermError, MapSyntaxError
from .poly import PolyMap, Polynomial

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<var>[A-Za-z]+)(?P<idx>\d+)
  | (?P<op>[-+*^=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "var", "op"
    text: str
    column: int
    letter: str = ""
    index: int = 0


@dataclass
class Assignment:
    component: int  # 1-based
    line: int
    expression: str
    terms: dict


@dataclass
class MapDocument:
    num_vars: int
    assignments: list[Assignment]
    source: str
    map: PolyMap
    output_letter: str = "u"
    input_letter: str = "x"


def _tokenize(text: str, line: int) -> list[_Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise MapSyntaxError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup if m.lastgroup != "idx" else "var"
        if m.group("ws") is None:
            if m.group("var") is not None:
                out.append(_Token("var", m.group(0), pos + 1, m.group("var"), int(m.group("idx"))))
            else:
                out.append(_Token(kind, m.group(0), pos + 1))
        pos = m.end()
    return out


class _LineParser:
    """Recursive descent over one line's tokens: ``lhs = term {(+|-) term}``."""

    def __init__(self, tokens: list[_Token], line: int, width: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line
        self.width = width

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, message: str, token: _Token | None = None) -> MapSyntaxError:
        col = token.column if token is not None else self.width + 1
        return MapSyntaxError(message, self.line, col)

    def expect_op(self, op: str) -> _Token:
        tok = self.peek()
        if tok is None or tok.kind != "op" or tok.text != op:
            raise self.error(f"expected {op!r}", tok)
        self.pos += 1
        return tok

    def assignment(self) -> tuple[_Token, list[tuple[Fraction, dict[int, int], _Token]]]:
        lhs = self.peek()
        if lhs is None or lhs.kind != "var":
            raise self.error("expected an assignment such as 'u1 = ...'", lhs)
        self.pos += 1
        self.expect_op("=")
        return lhs, self.expression()

    def expression(self):
        terms = []
        sign = 1
        tok = self.peek()
        if tok is None:
            raise self.error("empty right-hand side")
        if tok.kind == "op" and tok.text in "+-":
            sign = -1 if tok.text == "-" else 1
            self.pos += 1
        terms.append(self.term(sign))
        while (tok := self.peek()) is not None:
            if tok.kind == "op" and tok.text in "+-":
                self.pos += 1
                terms.append(self.term(-1 if tok.text == "-" else 1))
            else:
                raise self.error(f"unexpected {tok.text!r}", tok)
        return terms

    def term(self, sign: int):
        start = self.peek()
        if start is None:
            raise self.error("expected a term")
        coeff = Fraction(sign)
        factors: dict[int, int] = {}
        seen = False
        if start.kind == "num":
            coeff *= self.number()
            seen = True
        while (tok := self.peek()) is not None:
            if tok.kind == "op" and tok.text == "*":
                if not seen:
                    raise self.error("'*' without a left operand", tok)
                self.pos += 1
                nxt = self.peek()
                if nxt is None or nxt.kind not in ("num", "var"):
                    raise self.error("expected a factor after '*'", nxt)
                continue
            if tok.kind == "num":
                coeff *= self.number()
            elif tok.kind == "var":
                i, e = self.factor()
                factors[i] = factors.get(i, 0) + e
            else:
                break
            seen = True
        if not seen:
            raise self.error("expected a coefficient or a variable", start)
        return coeff, factors, start

    def number(self) -> Fraction:
        tok = self.peek()
        self.pos += 1
        if "/" in tok.text:
            p, q = tok.text.split("/")
            if int(q) == 0:
                raise self.error("zero denominator", tok)
            return Fraction(int(p), int(q))
        return Fraction(int(tok.text))

    def factor(self) -> tuple[int, int]:
        tok = self.peek()
        self.pos += 1
        if tok.index < 1:
            raise self.error("variable indices start at 1", tok)
        exp = 1
        nxt = self.peek()
        if nxt is not None and nxt.kind == "op" and nxt.text == "^":
            self.pos += 1
            etok = self.peek()
            if etok is None or etok.kind != "num" or "/" in etok.text:
                raise self.error("exponent must be a non-negative integer", etok)
            self.pos += 1
            exp = int(etok.text)
        return tok.index, exp


def parse_map(text: str) -> MapDocument:
    """Parse a map file.  Errors are ``MapSyntaxError`` anchored to line and column."""
    parsed = []  # (line_no, lhs token, terms, expression text)
    var_letter = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        tokens = _tokenize(body, line_no)
        parser = _LineParser(tokens, line_no, len(body.rstrip()))
        lhs, terms = parser.assignment()
        for t in tokens[1:]:
            if t.kind != "var":
                continue
            if var_letter is None:
                var_letter = t.letter
            elif t.letter != var_letter:
                raise MapSyntaxError(
                    f"mixed variable names {var_letter!r} and {t.letter!r}", line_no, t.column
                )
        eq = body.index("=")
        parsed.append((line_no, lhs, terms, body[eq + 1:].strip()))

    if not parsed:
        raise MapSyntaxError("no assignments found", 1, 1)

    out_letter = parsed[0][1].letter
    by_component: dict[int, tuple] = {}
    for entry in parsed:
        line_no, lhs, _, _ = entry
        if lhs.letter != out_letter:
            raise MapSyntaxError(
                f"mixed component names {out_letter!r} and {lhs.letter!r}", line_no, lhs.column
            )
        if lhs.index < 1:
            raise MapSyntaxError("component indices start at 1", line_no, lhs.column)
        if lhs.index in by_component:
            raise MapSyntaxError(
                f"duplicate assignment to {lhs.text} (first on line {by_component[lhs.index][0]})",
                line_no, lhs.column,
            )
        by_component[lhs.index] = entry

    n = len(by_component)
    for k in range(1, n + 1):
        if k not in by_component:
            last = parsed[-1][0]
            raise MapSyntaxError(f"missing component {out_letter}{k}", last, 1)
    if max(by_component) != n:
        line_no, lhs, _, _ = by_component[max(by_component)]
        raise MapSyntaxError(f"component index gap: {lhs.text} but only {n} components", line_no, lhs.column)

    var_letter = var_letter or ("x" if out_letter != "x" else "u")
    if var_letter == out_letter:
        line_no, lhs, _, _ = parsed[0]
        raise MapSyntaxError("components and variables must use different names", line_no, lhs.column)

    assignments = []
    components = []
    for k in range(1, n + 1):
        line_no, lhs, terms, expr = by_component[k]
        merged: dict[tuple[int, ...], Fraction] = {}
        for coeff, factors, tok in terms:
            for i in factors:
                if i > n:
                    raise MapSyntaxError(
                        f"variable {var_letter}{i} exceeds the number of components ({n})", line_no, tok.column
                    )
            e = tuple(factors.get(i, 0) for i in range(1, n + 1))
            merged[e] = merged.get(e, 0) + coeff
        p = Polynomial(n, merged)
        if p.constant_term:
            raise MapSyntaxError(
                f"nonzero constant term {p.constant_term} in {lhs.text}; maps must fix the origin",
                line_no, lhs.column,
            )
        assignments.append(Assignment(k, line_no, expr, dict(p.terms)))
        components.append(p)
    try:
        F = PolyMap(components)
    except ConstantTermError as exc:  # pragma: no cover - caught above
        raise MapSyntaxError(str(exc), by_component[exc.component + 1][0], 1) from exc
    return MapDocument(n, assignments, text, F, out_letter, var_letter)


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _monomial(e, var: str) -> str:
    parts = []
    for i, k in enumerate(e, start=1):
        if k == 1:
            parts.append(f"{var}{i}")
        elif k > 1:
            parts.append(f"{var}{i}^{k}")
    return "*".join(parts)


def format_polynomial(p: Polynomial, var: str = "x") -> str:
    """Canonical order (by degree, then lex-descending), e.g. ``x1 - 3/2*x1*x2^2``."""
    if p.is_zero():
        return "0"
    out = []
    for k, (e, c) in enumerate(p.items()):
        mono = _monomial(e, var)
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(out)


def format_map(F: PolyMap, lhs: str = "u", var: str = "x") -> str:
    return "".join(f"{lhs}{i} = {format_polynomial(c, var)}\n" for i, c in enumerate(F, start=1))
