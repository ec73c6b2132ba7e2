"""Text form of expressions: a recursive-descent parser and a matching printer.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ('-'|'+')? base ('^' int)?
    base   := rational | 'u'int | 'exp' '(' linear ')' | '(' expr ')'

The argument of ``exp`` must reduce to ``r*u_j`` for a single direction ``j``
and a rational ``r``; anything else leaves the function class and raises
:class:`ClassViolationError`.  ``**`` is accepted as a synonym for ``^``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .expr import ExpPoly, ExprError, RationalExpr, ZeroExpressionError

__all__ = ["ParseError", "ClassViolationError", "parse_expr", "format_expr", "format_exppoly"]


class ParseError(ExprError, ValueError):
    """Malformed expression text."""


class ClassViolationError(ParseError):
    """Well-formed text denoting a function outside the expression class."""


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>\d+(?:\.\d*)?|\.\d+)"
    r"|(?P<var>u(?P<idx>\d+))"
    r"|(?P<exp>exp)"
    r"|(?P<op>\*\*|[-+*/^()])"
    r")"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} at offset {pos}")
        if m.group("num") is not None:
            tokens.append(("num", m.group("num")))
        elif m.group("var") is not None:
            if int(m.group("idx")) < 1:
                raise ParseError("variable indices start at u1")
            tokens.append(("var", m.group("idx")))
        elif m.group("exp") is not None:
            tokens.append(("exp", "exp"))
        else:
            op = m.group("op")
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r}, found {tok[1] or 'end of input'!r}")
        return tok

    def at_op(self, *ops):
        tok = self.peek()
        return tok[0] == "op" and tok[1] in ops

    def parse(self) -> RationalExpr:
        e = self.expr()
        if self.peek()[0] != "end":
            raise ParseError(f"unexpected trailing input {self.peek()[1]!r}")
        return e

    def expr(self) -> RationalExpr:
        e = self.term()
        while self.at_op("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> RationalExpr:
        e = self.factor()
        while self.at_op("*", "/") or self.peek()[0] == "var":
            # a variable right after a factor is an implicit product: "2u1"
            op = self.take()[1] if self.peek()[0] == "op" else "*"
            rhs = self.factor()
            if op == "*":
                e = e * rhs
            else:
                if rhs.is_zero():
                    raise ZeroExpressionError("division by the zero expression")
                e = e / rhs
        return e

    def factor(self) -> RationalExpr:
        sign = 1
        while self.at_op("-", "+"):
            if self.take()[1] == "-":
                sign = -sign
        e = self.base()
        if self.at_op("^"):
            self.take()
            neg = False
            if self.at_op("-"):
                self.take()
                neg = True
            tok = self.expect("num")
            if not tok[1].isdigit():
                raise ParseError(f"exponent must be an integer, got {tok[1]!r}")
            n = int(tok[1])
            if neg:
                if e.is_zero():
                    raise ZeroExpressionError("negative power of the zero expression")
                n = -n
            e = e ** n
        return -e if sign < 0 else e

    def base(self) -> RationalExpr:
        kind, val = self.take()
        if kind == "num":
            return RationalExpr.constant(Fraction(val))
        if kind == "var":
            return RationalExpr(ExpPoly.var(int(val)))
        if kind == "exp":
            self.expect("op", "(")
            arg = self.expr()
            self.expect("op", ")")
            j, rate = _linear_single(arg)
            return RationalExpr(ExpPoly.exp(j, rate))
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect("op", ")")
            return e
        raise ParseError(f"unexpected token {val or 'end of input'!r}")


def _linear_single(arg: RationalExpr) -> tuple[int, Fraction]:
    """Decompose ``arg`` as ``rate * u_j``, or raise ClassViolationError."""
    if not arg.den.is_one():
        raise ClassViolationError("exponential argument must be linear in one variable")
    items = list(arg.num.items())
    if len(items) != 1:
        raise ClassViolationError("exponential argument must be linear in one variable")
    key, c = items[0]
    if len(key) != 1 or key[0][1] != 1 or key[0][2] != 0:
        raise ClassViolationError("exponential argument must be linear in one variable")
    return key[0][0], c


def parse_expr(text: str) -> RationalExpr:
    """Parse ``text`` into a canonical :class:`RationalExpr`."""
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing


def _fmt_rational(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def _fmt_monomial(key) -> list[str]:
    parts = []
    for d, p, _ in key:
        if p == 1:
            parts.append(f"u{d}")
        elif p:
            parts.append(f"u{d}^{p}")
    for d, _, r in key:
        if r == 1:
            parts.append(f"exp(u{d})")
        elif r == -1:
            parts.append(f"exp(-u{d})")
        elif r:
            parts.append(f"exp({_fmt_rational(r)}*u{d})")
    return parts


def format_exppoly(e: ExpPoly) -> str:
    from .expr import _order_key

    if e.is_zero():
        return "0"
    terms = dict(e.items())
    out = []
    for key in sorted(terms, key=_order_key(sorted(e.directions())), reverse=True):
        c = terms[key]
        neg = c < 0
        mag = -c if neg else c
        parts = _fmt_monomial(key)
        if mag != 1 or not parts:
            if mag.denominator != 1:
                parts.insert(0, f"{mag.numerator}/{mag.denominator}")
            else:
                parts.insert(0, str(mag.numerator))
        body = "*".join(parts)
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def format_expr(e) -> str:
    """Text that :func:`parse_expr` maps back to an equal expression."""
    if isinstance(e, ExpPoly):
        return format_exppoly(e)
    if e.den.is_one():
        return format_exppoly(e.num)
    return f"({format_exppoly(e.num)})/({format_exppoly(e.den)})"
