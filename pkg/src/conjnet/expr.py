"""Exact algebra over polynomial-times-exponential functions.

An :class:`ExpPoly` is a finite sum of terms ``c * prod_j u_j**m_j * exp(l_j*u_j)``
with rational ``c`` and ``l_j``.  Distinct monomials of this form are linearly
independent, so an ExpPoly is zero exactly when its term table is empty.
:class:`RationalExpr` is a quotient of two ExpPolys and is closed under the
field operations and partial differentiation.

Directions are 1-based, matching the variable names ``u1, u2, ...``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

from flint import fmpz_mpoly_ctx

__all__ = [
    "ExprError",
    "ZeroExpressionError",
    "PoleError",
    "EvalModeError",
    "Term",
    "ExpPoly",
    "RationalExpr",
    "Point",
    "EvalMode",
    "FLOAT",
    "EvalContext",
    "as_rational_expr",
    "field_op",
    "derivative",
    "antiderivative",
    "evaluate",
    "is_zero",
]


class ExprError(Exception):
    """Base class for expression errors."""


class ZeroExpressionError(ExprError, ZeroDivisionError):
    """Division by an expression that is identically zero."""


class PoleError(ExprError, ZeroDivisionError):
    """A denominator evaluated to zero at the requested point."""


class EvalModeError(ExprError, ValueError):
    """Expression not admissible in the requested evaluation mode."""


# A monomial key is a tuple of (direction, power, rate) triples sorted by
# direction, with no triple having power == 0 and rate == 0.
Key = tuple
Number = Union[int, Fraction, float]


# term-count product above which multiplication goes through FLINT
_FLINT_MUL_THRESHOLD = 16


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def _rate(x):
    # integral rates are stored as int: cheaper to hash, equal to the Fraction
    x = _frac(x)
    return x.numerator if x.denominator == 1 else x


def _mul_keys(a: Key, b: Key) -> Key:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        da, db = a[i][0], b[j][0]
        if da < db:
            out.append(a[i])
            i += 1
        elif db < da:
            out.append(b[j])
            j += 1
        else:
            p = a[i][1] + b[j][1]
            r = a[i][2] + b[j][2]
            if p or r:
                out.append((da, p, r))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _order_key(dirs: Sequence[int]):
    """Sort key for monomials over ``dirs``: lexicographic on the dense rate
    vector, then on the dense power vector (absent entries count as 0)."""
    pos = {d: q for q, d in enumerate(dirs)}
    n = len(dirs)

    def key_of(key: Key):
        rates = [0] * n
        powers = [0] * n
        for d, p, r in key:
            rates[pos[d]] = r
            powers[pos[d]] = p
        return (rates, powers)

    return key_of


def _make_key(powers: Mapping[int, int], rates: Mapping[int, Number]) -> Key:
    dirs = set(powers) | set(rates)
    triples = []
    for d in sorted(dirs):
        p = int(powers.get(d, 0))
        r = _rate(rates.get(d, 0))
        if p < 0:
            raise ValueError("powers must be non-negative")
        if p or r:
            triples.append((int(d), p, r))
    return tuple(triples)


@dataclass(frozen=True)
class Term:
    """Read-only view of one term ``coeff * prod u_j**powers[j] * exp(rates[j]*u_j)``."""

    coeff: Fraction
    powers: Mapping[int, int]
    rates: Mapping[int, Fraction]


class ExpPoly:
    """Immutable finite sum of polynomial-times-exponential terms."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, Number] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                c = _frac(c)
                if c:
                    clean[k] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict) -> "ExpPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors

    @classmethod
    def constant(cls, c: Number) -> "ExpPoly":
        return cls({(): c})

    @classmethod
    def var(cls, j: int) -> "ExpPoly":
        return cls({((j, 1, 0),): 1})

    @classmethod
    def exp(cls, j: int, rate: Number = 1) -> "ExpPoly":
        return cls({_make_key({}, {j: rate}): 1})

    @classmethod
    def monomial(cls, coeff: Number, powers: Mapping[int, int] | None = None,
                 rates: Mapping[int, Number] | None = None) -> "ExpPoly":
        return cls({_make_key(powers or {}, rates or {}): coeff})

    # inspection

    def items(self):
        return self._terms.items()

    def terms(self) -> list[Term]:
        out = []
        for k in sorted(self._terms, key=_order_key(sorted(self.directions()))):
            powers = {d: p for d, p, _ in k if p}
            rates = {d: r for d, _, r in k if r}
            out.append(Term(self._terms[k], powers, rates))
        return out

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_one(self) -> bool:
        return len(self._terms) == 1 and self._terms.get(()) == 1

    def constant_value(self) -> Fraction | None:
        """The value if this is a constant, else None."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and () in self._terms:
            return self._terms[()]
        return None

    def directions(self) -> set[int]:
        return {d for k in self._terms for d, _, _ in k}

    def rates(self) -> set[Fraction]:
        return {r for k in self._terms for _, _, r in k}

    def leading(self) -> tuple[Key, Fraction]:
        k = max(self._terms, key=_order_key(sorted(self.directions())))
        return k, self._terms[k]

    def __eq__(self, other):
        if isinstance(other, ExpPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        from .parser import format_exppoly

        return f"ExpPoly({format_exppoly(self)!r})"

    # ring operations

    def _coerce(self, other) -> "ExpPoly | None":
        if isinstance(other, ExpPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ExpPoly.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        out = dict(self._terms)
        for k, c in o._terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v += c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return ExpPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly._wrap({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c: Number) -> "ExpPoly":
        c = _frac(c)
        if not c:
            return ExpPoly()
        if c == 1:
            return self
        return ExpPoly._wrap({k: v * c for k, v in self._terms.items()})

    def shift(self, key: Key) -> "ExpPoly":
        """Multiply by the monomial with the given key."""
        if not key:
            return self
        return ExpPoly._wrap({_mul_keys(k, key): c for k, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ExpPoly()
        if len(a) * len(b) > _FLINT_MUL_THRESHOLD:
            return _flint_product(self, other)
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = _mul_keys(ka, kb)
                v = out.get(k)
                out[k] = ca * cb if v is None else v + ca * cb
        return ExpPoly._wrap({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("ExpPoly powers must be non-negative integers")
        out = ExpPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # calculus

    def derivative(self, i: int) -> "ExpPoly":
        out: dict = {}
        for k, c in self._terms.items():
            for idx, (d, p, r) in enumerate(k):
                if d == i:
                    break
            else:
                continue
            if r:
                v = out.get(k, 0) + c * r
                out[k] = v
            if p:
                nk = list(k)
                if p == 1 and not r:
                    del nk[idx]
                else:
                    nk[idx] = (d, p - 1, r)
                nk = tuple(nk)
                out[nk] = out.get(nk, 0) + c * p
        return ExpPoly._wrap({k: c for k, c in out.items() if c})

    def antiderivative(self, i: int) -> "ExpPoly":
        """Antiderivative in ``u_i`` with no integration constant added."""
        out: dict = {}

        def put(key, c):
            out[key] = out.get(key, 0) + c

        for k, c in self._terms.items():
            rest = tuple(t for t in k if t[0] != i)
            own = [t for t in k if t[0] == i]
            m, lam = (own[0][1], own[0][2]) if own else (0, 0)
            if not lam:
                put(_mul_keys(rest, ((i, m + 1, 0),)), c / (m + 1))
                continue
            # int u^m e^{lam u} = e^{lam u} sum_j (-1)^j m!/(m-j)! u^(m-j) / lam^(j+1)
            fall = 1
            for j in range(m + 1):
                p = m - j
                coeff = c * ((-1) ** j) * fall / lam ** (j + 1)
                put(_mul_keys(rest, ((i, p, lam),)), coeff)
                fall *= p
        return ExpPoly._wrap({k: v for k, v in out.items() if v})

    def depends_only_on(self, i: int) -> bool:
        return self.directions() <= {i}


def _unit_key(key: Key) -> bool:
    """True if the monomial is a pure exponential (invertible in the class)."""
    return all(p == 0 for _, p, _ in key)


def _inverse_shift(key: Key) -> Key:
    return tuple((d, 0, -r) for d, _, r in key if r)


# Polynomial gcd via FLINT.  Direction j maps to two polynomial variables,
# u_j and E_j = exp(u_j / d_j), where d_j clears the rate denominators.
# Exponents of E_j are shifted to start at 0; E_j is a unit, so the shift
# never changes which factors are shared.


def _ctx(nvars: int):
    return fmpz_mpoly_ctx.get(("x", nvars), "lex")


def _to_poly(e: ExpPoly, pos: dict, scale: dict, ctx):
    n = len(pos)
    shift = [0] * n
    first = True
    raw = []
    for key, c in e.items():
        ex = [0] * (2 * n)
        for d, p, r in key:
            q = pos[d]
            ex[2 * q] = p
            ex[2 * q + 1] = int(r * scale[d])
        raw.append((ex, c))
        for q in range(n):
            v = ex[2 * q + 1]
            if first or v < shift[q]:
                shift[q] = v
        first = False
    den = 1
    for _, c in raw:
        den = den * c.denominator // math.gcd(den, c.denominator)
    terms = {}
    for ex, c in raw:
        for q in range(n):
            ex[2 * q + 1] -= shift[q]
        terms[tuple(ex)] = int(c * den)
    return ctx.from_dict(terms), shift, den


def _from_poly(poly, shift, den, dirs, scale) -> ExpPoly:
    out = {}
    for ex, c in poly.to_dict().items():
        key = []
        for q, d in enumerate(dirs):
            p = int(ex[2 * q])
            r = int(ex[2 * q + 1]) + shift[q]
            if scale[d] != 1:
                r = _rate(Fraction(r, scale[d]))
            if p or r:
                key.append((d, p, r))
        out[tuple(key)] = Fraction(int(c), den)
    return ExpPoly._wrap(out)


def _encoding(a: ExpPoly, b: ExpPoly):
    dirs = sorted(a.directions() | b.directions())
    pos = {d: q for q, d in enumerate(dirs)}
    scale = {d: 1 for d in dirs}
    for e in (a, b):
        for key, _ in e.items():
            for d, _, r in key:
                den = r.denominator
                if den != 1:
                    s = scale[d]
                    scale[d] = s * den // math.gcd(s, den)
    return dirs, pos, scale, _ctx(2 * max(len(dirs), 1))


def _flint_product(a: ExpPoly, b: ExpPoly) -> ExpPoly:
    dirs, pos, scale, ctx = _encoding(a, b)
    pa, sa, da = _to_poly(a, pos, scale, ctx)
    pb, sb, db = _to_poly(b, pos, scale, ctx)
    return _from_poly(pa * pb, [x + y for x, y in zip(sa, sb)], da * db, dirs, scale)


def _cofactors(a: ExpPoly, b: ExpPoly):
    """``(g, a/g, b/g)`` with ``g`` a greatest common divisor, or None when
    the gcd is a unit."""
    dirs, pos, scale, ctx = _encoding(a, b)
    if not dirs:
        return None
    pa, sa, da = _to_poly(a, pos, scale, ctx)
    pb, sb, db = _to_poly(b, pos, scale, ctx)
    g = pa.gcd(pb)
    if g.is_constant():
        return None
    zero = [0] * len(dirs)
    return (
        _from_poly(g, zero, 1, dirs, scale),
        _from_poly(pa / g, sa, da, dirs, scale),
        _from_poly(pb / g, sb, db, dirs, scale),
    )


class RationalExpr:
    """Quotient ``num / den`` of two ExpPolys, kept in lowest terms.

    Common polynomial factors are cancelled and the denominator is scaled so
    its leading term has coefficient 1 and no exponential factor; a
    pure-exponential denominator is absorbed into the numerator.  Zero
    testing is still done on the cross-multiplied difference (:meth:`equals`).
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce: bool = True):
        num = _as_exppoly(num)
        den = ExpPoly.constant(1) if den is None else _as_exppoly(den)
        if den.is_zero():
            raise ZeroExpressionError("denominator is the zero expression")
        if num.is_zero():
            self.num, self.den = num, ExpPoly.constant(1)
            return
        if reduce and not den.is_one():
            cf = _cofactors(num, den)
            if cf is not None:
                _, num, den = cf
        if not den.is_one():
            lead, c = den.leading()
            shift = _inverse_shift(lead)
            inv = 1 / c
            den = den.shift(shift).scale(inv)
            num = num.shift(shift).scale(inv)
            if len(den) == 1:
                (k, _), = den.items()
                if not k:
                    den = ExpPoly.constant(1)
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: ExpPoly, den: ExpPoly) -> "RationalExpr":
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def constant(cls, c: Number) -> "RationalExpr":
        return cls(ExpPoly.constant(c))

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def as_exppoly(self) -> ExpPoly:
        if not self.den.is_one():
            raise EvalModeError("expression is a proper quotient, not an ExpPoly")
        return self.num

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def equals(self, other) -> bool:
        """Exact equality of the denoted functions."""
        return (self - as_rational_expr(other)).is_zero()

    def directions(self) -> set[int]:
        return self.num.directions() | self.den.directions()

    def rates(self) -> set[Fraction]:
        return self.num.rates() | self.den.rates()

    def __eq__(self, other):
        if isinstance(other, (RationalExpr, ExpPoly, int, Fraction)):
            o = as_rational_expr(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        from .parser import format_expr

        return f"RationalExpr({format_expr(self)!r})"

    def __str__(self):
        from .parser import format_expr

        return format_expr(self)

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return RationalExpr(self.num + o.num, self.den)
        if self.den.is_one():
            return RationalExpr(self.num * o.den + o.num, o.den)
        if o.den.is_one():
            return RationalExpr(self.num + o.num * self.den, self.den)
        cf = _cofactors(self.den, o.den)
        if cf is None:
            return RationalExpr(self.num * o.den + o.num * self.den, self.den * o.den)
        _, b, d = cf
        return RationalExpr(self.num * d + o.num * b, self.den * d)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr._raw(-self.num, self.den)

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RationalExpr(ExpPoly())
        a, b, c, d = self.num, self.den, o.num, o.den
        # inputs are reduced, so only cross factors can cancel
        if not d.is_one():
            cf = _cofactors(a, d)
            if cf is not None:
                _, a, d = cf
        if not b.is_one():
            cf = _cofactors(c, b)
            if cf is not None:
                _, c, b = cf
        return RationalExpr(a * c, b * d, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "RationalExpr":
        if self.num.is_zero():
            raise ZeroExpressionError("division by the zero expression")
        return RationalExpr(self.den, self.num)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n < 0:
            return self.inverse() ** (-n)
        return RationalExpr(self.num ** n, self.den ** n)

    def derivative(self, i: int) -> "RationalExpr":
        dn = self.num.derivative(i)
        if self.den.is_one():
            return RationalExpr._raw(dn, self.den)
        dd = self.den.derivative(i)
        if dd.is_zero():
            return RationalExpr(dn, self.den)
        # d(n/d) = (n' d - n d') / d^2; the gcd g of d and d' shrinks the square
        cf = _cofactors(self.den, dd)
        if cf is None:
            return RationalExpr(dn * self.den - self.num * dd, self.den * self.den)
        _, d_g, dd_g = cf
        return RationalExpr(dn * d_g - self.num * dd_g, self.den * d_g)

    def evaluate(self, point, mode: "EvalMode | None" = None):
        return EvalContext(point, mode or FLOAT).value(self)


def _as_exppoly(x) -> ExpPoly:
    if isinstance(x, ExpPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return ExpPoly.constant(x)
    raise TypeError(f"expected ExpPoly or rational, got {type(x).__name__}")


def _coerce(x) -> RationalExpr | None:
    if isinstance(x, RationalExpr):
        return x
    if isinstance(x, ExpPoly):
        return RationalExpr._raw(x, ExpPoly.constant(1))
    if isinstance(x, (int, Fraction)):
        return RationalExpr._raw(ExpPoly.constant(x), ExpPoly.constant(1))
    return None


def as_rational_expr(x) -> RationalExpr:
    out = _coerce(x)
    if out is None:
        if isinstance(x, str):
            from .parser import parse_expr

            return parse_expr(x)
        raise TypeError(f"cannot interpret {type(x).__name__} as an expression")
    return out


# ---------------------------------------------------------------------------
# evaluation


class Point(tuple):
    """Coordinates ``(u_1, ..., u_N)``; indexed 1-based via :meth:`coord`."""

    def __new__(cls, coords: Iterable):
        return super().__new__(cls, tuple(coords))

    def coord(self, j: int):
        return self[j - 1]


@dataclass(frozen=True)
class EvalMode:
    """Float evaluation, or exact evaluation with ``exp(u_j)`` replaced by ``bases[j-1]``.

    Exact mode treats ``u_j`` and ``exp(u_j)`` as independent rational inputs;
    this is a ring homomorphism on integer-rate expressions, so exact
    identities survive evaluation exactly.
    """

    kind: str = "float"
    bases: tuple = ()

    def __post_init__(self):
        if self.kind not in ("float", "exact"):
            raise ValueError(f"unknown evaluation mode {self.kind!r}")
        if self.kind == "exact":
            bases = tuple(_frac(b) for b in self.bases)
            if not bases or any(b <= 0 for b in bases):
                raise ValueError("exact mode needs positive rational bases for exp(u_j)")
            object.__setattr__(self, "bases", bases)

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    @classmethod
    def exact_with(cls, bases: Sequence) -> "EvalMode":
        return cls("exact", tuple(bases))

    def to_json(self):
        if not self.exact:
            return "float"
        return {"exact": [str(b) for b in self.bases]}


FLOAT = EvalMode()


class EvalContext:
    """Evaluates many expressions at one point, caching monomial values."""

    def __init__(self, point, mode: EvalMode = FLOAT):
        self.mode = mode
        if mode.exact:
            self.coords = tuple(_frac(c) for c in point)
            if len(mode.bases) < len(self.coords):
                raise EvalModeError("exact mode needs one base per direction")
        else:
            self.coords = tuple(float(c) for c in point)
        self._mono: dict = {}
        self._cache: dict = {}

    def _monomial(self, key: Key):
        v = self._mono.get(key)
        if v is not None:
            return v
        if self.mode.exact:
            v = Fraction(1)
            for d, p, r in key:
                if r.denominator != 1:
                    raise EvalModeError(f"rate {r} is not an integer; exact mode unavailable")
                u = self.coords[d - 1]
                v *= u ** p * self.mode.bases[d - 1] ** int(r)
        else:
            s = 0.0
            v = 1.0
            for d, p, r in key:
                u = self.coords[d - 1]
                if p:
                    v *= u ** p
                if r:
                    s += float(r) * u
            if s:
                v *= math.exp(s)
        self._mono[key] = v
        return v

    def exppoly(self, e: ExpPoly):
        if self.mode.exact:
            total = Fraction(0)
            for k, c in e.items():
                total += c * self._monomial(k)
            return total
        return math.fsum(float(c) * self._monomial(k) for k, c in e.items())

    def value(self, e):
        """Value of an ExpPoly or RationalExpr; results are cached by identity."""
        key = id(e)
        hit = self._cache.get(key)
        if hit is not None and hit[0] is e:
            return hit[1]
        if isinstance(e, ExpPoly):
            v = self.exppoly(e)
        else:
            e = as_rational_expr(e)
            num = self.exppoly(e.num)
            if e.den.is_one():
                v = num
            else:
                den = self.exppoly(e.den)
                if den == 0:
                    raise PoleError(f"denominator vanishes at {self.coords}")
                v = num / den
        self._cache[key] = (e, v)
        return v


# ---------------------------------------------------------------------------
# functional surface


def field_op(a, b, op: str) -> RationalExpr:
    a, b = as_rational_expr(a), as_rational_expr(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown field operation {op!r}")


def derivative(a, i: int):
    if isinstance(a, ExpPoly):
        return a.derivative(i)
    return as_rational_expr(a).derivative(i)


def antiderivative(a, i: int) -> ExpPoly:
    if isinstance(a, RationalExpr):
        a = a.as_exppoly()
    return _as_exppoly(a).antiderivative(i)


def evaluate(a, point, mode: EvalMode = FLOAT):
    return EvalContext(point, mode).value(a)


def is_zero(a) -> bool:
    return as_rational_expr(a).is_zero()
