"""Multi-Wronskian determinant formulas for M composed Levy transformations.

With seeds ``xi^1..xi^M`` and a partition ``M = m_1 + ... + m_N`` (all
``m_i >= 1``), the transformed net is a set of determinant ratios::

    X_i^l[M]   =  |XX_i^l| / |W|        H_i[M]  = -|HH_i| / |W|
    beta_ij[M] = -|W_ij|   / |W|        x^l[M]  =  |XP^l| / |W|

where ``W`` stacks the Wronskian blocks ``W_j(m_j)`` (row ``r`` of block ``j``
holds ``d_j^r xi_j``), and the numerators border or modify ``W`` as built by
:func:`bordered`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .expr import FLOAT, EvalContext, EvalMode, Point, RationalExpr
from .linalg import determinant, determinant_derivative, hadamard_bound, symbolic_determinant
from .netcore import NetError, NetState, SeedRecord

__all__ = [
    "PartitionError",
    "SingularNetError",
    "Partition",
    "SymMatrix",
    "wronski_block",
    "multi_wronskian",
    "bordered",
    "closed_form",
    "TransformedNet",
    "RatioEvaluator",
    "SINGULAR_RTOL",
]

# |det W| below this fraction of its Hadamard bound counts as singular in float mode.
SINGULAR_RTOL = 1e-12


class PartitionError(NetError):
    """Partition inconsistent with the seeds or directions."""


class SingularNetError(ArithmeticError):
    """The multi-Wronskian determinant vanishes at the evaluation point."""

    def __init__(self, point, detail: str = ""):
        self.point = point
        super().__init__(f"multi-Wronskian is singular at {tuple(point)}{': ' + detail if detail else ''}")


@dataclass(frozen=True)
class Partition:
    m: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.m)
        if not m:
            raise PartitionError("partition needs at least one direction")
        if any(v < 1 for v in m):
            raise PartitionError(f"every block size must be >= 1, got {m}")
        object.__setattr__(self, "m", m)

    @property
    def M(self) -> int:
        return sum(self.m)

    @property
    def N(self) -> int:
        return len(self.m)

    def size(self, j: int) -> int:
        return self.m[j - 1]

    def offset(self, j: int) -> int:
        """Row index where block ``j`` starts."""
        return sum(self.m[: j - 1])

    def last_row(self, j: int) -> int:
        return self.offset(j) + self.m[j - 1] - 1


class SymMatrix:
    """Rectangular matrix of expressions."""

    def __init__(self, rows: Sequence[Sequence[RationalExpr]]):
        self.rows = tuple(tuple(r) for r in rows)
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        self._deriv: dict = {}

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, idx):
        r, c = idx
        return self.rows[r][c]

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a.equals(b) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    __hash__ = None

    def derivative(self, k: int, cache: dict | None = None) -> "SymMatrix":
        hit = self._deriv.get(k)
        if hit is not None:
            return hit
        rows = []
        for row in self.rows:
            out = []
            for e in row:
                if cache is None:
                    out.append(e.derivative(k))
                    continue
                key = (id(e), k)
                got = cache.get(key)
                if got is None or got[0] is not e:
                    got = (e, e.derivative(k))
                    cache[key] = got
                out.append(got[1])
            rows.append(out)
        d = SymMatrix(rows)
        self._deriv[k] = d
        return d

    def values(self, ctx: EvalContext) -> list[list]:
        return [[ctx.value(e) for e in row] for row in self.rows]

    def evaluate(self, point, mode: EvalMode = FLOAT) -> list[list]:
        return self.values(EvalContext(point, mode))

    def det(self) -> RationalExpr:
        """Symbolic determinant by cofactor expansion."""
        n, m = self.shape
        if n != m:
            raise ValueError(f"determinant needs a square matrix, got {self.shape}")
        polys = all(e.den.is_one() for row in self.rows for e in row)
        if polys:
            return RationalExpr(symbolic_determinant([[e.num for e in row] for row in self.rows]))
        return symbolic_determinant(self.rows)


def _seed_xi(seed) -> tuple:
    return seed.xi if isinstance(seed, SeedRecord) else tuple(seed)


def _seed_omega(seed) -> RationalExpr:
    if not isinstance(seed, SeedRecord):
        raise TypeError("potentials need SeedRecord inputs")
    return seed.omega


def _derivs(e: RationalExpr, j: int, n: int) -> list[RationalExpr]:
    out = [e]
    for _ in range(n - 1):
        out.append(out[-1].derivative(j))
    return out


def wronski_block(seeds: Sequence, j: int, n: int) -> SymMatrix:
    """``n x M`` matrix with entry ``(r, a) = d_j^r xi^a_j``."""
    if n < 1:
        raise PartitionError(f"a Wronskian block needs at least one row, got {n}")
    cols = [_derivs(_seed_xi(s)[j - 1], j, n) for s in seeds]
    return SymMatrix([[cols[a][r] for a in range(len(seeds))] for r in range(n)])


def _check(seeds: Sequence, p: Partition):
    if p.M != len(seeds):
        raise PartitionError(f"partition sums to {p.M} but {len(seeds)} seeds were given")
    for s in seeds:
        if len(_seed_xi(s)) != p.N:
            raise PartitionError(f"partition has {p.N} blocks but seeds have {len(_seed_xi(s))} components")


def multi_wronskian(seeds: Sequence, p: Partition) -> SymMatrix:
    """Stack of the blocks ``W_1(m_1), ..., W_N(m_N)``."""
    _check(seeds, p)
    rows = []
    for j in range(1, p.N + 1):
        rows.extend(wronski_block(seeds, j, p.size(j)).rows)
    return SymMatrix(rows)


def _top_row(seeds, p: Partition, i: int) -> list[RationalExpr]:
    # d_i^{m_i} xi_i across seeds
    out = []
    for s in seeds:
        e = _seed_xi(s)[i - 1]
        for _ in range(p.size(i)):
            e = e.derivative(i)
        out.append(e)
    return out


def _border_column(net: NetState, p: Partition, l: int) -> list[RationalExpr]:
    col = []
    for k in range(1, p.N + 1):
        col.extend(_derivs(net.X[k - 1][l - 1], k, p.size(k)))
    return col


def bordered(kind: str, indices: tuple, seeds: Sequence, p: Partition, net: NetState | None = None,
             W: SymMatrix | None = None) -> SymMatrix:
    """Numerator matrices of the determinant formulas.

    ``kind`` is one of:

    * ``"X"`` with ``(i, l)``: ``W`` bordered by the column of ``d_k^r X_k^l``
      runs and the row ``d_i^{m_i} xi_i`` with corner ``d_i^{m_i} X_i^l``;
    * ``"H"`` with ``(i,)``: last row of block ``i`` replaced by the potentials;
    * ``"beta"`` with ``(i, j)``: last row of block ``j`` replaced by ``d_i^{m_i} xi_i``;
    * ``"x"`` with ``(l,)``: ``W`` bordered by the same column as ``"X"``,
      the potentials row and corner ``x^l``.
    """
    if W is None:
        W = multi_wronskian(seeds, p)
    N = p.N

    def need(i):
        if not 1 <= i <= N:
            raise PartitionError(f"direction {i} out of range 1..{N}")

    def need_net(l):
        if net is None:
            raise ValueError(f"{kind!r} matrices need the background net")
        if not 1 <= l <= net.P:
            raise PartitionError(f"component {l} out of range 1..{net.P}")

    rows = [list(r) for r in W.rows]
    if kind == "X":
        i, l = indices
        need(i)
        need_net(l)
        col = _border_column(net, p, l)
        corner = net.X[i - 1][l - 1]
        for _ in range(p.size(i)):
            corner = corner.derivative(i)
        out = [r + [c] for r, c in zip(rows, col)]
        out.append(_top_row(seeds, p, i) + [corner])
        return SymMatrix(out)
    if kind == "x":
        (l,) = indices
        need_net(l)
        col = _border_column(net, p, l)
        out = [r + [c] for r, c in zip(rows, col)]
        out.append([_seed_omega(s) for s in seeds] + [net.x[l - 1]])
        return SymMatrix(out)
    if kind == "H":
        (i,) = indices
        need(i)
        rows[p.last_row(i)] = [_seed_omega(s) for s in seeds]
        return SymMatrix(rows)
    if kind == "beta":
        i, j = indices
        need(i)
        need(j)
        if i == j:
            raise PartitionError("rotation coefficients have no diagonal entries")
        rows[p.last_row(j)] = _top_row(seeds, p, i)
        return SymMatrix(rows)
    raise ValueError(f"unknown bordered matrix kind {kind!r}")


_SIGN = {"X": 1, "H": -1, "beta": -1, "x": 1}


class RatioEvaluator:
    """Evaluates ``sign * |A| / |W|`` at a point."""

    def __init__(self, net: "TransformedNet", key: tuple):
        self.net = net
        self.key = key

    def __call__(self, point, mode: EvalMode = FLOAT):
        return self.net.evaluate(point, mode).value(self.key)


@dataclass
class NetValues:
    """Values (and optionally first derivatives) of a transformed net at a point."""

    point: tuple
    mode: EvalMode
    det_W: object
    values: dict = field(default_factory=dict)
    derivs: dict = field(default_factory=dict)  # (key, k) -> (value, magnitude)

    def value(self, key: tuple):
        return self.values[key]

    def deriv(self, key: tuple, k: int):
        return self.derivs[(key, k)][0]

    def deriv_scale(self, key: tuple, k: int):
        return self.derivs[(key, k)][1]

    def beta(self, i, j):
        return self.values[("beta", i, j)]

    def X(self, i, l):
        return self.values[("X", i, l)]

    def H(self, i):
        return self.values[("H", i)]

    def x(self, l):
        return self.values[("x", l)]


class TransformedNet:
    """Closed-form transformed net; every quantity is a determinant ratio."""

    def __init__(self, base: NetState, p: Partition):
        if p.N != base.N:
            raise PartitionError(f"partition has {p.N} blocks for an N={base.N} net")
        if p.M != len(base.seeds):
            raise PartitionError(f"partition sums to {p.M} but the net carries {len(base.seeds)} seeds")
        self.base = base
        self.partition = p
        self.N, self.P = base.N, base.P
        seeds = base.seeds
        self.W = multi_wronskian(seeds, p)
        self.matrices: dict = {}
        dirs = range(1, self.N + 1)
        for i in dirs:
            for l in range(1, self.P + 1):
                self.matrices[("X", i, l)] = bordered("X", (i, l), seeds, p, base, self.W)
        for i in dirs:
            self.matrices[("H", i)] = bordered("H", (i,), seeds, p, base, self.W)
        for i in dirs:
            for j in dirs:
                if i != j:
                    self.matrices[("beta", i, j)] = bordered("beta", (i, j), seeds, p, base, self.W)
        for l in range(1, self.P + 1):
            self.matrices[("x", l)] = bordered("x", (l,), seeds, p, base, self.W)
        self._dcache: dict = {}
        self._sym: dict = {}

    @property
    def M(self) -> int:
        return self.partition.M

    def keys(self):
        return list(self.matrices)

    def quantity(self, kind: str, *idx) -> RatioEvaluator:
        key = (kind, *idx)
        if key not in self.matrices:
            raise KeyError(key)
        return RatioEvaluator(self, key)

    # numeric evaluation

    def _det(self, vals, exact):
        return determinant(vals, exact)

    def _singular(self, Wv, dW, exact, point):
        if exact:
            if dW == 0:
                raise SingularNetError(point)
            return
        bound = hadamard_bound(Wv)
        if not np.isfinite(dW) or abs(dW) <= SINGULAR_RTOL * bound:
            raise SingularNetError(point, f"|det W| = {abs(dW):.3g}, Hadamard bound {bound:.3g}")

    def det_W(self, point, mode: EvalMode = FLOAT):
        ctx = EvalContext(point, mode)
        return self._det(self.W.values(ctx), mode.exact)

    def evaluate(self, point, mode: EvalMode = FLOAT, keys=None, derivatives: Sequence[int] = ()) -> NetValues:
        """Evaluate the requested quantities (all by default) at ``point``.

        ``derivatives`` lists directions ``k`` for which ``d_k`` of each
        quantity is also computed, by differentiating determinants row by row.
        Raises :class:`SingularNetError` where ``|W|`` vanishes.
        """
        point = Point(point)
        exact = mode.exact
        ctx = EvalContext(point, mode)
        Wv = self.W.values(ctx)
        dW = self._det(Wv, exact)
        self._singular(Wv, dW, exact, point)
        out = NetValues(tuple(point), mode, dW)
        dWk = {}
        for k in derivatives:
            dWk[k] = determinant_derivative(Wv, self.W.derivative(k, self._dcache).values(ctx), exact)
        for key in keys or self.matrices:
            A = self.matrices[key]
            sign = _SIGN[key[0]]
            Av = A.values(ctx)
            dA = self._det(Av, exact)
            out.values[key] = sign * dA / dW
            for k in derivatives:
                ddA, magA = determinant_derivative(Av, A.derivative(k, self._dcache).values(ctx), exact)
                ddW, magW = dWk[k]
                d = sign * (dW * ddA - dA * ddW) / (dW * dW)
                mag = (abs(dW) * magA + abs(dA) * magW) / (dW * dW)
                out.derivs[(key, k)] = (d, mag)
        return out

    # symbolic forms

    def symbolic_det(self, key) -> RationalExpr:
        """Symbolic determinant of ``W`` (key ``"W"``) or of a numerator matrix."""
        hit = self._sym.get(key)
        if hit is None:
            mat = self.W if key == "W" else self.matrices[key]
            hit = mat.det()
            self._sym[key] = hit
        return hit

    def symbolic(self, max_M: int = 4) -> NetState:
        """The transformed net as exact expressions (a seedless NetState).

        Determinant expansion grows factorially, so this is refused above
        ``max_M`` seeds.
        """
        if self.M > max_M:
            raise ValueError(f"symbolic form limited to M <= {max_M}, got M = {self.M}")
        W = self.symbolic_det("W")
        if W.is_zero():
            raise SingularNetError((), "multi-Wronskian vanishes identically")

        def ratio(key):
            return self.symbolic_det(key) * _SIGN[key[0]] / W

        dirs = range(1, self.N + 1)
        beta = {(i, j): ratio(("beta", i, j)) for i in dirs for j in dirs if i != j}
        X = tuple(tuple(ratio(("X", i, l)) for l in range(1, self.P + 1)) for i in dirs)
        H = tuple(ratio(("H", i)) for i in dirs)
        x = tuple(ratio(("x", l)) for l in range(1, self.P + 1))
        return NetState(N=self.N, P=self.P, beta=beta, X=X, H=H, x=x)


def closed_form(s0: NetState, p: Partition | Sequence[int]) -> TransformedNet:
    """Closed-form transform of ``s0`` by all of its seeds, per partition ``p``."""
    if not isinstance(p, Partition):
        p = Partition(tuple(p))
    return TransformedNet(s0, p)
