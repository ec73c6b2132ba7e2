"""Conjugate-net state, the zero-background constructor, and residuals of the
defining equations.

Equations checked (all indices 1-based, ``i != j``)::

    d_k beta_ij = beta_ik beta_kj          (rotation coefficients)
    d_i X_j     = beta_ji X_i              (tangent vectors, also seeds xi)
    d_i H_j     = beta_ij H_i              (Lame coefficients)
    d_i x       = X_i H_i                  (surface point)
    d_k Omega   = xi_k H_k                 (seed potential)

Every residual is returned as an expression so callers can decide between an
exact zero test and sampling.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping, Sequence

from .expr import ExpPoly, RationalExpr, as_rational_expr
from .parser import format_expr, parse_expr

__all__ = [
    "NetError",
    "BackgroundError",
    "SeedRecord",
    "NetState",
    "make_background",
    "residual_darboux",
    "residual_tangent",
    "residual_lame",
    "residual_point",
    "residual_seed",
    "residual_potential",
    "residual_laplace",
    "iter_residuals",
    "validate",
    "net_from_document",
    "dump_state",
    "load_document",
]


class NetError(ValueError):
    """Invalid net data or index usage."""


class BackgroundError(NetError):
    """Data not admissible for the zero background."""


@dataclass(frozen=True)
class SeedRecord:
    """One scalar solution ``xi`` of the tangent system with its potential."""

    label: str
    xi: tuple  # xi[j-1] is the component for direction j
    omega: RationalExpr

    def component(self, j: int) -> RationalExpr:
        return self.xi[j - 1]


@dataclass(frozen=True)
class NetState:
    N: int
    P: int
    beta: Mapping  # (i, j) -> RationalExpr, i != j
    X: tuple  # X[i-1][l-1]
    H: tuple  # H[i-1]
    x: tuple  # x[l-1]
    seeds: tuple = ()
    history: tuple = field(default=())  # (direction, label) of applied Levy steps

    def rotation(self, i: int, j: int) -> RationalExpr:
        if i == j:
            raise NetError("rotation coefficients have no diagonal entries")
        return self.beta[(i, j)]

    def tangent(self, i: int) -> tuple:
        return self.X[i - 1]

    def lame(self, i: int) -> RationalExpr:
        return self.H[i - 1]

    def seed(self, label: str) -> SeedRecord:
        for s in self.seeds:
            if s.label == label:
                return s
        raise NetError(f"no seed labelled {label!r}")

    @property
    def seed_labels(self) -> list[str]:
        return [s.label for s in self.seeds]

    @property
    def directions(self) -> range:
        return range(1, self.N + 1)


def _zero_beta(N: int) -> dict:
    zero = RationalExpr(ExpPoly())
    return {(i, j): zero for i in range(1, N + 1) for j in range(1, N + 1) if i != j}


def _background_entry(text, direction: int, what: str) -> ExpPoly:
    e = as_rational_expr(text)
    if not e.den.is_one():
        raise BackgroundError(f"{what} must be a sum of polynomial-exponential terms, not a quotient")
    foreign = e.num.directions() - {direction}
    if foreign:
        names = ", ".join(f"u{d}" for d in sorted(foreign))
        raise BackgroundError(f"{what} may depend only on u{direction}, found {names}")
    return e.num


def make_background(N: int, P: int, tangent_specs: Sequence[Sequence], lame_specs: Sequence,
                    seed_specs: Sequence = ()) -> NetState:
    """Zero-background net (all rotation coefficients vanish).

    ``tangent_specs[i-1]`` lists the P components of ``X_i``, ``lame_specs[i-1]``
    is ``H_i`` and each seed spec is ``(label, components)`` or a mapping with
    those keys.  On this background every entry must depend on its own
    variable only; the surface point and potentials are then integrated in
    closed form with zero integration constants.
    """
    if N < 1 or P < N:
        raise NetError(f"need 1 <= N <= P, got N={N}, P={P}")
    if len(tangent_specs) != N or any(len(t) != P for t in tangent_specs):
        raise NetError(f"tangents must be {N} vectors of length {P}")
    if len(lame_specs) != N:
        raise NetError(f"need {N} Lame coefficients")
    X = [[_background_entry(c, i, f"X_{i} component {l}") for l, c in enumerate(tangent_specs[i - 1], 1)]
         for i in range(1, N + 1)]
    H = [_background_entry(h, i, f"H_{i}") for i, h in enumerate(lame_specs, 1)]

    x = []
    for l in range(P):
        total = ExpPoly()
        for k in range(N):
            total = total + (X[k][l] * H[k]).antiderivative(k + 1)
        x.append(RationalExpr(total))

    seeds = []
    labels = set()
    for spec in seed_specs:
        if isinstance(spec, Mapping):
            label, comps = str(spec["label"]), spec["components"]
        else:
            label, comps = spec
            label = str(label)
        if label in labels:
            raise NetError(f"duplicate seed label {label!r}")
        labels.add(label)
        if len(comps) != N:
            raise NetError(f"seed {label!r} needs {N} components")
        xi = [_background_entry(c, j, f"seed {label} component {j}") for j, c in enumerate(comps, 1)]
        omega = ExpPoly()
        for k in range(N):
            omega = omega + (xi[k] * H[k]).antiderivative(k + 1)
        seeds.append(SeedRecord(label, tuple(RationalExpr(c) for c in xi), RationalExpr(omega)))

    return NetState(
        N=N,
        P=P,
        beta=_zero_beta(N),
        X=tuple(tuple(RationalExpr(c) for c in row) for row in X),
        H=tuple(RationalExpr(h) for h in H),
        x=tuple(x),
        seeds=tuple(seeds),
    )


# ---------------------------------------------------------------------------
# residuals


def _check(s: NetState, *idx):
    for i in idx:
        if not 1 <= i <= s.N:
            raise NetError(f"direction {i} out of range 1..{s.N}")
    if len(set(idx)) != len(idx):
        raise NetError(f"indices must be distinct, got {idx}")


def residual_darboux(s: NetState, i: int, j: int, k: int) -> RationalExpr:
    """``d_k beta_ij - beta_ik beta_kj``."""
    _check(s, i, j, k)
    return s.beta[(i, j)].derivative(k) - s.beta[(i, k)] * s.beta[(k, j)]


def _column_residual(s: NetState, column: Sequence, i: int, j: int) -> RationalExpr:
    # one scalar solution of d_i v_j = beta_ji v_i; shared by X and seeds
    return column[j - 1].derivative(i) - s.beta[(j, i)] * column[i - 1]


def residual_tangent(s: NetState, i: int, j: int) -> list[RationalExpr]:
    """``d_i X_j - beta_ji X_i`` componentwise."""
    _check(s, i, j)
    return [_column_residual(s, [s.X[n][l] for n in range(s.N)], i, j) for l in range(s.P)]


def residual_seed(s: NetState, seed: SeedRecord, i: int, j: int) -> RationalExpr:
    """``d_i xi_j - beta_ji xi_i``."""
    _check(s, i, j)
    return _column_residual(s, seed.xi, i, j)


def residual_lame(s: NetState, i: int, j: int) -> RationalExpr:
    """``d_i H_j - beta_ij H_i``."""
    _check(s, i, j)
    return s.H[j - 1].derivative(i) - s.beta[(i, j)] * s.H[i - 1]


def residual_point(s: NetState, i: int) -> list[RationalExpr]:
    """``d_i x - X_i H_i`` componentwise."""
    _check(s, i)
    return [s.x[l].derivative(i) - s.X[i - 1][l] * s.H[i - 1] for l in range(s.P)]


def residual_potential(s: NetState, seed: SeedRecord, k: int) -> RationalExpr:
    """``d_k Omega - xi_k H_k``."""
    _check(s, k)
    return seed.omega.derivative(k) - seed.xi[k - 1] * s.H[k - 1]


def residual_laplace(s: NetState, i: int, j: int) -> list[RationalExpr]:
    """Laplace form of the point equation, cleared of logarithms::

        H_i H_j d_i d_j x - H_j (d_j H_i) d_i x - H_i (d_i H_j) d_j x
    """
    _check(s, i, j)
    Hi, Hj = s.H[i - 1], s.H[j - 1]
    a = Hi * Hj
    b = Hj * Hi.derivative(j)
    c = Hi * Hj.derivative(i)
    out = []
    for xl in s.x:
        dxi = xl.derivative(i)
        dxj = xl.derivative(j)
        out.append(a * dxi.derivative(j) - b * dxi - c * dxj)
    return out


def iter_residuals(s: NetState, seeds: bool = True) -> Iterator[tuple[str, tuple, RationalExpr]]:
    """Yield ``(family, indices, residual)`` for every defining equation."""
    dirs = list(s.directions)
    for i, j, k in itertools.permutations(dirs, 3):
        yield "darboux", (i, j, k), residual_darboux(s, i, j, k)
    for i, j in itertools.permutations(dirs, 2):
        for l, r in enumerate(residual_tangent(s, i, j), 1):
            yield "tangent", (i, j, l), r
    for i, j in itertools.permutations(dirs, 2):
        yield "lame", (i, j), residual_lame(s, i, j)
    for i in dirs:
        for l, r in enumerate(residual_point(s, i), 1):
            yield "point", (i, l), r
    if seeds:
        for sd in s.seeds:
            for i, j in itertools.permutations(dirs, 2):
                yield f"seed:{sd.label}", (i, j), residual_seed(s, sd, i, j)
            for k in dirs:
                yield f"potential:{sd.label}", (k,), residual_potential(s, sd, k)


def validate(s: NetState) -> NetState:
    """Raise :class:`NetError` unless every residual is exactly zero."""
    for family, idx, r in iter_residuals(s):
        if not r.is_zero():
            raise NetError(f"{family} residual {idx} does not vanish")
    return s


# ---------------------------------------------------------------------------
# documents


def load_document(path) -> dict:
    with open(Path(path)) as fh:
        return json.load(fh)


def _parse(text) -> RationalExpr:
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        text = str(text)
    return parse_expr(text)


def net_from_document(doc: Mapping) -> NetState:
    """Build a NetState from a net specification or a full state dump.

    A specification (keys ``N``, ``P``, ``tangents``, ``lame``, ``seeds``)
    goes through :func:`make_background`.  A dump additionally carries
    ``beta`` and ``point`` and is taken as given.
    """
    try:
        N, P = int(doc["N"]), int(doc["P"])
        tangents = [[_parse(c) for c in row] for row in doc["tangents"]]
        lame = [_parse(h) for h in doc["lame"]]
        seed_docs = doc.get("seeds", [])
    except KeyError as exc:
        raise NetError(f"net document missing key {exc.args[0]!r}") from None
    if "beta" not in doc:
        seeds = [(sd["label"], [_parse(c) for c in sd["components"]]) for sd in seed_docs]
        return make_background(N, P, tangents, lame, seeds)

    beta = {}
    for key, text in doc["beta"].items():
        i, j = (int(t) for t in key.split(","))
        beta[(i, j)] = _parse(text)
    expected = {(i, j) for i in range(1, N + 1) for j in range(1, N + 1) if i != j}
    if set(beta) != expected:
        raise NetError("beta must list every off-diagonal pair exactly once")
    seeds = tuple(
        SeedRecord(str(sd["label"]), tuple(_parse(c) for c in sd["components"]), _parse(sd["omega"]))
        for sd in seed_docs
    )
    return NetState(
        N=N,
        P=P,
        beta=beta,
        X=tuple(tuple(row) for row in tangents),
        H=tuple(lame),
        x=tuple(_parse(c) for c in doc["point"]),
        seeds=seeds,
        history=tuple((int(d), str(lab)) for d, lab in doc.get("history", [])),
    )


def dump_state(s: NetState) -> dict:
    """Serialize every expression of the state as re-parseable text."""
    return {
        "N": s.N,
        "P": s.P,
        "tangents": [[format_expr(c) for c in row] for row in s.X],
        "lame": [format_expr(h) for h in s.H],
        "point": [format_expr(c) for c in s.x],
        "beta": {f"{i},{j}": format_expr(b) for (i, j), b in sorted(s.beta.items())},
        "seeds": [
            {"label": sd.label, "components": [format_expr(c) for c in sd.xi], "omega": format_expr(sd.omega)}
            for sd in s.seeds
        ],
        "history": [[d, lab] for d, lab in s.history],
    }
