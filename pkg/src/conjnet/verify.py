"""Verification: bilinear determinant identities, equivalence of composed Levy
steps with the closed form, and residual suites for whole nets."""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .expr import FLOAT, EvalContext, EvalMode, Point, PoleError
from .levy import levy_sequence
from .netcore import NetError, NetState, iter_residuals
from .wronski import Partition, SingularNetError, TransformedNet, closed_form

__all__ = [
    "Check",
    "Report",
    "OrderError",
    "sample_points",
    "sample_exact_points",
    "check_bilinear_X",
    "check_bilinear_H",
    "oracle_equivalence",
    "full_residual_suite",
    "FD_STEP",
]

FD_STEP = 1e-4


class OrderError(NetError):
    """Step sequence inconsistent with the partition or the available seeds."""


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v.numerator)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    if isinstance(v, EvalMode):
        return v.to_json()
    return v


@dataclass
class Check:
    name: str
    indices: tuple
    point: tuple | None
    mode: str
    value: object  # residual or deviation
    status: str  # "pass" | "fail" | "singular"
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        d = asdict(self)
        return {k: _jsonable(v) if k != "detail" else {a: _jsonable(b) for a, b in v.items()}
                for k, v in d.items()}


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, check: Check):
        self.checks.append(check)

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def singular(self) -> list[Check]:
        return [c for c in self.checks if c.status == "singular"]

    @property
    def passed(self) -> bool:
        return not self.failures

    def counts(self) -> dict:
        return dict(Counter(c.status for c in self.checks))

    def to_json(self) -> dict:
        checks = sorted(self.checks, key=lambda c: (c.name, json.dumps(_jsonable(c.indices)),
                                                    json.dumps(_jsonable(c.point))))
        return {
            "title": self.title,
            "meta": {k: _jsonable(v) for k, v in self.meta.items()},
            "counts": self.counts(),
            "passed": self.passed,
            "checks": [c.to_json() for c in checks],
        }

    def write(self, path):
        Path(path).write_text(json.dumps(self.to_json(), indent=2))


# ---------------------------------------------------------------------------
# sampling


def sample_points(N: int, n: int, rng_seed: int = 0, low: float = -1.0, high: float = 1.0) -> list[Point]:
    """``n`` float points uniform in ``[low, high]^N`` from a seeded generator."""
    rng = np.random.default_rng(rng_seed)
    return [Point(float(v) for v in row) for row in rng.uniform(low, high, size=(n, N))]


def sample_exact_points(N: int, n: int, rng_seed: int = 0) -> list[tuple[Point, EvalMode]]:
    """``n`` exact samples: rational coordinates in ``[-1, 1]`` and rational
    stand-ins for ``exp(u_j)`` in ``[1/4, 4]``."""
    rng = np.random.default_rng(rng_seed)
    out = []
    for _ in range(n):
        coords = Point(Fraction(int(rng.integers(-12, 13)), 12) for _ in range(N))
        bases = [Fraction(int(rng.integers(1, 17)), 4) for _ in range(N)]
        out.append((coords, EvalMode.exact_with(bases)))
    return out


def _samples(pts, mode: EvalMode):
    for p in pts:
        if isinstance(p, tuple) and len(p) == 2 and isinstance(p[1], EvalMode):
            yield Point(p[0]), p[1]
        else:
            yield Point(p), mode


def _mode_name(mode: EvalMode) -> str:
    return "exact" if mode.exact else "float"


# ---------------------------------------------------------------------------
# bilinear identities


def _net(s0, p) -> TransformedNet:
    if isinstance(s0, TransformedNet):
        return s0
    return closed_form(s0, p)


def _fd_derivative(f, pt: Point, k: int, h: float):
    """Central difference in ``u_k`` with one Richardson step.

    Returns ``(estimate, gap)`` where ``gap`` is the change from the finer
    central difference to the extrapolated value.
    """
    def central(step):
        up = list(pt)
        dn = list(pt)
        up[k - 1] += step
        dn[k - 1] -= step
        return (f(Point(up)) - f(Point(dn))) / (2 * step)

    coarse = central(h)
    fine = central(h / 2)
    rich = (4 * fine - coarse) / 3
    return rich, abs(rich - fine)


def _bilinear(net: TransformedNet, name, indices, a_key, c_key, d_key, pt, method, h, tol):
    """Residual of ``|W| d_k|A| - |A| d_k|W| + |C||D|`` with ``k = indices[1]``;
    the keys name the matrices A, C, D."""
    k = indices[1]
    pt = Point(pt)
    if method == "symbolic":
        W = net.symbolic_det("W")
        A = net.symbolic_det(a_key)
        C = net.symbolic_det(c_key)
        D = net.symbolic_det(d_key)
        res = W * A.derivative(k) - A * W.derivative(k) + C * D
        zero = res.is_zero()
        value = 0.0 if zero else float(EvalContext(pt).value(res))
        return Check(name, indices, tuple(pt), "symbolic", value, "pass" if zero else "fail",
                     {"method": "symbolic"})
    if method == "fd":
        def det_of(key):
            mat = net.W if key == "W" else net.matrices[key]
            return lambda q: net._det(mat.evaluate(q, FLOAT), False)

        vals = net.evaluate(pt, FLOAT, keys=[a_key, c_key, d_key])
        W = vals.det_W
        A = det_of(a_key)(pt)
        C = det_of(c_key)(pt)
        D = det_of(d_key)(pt)
        dA, gapA = _fd_derivative(det_of(a_key), pt, k, h)
        dW, gapW = _fd_derivative(det_of("W"), pt, k, h)
        t1, t2, t3 = W * dA, A * dW, C * D
        res = t1 - t2 + t3
        scale = max(abs(t1), abs(t2), abs(t3)) or 1.0
        rel = abs(res) / scale
        return Check(name, indices, tuple(pt), "float", rel, "pass" if rel < tol else "fail",
                     {"method": "fd", "h": h, "richardson_gap": max(abs(W) * gapA, abs(A) * gapW) / scale})
    raise ValueError(f"unknown method {method!r}; use 'symbolic' or 'fd'")


def check_bilinear_X(s0, p, i: int, k: int, l: int, pt, method: str = "symbolic",
                     h: float = FD_STEP, tol: float = 1e-7) -> Check:
    """``|W| d_k|XX_i^l| - |XX_i^l| d_k|W| + |XX_k^l| |W_ik|`` at ``pt``.

    ``method="symbolic"`` expands the determinants exactly (practical for
    ``M <= 4``); ``method="fd"`` uses central differences with one Richardson
    step and reports the residual relative to the largest term.
    """
    if i == k:
        raise ValueError("the bilinear identity needs i != k")
    net = _net(s0, p)
    return _bilinear(net, "bilinear_X", (i, k, l), ("X", i, l), ("X", k, l), ("beta", i, k), pt, method, h, tol)


def check_bilinear_H(s0, p, i: int, k: int, pt, method: str = "symbolic",
                     h: float = FD_STEP, tol: float = 1e-7) -> Check:
    """``|W| d_k|HH_i| - |HH_i| d_k|W| + |W_ki| |HH_k|`` at ``pt``."""
    if i == k:
        raise ValueError("the bilinear identity needs i != k")
    net = _net(s0, p)
    return _bilinear(net, "bilinear_H", (i, k), ("H", i), ("beta", k, i), ("H", k), pt, method, h, tol)


def bilinear_suite(s0, p, pts, method: str = "symbolic", h: float = FD_STEP, tol: float = 1e-7) -> Report:
    """Both identities for every valid ``(i, k, l)`` at each point."""
    net = _net(s0, p)
    report = Report("bilinear", meta={"method": method, "partition": list(net.partition.m)})
    dirs = range(1, net.N + 1)
    for pt in pts:
        try:
            net.evaluate(pt, FLOAT, keys=[])
        except SingularNetError:
            report.add(Check("bilinear", (), tuple(pt), "float", None, "singular"))
            continue
        for i, k in itertools.permutations(dirs, 2):
            for l in range(1, net.P + 1):
                report.add(check_bilinear_X(net, None, i, k, l, pt, method, h, tol))
            report.add(check_bilinear_H(net, None, i, k, pt, method, h, tol))
    return report


# ---------------------------------------------------------------------------
# oracle equivalence


def _check_order(s0: NetState, p: Partition, order) -> list[tuple[int, str]]:
    order = [(int(d), str(lab)) for d, lab in order]
    labels = [lab for _, lab in order]
    if len(set(labels)) != len(labels):
        raise OrderError("each step must consume a distinct seed")
    missing = set(labels) - set(s0.seed_labels)
    if missing:
        raise OrderError(f"unknown seeds {sorted(missing)}")
    if len(order) != p.M or len(s0.seeds) != p.M:
        raise OrderError(f"partition needs {p.M} steps over {p.M} seeds")
    counts = Counter(d for d, _ in order)
    for j in range(1, p.N + 1):
        if counts.get(j, 0) != p.size(j):
            raise OrderError(f"direction {j} is used {counts.get(j, 0)} times, partition says {p.size(j)}")
    return order


def default_order(s0: NetState, p: Partition) -> list[tuple[int, str]]:
    """Seeds taken in order; direction 1 first ``m_1`` times, then direction 2, ..."""
    dirs = [j for j in range(1, p.N + 1) for _ in range(p.size(j))]
    return list(zip(dirs, s0.seed_labels))


QUANTITIES = ("beta", "X", "H", "x")


def _state_values(s: NetState, ctx: EvalContext) -> dict:
    out = {}
    for (i, j), b in sorted(s.beta.items()):
        out[("beta", i, j)] = ctx.value(b)
    for i in range(1, s.N + 1):
        for l in range(1, s.P + 1):
            out[("X", i, l)] = ctx.value(s.X[i - 1][l - 1])
    for i in range(1, s.N + 1):
        out[("H", i)] = ctx.value(s.H[i - 1])
    for l in range(1, s.P + 1):
        out[("x", l)] = ctx.value(s.x[l - 1])
    return out


def oracle_equivalence(s0: NetState, p, order=None, pts: Iterable = (), mode: EvalMode = FLOAT,
                       tol: float = 1e-8) -> Report:
    """Compare composed Levy steps against the closed form at ``pts``.

    One check per quantity family and point, carrying the largest deviation
    (exact difference in exact mode, relative difference in float mode).
    ``report.meta["first_divergent"]`` names the first quantity, in the order
    beta, X, H, x, that deviates.
    """
    if not isinstance(p, Partition):
        p = Partition(tuple(p))
    order = _check_order(s0, p, default_order(s0, p) if order is None else order)
    composed = levy_sequence(s0, order)
    net = closed_form(s0, p)
    report = Report("oracle_equivalence", meta={"partition": list(p.m), "order": order,
                                                 "first_divergent": None})
    first = None
    for pt, md in _samples(pts, mode):
        try:
            cf = net.evaluate(pt, md)
            lv = _state_values(composed, EvalContext(pt, md))
        except (SingularNetError, PoleError):
            report.add(Check("oracle", (), tuple(pt), _mode_name(md), None, "singular"))
            continue
        for q in QUANTITIES:
            keys = [key for key in lv if key[0] == q]
            if md.exact:
                devs = {key: abs(lv[key] - cf.values[key]) for key in keys}
            else:
                floor = 1e-12 * max((abs(lv[key]) for key in keys), default=0.0)
                devs = {}
                for key in keys:
                    a, b = lv[key], cf.values[key]
                    scale = max(abs(a), abs(b), floor)
                    devs[key] = abs(a - b) / scale if scale else 0.0
            worst = max(devs, key=devs.get)
            dev = devs[worst]
            ok = dev == 0 if md.exact else dev < tol
            if not ok and first is None:
                first = worst
            report.add(Check(f"oracle:{q}", worst[1:], tuple(pt), _mode_name(md), dev,
                             "pass" if ok else "fail", {"quantity": q}))
    report.meta["first_divergent"] = list(first) if first else None
    return report


# ---------------------------------------------------------------------------
# residual suites


def _transformed_residuals(net: TransformedNet, pt, md: EvalMode):
    """Yield ``(family, indices, residual, scale)`` at one point."""
    dirs = list(range(1, net.N + 1))
    v = net.evaluate(pt, md, derivatives=dirs)
    for i, j, k in itertools.permutations(dirs, 3):
        lhs = v.deriv(("beta", i, j), k)
        rhs = v.beta(i, k) * v.beta(k, j)
        yield "darboux", (i, j, k), lhs - rhs, max(v.deriv_scale(("beta", i, j), k), abs(rhs))
    for i, j in itertools.permutations(dirs, 2):
        for l in range(1, net.P + 1):
            lhs = v.deriv(("X", j, l), i)
            rhs = v.beta(j, i) * v.X(i, l)
            yield "tangent", (i, j, l), lhs - rhs, max(v.deriv_scale(("X", j, l), i), abs(rhs))
    for i, j in itertools.permutations(dirs, 2):
        lhs = v.deriv(("H", j), i)
        rhs = v.beta(i, j) * v.H(i)
        yield "lame", (i, j), lhs - rhs, max(v.deriv_scale(("H", j), i), abs(rhs))
    for i in dirs:
        for l in range(1, net.P + 1):
            lhs = v.deriv(("x", l), i)
            rhs = v.X(i, l) * v.H(i)
            yield "point", (i, l), lhs - rhs, max(v.deriv_scale(("x", l), i), abs(rhs))


def full_residual_suite(net, pts: Iterable = (), mode: EvalMode = FLOAT, tol: float = 1e-8) -> Report:
    """Tabulate every residual family.

    A :class:`NetState` is checked symbolically (exact zero test, one check
    per equation).  A :class:`TransformedNet` is checked at each point: exactly
    in exact mode, and relative to the size of the terms in float mode.
    Singular points are reported with status ``"singular"``.
    """
    report = Report("residuals")
    if isinstance(net, NetState):
        for family, idx, r in iter_residuals(net):
            zero = r.is_zero()
            report.add(Check(family, idx, None, "symbolic", 0 if zero else None, "pass" if zero else "fail"))
        return report
    for pt, md in _samples(pts, mode):
        try:
            rows = list(_transformed_residuals(net, pt, md))
        except SingularNetError:
            report.add(Check("residuals", (), tuple(pt), _mode_name(md), None, "singular"))
            continue
        for family, idx, res, scale in rows:
            if md.exact:
                ok = res == 0
                value = res
            else:
                value = abs(res) / scale if scale else abs(res)
                ok = value < tol
            report.add(Check(family, idx, tuple(pt), _mode_name(md), value, "pass" if ok else "fail"))
    return report


def nonsingular_points(net: TransformedNet, n: int, rng_seed: int = 0, exact: bool = False,
                       max_draws: int = 1000) -> list:
    """Draw samples until ``n`` of them avoid zeros of ``|W|``."""
    out = []
    draws = 0
    seed = rng_seed
    while len(out) < n and draws < max_draws:
        batch = sample_exact_points(net.N, n, seed) if exact else sample_points(net.N, n, seed)
        for item in batch:
            draws += 1
            pt, md = item if exact else (item, FLOAT)
            try:
                net.evaluate(pt, md, keys=[])
            except (SingularNetError, PoleError):
                continue
            out.append(item)
            if len(out) == n:
                break
        seed += 1
    if len(out) < n:
        raise SingularNetError((), f"found only {len(out)} nonsingular points in {draws} draws")
    return out
