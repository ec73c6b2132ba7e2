"""Determinants: pivoted LU in floating point, fraction-free Bareiss over the
rationals, and cofactor expansion for symbolic entries."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

__all__ = [
    "lu_determinant",
    "bareiss_determinant",
    "symbolic_determinant",
    "determinant",
    "determinant_derivative",
    "hadamard_bound",
]


def lu_determinant(a) -> tuple[float, float]:
    """Determinant by partially pivoted elimination.

    Returns ``(det, growth)`` where ``growth`` is the largest magnitude reached
    in the eliminated matrix divided by the largest input magnitude.
    """
    u = np.array(a, dtype=float)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"determinant needs a square matrix, got shape {u.shape}")
    n = u.shape[0]
    if n == 0:
        return 1.0, 1.0
    scale = float(np.max(np.abs(u))) or 1.0
    peak = scale
    det = 1.0
    for c in range(n):
        p = c + int(np.argmax(np.abs(u[c:, c])))
        if u[p, c] == 0.0:
            return 0.0, peak / scale
        if p != c:
            u[[c, p]] = u[[p, c]]
            det = -det
        det *= u[c, c]
        if c + 1 < n:
            f = u[c + 1:, c] / u[c, c]
            u[c + 1:, c:] -= np.outer(f, u[c, c:])
            peak = max(peak, float(np.max(np.abs(u[c + 1:, c + 1:]))))
    return float(det), peak / scale


def bareiss_determinant(a: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a rational matrix via fraction-free elimination."""
    rows = [list(r) for r in a]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    # clear denominators row by row, remembering the scale
    scale = Fraction(1)
    m = []
    for r in rows:
        r = [Fraction(x) for x in r]
        lcm = reduce(lambda x, y: x * y // math.gcd(x, y), (x.denominator for x in r), 1)
        m.append([x.numerator * (lcm // x.denominator) for x in r])
        scale *= lcm
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for p in range(k + 1, n):
                if m[p][k] != 0:
                    m[k], m[p] = m[p], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        piv = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a_ik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (piv * ri[j] - a_ik * rk[j]) // prev
            ri[k] = 0
        prev = piv
    return Fraction(sign * m[n - 1][n - 1]) / scale


def symbolic_determinant(rows: Sequence[Sequence]):
    """Determinant of a matrix over any commutative ring, by Laplace expansion
    along the first row with minors memoised on their column sets."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    memo: dict = {}

    def minor(r: int, cols: tuple):
        # determinant of rows r..n-1 restricted to cols
        if r == n - 1:
            return rows[r][cols[0]]
        hit = memo.get(cols)
        if hit is not None:
            return hit
        total = None
        for pos, c in enumerate(cols):
            entry = rows[r][c]
            if _is_zero(entry):
                continue
            term = entry * minor(r + 1, cols[:pos] + cols[pos + 1:])
            if pos % 2:
                term = -term
            total = term if total is None else total + term
        if total is None:
            total = rows[r][cols[0]] * 0
        memo[cols] = total
        return total

    return minor(0, tuple(range(n)))


def _is_zero(x) -> bool:
    z = getattr(x, "is_zero", None)
    if z is not None:
        return z()
    return x == 0


def determinant(a, exact: bool = False):
    """Determinant of an evaluated matrix: exact (Bareiss) or float (LU)."""
    if exact:
        return bareiss_determinant(a)
    return lu_determinant(a)[0]


def determinant_derivative(values, dvalues, exact: bool = False):
    """``d det(A)`` given ``A`` and the entrywise derivative ``dA`` (Jacobi's rule
    applied row by row).  Also returns the sum of magnitudes of the row terms,
    which bounds the cancellation in the result."""
    n = len(values)
    total = Fraction(0) if exact else 0.0
    mag = Fraction(0) if exact else 0.0
    for r in range(n):
        if all(x == 0 for x in dvalues[r]):
            continue
        rows = [list(row) for row in values]
        rows[r] = list(dvalues[r])
        d = determinant(rows, exact)
        total += d
        mag += abs(d)
    return total, mag


def hadamard_bound(a) -> float:
    """Product of row norms; ``|det a|`` never exceeds it."""
    arr = np.array([[float(x) for x in row] for row in a], dtype=float)
    if arr.size == 0:
        return 1.0
    return float(np.prod(np.linalg.norm(arr, axis=1)))
