"""Elementary Levy transformation of a conjugate net in one coordinate direction."""

from __future__ import annotations

from typing import Iterable, Sequence

from .expr import RationalExpr, ZeroExpressionError
from .netcore import NetError, NetState, SeedRecord

__all__ = ["DegenerateSeedError", "levy_step", "levy_sequence"]


class DegenerateSeedError(NetError, ZeroDivisionError):
    """The pivot component of the seed vanishes identically."""


def _transform_column(col: Sequence[RationalExpr], i: int, q: RationalExpr,
                      ratios: dict) -> tuple:
    """Levy image of one solution ``v`` of ``d_i v_j = beta_ji v_i``.

    ``v_i -> d_i v_i - q v_i`` with ``q = d_i xi_i / xi_i`` and
    ``v_k -> v_k - (xi_k / xi_i) v_i``.
    """
    vi = col[i - 1]
    out = []
    for k, vk in enumerate(col, 1):
        if k == i:
            out.append(vi.derivative(i) - q * vi)
        else:
            out.append(vk - ratios[k] * vi)
    return tuple(out)


def levy_step(s: NetState, i: int, label: str) -> NetState:
    """Apply the Levy transformation in direction ``i`` using seed ``label``.

    The seed is consumed.  Each surviving seed ``b`` is mapped like a tangent
    vector and its potential becomes ``Omega_b - (xi_b_i / xi_i) Omega``, which
    satisfies the potential equation of the new net without integrating.
    """
    if not 1 <= i <= s.N:
        raise NetError(f"direction {i} out of range 1..{s.N}")
    seed = s.seed(label)
    xi_i = seed.xi[i - 1]
    if xi_i.is_zero():
        raise DegenerateSeedError(f"seed {label!r} has xi_{i} identically zero")

    inv = xi_i.inverse()
    q = xi_i.derivative(i) * inv
    ratios = {k: seed.xi[k - 1] * inv for k in s.directions if k != i}
    r = seed.omega * inv  # Omega / xi_i

    beta = {}
    for (a, b), val in s.beta.items():
        if a == i:
            beta[(a, b)] = val.derivative(i) - val * q
        elif b == i:
            beta[(a, b)] = -ratios[a]
        else:
            beta[(a, b)] = val - ratios[a] * s.beta[(i, b)]

    X_cols = [_transform_column([s.X[n][l] for n in range(s.N)], i, q, ratios) for l in range(s.P)]
    X = tuple(tuple(X_cols[l][n] for l in range(s.P)) for n in range(s.N))

    H = tuple(-r if k == i else s.H[k - 1] - s.beta[(i, k)] * r for k in s.directions)
    x = tuple(s.x[l] - r * s.X[i - 1][l] for l in range(s.P))

    seeds = []
    for other in s.seeds:
        if other.label == label:
            continue
        xi_new = _transform_column(other.xi, i, q, ratios)
        omega_new = other.omega - other.xi[i - 1] * inv * seed.omega
        seeds.append(SeedRecord(other.label, xi_new, omega_new))

    return NetState(
        N=s.N,
        P=s.P,
        beta=beta,
        X=X,
        H=H,
        x=x,
        seeds=tuple(seeds),
        history=s.history + ((i, label),),
    )


def levy_sequence(s: NetState, steps: Iterable[tuple[int, str]]) -> NetState:
    """Compose :func:`levy_step` along ``steps`` of ``(direction, label)``."""
    for i, label in steps:
        try:
            s = levy_step(s, i, label)
        except ZeroExpressionError as exc:
            raise DegenerateSeedError(str(exc)) from exc
    return s
