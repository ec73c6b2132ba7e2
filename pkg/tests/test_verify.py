import dataclasses
import json

import pytest

from conjnet import verify
from conjnet.expr import FLOAT
from conjnet.levy import levy_sequence
from conjnet.verify import (
    OrderError,
    bilinear_suite,
    check_bilinear_H,
    check_bilinear_X,
    default_order,
    full_residual_suite,
    nonsingular_points,
    oracle_equivalence,
    sample_exact_points,
    sample_points,
)
from conjnet.wronski import Partition, closed_form


def first(s, n):
    return dataclasses.replace(s, seeds=s.seeds[:n])


def test_bilinear_symbolic_n2(bg2):
    s0 = first(bg2, 2)
    pt = sample_points(2, 1)[0]
    for l in (1, 2, 3):
        assert check_bilinear_X(s0, (1, 1), 1, 2, l, pt).value == 0
        assert check_bilinear_X(s0, (1, 1), 2, 1, l, pt).passed
    assert check_bilinear_H(s0, (1, 1), 1, 2, pt).passed
    assert check_bilinear_H(s0, (1, 1), 2, 1, pt).passed


def test_bilinear_finite_difference_n3(bg3):
    s0 = first(bg3, 3)
    net = closed_form(s0, (1, 1, 1))
    for pt in nonsingular_points(net, 3, rng_seed=6):
        c = check_bilinear_X(net, None, 1, 3, 2, pt, method="fd", h=1e-4)
        assert c.passed and c.value < 1e-7
        c = check_bilinear_H(net, None, 3, 2, pt, method="fd")
        assert c.passed and c.value < 1e-7


def test_bilinear_detects_swapped_matrices(bg2):
    net = closed_form(first(bg2, 2), (1, 1))
    pt = nonsingular_points(net, 1, rng_seed=2)[0]
    c = check_bilinear_X(net, None, 1, 2, 1, pt, method="fd")
    assert c.passed
    # swapping the bordered matrices of two quantities must break the identity
    net.matrices[("beta", 1, 2)], net.matrices[("beta", 2, 1)] = (net.matrices[("beta", 2, 1)],
                                                                   net.matrices[("beta", 1, 2)])
    assert not check_bilinear_X(net, None, 1, 2, 1, pt, method="fd").passed
    assert not check_bilinear_X(net, None, 1, 2, 1, pt, method="symbolic").passed


def test_bilinear_rejects_equal_indices(bg2):
    s0 = first(bg2, 2)
    pt = sample_points(2, 1)[0]
    with pytest.raises(ValueError):
        check_bilinear_X(s0, (1, 1), 1, 1, 1, pt)
    with pytest.raises(ValueError):
        check_bilinear_H(s0, (1, 1), 2, 2, pt)
    with pytest.raises(ValueError):
        check_bilinear_H(s0, (1, 1), 1, 2, pt, method="magic")


def test_bilinear_suite_counts(bg2):
    s0 = first(bg2, 3)
    rep = bilinear_suite(s0, (2, 1), sample_points(2, 2), method="fd")
    # X: 2 ordered pairs x 3 components, H: 2 ordered pairs, at 2 points
    assert len(rep.checks) == (2 * 3 + 2) * 2
    assert rep.passed


@pytest.mark.parametrize("order", [[(1, "a"), (2, "b")], [(2, "b"), (1, "a")]])
def test_oracle_exact_both_orders(bg2, order):
    rep = oracle_equivalence(first(bg2, 2), (1, 1), order, sample_exact_points(2, 4))
    assert rep.passed and rep.checks
    assert all(c.value == 0 for c in rep.checks)
    assert rep.meta["first_divergent"] is None


def test_oracle_float(bg2):
    rep = oracle_equivalence(first(bg2, 2), (1, 1), None, sample_points(2, 10), FLOAT)
    assert rep.passed
    assert max(c.value for c in rep.checks) < 1e-8


def test_oracle_localizes_divergence(bg2, monkeypatch):
    def broken(s, steps):
        t = levy_sequence(s, steps)
        return dataclasses.replace(t, H=(t.H[0], t.H[1] * 2))

    monkeypatch.setattr(verify, "levy_sequence", broken)
    rep = oracle_equivalence(first(bg2, 2), (1, 1), None, sample_exact_points(2, 2))
    assert not rep.passed
    assert rep.meta["first_divergent"] == ["H", 2]
    assert {c.name for c in rep.failures} == {"oracle:H"}


@pytest.mark.parametrize("order", [
    [(1, "a"), (1, "b")],
    [(1, "a"), (2, "a")],
    [(1, "a"), (2, "zz")],
    [(1, "a")],
])
def test_oracle_order_errors(bg2, order):
    with pytest.raises(OrderError):
        oracle_equivalence(first(bg2, 2), (1, 1), order, [])


def test_default_order(bg3):
    assert default_order(bg3, Partition((2, 1, 1))) == [(1, "a"), (1, "b"), (2, "c"), (3, "d")]


def test_residual_suite_background(bg3):
    rep = full_residual_suite(bg3)
    assert rep.passed and all(c.value == 0 for c in rep.checks)


def test_residual_suite_after_three_steps(bg3):
    s = levy_sequence(bg3, [(1, "a"), (2, "b"), (3, "c")])
    rep = full_residual_suite(s)
    fams = {c.name.split(":")[0] for c in rep.checks}
    assert {"darboux", "tangent", "lame", "point", "seed", "potential"} <= fams
    assert rep.passed


def test_residual_suite_m4(bg3):
    net = closed_form(bg3, (2, 1, 1))
    rep = full_residual_suite(net, nonsingular_points(net, 20, rng_seed=0))
    assert rep.passed and not rep.singular
    assert len({c.point for c in rep.checks}) == 20
    assert max(c.value for c in rep.checks) < 1e-8


def test_residual_suite_exact_mode(bg3):
    net = closed_form(bg3, (2, 1, 1))
    rep = full_residual_suite(net, nonsingular_points(net, 3, rng_seed=0, exact=True))
    assert rep.passed and all(c.value == 0 for c in rep.checks)


def test_singular_points_flagged(bg2):
    s0 = dataclasses.replace(bg2, seeds=(bg2.seeds[0], dataclasses.replace(bg2.seeds[0], label="z")))
    net = closed_form(s0, (1, 1))
    rep = full_residual_suite(net, sample_points(2, 3))
    assert len(rep.singular) == 3 and rep.passed


def test_reports_are_deterministic(bg2, tmp_path):
    s0 = first(bg2, 2)

    def run():
        rep = oracle_equivalence(s0, (1, 1), None, sample_points(2, 4, rng_seed=7))
        rep.extend(full_residual_suite(closed_form(s0, (1, 1)), sample_points(2, 4, rng_seed=7)))
        return json.dumps(rep.to_json(), sort_keys=True)

    assert run() == run()
    path = tmp_path / "r.json"
    rep = oracle_equivalence(s0, (1, 1), None, sample_points(2, 2))
    rep.write(path)
    doc = json.loads(path.read_text())
    assert doc["passed"] is True
    assert {"name", "indices", "point", "mode", "value", "status"} <= set(doc["checks"][0])


def test_sampling_is_seeded():
    assert sample_points(3, 4, rng_seed=1) == sample_points(3, 4, rng_seed=1)
    assert sample_points(3, 4, rng_seed=1) != sample_points(3, 4, rng_seed=2)
    assert all(-1 <= c <= 1 for p in sample_points(3, 50) for c in p)


@pytest.mark.parametrize("order", [
    [(3, "d"), (1, "a"), (2, "b"), (1, "c")],
    [(1, "c"), (2, "a"), (1, "d"), (3, "b")],
    [(2, "d"), (3, "c"), (1, "b"), (1, "a")],
])
def test_oracle_interleavings_agree_exactly(bg3, order):
    # every order with the right direction counts gives the same closed form
    rep = oracle_equivalence(bg3, (2, 1, 1), order, sample_exact_points(3, 2, rng_seed=4))
    assert rep.passed and all(c.value == 0 for c in rep.checks)
