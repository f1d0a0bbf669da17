from __future__ import annotations

import math

import numpy as np
import pytest

from equigon import InvalidInput
from equigon.metrics import (
    GENERALIZED_BUILTINS,
    L1,
    L2,
    LINF,
    GeneralizedSymmetric,
    LinearPullback,
    LqNorm,
    ScaledSum,
    Snowflake,
    check_symmetry_and_identity,
    describe,
    eval_metric,
    metric_from_json,
    parse_metric_shorthand,
)

A3 = np.array([[2.0, 1.0, 0.0], [0.0, 1.0, -1.0], [1.0, 0.0, 3.0]])

METRICS = [
    L1,
    L2,
    LINF,
    LqNorm(3.5),
    LinearPullback(A3, L1),
    LinearPullback(A3, L2),
    Snowflake(0.5, L2),
    Snowflake(0.3, L1),
    Snowflake(1.0, LINF),
    ScaledSum((1.0, 0.25), (L2, L1)),
    ScaledSum((2.0, 1.0), (Snowflake(0.7, L2), LinearPullback(A3, LINF))),
]


def test_euclidean_345():
    assert eval_metric(L2, (0, 0), (3, 4)) == pytest.approx(5.0, abs=1e-15)


def test_taxicab_side_of_inscribed_triangle():
    got = eval_metric(L1, (1, 0), (-0.5, math.sqrt(3) / 2))
    assert got == pytest.approx((3 + math.sqrt(3)) / 2, abs=1e-15)


def test_snowflake_half_of_four():
    assert eval_metric(Snowflake(0.5, L2), (0, 0), (0, 4)) == pytest.approx(2.0, abs=1e-15)


def test_lq_against_direct_formula():
    rng = np.random.default_rng(1)
    x, y = rng.normal(size=(2, 50, 4))
    for q in (1.0, 1.5, 2.0, 3.5):
        direct = (np.abs(x - y) ** q).sum(axis=1) ** (1 / q)
        np.testing.assert_allclose(eval_metric(LqNorm(q), x, y), direct, rtol=1e-13)
    np.testing.assert_allclose(eval_metric(LINF, x, y), np.abs(x - y).max(axis=1), rtol=0)


def test_broadcasts_over_leading_axes():
    x = np.zeros((4, 5, 2))
    y = np.ones((5, 2))
    out = eval_metric(L1, x, y)
    assert out.shape == (4, 5)
    assert np.all(out == 2.0)


@pytest.mark.parametrize("rho", [L1, LinearPullback(np.diag([1.0, 2.0, 3.0]), L2), Snowflake(0.5, L1)])
def test_symmetry_report_examples(rho):
    report = check_symmetry_and_identity(rho, 1000, seed=7)
    assert report.max_asymmetry == 0.0
    assert report.identity_violations == 0
    assert report.samples == 1000


@pytest.mark.parametrize("rho", METRICS, ids=describe)
def test_metric_axioms_on_samples(rho):
    dim = rho.dim or 3
    rng = np.random.default_rng(11)
    x, y, z = rng.uniform(-2.0, 2.0, size=(3, 10_000, dim))
    dxy, dyz, dxz = eval_metric(rho, x, y), eval_metric(rho, y, z), eval_metric(rho, x, z)
    assert np.all(dxz <= dxy + dyz + 1e-12)
    assert np.all(dxy > 0)
    np.testing.assert_array_equal(dxy, eval_metric(rho, y, x))
    assert np.all(eval_metric(rho, x, x) == 0)


@pytest.mark.parametrize("inner", [L1, L2, LINF, Snowflake(0.4, L2)], ids=describe)
def test_identity_pullback_is_transparent(inner):
    rng = np.random.default_rng(3)
    x, y = rng.normal(size=(2, 200, 3))
    np.testing.assert_allclose(
        eval_metric(LinearPullback(np.eye(3), inner), x, y), eval_metric(inner, x, y), rtol=0, atol=0
    )


@pytest.mark.parametrize("name", sorted(GENERALIZED_BUILTINS))
def test_generalized_functions_are_symmetric(name):
    rho = GeneralizedSymmetric(name)
    assert not rho.metric_axioms_guaranteed
    report = check_symmetry_and_identity(rho, 500, seed=2)
    assert report.max_asymmetry == 0.0


def test_generalized_zero_and_negative_values():
    assert eval_metric(GeneralizedSymmetric("zero"), (1, 2), (3, 4)) == 0.0
    assert eval_metric(GeneralizedSymmetric("neg_sq_euclidean"), (0, 0), (3, 4)) == -25.0


@pytest.mark.parametrize("rho", METRICS + [GeneralizedSymmetric("dot")], ids=describe)
def test_json_round_trip(rho):
    back = metric_from_json(rho.to_json())
    assert back.to_json() == rho.to_json()
    rng = np.random.default_rng(5)
    x, y = rng.normal(size=(2, 20, rho.dim or 3))
    np.testing.assert_array_equal(eval_metric(back, x, y), eval_metric(rho, x, y))


def test_json_infinity_spelling():
    assert metric_from_json({"kind": "lq", "params": {"q": "inf"}}).q == math.inf


@pytest.mark.parametrize(
    "text,expected", [("l1", 1.0), ("L2", 2.0), ("linf", math.inf), ("l3.5", 3.5)]
)
def test_shorthand(text, expected):
    assert parse_metric_shorthand(text).q == expected


def test_shorthand_unknown():
    assert parse_metric_shorthand("euclid") is None


def test_smoothness_flags():
    assert L2.smooth and LqNorm(3).smooth
    assert not L1.smooth and not LINF.smooth
    assert not ScaledSum((1.0, 1.0), (L2, L1)).smooth
    assert Snowflake(0.9, L2).smooth


@pytest.mark.parametrize(
    "build",
    [
        lambda: LqNorm(0.5),
        lambda: Snowflake(0.0, L2),
        lambda: Snowflake(1.5, L2),
        lambda: Snowflake(0.5, GeneralizedSymmetric("dot")),
        lambda: LinearPullback(np.array([[1.0, 2.0], [2.0, 4.0]]), L2),
        lambda: LinearPullback(np.ones((2, 3)), L2),
        lambda: ScaledSum((1.0, -1.0), (L1, L2)),
        lambda: ScaledSum((1.0,), (L1, L2)),
        lambda: ScaledSum((1.0, 1.0), (LinearPullback(np.eye(2)), LinearPullback(np.eye(3)))),
        lambda: GeneralizedSymmetric("exec"),
        lambda: metric_from_json({"kind": "bogus"}),
        lambda: metric_from_json([1, 2]),
        lambda: metric_from_json({"kind": "snowflake", "inner": {"kind": "lq", "params": {"q": 2}}}),
        lambda: metric_from_json({"kind": "lq", "q": 1}),
        lambda: metric_from_json({"kind": "lq", "params": {"q": 1, "p": 2}}),
        lambda: metric_from_json({"kind": "lq", "params": {"q": "one"}}),
        lambda: metric_from_json({"kind": "linear", "params": {"A": "eye"}}),
    ],
)
def test_invalid_constructions(build):
    with pytest.raises(InvalidInput):
        build()


def test_dimension_mismatch():
    with pytest.raises(InvalidInput):
        eval_metric(L2, (0, 0), (0, 0, 0))
    with pytest.raises(InvalidInput):
        eval_metric(LinearPullback(A3, L2), (0, 0), (1, 1))
