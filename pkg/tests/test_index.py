from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equigon import InvalidInput
from equigon.index import (
    GradedPoly,
    IndexVerdict,
    MonomialAB,
    MonomialIdealAB,
    PowerIdealT,
    StoredIdeal,
    as_stored,
    contains,
    delta_complement_dim,
    includes,
    index_config_space,
    index_delta_complement,
    index_free_sphere,
    index_join_spheres,
    index_product,
    index_torus_rep_line,
    map_obstruction,
)

MAX_DEGREE = 12
BASIS = [(e, k) for k in range(MAX_DEGREE // 2 + 1) for e in (0, 1) if e + 2 * k <= MAX_DEGREE]


# ---------------------------------------------------------------- oracle
# Elements of F_p[a,b]/<a^2> truncated at MAX_DEGREE are coefficient vectors
# over BASIS. The ideal is the span of every generator times every monomial;
# membership is a rank test, done here with a separate elimination routine.


def _times(gen, mono):
    e, k = gen[0] + mono[0], gen[1] + mono[1]
    if e > 1 or e + 2 * k > MAX_DEGREE:
        return None
    return (e, k)


def _row_reduce(rows, p):
    basis = []  # (pivot, row)
    for row in rows:
        row = [x % p for x in row]
        for pivot, b in basis:
            if row[pivot]:
                f = row[pivot]
                row = [(x - f * y) % p for x, y in zip(row, b)]
        nz = next((i for i, x in enumerate(row) if x), None)
        if nz is not None:
            inv = pow(row[nz], -1, p)
            row = [(x * inv) % p for x in row]
            basis.append((nz, row))
    return basis


def oracle_span(gens, p):
    rows = []
    for g in gens:
        for m in BASIS:
            prod = _times(g, m)
            if prod is not None:
                # a random-looking nonzero scalar keeps the test honest about linearity
                vec = [0] * len(BASIS)
                vec[BASIS.index(prod)] = (g[1] + m[1]) % (p - 1) + 1
                rows.append(vec)
    return _row_reduce(rows, p)


def oracle_contains(span, mono, p):
    vec = [0] * len(BASIS)
    vec[BASIS.index(mono)] = 1
    return len(_row_reduce([row for _, row in span] + [vec], p)) == len(span)


IDEAL_GENS = [()] + [(m,) for m in BASIS] + list(combinations(BASIS, 2))


@pytest.mark.parametrize("p", [3, 5])
def test_contains_and_includes_match_oracle_exhaustively(p):
    spans = {gens: oracle_span(gens, p) for gens in IDEAL_GENS}
    ideals = {gens: MonomialIdealAB.of(p, *gens) for gens in IDEAL_GENS}
    member = {}
    for gens in IDEAL_GENS:
        for m in BASIS:
            truth = oracle_contains(spans[gens], m, p)
            member[gens, m] = truth
            assert contains(ideals[gens], MonomialAB(*m, p)) == truth, (gens, m)
    for big in IDEAL_GENS:
        for small in IDEAL_GENS:
            truth = all(member[big, g] for g in small)
            assert includes(ideals[big], ideals[small]) == truth, (big, small)


def test_contains_examples():
    ideal = MonomialIdealAB.of(3, (1, 2), (0, 3))
    assert contains(ideal, MonomialAB(0, 3, 3))
    assert not contains(ideal, MonomialAB(0, 2, 3))
    assert contains(ideal, MonomialAB(1, 2, 3))


def test_includes_examples():
    big = MonomialIdealAB.of(3, (1, 1), (0, 2))
    assert includes(big, MonomialIdealAB.of(3, (0, 2)))
    assert not includes(big, MonomialIdealAB.of(3, (0, 1)))
    assert includes(big, big)


def test_prime_mismatch():
    with pytest.raises(InvalidInput):
        contains(MonomialIdealAB.of(3, (0, 1)), MonomialAB(0, 1, 5))
    with pytest.raises(InvalidInput):
        includes(MonomialIdealAB.of(3, (0, 1)), MonomialIdealAB.of(5, (0, 1)))


def test_generators_are_minimal_and_canonical():
    a = MonomialIdealAB.of(3, (1, 1), (0, 2), (1, 3), (0, 5))
    b = MonomialIdealAB.of(3, (0, 2), (1, 1))
    assert a == b
    assert str(a) == "<a^0 b^2, a^1 b^1>"
    assert str(MonomialIdealAB.of(3, (0, 1), (1, 2))) == "<a^0 b^1>"
    assert str(MonomialIdealAB(3)) == "<0>"


def test_monomial_validation():
    with pytest.raises(InvalidInput):
        MonomialAB(2, 0, 3)
    with pytest.raises(InvalidInput):
        MonomialAB(0, -1, 3)
    assert MonomialAB(1, 3, 5).degree == 7


@pytest.mark.parametrize(
    "n,p,expected",
    [(3, 5, "<a^0 b^2>"), (4, 3, "<a^1 b^2>"), (1, 2, "<t^2>"), (0, 3, "<a^1 b^0>"), (1, 7, "<a^0 b^1>")],
)
def test_free_sphere_examples(n, p, expected):
    assert str(index_free_sphere(n, p)) == expected


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_free_sphere_degree_bound(p):
    for n in range(0, 25):
        ideal = index_free_sphere(n, p)
        assert all(g.degree >= n + 1 for g in ideal.generators)
        # the generator sits exactly in degree n + 1
        assert min(g.degree for g in ideal.generators) == n + 1
    assert index_free_sphere(6, 2) == PowerIdealT(7)


@pytest.mark.parametrize(
    "d,p,expected",
    [(2, 3, "<a^0 b^2, a^1 b^1>"), (3, 3, "<a^0 b^3, a^1 b^2>"), (2, 5, "<a^0 b^3, a^1 b^2>"), (1, 3, "<a^0 b^1, a^1 b^0>")],
)
def test_config_space_examples(d, p, expected):
    assert str(index_config_space(d, p)) == expected


@pytest.mark.parametrize("r,p,expected,dim", [(1, 3, "<a^0 b^1>", 1), (2, 5, "<a^0 b^4>", 7)])
def test_delta_complement_examples(r, p, expected, dim):
    assert str(index_delta_complement(r, p)) == expected
    assert delta_complement_dim(r, p) == dim


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("r", range(1, 7))
def test_delta_complement_is_a_free_odd_sphere(r, p):
    assert index_delta_complement(r, p) == index_free_sphere(delta_complement_dim(r, p), p)


@pytest.mark.parametrize(
    "d,r,p,expected",
    [(2, 1, 3, IndexVerdict.EXCLUDED), (2, 2, 3, IndexVerdict.INCONCLUSIVE), (3, 2, 5, IndexVerdict.EXCLUDED)],
)
def test_obstruction_examples(d, r, p, expected):
    assert map_obstruction(index_config_space(d, p), index_delta_complement(r, p)) is expected


def test_obstruction_is_sharp():
    for p in (3, 5, 7):
        for d in range(1, 9):
            for r in range(1, 9):
                verdict = map_obstruction(index_config_space(d, p), index_delta_complement(r, p))
                assert (verdict is IndexVerdict.EXCLUDED) == (d > r), (d, r, p)


def test_bad_space_parameters():
    with pytest.raises(InvalidInput):
        index_config_space(0, 3)
    with pytest.raises(InvalidInput):
        index_config_space(2, 9)
    with pytest.raises(InvalidInput):
        index_delta_complement(0, 3)
    with pytest.raises(InvalidInput):
        index_free_sphere(-1, 3)


ideals = st.builds(
    lambda p, gens: MonomialIdealAB.of(p, *gens),
    st.just(3),
    st.lists(st.tuples(st.integers(0, 1), st.integers(0, 8)), min_size=0, max_size=4),
)


@settings(max_examples=300, deadline=None)
@given(ideals, ideals, ideals)
def test_includes_is_a_partial_order(i, j, k):
    assert includes(i, i)
    if includes(i, j) and includes(j, i):
        assert i == j
    if includes(i, j) and includes(j, k):
        assert includes(i, k)


def test_product_of_stored_ideals():
    b1 = StoredIdeal(3, ("b1",), (GradedPoly.monomial(3, ("b1",), (2,)),))
    b2 = StoredIdeal(3, ("b2",), (GradedPoly.monomial(3, ("b2",), (3,)),))
    prod = index_product(b1, b2)
    assert prod.variables == ("b1", "b2")
    assert str(prod) == "<b1^2, b2^3>"


def test_product_with_zero_ideal_extends():
    i = as_stored(MonomialIdealAB.of(3, (1, 1), (0, 2)), "1")
    zero = StoredIdeal(3, ("a2", "b2"))
    prod = index_product(i, zero)
    assert prod.variables == ("a1", "b1", "a2", "b2")
    assert str(prod) == "<b1^2, a1*b1>"
    assert str(index_product(StoredIdeal(3, ("b1",)), StoredIdeal(3, ("b2",)))) == "<0>"


def test_product_needs_disjoint_variables():
    with pytest.raises(InvalidInput):
        index_product(StoredIdeal(3, ("b",)), StoredIdeal(3, ("b",)))


def test_join_examples():
    assert index_join_spheres(MonomialAB(0, 2, 3), MonomialAB(0, 3, 3)) == MonomialAB(0, 5, 3)
    assert index_join_spheres(MonomialAB(0, 1, 3), MonomialAB(0, 0, 3)) == MonomialAB(0, 1, 3)
    assert index_join_spheres(MonomialAB(1, 1, 3), MonomialAB(0, 1, 3)) == MonomialAB(1, 2, 3)
    assert index_join_spheres(MonomialAB(1, 0, 3), MonomialAB(1, 0, 3)) is None
    assert index_join_spheres(PowerIdealT(2), PowerIdealT(3)) == PowerIdealT(5)
    with pytest.raises(InvalidInput):
        index_join_spheres(MonomialAB(0, 1, 3), PowerIdealT(2))


def test_join_of_free_spheres_matches_sphere_of_sum():
    # S^{2m-1} * S^{2n-1} = S^{2(m+n)-1}
    for m in range(1, 5):
        for n in range(1, 5):
            f = index_free_sphere(2 * m - 1, 5).generators[0]
            g = index_free_sphere(2 * n - 1, 5).generators[0]
            assert index_join_spheres(f, g) == index_free_sphere(2 * (m + n) - 1, 5).generators[0]


@pytest.mark.parametrize("alpha,p,expected", [((1,), 3, "b1"), ((1, 0), 3, "b1"), ((2, 1), 3, "2*b1 + b2"), ((-1, 4), 5, "4*b1 + 4*b2")])
def test_torus_rep_line(alpha, p, expected):
    assert str(index_torus_rep_line(alpha, p)) == expected


def test_torus_rep_line_rejects_zero():
    with pytest.raises(InvalidInput):
        index_torus_rep_line((0, 3), 3)
    with pytest.raises(InvalidInput):
        index_torus_rep_line((), 3)
