import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circlecert.fixdata import (
    BettiProfile,
    DataError,
    FixedPoint,
    FixedPointData,
    betti_profile,
    euler_sign_consistent,
    is_index_increasing,
    is_unimodal,
    localization_consistency,
    moment_identity,
    morse_index,
    poincare_duality_check,
)
from circlecert.generators import Mutation, corrupt, gen_cpn, gen_product


def fp(pid, weights, moment):
    return FixedPoint(pid, tuple(weights), Fraction(moment))


def with_moments(d, moments):
    return FixedPointData(d.half_dim, tuple(
        FixedPoint(p.id, p.weights, Fraction(h)) for p, h in zip(d.points, moments)))


@pytest.mark.parametrize("weights, index", [((1, 2), 0), ((-2, -1), 4), ((-1, 1), 2)])
def test_morse_index(weights, index):
    assert morse_index(fp("p", weights, 0)) == index


def test_cp2_middle_point_weights():
    d, _ = gen_cpn([0, 1, 2])
    assert d.point("e1").weights == (-1, 1)


class TestValidation:
    def test_zero_weight(self):
        with pytest.raises(DataError):
            fp("p", (1, 0), 0)

    def test_duplicate_ids(self):
        with pytest.raises(DataError):
            FixedPointData(1, (fp("a", (1,), 0), fp("a", (-1,), 1)))

    def test_wrong_weight_count(self):
        with pytest.raises(DataError):
            FixedPointData(2, (fp("a", (1,), 0),))

    def test_empty(self):
        with pytest.raises(DataError):
            FixedPointData(1, ())

    @pytest.mark.parametrize("obj", [
        [], {"half_dim": 1}, {"half_dim": 1, "fixed_points": [{"id": "a", "weights": [1]}]},
        {"half_dim": 1, "fixed_points": [{"id": "a", "weights": [1.5], "moment": "0"}]},
        {"half_dim": 1, "fixed_points": [{"id": "a", "weights": [1], "moment": 0.5}]},
        {"half_dim": 0, "fixed_points": [{"id": "a", "weights": [], "moment": "0"}]},
    ])
    def test_bad_json(self, obj):
        with pytest.raises(DataError):
            FixedPointData.from_json(obj)

    def test_json_roundtrip(self):
        d, _ = gen_cpn([0, 3, 1])
        again = FixedPointData.from_json(json.loads(json.dumps(d.to_json())))
        assert again == d


class TestBetti:
    def test_cp2(self):
        assert betti_profile(gen_cpn([0, 1, 2])[0]).values == (1, 1, 1)

    def test_cp1_squared(self):
        d, _ = gen_product(gen_cpn([0, 1]), gen_cpn([0, 2]))
        assert betti_profile(d).values == (1, 2, 1)

    def test_single_point(self):
        b = betti_profile(FixedPointData(1, (fp("a", (1,), 0),)))
        assert b.values == (1, 0)
        res = poincare_duality_check(b)
        assert not res and res.witness == (0, 1)


@pytest.mark.parametrize("values, ok", [
    ((1, 1, 1), True), ((1, 0), False), ((1, 2, 1, 1, 2, 1), True),
])
def test_duality(values, ok):
    assert bool(poincare_duality_check(BettiProfile(values))) is ok


class TestIndexIncreasing:
    def test_cp2(self):
        assert is_index_increasing(gen_cpn([0, 1, 2])[0])

    def test_permuted_moments(self):
        d = with_moments(gen_cpn([0, 1, 2])[0], (0, 2, 1))
        res = is_index_increasing(d)
        assert not res
        assert set(res.witness) == {"e1", "e2"}

    def test_ties_within_level(self):
        d = FixedPointData(2, (
            fp("a", (1, 1), 0), fp("b", (-1, 1), 1), fp("c", (1, -1), 1), fp("d", (-1, -1), 3)))
        assert is_index_increasing(d)

    def test_tie_across_levels_fails(self):
        d = FixedPointData(1, (fp("a", (1,), 1), fp("b", (-1,), 1)))
        assert not is_index_increasing(d)


@pytest.mark.parametrize("values, ok, mode", [
    ((1, 1, 1), True, 0), ((1, 3, 2), True, 1), ((1, 2, 1, 1, 2, 1), False, None),
    ((3, 2, 1), True, 0), ((1, 2, 3), True, 2),
])
def test_unimodal(values, ok, mode):
    res = is_unimodal(BettiProfile(values))
    assert res.ok is ok
    assert res.witness == mode


def brute_unimodal(a):
    """Oracle: a peak region exists with no strict descent followed by a strict ascent."""
    seen_down = False
    for x, y in zip(a, a[1:]):
        if y < x:
            seen_down = True
        elif y > x and seen_down:
            return False
    return True


@given(st.lists(st.integers(0, 4), min_size=1, max_size=7))
def test_unimodal_matches_brute_force(a):
    assert is_unimodal(a).ok == brute_unimodal(a)


class TestLocalization:
    def test_cp1(self):
        d, _ = gen_cpn([0, 1])
        assert moment_identity(d, 0) == 0
        assert localization_consistency(d)

    def test_cp2(self):
        d, _ = gen_cpn([0, 1, 2])
        assert [moment_identity(d, e) for e in range(2)] == [0, 0]
        assert localization_consistency(d)

    def test_cp2_bad_weight(self):
        d = corrupt(gen_cpn([0, 1, 2])[0], Mutation("e0", 1, 3))
        res = localization_consistency(d)
        assert not res
        (failure,) = res.witness
        assert failure.label.startswith("e=0") and failure.value == Fraction(-1, 6)

    def test_negative_volume(self):
        d = FixedPointData(1, (fp("a", (1,), 1), fp("b", (-1,), 0)))
        res = localization_consistency(d)
        assert not res
        assert "volume" in res.failures[0]


weight_vectors = st.lists(st.integers(-7, 7), min_size=2, max_size=6, unique=True)


@settings(max_examples=60, deadline=None)
@given(weight_vectors)
def test_cpn_properties(a):
    a = sorted(a)
    d, _ = gen_cpn(a)
    assert set(betti_profile(d).values) == {1}
    assert is_index_increasing(d)
    assert localization_consistency(d)
    assert poincare_duality_check(betti_profile(d))
    assert sum(betti_profile(d).values) == d.m
    for p in d.points:
        assert 0 <= morse_index(p) <= 2 * d.half_dim
        assert euler_sign_consistent(p)


@settings(max_examples=40, deadline=None)
@given(weight_vectors, st.fractions(min_value=-10, max_value=10, max_denominator=5))
def test_identities_invariant_under_shift(a, r):
    d, _ = gen_cpn(a)
    shifted = with_moments(d, [p.moment - r for p in d.points])
    assert all(moment_identity(shifted, e) == 0 for e in range(d.half_dim))
