import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circlecert.certify import (
    INCONSISTENT,
    MECHANISM_VERIFIED,
    PROFILE_UNIMODAL,
    CertifyError,
    DegeneratePartitionError,
    ModelRejectedError,
    NotIndexIncreasingError,
    beta_class,
    build_vanishing_target,
    certify,
    choose_separators,
    partition_by_index,
    restriction_rank_to_target,
    sign_ledger,
)
from circlecert.eqcalc import CohomologyModel, EquivariantClass, integrate
from circlecert.fixdata import FixedPoint, FixedPointData, morse_index
from circlecert.generators import (
    gen_cpn,
    gen_product,
    random_claimed_model,
    random_palindromic_profile,
    random_synthetic,
    synthetic_n5,
)

SYN = synthetic_n5()
CP3 = gen_cpn([0, 1, 2, 3])
CP5 = gen_cpn(list(range(6)))


def unit_at(d, pid, degree):
    return EquivariantClass.from_vector(d, degree, [int(i == pid) for i in d.ids])


class TestTarget:
    def test_synthetic(self):
        t = build_vanishing_target(SYN[0], 1)
        assert t.p1 == {"p0"} and t.p2 == set() and t.p3 == {"p4"}
        assert len(t.points) == 2

    def test_cp3(self):
        t = build_vanishing_target(CP3[0], 1)
        assert t.p1 == {"e0"} and t.p3 == {"e1"} and t.p2 == set()

    @pytest.mark.parametrize("k", [-1, 3])
    def test_out_of_range(self, k):
        with pytest.raises(CertifyError):
            build_vanishing_target(SYN[0], k)


class TestPartition:
    def test_synthetic(self):
        part = partition_by_index(SYN[0], 1)
        assert part.groups == (("p0", "p1", "p2"), ("p3", "p4", "p5", "p6"), ("p7",))

    def test_cp5(self):
        part = partition_by_index(CP5[0], 1)
        assert part.groups == (("e0", "e1"), ("e2", "e3", "e4"), ("e5",))

    def test_middle_groups(self):
        d, _ = gen_cpn(list(range(8)))
        part = partition_by_index(d, 1)
        assert part.groups == (
            ("e0", "e1"), ("e2",), ("e3",), ("e4", "e5", "e6"), ("e7",)
        )

    def test_degenerate(self):
        d, _ = gen_cpn(list(range(5)))
        with pytest.raises(DegeneratePartitionError):
            partition_by_index(d, 1)

    def test_groups_partition_points(self):
        d, _ = gen_cpn(list(range(10)))
        for k in range(4):
            groups = partition_by_index(d, k).groups
            flat = [p for g in groups for p in g]
            assert sorted(flat) == sorted(d.ids)


class TestSeparators:
    def test_synthetic(self):
        part = choose_separators(SYN[0], partition_by_index(SYN[0], 1))
        assert part.separators == (Fraction(7, 4), Fraction(19, 4))

    def test_cp5(self):
        part = choose_separators(CP5[0], partition_by_index(CP5[0], 1))
        assert part.separators == (Fraction(3, 2), Fraction(9, 2))

    def test_overlap(self):
        d = SYN[0]
        pts = list(d.points)
        pts[2] = FixedPoint("p2", pts[2].weights, Fraction(5, 2))
        bad = FixedPointData(5, tuple(pts))
        with pytest.raises(NotIndexIncreasingError) as e:
            choose_separators(bad, partition_by_index(bad, 1))
        assert e.value.witness == ("p2", "p3")

    def test_empty_groups(self):
        d = FixedPointData(5, CP5[0].points[:5])
        part = partition_by_index(d, 1)
        assert part.groups[-1] == ()
        assert choose_separators(d, part).separators == (Fraction(3, 2), 5)


class TestLedger:
    def test_synthetic_unit(self):
        d = SYN[0]
        part = choose_separators(d, partition_by_index(d, 1))
        led = sign_ledger(d, 1, unit_at(d, "p1", 2), part)
        # one term: 1^2 * (7/4 - 1) * (19/4 - 1) / (-1)
        assert led.subtotals == (Fraction(-45, 16), 0, 0)
        assert led.total == Fraction(-45, 16)
        assert led.normalized_signs == (1, 0, 0)

    def test_not_vanishing(self):
        d = SYN[0]
        part = choose_separators(d, partition_by_index(d, 1))
        with pytest.raises(CertifyError, match="p0"):
            sign_ledger(d, 1, unit_at(d, "p0", 2), part)

    def test_genuine_cp5_integral_zero(self):
        d, model = CP5
        assert restriction_rank_to_target(d, model, 1) == (2, 2)
        part = choose_separators(d, partition_by_index(d, 1))
        for alpha in model.basis(1):
            assert integrate(d, beta_class(d, alpha, part.separators)).scalar == 0


class TestCertify:
    def test_synthetic(self):
        c = certify(*SYN)
        assert c.verdict == INCONSISTENT and c.k == 1
        assert c.alpha == unit_at(SYN[0], "p1", 2)
        assert c.ledger.total == Fraction(-45, 16)

    @pytest.mark.parametrize("make", [
        lambda: gen_cpn([0, 1, 2]), lambda: CP5,
        lambda: gen_product(gen_cpn([0, 1, 2]), gen_cpn([0, 1])),
    ])
    def test_genuine(self, make):
        assert certify(*make()).verdict == PROFILE_UNIMODAL
        assert certify(*make(), check_mechanism=True).verdict == MECHANISM_VERIFIED

    def test_mechanism_catches_bad_model(self):
        d, model = CP5
        bad = CohomologyModel({0: model.basis(0), 1: (model.basis(1)[0], unit_at(d, "e1", 2))})
        assert certify(d, bad).verdict == PROFILE_UNIMODAL
        c = certify(d, bad, check_mechanism=True)
        assert c.verdict == INCONSISTENT and c.ledger.total != 0

    def test_not_index_increasing(self):
        d, model = gen_cpn([0, 1, 2])
        swapped = FixedPointData(2, tuple(
            FixedPoint(p.id, p.weights, h) for p, h in zip(d.points, (0, 2, 1))))
        with pytest.raises(NotIndexIncreasingError):
            certify(swapped, model)

    def test_model_missing_degree(self):
        d, model = SYN
        with pytest.raises(ModelRejectedError):
            certify(d, CohomologyModel({0: model.basis(0)}))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(5, 7))
def test_sign_claims_hold_for_any_vanishing_alpha(seed, n):
    rng = random.Random(seed)
    k = rng.randint(0, (n - 3) // 2)
    d = random_synthetic(rng, n, random_palindromic_profile(rng, n))
    target = build_vanishing_target(d, k).points
    values = [0 if pid in target or rng.random() < 0.3 else Fraction(rng.randint(-5, 5), rng.randint(1, 4))
              for pid in d.ids]
    alpha = EquivariantClass.from_vector(d, 2 * k, values)
    part = choose_separators(d, partition_by_index(d, k))
    led = sign_ledger(d, k, alpha, part)
    for g, s in zip(part.groups, led.subtotals):
        assert (-1) ** k * s >= 0
        assert (s == 0) == all(alpha.at(p) == 0 for p in g)
    assert (led.total == 0) == alpha.is_zero()


def test_euler_signs_on_synthetic():
    for p in SYN[0].points:
        assert (p.euler > 0) == (morse_index(p) % 4 == 0)


@pytest.mark.parametrize("seed", range(5))
def test_random_non_unimodal_is_refuted(seed):
    rng = random.Random(seed)
    n = rng.randint(5, 7)
    k = rng.randint(0, (n - 3) // 2)
    d = random_synthetic(rng, n, random_palindromic_profile(rng, n, violation_k=k))
    c = certify(d, random_claimed_model(rng, d, k))
    assert c.verdict == INCONSISTENT
    assert c.k <= k
    assert c.ledger.total != 0 and (c.ledger.total > 0) == (c.k % 2 == 0)
