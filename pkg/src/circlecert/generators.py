"""Fixture factories: genuine data with models, products, corruptions, synthetic data."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .eqcalc import CohomologyModel, EquivariantClass, validate_model
from .exactalg import reduce_to_basis
from .fixdata import FixedPoint, FixedPointData, betti_profile


class GeneratorError(ValueError):
    pass


def gen_cpn(a: Sequence[int]) -> tuple[FixedPointData, CohomologyModel]:
    """CP^n with the circle acting with weights a_0..a_n on C^{n+1}.

    The fixed point e_i has weights a_j - a_i (j != i) and moment a_i.
    Degree 2k is spanned by the powers 0..k of the class restricting to
    a_i u at e_i.
    """
    a = list(a)
    if len(a) < 2:
        raise GeneratorError("need at least two weights")
    if len(set(a)) != len(a):
        raise GeneratorError(f"weights must be pairwise distinct: {a}")
    n = len(a) - 1
    points = tuple(
        FixedPoint(f"e{i}", tuple(aj - ai for j, aj in enumerate(a) if j != i), Fraction(ai))
        for i, ai in enumerate(a)
    )
    d = FixedPointData(n, points)
    bases = {
        k: tuple(EquivariantClass.from_vector(d, 2 * k, [ai ** e for ai in a]) for e in range(k + 1))
        for k in range(n)
    }
    return d, CohomologyModel(bases)


def gen_product(
    first: tuple[FixedPointData, CohomologyModel],
    second: tuple[FixedPointData, CohomologyModel],
    scale: Fraction | int = 1,
    check: bool = True,
) -> tuple[FixedPointData, CohomologyModel]:
    """Product with the diagonal circle action and moment H_1 + scale * H_2.

    Point ids are ``"<id1>.<id2>"``. The result need not be index-increasing.
    """
    scale = Fraction(scale)
    if scale <= 0:
        raise GeneratorError("scale must be positive")
    (d1, m1), (d2, m2) = first, second
    points = tuple(
        FixedPoint(f"{p.id}.{q.id}", p.weights + q.weights, p.moment + scale * q.moment)
        for p in d1.points
        for q in d2.points
    )
    d = FixedPointData(d1.half_dim + d2.half_dim, points)
    bases = {}
    for k in range(d.half_dim):
        spanning = []
        for i in range(k + 1):
            for x, y in itertools.product(m1.full_basis(d1, i), m2.full_basis(d2, k - i)):
                spanning.append([s * t for s in x.restrictions for t in y.restrictions])
        bases[k] = tuple(
            EquivariantClass.from_vector(d, 2 * k, v) for v in reduce_to_basis(spanning)
        )
    model = CohomologyModel(bases)
    if check:
        res = validate_model(d, model)
        if not res:
            raise GeneratorError("product model failed validation: " + "; ".join(res.failures))
    return d, model


@dataclass(frozen=True)
class Mutation:
    """Change one weight (``weight_index``/``new_weight``) and/or the moment of one point."""

    point_id: str
    weight_index: int | None = None
    new_weight: int | None = None
    new_moment: Fraction | None = None


def corrupt(d: FixedPointData, mutation: Mutation) -> FixedPointData:
    try:
        i = d.index_of(mutation.point_id)
    except KeyError:
        raise GeneratorError(f"no fixed point {mutation.point_id!r}") from None
    p = d.points[i]
    weights = list(p.weights)
    if mutation.weight_index is not None:
        if not 0 <= mutation.weight_index < len(weights):
            raise GeneratorError(f"weight index {mutation.weight_index} out of range")
        if not mutation.new_weight:
            raise GeneratorError("replacement weight must be a nonzero integer")
        weights[mutation.weight_index] = mutation.new_weight
    moment = p.moment if mutation.new_moment is None else Fraction(mutation.new_moment)
    points = list(d.points)
    points[i] = replace(p, weights=tuple(weights), moment=moment)
    return FixedPointData(d.half_dim, tuple(points))


def inverse_mutation(d: FixedPointData, mutation: Mutation) -> Mutation:
    """The mutation that undoes ``mutation`` when applied to ``corrupt(d, mutation)``."""
    p = d.point(mutation.point_id)
    return Mutation(
        mutation.point_id,
        mutation.weight_index,
        None if mutation.weight_index is None else p.weights[mutation.weight_index],
        None if mutation.new_moment is None else p.moment,
    )


SYNTHETIC_N5_LEVELS = (
    (0, Fraction(0)), (2, Fraction(1)), (2, Fraction(3, 2)), (4, Fraction(2)),
    (6, Fraction(3)), (8, Fraction(4)), (8, Fraction(9, 2)), (10, Fraction(5)),
)


def _pm_weights(n: int, index: int) -> tuple[int, ...]:
    neg = index // 2
    return tuple([-1] * neg + [1] * (n - neg))


def synthetic_n5() -> tuple[FixedPointData, CohomologyModel]:
    """Index-increasing n=5 data with Betti numbers [1, 2, 1, 1, 2, 1].

    The claimed degree-2 basis is {1, H, unit at p1}; with the target set
    {p0, p4} the canonical vanishing class is the unit at p1.
    """
    points = tuple(
        FixedPoint(f"p{i}", _pm_weights(5, ind), h)
        for i, (ind, h) in enumerate(SYNTHETIC_N5_LEVELS)
    )
    d = FixedPointData(5, points)
    one = EquivariantClass.from_vector(d, 0, [1] * d.m)
    r2 = (
        scale_degree(one, 2),
        EquivariantClass.from_vector(d, 2, [p.moment for p in points]),
        EquivariantClass.from_vector(d, 2, [int(p.id == "p1") for p in points]),
    )
    return d, CohomologyModel({0: (one,), 1: r2})


def scale_degree(a: EquivariantClass, degree: int) -> EquivariantClass:
    return EquivariantClass(degree, a.restrictions, a.ids)


def random_palindromic_profile(rng: random.Random, n: int, violation_k: int | None = None, max_b: int = 3) -> list[int]:
    """Random profile with b_i = b_{n-i}; with ``violation_k`` also b_{2k} > b_{2k+2}."""
    half = [rng.randint(1, max_b) for _ in range(n // 2 + 1)]
    if violation_k is not None:
        if not 2 * violation_k + 2 < n:
            raise GeneratorError("violation must sit below the middle degree")
        half[violation_k + 1] = rng.randint(1, max_b)
        half[violation_k] = half[violation_k + 1] + rng.randint(1, 2)
    return [half[min(i, n - i)] for i in range(n + 1)]


def random_synthetic(rng: random.Random, n: int, profile: Sequence[int]) -> FixedPointData:
    """Random index-increasing data realising ``profile``.

    Index-2i points get i negative weights of random magnitude and moments
    in [i, i + 1), so lower indices always sit strictly lower.
    """
    if len(profile) != n + 1:
        raise GeneratorError("profile must have n + 1 entries")
    points = []
    for i, count in enumerate(profile):
        for c in range(count):
            signs = [-1] * i + [1] * (n - i)
            rng.shuffle(signs)
            weights = tuple(s * rng.randint(1, 3) for s in signs)
            den = rng.randint(1, 6)
            moment = i + Fraction(rng.randrange(den), den)
            points.append(FixedPoint(f"z{i}_{c}", weights, moment))
    rng.shuffle(points)
    return FixedPointData(n, tuple(points))


def random_claimed_model(rng: random.Random, d: FixedPointData, k: int) -> CohomologyModel:
    """A model passing the structural checks at degree 0 and 2k.

    Each stored degree is spanned by the unit class and unit vectors at
    random points; degree 0 uses a prefix of the points chosen for 2k.
    """
    b = betti_profile(d)
    chosen = rng.sample(range(d.m), b.partial_sum(k) - 1)

    def basis(kk: int) -> tuple[EquivariantClass, ...]:
        deg = 2 * kk
        units = chosen[: b.partial_sum(kk) - 1]
        return (EquivariantClass.from_vector(d, deg, [1] * d.m),) + tuple(
            EquivariantClass.from_vector(d, deg, [int(j == c) for j in range(d.m)]) for c in units
        )

    return CohomologyModel({kk: basis(kk) for kk in {0, k}})

