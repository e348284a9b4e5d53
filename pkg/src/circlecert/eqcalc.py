"""Equivariant classes as restriction vectors.

By Kirwan injectivity a class in H*_{S^1}(M) is determined by its
restrictions to the fixed points. At an isolated fixed point a class of
degree 2k restricts to ``a * u^k`` for a rational ``a``, so a pure-degree
class is stored as its degree plus one rational per fixed point.

A cohomology model stores a basis of restriction vectors for each degree
2k with k < n. For k >= n nothing is stored: the dimension of H^{2k} is
then b_0 + ... + b_{2n} = m and restriction is injective, so every vector
of length m is the restriction of some degree-2k class.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .exactalg import (
    RationalMatrix,
    format_rational,
    kernel_basis,
    parse_rational,
    rank,
    span_contains,
)
from .fixdata import CheckResult, FixedPointData, betti_profile


class ModelError(ValueError):
    """Malformed class or model, or classes from different datasets."""


@dataclass(frozen=True)
class EquivariantClass:
    degree: int
    restrictions: tuple[Fraction, ...]
    ids: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.degree < 0 or self.degree % 2:
            raise ModelError(f"degree must be even and nonnegative, got {self.degree}")
        object.__setattr__(self, "restrictions", tuple(Fraction(a) for a in self.restrictions))
        object.__setattr__(self, "ids", tuple(self.ids))
        if len(self.restrictions) != len(self.ids):
            raise ModelError("restriction vector length does not match the point count")

    @classmethod
    def from_vector(cls, d: FixedPointData, degree: int, values: Sequence[Fraction | int]) -> "EquivariantClass":
        return cls(degree, tuple(values), d.ids)

    @property
    def k(self) -> int:
        return self.degree // 2

    def at(self, pid: str) -> Fraction:
        return self.restrictions[self.ids.index(pid)]

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.restrictions)

    def _check_same(self, other: "EquivariantClass") -> None:
        if self.ids != other.ids:
            raise ModelError("classes live over different datasets")

    def __add__(self, other: "EquivariantClass") -> "EquivariantClass":
        self._check_same(other)
        if self.degree != other.degree:
            raise ModelError("cannot add classes of different degree")
        return EquivariantClass(
            self.degree, tuple(a + b for a, b in zip(self.restrictions, other.restrictions)), self.ids
        )

    def scaled(self, c: Fraction | int) -> "EquivariantClass":
        return EquivariantClass(self.degree, tuple(c * a for a in self.restrictions), self.ids)

    def __mul__(self, other: "EquivariantClass") -> "EquivariantClass":
        return multiply(self, other)

    def to_json(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "restrictions": {i: format_rational(a) for i, a in zip(self.ids, self.restrictions)},
        }

    @classmethod
    def from_json(cls, obj: Any, d: FixedPointData) -> "EquivariantClass":
        if not isinstance(obj, dict) or "degree" not in obj or "restrictions" not in obj:
            raise ModelError("class must be an object with 'degree' and 'restrictions'")
        deg, res = obj["degree"], obj["restrictions"]
        if isinstance(deg, bool) or not isinstance(deg, int):
            raise ModelError(f"degree must be an integer, got {deg!r}")
        if not isinstance(res, dict):
            raise ModelError("restrictions must map point ids to rationals")
        if set(res) != set(d.ids):
            missing = sorted(set(d.ids) - set(res))
            extra = sorted(set(res) - set(d.ids))
            raise ModelError(f"restriction ids do not match dataset (missing {missing}, unknown {extra})")
        try:
            values = tuple(parse_rational(res[i]) for i in d.ids)
        except ValueError as e:
            raise ModelError(str(e)) from None
        return cls(deg, values, d.ids)


def ones(d: FixedPointData) -> EquivariantClass:
    return EquivariantClass.from_vector(d, 0, [1] * d.m)


def multiply(a: EquivariantClass, b: EquivariantClass) -> EquivariantClass:
    a._check_same(b)
    return EquivariantClass(
        a.degree + b.degree,
        tuple(x * y for x, y in zip(a.restrictions, b.restrictions)),
        a.ids,
    )


def scale_u(a: EquivariantClass, power: int) -> EquivariantClass:
    """Multiply by u^power; the restriction coefficients do not change."""
    if power < 1:
        raise ValueError("power must be a positive integer")
    return EquivariantClass(a.degree + 2 * power, a.restrictions, a.ids)


def omega_class(d: FixedPointData, shift: Fraction | int = 0) -> EquivariantClass:
    """Equivariant symplectic class for the moment map H - shift.

    At an isolated fixed point z it restricts to -(H(z) - shift) u.
    """
    shift = Fraction(shift)
    return EquivariantClass.from_vector(d, 2, [shift - p.moment for p in d.points])


@dataclass(frozen=True)
class IntegrationResult:
    scalar: Fraction
    u_exponent: int

    def __str__(self) -> str:
        return f"{format_rational(self.scalar)} * u^{self.u_exponent}"


def integrate(d: FixedPointData, a: EquivariantClass) -> IntegrationResult:
    """Localization: sum over fixed points of a_z / prod_i w_i(z), times u^{k-n}."""
    if a.ids != d.ids:
        raise ModelError("class does not live over this dataset")
    s = sum((c / p.euler for c, p in zip(a.restrictions, d.points)), Fraction(0))
    return IntegrationResult(s, a.k - d.half_dim)


def restriction_matrix(basis: Sequence[EquivariantClass], targets: Iterable[str], ids: Sequence[str] | None = None) -> RationalMatrix:
    """Rows are target points, columns are basis classes."""
    targets = list(targets)
    if basis:
        ids = basis[0].ids
        degrees = {b.degree for b in basis}
        if len(degrees) > 1:
            raise ModelError("basis classes must share one degree")
        for b in basis:
            b._check_same(basis[0])
    ids = tuple(ids or ())
    for t in targets:
        if t not in ids:
            raise KeyError(f"unknown fixed point id {t!r}")
    rows = [[b.at(t) for b in basis] for t in targets]
    return RationalMatrix.from_rows(rows, cols=len(basis))


@dataclass(frozen=True)
class CohomologyModel:
    """Bases of restriction vectors keyed by degree index k (degree 2k)."""

    bases: Mapping[int, tuple[EquivariantClass, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "bases", {int(k): tuple(v) for k, v in sorted(self.bases.items())}
        )
        for k, basis in self.bases.items():
            for c in basis:
                if c.degree != 2 * k:
                    raise ModelError(f"class of degree {c.degree} stored under degree {2 * k}")

    def basis(self, k: int) -> tuple[EquivariantClass, ...]:
        try:
            return self.bases[k]
        except KeyError:
            raise ModelError(f"model has no basis for degree {2 * k}") from None

    def full_basis(self, d: FixedPointData, k: int) -> tuple[EquivariantClass, ...]:
        """Stored basis for k < n; standard unit vectors for k >= n."""
        if k >= d.half_dim:
            return tuple(
                EquivariantClass.from_vector(d, 2 * k, [int(i == j) for j in range(d.m)])
                for i in range(d.m)
            )
        return self.basis(k)

    def to_json(self) -> dict[str, Any]:
        return {"bases": {str(2 * k): [c.to_json() for c in v] for k, v in self.bases.items()}}

    @classmethod
    def from_json(cls, obj: Any, d: FixedPointData) -> "CohomologyModel":
        if not isinstance(obj, dict) or not isinstance(obj.get("bases"), dict):
            raise ModelError("model must be an object with a 'bases' mapping")
        bases: dict[int, tuple[EquivariantClass, ...]] = {}
        for key, classes in obj["bases"].items():
            try:
                deg = int(key)
            except ValueError:
                raise ModelError(f"degree key {key!r} is not an integer") from None
            if deg < 0 or deg % 2:
                raise ModelError(f"degree key {key!r} must be even and nonnegative")
            if not isinstance(classes, list):
                raise ModelError(f"basis for degree {deg} must be a list")
            bases[deg // 2] = tuple(EquivariantClass.from_json(c, d) for c in classes)
        return cls(bases)


def load_model(path: str | Path, d: FixedPointData) -> CohomologyModel:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ModelError(f"{path}: invalid JSON ({e})") from None
    return CohomologyModel.from_json(obj, d)


def load_class(path: str | Path, d: FixedPointData) -> EquivariantClass:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ModelError(f"{path}: invalid JSON ({e})") from None
    return EquivariantClass.from_json(obj, d)


def combination(basis: Sequence[EquivariantClass], coeffs: Sequence[Fraction]) -> EquivariantClass:
    out = basis[0].scaled(coeffs[0])
    for b, c in zip(basis[1:], coeffs[1:]):
        out = out + b.scaled(c)
    return out


def vanishing_class(model: CohomologyModel, k: int, targets: Iterable[str]) -> EquivariantClass | None:
    """A nonzero degree-2k class vanishing on ``targets``, or None if none exists.

    The coefficients are the first canonical kernel vector of the
    restriction map, so the result is deterministic.
    """
    basis = model.basis(k)
    if not basis:
        return None
    ker = kernel_basis(restriction_matrix(basis, targets))
    if not ker:
        return None
    return combination(basis, ker[0])


def _basis_rank(basis: Sequence[EquivariantClass]) -> int:
    if not basis:
        return 0
    return rank(RationalMatrix.from_rows([b.restrictions for b in basis]))


def _vectors(basis: Sequence[EquivariantClass]) -> list[tuple[Fraction, ...]]:
    return [b.restrictions for b in basis]


def check_structure(d: FixedPointData, model: CohomologyModel, degrees: Iterable[int] | None = None) -> list[str]:
    """Dimension law, unit and u-module nesting, for the stored degrees only.

    These are the checks that do not involve localization; they are what a
    model must satisfy before its classes can be trusted as a spanning set.
    """
    failures: list[str] = []
    b = betti_profile(d)
    stored = sorted(model.bases)
    for k in stored if degrees is None else degrees:
        if k not in model.bases:
            failures.append(f"degree {2 * k}: no basis stored")
            continue
        if k >= d.half_dim:
            failures.append(f"degree {2 * k}: bases are only stored below degree {2 * d.half_dim}")
            continue
        basis = model.bases[k]
        for c in basis:
            if c.ids != d.ids:
                failures.append(f"degree {2 * k}: class does not live over this dataset")
                return failures
        want = b.partial_sum(k)
        if len(basis) != want:
            failures.append(
                f"dimension: degree {2 * k} basis has {len(basis)} classes, "
                f"b_0 + ... + b_{2 * k} = {want}"
            )
        if _basis_rank(basis) != len(basis):
            failures.append(f"dimension: degree {2 * k} basis is linearly dependent")
    if 0 in model.bases:
        r0 = model.bases[0]
        # with the dimension law this forces span(R_0) = span(1) when b_0 = 1
        if not span_contains(_vectors(r0), [ones(d).restrictions]):
            failures.append("unit: the all-ones class is not in the degree 0 span")
    for lo, hi in itertools.combinations(stored, 2):
        if hi >= d.half_dim:
            continue
        if not span_contains(_vectors(model.bases[hi]), _vectors(model.bases[lo])):
            failures.append(f"u-module: span of degree {2 * lo} not contained in degree {2 * hi}")
    return failures


def validate_model(d: FixedPointData, model: CohomologyModel) -> CheckResult:
    n = d.half_dim
    failures = check_structure(d, model, range(n))
    if any("does not live over" in f for f in failures):
        return CheckResult("model", False, None, tuple(failures))
    for k in range(n):
        for j, alpha in enumerate(model.bases.get(k, ())):
            for e in range(n - k):
                s = sum(
                    (a * p.moment ** e / p.euler for a, p in zip(alpha.restrictions, d.points)),
                    Fraction(0),
                )
                if s != 0:
                    failures.append(
                        f"moment identity: degree {2 * k} class #{j}, e={e}: "
                        f"sum_z a_z H(z)^{e} / prod_i w_i(z) = {format_rational(s)} (expected 0)"
                    )
    classes = [(k, j, c) for k, cs in model.bases.items() if k < n for j, c in enumerate(cs)]
    for (k1, j1, a), (k2, j2, b) in itertools.combinations_with_replacement(classes, 2):
        if k1 + k2 >= n:
            continue
        ab = multiply(a, b)
        tag = f"degree {2 * k1} #{j1} * degree {2 * k2} #{j2}"
        if k1 + k2 in model.bases and not span_contains(
            _vectors(model.bases[k1 + k2]), [ab.restrictions]
        ):
            failures.append(f"ring: product {tag} not in the degree {2 * (k1 + k2)} span")
        s = integrate(d, ab).scalar
        if s != 0:
            failures.append(f"ring: integral of {tag} = {format_rational(s)} (expected 0)")
    return CheckResult("model", not failures, None, tuple(failures))
