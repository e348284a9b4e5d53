"""Fixed point data of a Hamiltonian circle action with isolated fixed points.

A dataset lists, for every fixed point, the weights of the circle
representation on the tangent space and the value of the moment map.
The Morse index is read off the weights: the moment map increases along
positive-weight directions, so ``ind(p) = 2 * #{negative weights}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from pathlib import Path
from typing import Any, Sequence

from .exactalg import format_rational, parse_rational, sign


class DataError(ValueError):
    """Malformed or structurally invalid fixed point data."""


@dataclass(frozen=True)
class FixedPoint:
    id: str
    weights: tuple[int, ...]
    moment: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise DataError(f"fixed point id must be a nonempty string, got {self.id!r}")
        object.__setattr__(self, "weights", tuple(self.weights))
        for w in self.weights:
            if isinstance(w, bool) or not isinstance(w, int):
                raise DataError(f"{self.id}: weight {w!r} is not an integer")
            if w == 0:
                raise DataError(f"{self.id}: zero weight, fixed point is not isolated")
        object.__setattr__(self, "moment", Fraction(self.moment))

    @property
    def euler(self) -> int:
        """Product of the weights (the equivariant Euler class without its u^n)."""
        return prod(self.weights)


@dataclass(frozen=True)
class FixedPointData:
    half_dim: int
    points: tuple[FixedPoint, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        n = self.half_dim
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise DataError(f"half_dim must be a positive integer, got {n!r}")
        if not self.points:
            raise DataError("at least one fixed point is required")
        seen: set[str] = set()
        for p in self.points:
            if p.id in seen:
                raise DataError(f"duplicate fixed point id {p.id!r}")
            seen.add(p.id)
            if len(p.weights) != n:
                raise DataError(f"{p.id}: expected {n} weights, got {len(p.weights)}")

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(p.id for p in self.points)

    def point(self, pid: str) -> FixedPoint:
        for p in self.points:
            if p.id == pid:
                return p
        raise KeyError(pid)

    def index_of(self, pid: str) -> int:
        try:
            return self.ids.index(pid)
        except ValueError:
            raise KeyError(pid) from None

    def level(self, index: int) -> list[FixedPoint]:
        """Fixed points of Morse index ``index`` (empty for odd or out-of-range values)."""
        return [p for p in self.points if morse_index(p) == index]

    def to_json(self) -> dict[str, Any]:
        return {
            "half_dim": self.half_dim,
            "fixed_points": [
                {"id": p.id, "weights": list(p.weights), "moment": format_rational(p.moment)}
                for p in self.points
            ],
        }

    @classmethod
    def from_json(cls, obj: Any) -> "FixedPointData":
        if not isinstance(obj, dict):
            raise DataError("dataset must be a JSON object")
        try:
            n = obj["half_dim"]
            raw = obj["fixed_points"]
        except KeyError as e:
            raise DataError(f"dataset is missing key {e.args[0]!r}") from None
        if not isinstance(raw, list):
            raise DataError("fixed_points must be a list")
        points = []
        for i, fp in enumerate(raw):
            if not isinstance(fp, dict):
                raise DataError(f"fixed_points[{i}] must be an object")
            try:
                weights = fp["weights"]
                if not isinstance(weights, list):
                    raise DataError(f"fixed_points[{i}].weights must be a list")
                moment = parse_rational(fp["moment"])
                points.append(FixedPoint(fp["id"], tuple(weights), moment))
            except KeyError as e:
                raise DataError(f"fixed_points[{i}] is missing key {e.args[0]!r}") from None
            except DataError:
                raise
            except ValueError as e:
                raise DataError(f"fixed_points[{i}]: {e}") from None
        return cls(n, tuple(points))


def load_dataset(path: str | Path) -> FixedPointData:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: invalid JSON ({e})") from None
    return FixedPointData.from_json(obj)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a validator. ``witness`` carries whatever pinpoints a failure."""

    name: str
    ok: bool
    witness: Any = None
    failures: tuple[str, ...] = field(default=())

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class IdentityFailure:
    label: str
    value: Fraction
    expected: str

    def __str__(self) -> str:
        return f"{self.label} = {format_rational(self.value)} (expected {self.expected})"


def morse_index(p: FixedPoint) -> int:
    return 2 * sum(1 for w in p.weights if w < 0)


@dataclass(frozen=True)
class BettiProfile:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))

    @property
    def half_dim(self) -> int:
        return len(self.values) - 1

    def partial_sum(self, k: int) -> int:
        """b_0 + b_2 + ... + b_{2k}."""
        return sum(self.values[: k + 1])

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)


def betti_profile(d: FixedPointData) -> BettiProfile:
    counts = [0] * (d.half_dim + 1)
    for p in d.points:
        counts[morse_index(p) // 2] += 1
    return BettiProfile(tuple(counts))


def poincare_duality_check(b: BettiProfile) -> CheckResult:
    n = b.half_dim
    for i in range(n + 1):
        if b[i] != b[n - i]:
            return CheckResult(
                "poincare_duality", False, (i, n - i),
                (f"b_{2 * i} = {b[i]} but b_{2 * (n - i)} = {b[n - i]}",),
            )
    return CheckResult("poincare_duality", True)


def is_index_increasing(d: FixedPointData) -> CheckResult:
    """Lower index must mean strictly lower moment; ties inside one index are fine.

    The witness on failure is ``(p, q)`` with ``ind(p) < ind(q)`` and
    ``H(p) >= H(q)``.
    """
    for p in d.points:
        for q in d.points:
            if morse_index(p) < morse_index(q) and not p.moment < q.moment:
                msg = (
                    f"ind({p.id}) = {morse_index(p)} < ind({q.id}) = {morse_index(q)} "
                    f"but H({p.id}) = {format_rational(p.moment)} >= "
                    f"H({q.id}) = {format_rational(q.moment)}"
                )
                return CheckResult("index_increasing", False, (p.id, q.id), (msg,))
    return CheckResult("index_increasing", True)


def is_unimodal(b: Sequence[int] | BettiProfile) -> CheckResult:
    """Witness is the smallest mode when the sequence is unimodal."""
    a = list(b.values if isinstance(b, BettiProfile) else b)
    for k in range(max(len(a), 1)):
        rising = all(a[i] <= a[i + 1] for i in range(min(k, len(a) - 1)))
        falling = all(a[j] >= a[j + 1] for j in range(k, len(a) - 1))
        if rising and falling:
            return CheckResult("unimodal", True, k)
    return CheckResult("unimodal", False, None, (f"no mode exists for {a}",))


def moment_identity(d: FixedPointData, e: int) -> Fraction:
    """sum_z H(z)^e / prod_i w_i(z); vanishes for genuine data whenever e < n."""
    return sum((p.moment ** e / p.euler for p in d.points), Fraction(0))


def volume_sum(d: FixedPointData) -> Fraction:
    """sum_z (-H(z))^n / prod_i w_i(z), the symplectic volume up to n!."""
    n = d.half_dim
    return sum(((-p.moment) ** n / p.euler for p in d.points), Fraction(0))


def localization_consistency(d: FixedPointData) -> CheckResult:
    failures: list[IdentityFailure] = []
    for e in range(d.half_dim):
        s = moment_identity(d, e)
        if s != 0:
            failures.append(IdentityFailure(f"e={e}: sum_z H(z)^{e} / prod_i w_i(z)", s, "0"))
    vol = volume_sum(d)
    if not vol > 0:
        failures.append(IdentityFailure(
            f"volume: sum_z (-H(z))^{d.half_dim} / prod_i w_i(z)", vol, "> 0"))
    return CheckResult(
        "localization", not failures, tuple(failures), tuple(str(f) for f in failures)
    )


def euler_sign_consistent(p: FixedPoint) -> bool:
    return sign(p.euler) == (-1) ** (morse_index(p) // 2)
