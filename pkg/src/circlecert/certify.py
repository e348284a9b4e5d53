"""Unimodality certificates for index-increasing fixed point data.

If b_{2k} > b_{2k+2} for some 2k < n, there is a nonzero degree-2k class
alpha vanishing on a target set P of fixed points. Multiplying alpha^2 by
n - 2k - 1 shifted symplectic classes, whose shifts separate consecutive
index groups, gives a class beta of degree 2n - 2. Its integral must be 0
for degree reasons, yet every fixed point contributes a term of sign
(-1)^k and at least one term is nonzero. The nonzero total is the
certificate that the data cannot come from a genuine manifold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Any, Sequence

from .eqcalc import (
    CohomologyModel,
    EquivariantClass,
    check_structure,
    integrate,
    multiply,
    omega_class,
    restriction_matrix,
    vanishing_class,
)
from .exactalg import format_rational, rank, sign
from .fixdata import (
    FixedPointData,
    betti_profile,
    is_index_increasing,
    morse_index,
    poincare_duality_check,
)

PROFILE_UNIMODAL = "profile-unimodal"
MECHANISM_VERIFIED = "mechanism-verified"
INCONSISTENT = "inconsistent"


class CertifyError(ValueError):
    pass


class DegeneratePartitionError(CertifyError):
    """The violation sits at n - 2k < 3, where the index groups are not defined."""


class NotIndexIncreasingError(CertifyError):
    def __init__(self, msg: str, witness: tuple[str, str] | None = None):
        super().__init__(msg)
        self.witness = witness


class ModelRejectedError(CertifyError):
    def __init__(self, failures: Sequence[str]):
        super().__init__("model rejected: " + "; ".join(failures))
        self.failures = tuple(failures)


@dataclass(frozen=True)
class VanishingTarget:
    k: int
    p1: frozenset[str]
    p2: frozenset[str]
    p3: frozenset[str]

    @property
    def points(self) -> frozenset[str]:
        return self.p1 | self.p2 | self.p3


@dataclass(frozen=True)
class Partition:
    k: int
    groups: tuple[tuple[str, ...], ...]
    separators: tuple[Fraction, ...] = ()


@dataclass(frozen=True)
class SignLedger:
    k: int
    subtotals: tuple[Fraction, ...]
    total: Fraction

    @property
    def normalized_signs(self) -> tuple[int, ...]:
        return tuple(sign((-1) ** self.k * s) for s in self.subtotals)

    def to_json(self) -> dict[str, Any]:
        return {
            "subtotals": [format_rational(s) for s in self.subtotals],
            "normalized_signs": list(self.normalized_signs),
            "total": format_rational(self.total),
        }


@dataclass(frozen=True)
class Certificate:
    verdict: str
    k: int | None = None
    alpha: EquivariantClass | None = None
    partition: Partition | None = None
    target: VanishingTarget | None = None
    ledger: SignLedger | None = None
    explanation: str = ""

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"verdict": self.verdict}
        if self.k is not None:
            out["k"] = self.k
            out["degree"] = 2 * self.k
        if self.target is not None:
            out["vanishing_target"] = sorted(self.target.points)
        if self.alpha is not None:
            out["alpha"] = self.alpha.to_json()
        if self.partition is not None:
            out["groups"] = [list(g) for g in self.partition.groups]
            out["separators"] = [format_rational(r) for r in self.partition.separators]
        if self.ledger is not None:
            out.update(self.ledger.to_json())
        out["explanation"] = self.explanation
        return out


def _level_ids(d: FixedPointData, indices) -> tuple[str, ...]:
    wanted = set(indices)
    return tuple(p.id for p in d.points if morse_index(p) in wanted)


def build_vanishing_target(d: FixedPointData, k: int) -> VanishingTarget:
    n = d.half_dim
    if not 0 <= 2 * k < n:
        raise CertifyError(f"need 0 <= 2k < n, got k={k}, n={n}")
    p1 = _level_ids(d, range(2 * k - 2, -1, -4))
    p2 = _level_ids(d, range(2 * n - 2 * k + 4, 2 * n + 1, 4))
    p3 = _level_ids(d, [2 * n - 2 * k - 2])
    target = VanishingTarget(k, frozenset(p1), frozenset(p2), frozenset(p3))
    b = betti_profile(d)
    if poincare_duality_check(b):
        expected = b.partial_sum(k - 1) + b[k + 1]
        assert len(target.points) == expected, (len(target.points), expected)
    return target


def partition_by_index(d: FixedPointData, k: int) -> Partition:
    n = d.half_dim
    if n - 2 * k < 3:
        raise DegeneratePartitionError(
            f"violation at degree {2 * k} has n - 2k = {n - 2 * k} < 3; "
            "the index partition is undefined there"
        )
    if k < 0:
        raise CertifyError(f"k must be nonnegative, got {k}")
    groups = [_level_ids(d, range(0, 2 * k + 1, 2))]
    for j in range(2, n - 2 * k - 1):
        groups.append(_level_ids(d, [2 * k + 2 * j - 2]))
    groups.append(_level_ids(d, [2 * n - 2 * k - 4, 2 * n - 2 * k - 2, 2 * n - 2 * k]))
    groups.append(_level_ids(d, range(2 * n - 2 * k + 2, 2 * n + 1, 2)))
    return Partition(k, tuple(groups))


def choose_separators(d: FixedPointData, part: Partition) -> Partition:
    """Fill in r_1..r_{n-2k-1} so H(p) < r_j < H(q) for p below and q above cut j.

    Each r_j is the midpoint between the highest moment in the groups up
    to j and the lowest moment after it. With nothing on one side the
    separator sits one unit beyond the other side.
    """
    H = {p.id: p.moment for p in d.points}
    seps = []
    for j in range(1, len(part.groups)):
        below = [pid for g in part.groups[:j] for pid in g]
        above = [pid for g in part.groups[j:] for pid in g]
        if below and above:
            lo = max(below, key=lambda i: H[i])
            hi = min(above, key=lambda i: H[i])
            if not H[lo] < H[hi]:
                raise NotIndexIncreasingError(
                    f"cannot separate group {j} from group {j + 1}: "
                    f"H({lo}) = {format_rational(H[lo])} >= H({hi}) = {format_rational(H[hi])}",
                    (lo, hi),
                )
            r = (H[lo] + H[hi]) / 2
        elif below:
            r = max(H[i] for i in below) + 1
        else:
            r = min(H[i] for i in above) - 1
        seps.append(r)
    for j, r in enumerate(seps, start=1):
        assert all(H[i] < r for g in part.groups[:j] for i in g)
        assert all(H[i] > r for g in part.groups[j:] for i in g)
    return Partition(part.k, part.groups, tuple(seps))


def beta_class(d: FixedPointData, alpha: EquivariantClass, separators: Sequence[Fraction]) -> EquivariantClass:
    beta = multiply(alpha, alpha)
    for r in separators:
        beta = multiply(beta, omega_class(d, r))
    return beta


def sign_ledger(d: FixedPointData, k: int, alpha: EquivariantClass, part: Partition) -> SignLedger:
    if alpha.degree != 2 * k:
        raise CertifyError(f"alpha has degree {alpha.degree}, expected {2 * k}")
    for pid in sorted(build_vanishing_target(d, k).points, key=d.index_of):
        if alpha.at(pid) != 0:
            raise CertifyError(f"alpha does not vanish at {pid} in the target set")
    beta = beta_class(d, alpha, part.separators)
    euler = {p.id: p.euler for p in d.points}
    subtotals = tuple(
        sum((beta.at(pid) / euler[pid] for pid in g), Fraction(0)) for g in part.groups
    )
    res = integrate(d, beta)
    assert res.u_exponent == -1
    assert res.scalar == sum(subtotals)
    return SignLedger(k, subtotals, res.scalar)


def violations(d: FixedPointData) -> list[int]:
    """All k with 2k < n and b_{2k} > b_{2k+2}, ascending."""
    b = betti_profile(d)
    return [k for k in range(d.half_dim + 1) if 2 * k < d.half_dim and b[k] > b[k + 1]]


def certificate_at(d: FixedPointData, model: CohomologyModel, k: int) -> Certificate | None:
    """Run the procedure at degree 2k; None when no class vanishes on the target."""
    target = build_vanishing_target(d, k)
    part = choose_separators(d, partition_by_index(d, k))
    alpha = vanishing_class(model, k, sorted(target.points, key=d.index_of))
    if alpha is None:
        return None
    ledger = sign_ledger(d, k, alpha, part)
    if any(s < 0 for s in ledger.normalized_signs):
        raise AssertionError(f"sign claim violated: {ledger}")
    total = format_rational(ledger.total)
    return Certificate(
        INCONSISTENT, k, alpha, part, target, ledger,
        f"beta = alpha^2 * prod_j omega(H - r_j) has degree {2 * d.half_dim - 2} < "
        f"{2 * d.half_dim}, so integral over M of beta must be 0, "
        f"but localization gives {total} * u^-1",
    )


def certify(d: FixedPointData, model: CohomologyModel, check_mechanism: bool = False) -> Certificate:
    """Certify the Betti profile of index-increasing data, or refute the data.

    With ``check_mechanism`` a unimodal profile is also checked at the
    level of linear algebra: for every admissible k the degree-2k basis
    must restrict injectively to the target set. Success gives
    ``mechanism-verified``; any nonzero class vanishing on a target is run
    through the same ledger and yields an inconsistency certificate.
    """
    inc = is_index_increasing(d)
    if not inc:
        raise NotIndexIncreasingError(inc.failures[0], inc.witness)
    dual = poincare_duality_check(betti_profile(d))
    if not dual:
        raise CertifyError("Poincare duality fails: " + dual.failures[0])
    bad = violations(d)
    needed = bad[:1] if bad else (
        [k for k in range(d.half_dim) if d.half_dim - 2 * k >= 3] if check_mechanism else []
    )
    failures = check_structure(d, model)
    failures += [f"degree {2 * k}: no basis stored" for k in needed if k not in model.bases]
    if failures:
        raise ModelRejectedError(failures)
    if bad:
        k = bad[0]
        cert = certificate_at(d, model, k)
        if cert is None:
            raise AssertionError("target smaller than basis yet restriction is injective")
        return cert
    b = betti_profile(d)
    if not check_mechanism:
        return Certificate(PROFILE_UNIMODAL, explanation=f"even Betti numbers {list(b.values)} are unimodal")
    for k in needed:
        cert = certificate_at(d, model, k)
        if cert is not None:
            return cert
    return Certificate(
        MECHANISM_VERIFIED,
        explanation=(
            f"even Betti numbers {list(b.values)} are unimodal and every degree-2k basis "
            f"restricts injectively to its target set for k in {needed}"
        ),
    )


def restriction_rank_to_target(d: FixedPointData, model: CohomologyModel, k: int) -> tuple[int, int]:
    """(rank, column count) of the degree-2k basis restricted to the target set."""
    target = build_vanishing_target(d, k)
    basis = model.basis(k)
    m = restriction_matrix(basis, sorted(target.points, key=d.index_of))
    return rank(m), len(basis)
