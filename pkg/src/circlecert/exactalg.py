"""Exact rational arithmetic and linear algebra.

Scalars are :class:`fractions.Fraction` values; they are always stored in
lowest terms with a positive denominator, so no separate canonicalisation
step is needed. Matrices are small, dense and immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(value: object) -> Fraction:
    """Parse a JSON rational: an integer or a string ``"p"`` / ``"p/q"``.

    Floats are rejected, as is anything that would need rounding.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL_RE.match(value.strip()):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {value!r}") from None
    raise ValueError(f"not a rational: {value!r}")


def format_rational(q: Fraction | int) -> str:
    return str(Fraction(q))


def sign(q: Fraction | int) -> int:
    return (q > 0) - (q < 0)


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> "RationalMatrix":
        """Build from nested rows. ``cols`` is needed only when ``rows`` is empty."""
        if cols is None:
            if not rows:
                raise ValueError("cols is required for a matrix with no rows")
            cols = len(rows[0])
        entries: list[Fraction] = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
            entries.extend(Fraction(x) for x in r)
        return cls(len(rows), cols, tuple(entries))

    @classmethod
    def identity(cls, size: int) -> "RationalMatrix":
        return cls.from_rows(
            [[int(i == j) for j in range(size)] for i in range(size)], cols=size
        )

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def apply(self, v: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(
            sum((a * b for a, b in zip(self.row(i), v)), Fraction(0))
            for i in range(self.rows)
        )


def rref(m: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns, in ascending order."""
    a = m.to_rows()
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        piv = next((i for i in range(r, m.rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(m.rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: RationalMatrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right null space in canonical form.

    One vector per free column, taken in ascending column order, with that
    free variable set to 1 and the other free variables set to 0. Each
    vector is then sign-normalised so its first nonzero entry is positive.
    """
    a, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -a[row][f]
        lead = next(x for x in v if x != 0)
        if lead < 0:
            v = [-x for x in v]
        basis.append(tuple(v))
    return basis


def span_contains(basis: Sequence[Sequence[Fraction]], vectors: Iterable[Sequence[Fraction]]) -> bool:
    """True when every vector lies in the span of ``basis`` (all same length)."""
    basis = [tuple(b) for b in basis]
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return True
    if not basis:
        return all(all(x == 0 for x in v) for v in vectors)
    r0 = rank(RationalMatrix.from_rows(basis))
    return rank(RationalMatrix.from_rows(basis + vectors)) == r0


def reduce_to_basis(vectors: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    """Greedy maximal independent subset, keeping the input order."""
    kept: list[tuple[Fraction, ...]] = []
    for v in vectors:
        v = tuple(Fraction(x) for x in v)
        if rank(RationalMatrix.from_rows(kept + [v])) > len(kept):
            kept.append(v)
    return kept
