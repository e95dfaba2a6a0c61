"""Characteristic invariants and the descended invariant map.

Sign convention, fixed package-wide: for an n x n matrix M over the series
ring, write det(t I - M) = t^n + sum_{i=1..n} (-1)^i b_i t^(n-i).  The
tuple b = (b_1, ..., b_n) is what char_invariants returns, so b_1 is the
trace and b_n the determinant, both with no sign.  companion_section
builds the companion matrix of det(t I - M) under the same convention,
which makes char_invariants(companion_section(b)) = b an identity for
every p.

The determinant is computed division-free by Laplace expansion with
shared subminors, valid over any commutative ring; nothing divides by
1..n, so small p is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

from .connection import Connection, pcurv
from .errors import (
    DimensionMismatch,
    InsufficientPrecision,
    InternalInconsistency,
    NotAPthPower,
    RankTooLarge,
    VarMismatch,
)
from .matrix import SeriesMatrix
from .series import TruncSeries, VAR_TWIST

MAX_RANK = 8


@dataclass(frozen=True)
class InvariantTuple:
    """The ordered tuple (b_1, ..., b_n) of characteristic invariants."""

    entries: tuple[TruncSeries, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise DimensionMismatch("rank must be at least 1")
        first = self.entries[0]
        for e in self.entries:
            if e.field != first.field or e.var != first.var or e.precision != first.precision:
                raise DimensionMismatch("invariant entries disagree on field, var or precision")

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def field(self):
        return self.entries[0].field

    @property
    def var(self) -> str:
        return self.entries[0].var

    @property
    def precision(self) -> int:
        return self.entries[0].precision

    def agrees_with(self, other: "InvariantTuple") -> bool:
        if self.rank != other.rank:
            raise DimensionMismatch("invariant ranks differ")
        return all(a.agrees_with(b) for a, b in zip(self.entries, other.entries))

    def truncate(self, precision: int) -> "InvariantTuple":
        return InvariantTuple(tuple(e.truncate(precision) for e in self.entries))

    def char_poly(self) -> list[TruncSeries]:
        """det(t I - M) as ascending t-coefficients (length n + 1, monic)."""
        n = self.rank
        field = self.field
        prec = self.precision
        coeffs = [TruncSeries.zero(field, self.var, prec) for _ in range(n + 1)]
        coeffs[n] = TruncSeries.one(field, self.var, prec)
        for i in range(1, n + 1):
            b = self.entries[i - 1]
            coeffs[n - i] = b if i % 2 == 0 else -b
        return coeffs


def _lambda_add(a: list[TruncSeries], b: list[TruncSeries]) -> list[TruncSeries]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = out[i] + y
    return out


def _lambda_mul(a: list[TruncSeries], b: list[TruncSeries]) -> list[TruncSeries]:
    field = a[0].field
    var = a[0].var
    prec = min(x.precision for x in a + b)
    out = [TruncSeries.zero(field, var, prec) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def char_invariants(m: SeriesMatrix) -> InvariantTuple:
    """Characteristic invariants of a matrix, division-free."""
    n = m.rank
    if n > MAX_RANK:
        raise RankTooLarge(f"rank {n} exceeds the supported bound {MAX_RANK}")
    field = m.field
    var = m.var
    prec = m.precision
    zero = TruncSeries.zero(field, var, prec)
    one = TruncSeries.one(field, var, prec)

    # entries of t*I - M as degree <= 1 polynomials in t
    def cell(i: int, j: int) -> list[TruncSeries]:
        if i == j:
            return [-m.entry(i, j), one]
        return [-m.entry(i, j), zero]

    # Row-by-row Laplace expansion over column subsets.  minors maps a
    # column bitmask S with |S| = r to det(rows 0..r-1, cols S).
    minors: dict[int, list[TruncSeries]] = {0: [one]}
    for row in range(n):
        nxt: dict[int, list[TruncSeries]] = {}
        for mask, sub in minors.items():
            for c in range(n):
                if (mask >> c) & 1:
                    continue
                below = bin(mask & ((1 << c) - 1)).count("1")
                term = _lambda_mul(cell(row, c), sub)
                if (row + below) % 2 == 1:
                    term = [-t for t in term]
                newmask = mask | (1 << c)
                if newmask in nxt:
                    nxt[newmask] = _lambda_add(nxt[newmask], term)
                else:
                    nxt[newmask] = term
        minors = nxt
    charpoly = minors[(1 << n) - 1]
    entries = []
    for i in range(1, n + 1):
        c = charpoly[n - i] if n - i < len(charpoly) else zero
        entries.append(c if i % 2 == 0 else -c)
    return InvariantTuple(tuple(entries))


def companion_section(b: InvariantTuple) -> SeriesMatrix:
    """The companion matrix of det(t I - M); a section of char_invariants."""
    n = b.rank
    field = b.field
    var = b.var
    prec = b.precision
    zero = TruncSeries.zero(field, var, prec)
    one = TruncSeries.one(field, var, prec)
    q = b.char_poly()
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if j == n - 1:
                row.append(-q[i])
            elif i == j + 1:
                row.append(one)
            else:
                row.append(zero)
        rows.append(tuple(row))
    return SeriesMatrix(tuple(rows))


def descend_invariants(b: InvariantTuple) -> InvariantTuple:
    """Entrywise descent of a p-curvature invariant tuple to the twist.

    Only meaningful for tuples arising from a p-curvature, where every
    entry is supported on exponents divisible by p.  A failing exponent is
    a broken theorem, hence InternalInconsistency, except when the stated
    precision is too small to have seen a full period.
    """
    p = b.field.p
    entries = []
    for e in b.entries:
        try:
            entries.append(e.descend_pth_power())
        except NotAPthPower as exc:
            if e.precision < p:
                raise InsufficientPrecision(
                    f"invariant precision {e.precision} below p = {p}"
                ) from exc
            raise InternalInconsistency(
                "characteristic invariant of a p-curvature failed to descend",
                exponent=exc.exponent,
                coefficient=exc.coefficient,
            ) from exc
    return InvariantTuple(tuple(entries))


def phitchin(conn: Connection) -> InvariantTuple:
    """Invariants of the p-curvature, descended to the twist coordinate."""
    p = conn.field.p
    if conn.precision < p + 2:
        raise InsufficientPrecision(
            f"need precision >= p + 2 = {p + 2}, have {conn.precision}"
        )
    psi = pcurv(conn)
    return descend_invariants(char_invariants(psi.matrix))


def frobenius_base_pullback(b_twist: InvariantTuple) -> InvariantTuple:
    """Pull an invariant tuple back along the relative Frobenius: z' -> z^p."""
    if b_twist.var != VAR_TWIST:
        raise VarMismatch("pullback consumes a z'-side tuple")
    return InvariantTuple(tuple(e.expand_pth_power() for e in b_twist.entries))


def tau(b: InvariantTuple):
    """The tautological element: the class of t in the spectral ring of b.

    Its regular representation in the cyclic frame is exactly
    companion_section(b).
    """
    from .spectral import build_spectral

    ring = build_spectral(b)
    return ring.tautological()
