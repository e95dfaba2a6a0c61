"""Flat connections on the trivialized rank-n bundle over the disk.

A connection is the operator d/dz + A for an n x n series matrix A; this
sign is a global convention of the package.  Under it the p-curvature
satisfies dPsi/dz = [Psi, A], equivalently dPsi/dz + A Psi - Psi A = 0,
which check_horizontality asserts.

pcurv has exactly one semantics: apply the operator p times to each
constant basis vector and read off the columns.  The rank-1 closed form
f^p + (d/dz)^(p-1) f exists in the test suite as an independent oracle and
is deliberately not used here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch, InsufficientPrecision, VarMismatch
from .matrix import SeriesMatrix
from .series import TruncSeries, VAR_DISK


@dataclass(frozen=True)
class Connection:
    """d/dz + matrix, acting on column vectors of z-series."""

    matrix: SeriesMatrix

    def __post_init__(self) -> None:
        if self.matrix.var != VAR_DISK:
            raise VarMismatch("a connection matrix lives in the z coordinate")

    @property
    def rank(self) -> int:
        return self.matrix.rank

    @property
    def precision(self) -> int:
        return self.matrix.precision

    @property
    def field(self):
        return self.matrix.field

    def apply(self, vec: Sequence[TruncSeries]) -> tuple[TruncSeries, ...]:
        """The operator applied to a column vector: dv/dz + A v."""
        if len(vec) != self.rank:
            raise DimensionMismatch("vector length does not match rank")
        av = self.matrix.matvec(vec)
        return tuple(v.derivative() + w for v, w in zip(vec, av))


@dataclass(frozen=True)
class FHiggs:
    """A p-curvature matrix: twist-linear endomorphism of weight p."""

    matrix: SeriesMatrix
    twist_weight: int

    @property
    def rank(self) -> int:
        return self.matrix.rank


def gauge(g: SeriesMatrix, conn: Connection) -> Connection:
    """Change frame by the unit matrix g: A becomes g A g^(-1) + g d(g^(-1)).

    The defining property (checked in the tests, not here) is
    apply(gauge(g, conn), g v) = g apply(conn, v).
    """
    g_inv = g.inverse()
    a_new = (g @ conn.matrix @ g_inv) + (g @ g_inv.derivative())
    return Connection(a_new)


def pcurv(conn: Connection) -> FHiggs:
    """The p-curvature, by p-fold application to the constant basis vectors.

    A constant vector is exactly known at every order, so the first
    application costs no precision and the result holds N - p + 1 orders.
    """
    n = conn.rank
    field = conn.field
    p = field.p
    nprec = conn.precision
    if nprec < p + 1:
        raise InsufficientPrecision(
            f"need precision >= p + 1 = {p + 1}, have {nprec}"
        )
    cols = []
    for j in range(n):
        vec = tuple(
            TruncSeries.constant(field, VAR_DISK, 1 if i == j else 0, nprec + 1)
            for i in range(n)
        )
        for _ in range(p):
            vec = conn.apply(vec)
        cols.append(vec)
    rows = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return FHiggs(SeriesMatrix(rows), twist_weight=p)


def check_horizontality(conn: Connection, psi: FHiggs | None = None) -> SeriesMatrix:
    """Residual of the defining identity: dPsi/dz + A Psi - Psi A.

    Zero (exactly, coefficient by coefficient) on every valid pair.  When
    psi is omitted it is computed from the connection.
    """
    if conn.precision < conn.field.p + 2:
        raise InsufficientPrecision("need precision >= p + 2 for the residual")
    if psi is None:
        psi = pcurv(conn)
    m = psi.matrix
    a = conn.matrix
    return m.derivative() + (a @ m) - (m @ a)


def dlog(g) -> TruncSeries:
    """Logarithmic derivative g^(-1) dg/dz of a unit series or spectral unit."""
    inverse = g.inverse()
    derivative = g.derivative()
    return inverse * derivative


def hom_flat_section(
    source: Connection, target: Connection, initial: tuple[tuple[int, ...], ...]
) -> SeriesMatrix:
    """The flat section h of the Hom-connection with h(0) = initial.

    h satisfies dh/dz + A_target h - h A_source = 0, so it intertwines the
    two connections: gauge(h, source) = target when h is invertible.
    Raises NonzeroPCurvature at the first obstructed order.
    """
    from .cartier import flat_matrix_section

    return flat_matrix_section(source, target, initial)
