"""The Cartier operator, the additive curvature map, and flat sections.

Chart rules on the disk, under the package's coordinate conventions
(relative Frobenius fixes coefficients, the twist projection raises them
to the p-th power):

    cartier_op:  sum c_m z^m dz  ->  sum over m = jp+p-1 of c_m z'^j dz'
    hp_map(zeta, w) = zeta^[p] (x) pi_star(w)  -  zeta (x) cartier_op(w)

For a scalar Lie coefficient zeta = 1 the map computes exactly the
descended p-curvature of d/dz + f, which the test suite checks against
the independent closed form f^p + (d/dz)^(p-1) f.

flat_sections solves (d/dz + A) v = 0 order by order.  The coefficient
recursion multiplies by m+1, which vanishes in characteristic p at every
p-th step; those steps are obstructed exactly by the p-curvature, and the
first nonvanishing residual is reported as a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .connection import Connection, FHiggs
from .errors import (
    DimensionMismatch,
    FieldMismatch,
    NonUnitConstantTerm,
    NonzeroPCurvature,
    VarMismatch,
    ZeroPrecision,
)
from .matrix import SeriesMatrix
from .series import TruncSeries, VAR_DISK, VAR_TWIST


@dataclass(frozen=True)
class OneForm:
    """f dz with f a z-series; precision is that of f."""

    coefficient: TruncSeries

    def __post_init__(self) -> None:
        if self.coefficient.var != VAR_DISK:
            raise VarMismatch("a one-form on the disk needs a z-series coefficient")

    @property
    def precision(self) -> int:
        return self.coefficient.precision

    @property
    def field(self):
        return self.coefficient.field

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.coefficient + other.coefficient)

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.coefficient - other.coefficient)

    def __neg__(self) -> "OneForm":
        return OneForm(-self.coefficient)

    def is_zero(self) -> bool:
        return self.coefficient.is_zero()

    def agrees_with(self, other: "OneForm") -> bool:
        return self.coefficient.agrees_with(other.coefficient)


@dataclass(frozen=True)
class TwistOneForm:
    """g dz' with g a z'-series."""

    coefficient: TruncSeries

    def __post_init__(self) -> None:
        if self.coefficient.var != VAR_TWIST:
            raise VarMismatch("a one-form on the twist needs a z'-series coefficient")

    @property
    def precision(self) -> int:
        return self.coefficient.precision

    @property
    def field(self):
        return self.coefficient.field

    def __add__(self, other: "TwistOneForm") -> "TwistOneForm":
        return TwistOneForm(self.coefficient + other.coefficient)

    def __sub__(self, other: "TwistOneForm") -> "TwistOneForm":
        return TwistOneForm(self.coefficient - other.coefficient)

    def __neg__(self) -> "TwistOneForm":
        return TwistOneForm(-self.coefficient)

    def is_zero(self) -> bool:
        return self.coefficient.is_zero()

    def agrees_with(self, other: "TwistOneForm") -> bool:
        return self.coefficient.agrees_with(other.coefficient)


def cartier_op(w: OneForm) -> TwistOneForm:
    """The Cartier operator in the chart.

    Keeps the coefficients c_m with m = p-1 mod p, relabelled to exponent
    (m-p+1)/p on the twist.  Input precision N determines which of those
    are known: the output precision is ceil((N-p+1)/p), floored at 0.
    """
    s = w.coefficient
    p = s.field.p
    n = s.precision
    nout = max(0, -(-(n - p + 1) // p))
    out = []
    for j in range(nout):
        out.append(s.coeffs[j * p + p - 1])
    return TwistOneForm(TruncSeries(s.field, VAR_TWIST, tuple(out)))


def pi_star_form(w: OneForm) -> TwistOneForm:
    """Coefficientwise twist projection of a one-form; precision preserved."""
    return TwistOneForm(w.coefficient.pi_star())


def hp_map(zeta: int, w: OneForm) -> TwistOneForm:
    """The additive curvature map with a scalar Lie coefficient.

    zeta^[p] is the field p-th power.  Spectral-ring Lie coefficients are
    handled componentwise by the harmonic module, which reduces them to
    this scalar case in an eigen frame.
    """
    field = w.field
    zeta = field.validate(zeta)
    zp = field.frobenius(zeta)
    left = pi_star_form(w).coefficient.scale(zp)
    right = cartier_op(w).coefficient.scale(zeta)
    return TwistOneForm(left - right)


def solve_hp(target: TwistOneForm) -> OneForm:
    """A preimage of the target under hp_map(1, .), built triangularly.

    Writing the unknown as sum u_m z^m dz, the equation at z'^j reads
    u_j^p - u_{jp+p-1} = eta_j, which determines the coefficients at
    exponents p-1 mod p from earlier ones; all unconstrained coefficients
    are set to zero, so the output is deterministic.  The result carries
    precision p * N' and maps back onto the target exactly.
    """
    eta = target.coefficient
    field = eta.field
    p = field.p
    nprime = eta.precision
    if nprime == 0:
        raise ZeroPrecision("cannot solve against a precision-0 target")
    nout = p * nprime
    u = [0] * nout
    for j in range(nprime):
        m = j * p + p - 1
        u[m] = field.sub(field.frobenius(u[j]), eta.coeffs[j])
    return OneForm(TruncSeries(field, VAR_DISK, tuple(u)))


def kernel_unit(w: OneForm) -> TruncSeries:
    """A unit g with dlog g = w, for w in the kernel of hp_map(1, .).

    Solves dg/dz = w g order by order; the recursion is obstructed at the
    p-th steps exactly by the p-curvature of d/dz - w, which vanishes when
    hp_map(1, w) = 0.  Raises NonzeroPCurvature otherwise.
    """
    f = w.coefficient
    field = f.field
    p = field.p
    n = f.precision
    g = [0] * (n + 1)
    g[0] = 1
    for m in range(n):
        # coefficient of z^m in w * g
        acc = 0
        for i in range(m + 1):
            acc = field.add(acc, field.mul(f.coeffs[i], g[m - i]))
        if (m + 1) % p == 0:
            if acc != 0:
                raise NonzeroPCurvature(m, acc)
            g[m + 1] = 0
        else:
            g[m + 1] = field.mul(field.scalar(pow(m + 1, p - 2, p)), acc)
    return TruncSeries(field, VAR_DISK, tuple(g))


def flat_sections(conn: Connection) -> SeriesMatrix:
    """The fundamental flat frame of a connection with zero p-curvature.

    Solves (d/dz + A) v = 0 with v(0) = e_j for each j.  At order m+1 the
    recursion reads (m+1) v_{m+1} = -(A v)_m; whenever p divides m+1 the
    left side dies and the right side must vanish, which happens for every
    j exactly when the p-curvature is zero within precision.  The first
    offending order and its residual column are reported; free
    coefficients at the obstructed orders are set to zero.

    On success the returned matrix g = (v^(1) | ... | v^(n)) satisfies
    gauge(g^(-1), conn) = trivial connection.
    """
    trivial_init = tuple(
        tuple(1 if i == j else 0 for j in range(conn.rank)) for i in range(conn.rank)
    )
    zero_a = SeriesMatrix.zero(conn.field, VAR_DISK, conn.rank, conn.precision)
    return flat_matrix_section(Connection(zero_a), conn, trivial_init)


def flat_matrix_section(
    source: Connection, target: Connection, initial: tuple[tuple[int, ...], ...]
) -> SeriesMatrix:
    """Solve dh/dz + A_target h - h A_source = 0 with h(0) = initial.

    flat_sections is the special case A_source = 0, initial = identity.
    The solution intertwines: gauge(h, source) = target for invertible h.
    """
    if source.rank != target.rank:
        raise DimensionMismatch("connection ranks differ")
    if source.field != target.field:
        raise FieldMismatch("connections live over different fields")
    field = target.field
    p = field.p
    n = target.rank
    nprec = min(source.precision, target.precision)
    a_t = [[target.matrix.entry(i, j).coeffs for j in range(n)] for i in range(n)]
    a_s = [[source.matrix.entry(i, j).coeffs for j in range(n)] for i in range(n)]
    # h[m][i][j]: order-m coefficient of the solution
    h = [[[field.validate(initial[i][j]) for j in range(n)] for i in range(n)]]
    for m in range(nprec):
        resid = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                acc = 0
                for t in range(n):
                    for s in range(m + 1):
                        acc = field.add(acc, field.mul(a_t[i][t][s], h[m - s][t][j]))
                        acc = field.sub(acc, field.mul(h[m - s][i][t], a_s[t][j][s]))
                resid[i][j] = acc
        if (m + 1) % p == 0:
            bad = [c for row in resid for c in row if c != 0]
            if bad:
                raise NonzeroPCurvature(m, resid[0][0] if n == 1 else resid)
            h.append([[0] * n for _ in range(n)])
        else:
            inv = field.scalar(pow(m + 1, p - 2, p))
            h.append(
                [[field.mul(inv, field.neg(resid[i][j])) for j in range(n)] for i in range(n)]
            )
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(
                TruncSeries(field, VAR_DISK, tuple(h[m][i][j] for m in range(nprec + 1)))
            )
        rows.append(tuple(row))
    return SeriesMatrix(tuple(rows))


def verify_flat_iff_curvature_zero(conn: Connection, psi: FHiggs) -> bool:
    """Cross-check helper: flat_sections succeeds exactly when psi = 0."""
    try:
        flat_sections(conn)
        return psi.matrix.is_zero()
    except NonzeroPCurvature:
        return not psi.matrix.is_zero()
