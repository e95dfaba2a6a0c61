"""Spectral rings, their derivations, and eigen decompositions.

The spectral ring of an invariant tuple b is R = O[t]/(char_b) with
char_b = det(t I - M) for any matrix M realizing b.  Elements are stored
as their unique degree < n representatives with truncated-series
coefficients (the cyclic frame).

The z-derivation of O extends to R exactly when char_b'(t) is a unit in
R, by differentiating the defining relation:

    dt/dz = - char_b^{dz}(t) * char_b'(t)^(-1)

where char_b^{dz} differentiates the coefficients only.  When char_b'(t)
is not a unit (an inseparable or ramified cover) the ring is flagged
derivation-free and derivative-taking operations refuse.

hensel_eigen lifts the residue eigenvalues of a p-curvature matrix to
series by Newton iteration and assembles Lagrange projectors and an
eigenbasis; the preconditions (split, simple residue spectrum) are
reported precisely when they fail.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd as _intgcd

from . import polyring
from .connection import FHiggs
from .errors import (
    BaseMismatch,
    DerivationUnavailable,
    DimensionMismatch,
    InternalInconsistency,
    NonSplitResidue,
    NonUnit,
    RepeatedResidueRoot,
)
from .hitchin import InvariantTuple, char_invariants
from .matrix import SeriesMatrix
from .series import TruncSeries


@dataclass(frozen=True)
class SpectralRing:
    """O[t]/(char_b), b an invariant tuple in either coordinate."""

    b: InvariantTuple

    @property
    def rank(self) -> int:
        return self.b.rank

    @property
    def field(self):
        return self.b.field

    @property
    def var(self) -> str:
        return self.b.var

    @property
    def precision(self) -> int:
        return self.b.precision

    def char_poly(self) -> list[TruncSeries]:
        return self.b.char_poly()

    def residue_char(self) -> list[int]:
        return [c.coeff(0) for c in self.char_poly()]

    # -- element construction ---------------------------------------------

    def element(self, coeffs: list[TruncSeries]) -> "SpectralElement":
        n = self.rank
        coeffs = list(coeffs)
        if len(coeffs) > n:
            coeffs = self._reduce(coeffs)
        prec = min([c.precision for c in coeffs] + [self.precision])
        padded = [c.truncate(prec) for c in coeffs]
        zero = TruncSeries.zero(self.field, self.var, prec)
        while len(padded) < n:
            padded.append(zero)
        return SpectralElement(self, tuple(padded))

    def zero(self) -> "SpectralElement":
        return self.element([TruncSeries.zero(self.field, self.var, self.precision)])

    def one(self) -> "SpectralElement":
        return self.element([TruncSeries.one(self.field, self.var, self.precision)])

    def from_series(self, s: TruncSeries) -> "SpectralElement":
        return self.element([s])

    def tautological(self) -> "SpectralElement":
        """The class of t; reduces to b_1 when n = 1."""
        prec = self.precision
        zero = TruncSeries.zero(self.field, self.var, prec)
        one = TruncSeries.one(self.field, self.var, prec)
        return self.element([zero, one])

    def _reduce(self, coeffs: list[TruncSeries]) -> list[TruncSeries]:
        """Reduce a t-polynomial by the monic characteristic polynomial."""
        n = self.rank
        q = self.char_poly()
        out = list(coeffs)
        for i in range(len(out) - 1, n - 1, -1):
            lead = out.pop()
            if lead.is_zero():
                continue
            for j in range(n):
                out[i - n + j] = out[i - n + j] - lead * q[j]
        return out

    # -- derivation -------------------------------------------------------

    def has_derivation(self) -> bool:
        return self._derivation_table() is not None

    def _derivation_table(self) -> "SpectralElement | None":
        """dt/dz as a ring element, or None when unavailable."""
        if not hasattr(self, "_dt_cache"):
            q = self.char_poly()
            n = self.rank
            dchar = self.element([q[i + 1].scale_int(i + 1) for i in range(n)])
            dz = self.element([q[i].derivative() for i in range(n)])
            try:
                dt: SpectralElement | None = -(dz * dchar.inverse())
            except NonUnit:
                dt = None
            object.__setattr__(self, "_dt_cache", dt)
        return getattr(self, "_dt_cache")

    def derivation(self) -> "SpectralElement":
        dt = self._derivation_table()
        if dt is None:
            raise DerivationUnavailable(
                "char' is not a unit in the spectral ring; no canonical derivation"
            )
        return dt


@dataclass(frozen=True)
class SpectralElement:
    """A degree < n representative in the cyclic frame of a spectral ring."""

    ring: SpectralRing
    coeffs: tuple[TruncSeries, ...]

    @property
    def precision(self) -> int:
        return self.coeffs[0].precision

    def _check_peer(self, other: "SpectralElement") -> None:
        if self.ring.rank != other.ring.rank or not self.ring.b.agrees_with(other.ring.b):
            raise BaseMismatch("spectral elements live over different rings")

    def __add__(self, other: "SpectralElement") -> "SpectralElement":
        self._check_peer(other)
        prec = min(self.precision, other.precision)
        return self.ring.element(
            [a.truncate(prec) + b.truncate(prec) for a, b in zip(self.coeffs, other.coeffs)]
        )

    def __sub__(self, other: "SpectralElement") -> "SpectralElement":
        return self + (-other)

    def __neg__(self) -> "SpectralElement":
        return self.ring.element([-c for c in self.coeffs])

    def __mul__(self, other: "SpectralElement") -> "SpectralElement":
        self._check_peer(other)
        n = self.ring.rank
        prec = min(self.precision, other.precision)
        zero = TruncSeries.zero(self.ring.field, self.ring.var, prec)
        conv = [zero] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                conv[i + j] = conv[i + j] + a.truncate(prec) * b.truncate(prec)
        return self.ring.element(conv)

    def __pow__(self, e: int) -> "SpectralElement":
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def agrees_with(self, other: "SpectralElement") -> bool:
        return all(a.agrees_with(b) for a, b in zip(self.coeffs, other.coeffs))

    def truncate(self, precision: int) -> "SpectralElement":
        return self.ring.element([c.truncate(precision) for c in self.coeffs])

    # -- unit structure ---------------------------------------------------

    def residue_poly(self) -> list[int]:
        return polyring.trim([c.coeff(0) for c in self.coeffs])

    def is_unit(self) -> bool:
        f = self.ring.field
        g = polyring.gcd(f, self.residue_poly(), self.ring.residue_char())
        return polyring.degree(g) == 0

    def inverse(self) -> "SpectralElement":
        """Invert by residue ext-gcd plus z-adic Newton refinement."""
        f = self.ring.field
        res = self.residue_poly()
        char0 = self.ring.residue_char()
        g, s, _ = polyring.extgcd(f, res, char0)
        if polyring.degree(g) != 0:
            raise NonUnit("element is a zero divisor at the residue")
        prec = self.precision
        inv0 = polyring.mod(f, s, char0)
        v = self.ring.element(
            [TruncSeries.constant(f, self.ring.var, c, prec) for c in inv0]
            or [TruncSeries.zero(f, self.ring.var, prec)]
        )
        for _ in range(max(1, (prec - 1).bit_length() + 1)):
            v = v + v - (self * v) * v
        return v

    def derivative(self) -> "SpectralElement":
        """The extended z-derivation: coefficientwise d/dz plus dt/dz d/dt."""
        dz_part = self.ring.element([c.derivative() for c in self.coeffs])
        n = self.ring.rank
        if n == 1:
            return dz_part
        dt = self.ring.derivation()
        ddt = [self.coeffs[i + 1].scale_int(i + 1) for i in range(n - 1)]
        return dz_part + self.ring.element(ddt) * dt

    def dlog(self) -> "SpectralElement":
        return self.inverse() * self.derivative()

    # -- evaluation -------------------------------------------------------

    def eval_series(self, mu: TruncSeries) -> TruncSeries:
        """Evaluate the representative at a series value of t."""
        prec = min(self.precision, mu.precision)
        acc = TruncSeries.zero(self.ring.field, mu.var, prec)
        mt = mu.truncate(prec)
        for c in reversed(self.coeffs):
            acc = acc * mt + c.truncate(prec)
        return acc

    def eval_matrix(self, m: SeriesMatrix) -> SeriesMatrix:
        """Evaluate the representative at a matrix value of t (Horner)."""
        prec = min(self.precision, m.precision)
        mt = m.truncate(prec)
        n = m.rank
        acc = SeriesMatrix.zero(m.field, m.var, n, prec)
        for c in reversed(self.coeffs):
            cc = c.truncate(prec)
            acc = (acc @ mt) + SeriesMatrix.diagonal([cc] * n)
        return acc


@dataclass(frozen=True)
class EigenData:
    """Split spectral data of a p-curvature matrix."""

    mus: tuple[TruncSeries, ...]
    projectors: tuple[SeriesMatrix, ...]
    gauge: SeriesMatrix
    gauge_inv: SeriesMatrix

    @property
    def rank(self) -> int:
        return len(self.mus)


def build_spectral(b: InvariantTuple) -> SpectralRing:
    return SpectralRing(b)


def check_residue_split(field, res_char: list[int], n: int) -> list[int]:
    """Residue roots of a simple split spectrum; precise errors otherwise.

    NonSplitResidue carries the extension degree that would rationalize
    the whole residue spectrum: the lcm of the residue factor degrees.
    """
    sqfree_gcd = polyring.gcd(field, res_char, polyring.deriv(field, res_char))
    if polyring.degree(sqfree_gcd) > 0:
        raise RepeatedResidueRoot("residue characteristic polynomial has a repeated root")
    res_roots = polyring.roots(field, res_char)
    if len(res_roots) < n:
        degrees = polyring.factor_degrees(field, res_char)
        lcm = 1
        for d in degrees:
            lcm = lcm * d // _intgcd(lcm, d)
        raise NonSplitResidue(
            "residue spectrum does not split over the coefficient field",
            suggested_degree=lcm,
        )
    return res_roots


def regular_rep(elt: SpectralElement, eigen: EigenData | None = None) -> SeriesMatrix:
    """The element as an endomorphism matrix.

    Cyclic frame (no eigen data): multiplication on 1, t, ..., t^(n-1);
    for the tautological element this is the companion matrix.  Eigen
    frame: diag of the eigenvalue evaluations conjugated back by the
    eigenbasis, i.e. the endomorphism commuting with the p-curvature.
    """
    ring = elt.ring
    n = ring.rank
    if eigen is None:
        cols = []
        taut = ring.tautological()
        power = ring.one()
        for _ in range(n):
            cols.append((elt * power).coeffs)
            power = power * taut
        prec = min(c.precision for col in cols for c in col)
        rows = tuple(
            tuple(cols[j][i].truncate(prec) for j in range(n)) for i in range(n)
        )
        return SeriesMatrix(rows)
    if eigen.rank != n:
        raise DimensionMismatch("eigen data rank does not match the ring")
    diag = [elt.eval_series(mu) for mu in eigen.mus]
    prec = min([d.precision for d in diag] + [eigen.gauge.precision])
    diag_m = SeriesMatrix.diagonal([d.truncate(prec) for d in diag])
    g = eigen.gauge.truncate(prec)
    g_inv = eigen.gauge_inv.truncate(prec)
    return g @ diag_m @ g_inv


def hensel_eigen(psi: FHiggs, bp: InvariantTuple) -> EigenData:
    """Split eigen structure of a p-curvature matrix.

    Requires the residue characteristic polynomial to have n distinct
    roots in the coefficient field.  Each root is lifted to a series
    eigenvalue by Newton iteration against char_{bp}; Lagrange projectors
    and a unit eigenbasis follow.  Roots are enumerated ascending by field
    encoding, which fixes every downstream ordering.

    NonSplitResidue suggests the extension degree (over the current
    coefficient field) that would make the whole residue spectrum
    rational: the lcm of the residue factor degrees.
    """
    m = psi.matrix
    n = m.rank
    if bp.rank != n:
        raise DimensionMismatch("invariant tuple rank does not match the matrix")
    if not char_invariants(m).agrees_with(bp):
        raise BaseMismatch("psi does not realize the supplied invariants")
    prec = min(m.precision, bp.precision)
    m = m.truncate(prec)
    field = m.field
    ring = SpectralRing(bp.truncate(prec))
    char = ring.char_poly()
    res_roots = check_residue_split(field, ring.residue_char(), n)

    def horner(coeffs: list[TruncSeries], mu: TruncSeries) -> TruncSeries:
        acc = TruncSeries.zero(field, mu.var, mu.precision)
        for c in reversed(coeffs):
            acc = acc * mu + c.truncate(mu.precision)
        return acc

    dchar = [char[i + 1].scale_int(i + 1) for i in range(n)]
    mus = []
    for r in res_roots:
        mu = TruncSeries.constant(field, m.var, r, prec)
        for _ in range(max(1, (prec - 1).bit_length() + 1)):
            mu = mu - horner(char, mu) * horner(dchar, mu).inverse()
        if not horner(char, mu).is_zero():
            raise InternalInconsistency("Newton lifting failed to converge")
        mus.append(mu)

    projectors = []
    ident = SeriesMatrix.identity(field, m.var, n, prec)
    for i in range(n):
        proj = ident
        for j in range(n):
            if j == i:
                continue
            diff_inv = (mus[i] - mus[j]).inverse()
            shifted = m - SeriesMatrix.diagonal([mus[j]] * n)
            proj = proj @ shifted.scale(diff_inv)
        projectors.append(proj)

    cols = []
    for i in range(n):
        chosen = None
        for kcol in range(n):
            col = tuple(projectors[i].entry(r, kcol) for r in range(n))
            if any(c.is_unit() for c in col):
                chosen = col
                break
        if chosen is None:
            raise InternalInconsistency("projector has no unit column")
        cols.append(chosen)
    g = SeriesMatrix(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))
    g_inv = g.inverse()
    return EigenData(tuple(mus), tuple(projectors), g, g_inv)
