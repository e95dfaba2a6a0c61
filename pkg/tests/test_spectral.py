"""Spectral chart rings, Hensel eigen splitting, regular representations."""

from __future__ import annotations

import pytest

from pdisk.connection import FHiggs
from pdisk.errors import (
    BaseMismatch,
    DerivationUnavailable,
    DimensionMismatch,
    NonSplitResidue,
    NonUnit,
    RepeatedResidueRoot,
)
from pdisk.field import FieldSpec
from pdisk.hitchin import InvariantTuple, char_invariants, companion_section
from pdisk.matrix import SeriesMatrix
from pdisk.rng import SplitMix64
from pdisk.series import TruncSeries, VAR_DISK
from pdisk.spectral import EigenData, build_spectral, hensel_eigen, regular_rep

from conftest import M, S

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F5 = FieldSpec(5)
F9 = FieldSpec(3, 2, (1, 0, 1))


def inv(field: FieldSpec, texts: list[str], precision: int) -> InvariantTuple:
    return InvariantTuple(tuple(S(field, t, precision) for t in texts))


def artin_schreier_ring(precision: int = 9):
    # char = t^2 + t + z^2 over F_2: trace 1, det z^2
    return build_spectral(inv(F2, ["1", "z^2"], precision))


# ==========================================================================
# ring construction and the derivation
# ==========================================================================


class TestBuildSpectral:
    def test_rank_one_collapses_to_base(self) -> None:
        f = S(F5, "2 + z^3", 7)
        ring = build_spectral(InvariantTuple((f,)))
        taut = ring.tautological()
        assert taut.coeffs == (f,)
        # the derivation then continues d/dz
        assert ring.derivation().coeffs[0] == f.derivative()

    def test_char_poly_of_artin_schreier(self) -> None:
        ring = artin_schreier_ring()
        q = ring.char_poly()
        assert [str(c) for c in q] == ["z^2", "1", "1"]
        assert ring.residue_char() == [0, 1, 1]

    def test_tautological_satisfies_char(self) -> None:
        ring = artin_schreier_ring()
        t = ring.tautological()
        rel = t * t + t + ring.from_series(S(F2, "z^2", 9))
        assert rel.is_zero()

    def test_separable_derivation_vanishes_here(self) -> None:
        # differentiate t^2 + t + z^2 = 0: (2t + 1) dt = -2z dz, so dt = 0
        ring = artin_schreier_ring()
        assert ring.has_derivation()
        assert ring.derivation().is_zero()

    def test_inseparable_cover_has_no_derivation(self) -> None:
        # char = t^2 + z^2 has char' = 2t = 0
        ring = build_spectral(inv(F2, ["0", "z^2"], 9))
        assert not ring.has_derivation()
        with pytest.raises(DerivationUnavailable):
            ring.derivation()

    def test_derivation_with_unit_char_prime(self) -> None:
        # char = t^2 - t + z over F_3: char' = 2t - 1, unit residue poly
        ring = build_spectral(inv(F3, ["1", "z"], 8))
        t = ring.tautological()
        # implicit differentiation: dt must solve (2t - 1) dt + 1 = 0
        dt = ring.derivation()
        two_t = t + t
        one = ring.one()
        assert ((two_t - one) * dt + one).is_zero()

    def test_reduction_mod_char(self) -> None:
        ring = artin_schreier_ring()
        t = ring.tautological()
        # t^2 = t + z^2 mod char in characteristic 2
        sq = t * t
        assert str(sq.coeffs[0]) == "z^2"
        assert str(sq.coeffs[1]) == "1"


# ==========================================================================
# element arithmetic
# ==========================================================================


class TestElements:
    def test_newton_inverse(self) -> None:
        rng = SplitMix64(50)
        ring = artin_schreier_ring()
        found = 0
        while found < 15:
            cand = ring.element(
                [rng.series(F2, VAR_DISK, 9), rng.series(F2, VAR_DISK, 9)]
            )
            if not cand.is_unit():
                continue
            found += 1
            assert (cand * cand.inverse() - ring.one()).is_zero()

    def test_zero_divisor_refused(self) -> None:
        # in O[t]/(t^2 + t) the class of t kills t + 1
        ring = build_spectral(inv(F2, ["1", "0"], 6))
        t = ring.tautological()
        assert not t.is_unit()
        with pytest.raises(NonUnit):
            t.inverse()
        other = t + ring.one()
        assert (t * other).is_zero()

    def test_eval_series_is_horner(self) -> None:
        ring = build_spectral(inv(F3, ["1", "z"], 8))
        elt = ring.element([S(F3, "z", 8), S(F3, "1", 8)])
        mu = S(F3, "2 + z^2", 8)
        assert elt.eval_series(mu) == S(F3, "2 + z + z^2", 8)

    def test_dlog_of_unit(self) -> None:
        ring = build_spectral(inv(F3, ["1", "z"], 8))
        u = ring.from_series(S(F3, "1 + z", 8))
        got = u.dlog()
        expect = ring.from_series(S(F3, "1 + z", 8).inverse() * S(F3, "1", 7))
        assert got.agrees_with(expect)

    def test_peer_rings_checked(self) -> None:
        a = artin_schreier_ring().one()
        b = build_spectral(inv(F2, ["0", "z^2"], 9)).one()
        with pytest.raises(BaseMismatch):
            a + b

    def test_power_matches_repeated_product(self) -> None:
        ring = artin_schreier_ring()
        t = ring.tautological()
        assert (t ** 5).agrees_with(t * t * t * t * t)


# ==========================================================================
# hensel_eigen
# ==========================================================================


def as_psi(m: SeriesMatrix, p: int) -> FHiggs:
    return FHiggs(m, p)


class TestHenselEigen:
    def test_artin_schreier_lift(self) -> None:
        bp = inv(F2, ["1", "z^2"], 9)
        psi = as_psi(companion_section(bp), 2)
        eigen = hensel_eigen(psi, bp)
        lo, hi = eigen.mus
        # the root over 0 is the lacunary series z^2 + z^4 + z^8 + ...
        assert str(lo) == "z^2 + z^4 + z^8"
        assert hi == lo + S(F2, "1", 9)
        assert (lo + hi) == S(F2, "1", 9)
        assert lo * hi == S(F2, "z^2", 9)

    def test_projector_identities(self) -> None:
        bp = inv(F2, ["1", "z^2"], 9)
        psi = as_psi(companion_section(bp), 2)
        eigen = hensel_eigen(psi, bp)
        p1, p2 = eigen.projectors
        n = 2
        ident = SeriesMatrix.identity(F2, VAR_DISK, n, p1.precision)
        assert p1 + p2 == ident
        assert p1 @ p1 == p1.truncate(p1.precision)
        assert (p1 @ p2).is_zero()
        recon = p1.scale(eigen.mus[0].truncate(p1.precision)) + p2.scale(
            eigen.mus[1].truncate(p2.precision)
        )
        assert recon.agrees_with(psi.matrix)

    def test_gauge_diagonalises(self) -> None:
        bp = inv(F3, ["z", "2 + z^2"], 8)
        psi = as_psi(companion_section(bp), 3)
        eigen = hensel_eigen(psi, bp)
        prec = eigen.gauge.precision
        moved = eigen.gauge_inv @ psi.matrix.truncate(prec) @ eigen.gauge
        for i in range(2):
            for j in range(2):
                entry = moved.entry(i, j)
                if i == j:
                    assert entry.agrees_with(eigen.mus[i])
                else:
                    assert entry.is_zero()

    def test_diagonal_input_gives_identity_gauge(self) -> None:
        m = M(F5, [["1", "0"], ["0", "3"]], 7)
        bp = char_invariants(m)
        eigen = hensel_eigen(as_psi(m, 5), bp)
        assert [str(mu) for mu in eigen.mus] == ["1", "3"]
        assert eigen.gauge == SeriesMatrix.identity(F5, VAR_DISK, 2, 7)

    def test_repeated_residue_root(self) -> None:
        bp = inv(F2, ["0", "z^2"], 9)
        psi = as_psi(companion_section(bp), 2)
        with pytest.raises(RepeatedResidueRoot):
            hensel_eigen(psi, bp)

    def test_nonsplit_residue_suggests_degree(self) -> None:
        # t^2 + 1 is irreducible over F_3
        bp = inv(F3, ["0", "1"], 8)
        psi = as_psi(companion_section(bp), 3)
        with pytest.raises(NonSplitResidue) as exc:
            hensel_eigen(psi, bp)
        assert exc.value.suggested_degree == 2

    def test_same_spectrum_splits_over_f9(self) -> None:
        # the same residue char t^2 + 1 factors over F_9 as (t - x)(t + x)
        bp = inv(F9, ["0", "1"], 8)
        psi = as_psi(companion_section(bp), 3)
        eigen = hensel_eigen(psi, bp)
        assert sorted(mu.coeff(0) for mu in eigen.mus) == [3, 6]

    def test_wrong_invariants_refused(self) -> None:
        m = M(F3, [["0", "1"], ["0", "0"]], 6)
        with pytest.raises(BaseMismatch):
            hensel_eigen(as_psi(m, 3), inv(F3, ["1", "1"], 6))

    def test_rank_mismatch_refused(self) -> None:
        m = M(F3, [["0", "1"], ["0", "0"]], 6)
        with pytest.raises(DimensionMismatch):
            hensel_eigen(as_psi(m, 3), inv(F3, ["1"], 6))

    def test_three_by_three_split(self) -> None:
        m = M(F5, [["0", "z", "0"], ["1", "1", "z^2"], ["0", "0", "3 + z"]], 9)
        bp = char_invariants(m)
        eigen = hensel_eigen(as_psi(m, 5), bp)
        p_sum = eigen.projectors[0]
        for pk in eigen.projectors[1:]:
            p_sum = p_sum + pk
        assert p_sum == SeriesMatrix.identity(F5, VAR_DISK, 3, p_sum.precision)
        recon = SeriesMatrix.zero(F5, VAR_DISK, 3, p_sum.precision)
        for mu, pk in zip(eigen.mus, eigen.projectors):
            recon = recon + pk.scale(mu.truncate(p_sum.precision))
        assert recon.agrees_with(m)


# ==========================================================================
# regular_rep
# ==========================================================================


class TestRegularRep:
    def test_one_is_identity(self) -> None:
        ring = artin_schreier_ring()
        assert regular_rep(ring.one()) == SeriesMatrix.identity(F2, VAR_DISK, 2, 9)

    def test_taut_is_companion(self) -> None:
        for field, texts in ((F2, ["1", "z^2"]), (F3, ["z", "2 + z^2"]), (F5, ["1", "z", "4"])):
            b = inv(field, texts, 8)
            ring = build_spectral(b)
            assert regular_rep(ring.tautological()) == companion_section(b)

    def test_ring_homomorphism(self) -> None:
        rng = SplitMix64(51)
        ring = build_spectral(inv(F3, ["z", "2 + z^2"], 8))
        for _ in range(15):
            a = ring.element([rng.series(F3, VAR_DISK, 8) for _ in range(2)])
            b = ring.element([rng.series(F3, VAR_DISK, 8) for _ in range(2)])
            lhs = regular_rep(a * b)
            rhs = regular_rep(a) @ regular_rep(b)
            assert lhs.agrees_with(rhs)
            assert regular_rep(a + b) == regular_rep(a) + regular_rep(b)

    def test_eigen_frame_recovers_psi(self) -> None:
        bp = inv(F2, ["1", "z^2"], 9)
        psi = as_psi(companion_section(bp), 2)
        eigen = hensel_eigen(psi, bp)
        ring = build_spectral(bp)
        got = regular_rep(ring.tautological(), eigen)
        assert got.agrees_with(psi.matrix)

    def test_eigen_and_cyclic_share_invariants(self) -> None:
        bp = inv(F3, ["z", "2 + z^2"], 8)
        psi = as_psi(companion_section(bp), 3)
        eigen = hensel_eigen(psi, bp)
        ring = build_spectral(bp)
        elt = ring.element([S(F3, "1 + z", 8), S(F3, "2", 8)])
        cyc = regular_rep(elt)
        eig = regular_rep(elt, eigen)
        assert char_invariants(eig).agrees_with(char_invariants(cyc))

    def test_eigen_rank_guard(self) -> None:
        bp = inv(F2, ["1", "z^2"], 9)
        eigen = hensel_eigen(as_psi(companion_section(bp), 2), bp)
        ring = build_spectral(inv(F2, ["1"], 9))
        with pytest.raises(DimensionMismatch):
            regular_rep(ring.one(), eigen)

    def test_eval_matrix_on_taut(self) -> None:
        bp = inv(F3, ["z", "2 + z^2"], 8)
        m = companion_section(bp)
        ring = build_spectral(bp)
        assert ring.tautological().eval_matrix(m) == m
        shifted = ring.element([S(F3, "z", 8), S(F3, "1", 8)])
        expect = m + SeriesMatrix.diagonal([S(F3, "z", 8)] * 2)
        assert shifted.eval_matrix(m) == expect
