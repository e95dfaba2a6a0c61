"""Matrix layer: shape guards, exact linear algebra, precision behavior."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from pdisk.errors import DimensionMismatch, SingularGauge, VarMismatch
from pdisk.field import FieldSpec
from pdisk.matrix import SeriesMatrix
from pdisk.series import TruncSeries, VAR_DISK

from conftest import M, S

F2 = FieldSpec(2)
F3 = FieldSpec(3)
F5 = FieldSpec(5)


def matrix_strategy(field: FieldSpec, n: int, precision: int):
    cell = st.lists(st.integers(0, field.q - 1), min_size=precision, max_size=precision)
    return st.lists(
        st.lists(cell, min_size=n, max_size=n), min_size=n, max_size=n
    ).map(
        lambda rows: SeriesMatrix.from_rows(
            [[TruncSeries.make(field, VAR_DISK, c) for c in row] for row in rows]
        )
    )


class TestShape:
    def test_identity_and_zero(self) -> None:
        i = SeriesMatrix.identity(F3, VAR_DISK, 3, 4)
        z = SeriesMatrix.zero(F3, VAR_DISK, 3, 4)
        assert (i @ i).agrees_with(i)
        assert (i + z).agrees_with(i)
        assert i.rank == 3
        assert i.precision == 4

    def test_ragged_rejected(self) -> None:
        one = TruncSeries.one(F3, VAR_DISK, 4)
        with pytest.raises(DimensionMismatch):
            SeriesMatrix.from_rows([[one, one], [one]])

    def test_nonsquare_rejected(self) -> None:
        one = TruncSeries.one(F3, VAR_DISK, 4)
        with pytest.raises(DimensionMismatch):
            SeriesMatrix.from_rows([[one, one]])

    def test_mixed_precision_rejected(self) -> None:
        a = TruncSeries.one(F3, VAR_DISK, 4)
        b = TruncSeries.one(F3, VAR_DISK, 5)
        with pytest.raises(DimensionMismatch):
            SeriesMatrix.from_rows([[a, b], [a, a]])

    def test_mixed_var_rejected(self) -> None:
        a = TruncSeries.one(F3, "z", 4)
        b = TruncSeries.one(F3, "z'", 4)
        with pytest.raises((DimensionMismatch, VarMismatch)):
            SeriesMatrix.from_rows([[a, b], [a, a]])

    def test_size_mismatch_in_ops(self) -> None:
        a = SeriesMatrix.identity(F3, VAR_DISK, 2, 4)
        b = SeriesMatrix.identity(F3, VAR_DISK, 3, 4)
        with pytest.raises(DimensionMismatch):
            a @ b


class TestArithmetic:
    def test_matmul_pinned(self) -> None:
        a = M(F3, [["1", "z"], ["0", "1"]], 4)
        b = M(F3, [["1", "0"], ["z", "1"]], 4)
        ab = a @ b
        assert str(ab.entry(0, 0)) == "1 + z^2"
        assert str(ab.entry(0, 1)) == "z"
        assert str(ab.entry(1, 0)) == "z"
        assert str(ab.entry(1, 1)) == "1"

    def test_trace_and_transpose(self) -> None:
        a = M(F5, [["1", "2*z"], ["3", "4"]], 3)
        assert a.trace().is_zero()  # 1+4 = 0 mod 5
        assert a.transpose().entry(0, 1).agrees_with(a.entry(1, 0))

    def test_inverse_exact(self) -> None:
        g = M(F5, [["1 + z", "z^2"], ["2", "3 + 4*z"]], 6)
        gi = g.inverse()
        assert (g @ gi).agrees_with(SeriesMatrix.identity(F5, VAR_DISK, 2, 6))
        assert (gi @ g).agrees_with(SeriesMatrix.identity(F5, VAR_DISK, 2, 6))

    def test_singular_rejected(self) -> None:
        g = M(F3, [["z", "0"], ["0", "1"]], 4)
        with pytest.raises(SingularGauge):
            g.inverse()

    def test_conjugate_by(self) -> None:
        g = M(F5, [["1", "z"], ["0", "1"]], 5)
        m = M(F5, [["2", "0"], ["0", "3"]], 5)
        c = m.conjugate_by(g)
        assert c.agrees_with(g.inverse() @ m @ g)

    def test_derivative_entrywise(self) -> None:
        a = M(F3, [["z^2", "1"], ["z", "2*z^2"]], 4)
        d = a.derivative()
        assert str(d.entry(0, 0)) == "2*z"
        assert d.precision == 3

    def test_scale(self) -> None:
        a = SeriesMatrix.identity(F5, VAR_DISK, 2, 3)
        s = TruncSeries.constant(F5, VAR_DISK, 3, 3)
        assert str(a.scale(s).entry(0, 0)) == "3"

    def test_residue(self) -> None:
        a = M(F3, [["1 + z", "z"], ["2", "z^2"]], 4)
        r = a.residue()
        assert r == ((1, 0), (2, 0))


class TestDescentMaps:
    def test_descend_expand_roundtrip(self) -> None:
        m = M(F3, [["1 + z^3", "2*z^3"], ["0", "1"]], 6)
        d = m.descend_pth_power()
        assert d.var == "z'"
        assert d.precision == 2
        back = d.expand_pth_power()
        assert back.agrees_with(m.truncate(back.precision))

    def test_map_entries(self) -> None:
        m = M(F3, [["z"]], 4)
        doubled = m.map_entries(lambda s: s.scale(2))
        assert str(doubled.entry(0, 0)) == "2*z"


@given(
    a=matrix_strategy(F5, 2, 4),
    b=matrix_strategy(F5, 2, 4),
    c=matrix_strategy(F5, 2, 4),
)
@settings(max_examples=50, deadline=None)
def test_matrix_ring_laws(a, b, c) -> None:
    assert ((a @ b) @ c).agrees_with(a @ (b @ c))
    assert (a @ (b + c)).agrees_with(a @ b + a @ c)
    assert ((a + b).transpose()).agrees_with(a.transpose() + b.transpose())
    assert ((a @ b).trace()).agrees_with((b @ a).trace())


@given(a=matrix_strategy(F5, 2, 4), b=matrix_strategy(F5, 2, 4))
@settings(max_examples=50, deadline=None)
def test_matrix_leibniz(a, b) -> None:
    lhs = (a @ b).derivative()
    rhs = a.derivative() @ b.truncate(3) + a.truncate(3) @ b.derivative()
    assert lhs.agrees_with(rhs)
