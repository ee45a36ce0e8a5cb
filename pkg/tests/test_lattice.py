"""Hermite forms, clearings, filtration spans, codimension, saturation."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from battery import hyper_points, line_points, torus_points
from cmforge.cmspace import lambda_act
from cmforge.diffop import CoeffRing, DiffOp, FractionalIdeal, POLY
from cmforge.errors import PreconditionError
from cmforge.exact import Mat, PolyRing, UniPoly
from cmforge.forge import ideal_generators
from cmforge.lattice import (ClearingData, clearing_for, codim, hnf,
                             module_equal, span_filtration, unit_conjugate,
                             x_saturate)

PR = PolyRing("x")
X = UniPoly.x("x")
ONE = UniPoly.const("x", 1)
ZERO = UniPoly("x", [])


def _pm(rows):
    return Mat.from_rows(PR, rows)


small_polys = st.lists(
    st.fractions(min_value=-9, max_value=9, max_denominator=3), min_size=0, max_size=3
).map(lambda cs: UniPoly("x", cs))


def test_hnf_identity_fixed():
    m = Mat.identity(PR, 3)
    h, u = hnf(m)
    assert h == m and u == m


def test_hnf_reduces_above_pivot():
    # span{(x^2, 0), (x, 1)} contains x(x,1) - (x^2,0) = (0, x)
    m = _pm([[X * X, ZERO], [X, ONE]])
    h, u = hnf(m)
    assert u.mul(m) == h
    assert h == _pm([[X, ONE], [ZERO, X]])


def test_hnf_monic_pivots():
    h, u = hnf(_pm([[X * 2, UniPoly.const("x", 4)]]))
    assert h == _pm([[X, UniPoly.const("x", 2)]])
    assert u.mul(_pm([[X * 2, UniPoly.const("x", 4)]])) == h


def test_hnf_rejects_rational_matrix():
    from cmforge.exact import QQ
    with pytest.raises(ValueError):
        hnf(Mat.identity(QQ, 2))


@given(st.lists(st.lists(small_polys, min_size=2, max_size=2),
                min_size=1, max_size=3))
@settings(max_examples=40, deadline=None)
def test_hnf_idempotent_and_unimodular(rows):
    m = _pm(rows)
    h, u = hnf(m)
    assert u.mul(m) == h
    h2, _ = hnf(h)
    assert h2 == h
    d = u.det()
    assert not d.is_zero and d.degree() == 0  # unit of Q[x]


def test_clearing_line_n1():
    ideal = ideal_generators(line_points()[0])
    cl = clearing_for(ideal)
    assert cl.den == X and cl.power == 2 and cl.shift == 0
    assert cl.multiplier() == X * X


def test_clearing_common_across_ideals():
    a = ideal_generators(torus_points()[0])
    b = ideal_generators(lambda_act(torus_points()[0], 1))
    cl = clearing_for(a, b)
    for ideal in (a, b):
        fm = span_filtration(ideal, 3, cl)
        assert fm.clearing == cl  # both clear with the shared data


def test_span_filtration_row_count():
    ideal = ideal_generators(line_points()[1])  # orders 0 and 2
    fm = span_filtration(ideal, 4, clearing_for(ideal))
    # order-0 generator contributes 5 rows, order-2 generator 3 rows
    assert fm.rows.rows == 8
    assert fm.rows.cols == 5


def test_clearing_rejects_hyper_coefficients():
    ideal = ideal_generators(hyper_points()[2])
    with pytest.raises(ValueError):
        clearing_for(ideal)


def test_codim_stabilizes_line():
    for i, p in enumerate(line_points()[:2]):
        n = i + 1
        rep = codim(ideal_generators(p), 2 * n + 6)
        assert rep.stabilized == n
        assert rep.ambient_pivot is not None


def test_codim_stabilizes_torus():
    for i, p in enumerate(torus_points()[:2]):
        n = i + 1
        rep = codim(ideal_generators(p), 2 * n + 6)
        assert rep.stabilized == n


def test_codim_handmade_oracle():
    # <x^2, x d + 2>: index-1 sublattice of the x^0-ambient at every level
    ring = CoeffRing(POLY, localized=True)
    g1 = DiffOp(ring, [ring.from_poly(X * X)])
    g2 = DiffOp(ring, [ring.from_int(2), ring.x()])
    rep = codim(FractionalIdeal(line_points()[0].curve, [g1, g2]), 6)
    assert rep.stabilized == 1


def test_codim_unit_ideal_is_zero():
    ring = CoeffRing(POLY, localized=True)
    one = DiffOp(ring, [ring.one()])
    rep = codim(FractionalIdeal(line_points()[0].curve, [one]), 4)
    assert rep.stabilized == 0
    assert all(v == 0 for _, v in rep.entries)


def test_codim_not_full_rank_reported():
    # a single order-2 generator spans nothing below level 2
    ring = CoeffRing(POLY, localized=True)
    d = DiffOp.partial(ring)
    rep = codim(FractionalIdeal(line_points()[0].curve, [d.mul(d)]), 1)
    assert rep.stabilized is None
    assert rep.ambient_pivot is None
    assert all(v is None for _, v in rep.entries)


def test_codim_non_nested_error():
    # at k=1 the pivots are x^2 (d^1 column) and x(x+1) (d^0 column):
    # same degree, neither a multiple of the other
    ring = CoeffRing(POLY, localized=True)
    g1 = DiffOp(ring, [ring.from_poly(X * X * (X + ONE) * (X + ONE))])
    g2 = DiffOp(ring, [ring.from_poly(X), ring.from_poly(X * X)])
    with pytest.raises(PreconditionError, match="non-nested"):
        codim(FractionalIdeal(line_points()[0].curve, [g1, g2]), 1)


def test_x_saturate_divides_out_content():
    # Laurent span of (x^2 - x, x) meets Q[x]^2 in Q[x] (x - 1, 1)
    sat = x_saturate(_pm([[X * X - X, X]]))
    assert sat == _pm([[X - ONE, ONE]])


def test_x_saturate_x_power_determinant_fills_lattice():
    # det = x^2 is a Laurent unit, so the saturation is the full lattice
    sat = x_saturate(_pm([[X, ONE], [ZERO, X]]))
    assert sat == Mat.identity(PR, 2)


def test_x_saturate_fixpoint_on_saturated():
    m = _pm([[ONE, ZERO], [ZERO, ONE]])
    assert x_saturate(m) == m


def test_module_equal_same_ideal():
    ideal = ideal_generators(torus_points()[0])
    cl = clearing_for(ideal)
    a = span_filtration(ideal, 5, cl)
    b = span_filtration(ideal, 5, cl)
    assert module_equal(a, b)


def test_module_equal_guards():
    ideal = ideal_generators(line_points()[0])
    cl = clearing_for(ideal)
    a = span_filtration(ideal, 3, cl)
    b = span_filtration(ideal, 4, cl)
    with pytest.raises(ValueError):
        module_equal(a, b)
    other = span_filtration(ideal, 3, ClearingData(X * X * X, 2, 0))
    with pytest.raises(ValueError):
        module_equal(a, other)


def test_unit_conjugate_matches_twist_span():
    # x^r g x^{-r} spans the same Laurent lattice as the twisted-point ideal
    p = torus_points()[0]
    base = ideal_generators(p)
    for r in (1, -1):
        conj = unit_conjugate(base, r)
        twisted = ideal_generators(lambda_act(p, r))
        cl = clearing_for(conj, twisted)
        k = 8
        assert module_equal(span_filtration(conj, k, cl),
                            span_filtration(twisted, k, cl))


def test_unit_conjugate_negative_control():
    p = torus_points()[0]
    base = ideal_generators(p)
    conj = unit_conjugate(base, 1)
    twisted = ideal_generators(lambda_act(p, -1))
    cl = clearing_for(conj, twisted)
    assert not module_equal(span_filtration(conj, 8, cl),
                            span_filtration(twisted, 8, cl))


def test_unit_conjugate_needs_torus():
    with pytest.raises(ValueError):
        unit_conjugate(ideal_generators(line_points()[0]), 1)
