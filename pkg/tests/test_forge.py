"""Generator emission: delta_V, kappa, normal ordering, ideal_generators."""

from fractions import Fraction

import pytest

from battery import (cubic_minus_x, cubic_plus_one, full_battery, line_points,
                     torus_points)
from cmforge.cmspace import CMPoint, generic_point, verify_relations
from cmforge.curve import affine_line, plane_curve, torus
from cmforge.diffop import CoeffRing, DiffOp, FractionalIdeal, POLY, coeff_ring_for
from cmforge.errors import PreconditionError
from cmforge.exact import BiPoly, Mat, QQ, RatFuncRing, UniPoly
from cmforge.forge import (OrderedProduct, SymbolicGenerators, delta_V,
                           ideal_generators, kappa, normal_order)


def _parabola_point():
    f = BiPoly({(0, 1): Fraction(1), (2, 0): Fraction(-1)})  # y = x^2
    return generic_point(plane_curve(f), [(1, 1), (2, 4)])


def test_ordered_product_rejects_adjacent_same_symbol():
    ring = RatFuncRing("x")
    m = Mat.identity(ring, 1)
    with pytest.raises(ValueError):
        OrderedProduct([("x", m), ("x", m)])
    OrderedProduct([("x", m), (None, Mat.identity(QQ, 1)), ("x", m)])


def test_ordered_product_rejects_shape_mismatch():
    with pytest.raises(ValueError):
        OrderedProduct([(None, Mat.zeros(QQ, 1, 2)), (None, Mat.zeros(QQ, 1, 1))])


def test_delta_v_line_n1():
    # nu = 1/(inner x - outer x) closed with v w: a single simple pole at 0
    p = line_points()[0]
    dv = delta_V(p)
    assert dv.symbols() == ("x", None)
    res = dv.factors[0][1].entry(0, 0)
    assert res.num == UniPoly.const("x", -1)
    assert res.den == UniPoly.x("x")  # (X^t - x)^{-1} at X = 0 is -1/x
    assert dv.factors[1][1].entry(0, 0) == Fraction(-1)


def test_kappa_line_n1():
    # kappa(v) = 1 + (1/z) (-1/x) (-1) at the origin point
    kp = kappa(line_points()[0])
    assert kp.leading == 1
    assert len(kp.products) == 1
    prod = kp.products[0]
    assert prod.symbols() == ("z", "x", None)
    zf = prod.factors[0][1].entry(0, 0)
    assert zf.num == UniPoly.const("z", 1) and zf.den == UniPoly.x("z")
    xf = prod.factors[1][1].entry(0, 0)
    assert xf.num == UniPoly.const("x", -1) and xf.den == UniPoly.x("x")
    assert prod.factors[2][1].entry(0, 0) == Fraction(-1)


def test_kappa_index_bounds():
    with pytest.raises(ValueError):
        kappa(line_points()[0], 1)


def test_normal_order_plain_z_polynomial():
    # a bare 1x1 factor z^2 + 3 collapses to d^2 + 3
    ring = CoeffRing(POLY)
    zring = RatFuncRing("z")
    m = Mat(zring, 1, 1, [zring.from_poly(UniPoly("z", [3, 0, 1]))])
    op = normal_order(OrderedProduct([("z", m)]), ring)
    d = DiffOp.partial(ring.as_localized())
    assert op == d.mul(d).add(DiffOp(ring.as_localized(), [3]))


def test_normal_order_rejects_residual_pole():
    ring = CoeffRing(POLY)
    zring = RatFuncRing("z")
    m = Mat(zring, 1, 1, [zring.inv(zring.gen())])  # 1/z
    with pytest.raises(ValueError, match="residual z-denominator"):
        normal_order(OrderedProduct([("z", m)]), ring)


def test_ideal_generators_line_n1():
    ideal = ideal_generators(line_points()[0])
    assert isinstance(ideal, FractionalIdeal)
    gx, gz = ideal.generators
    ring = gx.ring
    x = UniPoly.x("x")
    assert gx == DiffOp(ring, [ring.from_poly(-x)])  # char poly of X = [[0]]
    # det(Z - z) kappa normal-orders to -d - 1/x
    assert gz.order() == 1
    assert gz.coeff(1) == ring.from_int(-1)
    assert gz.coeff(0) == ring.coeff(UniPoly.const("x", -1), den=x)


def test_ideal_generators_hyper_n1():
    # y^2 = x^3 - x at (0, 0): generators (-x, -y, -d - (y+1)/x) up to the
    # recorded orientation
    p = generic_point(cubic_minus_x(), [(0, 0)])
    ideal = ideal_generators(p)
    gx, gy, gz = ideal.generators
    ring = gx.ring
    x = UniPoly.x("x")
    assert gx == DiffOp(ring, [ring.from_poly(-x)])
    assert gy == DiffOp(ring, [ring.coeff(UniPoly("x", []), UniPoly.const("x", -1))])
    assert gz.order() == 1
    assert gz.coeff(1) == ring.from_int(-1)


def test_ideal_generators_hyper_frozen_cubic_plus_one():
    # y^2 = x^3 + 1 at (0, 1): gz = -d - (1 + y)/x, gy = 1 - y
    p = generic_point(cubic_plus_one(), [(0, 1)])
    gx, gy, gz = ideal_generators(p).generators
    ring = gx.ring
    x = UniPoly.x("x")
    one = UniPoly.const("x", 1)
    assert gy == DiffOp(ring, [ring.coeff(one, -one)])
    assert gz.coeff(1) == ring.from_int(-1)
    assert gz.coeff(0) == ring.coeff(-one, -one, den=x)


def test_ideal_generators_cover_battery():
    # every battery point emits without residual z-denominators
    for p in full_battery():
        ideal = ideal_generators(p)
        orders = sorted(g.order() for g in ideal.generators)
        assert orders[-1] == p.n  # the z-generator has order n
        assert all(o == 0 for o in orders[:-1])


def test_ideal_generators_requires_verified_point():
    # doubling the framing column breaks zx-commutator and framing-trace
    good = generic_point(affine_line(), [0])
    broken = CMPoint(good.curve, 1, good.Xmat, None, good.Zmat,
                     [Mat(QQ, 1, 1, [Fraction(2)])], good.ws)
    with pytest.raises(PreconditionError) as exc:
        ideal_generators(broken)
    assert exc.value.report is not None
    assert not exc.value.report.ok


def test_ideal_generators_rank_zero_unit():
    p0 = CMPoint(affine_line(), 0, Mat(QQ, 0, 0, []), None, Mat(QQ, 0, 0, []),
                 [Mat(QQ, 0, 1, [])], [Mat(QQ, 1, 0, [])])
    assert verify_relations(p0).ok
    ideal = ideal_generators(p0)
    assert len(ideal.generators) == 1
    assert ideal.generators[0].order() == 0


def test_ideal_generators_needs_single_framing_pair():
    # a zero second framing pair keeps every relation intact
    p = line_points()[0]
    doubled = CMPoint(p.curve, 1, p.Xmat, None, p.Zmat,
                      [p.vs[0], Mat(QQ, 1, 1, [Fraction(0)])],
                      [p.ws[0], Mat(QQ, 1, 1, [Fraction(0)])])
    assert verify_relations(doubled).ok
    with pytest.raises(ValueError, match="trivial-ideal tier"):
        ideal_generators(doubled)


def test_general_plane_stays_symbolic():
    out = ideal_generators(_parabola_point())
    assert isinstance(out, SymbolicGenerators)
    assert out.gen_x == UniPoly("x", [2, -3, 1])  # (x-1)(x-2)
    assert out.gen_y == UniPoly("y", [4, -5, 1])  # (y-1)(y-4)
    assert out.det_z.degree() == 2
    assert out.correction is not None


def test_torus_generators_live_in_laurent_ring():
    p = torus_points()[0]
    ideal = ideal_generators(p)
    ring = ideal.generators[0].ring
    assert ring == coeff_ring_for(torus(), localized=True)
    for g in ideal.generators:
        for c in g.coeffs:
            assert c.ring.compatible(ring)
