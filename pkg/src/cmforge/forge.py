"""Fractional-ideal generators from Calogero-Moser matrix data.

Implements the correspondence at the level of formulas: the substitution map
delta_V, the correction element kappa, and the generator emission

    det(X - x Id) * v_i,   det(Y - y Id) * v_i  (plane models),
    det(Z - z Id) * kappa(v_i)   (normal-ordered where supported).

Ordered products keep each matrix factor univariate in one operator symbol
(x, y, or the derivation symbol z); the written left-to-right order is the
operator order, so the only noncommutativity lives across factors and is
resolved once, during normal ordering.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import (Mat, QQ, UniPoly, PolyRing, RatFunc, RatFuncRing,
                    char_poly, bipoly_apply)
from .errors import PreconditionError
from . import curve as curvemod
from .cmspace import CMPoint, verify_relations
from .diffop import (HYPER, Coeff, CoeffRing, CoeffMatRing, DiffOp,
                     FractionalIdeal, coeff_ring_for)

_SYMBOLS = (None, "x", "y", "z")


class OrderedProduct:
    """Left-to-right product of matrix factors.

    Each factor is a pair (symbol, m): symbol None for a scalar-entried
    matrix over Q, otherwise "x", "y" or "z" with m over the rational
    function field in that symbol.  Adjacent factors carry distinct symbols
    unless one is scalar.
    """

    __slots__ = ("factors",)

    def __init__(self, factors):
        fs = tuple((sym, m) for sym, m in factors)
        for sym, _ in fs:
            if sym not in _SYMBOLS:
                raise ValueError("unknown factor symbol %r" % (sym,))
        for (s1, _), (s2, _) in zip(fs, fs[1:]):
            if s1 is not None and s1 == s2:
                raise ValueError("adjacent factors share the symbol %r" % (s1,))
        for (_, m1), (_, m2) in zip(fs, fs[1:]):
            if m1.cols != m2.rows:
                raise ValueError("factor shapes do not chain")
        object.__setattr__(self, "factors", fs)

    def __setattr__(self, name, value):
        raise AttributeError("OrderedProduct is immutable")

    @property
    def rows(self) -> int:
        return self.factors[0][1].rows if self.factors else 0

    @property
    def cols(self) -> int:
        return self.factors[-1][1].cols if self.factors else 0

    def symbols(self):
        return tuple(sym for sym, _ in self.factors)

    def __repr__(self):
        return "OrderedProduct(%s)" % " * ".join(
            "%s[%dx%d]" % (sym or "const", m.rows, m.cols) for sym, m in self.factors)


class KappaElement:
    """kappa(v_i): a leading scalar plus a sum of ordered-product corrections.

    Multiplying by det(Z - z Id) and normal ordering clears every
    z-denominator on the supported models.
    """

    __slots__ = ("curve", "index", "leading", "products")

    def __init__(self, curve_model, index, leading, products):
        object.__setattr__(self, "curve", curve_model)
        object.__setattr__(self, "index", int(index))
        object.__setattr__(self, "leading", Fraction(leading))
        object.__setattr__(self, "products", tuple(products))

    def __setattr__(self, name, value):
        raise AttributeError("KappaElement is immutable")

    def __repr__(self):
        return "KappaElement(%r, i=%d, %d correction terms)" % (
            self.curve, self.index, len(self.products))


class SymbolicGenerators:
    """Generator emission for a general plane model, kept symbolic.

    gen_x and gen_y are the characteristic polynomials (order-0 operators);
    the z-generator is det_z plus the ordered-product correction, not
    normal-ordered: general plane models carry no operator coefficient ring
    here (documented limitation).
    """

    __slots__ = ("curve", "gen_x", "gen_y", "det_z", "correction")

    def __init__(self, curve_model, gen_x, gen_y, det_z, correction):
        object.__setattr__(self, "curve", curve_model)
        object.__setattr__(self, "gen_x", gen_x)
        object.__setattr__(self, "gen_y", gen_y)
        object.__setattr__(self, "det_z", det_z)
        object.__setattr__(self, "correction", correction)

    def __setattr__(self, name, value):
        raise AttributeError("SymbolicGenerators is immutable")


# ---------------------------------------------------------------------------
# factor construction
# ---------------------------------------------------------------------------


def _lift(m: Mat, ring) -> Mat:
    return Mat(ring, m.rows, m.cols, [ring.from_frac(e) for e in m.entries])


def _resolvent(mt: Mat, sym: str) -> Mat:
    """(mt - sym*Id)^{-1} over the rational function field in sym."""
    ring = RatFuncRing(sym)
    n = mt.rows
    shifted = _lift(mt, ring).sub(Mat.identity(ring, n).scalar_mul(ring.gen()))
    try:
        return shifted.inv()
    except ZeroDivisionError:
        raise PreconditionError(
            "singular substitution in the %s-resolvent factor" % sym)


def _framing_sum(p: CMPoint) -> Mat:
    acc = Mat.zeros(QQ, p.n, p.n)
    for v, w in zip(p.vs, p.ws):
        acc = acc.add(v.mul(w))
    return acc.transpose()


def _vbar_t(p: CMPoint) -> Mat:
    """Aggregated framing columns, transposed: n_inf x n."""
    return Mat(QQ, p.n_inf, p.n,
               [p.vs[a].entry(b, 0) for a in range(p.n_inf) for b in range(p.n)])


def _numerator_factor(p: CMPoint, ker) -> Mat | None:
    """Numerator legs of the nu kernel, substituted: a Mat over Q(y) (or Q)."""
    n = p.n
    uses_y = any(j or l for _, (_, j), (_, l) in ker.terms) or "y" in ker.denom_factors
    ring = RatFuncRing("y") if uses_y else QQ
    Xt = p.Xmat.transpose()
    Yt = p.Ymat.transpose() if p.Ymat is not None else None
    acc = Mat.zeros(ring, n, n)
    trivial = True
    for coeff, (i, j), (k, l) in ker.terms:
        if i:
            raise ValueError("left-leg x powers are not produced by any model")
        term = Mat.identity(QQ, n)
        for _ in range(k):
            term = term.mul(Xt)
        for _ in range(l):
            term = term.mul(Yt)
        term = _lift(term, ring) if uses_y else term
        scale = ring.from_frac(coeff)
        if j:
            y = ring.gen()
            for _ in range(j):
                scale = scale * y
        acc = acc.add(term.scalar_mul(scale))
        trivial = trivial and not (j or k or l) and coeff == 1
    if trivial and len(ker.terms) == 1:
        return None
    return acc


def delta_V(p: CMPoint) -> OrderedProduct:
    """Substitute the transposed representation into the nu kernel and close
    with the framing matrix: delta_V(d) = nu_V(d)[sum_i v_i w_i]."""
    ker = curvemod.nu_kernel(p.curve)
    factors = []
    if "x" in ker.denom_factors:
        factors.append(("x", _resolvent(p.Xmat.transpose(), "x")))
    num = _numerator_factor(p, ker)
    if "y" in ker.denom_factors:
        res_y = _resolvent(p.Ymat.transpose(), "y")
        factors.append(("y", res_y.mul(num) if num is not None else res_y))
    elif num is not None:
        sym = "y" if num.ring == RatFuncRing("y") else None
        factors.append((sym, num))
    factors.append((None, _framing_sum(p)))
    return OrderedProduct(factors)


def _correction_factors(p: CMPoint, i: int, z_factor: Mat) -> list:
    """Shared tail of the kappa correction: x-resolvent, optional y-factor,
    framing covector.  z_factor already carries the sign and v-bar row."""
    c = p.curve
    factors = [("z", z_factor), ("x", _resolvent(p.Xmat.transpose(), "x"))]
    if c.has_y:
        Yt = p.Ymat.transpose()
        yring = RatFuncRing("y")
        if c.is_hyperelliptic:
            yfac = _lift(Yt, yring).add(
                Mat.identity(yring, p.n).scalar_mul(yring.gen()))
        else:
            liftX = _lift(p.Xmat.transpose(), yring)
            ydiag = Mat.identity(yring, p.n).scalar_mul(yring.gen())
            yfac = _resolvent(Yt, "y").mul(bipoly_apply(c.F, liftX, ydiag))
        factors.append(("y", yfac))
    factors.append((None, p.ws[i].transpose()))
    return factors


def _kappa_sign(c) -> int:
    # plus in the general plane closed form; minus once the y-pole is folded
    # (hyperelliptic) and in the line/torus form
    return 1 if (c.has_y and not c.is_hyperelliptic) else -1


def kappa(p: CMPoint, i: int = 0) -> KappaElement:
    """Correction element kappa(v_i) in closed form for the curve model."""
    if not 0 <= i < p.n_inf:
        raise ValueError("framing index out of range")
    if p.n == 0:
        return KappaElement(p.curve, i, 1, ())
    zres = _resolvent(p.Zmat.transpose(), "z")
    zring = RatFuncRing("z")
    zfac = _lift(_vbar_t(p), zring).mul(zres)
    zfac = zfac.scalar_mul(zring.from_int(_kappa_sign(p.curve)))
    return KappaElement(p.curve, i, 1,
                        (OrderedProduct(_correction_factors(p, i, zfac)),))


# ---------------------------------------------------------------------------
# normal ordering
# ---------------------------------------------------------------------------


def _coeff_from_ratfunc(rf: RatFunc, ring: CoeffRing, sym: str) -> Coeff:
    if sym == "x":
        return Coeff(ring, rf.num, None, rf.den)
    if sym == "y":
        if ring.kind != HYPER:
            raise ValueError("y-dependent factor needs the hyperelliptic ring")
        if rf.den.degree() > 0:
            raise ValueError("rational y-dependence cannot be normal-ordered")
        if rf.num.degree() > 1:
            raise ValueError("y-degree exceeds 1; reduce by the curve equation first")
        a = UniPoly.const("x", rf.num.coeff(0))
        b = UniPoly.const("x", rf.num.coeff(1))
        return Coeff(ring, a, b)
    raise ValueError("unsupported factor symbol %r" % (sym,))


def normal_order(expr: OrderedProduct, target: CoeffRing) -> DiffOp:
    """Collapse an ordered product into a normal-form operator.

    The z-dependence must be polynomial (it is, once the det(Z - z Id) prefix
    has been folded into an adjugate) and must precede every x/y factor; the
    product must collapse to 1 x 1.  z-powers are moved rightmost by the
    Leibniz rule through DiffOp multiplication.
    """
    ring = target.as_localized()
    mring = CoeffMatRing(ring)
    zring = RatFuncRing("z")
    zpart = None
    rest = None
    for sym, m in expr.factors:
        if sym == "z" or (sym is None and rest is None):
            if rest is not None:
                raise ValueError("z-factor appears right of a coefficient factor")
            lifted = _lift(m, zring) if sym is None else m
            zpart = lifted if zpart is None else zpart.mul(lifted)
            continue
        if sym is None:
            conv = _lift(m, mring)
        else:
            conv = m.map_entries(lambda rf: _coeff_from_ratfunc(rf, ring, sym), mring)
        rest = conv if rest is None else rest.mul(conv)

    if zpart is None:
        zpart = Mat.identity(zring, rest.rows if rest is not None else 1)
    degree = 0
    for e in zpart.entries:
        if e.den.degree() > 0:
            raise ValueError("residual z-denominator: %r" % (e.den,))
        degree = max(degree, e.num.degree())
    out = DiffOp.zero(ring)
    partial = DiffOp.partial(ring)
    power = DiffOp(ring, [ring.one()])
    for k in range(degree + 1):
        Ak = Mat(mring, zpart.rows, zpart.cols,
                 [ring.from_frac(e.num.coeff(k)) for e in zpart.entries])
        ck = Ak.mul(rest) if rest is not None else Ak
        if ck.rows != 1 or ck.cols != 1:
            raise ValueError("ordered product does not collapse to a scalar operator")
        out = out.add(power.mul(DiffOp.from_coeff(ck.entry(0, 0))))
        power = power.mul(partial)
    return out


# ---------------------------------------------------------------------------
# generator emission
# ---------------------------------------------------------------------------


def _ypoly_to_coeff(q: UniPoly, ring: CoeffRing) -> Coeff:
    """Reduce a polynomial in y modulo y^2 = P(x) into a coefficient element."""
    P = ring.P
    a = UniPoly("x", [])
    b = UniPoly("x", [])
    pm = UniPoly.const("x", 1)
    for s, cc in enumerate(q.coeffs):
        if s and s % 2 == 0:
            pm = pm * P
        if cc == 0:
            continue
        if s % 2 == 0:
            a = a + pm * cc
        else:
            b = b + pm * cc
    return Coeff(ring, a, b)


def _adjugate_z_factor(p: CMPoint, sign: int) -> Mat:
    """sign * vbar^t * adj(Z^t - z Id) as a 1 x n matrix over Q(z)."""
    zpoly = PolyRing("z")
    n = p.n
    Zt = p.Zmat.transpose()
    shifted = _lift(Zt, zpoly).sub(Mat.identity(zpoly, n).scalar_mul(zpoly.gen()))
    adj = shifted.adjugate()
    vrow = _lift(_vbar_t(p), zpoly).mul(adj).scalar_mul(zpoly.from_int(sign))
    zring = RatFuncRing("z")
    return vrow.map_entries(RatFunc.from_poly, zring)


def ideal_generators(p: CMPoint):
    """Emit the fractional-ideal generators for a verified point.

    Returns a FractionalIdeal over the localized coefficient ring for the
    line, torus and hyperelliptic models; a SymbolicGenerators container for
    a general plane model.  Requires the trivial-ideal tier (one framing
    pair); the general tier stays at the kappa level.
    """
    report = verify_relations(p)
    if not report.ok:
        raise PreconditionError("point fails the defining relations: %r" % (report,),
                                report)
    c = p.curve
    general_plane = c.has_y and not c.is_hyperelliptic
    ring = None if general_plane else coeff_ring_for(c, localized=True)

    if p.n == 0:
        one_x = UniPoly.const("x", 1)
        if general_plane:
            return SymbolicGenerators(c, one_x, UniPoly.const("y", 1),
                                      UniPoly.const("z", 1), None)
        return FractionalIdeal(c, [DiffOp(ring, [ring.one()])])
    if p.n_inf != 1:
        raise ValueError("generator emission needs the trivial-ideal tier "
                         "(one framing pair); use kappa for the general tier")

    gx = char_poly(p.Xmat, "x")
    det_z = char_poly(p.Zmat, "z")
    correction = OrderedProduct(
        _correction_factors(p, 0, _adjugate_z_factor(p, _kappa_sign(c))))

    if general_plane:
        gy = char_poly(p.Ymat, "y")
        return SymbolicGenerators(c, gx, gy, det_z, correction)

    gens = [DiffOp(ring, [ring.from_poly(gx)])]
    if c.is_hyperelliptic:
        gens.append(DiffOp(ring, [_ypoly_to_coeff(char_poly(p.Ymat, "y"), ring)]))
    base = DiffOp(ring, [ring.from_frac(cc) for cc in det_z.coeffs])
    gens.append(base.add(normal_order(correction, ring)))
    return FractionalIdeal(c, gens)
