"""Curve models.

A curve model carries a presentation of the coordinate ring (affine line,
torus, or a plane curve F(x,y) = 0 with a hyperelliptic specialization),
the distinguished derivation with its commutation relations, and the
two-variable kernel used to assemble ideal generators from matrix data.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import BiPoly, UniPoly, rat, sylvester_det, PolyRing

AFFINE_LINE = "AffineLine"
TORUS = "Torus"
PLANE_CURVE = "PlaneCurve"


class CurveModel:
    """One of AffineLine, Torus, PlaneCurve; plane curves may carry y^2 = P(x) form."""

    __slots__ = ("kind", "F", "hyperelliptic_P")

    def __init__(self, kind: str, F: BiPoly | None = None, hyperelliptic_P: UniPoly | None = None):
        if kind not in (AFFINE_LINE, TORUS, PLANE_CURVE):
            raise ValueError("unknown curve kind: %r" % (kind,))
        if kind == PLANE_CURVE:
            if F is None or F.is_zero or (F.degree_x() <= 0 and F.degree_y() <= 0):
                raise ValueError("plane curve requires a nonconstant defining polynomial")
        elif F is not None or hyperelliptic_P is not None:
            raise ValueError("%s carries no defining polynomial" % kind)
        if hyperelliptic_P is not None:
            expected = BiPoly.monomial(0, 2) - BiPoly(
                {(r, 0): c for r, c in enumerate(hyperelliptic_P.coeffs)}
            )
            if F != expected:
                raise ValueError("defining polynomial is not y^2 - P(x) for the given P")
            g = hyperelliptic_P.gcd(hyperelliptic_P.derivative())
            if g.is_zero or g.degree() > 0:
                raise ValueError("P must have simple roots (gcd(P, P') constant)")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "hyperelliptic_P", hyperelliptic_P)

    def __setattr__(self, name, value):
        raise AttributeError("CurveModel is immutable")

    @property
    def is_hyperelliptic(self) -> bool:
        return self.hyperelliptic_P is not None

    @property
    def has_y(self) -> bool:
        """True when the coordinate ring has a second generator y."""
        return self.kind == PLANE_CURVE

    def __eq__(self, other):
        if not isinstance(other, CurveModel):
            return NotImplemented
        return (self.kind, self.F, self.hyperelliptic_P) == (other.kind, other.F, other.hyperelliptic_P)

    def __hash__(self):
        return hash((self.kind, self.F, self.hyperelliptic_P))

    def __repr__(self):
        if self.kind != PLANE_CURVE:
            return "CurveModel(%s)" % self.kind
        if self.is_hyperelliptic:
            return "CurveModel(y^2 = %s)" % (self.hyperelliptic_P,)
        return "CurveModel(F = %s)" % (self.F,)


def affine_line() -> CurveModel:
    return CurveModel(AFFINE_LINE)


def torus() -> CurveModel:
    return CurveModel(TORUS)


def _detect_hyperelliptic(F: BiPoly) -> UniPoly | None:
    """Recognize F = y^2 - P(x) term-for-term, P with simple roots."""
    if F.terms.get((0, 2)) != 1:
        return None
    rest = {}
    for (r, s), c in F.terms.items():
        if (r, s) == (0, 2):
            continue
        if s != 0:
            return None
        rest[r] = -c
    deg = max(rest, default=-1)
    P = UniPoly("x", [rest.get(i, 0) for i in range(deg + 1)])
    g = P.gcd(P.derivative())
    if g.is_zero or g.degree() > 0:
        return None
    return P


def plane_curve(F: BiPoly) -> CurveModel:
    return CurveModel(PLANE_CURVE, F, _detect_hyperelliptic(F))


def hyperelliptic(P: UniPoly) -> CurveModel:
    F = BiPoly.monomial(0, 2) - BiPoly({(r, 0): c for r, c in enumerate(P.coeffs)})
    return CurveModel(PLANE_CURVE, F, P)


class DerivationData:
    """Images of the distinguished derivation on the ring generators, plus the
    commutators [z, x] and [z, y] as formal words.

    partial_x / partial_y are BiPoly values in (x, y); partial_y is None when
    the coordinate ring has a single generator.  Each commutator is a list of
    (coefficient, word) pairs, a word being a tuple over the alphabet
    {"x", "y", "D"} with "D" the distinguished loop element.
    """

    __slots__ = ("partial_x", "partial_y", "zx_words", "zy_words")

    def __init__(self, partial_x, partial_y, zx_words, zy_words):
        object.__setattr__(self, "partial_x", partial_x)
        object.__setattr__(self, "partial_y", partial_y)
        object.__setattr__(self, "zx_words", tuple(zx_words))
        object.__setattr__(self, "zy_words", tuple(zy_words) if zy_words is not None else None)

    def __setattr__(self, name, value):
        raise AttributeError("DerivationData is immutable")


def derivation_data(c: CurveModel) -> DerivationData:
    """Derivation generator data for the curve model.

    AffineLine / Torus: z(x) = 1 and [z, x] = D.
    Plane curve F: z(x) = F'_y, z(y) = -F'_x, with
        [z, x] = sum_{r,s} a_rs sum_{k<s} y^(s-k-1) D y^k x^r
        [z, y] = -sum_{r,s} a_rs sum_{l<r} y^s x^(r-l-1) D x^l
    which for y^2 = P(x) reduce to [z,x] = yD + Dy and
    [z,y] = sum_s a_s sum_{l<s} x^(s-l-1) D x^l.
    """
    if c.kind in (AFFINE_LINE, TORUS):
        return DerivationData(BiPoly.const(1), None, [(Fraction(1), ("D",))], None)
    F = c.F
    px = F.partial_y()
    py = -F.partial_x()
    zx = []
    zy = []
    for (r, s), a in F.items_sorted():
        for k in range(s):
            zx.append((a, ("y",) * (s - k - 1) + ("D",) + ("y",) * k + ("x",) * r))
        for l in range(r):
            zy.append((-a, ("y",) * s + ("x",) * (r - l - 1) + ("D",) + ("x",) * l))
    return DerivationData(px, py, zx, zy)


class NuKernel:
    """Two-variable kernel of the derivation embedding, in substitution-ready form.

    Value: numerator / product of the listed denominator factors, where the
    numerator is a sum of split terms c * (x^i y^j (x) x^k y^l) with the left
    leg becoming an operator-symbol monomial and the right leg a matrix in the
    dual representation.  Denominator factor tags: "x" for the difference of
    outer and inner x, "y" likewise.  The loop element always maps to 1.
    """

    __slots__ = ("terms", "denom_factors", "delta_value")

    def __init__(self, terms, denom_factors):
        object.__setattr__(self, "terms", tuple(terms))
        object.__setattr__(self, "denom_factors", tuple(denom_factors))
        object.__setattr__(self, "delta_value", Fraction(1))

    def __setattr__(self, name, value):
        raise AttributeError("NuKernel is immutable")


def nu_kernel(c: CurveModel) -> NuKernel:
    """Kernel of the derivation generator under the canonical embedding.

    AffineLine / Torus: 1 / (inner x - outer x).
    Plane curve: -F(outer y, inner x) / ((inner x - outer x)(inner y - outer y)),
    with the hyperelliptic form (outer y + inner y) / (inner x - outer x).
    """
    if c.kind in (AFFINE_LINE, TORUS):
        return NuKernel([(Fraction(1), (0, 0), (0, 0))], ("x",))
    if c.is_hyperelliptic:
        # (y (x) 1 + 1 (x) y) / (1 (x) x - x (x) 1)
        return NuKernel([(Fraction(1), (0, 1), (0, 0)), (Fraction(1), (0, 0), (0, 1))], ("x",))
    terms = []
    for (r, s), a in c.F.items_sorted():
        terms.append((-a, (0, s), (r, 0)))
    return NuKernel(terms, ("x", "y"))


def smoothness_check(c: CurveModel):
    """Best-effort smoothness test for plane curves via iterated resultants.

    Returns (True, None) when no common zero of (F, F'_x, F'_y) is detected,
    else (False, witness) with a nonconstant common factor as the witness.
    Advisory only: downstream constructions assume a smooth curve.
    """
    if c.kind != PLANE_CURVE:
        raise ValueError("smoothness check applies to plane curves only")
    F = c.F
    Fx = F.partial_x()
    Fy = F.partial_y()
    if F.degree_y() <= 0:
        f = F.as_unipoly("x", "x")
        g = f.gcd(f.derivative())
        if g.degree() > 0:
            return False, repr(g)
        return True, None
    if F.degree_x() <= 0:
        f = F.as_unipoly("y", "y")
        g = f.gcd(f.derivative())
        if g.degree() > 0:
            return False, repr(g)
        return True, None
    ring = PolyRing("x")

    def res_y(a: BiPoly, b: BiPoly):
        ac = list(reversed(a.coeffs_in_y("x")))
        bc = list(reversed(b.coeffs_in_y("x")))
        return sylvester_det(ac, bc, ring)

    rx = res_y(F, Fx) if not Fx.is_zero else UniPoly("x", [])
    ry = res_y(F, Fy) if not Fy.is_zero else UniPoly("x", [])
    if rx.is_zero and ry.is_zero:
        return False, "resultants vanish identically"
    if rx.is_zero:
        g = ry
    elif ry.is_zero:
        g = rx
    else:
        g = rx.gcd(ry)
    if not g.is_zero and g.degree() > 0:
        return False, repr(g.monic())
    if g.is_zero:
        return False, "resultants vanish identically"
    return True, None
