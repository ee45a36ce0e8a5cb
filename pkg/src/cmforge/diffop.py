"""Differential operator arithmetic.

Normal-form operators sum(c_i * d^i) with coefficients in the coordinate ring
of a supported curve model (affine line, torus, hyperelliptic), optionally
localized at a univariate denominator.  The normal form keeps coefficients on
the left and derivative powers on the right.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exact import RingBase, UniPoly, rat
from . import curve as curvemod

POLY = "poly"
LAURENT = "laurent"
HYPER = "hyper"


class CoeffRing:
    """Descriptor of the operator coefficient ring.

    poly:    Q[x]                      (affine line)
    laurent: Q[x, 1/x]                 (torus)
    hyper:   Q[x, y] / (y^2 - P(x))    (hyperelliptic, elements a(x) + b(x) y)

    localized variants allow a shared monic denominator in x.
    """

    __slots__ = ("kind", "P", "localized")

    def __init__(self, kind: str, P: UniPoly | None = None, localized: bool = False):
        if kind not in (POLY, LAURENT, HYPER):
            raise ValueError("unknown coefficient ring kind: %r" % (kind,))
        if (kind == HYPER) != (P is not None):
            raise ValueError("P is required exactly for the hyperelliptic ring")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "localized", bool(localized))

    def __setattr__(self, name, value):
        raise AttributeError("CoeffRing is immutable")

    def compatible(self, other: "CoeffRing") -> bool:
        return self.kind == other.kind and self.P == other.P

    def as_localized(self) -> "CoeffRing":
        if self.localized:
            return self
        return CoeffRing(self.kind, self.P, True)

    def __eq__(self, other):
        if not isinstance(other, CoeffRing):
            return NotImplemented
        return (self.kind, self.P, self.localized) == (other.kind, other.P, other.localized)

    def __hash__(self):
        return hash((self.kind, self.P, self.localized))

    # element constructors -------------------------------------------------

    def coeff(self, a: UniPoly, b: UniPoly | None = None, den: UniPoly | None = None,
              shift: int = 0) -> "Coeff":
        return Coeff(self, a, b, den, shift)

    def zero(self) -> "Coeff":
        return self.coeff(UniPoly("x", []))

    def one(self) -> "Coeff":
        return self.coeff(UniPoly.const("x", 1))

    def from_frac(self, c) -> "Coeff":
        return self.coeff(UniPoly.const("x", rat(c)))

    def from_int(self, n: int) -> "Coeff":
        return self.from_frac(n)

    def from_poly(self, p: UniPoly) -> "Coeff":
        return self.coeff(p)

    def x(self) -> "Coeff":
        return self.coeff(UniPoly.x("x"))

    def y(self) -> "Coeff":
        if self.kind != HYPER:
            raise ValueError("y exists only in the hyperelliptic ring")
        return self.coeff(UniPoly("x", []), UniPoly.const("x", 1))

    def __repr__(self):
        tag = {POLY: "Q[x]", LAURENT: "Q[x,1/x]", HYPER: "Q[x,y]/(y^2-P)"}[self.kind]
        return "CoeffRing(%s%s)" % (tag, ", localized" if self.localized else "")


def coeff_ring_for(c: "curvemod.CurveModel", localized: bool = False) -> CoeffRing:
    """Operator coefficient ring attached to a curve model."""
    if c.kind == curvemod.AFFINE_LINE:
        return CoeffRing(POLY, localized=localized)
    if c.kind == curvemod.TORUS:
        return CoeffRing(LAURENT, localized=localized)
    if c.is_hyperelliptic:
        return CoeffRing(HYPER, c.hyperelliptic_P, localized=localized)
    raise ValueError("full operator arithmetic supports the line, the torus, "
                     "and hyperelliptic curves only")


_ZERO = UniPoly("x", [])
_ONE = UniPoly.const("x", 1)


class Coeff:
    """Coefficient ring element x^shift * (a(x) + b(x) y) / den(x).

    b is None away from the hyperelliptic ring; shift is 0 away from the
    torus ring; den is monic, coprime to the numerator content.
    """

    __slots__ = ("ring", "a", "b", "den", "shift")

    def __init__(self, ring: CoeffRing, a: UniPoly, b: UniPoly | None = None,
                 den: UniPoly | None = None, shift: int = 0):
        if den is None:
            den = _ONE
        if ring.kind == HYPER:
            if b is None:
                b = _ZERO
        elif b is not None and not b.is_zero:
            raise ValueError("y component outside the hyperelliptic ring")
        else:
            b = None
        if ring.kind != LAURENT and shift:
            raise ValueError("x-power shifts exist only in the Laurent ring")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        a, b, den, shift = _normalize(ring, a, b, den, shift)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "shift", shift)

    def __setattr__(self, name, value):
        raise AttributeError("Coeff is immutable")

    @property
    def is_zero(self) -> bool:
        return self.a.is_zero and (self.b is None or self.b.is_zero)

    def _pair(self, other) -> "Coeff":
        if isinstance(other, Coeff):
            if not self.ring.compatible(other.ring):
                raise ValueError("coefficient ring mismatch")
            return other
        if isinstance(other, UniPoly):
            return Coeff(self.ring, other)
        return Coeff(self.ring, UniPoly.const("x", rat(other)))

    def __add__(self, other):
        o = self._pair(other)
        s = min(self.shift, o.shift)
        a1 = self.a.mul_xk(self.shift - s)
        a2 = o.a.mul_xk(o.shift - s)
        num_a = a1 * o.den + a2 * self.den
        num_b = None
        if self.b is not None:
            b1 = self.b.mul_xk(self.shift - s)
            b2 = o.b.mul_xk(o.shift - s)
            num_b = b1 * o.den + b2 * self.den
        return Coeff(self.ring, num_a, num_b, self.den * o.den, s)

    __radd__ = __add__

    def __neg__(self):
        return Coeff(self.ring, -self.a, None if self.b is None else -self.b,
                     self.den, self.shift)

    def __sub__(self, other):
        return self + (-self._pair(other))

    def __rsub__(self, other):
        return self._pair(other) - self

    def __mul__(self, other):
        o = self._pair(other)
        if self.b is not None:
            P = self.ring.P
            na = self.a * o.a + self.b * o.b * P
            nb = self.a * o.b + self.b * o.a
        else:
            na = self.a * o.a
            nb = None
        return Coeff(self.ring, na, nb, self.den * o.den, self.shift + o.shift)

    __rmul__ = __mul__

    def inv(self) -> "Coeff":
        """Multiplicative inverse; requires a localized ring unless the result
        stays denominator-free."""
        if self.is_zero:
            raise ZeroDivisionError("inverting zero coefficient")
        if self.b is not None:
            q = self.a * self.a - self.b * self.b * self.ring.P
            if q.is_zero:
                raise ZeroDivisionError("norm vanishes; element is a zero divisor")
            out = Coeff(self.ring, self.den * self.a, -(self.den * self.b), q, 0)
        else:
            out = Coeff(self.ring, self.den, None, self.a, -self.shift)
        if not self.ring.localized and out.den.degree() > 0:
            raise ValueError("element is not a unit in the unlocalized ring")
        return out

    def __eq__(self, other):
        if not isinstance(other, Coeff):
            try:
                other = self._pair(other)
            except (TypeError, ValueError):
                return NotImplemented
        if not self.ring.compatible(other.ring):
            return False
        return (self.a == other.a and self.b == other.b
                and self.den == other.den and self.shift == other.shift)

    def __hash__(self):
        return hash((self.a, self.b, self.den, self.shift))

    def derive(self) -> "Coeff":
        """Image under the model derivation (d/dx, or the hyperelliptic one)."""
        ring = self.ring
        if ring.kind == HYPER:
            P = ring.P
            a, b, d = self.a, self.b, self.den
            # derivation z with z(x) = 2y, z(y) = P'(x), so z(F) = 0:
            #   z(a + b y) = (2 b' P + b P') + (2 a') y,  z(d) = 2 d' y
            num_a = (b.derivative() * P * 2 + b * P.derivative()) * d - (b * d.derivative() * 2) * P
            num_b = (a.derivative() * 2) * d - (a * d.derivative() * 2)
            return Coeff(ring, num_a, num_b, d * d, 0)
        n, d, s = self.a, self.den, self.shift
        if ring.kind == LAURENT:
            # d/dx of x^s n/d = x^(s-1) (s n d + x (n' d - n d')) / d^2
            num = n * d * s + (n.derivative() * d - n * d.derivative()).mul_xk(1)
            return Coeff(ring, num, None, d * d, s - 1)
        return Coeff(ring, n.derivative() * d - n * d.derivative(), None, d * d, 0)

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0 and self.shift >= 0

    def as_poly(self) -> UniPoly:
        """Collapse to a plain polynomial in x (line/torus, polynomial case)."""
        if self.b is not None and not self.b.is_zero:
            raise ValueError("element has a y component")
        if not self.is_polynomial():
            raise ValueError("element has a denominator: %r" % (self,))
        return self.a.mul_xk(self.shift)

    def __repr__(self):
        core = repr(self.a)
        if self.b is not None and not self.b.is_zero:
            core = "(%s) + (%s)*y" % (self.a, self.b)
        if self.den.degree() > 0:
            core = "(%s)/(%s)" % (core, self.den)
        if self.shift:
            core = "x^%d*(%s)" % (self.shift, core)
        return core


def _normalize(ring, a, b, den, shift):
    if a.is_zero and (b is None or b.is_zero):
        return _ZERO, (None if b is None else _ZERO), _ONE, 0
    # reduce the common polynomial content
    g = a.gcd(den) if b is None else a.gcd(b).gcd(den)
    if not g.is_zero and g.degree() > 0:
        a = a.divmod_(g)[0]
        den = den.divmod_(g)[0]
        if b is not None:
            b = b.divmod_(g)[0]
    c = den.lc()
    if c != 1:
        inv = 1 / c
        a = a * inv
        den = den * inv
        if b is not None:
            b = b * inv
    if ring.kind == LAURENT:
        # move x-powers between numerator, denominator and the shift
        v = den.x_valuation()
        if v:
            den = UniPoly("x", den.coeffs[v:])
            shift -= v
        va = a.x_valuation()
        if not a.is_zero and va:
            a = UniPoly("x", a.coeffs[va:])
            shift += va
    return a, b, den, shift


class CoeffMatRing(RingBase):
    """Ring protocol adapter so Mat can hold Coeff entries.

    Localized rings are fields (on the hyperelliptic curve because P is
    squarefree and nonconstant, so the norm a^2 - b^2 P only vanishes at 0).
    """

    def __init__(self, cring: CoeffRing):
        self.cring = cring
        self.is_field = cring.localized

    def zero(self):
        return self.cring.zero()

    def one(self):
        return self.cring.one()

    def from_int(self, n: int):
        return self.cring.from_int(n)

    def from_frac(self, c):
        return self.cring.from_frac(c)

    def inv(self, a: "Coeff") -> "Coeff":
        return a.inv()

    def exact_div(self, a: "Coeff", b: "Coeff") -> "Coeff":
        return a * b.inv()

    def __eq__(self, other):
        return isinstance(other, CoeffMatRing) and other.cring == self.cring

    def __hash__(self):
        return hash(("coeffmat", self.cring))


class DiffOp:
    """Normal-form differential operator sum(c_i d^i), derivative powers rightmost."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CoeffRing, coeffs):
        cs = list(coeffs)
        for i, c in enumerate(cs):
            if not isinstance(c, Coeff):
                cs[i] = ring.from_frac(c) if isinstance(c, (int, Fraction)) else ring.from_poly(c)
        while cs and cs[-1].is_zero:
            cs.pop()
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    @classmethod
    def zero(cls, ring: CoeffRing) -> "DiffOp":
        return cls(ring, [])

    @classmethod
    def from_coeff(cls, c: Coeff) -> "DiffOp":
        return cls(c.ring, [c])

    @classmethod
    def partial(cls, ring: CoeffRing) -> "DiffOp":
        return cls(ring, [ring.zero(), ring.one()])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> Coeff:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ring.zero()

    def order(self) -> int:
        if self.is_zero:
            raise ValueError("zero operator has no order")
        return len(self.coeffs) - 1

    def principal_symbol(self) -> Coeff:
        if self.is_zero:
            raise ValueError("zero operator has no principal symbol")
        return self.coeffs[-1]

    def add(self, other: "DiffOp") -> "DiffOp":
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp(self.ring, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def sub(self, other: "DiffOp") -> "DiffOp":
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp(self.ring, [self.coeff(i) - other.coeff(i) for i in range(n)])

    def neg(self) -> "DiffOp":
        return DiffOp(self.ring, [-c for c in self.coeffs])

    def scalar_mul(self, c) -> "DiffOp":
        if not isinstance(c, Coeff):
            c = self.ring.from_frac(rat(c))
        return DiffOp(self.ring, [c * ci for ci in self.coeffs])

    def mul(self, other: "DiffOp") -> "DiffOp":
        """Normal-ordered product: d^i * c = sum_k C(i,k) c^(k) d^(i-k)."""
        if not self.ring.compatible(other.ring):
            raise ValueError("coefficient ring mismatch")
        out = {}
        for i, ci in enumerate(self.coeffs):
            if ci.is_zero:
                continue
            for j, dj in enumerate(other.coeffs):
                if dj.is_zero:
                    continue
                der = dj
                for k in range(i + 1):
                    if not der.is_zero:
                        key = i - k + j
                        term = ci * der * math.comb(i, k)
                        out[key] = out.get(key, self.ring.zero()) + term
                    if k < i:
                        der = der.derive()
        if not out:
            return DiffOp.zero(self.ring)
        top = max(out)
        return DiffOp(self.ring, [out.get(i, self.ring.zero()) for i in range(top + 1)])

    def apply(self, f: Coeff) -> Coeff:
        """Evaluate sum(c_i d^i) on a coefficient ring element."""
        if not isinstance(f, Coeff):
            f = self.ring.from_poly(f) if isinstance(f, UniPoly) else self.ring.from_frac(f)
        out = self.ring.zero()
        der = f
        for i, c in enumerate(self.coeffs):
            if not c.is_zero:
                out = out + c * der
            if i + 1 < len(self.coeffs):
                der = der.derive()
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.ring.compatible(other.ring) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c.is_zero:
                continue
            if i == 0:
                parts.append("(%r)" % (c,))
            elif i == 1:
                parts.append("(%r)*d" % (c,))
            else:
                parts.append("(%r)*d^%d" % (c, i))
        return " + ".join(parts)


class FiltrationBasis:
    """Basis tag for the order filtration: free module <1, d, ..., d^k>."""

    __slots__ = ("ring", "k")

    def __init__(self, ring: CoeffRing, k: int):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):
        raise AttributeError("FiltrationBasis is immutable")

    @property
    def rank(self) -> int:
        return self.k + 1

    def labels(self):
        return ["1"] + ["d^%d" % i if i > 1 else "d" for i in range(1, self.k + 1)]


def filtration_basis(ring: CoeffRing, k: int) -> FiltrationBasis:
    """Filtration level k as a free rank-(k+1) module over the coefficient ring."""
    if ring.kind not in (POLY, LAURENT):
        raise ValueError("free filtration bases exist for the line and torus rings only")
    if k < 0:
        raise ValueError("negative filtration level")
    return FiltrationBasis(ring, k)


class FractionalIdeal:
    """Finite generator list of operators over the localized coefficient ring."""

    __slots__ = ("curve", "generators")

    def __init__(self, curve_model, generators):
        gens = tuple(generators)
        if not any(not g.is_zero for g in gens):
            raise ValueError("a fractional ideal needs at least one nonzero generator")
        object.__setattr__(self, "curve", curve_model)
        object.__setattr__(self, "generators", gens)

    def __setattr__(self, name, value):
        raise AttributeError("FractionalIdeal is immutable")

    def __eq__(self, other):
        if not isinstance(other, FractionalIdeal):
            return NotImplemented
        return self.curve == other.curve and self.generators == other.generators

    def __repr__(self):
        return "FractionalIdeal(%r, %d generators)" % (self.curve, len(self.generators))
