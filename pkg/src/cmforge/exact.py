"""Exact arithmetic kernel.

Arbitrary-precision rationals, univariate / Laurent / bivariate polynomials,
rational functions, and matrices over a pluggable commutative ring with
fraction-free determinants.  Everything here is immutable and pure.
"""

from __future__ import annotations

from fractions import Fraction


def rat(v) -> Fraction:
    """Coerce ints, "p/q" strings, and Fractions to Fraction."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError("not a rational value: %r" % (v,))


class UniPoly:
    """Dense univariate polynomial over Fraction, coefficients lowest degree first."""

    __slots__ = ("var", "coeffs")

    def __init__(self, var: str, coeffs):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def const(cls, var: str, c) -> "UniPoly":
        return cls(var, [rat(c)])

    @classmethod
    def x(cls, var: str) -> "UniPoly":
        return cls(var, [0, 1])

    @classmethod
    def monomial(cls, var: str, k: int, c=1) -> "UniPoly":
        return cls(var, [0] * k + [rat(c)])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        # degree of the zero polynomial reported as -1
        return len(self.coeffs) - 1

    def lc(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            if other.var != self.var and other.degree() > 0 and self.degree() > 0:
                raise ValueError("variable mismatch: %s vs %s" % (self.var, other.var))
            if other.var != self.var:
                # one side is constant; rename to the non-constant side's variable
                var = self.var if self.degree() > 0 or other.degree() <= 0 else other.var
                return UniPoly(var, other.coeffs)
            return other
        return UniPoly(self.var, [rat(other)])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        cs = [self.coeff(i) + o.coeff(i) for i in range(n)]
        return UniPoly(self.var if self.degree() > 0 or o.degree() <= 0 else o.var, cs)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(self.var, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly(self.var, [c * rat(other) for c in self.coeffs])
        o = self._coerce(other)
        if self.is_zero or o.is_zero:
            return UniPoly(self.var, [])
        cs = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    cs[i + j] += a * b
        var = self.var if self.degree() > 0 or o.degree() <= 0 else o.var
        return UniPoly(var, cs)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = UniPoly.const(self.var, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def mul_xk(self, k: int) -> "UniPoly":
        """Multiply by var**k, k >= 0."""
        if self.is_zero:
            return self
        return UniPoly(self.var, (0,) * k + self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly.const(self.var, other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs and (
            self.var == other.var or self.degree() <= 0 or other.degree() <= 0
        )

    def __hash__(self):
        if self.degree() <= 0:
            return hash(self.coeffs)
        return hash((self.var, self.coeffs))

    def evaluate(self, v: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def subs_matrix(self, m: "Mat") -> "Mat":
        """Horner evaluation at a square matrix."""
        out = Mat.zeros(m.ring, m.rows, m.cols)
        for c in reversed(self.coeffs):
            out = out.mul(m).add(Mat.identity(m.ring, m.rows).scalar_mul(m.ring.from_frac(c)))
        return out

    def derivative(self) -> "UniPoly":
        return UniPoly(self.var, [i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod_(self, other: "UniPoly"):
        o = self._coerce(other)
        if o.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dn = len(o.coeffs)
        if len(rem) < dn:
            return UniPoly(self.var, []), self
        quo = [Fraction(0)] * (len(rem) - dn + 1)
        dlc = o.lc()
        for k in range(len(rem) - dn, -1, -1):
            c = rem[k + dn - 1] / dlc
            if c:
                quo[k] = c
                for i, b in enumerate(o.coeffs):
                    rem[k + i] -= c * b
        return UniPoly(self.var, quo), UniPoly(self.var, rem)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, self._coerce(other)
        while not b.is_zero:
            a, b = b, a.divmod_(b)[1]
        if a.is_zero:
            return a
        return a.monic()

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self * (1 / self.lc())

    def x_valuation(self) -> int:
        """Lowest exponent with a nonzero coefficient (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    def __repr__(self):
        if self.is_zero:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("%s*%s" % (c, self.var))
            else:
                parts.append("%s*%s^%d" % (c, self.var, i))
        return " + ".join(parts)


class LaurentPoly:
    """Laurent polynomial: base * var**shift with base having nonzero constant term."""

    __slots__ = ("base", "shift")

    def __init__(self, base: UniPoly, shift: int = 0):
        if not base.is_zero:
            v = base.x_valuation()
            if v:
                base = UniPoly(base.var, base.coeffs[v:])
                shift += v
        else:
            shift = 0
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "shift", shift)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def const(cls, var: str, c) -> "LaurentPoly":
        return cls(UniPoly.const(var, c), 0)

    @classmethod
    def from_poly(cls, p: UniPoly) -> "LaurentPoly":
        return cls(p, 0)

    @property
    def var(self) -> str:
        return self.base.var

    @property
    def is_zero(self) -> bool:
        return self.base.is_zero

    def degree(self) -> int:
        return self.base.degree() + self.shift

    def valuation(self) -> int:
        return self.shift

    def coeff(self, k: int) -> Fraction:
        return self.base.coeff(k - self.shift)

    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.var, other)
        if not isinstance(other, LaurentPoly):
            raise TypeError("expected LaurentPoly")
        return other

    def __add__(self, other):
        o = self._pair(other)
        if self.is_zero:
            return o
        if o.is_zero:
            return self
        s = min(self.shift, o.shift)
        a = self.base.mul_xk(self.shift - s)
        b = o.base.mul_xk(o.shift - s)
        return LaurentPoly(a + b, s)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(-self.base, self.shift)

    def __sub__(self, other):
        return self + (-self._pair(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.base * other, self.shift)
        o = self._pair(other)
        return LaurentPoly(self.base * o.base, self.shift + o.shift)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.var, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.base == other.base and (self.shift == other.shift or self.is_zero)

    def __hash__(self):
        return hash((self.base, self.shift))

    def derivative(self) -> "LaurentPoly":
        # d/dx of sum c_i x^(i+shift)
        var = self.var
        out = LaurentPoly.const(var, 0)
        for i, c in enumerate(self.base.coeffs):
            e = i + self.shift
            if c and e:
                out = out + LaurentPoly(UniPoly.const(var, e * c), e - 1)
        return out

    def inv(self) -> "LaurentPoly":
        """Inverse, defined only for monomials c * x^k."""
        if self.base.degree() != 0:
            raise ValueError("not a unit in the Laurent ring: %r" % (self,))
        return LaurentPoly(UniPoly.const(self.var, 1 / self.base.coeffs[0]), -self.shift)

    def evaluate(self, v: Fraction) -> Fraction:
        if v == 0 and self.shift < 0:
            raise ZeroDivisionError("evaluating a Laurent polynomial at 0")
        return self.base.evaluate(v) * v ** self.shift

    def __repr__(self):
        if self.shift == 0:
            return repr(self.base)
        return "(%s)*%s^%d" % (self.base, self.var, self.shift)


class BiPoly:
    """Bivariate polynomial: map (r, s) -> coefficient, no zero entries stored.

    The first exponent indexes the x-like variable, the second the y-like one.
    """

    __slots__ = ("terms",)

    def __init__(self, terms):
        d = {}
        for (r, s), c in dict(terms).items():
            c = rat(c)
            if c:
                d[(int(r), int(s))] = c
        object.__setattr__(self, "terms", d)

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def zero(cls) -> "BiPoly":
        return cls({})

    @classmethod
    def const(cls, c) -> "BiPoly":
        return cls({(0, 0): rat(c)})

    @classmethod
    def monomial(cls, r: int, s: int, c=1) -> "BiPoly":
        return cls({(r, s): rat(c)})

    @classmethod
    def from_entries(cls, entries) -> "BiPoly":
        """entries: iterable of (r, s, coefficient)."""
        d = {}
        for r, s, c in entries:
            key = (int(r), int(s))
            d[key] = d.get(key, Fraction(0)) + rat(c)
        return cls(d)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def items_sorted(self):
        return sorted(self.terms.items())

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        d = dict(self.terms)
        for k, c in other.terms.items():
            d[k] = d.get(k, Fraction(0)) + c
        return BiPoly(d)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            return BiPoly({k: v * c for k, v in self.terms.items()})
        d = {}
        for (r1, s1), c1 in self.terms.items():
            for (r2, s2), c2 in other.terms.items():
                k = (r1 + r2, s1 + s2)
                d[k] = d.get(k, Fraction(0)) + c1 * c2
        return BiPoly(d)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree_x(self) -> int:
        return max((r for (r, _s) in self.terms), default=-1)

    def degree_y(self) -> int:
        return max((s for (_r, s) in self.terms), default=-1)

    def partial_x(self) -> "BiPoly":
        return BiPoly({(r - 1, s): r * c for (r, s), c in self.terms.items() if r})

    def partial_y(self) -> "BiPoly":
        return BiPoly({(r, s - 1): s * c for (r, s), c in self.terms.items() if s})

    def eval_frac(self, xv, yv) -> Fraction:
        xv, yv = rat(xv), rat(yv)
        return sum((c * xv ** r * yv ** s for (r, s), c in self.terms.items()), Fraction(0))

    def coeffs_in_y(self, xvar: str = "x"):
        """Coefficient list in the second variable, entries UniPoly in the first."""
        n = self.degree_y()
        out = []
        for s in range(n + 1):
            cs = {}
            for (r, t), c in self.terms.items():
                if t == s:
                    cs[r] = c
            deg = max(cs, default=-1)
            out.append(UniPoly(xvar, [cs.get(i, 0) for i in range(deg + 1)]))
        return out

    def coeffs_in_x(self, yvar: str = "y"):
        n = self.degree_x()
        out = []
        for r in range(n + 1):
            cs = {}
            for (t, s), c in self.terms.items():
                if t == r:
                    cs[s] = c
            deg = max(cs, default=-1)
            out.append(UniPoly(yvar, [cs.get(i, 0) for i in range(deg + 1)]))
        return out

    def as_unipoly(self, which: str, var: str) -> UniPoly:
        """Collapse to a univariate polynomial when the other variable is absent."""
        if which == "x":
            if self.degree_y() > 0:
                raise ValueError("second variable present")
            deg = self.degree_x()
            return UniPoly(var, [self.terms.get((i, 0), 0) for i in range(deg + 1)])
        if which == "y":
            if self.degree_x() > 0:
                raise ValueError("first variable present")
            deg = self.degree_y()
            return UniPoly(var, [self.terms.get((0, i), 0) for i in range(deg + 1)])
        raise ValueError("which must be 'x' or 'y'")

    def subs_second_shift(self) -> "BiPoly":
        """Substitute second variable -> first + eps; result is in (first, eps)."""
        from math import comb

        d = {}
        for (r, s), c in self.terms.items():
            for j in range(s + 1):
                k = (r + s - j, j)
                d[k] = d.get(k, Fraction(0)) + c * comb(s, j)
        return BiPoly(d)

    def __repr__(self):
        if self.is_zero:
            return "0"
        return " + ".join(
            "%s*x^%d*y^%d" % (c, r, s) for (r, s), c in self.items_sorted()
        )


def bipoly_apply(f: BiPoly, a: "Mat", b: "Mat | None" = None) -> "Mat":
    """Evaluate f at a pair of commuting square matrices over the same ring.

    b may be omitted when f does not involve the second variable.
    """
    if b is None:
        if f.degree_y() > 0:
            raise ValueError("second matrix required for a y-dependent polynomial")
        b = Mat.identity(a.ring, a.rows)
    if a.rows != a.cols or b.rows != b.cols or a.rows != b.rows:
        raise ValueError("expected square matrices of equal size")
    ring = a.ring
    n = a.rows
    pow_a = {0: Mat.identity(ring, n)}
    pow_b = {0: Mat.identity(ring, n)}

    def power(cache, m, k):
        while k not in cache:
            top = max(cache)
            cache[top + 1] = cache[top].mul(m)
        return cache[k]

    out = Mat.zeros(ring, n, n)
    for (r, s), c in f.items_sorted():
        term = power(pow_a, a, r).mul(power(pow_b, b, s))
        out = out.add(term.scalar_mul(ring.from_frac(c)))
    return out


class RatFunc:
    """Rational function num/den in one variable; den monic, gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly):
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if not g.is_zero and g.degree() > 0:
            num = num.divmod_(g)[0]
            den = den.divmod_(g)[0]
        c = den.lc()
        if c != 1:
            num = num * (1 / c)
            den = den * (1 / c)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def from_poly(cls, p: UniPoly) -> "RatFunc":
        return cls(p, UniPoly.const(p.var, 1))

    @classmethod
    def const(cls, var: str, c) -> "RatFunc":
        return cls(UniPoly.const(var, c), UniPoly.const(var, 1))

    @property
    def var(self) -> str:
        return self.num.var if self.num.degree() > 0 else self.den.var

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def _pair(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, UniPoly):
            return RatFunc.from_poly(other)
        return RatFunc.const(self.var, rat(other))

    def __add__(self, other):
        o = self._pair(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._pair(other))

    def __rsub__(self, other):
        return self._pair(other) - self

    def __mul__(self, other):
        o = self._pair(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inv(self) -> "RatFunc":
        if self.is_zero:
            raise ZeroDivisionError("inverting zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        return self * self._pair(other).inv()

    def __eq__(self, other):
        o = self._pair(other) if not isinstance(other, RatFunc) else other
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def as_poly(self) -> UniPoly:
        if not self.is_polynomial():
            raise ValueError("denominator is not constant: %r" % (self.den,))
        return self.num

    def __repr__(self):
        if self.is_polynomial():
            return repr(self.num)
        return "(%s)/(%s)" % (self.num, self.den)


class RingBase:
    """Protocol object describing element arithmetic for Mat."""

    is_field = False

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero())

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b


class RationalRing(RingBase):
    is_field = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n: int):
        return Fraction(n)

    def from_frac(self, c: Fraction):
        return rat(c)

    def exact_div(self, a, b):
        return a / b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverting zero")
        return 1 / a

    def __eq__(self, other):
        return isinstance(other, RationalRing)

    def __hash__(self):
        return hash("QQ")


class PolyRing(RingBase):
    """Ring of UniPoly in a fixed variable."""

    def __init__(self, var: str):
        self.var = var

    def zero(self):
        return UniPoly(self.var, [])

    def one(self):
        return UniPoly.const(self.var, 1)

    def gen(self):
        return UniPoly.x(self.var)

    def from_int(self, n: int):
        return UniPoly.const(self.var, n)

    def from_frac(self, c):
        return UniPoly.const(self.var, rat(c))

    def exact_div(self, a, b):
        q, r = a.divmod_(b)
        if not r.is_zero:
            raise ArithmeticError("inexact polynomial division")
        return q

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.var == self.var

    def __hash__(self):
        return hash(("poly", self.var))


class RatFuncRing(RingBase):
    is_field = True

    def __init__(self, var: str):
        self.var = var

    def zero(self):
        return RatFunc.const(self.var, 0)

    def one(self):
        return RatFunc.const(self.var, 1)

    def gen(self):
        return RatFunc.from_poly(UniPoly.x(self.var))

    def from_int(self, n: int):
        return RatFunc.const(self.var, n)

    def from_frac(self, c):
        return RatFunc.const(self.var, rat(c))

    def from_poly(self, p: UniPoly):
        return RatFunc.from_poly(p)

    def exact_div(self, a, b):
        return a / b

    def inv(self, a):
        return a.inv()

    def __eq__(self, other):
        return isinstance(other, RatFuncRing) and other.var == self.var

    def __hash__(self):
        return hash(("ratfunc", self.var))


class LaurentRing(RingBase):
    def __init__(self, var: str):
        self.var = var

    def zero(self):
        return LaurentPoly.const(self.var, 0)

    def one(self):
        return LaurentPoly.const(self.var, 1)

    def gen(self):
        return LaurentPoly.from_poly(UniPoly.x(self.var))

    def from_int(self, n: int):
        return LaurentPoly.const(self.var, n)

    def from_frac(self, c):
        return LaurentPoly.const(self.var, rat(c))

    def __eq__(self, other):
        return isinstance(other, LaurentRing) and other.var == self.var

    def __hash__(self):
        return hash(("laurent", self.var))


QQ = RationalRing()


class Mat:
    """Immutable row-major matrix over a declared coefficient ring."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError("entry count %d does not match %dx%d" % (len(entries), rows, cols))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    @classmethod
    def from_rows(cls, ring, rows) -> "Mat":
        rows = [list(r) for r in rows]
        r = len(rows)
        c = len(rows[0]) if rows else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(ring, r, c, [e for row in rows for e in row])

    @classmethod
    def identity(cls, ring, n: int) -> "Mat":
        return cls(ring, n, n, [ring.one() if i == j else ring.zero() for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, ring, rows: int, cols: int) -> "Mat":
        z = ring.zero()
        return cls(ring, rows, cols, [z] * (rows * cols))

    def entry(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int):
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def col(self, j: int):
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def add(self, other: "Mat") -> "Mat":
        self._check_shape(other)
        rg = self.ring
        return Mat(rg, self.rows, self.cols, [rg.add(a, b) for a, b in zip(self.entries, other.entries)])

    def sub(self, other: "Mat") -> "Mat":
        self._check_shape(other)
        rg = self.ring
        return Mat(rg, self.rows, self.cols, [rg.sub(a, b) for a, b in zip(self.entries, other.entries)])

    def neg(self) -> "Mat":
        rg = self.ring
        return Mat(rg, self.rows, self.cols, [rg.neg(a) for a in self.entries])

    def scalar_mul(self, c) -> "Mat":
        rg = self.ring
        return Mat(rg, self.rows, self.cols, [rg.mul(c, a) for a in self.entries])

    def mul(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch for mul: %dx%d by %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        rg = self.ring
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = rg.zero()
                for k in range(self.cols):
                    acc = rg.add(acc, rg.mul(self.entry(i, k), other.entry(k, j)))
                out.append(acc)
        return Mat(rg, self.rows, other.cols, out)

    def transpose(self) -> "Mat":
        return Mat(self.ring, self.cols, self.rows,
                   [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)])

    def trace(self):
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        rg = self.ring
        acc = rg.zero()
        for i in range(self.rows):
            acc = rg.add(acc, self.entry(i, i))
        return acc

    def map_entries(self, f, ring=None) -> "Mat":
        return Mat(ring if ring is not None else self.ring, self.rows, self.cols,
                   [f(e) for e in self.entries])

    def is_zero(self) -> bool:
        rg = self.ring
        return all(rg.is_zero(e) for e in self.entries)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if self.rows != other.rows or self.cols != other.cols:
            return False
        rg = self.ring
        return all(rg.eq(a, b) for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def _check_shape(self, other: "Mat"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def det(self):
        """Fraction-free Bareiss determinant over an integral domain."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        rg = self.ring
        if n == 0:
            return rg.one()
        a = [self.row(i) for i in range(n)]
        sign = 1
        prev = rg.one()
        for k in range(n - 1):
            if rg.is_zero(a[k][k]):
                for i in range(k + 1, n):
                    if not rg.is_zero(a[i][k]):
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return rg.zero()
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = rg.sub(rg.mul(a[i][j], a[k][k]), rg.mul(a[i][k], a[k][j]))
                    a[i][j] = rg.exact_div(num, prev)
                a[i][k] = rg.zero()
            prev = a[k][k]
        d = a[n - 1][n - 1]
        return rg.neg(d) if sign < 0 else d

    def inv(self) -> "Mat":
        """Gauss-Jordan inverse over a field."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        rg = self.ring
        if not rg.is_field:
            raise ValueError("inverse requires a field coefficient ring")
        n = self.rows
        a = [self.row(i) + Mat.identity(rg, n).row(i) for i in range(n)]
        for col in range(n):
            piv = None
            for i in range(col, n):
                if not rg.is_zero(a[i][col]):
                    piv = i
                    break
            if piv is None:
                raise ZeroDivisionError("singular matrix (determinant vanishes)")
            a[col], a[piv] = a[piv], a[col]
            c = rg.inv(a[col][col])
            a[col] = [rg.mul(c, e) for e in a[col]]
            for i in range(n):
                if i != col and not rg.is_zero(a[i][col]):
                    f = a[i][col]
                    a[i] = [rg.sub(e, rg.mul(f, p)) for e, p in zip(a[i], a[col])]
        return Mat.from_rows(rg, [row[n:] for row in a])

    def rref(self):
        """Reduced row echelon form over a field; returns (rows, pivot column list)."""
        rg = self.ring
        if not rg.is_field:
            raise ValueError("rref requires a field coefficient ring")
        a = [self.row(i) for i in range(self.rows)]
        pivots = []
        r = 0
        for col in range(self.cols):
            piv = None
            for i in range(r, self.rows):
                if not rg.is_zero(a[i][col]):
                    piv = i
                    break
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            c = rg.inv(a[r][col])
            a[r] = [rg.mul(c, e) for e in a[r]]
            for i in range(self.rows):
                if i != r and not rg.is_zero(a[i][col]):
                    f = a[i][col]
                    a[i] = [rg.sub(e, rg.mul(f, p)) for e, p in zip(a[i], a[r])]
            pivots.append(col)
            r += 1
            if r == self.rows:
                break
        return a, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace_dim(self) -> int:
        return self.cols - self.rank()

    def adjugate(self) -> "Mat":
        """Adjugate by cofactor expansion (intended for small matrices)."""
        if self.rows != self.cols:
            raise ValueError("adjugate of a non-square matrix")
        n = self.rows
        rg = self.ring
        if n == 0:
            return self
        cof = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = Mat.from_rows(rg, [
                    [self.entry(r, c) for c in range(n) if c != j]
                    for r in range(n) if r != i
                ])
                d = minor.det()
                row.append(rg.neg(d) if (i + j) % 2 else d)
            cof.append(row)
        return Mat.from_rows(rg, cof).transpose()


def char_poly(m: Mat, var: str) -> UniPoly:
    """det(m - t*Id) as a UniPoly in var, for a matrix over the rationals."""
    if m.rows != m.cols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    ring = PolyRing(var)
    t = ring.gen()
    lifted = []
    for i in range(m.rows):
        for j in range(m.cols):
            e = ring.from_frac(m.entry(i, j))
            if i == j:
                e = e - t
            lifted.append(e)
    return Mat(ring, m.rows, m.cols, lifted).det()


def sylvester_det(pc, qc, ring):
    """Resultant via the Sylvester matrix.

    pc, qc are coefficient lists highest degree first, entries in ring.
    """
    pc = list(pc)
    qc = list(qc)
    while pc and ring.is_zero(pc[0]):
        pc.pop(0)
    while qc and ring.is_zero(qc[0]):
        qc.pop(0)
    if not pc and not qc:
        raise ValueError("resultant of two zero polynomials")
    if not pc or not qc:
        return ring.zero()
    m = len(pc) - 1
    n = len(qc) - 1
    size = m + n
    if size == 0:
        return ring.one()
    rows = []
    for i in range(n):
        rows.append([ring.zero()] * i + pc + [ring.zero()] * (size - i - m - 1))
    for i in range(m):
        rows.append([ring.zero()] * i + qc + [ring.zero()] * (size - i - n - 1))
    return Mat.from_rows(ring, rows).det()


def resultant(p: UniPoly, q: UniPoly):
    """Resultant of two rational-coefficient polynomials in the same variable."""
    if p.is_zero and q.is_zero:
        raise ValueError("resultant of two zero polynomials")
    if p.degree() > 0 and q.degree() > 0 and p.var != q.var:
        raise ValueError("variable mismatch: %s vs %s" % (p.var, q.var))
    return sylvester_det(list(reversed(p.coeffs)), list(reversed(q.coeffs)), QQ)
