"""Local kernels with a diagonal pole and their residue action on half-forms.

Everything lives on one coordinate patch: a kernel phi(z1, z2)/(z1 - z2)^m
acts on a polynomial f through the coefficient of (z2 - z1)^(m-1) in the
expansion of f(z2) phi(z1, z2) about the diagonal.  Half-form weights are
purely formal (the dz^(1/2) tag never materializes); the square root of a
coordinate change only ever appears through the product w'(z1) w'(z2),
whose constant term is an exact rational square.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, isqrt

from .exact import BiPoly, UniPoly


class LocalKernel:
    """Kernel phi(z1, z2)/(z1 - z2)^m; phi polynomial, pole order m >= 1."""

    __slots__ = ("phi", "pole_order")

    def __init__(self, phi: BiPoly, pole_order: int):
        if pole_order < 1:
            raise ValueError("pole order must be at least 1")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "pole_order", int(pole_order))

    def __setattr__(self, name, value):
        raise AttributeError("LocalKernel is immutable")

    def __eq__(self, other):
        if not isinstance(other, LocalKernel):
            return NotImplemented
        return self.phi == other.phi and self.pole_order == other.pole_order

    def __repr__(self):
        return "LocalKernel(%r, pole_order=%d)" % (self.phi, self.pole_order)


class HalfFormOp:
    """First-order operator f -> a f' + b f on half-form coefficients."""

    __slots__ = ("a", "b")

    def __init__(self, a: UniPoly, b: UniPoly):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("HalfFormOp is immutable")

    def apply(self, f: UniPoly) -> UniPoly:
        return self.a * f.derivative() + self.b * f

    def to_kernel(self) -> LocalKernel:
        """Order-2 kernel phi = a(z1) + b(z1)(z2 - z1) with the same action."""
        terms = {}
        for i, c in enumerate(self.a.coeffs):
            terms[(i, 0)] = terms.get((i, 0), Fraction(0)) + c
        for i, c in enumerate(self.b.coeffs):
            terms[(i, 1)] = terms.get((i, 1), Fraction(0)) + c
            terms[(i + 1, 0)] = terms.get((i + 1, 0), Fraction(0)) - c
        return LocalKernel(BiPoly(terms), 2)

    def __eq__(self, other):
        if not isinstance(other, HalfFormOp):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __repr__(self):
        return "HalfFormOp(a=%r, b=%r)" % (self.a, self.b)


def residue_action(kernel: LocalKernel, f: UniPoly) -> UniPoly:
    """Coefficient of (z2 - z1)^(m-1) in f(z2) phi(z1, z2) about z2 = z1."""
    lifted = BiPoly({(0, s): c for s, c in enumerate(f.coeffs)})
    expanded = (lifted * kernel.phi).subs_second_shift()
    rows = expanded.coeffs_in_y("z")
    m = kernel.pole_order
    return rows[m - 1] if m - 1 < len(rows) else UniPoly("z", [])


def extract_operator(kernel: LocalKernel) -> HalfFormOp:
    """Read off f -> a f' + b f from an order-2 kernel: a is the diagonal
    value of phi, b the first off-diagonal Taylor coefficient."""
    if kernel.pole_order != 2:
        raise ValueError("wrong pole order: %d (need 2)" % kernel.pole_order)
    rows = kernel.phi.subs_second_shift().coeffs_in_y("z")
    a = rows[0] if rows else UniPoly("z", [])
    b = rows[1] if len(rows) > 1 else UniPoly("z", [])
    return HalfFormOp(a, b)


# -- coordinate-change check for the diagonal pole ---------------------------
#
# Truncated bivariate series in (z, e), z2 = z1 + e, kept to z-degree <= dz
# and e-degree <= de.  BiPoly's first slot is z, second is e.


def _trunc(p: BiPoly, dz: int, de: int) -> BiPoly:
    return BiPoly({k: c for k, c in p.terms.items() if k[0] <= dz and k[1] <= de})


def _rat_sqrt(c: Fraction) -> Fraction:
    if c <= 0:
        raise ValueError("square root of a non-positive constant term")
    rn, rd = isqrt(c.numerator), isqrt(c.denominator)
    if rn * rn != c.numerator or rd * rd != c.denominator:
        raise ValueError("constant term %s is not a rational square" % (c,))
    return Fraction(rn, rd)


def _inv_series(u: BiPoly, dz: int, de: int) -> BiPoly:
    c = u.terms.get((0, 0), Fraction(0))
    if c == 0:
        raise ValueError("series with zero constant term is not invertible")
    t = _trunc(BiPoly.const(1) - u * BiPoly.const(1 / c), dz, de)
    out = BiPoly.const(1)
    power = BiPoly.const(1)
    for _ in range(dz + de):
        power = _trunc(power * t, dz, de)
        if power.is_zero:
            break
        out = out + power
    return _trunc(out * BiPoly.const(1 / c), dz, de)


def _sqrt_series(u: BiPoly, dz: int, de: int) -> BiPoly:
    c = u.terms.get((0, 0), Fraction(0))
    root = _rat_sqrt(c)
    t = _trunc(u * BiPoly.const(1 / c) - BiPoly.const(1), dz, de)
    out = BiPoly.const(1)
    power = BiPoly.const(1)    # binomial series for (1 + t)^(1/2)
    coeff = Fraction(1)
    for j in range(1, dz + de + 1):
        coeff = coeff * (Fraction(1, 2) - (j - 1)) / j
        power = _trunc(power * t, dz, de)
        if power.is_zero:
            break
        out = out + power * BiPoly.const(coeff)
    return _trunc(out * BiPoly.const(root), dz, de)


def _shift_poly(w: UniPoly) -> BiPoly:
    """w(z + e) as a BiPoly in (z, e)."""
    d = {}
    for i, c in enumerate(w.coeffs):
        for j in range(i + 1):
            k = (i - j, j)
            d[k] = d.get(k, Fraction(0)) + c * comb(i, j)
    return BiPoly(d)


def gamma_skew_check(param_change: UniPoly, order: int = 6) -> bool:
    """Check that the diagonal pole kernel transforms as a half-form pairing.

    For the substitution z -> w(z) the ratio
        S = w'(z1)^(1/2) w'(z2)^(1/2) (z1 - z2) / (w(z1) - w(z2))
    must equal 1 + O((z1 - z2)^2): the constant row 1 says the transformed
    kernel has the same diagonal singularity, the vanishing linear row says
    the correction is symmetric and vanishes on the diagonal.  Computed in
    the series ring truncated at z-degree `order`, e-degree 2.
    """
    w = param_change
    wp = w.derivative()
    if wp.is_zero or wp.coeffs[0] == 0:
        raise ValueError("parameter change has vanishing derivative at the origin")
    dz, de = order, 2
    a = BiPoly({(i, 0): c for i, c in enumerate(wp.coeffs)})
    b = _trunc(_shift_poly(wp), dz, de)
    s = _sqrt_series(_trunc(a * b, dz, de), dz, de)
    # (z1 - z2)/(w(z1) - w(z2)) = 1/q with q = (w(z + e) - w(z))/e
    diff = _shift_poly(w) - BiPoly({(i, 0): c for i, c in enumerate(w.coeffs)})
    q = _trunc(BiPoly({(r, t - 1): c for (r, t), c in diff.terms.items()}), dz, de)
    ratio = _trunc(s * _inv_series(q, dz, de), dz, de)
    rows = ratio.coeffs_in_y("z")
    const_ok = rows and rows[0] == UniPoly("z", [1])
    linear_ok = len(rows) < 2 or rows[1].is_zero
    return bool(const_ok and linear_ok)
