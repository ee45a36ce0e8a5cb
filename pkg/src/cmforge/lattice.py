"""Hermite forms and filtration lattices for operator ideals on the line and torus.

Operators are compared through their coefficient rows over Q[x]: every
generator is cleared to polynomial form by one recorded right multiplier,
the filtration level k span is assembled as a matrix of derivative rows,
and row-span questions (codimension, equality) reduce to Hermite forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curve import AFFINE_LINE, TORUS
from .diffop import DiffOp, FractionalIdeal
from .errors import PreconditionError
from .exact import Mat, PolyRing, QQ, UniPoly

_PR = PolyRing("x")


def hnf(m: Mat) -> tuple[Mat, Mat]:
    """Row Hermite form over Q[x]: returns (H, U) with U unimodular and U*m = H.

    Pivots are monic and entries above a pivot have strictly lower degree,
    so equal row spans produce identical H.
    """
    if not isinstance(m.ring, PolyRing):
        raise ValueError("hnf expects a matrix over a polynomial ring")
    ring = m.ring
    nrows, ncols = m.rows, m.cols
    rows = [list(m.row(i)) for i in range(nrows)]
    uni = [[ring.one() if i == j else ring.zero() for j in range(nrows)]
           for i in range(nrows)]

    def submul(i, j, q):
        rows[i] = [a - q * b for a, b in zip(rows[i], rows[j])]
        uni[i] = [a - q * b for a, b in zip(uni[i], uni[j])]

    def swap(i, j):
        rows[i], rows[j] = rows[j], rows[i]
        uni[i], uni[j] = uni[j], uni[i]

    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        # Euclidean descent on column c until a single entry survives at r
        while True:
            live = [i for i in range(r, nrows) if not rows[i][c].is_zero]
            if not live:
                break
            piv = min(live, key=lambda i: rows[i][c].degree())
            if piv != r:
                swap(r, piv)
            done = True
            for i in range(r + 1, nrows):
                if rows[i][c].is_zero:
                    continue
                q, rem = rows[i][c].divmod_(rows[r][c])
                submul(i, r, q)
                if not rem.is_zero:
                    done = False
            if done:
                break
        if rows[r][c].is_zero:
            continue
        lead = rows[r][c].lc()
        if lead != 1:
            inv = 1 / lead
            rows[r] = [p * inv for p in rows[r]]
            uni[r] = [p * inv for p in uni[r]]
        for i in range(r):
            if not rows[i][c].is_zero and rows[i][c].degree() >= rows[r][c].degree():
                q, _ = rows[i][c].divmod_(rows[r][c])
                submul(i, r, q)
        r += 1
    h = Mat.from_rows(ring, rows) if rows else Mat(ring, 0, ncols, ())
    u = Mat.from_rows(ring, uni) if uni else Mat(ring, 0, 0, ())
    return h, u


@dataclass(frozen=True)
class ClearingData:
    """Right multiplier den**power clearing every generator to Q[x] rows.

    For torus ideals the denominator absorbs x**shift (shift >= 0) so that
    negative x-powers disappear as well; the multiplier is a unit there,
    which leaves codimensions and span comparisons unchanged as long as
    both sides of a comparison are cleared with the same data.
    """

    den: UniPoly
    power: int
    shift: int = 0

    def multiplier(self) -> UniPoly:
        return self.den ** self.power


def _lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    g = a.gcd(b)
    return (a * b).divmod_(g)[0].monic()


def clearing_for(*ideals: FractionalIdeal) -> ClearingData:
    """Common clearing for one or more ideals over the same model.

    den is the monic lcm of all coefficient denominators times x**shift,
    where shift clears the most negative torus x-power; power is one more
    than the maximal generator order, which is enough because the j-th
    derivative of den**power is still divisible by den**(power - j).
    """
    if not ideals:
        raise ValueError("clearing_for needs at least one ideal")
    den = UniPoly.const("x", 1)
    shift = 0
    max_order = 0
    for ideal in ideals:
        for g in ideal.generators:
            if g.is_zero:
                continue
            max_order = max(max_order, g.order())
            for i in range(g.order() + 1):
                c = g.coeff(i)
                if c.is_zero:
                    continue
                if c.b is not None:
                    raise ValueError("lattice clearing handles line and torus coefficients only")
                den = _lcm(den, c.den)
                shift = max(shift, -c.shift)
    return ClearingData(den.mul_xk(shift), max_order + 1, shift)


@dataclass(frozen=True)
class FiltrationModule:
    """Level-k span of an ideal: derivative rows over Q[x].

    Columns run from d^k down to d^0 so that Hermite pivots line up with
    principal symbols.
    """

    kind: str
    k: int
    rows: Mat
    clearing: ClearingData


def span_filtration(gens: FractionalIdeal, k: int,
                    clearing: ClearingData | None = None) -> FiltrationModule:
    """Rows d^s * (g * multiplier) for each generator g and s <= k - order(g)."""
    kind = gens.curve.kind
    if kind not in (AFFINE_LINE, TORUS):
        raise ValueError("only the affine line and the torus carry the lattice filtration")
    if k < 0:
        raise ValueError("negative filtration level")
    if clearing is None:
        clearing = clearing_for(gens)
    ring = gens.generators[0].ring
    mult = DiffOp.from_coeff(ring.from_poly(clearing.multiplier()))
    partial = DiffOp.partial(ring)
    rowvecs = []
    for g in gens.generators:
        if g.is_zero:
            continue
        op = g.mul(mult)
        smax = k - op.order()
        for s in range(smax + 1):
            vec = []
            for i in range(k, -1, -1):
                c = op.coeff(i)
                if not c.is_polynomial():
                    raise PreconditionError(
                        "clearing left a non-polynomial coefficient: %r" % (c,))
                vec.append(c.as_poly())
            rowvecs.append(vec)
            if s < smax:
                op = partial.mul(op)
    if rowvecs:
        mat = Mat.from_rows(_PR, rowvecs)
    else:
        mat = Mat(_PR, 0, k + 1, ())
    return FiltrationModule(kind, k, mat, clearing)


def _pivots(h: Mat) -> list[UniPoly]:
    out = []
    for i in range(h.rows):
        for j in range(h.cols):
            if not h.entry(i, j).is_zero:
                out.append(h.entry(i, j))
                break
    return out


def _strip_x(p: UniPoly) -> UniPoly:
    v = p.x_valuation()
    return UniPoly(p.var, p.coeffs[v:]) if v else p


@dataclass(frozen=True)
class CodimReport:
    """Codimension of the span inside the ambient rank-one lattice, per level."""

    entries: tuple
    stabilized: int | None
    ambient_pivot: UniPoly | None


def codim(gens: FractionalIdeal, kmax: int) -> CodimReport:
    """Codimension dim(ambient_k / span_k) for k = 0..kmax.

    The ambient pivot is read off as the minimal pivot of the level-kmax
    Hermite form; each level contributes the sum of pivot degree excesses
    over it.  On the torus degrees are Laurent degrees (degree minus
    x-valuation), which makes the count independent of the unit clearing.
    A pivot that is not a multiple of the ambient pivot means the span is
    not a sublattice of a rank-one module and is reported as an error.
    """
    if kmax < 0:
        raise ValueError("negative kmax")
    clearing = clearing_for(gens)
    laurent = gens.curve.kind == TORUS

    def deg_l(p: UniPoly) -> int:
        return p.degree() - (p.x_valuation() if laurent else 0)

    per_k = []
    for k in range(kmax + 1):
        fm = span_filtration(gens, k, clearing)
        h, _ = hnf(fm.rows)
        pivots = _pivots(h)
        per_k.append(pivots if len(pivots) == k + 1 else None)
    if per_k[-1] is None:
        return CodimReport(tuple((k, None) for k in range(kmax + 1)), None, None)
    ambient = min(per_k[-1], key=deg_l)
    ambient_red = _strip_x(ambient) if laurent else ambient
    values: list[int | None] = []
    for pivots in per_k:
        if pivots is None:
            values.append(None)
            continue
        total = 0
        for p in pivots:
            p_red = _strip_x(p) if laurent else p
            _, rem = p_red.divmod_(ambient_red)
            if not rem.is_zero:
                raise PreconditionError(
                    "non-nested modules: pivot %r is not a multiple of the "
                    "ambient pivot %r" % (p, ambient))
            total += deg_l(p) - deg_l(ambient)
        values.append(total)
    stabilized = None
    if kmax >= 2 and values[-1] is not None:
        tail = values[-3:]
        if tail[0] == tail[1] == tail[2]:
            stabilized = values[-1]
    return CodimReport(tuple(zip(range(kmax + 1), values)), stabilized, ambient)


def _kernel_basis(m: Mat) -> list:
    """Basis of the rational kernel of m (vectors as Fraction lists)."""
    rows, pivots = m.rref()
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * m.cols
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -rows[r][f]
        basis.append(vec)
    return basis


def x_saturate(m: Mat) -> Mat:
    """Saturate a Q[x] row module at x: rows spanning (Q[x,1/x]-span) cap Q[x]^cols.

    Clearing a torus ideal multiplies generators by x-power units, which can
    shrink the Q[x] row span even though the Laurent span is unchanged; the
    saturation is the canonical representative.  Iterates M -> M + (1/x)(M cap
    x Q[x]^cols) to a fixpoint: the new elements per step are the kernel
    combinations of the constant-term matrix, divided by x.
    """
    current = m
    while True:
        h, _ = hnf(current)
        rows = [h.row(i) for i in range(h.rows)
                if any(not e.is_zero for e in h.row(i))]
        if not rows:
            return Mat(m.ring, 0, m.cols, ())
        ncols = len(rows[0])
        const = Mat(QQ, ncols, len(rows),
                    [rows[i][j].coeff(0) for j in range(ncols) for i in range(len(rows))])
        extra = []
        for c in _kernel_basis(const):
            w = []
            for j in range(ncols):
                acc = _PR.zero()
                for i, ci in enumerate(c):
                    if ci:
                        acc = acc + rows[i][j] * ci
                if acc.coeff(0) != 0:
                    raise AssertionError("kernel combination not divisible by x")
                w.append(UniPoly(acc.var, acc.coeffs[1:]))
            if any(not e.is_zero for e in w):
                extra.append(w)
        if not extra:
            return Mat.from_rows(m.ring, rows)
        enlarged, _ = hnf(Mat.from_rows(m.ring, rows + extra))
        new_rows = [enlarged.row(i) for i in range(enlarged.rows)
                    if any(not e.is_zero for e in enlarged.row(i))]
        if new_rows == rows:
            return Mat.from_rows(m.ring, rows)
        current = Mat.from_rows(m.ring, new_rows)


def module_equal(a: FiltrationModule, b: FiltrationModule) -> bool:
    """Equality of row spans, decided by identical Hermite forms.

    Spans are compared over Q[x] for the line; over the torus the clearing is
    only canonical up to x-power units, so both sides are x-saturated first,
    which compares them as Q[x,1/x] spans.
    """
    if a.k != b.k:
        raise ValueError("modules at different filtration levels")
    if a.kind != b.kind:
        raise ValueError("modules over different curve models")
    if a.clearing != b.clearing:
        raise ValueError("modules cleared differently; build both with a common clearing")

    def reduced(fm: FiltrationModule):
        mat = x_saturate(fm.rows) if fm.kind == TORUS else fm.rows
        h, _ = hnf(mat)
        return tuple(tuple(h.row(i)) for i in range(h.rows)
                     if any(not p.is_zero for p in h.row(i)))

    return reduced(a) == reduced(b)


def unit_conjugate(gens: FractionalIdeal, r: int) -> FractionalIdeal:
    """Conjugate every generator by the unit x**r (torus only)."""
    if gens.curve.kind != TORUS:
        raise ValueError("unit conjugation needs x invertible (torus model)")
    ring = gens.generators[0].ring
    xr = DiffOp.from_coeff(ring.coeff(UniPoly.const("x", 1), shift=r))
    xmr = DiffOp.from_coeff(ring.coeff(UniPoly.const("x", 1), shift=-r))
    return FractionalIdeal(gens.curve,
                           tuple(xr.mul(g).mul(xmr) for g in gens.generators))
