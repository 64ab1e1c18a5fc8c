"""Signed variants of the Kazhdan-Lusztig polynomials.

Tables are indexed by a regular antidominant weight, a chamber element w
of the integral Weyl group (witness direction w(-rho)), and a pair of
group elements in the published flipped convention.  Induction is on the
length of the first index: the two easy moves transport a polynomial
across one reflection at the cost of a hyperplane crossing sign, and the
remaining case solves the generator-product identity for the unknown
polynomial, with level-one signed coefficients in place of the classical
mu function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q

from .errors import IntegralityMismatch, NotAntidominant, NotRegular
from .jantzen import epsilon_hyperplane
from .kl import KLTable
from .polys import IntPoly
from .roots import (
    ReflectionGroup,
    RootDatum,
    Vector,
    WeylElement,
    integral_weyl_group,
    vec,
    vscale,
)


@dataclass
class SignedKLContext:
    datum: RootDatum
    lam: Vector
    w: WeylElement
    group: ReflectionGroup
    delta: Vector
    kltable: KLTable
    alt_descent: bool = False
    _memo: dict = field(default_factory=dict)
    _eps_override: dict | None = None

    def weyl_chamber_sample(self, x: WeylElement) -> Vector:
        return x.act(vscale(-1, self.datum.rho))


def make_context(
    datum: RootDatum,
    lam,
    chamber,
    alt_descent: bool = False,
) -> SignedKLContext:
    """Validate lambda and build the signed table context.

    ``chamber`` is a reduced word (in the integral Weyl group generators)
    or a WeylElement; the witness direction is chamber(-rho).
    """
    lam = vec(lam)
    for beta in datum.positive_roots:
        p = datum.pairing(lam, beta)
        if p == 0:
            raise NotRegular(f"lambda pairs to zero with {beta}")
        if p.denominator == 1 and p > 0:
            raise NotAntidominant(f"(lambda, {beta}^) = {p} is a positive integer")
    group = integral_weyl_group(datum, lam)
    if isinstance(chamber, WeylElement):
        w = group.element_of_matrix(chamber.matrix)
    else:
        w = group.from_word(tuple(chamber))
    delta = w.act(vscale(-1, datum.rho))
    return SignedKLContext(
        datum=datum,
        lam=lam,
        w=w,
        group=group,
        delta=delta,
        kltable=KLTable(group),
        alt_descent=alt_descent,
    )


def _sgn(x: Q) -> int:
    if x == 0:
        raise NotRegular("degenerate pairing in sign computation")
    return 1 if x > 0 else -1


def _epsilon(ctx: SignedKLContext, gamma, n: int, chamber_elt: WeylElement) -> int:
    point = chamber_elt.act(vscale(-1, ctx.datum.rho))
    value = epsilon_hyperplane(ctx.datum, gamma, n, point).value
    if ctx._eps_override:
        value = ctx._eps_override.get((tuple(gamma), n), value)
    return value


def _root_of(ctx: SignedKLContext, x: WeylElement, alpha: Vector):
    """Image root x(alpha) as integer coordinates."""
    img = x.act(vec(alpha))
    return tuple(int(c) for c in img)


def signed_kl(ctx: SignedKLContext, x, y) -> IntPoly:
    """Signed polynomial at the flipped pair (x, y); zero unless y <= x."""
    g = ctx.group
    if not isinstance(x, WeylElement):
        x = g.from_word(tuple(x))
    if not isinstance(y, WeylElement):
        y = g.from_word(tuple(y))
    if x.matrix not in g._table or y.matrix not in g._table:
        raise IntegralityMismatch("element outside the integral Weyl group")
    return _signed(ctx, x, y)


def level_coefficient(ctx: SignedKLContext, x, y, j: int) -> int:
    """Signed contribution of the (x, y) pair at filtration level j."""
    g = ctx.group
    if not isinstance(x, WeylElement):
        x = g.from_word(tuple(x))
    if not isinstance(y, WeylElement):
        y = g.from_word(tuple(y))
    gap = x.length - y.length - j
    if gap < 0 or gap % 2 != 0:
        return 0
    return _signed(ctx, x, y).coeff(gap // 2)


def _signed(ctx: SignedKLContext, x: WeylElement, y: WeylElement) -> IntPoly:
    g = ctx.group
    if x == y:
        return IntPoly.one()
    if not g.bruhat_leq(y, x):
        return IntPoly.zero()
    key = (x.matrix, y.matrix)
    cached = ctx._memo.get(key)
    if cached is not None:
        return cached
    datum = ctx.datum
    lam = ctx.lam

    # move a: right descent s of x that is an ascent of y
    descents = g.right_descents(x)
    if ctx.alt_descent:
        descents = list(reversed(descents))
    res = None
    for s in descents:
        if g.right(y, s).length <= y.length:
            continue
        x0 = g.right(x, s)
        alpha = vec(g.simple_roots[s])
        n = -datum.pairing(lam, g.simple_roots[s])
        assert n.denominator == 1 and n > 0
        gamma = _root_of(ctx, x0, alpha)
        sign = _sgn(datum.pairing(ctx.delta, gamma))
        sign *= _epsilon(ctx, gamma, int(n), x)
        res = sign * _signed(ctx, x0, y)
        break
    if res is None:
        # move a': left descent s of x that is a left ascent of y
        lefts = g.left_descents(x)
        if ctx.alt_descent:
            lefts = list(reversed(lefts))
        for s in lefts:
            if g.left(y, s).length <= y.length:
                continue
            x0 = g.left(x, s)
            alpha = g.simple_roots[s]
            n = datum.pairing(x.act(lam), alpha)
            assert n.denominator == 1 and n > 0
            sign = _sgn(datum.pairing(ctx.delta, alpha))
            sign *= _epsilon(ctx, alpha, int(n), x)
            res = sign * _signed(ctx, x0, y)
            break
    if res is None:
        # difficult move: every right descent of x descends y as well
        s = descents[0]
        x0 = g.right(x, s)
        alpha = vec(g.simple_roots[s])
        ys = g.right(y, s)
        assert ys.length < y.length
        n_b = -datum.pairing(lam, g.simple_roots[s])
        assert n_b.denominator == 1 and n_b > 0
        x0alpha = _root_of(ctx, x0, alpha)
        grading = datum.epsilon(tuple(int(n_b) * c for c in x0alpha))
        gsign = -1 if grading else 1
        lhs = _sgn(datum.pairing(ctx.delta, x0alpha)) * _signed(ctx, x0, y).shift(1)
        rhs = IntPoly.zero()
        for z in g.elements():
            if g.right(z, s).length <= z.length:
                continue
            if not (g.bruhat_leq(y, z) and g.bruhat_leq(z, x0)):
                continue
            gap = z.length - y.length - 1
            if gap < 0 or gap % 2 != 0:
                continue
            a1 = _signed(ctx, z, y).coeff(gap // 2)
            if a1 == 0:
                continue
            zalpha = _root_of(ctx, z, alpha)
            term = _signed(ctx, x0, z) * (a1 * _sgn(datum.pairing(ctx.delta, zalpha)))
            rhs = rhs + term.shift((z.length - y.length + 1) // 2)
        # The printed rule carries sgn(delta, ys alpha^) here; ground truth
        # (layer-by-layer Gram diagonalization) fixes the coefficient as the
        # grading sign of the translate instead, matching the structure of
        # the first term.  See the C2 worked comparison in the test suite.
        ysalpha = _root_of(ctx, ys, alpha)
        ys_grading = datum.epsilon(tuple(int(n_b) * c for c in ysalpha))
        rhs = rhs + (-1 if ys_grading else 1) * _signed(ctx, x0, ys)
        res = gsign * (lhs - rhs)
    ctx._memo[key] = res
    return res


class SignedKLTable:
    """All pairs of one context, in the published flipped indexing."""

    def __init__(self, ctx: SignedKLContext):
        self.ctx = ctx
        self.pairs: dict[tuple, IntPoly] = {}
        for x in ctx.group.elements():
            for y in ctx.group.elements():
                if ctx.group.bruhat_leq(y, x):
                    self.pairs[(x, y)] = _signed(ctx, x, y)

    def poly(self, x: WeylElement, y: WeylElement) -> IntPoly:
        return self.pairs.get((x, y), IntPoly.zero())

    def level(self, x: WeylElement, y: WeylElement, j: int) -> int:
        return level_coefficient(self.ctx, x, y, j)
