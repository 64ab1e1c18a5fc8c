"""Truncated formal characters and signature characters.

A FormalCharacter stores integer coefficients of e^{anchor - mu} for mu in
the positive root lattice up to a height cutoff.  Signature characters of
Verma modules are constant on the cells cut out by the reducibility
hyperplanes (lambda, alpha^) = n, n >= 1; a cell is identified by the
integer interval of each root pairing.  Tables are produced either by
walking a straight path of cells down to the closed-form region and
applying the crossing correction at each wall, or by the equivalent
subset sum over the walls of one path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from .errors import (
    AnchorMismatch,
    IntegralityMismatch,
    NotInWallachRegion,
    NotRegular,
    UnresolvablePerturbation,
)
from .jantzen import epsilon_hyperplane
from .kl import KLTable
from .polys import IntPoly
from .roots import (
    Coords,
    ReflectionGroup,
    RootDatum,
    Vector,
    WeylElement,
    chamber_of,
    integral_weyl_group,
    kostant_partition,
    mat_apply,
    root_lattice_points,
    vadd,
    vec,
    vneg,
    vscale,
    vsub,
)
from .signedkl import SignedKLContext, _signed


@dataclass
class FormalCharacter:
    """Height-truncated integer combination of e^{anchor - mu}."""

    datum: RootDatum
    anchor: Vector
    cutoff: int
    coeffs: dict[Coords, int]

    def copy(self) -> FormalCharacter:
        return FormalCharacter(self.datum, self.anchor, self.cutoff, dict(self.coeffs))

    def coefficient(self, mu) -> int:
        return self.coeffs.get(tuple(int(c) for c in mu), 0)

    def _check(self, other: FormalCharacter) -> None:
        if self.anchor != other.anchor:
            raise AnchorMismatch(
                f"anchors differ: {self.anchor} vs {other.anchor}"
            )

    def __add__(self, other: FormalCharacter) -> FormalCharacter:
        self._check(other)
        cutoff = min(self.cutoff, other.cutoff)
        out = {
            mu: c for mu, c in self.coeffs.items() if sum(mu) <= cutoff
        }
        for mu, c in other.coeffs.items():
            if sum(mu) <= cutoff:
                out[mu] = out.get(mu, 0) + c
        return FormalCharacter(
            self.datum, self.anchor, cutoff, {m: c for m, c in out.items() if c}
        )

    def __sub__(self, other: FormalCharacter) -> FormalCharacter:
        return self + other.scale(-1)

    def scale(self, c: int) -> FormalCharacter:
        return FormalCharacter(
            self.datum,
            self.anchor,
            self.cutoff,
            {m: c * v for m, v in self.coeffs.items() if c * v},
        )

    def reanchor(self, new_anchor: Vector) -> FormalCharacter:
        """Rewrite against e^{new_anchor - mu}; the shift must be integral.

        Raising the anchor extends the guaranteed range (missing low
        terms are genuinely zero for highest weight characters); lowering
        it is only allowed when no terms are pushed out at the top.
        """
        tau = vsub(vec(new_anchor), self.anchor)
        ints = []
        for c in tau:
            if Q(c).denominator != 1:
                raise AnchorMismatch("anchor shift is not in the root lattice")
            ints.append(int(c))
        ht = sum(ints)
        out: dict[Coords, int] = {}
        for mu, c in self.coeffs.items():
            nm = tuple(m + t for m, t in zip(mu, ints))
            if any(x < 0 for x in nm):
                raise AnchorMismatch(
                    "re-anchoring would drop support above the new anchor"
                )
            out[nm] = c
        return FormalCharacter(self.datum, vec(new_anchor), self.cutoff + ht, out)

    def with_anchor(self, anchor: Vector) -> FormalCharacter:
        """Same coefficient table against a different anchor."""
        return FormalCharacter(self.datum, vec(anchor), self.cutoff, dict(self.coeffs))

    def truncate(self, cutoff: int) -> FormalCharacter:
        return FormalCharacter(
            self.datum,
            self.anchor,
            min(cutoff, self.cutoff),
            {m: c for m, c in self.coeffs.items() if sum(m) <= cutoff},
        )

    def mul_one_pm(self, root, sign: int) -> FormalCharacter:
        """Multiply by (1 + sign * e^{-root})."""
        root = tuple(int(c) for c in root)
        out = dict(self.coeffs)
        for mu, c in self.coeffs.items():
            nm = tuple(m + r for m, r in zip(mu, root))
            if sum(nm) <= self.cutoff:
                out[nm] = out.get(nm, 0) + sign * c
        return FormalCharacter(
            self.datum, self.anchor, self.cutoff, {m: c for m, c in out.items() if c}
        )

    def div_one_pm(self, root, sign: int) -> FormalCharacter:
        """Multiply by the truncated geometric series for (1 + sign e^{-root})^{-1}.

        The result is revalidated by remultiplication up to the cutoff.
        """
        root = tuple(int(c) for c in root)
        # c'_mu = c_mu - sign * c'_{mu - root}, computed by height
        new: dict[Coords, int] = {}
        for mu in sorted(
            set(self.coeffs)
            | {m for m in _cone_points(self.datum, self.cutoff)},
            key=lambda m: (sum(m), m),
        ):
            prev = tuple(m - r for m, r in zip(mu, root))
            val = self.coeffs.get(mu, 0)
            if all(c >= 0 for c in prev):
                val -= sign * new.get(prev, 0)
            if val:
                new[mu] = val
        result = FormalCharacter(self.datum, self.anchor, self.cutoff, new)
        back = result.mul_one_pm(root, sign)
        if back.coeffs != self.truncate(self.cutoff).coeffs:
            raise ArithmeticError("division remultiplication check failed")
        return result

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalCharacter):
            return NotImplemented
        cutoff = min(self.cutoff, other.cutoff)
        return (
            self.anchor == other.anchor
            and self.truncate(cutoff).coeffs == other.truncate(cutoff).coeffs
        )

    def __repr__(self) -> str:
        parts = []
        for mu, c in self.items()[:8]:
            parts.append(f"{c:+d}*e[-{mu}]")
        more = "..." if len(self.coeffs) > 8 else ""
        return f"FormalCharacter(anchor={self.anchor}: {' '.join(parts)}{more})"


def _cone_points(datum: RootDatum, cutoff: int) -> list[Coords]:
    cache = datum.cache("cone_points")
    if cutoff not in cache:
        cache[cutoff] = root_lattice_points(datum, cutoff)
    return cache[cutoff]


def character_one(datum: RootDatum, anchor: Vector, cutoff: int) -> FormalCharacter:
    zero = tuple(0 for _ in range(datum.rank))
    return FormalCharacter(datum, vec(anchor), cutoff, {zero: 1})


# -- region bookkeeping ------------------------------------------------------


@dataclass(frozen=True)
class AlcoveDescriptor:
    """Cell of the reducibility arrangement.

    ``labels[i] = n`` means the pairing with the i-th positive root lies
    in (n, n+1) for n >= 1, and below 1 for n = 0.
    """

    labels: tuple[int, ...]
    sample: Vector

    def __eq__(self, other) -> bool:
        return isinstance(other, AlcoveDescriptor) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def is_base(self) -> bool:
        return all(n == 0 for n in self.labels)


def _interval_label(p: Q) -> int:
    if p.denominator == 1 and p >= 1:
        raise NotRegular(f"pairing {p} lies on a reducibility hyperplane")
    n = p.numerator // p.denominator  # floor for exact fractions
    return max(int(n), 0)


def alcove_of(datum: RootDatum, point) -> AlcoveDescriptor:
    point = vec(point)
    labels = tuple(
        _interval_label(datum.pairing(point, beta)) for beta in datum.positive_roots
    )
    return AlcoveDescriptor(labels, point)


def alcove_of_limit(datum: RootDatum, point, direction) -> AlcoveDescriptor:
    """Cell containing point + s * direction for all small s > 0."""
    point = vec(point)
    direction = vec(direction)
    labels = []
    for beta in datum.positive_roots:
        p = datum.pairing(point, beta)
        d = datum.pairing(direction, beta)
        if p.denominator == 1 and p >= 1:
            if d == 0:
                raise NotRegular(f"limit direction parallel to wall at {beta}")
            labels.append(int(p) if d > 0 else int(p) - 1)
        else:
            labels.append(_interval_label(p))
    labels = tuple(max(n, 0) for n in labels)
    # exact sample strictly inside the cell: stop before the next wall
    smax = None
    for beta in datum.positive_roots:
        p = datum.pairing(point, beta)
        d = datum.pairing(direction, beta)
        if d == 0:
            continue
        if d > 0:
            m = p.numerator // p.denominator + 1  # smallest integer > p
            if m < 1:
                m = 1
        else:
            m = -((-p).numerator // (-p).denominator) - 1  # largest integer < p
            if m < 1:
                continue  # no wall below level 1
        s = (Q(m) - p) / d
        if s > 0 and (smax is None or s < smax):
            smax = s
    s = (smax / 2) if smax is not None else Q(1)
    sample = vadd(point, vscale(s, direction))
    desc = alcove_of(datum, sample)
    assert desc.labels == labels
    return desc


@dataclass(frozen=True)
class Crossing:
    root: Coords
    level: int
    t: Q
    point: Vector  # crossing point on the wall
    downward: bool


def crossing_path(datum: RootDatum, a: AlcoveDescriptor, b: AlcoveDescriptor):
    """Reducibility wall crossings of a straight generic segment a to b."""
    return _generic_path(datum, a, b)[1]


def _generic_path(
    datum: RootDatum,
    a: AlcoveDescriptor,
    b: AlcoveDescriptor,
    all_levels: bool = False,
):
    for attempt in range(12):
        start = _perturbed(datum, a.sample, attempt)
        try:
            if alcove_of(datum, start) != a:
                continue
        except NotRegular:
            continue
        try:
            return start, _segment_crossings(datum, start, b.sample, all_levels)
        except _NonGeneric:
            continue
    raise UnresolvablePerturbation("no generic segment found after 12 attempts")


class _NonGeneric(Exception):
    pass


def _perturbed(datum: RootDatum, point: Vector, attempt: int) -> Vector:
    if attempt == 0:
        return point
    base = Q(1, 64 * (attempt + 1))
    offset = vec(
        [base / (k + 2 + attempt) for k in range(datum.rank)]
    )
    return vadd(point, offset)


def _segment_crossings(
    datum: RootDatum, start: Vector, end: Vector, all_levels: bool = False
):
    events = []
    for beta in datum.positive_roots:
        p0 = datum.pairing(start, beta)
        p1 = datum.pairing(end, beta)
        if p0 == p1:
            continue
        lo, hi = (p0, p1) if p0 < p1 else (p1, p0)
        n = lo.numerator // lo.denominator + 1
        while Q(n) < hi:
            if (n >= 1 or all_levels) and Q(n) > lo:
                t = (Q(n) - p0) / (p1 - p0)
                if 0 < t < 1:
                    events.append((t, beta, n, p0 > p1))
            n += 1
    events.sort(key=lambda e: e[0])
    for i in range(len(events) - 1):
        if events[i][0] == events[i + 1][0]:
            raise _NonGeneric
    crossings = []
    for t, beta, n, downward in events:
        point = vadd(start, vscale(t, vsub(end, start)))
        for other in datum.positive_roots:
            if other == beta:
                continue
            if datum.pairing(point, other).denominator == 1:
                raise _NonGeneric
        crossings.append(Crossing(beta, n, t, point, downward))
    return crossings


# -- closed-form base region -------------------------------------------------


def highest_coroot(datum: RootDatum):
    """Root whose coroot dominates every positive coroot, per component."""
    best = []
    for comp_roots in _component_roots(datum):
        top = None
        for beta in comp_roots:
            cor = datum.coroot_coords[datum.root_index[beta]]
            if top is None or sum(cor) > sum(
                datum.coroot_coords[datum.root_index[top]]
            ):
                top = beta
        best.append(top)
    return best


def _component_roots(datum: RootDatum):
    comps = datum._components()
    out = []
    for comp in comps:
        roots = [
            beta
            for beta in datum.positive_roots
            if all(beta[j] == 0 for j in range(datum.rank) if j not in comp)
        ]
        out.append(roots)
    return out


def in_wallach_region(datum: RootDatum, lam) -> bool:
    lam = vec(lam)
    for i in range(datum.rank):
        if datum.pairing_simple(lam, i) >= 1:
            return False
    for beta in highest_coroot(datum):
        if datum.pairing(lam, beta) >= 1:
            return False
    return True


def wallach_character(datum: RootDatum, lam, cutoff: int) -> FormalCharacter:
    """Closed product form of the signature character in the base region."""
    lam = vec(lam)
    if not in_wallach_region(datum, lam):
        raise NotInWallachRegion(f"{lam} is outside the base region")
    return _wallach_coeffs(datum, cutoff).with_anchor(vsub(lam, datum.rho))


def _wallach_coeffs(datum: RootDatum, cutoff: int) -> FormalCharacter:
    cache = datum.cache("wallach")
    if cutoff in cache:
        return cache[cutoff]
    zero_anchor = vec([0] * datum.rank)
    ch = character_one(datum, zero_anchor, cutoff)
    for beta in datum.positive_roots:
        sign = -1 if datum.epsilon(beta) else 1
        # noncompact: (1 - e^-a)^-1 ; compact: (1 + e^-a)^-1
        ch = ch.div_one_pm(beta, sign)
    cache[cutoff] = ch
    return ch


# -- signature character of a Verma module -----------------------------------


def R_alcove(
    datum: RootDatum, a: AlcoveDescriptor, lam, cutoff: int
) -> FormalCharacter:
    """Signature character table of the cell, anchored at lam - rho."""
    lam = vec(lam)
    assert alcove_of(datum, lam) == a, "lam is not in the given cell"
    table = _r_table(datum, a, cutoff)
    return table.with_anchor(vsub(lam, datum.rho))


def _r_table(datum: RootDatum, a: AlcoveDescriptor, budget: int) -> FormalCharacter:
    """Coefficients of the cell against e^{-mu}, complete to the budget."""
    if budget < 0:
        return FormalCharacter(datum, vec([0] * datum.rank), 0, {})
    cache = datum.cache("r_table")
    key = (a.labels, budget)
    if key in cache:
        return cache[key]
    if a.is_base():
        out = _wallach_coeffs(datum, budget)
        cache[key] = out
        return out
    target = vscale(-1, datum.rho)
    start, crossings = _generic_path(datum, a, alcove_of(datum, target))
    first = crossings[0]
    assert first.downward, "path to the base region must cross downward"
    # next cell along the same segment
    if len(crossings) > 1:
        mid_t = (first.t + crossings[1].t) / 2
        nxt_point = vadd(start, vscale(mid_t, vsub(target, start)))
    else:
        nxt_point = target
    a_next = alcove_of(datum, nxt_point)
    res = _r_table(datum, a_next, budget)
    eps = epsilon_hyperplane(datum, first.root, first.level, first.point).value
    shift = tuple(first.level * c for c in first.root)
    corr_alcove = _translate_alcove(datum, a, shift)
    corr = _r_table(datum, corr_alcove, budget - sum(shift))
    out = dict(res.truncate(budget).coeffs)
    for mu, c in corr.coeffs.items():
        nm = tuple(m + s for m, s in zip(mu, shift))
        if sum(nm) <= budget:
            out[nm] = out.get(nm, 0) + 2 * eps * c
    result = FormalCharacter(
        datum, vec([0] * datum.rank), budget, {m: c for m, c in out.items() if c}
    )
    cache[key] = result
    return result


def _translate_alcove(datum: RootDatum, a: AlcoveDescriptor, shift) -> AlcoveDescriptor:
    """Cell of the region a - shift; the arrangement is shift invariant.

    The stored sample may sit on a wall after translation, in which case
    an in-cell perturbation of the sample is translated instead.
    """
    for attempt in range(12):
        p = _perturbed(datum, a.sample, attempt)
        try:
            if alcove_of(datum, p) != a:
                continue
            return alcove_of(datum, vsub(p, vec(shift)))
        except NotRegular:
            continue
    raise UnresolvablePerturbation("could not translate the cell sample")


def R_alcove_closed(
    datum: RootDatum, a: AlcoveDescriptor, lam, cutoff: int
) -> FormalCharacter:
    """Subset sum over the affine gallery of one path to the base region.

    The path records every integer-level wall it crosses; a subset
    contributes the product of transported crossing signs (a wall whose
    transported level is not a positive integer contributes zero, and a
    root flipped negative contributes the opposite sign at the opposite
    level), together with 2^|S| times the base table shifted by the
    translation that the subset's affine reflections compose to.
    """
    from .roots import mat_mul

    lam = vec(lam)
    assert alcove_of(datum, lam) == a
    # endpoint inside the box of pairings in (-1, 1): the Weyl orbit of the
    # box stays in the base cell, so transported galleries also terminate
    maxp = max(
        abs(datum.pairing(a.sample, beta)) for beta in datum.positive_roots
    )
    k = int(maxp) + 2
    target = vscale(Q(1, k), a.sample)
    _, crossings = _generic_path(
        datum, a, alcove_of(datum, target), all_levels=True
    )
    total: dict[Coords, int] = {}
    base = _wallach_coeffs(datum, cutoff)
    ident = tuple(
        tuple(int(i == j) for j in range(datum.rank)) for i in range(datum.rank)
    )
    n_cross = len(crossings)

    def emit(sign: int, size: int, tau: Coords) -> None:
        factor = (2 ** size) * sign
        for mu, c in base.coeffs.items():
            nm = tuple(m + t for m, t in zip(mu, tau))
            if sum(nm) <= cutoff:
                total[nm] = total.get(nm, 0) + factor * c

    def dfs(idx: int, linear, sign: int, size: int, tau: Coords, ht: int) -> None:
        emit(sign, size, tau)
        for k in range(idx, n_cross):
            cr = crossings[k]
            img = tuple(int(c) for c in mat_apply(linear, vec(cr.root)))
            if sum(img) > 0:
                pos_root, level = img, cr.level
                transported_down = cr.downward
            else:
                pos_root = tuple(-c for c in img)
                level = -cr.level
                transported_down = not cr.downward
            if level < 1:
                continue
            add = level * sum(pos_root)
            if ht + add > cutoff:
                continue
            eps = epsilon_hyperplane(
                datum, pos_root, level, mat_apply(linear, cr.point)
            ).value
            dfs(
                k + 1,
                mat_mul(datum.reflection_matrix(img), linear),
                sign * (eps if transported_down else -eps),
                size + 1,
                tuple(t + level * r for t, r in zip(tau, pos_root)),
                ht + add,
            )

    dfs(0, ident, 1, 0, tuple(0 for _ in range(datum.rank)), 0)
    return FormalCharacter(
        datum, vsub(vec(lam), datum.rho), cutoff,
        {m: c for m, c in total.items() if c},
    )


# -- ordinary characters ------------------------------------------------------


def ch_verma(datum: RootDatum, lam, cutoff: int) -> FormalCharacter:
    """Coefficients are values of the partition count."""
    lam = vec(lam)
    coeffs = {
        mu: kostant_partition(datum, mu)
        for mu in _cone_points(datum, cutoff)
    }
    return FormalCharacter(
        datum, vsub(lam, datum.rho), cutoff, {m: c for m, c in coeffs.items() if c}
    )


def ch_irreducible(
    datum: RootDatum, lam, x, cutoff: int, group: ReflectionGroup | None = None
) -> FormalCharacter:
    """Alternating sum of Verma characters against the inverse table."""
    lam = vec(lam)
    group = group or integral_weyl_group(datum, lam)
    if not isinstance(x, WeylElement):
        x = group.from_word(tuple(x))
    if x.matrix not in group._table:
        raise IntegralityMismatch("x is outside the integral Weyl group")
    table = KLTable(group)
    anchor = vsub(x.act(lam), datum.rho)
    total = FormalCharacter(datum, anchor, cutoff, {})
    for y in group.elements():
        if not group.bruhat_leq(y, x):
            continue
        mult = table.classical(y, x).eval_at_one()
        if mult == 0:
            continue
        sign = -1 if (x.length - y.length) % 2 else 1
        shift = vsub(x.act(lam), y.act(lam))
        ht = int(datum.height(shift))
        piece = ch_verma(datum, y.act(lam), cutoff - ht).reanchor(anchor)
        total = total + piece.scale(sign * mult).truncate(cutoff)
        total.cutoff = cutoff
    total.cutoff = cutoff
    return total


# -- signature characters of irreducibles -------------------------------------


def ch_s_verma(datum: RootDatum, lam, cutoff: int) -> FormalCharacter:
    """Signature character of a Verma module off the walls."""
    a = alcove_of(datum, lam)
    return R_alcove(datum, a, lam, cutoff)


def ch_s_irreducible(ctx: SignedKLContext, x, cutoff: int) -> FormalCharacter:
    """Signature character of the irreducible quotient at x * lambda.

    Uses the telescoped recursion: the cell table on the witness side of
    x*lambda minus the signed-polynomial combination of lower terms.
    """
    g = ctx.group
    if not isinstance(x, WeylElement):
        x = g.from_word(tuple(x))
    memo = {}

    def compute(y: WeylElement, budget: int) -> FormalCharacter:
        key = (y.matrix, budget)
        if key in memo:
            return memo[key]
        ylam = y.act(ctx.lam)
        anchor = vsub(ylam, ctx.datum.rho)
        a = alcove_of_limit(ctx.datum, ylam, ctx.delta)
        table = _r_table(ctx.datum, a, budget)
        total = table.with_anchor(anchor)
        for z in g.elements():
            if z == y or not g.bruhat_leq(z, y):
                continue
            coeff = _signed(ctx, y, z).eval_at_one()
            if coeff == 0:
                continue
            shift = vsub(ylam, z.act(ctx.lam))
            ht = int(ctx.datum.height(shift))
            piece = compute(z, budget - ht).reanchor(anchor)
            total = total + piece.scale(-coeff)
            total.cutoff = budget
        total.cutoff = budget
        memo[key] = total
        return total

    return compute(x, cutoff)


def ch_s_irreducible_chains(ctx: SignedKLContext, x, cutoff: int) -> FormalCharacter:
    """Chain-sum form of the same character; test oracle for the recursion."""
    g = ctx.group
    if not isinstance(x, WeylElement):
        x = g.from_word(tuple(x))
    anchor = vsub(x.act(ctx.lam), ctx.datum.rho)
    total = FormalCharacter(ctx.datum, anchor, cutoff, {})
    elements = [z for z in g.elements() if g.bruhat_leq(z, x)]

    # enumerate descending chains from x by depth-first search
    results: list[tuple[int, int, WeylElement]] = []

    def dfs(current: WeylElement, sign: int, prod: int) -> None:
        results.append((sign, prod, current))
        for z in elements:
            if z != current and g.bruhat_leq(z, current):
                p = _signed(ctx, current, z).eval_at_one()
                if p:
                    dfs(z, -sign, prod * p)

    dfs(x, 1, 1)
    for sign, prod, bottom in results:
        blam = bottom.act(ctx.lam)
        a = alcove_of_limit(ctx.datum, blam, ctx.delta)
        shift = vsub(x.act(ctx.lam), blam)
        ht = int(ctx.datum.height(shift))
        piece = _r_table(ctx.datum, a, cutoff - ht).with_anchor(
            vsub(blam, ctx.datum.rho)
        ).reanchor(anchor)
        total = total + piece.scale(sign * prod)
        total.cutoff = cutoff
    total.cutoff = cutoff
    return total
