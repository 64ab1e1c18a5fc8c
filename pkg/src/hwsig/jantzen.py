"""Filtration layers from one-parameter deformations of the form.

The deformed Gram matrix on a weight space is congruence-diagonalized
over the local ring of rational polynomials in t.  All transformations
keep polynomial entries: a pivot t^n u(t) eliminates a row through
row_j <- u * row_j - (g_ij / t^n) * row_i, which is congruence by a
matrix invertible at t = 0, and an off-diagonal minimal order is lifted
onto the diagonal by adding a row and column (characteristic zero).
Orders n_i and unit signs u_i(0) then give layer dimensions and
signatures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q

from .enveloping import HERMITIAN, gram, singular_vector
from .errors import (
    ChamberCrossing,
    DegenerateDirection,
    MultipleHyperplanes,
    NotRegular,
    SingularOverFunctionField,
)
from .polys import RatPoly
from .roots import (
    Coords,
    RootDatum,
    Vector,
    chamber_of,
    root_lattice_points,
    vadd,
    vec,
    vscale,
    vsub,
)


def t_adic_diagonalize(entries: list[list[RatPoly]]) -> list[tuple[int, int]]:
    """Orders and unit signs of a congruence diagonalization over Q[t]_(t).

    Returns [(n_i, sign u_i(0))] sorted by n_i.
    """
    m = [row[:] for row in entries]
    size = len(m)
    out: list[tuple[int, int]] = []
    start = 0
    while start < size:
        best = None
        for i in range(start, size):
            for j in range(i, size):
                e = m[i][j]
                if e.is_zero():
                    continue
                o = e.order()
                if best is None or o < best[0]:
                    best = (o, i, j)
        if best is None:
            raise SingularOverFunctionField(
                "deformed form vanishes identically on a subspace"
            )
        o, i, j = best
        if i != j:
            diag_hit = any(
                not m[k][k].is_zero() and m[k][k].order() == o
                for k in range(start, size)
            )
            if diag_hit:
                i = j = next(
                    k
                    for k in range(start, size)
                    if not m[k][k].is_zero() and m[k][k].order() == o
                )
            else:
                # hyperbolic situation: fold row/col j into i
                for k in range(start, size):
                    m[i][k] = m[i][k] + m[j][k]
                for k in range(start, size):
                    m[k][i] = m[k][i] + m[k][j]
                j = i
        if i != start:
            m[i], m[start] = m[start], m[i]
            for row in m:
                row[i], row[start] = row[start], row[i]
        pivot = m[start][start]
        n0 = pivot.order()
        unit = RatPoly(pivot.coeffs[n0:])
        out.append((n0, 1 if unit.coeffs[0] > 0 else -1))
        for r in range(start + 1, size):
            e = m[start][r]
            if e.is_zero():
                continue
            assert e.order() >= n0
            factor = RatPoly(e.coeffs[n0:])  # e / t^n0
            for k in range(start, size):
                m[r][k] = unit * m[r][k] - factor * m[start][k]
            for k in range(start, size):
                m[k][r] = unit * m[k][r] - factor * m[k][start]
        start += 1
    return sorted(out)


@dataclass
class JantzenLayers:
    """Per-weight filtration data of a deformed form."""

    datum: RootDatum
    base: Vector
    direction: Vector
    cutoff: int
    # mu -> sorted list of (level, dim, positives, negatives)
    layers: dict[Coords, list[tuple[int, int, int, int]]] = field(default_factory=dict)

    def level_dimension(self, mu: Coords, level: int) -> int:
        for j, d, _, _ in self.layers.get(tuple(mu), []):
            if j == level:
                return d
        return 0

    def weight_signature(self, mu: Coords) -> dict[int, tuple[int, int]]:
        return {j: (p, q) for j, _, p, q in self.layers.get(tuple(mu), [])}


def jantzen_layers(
    datum: RootDatum,
    lam0: Vector,
    delta: Vector,
    height_cutoff: int,
    kind: str = HERMITIAN,
) -> JantzenLayers:
    """Layer dimensions and signatures per weight space, height-truncated."""
    lam0 = vec(lam0)
    delta = vec(delta)
    for beta in datum.positive_roots:
        pairing = datum.pairing(lam0, beta)
        if pairing.denominator == 1 and pairing >= 1:
            if datum.pairing(delta, beta) == 0:
                raise DegenerateDirection(
                    f"direction is parallel to the wall through lambda0 at {beta}"
                )
    result = JantzenLayers(datum, lam0, delta, height_cutoff)
    for mu in root_lattice_points(datum, height_cutoff):
        g = gram(datum, kind, lam0, mu, delta=delta)
        pairs = t_adic_diagonalize(g.entries)
        by_level: dict[int, list[int]] = {}
        for order, sign in pairs:
            by_level.setdefault(order, []).append(sign)
        layers = []
        for j in sorted(by_level):
            signs = by_level[j]
            p = sum(1 for s in signs if s > 0)
            q = len(signs) - p
            layers.append((j, len(signs), p, q))
        result.layers[mu] = layers
    return result


def side_signatures(
    levels: list[tuple[int, int, int, int]] | dict[int, tuple[int, int]],
) -> tuple[tuple[int, int], tuple[int, int]]:
    """Signatures on the two sides of the deformation.

    The t > 0 side adds all levels; on the t < 0 side odd levels swap
    their positive and negative counts.
    """
    if isinstance(levels, dict):
        items = [(j, p, q) for j, (p, q) in sorted(levels.items())]
    else:
        items = [(j, p, q) for j, _, p, q in levels]
    plus = (sum(p for _, p, _ in items), sum(q for _, _, q in items))
    minus_p = sum(p if j % 2 == 0 else q for j, p, q in items)
    minus_q = sum(q if j % 2 == 0 else p for j, p, q in items)
    return plus, (minus_p, minus_q)


@dataclass(frozen=True)
class CrossingSign:
    """Sign of the form on the singular line, on the positive side."""

    root: Coords
    level: int
    chamber_word: tuple[int, ...]
    value: int


def _fundamental_coweights(datum: RootDatum) -> list[Vector]:
    from .roots import _solve_exact

    n = datum.rank
    cols = []
    for i in range(n):
        rhs = [Q(1) if j == i else Q(0) for j in range(n)]
        aug = [
            [Q(datum.cartan[k][j]) for k in range(n)] + [rhs[j]]
            for j in range(n)
        ]
        cols.append(tuple(_solve_exact(aug)))
    return cols


def epsilon_hyperplane(
    datum: RootDatum,
    gamma,
    n: int,
    chamber_point: Vector,
) -> CrossingSign:
    """Hyperplane crossing sign for the given Weyl chamber.

    Constructs the singular vector f at a point of H_{gamma,n} interior
    to the chamber and returns the sign of <f v, f v> just on the side
    where (., gamma^) exceeds n, read off as the lowest-order coefficient
    of the exact norm polynomial along the gamma ray.
    """
    gamma = tuple(int(c) for c in gamma)
    if gamma not in datum.root_index:
        raise ValueError(f"{gamma} is not a positive root")
    if n < 1:
        raise ValueError("hyperplane level must be a positive integer")
    w = chamber_of(datum, vec(chamber_point))
    cache = datum.cache("epsilon")
    key = (gamma, n, w.matrix)
    if key in cache:
        return cache[key]
    if datum.pairing(vec(chamber_point), gamma) <= 0:
        raise ChamberCrossing(
            f"H_{{{gamma},{n}}} does not meet the chamber of {chamber_point}"
        )
    lam0 = _hyperplane_point(datum, gamma, n, w)
    monos, ints = singular_vector(datum, lam0, gamma, n)
    value = _norm_limit_sign(datum, lam0, gamma, n, monos, ints)
    sign = CrossingSign(gamma, n, w.word, value)
    cache[key] = sign
    return sign


def _hyperplane_point(datum: RootDatum, gamma: Coords, n: int, w) -> Vector:
    """Rational point of H_{gamma,n} inside w*C0, on no other hyperplane."""
    fcw = _fundamental_coweights(datum)
    attempts = []
    base_weights = [
        [1] * datum.rank,
        [1 + (i % 3) for i in range(datum.rank)],
        [3 - (i % 2) for i in range(datum.rank)],
        [2 + i for i in range(datum.rank)],
        [5] + [1] * (datum.rank - 1),
    ]
    for scale_num in (1, 2, 3, 5, 7):
        for ws in base_weights:
            attempts.append((scale_num, ws))
    for scale_num, ws in attempts:
        deep = vec([0] * datum.rank)
        for c, f in zip(ws, fcw):
            deep = vadd(deep, vscale(-Q(c, scale_num), f))
        p = w.act(deep)
        shift = (Q(n) - datum.pairing(p, gamma)) / 2
        lam0 = vadd(p, vscale(shift, vec(gamma)))
        ok = True
        for beta in datum.positive_roots:
            pairing = datum.pairing(lam0, beta)
            if beta == gamma:
                if pairing != n:
                    ok = False
                    break
                continue
            if pairing == 0:
                ok = False
                break
            if pairing.denominator == 1 and pairing >= 1:
                ok = False
                break
        if not ok:
            continue
        if chamber_of(datum, lam0).matrix != w.matrix:
            continue
        return lam0
    raise MultipleHyperplanes(
        f"could not isolate H_{{{gamma},{n}}} inside the chamber"
    )


def _norm_limit_sign(
    datum: RootDatum,
    lam0: Vector,
    gamma: Coords,
    n: int,
    monos: list[Coords],
    ints: list[int],
) -> int:
    mu = tuple(n * c for c in gamma)
    g = gram(datum, HERMITIAN, lam0, mu, delta=vec(gamma))
    total = RatPoly()
    for i, ci in enumerate(ints):
        if ci == 0:
            continue
        for j, cj in enumerate(ints):
            if cj == 0:
                continue
            total = total + (ci * cj) * g.entries[i][j]
    assert not total.is_zero(), "singular line has identically zero norm"
    assert total.coeffs[0] == 0, "norm does not vanish on the hyperplane"
    return 1 if total.lowest_coeff() > 0 else -1


def check_direction_regular(datum: RootDatum, delta: Vector) -> None:
    for beta in datum.positive_roots:
        if datum.pairing(vec(delta), beta) == 0:
            raise NotRegular(f"direction pairs to zero with {beta}")
