"""Classical Kazhdan-Lusztig polynomials and an independent Hecke oracle.

The table is computed in the standard Bruhat-increasing convention; the
published indexing P_{w0 x, w0 y} (vanishing for x > y) is exposed by an
involution at the API boundary.  The oracle constructs the canonical
basis by triangular correction of products of generators in the Hecke
algebra and never touches the recursion.
"""

from __future__ import annotations

from .errors import GroupTooLarge
from .polys import IntPoly
from .roots import ReflectionGroup, WeylElement


class KLTable:
    """Memoized Kazhdan-Lusztig polynomials over one reflection group."""

    def __init__(self, group: ReflectionGroup, descent_choice: str = "first"):
        self.group = group
        self.longest = group.longest()
        self._memo: dict[tuple, IntPoly] = {}
        if descent_choice not in ("first", "last"):
            raise ValueError("descent_choice must be 'first' or 'last'")
        self._choice = descent_choice

    # -- classical convention ------------------------------------------

    def classical(self, u: WeylElement, v: WeylElement) -> IntPoly:
        """P_{u,v} in the Bruhat-increasing convention (0 unless u <= v)."""
        g = self.group
        if u == v:
            return IntPoly.one()
        if not g.bruhat_leq(u, v):
            return IntPoly.zero()
        key = (u.matrix, v.matrix)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        descents = g.right_descents(v)
        s = descents[0] if self._choice == "first" else descents[-1]
        vs = g.right(v, s)
        us = g.right(u, s)
        if us.length < u.length:
            u = us
            us = g.right(u, s)
        # now u s > u and v s < v:
        # P_{u,v} = q P_{us,vs} + P_{u,vs}
        #           - sum_{u <= w < v, ws < w} mu(w, vs) q^{(l(v)-l(w))/2} P_{u,w}
        res = self.classical(us, vs).shift(1) + self.classical(u, vs)
        for w in g.elements():
            if w.length >= v.length or g.right(w, s).length > w.length:
                continue
            m = self.mu_classical(w, vs)
            if m == 0:
                continue
            gap = v.length - w.length
            assert gap % 2 == 0
            term = self.classical(u, w) * m
            res = res - term.shift(gap // 2)
        self._memo[key] = res
        return res

    def mu_classical(self, w: WeylElement, v: WeylElement) -> int:
        gap = v.length - w.length - 1
        if gap < 0 or gap % 2 != 0:
            return 0
        return self.classical(w, v).coeff(gap // 2)

    # -- published indexing ---------------------------------------------

    def _flip(self, x: WeylElement) -> WeylElement:
        return self.group.multiply(self.longest, x)

    def kl(self, x: WeylElement, y: WeylElement) -> IntPoly:
        """P_{w0 x, w0 y}; nonzero only for y <= x."""
        return self.classical(self._flip(x), self._flip(y))

    def mu(self, z: WeylElement, y: WeylElement) -> int:
        """Coefficient of q^{(l(z)-l(y)-1)/2} in kl(z, y)."""
        gap = z.length - y.length - 1
        if gap < 0 or gap % 2 != 0:
            return 0
        return self.kl(z, y).coeff(gap // 2)


def kl(table: KLTable, x: WeylElement, y: WeylElement) -> IntPoly:
    return table.kl(x, y)


def mu(table: KLTable, z: WeylElement, y: WeylElement) -> int:
    return table.mu(z, y)


# -- Hecke algebra oracle --------------------------------------------------
#
# Elements are written in the normalized basis Tt_w = v^{-l(w)} T_w with
# coefficients in Z[v, v^{-1}].  Right multiplication by C_s = Tt_s + v^{-1}:
#   Tt_w * C_s = Tt_{ws} + v^{-1} Tt_w          if ws > w
#   Tt_w * C_s = Tt_{ws} + v Tt_w               if ws < w


def _times_cs(group: ReflectionGroup, elem: dict, s: int) -> dict:
    out: dict = {}

    def add(w, poly):
        if w.matrix in out:
            out[w.matrix] = (out[w.matrix][0], out[w.matrix][1] + poly)
        else:
            out[w.matrix] = (w, poly)

    for w, poly in elem.values():
        ws = group.right(w, s)
        add(ws, poly)
        if ws.length > w.length:
            add(w, poly * IntPoly.monomial(-1))
        else:
            add(w, poly * IntPoly.monomial(1))
    return {k: v for k, v in out.items() if not v[1].is_zero()}


def hecke_oracle(group: ReflectionGroup) -> dict[tuple, IntPoly]:
    """Full classical KL table {(u, v): P_{u,v}} via the canonical basis.

    For each v a bar-invariant product of generator basis elements is
    corrected from the top down: any coefficient with nonnegative powers
    of v is completed symmetrically and the corresponding canonical
    element subtracted.
    """
    if len(group) > 120:
        raise GroupTooLarge(f"|W| = {len(group)} exceeds the oracle bound 120")
    ident = group.identity
    canonical: dict[tuple, dict] = {
        ident.matrix: {ident.matrix: (ident, IntPoly.one())}
    }
    elements = sorted(group.elements(), key=lambda e: (e.length, e.word))
    by_len_desc = sorted(elements, key=lambda e: -e.length)
    for w in elements:
        if w.length == 0:
            continue
        s = w.word[-1]
        ws = group.right(w, s)
        elem = _times_cs(group, canonical[ws.matrix], s)
        for u in by_len_desc:
            if u.length >= w.length or u.matrix not in elem:
                continue
            poly = elem[u.matrix][1]
            bad = {e: c for e, c in poly.terms.items() if e >= 0}
            if not bad:
                continue
            corr_terms: dict[int, int] = {}
            for e, c in bad.items():
                corr_terms[e] = corr_terms.get(e, 0) + c
                if e > 0:
                    corr_terms[-e] = corr_terms.get(-e, 0) + c
            corr = IntPoly(corr_terms)
            for mat, (x, p) in canonical[u.matrix].items():
                cur = elem.get(mat)
                newp = (cur[1] if cur else IntPoly.zero()) - corr * p
                if newp.is_zero():
                    elem.pop(mat, None)
                else:
                    elem[mat] = (x, newp)
        canonical[w.matrix] = elem
    table: dict[tuple, IntPoly] = {}
    for v in elements:
        expansion = canonical[v.matrix]
        assert expansion[v.matrix][1] == IntPoly.one()
        for mat, (u, poly) in expansion.items():
            shifted = poly.shift(v.length - u.length)
            qpoly: dict[int, int] = {}
            for e, c in shifted.terms.items():
                assert e >= 0 and e % 2 == 0, "odd or negative power in P"
                qpoly[e // 2] = c
            table[(u.matrix, v.matrix)] = IntPoly(qpoly)
    return table
