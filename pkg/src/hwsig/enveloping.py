"""Chevalley basis, PBW straightening, and exact Gram matrices.

Structure constants use the extraspecial-pair sign convention and are
computed by induction on root height from the standard four relations
(antisymmetry, negation, the triple rotation, and the four-root sum).
Products in U(g) are straightened by one memoized primitive: left
multiplication of a normal-ordered word by a single generator.

Gram matrices of the contravariant form are assembled once per weight as
matrices of integer polynomials in the Cartan symbols h_i = <., alpha_i^>
evaluated at lambda - rho; specializing at a rational weight, or at
lambda + delta*t, is then a cheap substitution.  The invariant Hermitian
kind differs by the grading sign of the weight space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from .errors import (
    CutoffExceeded,
    NotOnHyperplane,
    NullSpaceDimensionUnexpected,
)
from .polys import RatPoly
from .roots import (
    Coords,
    RootDatum,
    Vector,
    kostant_partition,
    vec,
    vscale,
    vsub,
)

GEN_Y, GEN_H, GEN_X = 0, 1, 2

Gen = tuple[int, int]
Mono = tuple[Gen, ...]
HPoly = dict[Coords, int]  # exponent vector over H_1..H_n -> int

CONTRAVARIANT = "contravariant"
HERMITIAN = "hermitian"

DEFAULT_MAX_HEIGHT = 24

_ALGEBRAS: dict[str, "ChevalleyAlgebra"] = {}


def algebra(datum: RootDatum) -> "ChevalleyAlgebra":
    """Shared straightening engine per Cartan type (marking independent)."""
    alg = _ALGEBRAS.get(datum.type_str)
    if alg is None:
        alg = ChevalleyAlgebra(datum)
        _ALGEBRAS[datum.type_str] = alg
    return alg


class ChevalleyAlgebra:
    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.nroots = len(datum.positive_roots)
        self._root_vecs = [vec(r) for r in datum.positive_roots]
        self._build_constants()
        self._mul_memo: dict[tuple[Gen, Mono], dict[Mono, int]] = {}

    # -- structure constants ------------------------------------------

    def _is_root(self, c: Coords) -> bool:
        return c in self.datum.root_set

    def _norm(self, c: Coords) -> Q:
        return self.datum.inner(vec(c), vec(c))

    def _string_p(self, a: Coords, b: Coords) -> int:
        """Largest p with b - p*a a root."""
        p = 0
        cur = b
        while True:
            cur = tuple(x - y for x, y in zip(cur, a))
            if self._is_root(cur):
                p += 1
            else:
                return p

    def _build_constants(self) -> None:
        datum = self.datum
        pos = datum.positive_roots
        order = {r: i for i, r in enumerate(pos)}
        n_pos: dict[tuple[Coords, Coords], int] = {}

        def n_any(a: Coords, b: Coords) -> int:
            """N_{a,b} for arbitrary roots with a + b a root.

            Mixed-sign pairs rotate around the zero-sum triple
            {a, b, c = -(a+b)} using
            N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b)
            until both members have the same sign.
            """
            apos = sum(a) > 0
            bpos = sum(b) > 0
            if apos and bpos:
                return n_pos[(a, b)]
            if not apos and not bpos:
                na = tuple(-x for x in a)
                nb = tuple(-x for x in b)
                return -n_pos[(na, nb)]
            c = tuple(-(x + y) for x, y in zip(a, b))
            # N_{a,b} / (c,c) = N_{b,c} / (a,a) = N_{c,a} / (b,b)
            if (sum(b) > 0) == (sum(c) > 0):
                val = Q(self._norm(c)) * n_any(b, c) / self._norm(a)
            else:
                val = Q(self._norm(c)) * n_any(c, a) / self._norm(b)
            assert val.denominator == 1
            return int(val)

        for gamma in pos:  # ascending height order
            pairs = []
            for a in pos:
                if order[a] >= order[gamma]:
                    break
                b = tuple(g - x for g, x in zip(gamma, a))
                if b in order and order[a] < order[b]:
                    pairs.append((a, b))
            if not pairs:
                continue
            pairs.sort(key=lambda ab: order[ab[0]])
            a0, b0 = pairs[0]  # extraspecial pair: minimal first member
            val0 = self._string_p(a0, b0) + 1
            n_pos[(a0, b0)] = val0
            n_pos[(b0, a0)] = -val0
            for a, b in pairs[1:]:
                # four-root relation on (a, b, (-a0), (-b0)), sum zero
                total = Q(0)
                d1 = tuple(x - y for x, y in zip(b, a0))
                if self._is_root(d1):
                    t = Q(n_any(b, tuple(-x for x in a0)))
                    t *= n_any(a, tuple(-x for x in b0))
                    total += t / self._norm(d1)
                d2 = tuple(x - y for x, y in zip(a, a0))
                if self._is_root(d2):
                    t = Q(n_any(tuple(-x for x in a0), a))
                    t *= n_any(b, tuple(-x for x in b0))
                    total += t / self._norm(d2)
                val = Q(self._norm(gamma)) * total / n_pos[(a0, b0)]
                assert val.denominator == 1 and val != 0
                expected = self._string_p(a, b) + 1
                assert abs(int(val)) == expected, (a, b, val, expected)
                n_pos[(a, b)] = int(val)
                n_pos[(b, a)] = -int(val)

        self._n_pos = n_pos
        self._n_any = n_any

        # coroot of each positive root in the simple-coroot basis
        self.coroots = datum.coroot_coords

    def structure_constant(self, a: Coords, b: Coords) -> int:
        """N_{a,b} for roots a, b with a + b a root."""
        return self._n_any(a, b)

    # -- generators and brackets ---------------------------------------

    def bracket_gens(self, g1: Gen, g2: Gen) -> dict[Gen, int]:
        """[g1, g2] as an integer combination of single generators."""
        c1, i1 = g1
        c2, i2 = g2
        pos = self.datum.positive_roots
        if c1 == GEN_H and c2 == GEN_H:
            return {}
        if c1 == GEN_H:
            sign = 1 if c2 == GEN_X else -1
            pairing = sum(
                pos[i2][j] * self.datum.cartan[j][i1] for j in range(self.datum.rank)
            )
            return {g2: sign * pairing} if pairing else {}
        if c2 == GEN_H:
            out = self.bracket_gens(g2, g1)
            return {g: -c for g, c in out.items()}
        r1 = pos[i1] if c1 == GEN_X else tuple(-c for c in pos[i1])
        r2 = pos[i2] if c2 == GEN_X else tuple(-c for c in pos[i2])
        s = tuple(x + y for x, y in zip(r1, r2))
        if all(c == 0 for c in s):
            # [X_a, Y_a] = H_a, the coroot
            ha = self.coroots[i1]
            sign = 1 if c1 == GEN_X else -1
            return {(GEN_H, j): sign * hc for j, hc in enumerate(ha) if hc}
        if s not in self.datum.root_set:
            return {}
        n = self._n_any(r1, r2)
        if sum(s) > 0:
            return {(GEN_X, self.datum.root_index[s]): n}
        neg = tuple(-c for c in s)
        return {(GEN_Y, self.datum.root_index[neg]): n}

    # -- straightening --------------------------------------------------

    def mul_gen_left(self, g: Gen, mono: Mono) -> dict[Mono, int]:
        """g * mono as a combination of normal-ordered words."""
        if not mono or g <= mono[0]:
            return {(g,) + mono: 1}
        key = (g, mono)
        cached = self._mul_memo.get(key)
        if cached is not None:
            return cached
        b, rest = mono[0], mono[1:]
        out: dict[Mono, int] = {}
        for m, c in self.mul_gen_left(g, rest).items():
            for m2, c2 in self.mul_gen_left(b, m).items():
                out[m2] = out.get(m2, 0) + c * c2
        for h, c in self.bracket_gens(g, b).items():
            for m2, c2 in self.mul_gen_left(h, rest).items():
                out[m2] = out.get(m2, 0) + c * c2
        out = {m: c for m, c in out.items() if c != 0}
        self._mul_memo[key] = out
        return out

    def straighten_word(self, word: Mono) -> dict[Mono, int]:
        acc: dict[Mono, int] = {(): 1}
        for g in reversed(word):
            nxt: dict[Mono, int] = {}
            for mono, c in acc.items():
                for m2, c2 in self.mul_gen_left(g, mono).items():
                    nxt[m2] = nxt.get(m2, 0) + c * c2
            acc = {m: c for m, c in nxt.items() if c != 0}
        return acc

    # -- Gram matrices as H-polynomials ---------------------------------

    def pbw_monomials(self, mu: Coords) -> list[Coords]:
        """Exponent vectors over positive roots with weight mu, sorted."""
        pos = self.datum.positive_roots
        out: list[Coords] = []

        def rec(idx: int, remaining: Coords, exps: list[int]) -> None:
            if all(c == 0 for c in remaining):
                out.append(tuple(exps + [0] * (self.nroots - len(exps))))
                return
            if idx >= self.nroots:
                return
            root = pos[idx]
            k = 0
            cur = remaining
            while all(c >= 0 for c in cur):
                rec(idx + 1, cur, exps + [k])
                cur = tuple(x - y for x, y in zip(cur, root))
                k += 1

        rec(0, mu, [])
        return sorted(out)

    def _mono_of_exps(self, exps: Coords, kind: int) -> Mono:
        gens: list[Gen] = []
        for idx, e in enumerate(exps):
            gens.extend([(kind, idx)] * e)
        return tuple(gens)

    def gram_hpoly(self, mu: Coords) -> tuple[list[Coords], list[list[HPoly]]]:
        """Contravariant Gram at weight mu, entries in Z[H_1..H_n].

        Entry (i, j) is p(sigma(y_j) y_i) with the symbols H_k read as
        <lambda - rho - (weight below the insertion point), alpha_k^>,
        which is what direct straightening produces.
        """
        memo = self.datum.cache("gram_hpoly")
        if mu in memo:
            return memo[mu]
        monos = self.pbw_monomials(mu)
        size = len(monos)
        mat: list[list[HPoly]] = [[{} for _ in range(size)] for _ in range(size)]
        for j in range(size):
            xs = self._mono_of_exps(monos[j], GEN_X)  # sigma reverses; see below
            for i in range(j, size):
                entry = self._pair_words(xs, self._mono_of_exps(monos[i], GEN_Y), mu)
                mat[i][j] = entry
                mat[j][i] = entry
        memo[mu] = (monos, mat)
        return monos, mat

    def _pair_words(self, xword: Mono, ymono: Mono, mu: Coords) -> HPoly:
        """Project sigma(y_j) y_i onto U(h) by folding X generators in.

        sigma of an ordered Y-word is the reversed X-word; folding applies
        the rightmost X first, i.e. the X generators in the original Y
        order.  Terms with a surviving X part can never return to U(h)
        and are pruned, as are terms whose Y weight cannot be cancelled
        by the X generators still to come.
        """
        rank = self.datum.rank
        pos = self.datum.positive_roots
        acc: dict[Mono, int] = {ymono: 1}
        remaining = list(mu)
        for g in xword:  # original order = reversed sigma word
            root = pos[g[1]]
            for k in range(rank):
                remaining[k] -= root[k]
            nxt: dict[Mono, int] = {}
            for mono, c in acc.items():
                for m2, c2 in self.mul_gen_left(g, mono).items():
                    if any(gg[0] == GEN_X for gg in m2):
                        continue
                    yw = [0] * rank
                    for gg in m2:
                        if gg[0] == GEN_Y:
                            r = pos[gg[1]]
                            for k in range(rank):
                                yw[k] += r[k]
                    if yw != remaining:
                        continue
                    nxt[m2] = nxt.get(m2, 0) + c * c2
            acc = {m: c for m, c in nxt.items() if c != 0}
        out: HPoly = {}
        for mono, c in acc.items():
            exps = [0] * rank
            ok = True
            for gg in mono:
                if gg[0] != GEN_H:
                    ok = False
                    break
                exps[gg[1]] += 1
            if ok:
                key = tuple(exps)
                out[key] = out.get(key, 0) + c
        return {k: v for k, v in out.items() if v != 0}


# -- public wrappers ----------------------------------------------------


@dataclass
class GramMatrix:
    """Symmetric form matrix on one weight space of a Verma module."""

    datum: RootDatum
    kind: str
    lam: Vector
    mu: Coords
    monomials: list[Coords]
    entries: list[list]  # Fractions, or RatPoly when deformed
    deformed: bool = False


def eval_hpoly(hp: HPoly, values: list[Q]) -> Q:
    total = Q(0)
    for exps, c in hp.items():
        term = Q(c)
        for v, e in zip(values, exps):
            for _ in range(e):
                term *= v
        total += term
    return total


def eval_hpoly_poly(hp: HPoly, values: list[RatPoly]) -> RatPoly:
    total = RatPoly()
    for exps, c in hp.items():
        term = RatPoly.const(c)
        for v, e in zip(values, exps):
            for _ in range(e):
                term = term * v
        total = total + term
    return total


def _h_values(datum: RootDatum, lam: Vector) -> list[Q]:
    lr = vsub(vec(lam), datum.rho)
    return [datum.pairing_simple(lr, i) for i in range(datum.rank)]


def gram(
    datum: RootDatum,
    kind: str,
    lam: Vector,
    mu: Coords,
    delta: Vector | None = None,
    max_height: int = DEFAULT_MAX_HEIGHT,
) -> GramMatrix:
    """Gram matrix of the requested form kind at weight lambda - rho - mu."""
    mu = tuple(int(c) for c in mu)
    if sum(mu) > max_height:
        raise CutoffExceeded(f"height {sum(mu)} exceeds cutoff {max_height}")
    alg = algebra(datum)
    monos, hmat = alg.gram_hpoly(mu)
    sign = 1
    if kind == HERMITIAN:
        sign = -1 if datum.epsilon(mu) else 1
    elif kind != CONTRAVARIANT:
        raise ValueError(f"unknown form kind {kind!r}")
    if delta is None:
        vals = _h_values(datum, lam)
        entries = [[sign * eval_hpoly(h, vals) for h in row] for row in hmat]
        return GramMatrix(datum, kind, vec(lam), mu, list(monos), entries)
    base = _h_values(datum, lam)
    slope = [datum.pairing_simple(vec(delta), i) for i in range(datum.rank)]
    pvals = [RatPoly.linear(b, s) for b, s in zip(base, slope)]
    entries = [[sign * eval_hpoly_poly(h, pvals) for h in row] for row in hmat]
    return GramMatrix(datum, kind, vec(lam), mu, list(monos), entries, True)


def shapovalov_determinant(datum: RootDatum, lam: Vector, mu: Coords) -> Q:
    """Exact determinant of the contravariant Gram matrix at weight mu."""
    g = gram(datum, CONTRAVARIANT, lam, mu)
    return _det_fraction([row[:] for row in g.entries])


def det_product_formula(datum: RootDatum, lam: Vector, mu: Coords) -> Q:
    """Product over roots and levels of ((lambda, alpha^) - n)^P(mu - n alpha)."""
    total = Q(1)
    for alpha in datum.positive_roots:
        n = 1
        while True:
            shifted = tuple(m - n * a for m, a in zip(mu, alpha))
            if sum(shifted) < 0:
                break
            e = kostant_partition(datum, shifted)
            if e:
                total *= (datum.pairing(vec(lam), alpha) - n) ** e
            n += 1
    return total


def _det_fraction(m: list[list[Q]]) -> Q:
    n = len(m)
    det = Q(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Q(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def singular_vector(datum: RootDatum, lam0: Vector, gamma, n: int):
    """Generator of the unique singular line at weight lambda0 - rho - n*gamma.

    Returns (exponent vectors, integer coefficients) over the PBW basis of
    the weight space, normalized to coprime integers with positive leading
    coefficient in the fixed monomial order.
    """
    gamma = tuple(int(c) for c in gamma)
    if datum.pairing(vec(lam0), gamma) != n or n < 1:
        raise NotOnHyperplane(f"(lambda0, gamma^) != {n}")
    mu = tuple(n * c for c in gamma)
    g = gram(datum, CONTRAVARIANT, lam0, mu)
    null = _nullspace([row[:] for row in g.entries])
    if len(null) != 1:
        raise NullSpaceDimensionUnexpected(
            f"kernel dimension {len(null)} at weight {mu}"
        )
    coeffs = null[0]
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g0 = 0
    for c in ints:
        g0 = _gcd(g0, abs(c))
    ints = [c // g0 for c in ints]
    lead = next(c for c in ints if c != 0)
    if lead < 0:
        ints = [-c for c in ints]
    return g.monomials, ints


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _nullspace(m: list[list[Q]]) -> list[list[Q]]:
    if not m:
        return []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if m[rr][c] != 0:
                piv = rr
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for rr in range(rows):
            if rr != r and m[rr][c] != 0:
                f = m[rr][c]
                m[rr] = [x - f * y for x, y in zip(m[rr], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Q(0)] * cols
        v[fc] = Q(1)
        for pr, pc in enumerate(pivots):
            v[pc] = -m[pr][fc]
        basis.append(v)
    return basis


# -- spec-level U(g) elements ----------------------------------------------


class UElement:
    """Finite combination of words in the generators Y_a, H_i, X_a.

    Words need not be normal ordered; ``straighten`` rewrites into the
    PBW normal order (Y, then H, then X, roots ascending).
    """

    def __init__(self, datum: RootDatum, words: dict[Mono, object] | None = None):
        self.datum = datum
        self.words: dict[Mono, object] = {
            w: c for w, c in (words or {}).items() if c != 0
        }

    @staticmethod
    def generator(datum: RootDatum, kind: int, index: int) -> UElement:
        return UElement(datum, {((kind, index),): 1})

    @staticmethod
    def x(datum: RootDatum, root) -> UElement:
        return UElement.generator(datum, GEN_X, datum.root_index[tuple(root)])

    @staticmethod
    def y(datum: RootDatum, root) -> UElement:
        return UElement.generator(datum, GEN_Y, datum.root_index[tuple(root)])

    @staticmethod
    def h(datum: RootDatum, i: int) -> UElement:
        return UElement.generator(datum, GEN_H, i)

    def __mul__(self, other: UElement) -> UElement:
        out: dict[Mono, object] = {}
        for w1, c1 in self.words.items():
            for w2, c2 in other.words.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return UElement(self.datum, out)

    def __add__(self, other: UElement) -> UElement:
        out = dict(self.words)
        for w, c in other.words.items():
            out[w] = out.get(w, 0) + c
        return UElement(self.datum, out)

    def __sub__(self, other: UElement) -> UElement:
        return self + other.scale(-1)

    def scale(self, c) -> UElement:
        return UElement(self.datum, {w: c * v for w, v in self.words.items()})

    def straighten(self) -> UElement:
        alg = algebra(self.datum)
        out: dict[Mono, object] = {}
        for word, c in self.words.items():
            for m, c2 in alg.straighten_word(word).items():
                out[m] = out.get(m, 0) + c * c2
        return UElement(self.datum, out)

    def _antiauto(self, x_sign: bool) -> UElement:
        out: dict[Mono, object] = {}
        for word, c in self.words.items():
            sign = 1
            new = []
            for cls, idx in reversed(word):
                if cls == GEN_H:
                    new.append((cls, idx))
                    continue
                if x_sign and self.datum.epsilon(
                    self.datum.positive_roots[idx]
                ):
                    sign = -sign
                new.append((GEN_Y if cls == GEN_X else GEN_X, idx))
            w = tuple(new)
            out[w] = out.get(w, 0) + sign * c
        return UElement(self.datum, out)

    def star(self) -> UElement:
        """Anti-involution with X_a -> (-1)^{eps(a)} Y_a; fixes H."""
        return self._antiauto(x_sign=True)

    def sigma(self) -> UElement:
        """Transpose anti-automorphism X_a -> Y_a; fixes H."""
        return self._antiauto(x_sign=False)

    def project_h_and_eval(self, lam: Vector):
        """Drop words meeting n or n^op, evaluate the rest at lambda - rho."""
        norm = self.straighten()
        vals = _h_values(self.datum, lam)
        total = 0
        for word, c in norm.words.items():
            if any(cls != GEN_H for cls, _ in word):
                continue
            term = c
            for _, idx in word:
                term = term * vals[idx]
            total = total + term
        return total

    def support_weight(self) -> Vector:
        """Weight of the element when homogeneous (Y negative, X positive)."""
        weights = set()
        for word in self.words:
            w = [Q(0)] * self.datum.rank
            for cls, idx in word:
                if cls == GEN_H:
                    continue
                root = self.datum.positive_roots[idx]
                s = 1 if cls == GEN_X else -1
                for k in range(self.datum.rank):
                    w[k] += s * root[k]
            weights.add(tuple(w))
        if len(weights) != 1:
            raise ValueError("element is not weight homogeneous")
        return weights.pop()

    def __eq__(self, other) -> bool:
        if not isinstance(other, UElement):
            return NotImplemented
        return self.straighten().words == other.straighten().words

    def __repr__(self) -> str:
        names = {GEN_Y: "Y", GEN_H: "H", GEN_X: "X"}
        parts = []
        for word, c in sorted(self.words.items()):
            txt = "*".join(f"{names[cls]}{idx}" for cls, idx in word) or "1"
            parts.append(f"{c}*{txt}")
        return " + ".join(parts) if parts else "0"


def singular_vector_element(datum: RootDatum, lam0: Vector, gamma, n: int) -> UElement:
    """The singular vector as a normal-ordered element of U(n^op)."""
    monos, ints = singular_vector(datum, lam0, gamma, n)
    alg = algebra(datum)
    words = {
        alg._mono_of_exps(m, GEN_Y): c for m, c in zip(monos, ints) if c != 0
    }
    return UElement(datum, words)
