"""Root systems, Weyl groups, Bruhat order, and the compactness grading.

Weights are tuples of exact rationals in the simple-root basis, so root
lattice membership and heights are integer checks and every pairing goes
through the Cartan matrix.  Weyl groups (full or integral) are enumerated
as exact integer matrices with canonical lex-least reduced words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import lru_cache

from .errors import (
    GroupTooLarge,
    InconsistentMarking,
    NotInRootLattice,
    UnknownType,
)

Vector = tuple[Q, ...]
Coords = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

COMPACT, NONCOMPACT = 0, 1

_SIMPLE_TYPES = "ABCDEFG"


def vec(coords) -> Vector:
    return tuple(Q(c) for c in coords)


def vadd(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vector) -> Vector:
    return tuple(-x for x in a)


def vscale(c, a: Vector) -> Vector:
    c = Q(c)
    return tuple(c * x for x in a)


def mat_apply(m, v: Vector) -> Vector:
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def mat_mul(a, b) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def parse_cartan_type(name: str) -> list[tuple[str, int]]:
    """Parse "C2" or "A1xA1" into a list of (letter, rank) factors."""
    factors = []
    for part in name.strip().split("x"):
        m = re.fullmatch(r"([A-Ga-g])(\d+)", part.strip())
        if not m:
            raise UnknownType(f"cannot parse Cartan type {name!r}")
        letter, rank = m.group(1).upper(), int(m.group(2))
        if rank < 1:
            raise UnknownType(f"rank must be positive in {part!r}")
        lo = {"A": 1, "B": 2, "C": 2, "D": 4, "E": 6, "F": 4, "G": 2}[letter]
        hi = {"A": 64, "B": 64, "C": 64, "D": 64, "E": 8, "F": 4, "G": 2}[letter]
        if not lo <= rank <= hi:
            raise UnknownType(f"unsupported rank for type {letter}: {rank}")
        factors.append((letter, rank))
    return factors


def _simple_cartan(letter: str, n: int) -> list[list[int]]:
    """Cartan matrix with entries a[i][j] = <alpha_i, alpha_j^>."""
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def chain(i, j):
        a[i][j] = -1
        a[j][i] = -1

    for i in range(n - 1):
        chain(i, i + 1)
    if letter == "B" and n >= 2:
        # alpha_n short: <alpha_{n-1}, alpha_n^> = -2
        a[n - 2][n - 1] = -2
    elif letter == "C" and n >= 2:
        # alpha_n long: <alpha_n, alpha_{n-1}^> = -2
        a[n - 1][n - 2] = -2
    elif letter == "D":
        a[n - 2][n - 1] = 0
        a[n - 1][n - 2] = 0
        chain(n - 3, n - 1)
    elif letter == "E":
        # chain 0-2-3-4-... with node 1 attached to node 3 (0-indexed)
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)]
        edges += [(i, i + 1) for i in range(4, n - 1)]
        for i, j in edges:
            a[i][j] = -1
            a[j][i] = -1
    elif letter == "F":
        # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        a[1][2] = -2
        a[2][1] = -1
    elif letter == "G":
        # alpha_1 long, alpha_2 short
        a[0][1] = -3
        a[1][0] = -1
    return a


def _block_diag(blocks: list[list[list[int]]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return out


@dataclass(frozen=True)
class WeylElement:
    """Group element: canonical lex-least reduced word plus exact matrix."""

    word: tuple[int, ...]
    matrix: Matrix
    length: int

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def act(self, mu: Vector) -> Vector:
        return mat_apply(self.matrix, mu)

    def __repr__(self) -> str:
        if not self.word:
            return "e"
        return "*".join(f"s{i + 1}" for i in self.word)


class RootDatum:
    """Ambient combinatorial data of a semisimple algebra with marking."""

    def __init__(self, type_str: str, marking: tuple[int, ...]):
        factors = parse_cartan_type(type_str)
        self.type_str = "x".join(f"{l}{n}" for l, n in factors)
        cartan = _block_diag([_simple_cartan(l, n) for l, n in factors])
        self.rank = len(cartan)
        if len(marking) != self.rank:
            raise InconsistentMarking(
                f"marking has {len(marking)} entries for rank {self.rank}"
            )
        if any(m not in (COMPACT, NONCOMPACT) for m in marking):
            raise InconsistentMarking("marking entries must be 0 or 1")
        self.marking = tuple(marking)
        self.cartan: Matrix = tuple(tuple(row) for row in cartan)
        self._build_roots()
        self._build_symmetrizer()
        self._build_rho()
        self._build_coroots()
        self._check_marking_closure()
        self._cache: dict = {}

    # -- construction -------------------------------------------------

    def _build_roots(self) -> None:
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        roots: set[Coords] = set(simple)
        frontier = list(simple)
        while frontier:
            new: list[Coords] = []
            for beta in frontier:
                for i in range(n):
                    # q > 0 iff beta + alpha_i is a root, q = p - <beta, alpha_i^>
                    p = 0
                    cur = list(beta)
                    while True:
                        cur[i] -= 1
                        t = tuple(cur)
                        if all(c == 0 for c in t):
                            break  # string breaks at zero (beta = alpha_i)
                        if t in roots:
                            p += 1
                        else:
                            break
                    pairing = sum(beta[j] * self.cartan[j][i] for j in range(n))
                    if p - pairing > 0:
                        cand = tuple(
                            beta[j] + (1 if j == i else 0) for j in range(n)
                        )
                        if cand not in roots:
                            roots.add(cand)
                            new.append(cand)
            frontier = new
        order = sorted(roots, key=lambda r: (sum(r), r))
        self.positive_roots: tuple[Coords, ...] = tuple(order)
        self.root_index = {r: i for i, r in enumerate(order)}
        self.root_set = set(order) | {tuple(-c for c in r) for r in order}
        self.simple_roots: tuple[Coords, ...] = tuple(simple)

    def _build_symmetrizer(self) -> None:
        # d_i with d_i * a_ij = d_j * a_ji; normalized so min d per factor is 1
        n = self.rank
        d = [Q(0)] * n
        for start in range(n):
            if d[start] != 0:
                continue
            d[start] = Q(1)
            stack = [start]
            while stack:
                i = stack.pop()
                for j in range(n):
                    if i != j and self.cartan[i][j] != 0 and d[j] == 0:
                        d[j] = d[i] * self.cartan[j][i] / self.cartan[i][j]
                        stack.append(j)
        comps = self._components()
        for comp in comps:
            m = min(d[i] for i in comp)
            for i in comp:
                d[i] /= m
        self.d = tuple(d)

    def _components(self) -> list[list[int]]:
        n = self.rank
        seen = [False] * n
        comps = []
        for s in range(n):
            if seen[s]:
                continue
            comp, stack = [], [s]
            seen[s] = True
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(n):
                    if not seen[j] and self.cartan[i][j] != 0:
                        seen[j] = True
                        stack.append(j)
            comps.append(sorted(comp))
        return comps

    def _build_rho(self) -> None:
        # solve sum_i r_i a_ij = 1 for all j
        n = self.rank
        aug = [
            [Q(self.cartan[i][j]) for i in range(n)] + [Q(1)]
            for j in range(n)
        ]
        rho = _solve_exact(aug)
        self.rho: Vector = tuple(rho)
        half = vscale(Q(1, 2), tuple(
            sum(Q(r[j]) for r in self.positive_roots) for j in range(n)
        ))
        assert self.rho == half, "rho disagrees with half-sum of positive roots"

    def _build_coroots(self) -> None:
        # coroot of beta in the simple-coroot basis: c_j = beta_j d_j / d_beta
        coroots = []
        for beta in self.positive_roots:
            dbeta = self.root_norm_half(beta)
            cs = []
            for j in range(self.rank):
                c = Q(beta[j]) * self.d[j] / dbeta
                assert c.denominator == 1
                cs.append(int(c))
            coroots.append(tuple(cs))
        self.coroot_coords: tuple[Coords, ...] = tuple(coroots)

    def _check_marking_closure(self) -> None:
        # compact roots must be closed under addition of roots
        for i, a in enumerate(self.positive_roots):
            for b in self.positive_roots[i:]:
                s = tuple(x + y for x, y in zip(a, b))
                if s in self.root_set:
                    ea, eb, es = self.epsilon(a), self.epsilon(b), self.epsilon(s)
                    if (ea + eb) % 2 != es:
                        raise InconsistentMarking(
                            f"grading not additive on {a} + {b}"
                        )

    # -- exact linear data ---------------------------------------------

    def inner(self, mu: Vector, nu: Vector) -> Q:
        """W-invariant inner product; short roots have squared length 2."""
        total = Q(0)
        for i in range(self.rank):
            if mu[i] == 0:
                continue
            for j in range(self.rank):
                if nu[j] == 0:
                    continue
                total += Q(mu[i]) * Q(nu[j]) * self.d[j] * self.cartan[i][j]
        return total

    def root_norm_half(self, beta) -> Q:
        """(beta, beta) / 2."""
        return self.inner(vec(beta), vec(beta)) / 2

    def pairing_simple(self, mu: Vector, i: int) -> Q:
        """<mu, alpha_i^> through the Cartan matrix."""
        return sum(Q(mu[j]) * self.cartan[j][i] for j in range(self.rank))

    def pairing(self, mu: Vector, beta) -> Q:
        """<mu, beta^> for any root beta (given by coordinates)."""
        neg = all(c <= 0 for c in beta) and any(c != 0 for c in beta)
        key = tuple(-c for c in beta) if neg else tuple(int(c) for c in beta)
        idx = self.root_index.get(key)
        if idx is not None:
            val = sum(
                self.coroot_coords[idx][j] * self.pairing_simple(mu, j)
                for j in range(self.rank)
            )
            return -val if neg else val
        return 2 * self.inner(mu, vec(beta)) / self.inner(vec(beta), vec(beta))

    def height(self, mu: Vector) -> Q:
        return sum(Q(c) for c in mu)

    def in_root_lattice(self, mu: Vector) -> bool:
        return all(Q(c).denominator == 1 for c in mu)

    def epsilon(self, mu) -> int:
        """Z2 grading of the root lattice induced by the marking."""
        total = 0
        for c, m in zip(mu, self.marking):
            qc = Q(c)
            if qc.denominator != 1:
                raise NotInRootLattice(f"{mu} is not in the root lattice")
            total += int(qc) * m
        return total % 2

    def reflection_matrix(self, beta) -> Matrix:
        n = self.rank
        cols = []
        for j in range(n):
            ej = [Q(0)] * n
            ej[j] = Q(1)
            pair = self.pairing(tuple(ej), beta)
            col = tuple(
                int(Q(int(i == j)) - pair * Q(beta[i])) for i in range(n)
            )
            cols.append(col)
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    # -- groups ---------------------------------------------------------

    def weyl_group(self) -> ReflectionGroup:
        if "weyl" not in self._cache:
            self._cache["weyl"] = ReflectionGroup(self, self.simple_roots)
        return self._cache["weyl"]

    def cache(self, name: str) -> dict:
        return self._cache.setdefault(name, {})

    def __repr__(self) -> str:
        marks = "".join("nc"[m] if False else ("c" if m == 0 else "n") for m in self.marking)
        return f"RootDatum({self.type_str}, marking={marks})"


def _solve_exact(aug: list[list[Q]]) -> list[Q]:
    """Solve a square exact linear system given as augmented rows."""
    n = len(aug)
    m = [row[:] for row in aug]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [c * inv for c in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def build_root_datum(cartan_type: str, marking) -> RootDatum:
    """Construct the ambient datum; marking entries are 'compact'/'noncompact'."""
    conv = []
    for m in marking:
        if m in (COMPACT, NONCOMPACT):
            conv.append(int(m))
        elif isinstance(m, str) and m.lower().startswith("c"):
            conv.append(COMPACT)
        elif isinstance(m, str) and m.lower().startswith("n"):
            conv.append(NONCOMPACT)
        else:
            raise InconsistentMarking(f"bad marking entry {m!r}")
    return RootDatum(cartan_type, tuple(conv))


class ReflectionGroup:
    """Finite reflection group generated by a simple system of roots.

    The same class serves the full Weyl group and integral Weyl groups
    W_lambda: positivity, length and Bruhat order all refer to the
    subsystem.  Elements act on the ambient weight space.
    """

    MAX_SIZE = 4096

    def __init__(self, datum: RootDatum, simple_roots):
        self.datum = datum
        self.simple_roots: tuple[Coords, ...] = tuple(
            tuple(int(c) for c in r) for r in simple_roots
        )
        self.ngens = len(self.simple_roots)
        self.positive_roots = self._subsystem_positives()
        self.gen_matrices = tuple(
            datum.reflection_matrix(r) for r in self.simple_roots
        )
        self._enumerate()
        self._leq_memo: dict[tuple[Matrix, Matrix], bool] = {}

    def _subsystem_positives(self) -> tuple[Coords, ...]:
        # closure of the simple system inside the ambient positive roots
        gens = [self.datum.reflection_matrix(r) for r in self.simple_roots]
        seen: set[Coords] = set()
        frontier = [vec(r) for r in self.simple_roots]
        for f in frontier:
            seen.add(tuple(int(c) for c in f))
        while frontier:
            new = []
            for r in frontier:
                for g in gens:
                    img = mat_apply(g, r)
                    key = tuple(int(c) for c in img)
                    pos = key if sum(key) > 0 else tuple(-c for c in key)
                    if pos not in seen:
                        seen.add(pos)
                        new.append(vec(pos))
            frontier = new
        return tuple(sorted(seen, key=lambda r: (sum(r), r)))

    def _enumerate(self) -> None:
        n = self.datum.rank
        ident = WeylElement((), identity_matrix(n), 0)
        table: dict[Matrix, WeylElement] = {ident.matrix: ident}
        layer = [ident]
        while layer:
            nxt = []
            for w in layer:
                for i in range(self.ngens):
                    # length increases iff w(alpha_i) stays positive
                    img = mat_apply(w.matrix, vec(self.simple_roots[i]))
                    if sum(img) < 0:
                        continue
                    m = mat_mul(w.matrix, self.gen_matrices[i])
                    if m not in table:
                        el = WeylElement(w.word + (i,), m, w.length + 1)
                        table[m] = el
                        nxt.append(el)
                        if len(table) > self.MAX_SIZE:
                            raise GroupTooLarge(
                                f"group exceeds {self.MAX_SIZE} elements"
                            )
            nxt.sort(key=lambda e: e.word)
            layer = nxt
        self._table = table
        self._elements = sorted(table.values(), key=lambda e: (e.length, e.word))

    # -- basic group ops -------------------------------------------------

    @property
    def identity(self) -> WeylElement:
        return self._elements[0]

    def elements(self) -> tuple[WeylElement, ...]:
        return tuple(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def element_of_matrix(self, m: Matrix) -> WeylElement:
        return self._table[m]

    def from_word(self, word) -> WeylElement:
        m = identity_matrix(self.datum.rank)
        for i in word:
            if not 0 <= i < self.ngens:
                raise IndexError(f"generator index {i} out of range")
            m = mat_mul(m, self.gen_matrices[i])
        return self._table[m]

    def multiply(self, x: WeylElement, y: WeylElement) -> WeylElement:
        return self._table[mat_mul(x.matrix, y.matrix)]

    def inverse(self, x: WeylElement) -> WeylElement:
        n = self.datum.rank
        m = tuple(tuple(x.matrix[j][i] for j in range(n)) for i in range(n))
        return self._table[m]

    def right(self, x: WeylElement, i: int) -> WeylElement:
        return self._table[mat_mul(x.matrix, self.gen_matrices[i])]

    def left(self, x: WeylElement, i: int) -> WeylElement:
        return self._table[mat_mul(self.gen_matrices[i], x.matrix)]

    def longest(self) -> WeylElement:
        return max(self._elements, key=lambda e: e.length)

    def right_descents(self, x: WeylElement) -> list[int]:
        return [i for i in range(self.ngens) if self.right(x, i).length < x.length]

    def left_descents(self, x: WeylElement) -> list[int]:
        return [i for i in range(self.ngens) if self.left(x, i).length < x.length]

    def bruhat_leq(self, x: WeylElement, y: WeylElement) -> bool:
        """Bruhat order of the subsystem (subword property)."""
        if x.matrix == y.matrix:
            return True
        if x.length >= y.length:
            return False
        key = (x.matrix, y.matrix)
        cached = self._leq_memo.get(key)
        if cached is not None:
            return cached
        s = self.right_descents(y)[0]
        ys = self.right(y, s)
        xs = self.right(x, s)
        res = self.bruhat_leq(xs if xs.length < x.length else x, ys)
        self._leq_memo[key] = res
        return res


def bruhat_leq(group: ReflectionGroup, x: WeylElement, y: WeylElement) -> bool:
    return group.bruhat_leq(x, y)


def integral_weyl_group(datum: RootDatum, lam: Vector) -> ReflectionGroup:
    """Reflection subgroup of roots pairing integrally with lam."""
    integral = [
        beta
        for beta in datum.positive_roots
        if datum.pairing(lam, beta).denominator == 1
    ]
    integral_set = set(integral)
    simples = []
    for beta in integral:
        decomposable = False
        for a in integral:
            b = tuple(x - y for x, y in zip(beta, a))
            if any(c < 0 for c in b) or all(c == 0 for c in b):
                continue
            if b in integral_set:
                decomposable = True
                break
        if not decomposable:
            simples.append(beta)
    return ReflectionGroup(datum, tuple(simples))


def chamber_of(datum: RootDatum, point: Vector) -> WeylElement:
    """Full-group element w with point in w * C0 (C0 antidominant)."""
    group = datum.weyl_group()
    nu = vec(point)
    w = group.identity
    for _ in range(4 * len(group)):
        for i in range(datum.rank):
            if datum.pairing_simple(nu, i) > 0:
                nu = mat_apply(group.gen_matrices[i], nu)
                w = group.right(w, i)
                break
        else:
            return w
    raise RuntimeError("chamber descent did not terminate")


def make_antidominant(datum: RootDatum, mu: Vector) -> Vector:
    """The unique antidominant-chamber representative of a W-orbit."""
    nu = vec(mu)
    changed = True
    while changed:
        changed = False
        for i in range(datum.rank):
            p = datum.pairing_simple(nu, i)
            if p > 0:
                nu = vsub(nu, vscale(p, vec(datum.simple_roots[i])))
                changed = True
    return nu


def kostant_partition(datum: RootDatum, mu) -> int:
    """Number of ways to write mu as an N-combination of positive roots."""
    coords = tuple(Q(c) for c in mu)
    if any(c.denominator != 1 for c in coords):
        return 0
    icoords = tuple(int(c) for c in coords)
    if any(c < 0 for c in icoords):
        return 0
    return _kostant_count(datum, icoords, len(datum.positive_roots) - 1)


def _kostant_count(datum: RootDatum, mu: Coords, idx: int) -> int:
    if all(c == 0 for c in mu):
        return 1
    if idx < 0:
        return 0
    memo = datum.cache("kostant")
    key = (mu, idx)
    if key in memo:
        return memo[key]
    root = datum.positive_roots[idx]
    total = 0
    cur = mu
    while True:
        total += _kostant_count(datum, cur, idx - 1)
        cur = tuple(c - r for c, r in zip(cur, root))
        if any(c < 0 for c in cur):
            break
    memo[key] = total
    return total


def root_lattice_points(datum: RootDatum, max_height: int) -> list[Coords]:
    """All mu in the positive root lattice cone with height <= max_height."""
    out: list[Coords] = []

    def rec(prefix: list[int], remaining: int, pos: int) -> None:
        if pos == datum.rank:
            out.append(tuple(prefix))
            return
        for c in range(remaining + 1):
            prefix.append(c)
            rec(prefix, remaining - c, pos + 1)
            prefix.pop()

    rec([], max_height, 0)
    return sorted(out, key=lambda m: (sum(m), m))


def weight_multiplicity(datum: RootDatum, highest: Vector, mu: Vector) -> int:
    """Weight multiplicity in the finite-dimensional module, by recursion
    on the distance to the highest weight with exact rational arithmetic."""
    hw = vec(highest)
    for i in range(datum.rank):
        p = datum.pairing_simple(hw, i)
        if p.denominator != 1 or p < 0:
            raise ValueError("highest weight must be dominant integral")
    table = _freudenthal_table(datum, hw)
    return table.get(vec(mu), 0)


def _freudenthal_table(datum: RootDatum, hw: Vector) -> dict[Vector, int]:
    memo = datum.cache("freudenthal")
    if hw in memo:
        return memo[hw]
    lowest = make_antidominant(datum, hw)
    span = vsub(hw, lowest)
    max_h = int(datum.height(span))
    rho = datum.rho
    top = datum.inner(vadd(hw, rho), vadd(hw, rho))
    table: dict[Vector, int] = {hw: 1}
    for nu in root_lattice_points(datum, max_h):
        if all(c == 0 for c in nu):
            continue
        mu = vsub(hw, vec(nu))
        denom = top - datum.inner(vadd(mu, rho), vadd(mu, rho))
        if denom == 0:
            continue
        num = Q(0)
        for alpha in datum.positive_roots:
            av = vec(alpha)
            k = 1
            while True:
                up = vadd(mu, vscale(k, av))
                m = table.get(up, 0)
                if datum.height(vsub(hw, up)) < 0:
                    break
                if m:
                    num += 2 * m * datum.inner(up, av)
                k += 1
        val = num / denom
        assert val.denominator == 1
        if val:
            table[mu] = int(val)
    memo[hw] = table
    return table
