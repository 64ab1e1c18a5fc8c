"""Exact univariate polynomial helpers.

``RatPoly`` holds dense polynomials over ``Fraction``; it is used for the
deformation parameter of Gram matrices and for one-sided limits along
rational rays.  ``IntPoly`` holds sparse integer (Laurent) polynomials and
backs the q-polynomials attached to Weyl group pairs.
"""

from __future__ import annotations

from fractions import Fraction as Q
from typing import Iterable


class RatPoly:
    """Polynomial in one variable with Fraction coefficients, ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Q | int] = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c) -> RatPoly:
        return RatPoly([Q(c)])

    @staticmethod
    def linear(c0, c1) -> RatPoly:
        """c0 + c1 * t."""
        return RatPoly([Q(c0), Q(c1)])

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def order(self) -> int:
        """Index of the lowest nonzero coefficient; raises on zero."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        raise ValueError("zero polynomial has no order")

    def lowest_coeff(self) -> Q:
        return self.coeffs[self.order()]

    def __call__(self, x) -> Q:
        acc = Q(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: RatPoly) -> RatPoly:
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return RatPoly(out)

    def __sub__(self, other: RatPoly) -> RatPoly:
        return self + (-other)

    def __neg__(self) -> RatPoly:
        return RatPoly([-c for c in self.coeffs])

    def __mul__(self, other) -> RatPoly:
        if isinstance(other, (int, Q)):
            return RatPoly([c * other for c in self.coeffs])
        out = [Q(0)] * (len(self.coeffs) + len(other.coeffs) - 1 or 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> RatPoly:
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return RatPoly([Q(0)] * k + list(self.coeffs))

    def __eq__(self, other) -> bool:
        return isinstance(other, RatPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero():
            return "RatPoly(0)"
        terms = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return "RatPoly(" + " + ".join(terms) + ")"


class IntPoly:
    """Sparse integer Laurent polynomial, keyed by exponent."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, int] | None = None):
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @staticmethod
    def zero() -> IntPoly:
        return IntPoly()

    @staticmethod
    def one() -> IntPoly:
        return IntPoly({0: 1})

    @staticmethod
    def monomial(e: int, c: int = 1) -> IntPoly:
        return IntPoly({e: c})

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, e: int) -> int:
        return self.terms.get(e, 0)

    def __add__(self, other: IntPoly) -> IntPoly:
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return IntPoly(out)

    def __sub__(self, other: IntPoly) -> IntPoly:
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) - c
        return IntPoly(out)

    def __neg__(self) -> IntPoly:
        return IntPoly({e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> IntPoly:
        if isinstance(other, int):
            return IntPoly({e: c * other for e, c in self.terms.items()})
        out: dict[int, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                k = e1 + e2
                out[k] = out.get(k, 0) + c1 * c2
        return IntPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> IntPoly:
        return IntPoly({e + k: c for e, c in self.terms.items()})

    def eval_at_one(self) -> int:
        return sum(self.terms.values())

    def min_exp(self) -> int:
        return min(self.terms) if self.terms else 0

    def max_exp(self) -> int:
        return max(self.terms) if self.terms else 0

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            if e == 0:
                parts.append(f"{c}")
            elif e == 1:
                parts.append(f"{c}*q" if c != 1 else "q")
            else:
                parts.append(f"{c}*q^{e}" if c != 1 else f"q^{e}")
        return " + ".join(parts)
