"""Bit-exact serialization helpers for the command line surface.

Rationals travel as "p/q" strings and all structured output is sorted,
so identical inputs produce byte-identical documents.
"""

from __future__ import annotations

from fractions import Fraction as Q

from .characters import FormalCharacter
from .polys import IntPoly
from .roots import RootDatum, Vector, vec


def rat_str(x) -> str:
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s) -> Q:
    if isinstance(s, int):
        return Q(s)
    return Q(str(s))


def weight_to_json(mu: Vector) -> list[str]:
    return [rat_str(c) for c in mu]


def weight_from_json(data) -> Vector:
    return vec([parse_rat(c) for c in data])


def character_to_json(ch: FormalCharacter) -> dict:
    return {
        "anchor": weight_to_json(ch.anchor),
        "cutoff": ch.cutoff,
        "terms": [
            {"mu": list(mu), "coeff": c} for mu, c in ch.items()
        ],
    }


def character_from_json(datum: RootDatum, data) -> FormalCharacter:
    coeffs = {tuple(t["mu"]): int(t["coeff"]) for t in data["terms"]}
    return FormalCharacter(
        datum,
        weight_from_json(data["anchor"]),
        int(data["cutoff"]),
        coeffs,
    )


def poly_levels(poly: IntPoly, gap: int) -> dict[str, int]:
    """Coefficients keyed by filtration level j = gap - 2*power."""
    out = {}
    for power, c in sorted(poly.terms.items()):
        out[str(gap - 2 * power)] = c
    return out


def pairs_to_json(entries) -> dict:
    """entries: iterable of (x_word, y_word, gap, IntPoly)."""
    pairs = []
    for x_word, y_word, gap, poly in entries:
        pairs.append(
            {
                "x": [i + 1 for i in x_word],
                "y": [i + 1 for i in y_word],
                "coeffs_by_level": poly_levels(poly, gap),
            }
        )
    pairs.sort(key=lambda p: (len(p["x"]), p["x"], len(p["y"]), p["y"]))
    return {"pairs": pairs}


def pairs_from_json(data) -> list[tuple[tuple, tuple, dict]]:
    out = []
    for p in data["pairs"]:
        out.append(
            (
                tuple(i - 1 for i in p["x"]),
                tuple(i - 1 for i in p["y"]),
                {int(j): c for j, c in p["coeffs_by_level"].items()},
            )
        )
    return out
