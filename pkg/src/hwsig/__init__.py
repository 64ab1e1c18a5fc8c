"""Exact signature characters of invariant Hermitian forms on highest
weight modules over complex semisimple Lie algebras with compact Cartan,
computed through signed variants of the Kazhdan-Lusztig polynomials and
verified against brute-force Gram diagonalization."""

from .characters import (
    AlcoveDescriptor,
    FormalCharacter,
    R_alcove,
    R_alcove_closed,
    alcove_of,
    ch_irreducible,
    ch_s_irreducible,
    ch_s_verma,
    ch_verma,
    crossing_path,
    in_wallach_region,
    wallach_character,
)
from .enveloping import (
    CONTRAVARIANT,
    HERMITIAN,
    GramMatrix,
    UElement,
    det_product_formula,
    gram,
    shapovalov_determinant,
    singular_vector,
    singular_vector_element,
)
from .jantzen import (
    CrossingSign,
    JantzenLayers,
    epsilon_hyperplane,
    jantzen_layers,
    side_signatures,
    t_adic_diagonalize,
)
from .kl import KLTable, hecke_oracle
from .oracle import (
    OracleContext,
    compare_all,
    direct_signature_character,
    signature_of_rational_symmetric,
)
from .polys import IntPoly, RatPoly
from .roots import (
    ReflectionGroup,
    RootDatum,
    WeylElement,
    build_root_datum,
    bruhat_leq,
    chamber_of,
    integral_weyl_group,
    kostant_partition,
    vec,
    weight_multiplicity,
)
from .signedkl import (
    SignedKLContext,
    SignedKLTable,
    level_coefficient,
    make_context,
    signed_kl,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
