"""Exact-arithmetic construction and verification of Tate resolutions and
maximal Cohen-Macaulay approximations over graded quotients of polynomial
rings by regular sequences."""

from .arith import (
    Polynomial,
    PrimeField,
    VariableContext,
    parse_polynomial,
    poly_arith,
    total_degree,
)
from .freecomplex import (
    BaseRing,
    ChainComplex,
    GradedFreeModule,
    PolyMatrix,
    graded_piece,
    homology_dims,
    is_chain_map,
    make_complex,
    mapping_cone,
)
from .groebner import (
    GroebnerBasis,
    buchberger,
    ideal_member,
    is_regular_sequence,
    lift_through,
    normal_form,
    quotient_degree_basis,
)
from .koszul import (
    AlphaElement,
    ExteriorBasis,
    LiftMatrix,
    alpha_element,
    koszul_complex,
    koszul_homotopy,
    wedge_map,
)
from .homotopy import (
    HomotopySystem,
    sigma_c_chain_map,
    sigma_maps,
    solve_homotopy,
    tor_identity_check,
)
from .shamash import ShamashResolution, es_resolution, verify_resolution
from .tate import (
    McmPresentation,
    TateResolution,
    general_splice,
    mcm_generator_count,
    mcm_presentation,
    minimize,
    orthogonality_check,
    phi_prime,
    tate_splice,
)
from .harness import ProblemInstance, oracle_homology, run_build, run_verify

__all__ = [
    "AlphaElement",
    "BaseRing",
    "ChainComplex",
    "ExteriorBasis",
    "GradedFreeModule",
    "GroebnerBasis",
    "HomotopySystem",
    "LiftMatrix",
    "McmPresentation",
    "Polynomial",
    "PolyMatrix",
    "PrimeField",
    "ProblemInstance",
    "ShamashResolution",
    "TateResolution",
    "VariableContext",
    "alpha_element",
    "buchberger",
    "es_resolution",
    "general_splice",
    "graded_piece",
    "homology_dims",
    "ideal_member",
    "is_chain_map",
    "is_regular_sequence",
    "koszul_complex",
    "koszul_homotopy",
    "lift_through",
    "make_complex",
    "mapping_cone",
    "mcm_generator_count",
    "mcm_presentation",
    "minimize",
    "normal_form",
    "oracle_homology",
    "orthogonality_check",
    "parse_polynomial",
    "phi_prime",
    "poly_arith",
    "quotient_degree_basis",
    "run_build",
    "run_verify",
    "sigma_c_chain_map",
    "sigma_maps",
    "solve_homotopy",
    "tate_splice",
    "tor_identity_check",
    "total_degree",
    "verify_resolution",
    "wedge_map",
]
