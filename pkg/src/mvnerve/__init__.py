"""Exact computation of the comparison between the nerve of a cover and the space it covers.

The package builds barycentric subdivision towers of finite simplicial
complexes, covers given by unions of open vertex stars, the augmented
Mayer-Vietoris double complex of such a cover, and the zigzag lift that
turns a Cech cocycle into a simplicial cocycle. All arithmetic is exact over
Q, F_p or Z.
"""

from .complexes import (
    Cochain,
    SimplicialComplex,
    SimplicialMap,
    alternation,
    betti_numbers,
    class_equal,
    close_downward,
    coboundary,
    cohomology,
    pullback,
)
from .covers import StarCover, star_cover
from .errors import (
    DimensionMismatchError,
    InvalidComplexError,
    MVNerveError,
    NotACocycleError,
    PreconditionError,
    SafetyCapExceeded,
)
from .harness import (
    VerificationReport,
    run_choice_independence,
    run_main_theorem,
    run_naturality,
    run_prop_star,
    run_star_structure,
)
from .kernels import BACKEND
from .mv_complex import ChoiceRule, DoubleCochain, MayerVietoris, default_choice_rule
from .rings import GF, QQ, ZZ, RingSpec
from .subdivision import SubdivisionTower, comparison_pullback

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChoiceRule",
    "Cochain",
    "DimensionMismatchError",
    "DoubleCochain",
    "GF",
    "InvalidComplexError",
    "MVNerveError",
    "MayerVietoris",
    "NotACocycleError",
    "PreconditionError",
    "QQ",
    "RingSpec",
    "SafetyCapExceeded",
    "SimplicialComplex",
    "SimplicialMap",
    "StarCover",
    "SubdivisionTower",
    "VerificationReport",
    "ZZ",
    "alternation",
    "betti_numbers",
    "class_equal",
    "close_downward",
    "coboundary",
    "cohomology",
    "comparison_pullback",
    "default_choice_rule",
    "pullback",
    "run_choice_independence",
    "run_main_theorem",
    "run_naturality",
    "run_prop_star",
    "run_star_structure",
    "star_cover",
]
