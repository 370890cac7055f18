"""
Term-rewriting engine for affine and Virasoro modes up to level two.
"""

from .algebra import ENGINE_MODES, EngineMode, ModeAlgebra
from .coset_check import CommutationReport, coset_commutation_check
from .states import LEVEL_BUDGET, HighestWeightModule, StateVector, apply_to_hw
from .sugawara import (
    coset_sugawara_mode,
    current,
    quadratic_current,
    sub_current,
    subalgebra_sugawara_mode,
    sugawara_mode,
)
from .symbols import (
    CENTRAL_C,
    COSET,
    CURRENT,
    KAPPA,
    LEVEL_K,
    PARENT,
    SUB,
    TAU,
    VIRASORO,
    GeneratorSymbol,
    J,
    L,
    OperatorPoly,
    Word,
    is_normal,
    word_level,
)

__all__ = [
    "CENTRAL_C",
    "COSET",
    "CURRENT",
    "CommutationReport",
    "ENGINE_MODES",
    "EngineMode",
    "GeneratorSymbol",
    "HighestWeightModule",
    "J",
    "KAPPA",
    "L",
    "LEVEL_BUDGET",
    "LEVEL_K",
    "ModeAlgebra",
    "OperatorPoly",
    "PARENT",
    "SUB",
    "StateVector",
    "TAU",
    "VIRASORO",
    "Word",
    "apply_to_hw",
    "coset_commutation_check",
    "coset_sugawara_mode",
    "current",
    "is_normal",
    "quadratic_current",
    "sub_current",
    "subalgebra_sugawara_mode",
    "sugawara_mode",
    "word_level",
]
