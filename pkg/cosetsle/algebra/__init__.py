"""
Lie algebra and coset data.
"""

from .coset import (
    CosetField,
    EmbeddingSpec,
    SimpleCurrentOrbit,
    canonical_representative,
    conformal_weight,
    coset_central_charge,
    enumerate_fields,
    make_field,
    model_embedding,
    realizable_representative,
    su2_u1_embedding,
    trivial_embedding,
    zero_mode_state,
)
from .irreps import Irrep, adjoint_irrep, casimir_matrix, irrep, su2_irrep, u1_irrep
from .loader import load_algebra_spec, parse_algebra_document
from .specs import AlgebraSpec, builtin_algebra, to_rational
from .validation import StructureReport, validate_structure
from .weights import (
    casimir_eigenvalue,
    integrable_weights,
    wznw_central_charge,
    wznw_conformal_weight,
)

__all__ = [
    "AlgebraSpec",
    "CosetField",
    "EmbeddingSpec",
    "Irrep",
    "SimpleCurrentOrbit",
    "StructureReport",
    "adjoint_irrep",
    "builtin_algebra",
    "canonical_representative",
    "casimir_eigenvalue",
    "casimir_matrix",
    "conformal_weight",
    "coset_central_charge",
    "enumerate_fields",
    "integrable_weights",
    "irrep",
    "load_algebra_spec",
    "make_field",
    "model_embedding",
    "parse_algebra_document",
    "realizable_representative",
    "su2_irrep",
    "su2_u1_embedding",
    "to_rational",
    "trivial_embedding",
    "u1_irrep",
    "validate_structure",
    "wznw_central_charge",
    "wznw_conformal_weight",
    "zero_mode_state",
]
