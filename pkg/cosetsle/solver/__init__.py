"""
Level-two martingale conditions for coset primaries.
"""

from .audit import AuditEntry, AuditReport, audit_model
from .candidates import NullCandidate, build_null_candidate, complement_quadratic
from .classify import (
    ClassificationReport,
    OrbitClassification,
    RepresentativeResult,
    classify_model,
    virasoro_degenerate_weight,
    wznw_classify,
    wznw_constraints,
)
from .constraints import CONVENTIONS, TRANSCRIPTIONS, closed_form_constraints, derive_constraints
from .linsolve import solve_constraints
from .models import AdmissibilityResult, ConstraintRow, ConstraintSystem
from .tables import audit_table, classification_table, format_result, system_table, to_json

__all__ = [
    "AdmissibilityResult",
    "AuditEntry",
    "AuditReport",
    "CONVENTIONS",
    "ClassificationReport",
    "ConstraintRow",
    "ConstraintSystem",
    "NullCandidate",
    "OrbitClassification",
    "RepresentativeResult",
    "TRANSCRIPTIONS",
    "audit_model",
    "audit_table",
    "build_null_candidate",
    "classification_table",
    "classify_model",
    "closed_form_constraints",
    "complement_quadratic",
    "derive_constraints",
    "format_result",
    "solve_constraints",
    "system_table",
    "to_json",
    "virasoro_degenerate_weight",
    "wznw_classify",
    "wznw_constraints",
]
