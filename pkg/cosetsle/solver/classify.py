"""
Admissibility classification of coset and WZNW primaries.

Each simple-current orbit is reported per representative: the literal and
sign-corrected closed forms on every member, and the engine-derived rows
(subset rows, then full closure) on every member with a grade-zero
realization.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field

from ..algebra.coset import (
    SU2_U1,
    CosetField,
    EmbeddingSpec,
    coset_central_charge,
    enumerate_fields,
    zero_mode_state,
)
from ..algebra.irreps import irrep
from ..algebra.specs import AlgebraSpec
from ..algebra.weights import wznw_central_charge, wznw_conformal_weight
from ..engine.algebra import ModeAlgebra
from ..engine.states import HighestWeightModule
from ..engine.sugawara import current, quadratic_current
from ..engine.symbols import KAPPA, TAU, L, OperatorPoly
from ..errors import UnsupportedModelError
from .candidates import build_null_candidate
from .constraints import closed_form_constraints, dedupe_rows, derive_constraints, rows_from_state
from .linsolve import solve_constraints
from .models import AdmissibilityResult, ConstraintSystem, exact_str

logger = logging.getLogger(__name__)


def virasoro_degenerate_weight(kappa: sp.Expr) -> Tuple[sp.Expr, sp.Expr]:
    """
    Weight and central charge of the level-two degenerate Virasoro field for SLE_kappa.

    h = (6 - kappa) / (2 kappa) and c = (3 kappa - 8) h; c is invariant under kappa -> 16/kappa.
    """
    kappa = sp.nsimplify(kappa)
    if kappa == 0:
        raise ValueError("kappa must be nonzero")
    h = (6 - kappa) / (2 * kappa)
    return sp.nsimplify(h), sp.nsimplify((3 * kappa - 8) * h)


class RepresentativeResult(BaseModel):
    """All verdicts for one orbit member."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    label: str
    h: str
    realizable: bool
    literal: Optional[AdmissibilityResult] = None
    sign_corrected: Optional[AdmissibilityResult] = None
    engine: Optional[AdmissibilityResult] = Field(default=None, description="L2, L1^2 and Jt1_1 L1 rows")
    closure: Optional[AdmissibilityResult] = Field(default=None, description="Full raising closure")
    closure_preserves: Optional[bool] = Field(
        default=None, description="Whether the closure keeps the subset solution"
    )
    notes: List[str] = Field(default_factory=list)


class OrbitClassification(BaseModel):
    """Verdicts for one simple-current orbit."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    canonical: str
    h: str
    members: List[RepresentativeResult]
    admissible_literal: Optional[bool] = Field(default=None, description="Canonical member, literal rows")
    admissible_sign_corrected: Optional[bool] = None
    admissible_engine: Optional[bool] = Field(default=None, description="First realizable member, engine rows")


class ClassificationReport(BaseModel):
    """Classification of every field class of one coset model at one level."""

    model_config = ConfigDict(frozen=True)

    model: str
    level: int
    central_charge: str
    mode: str
    normalization: str
    orbits: List[OrbitClassification]

    def orbit(self, canonical: str) -> Optional[OrbitClassification]:
        """Look up an orbit by canonical label, e.g. "(1,1)"."""
        for o in self.orbits:
            if o.canonical == canonical:
                return o
        return None


def _preserves(subset: AdmissibilityResult, closure: AdmissibilityResult, system: ConstraintSystem) -> Optional[bool]:
    if not subset.admissible:
        return None
    point = subset.point()
    if point is not None:
        return all(row.residual(*point) == 0 for row in system.rows)
    return closure.status == subset.status


def _classify_member(
    field: CosetField, embedding: EmbeddingSpec, mode: str, normalization: str
) -> RepresentativeResult:
    notes: List[str] = []
    literal = corrected = None
    if embedding.family == SU2_U1:
        literal = solve_constraints(closed_form_constraints(field, embedding, "literal"))
        corrected = solve_constraints(closed_form_constraints(field, embedding, "sign-corrected"))

    try:
        zero_mode_state(field, embedding)
    except UnsupportedModelError:
        notes.append("no grade-zero realization; engine rows come from another orbit member")
        return RepresentativeResult(
            label=str(field), h=exact_str(field.h), realizable=False,
            literal=literal, sign_corrected=corrected, notes=notes,
        )

    candidate = build_null_candidate(field, embedding, mode=mode, normalization=normalization)  # type: ignore[arg-type]
    full = derive_constraints(candidate)
    engine = solve_constraints(full.subset())
    closure = solve_constraints(full)
    if field.h == 0 and coset_central_charge(embedding, field.level) == 0:
        notes.append("degenerate identity at c = 0")
    notes.extend(engine.warnings)
    return RepresentativeResult(
        label=str(field),
        h=exact_str(field.h),
        realizable=True,
        literal=literal,
        sign_corrected=corrected,
        engine=engine,
        closure=closure,
        closure_preserves=_preserves(engine, closure, full),
        notes=notes,
    )


def classify_model(
    embedding: EmbeddingSpec,
    k: int,
    mode: str = "semidirect",
    normalization: str = "orthonormal",
) -> ClassificationReport:
    """
    Classify every field class of a coset model at level k.

    Args:
        embedding: Coset embedding with a built-in family
        k: Positive level
        mode: Engine mode for the engine-derived rows
        normalization: Complement sum convention

    Returns:
        ClassificationReport ordered by canonical label, members in label order
    """
    orbits: List[OrbitClassification] = []
    for orbit in enumerate_fields(embedding, k):
        members = [_classify_member(m, embedding, mode, normalization) for m in orbit.members]
        canonical = members[0]
        realizable = next((m for m in members if m.realizable), None)
        orbits.append(
            OrbitClassification(
                canonical=str(orbit.canonical),
                h=exact_str(orbit.canonical.h),
                members=members,
                admissible_literal=canonical.literal.admissible if canonical.literal else None,
                admissible_sign_corrected=(
                    canonical.sign_corrected.admissible if canonical.sign_corrected else None
                ),
                admissible_engine=(
                    realizable.engine.admissible if realizable and realizable.engine else None
                ),
            )
        )
    logger.info(f"Classified {len(orbits)} field classes of {embedding.family} at k={k}")
    return ClassificationReport(
        model=embedding.family or f"{embedding.parent.name}/{embedding.sub.name}",
        level=k,
        central_charge=exact_str(coset_central_charge(embedding, k)),
        mode=mode,
        normalization=normalization,
        orbits=orbits,
    )


def wznw_constraints(spec: AlgebraSpec, k: int, weight: Sequence[int]) -> ConstraintSystem:
    """
    Rows for psi = (-2 L_{-2} + kappa/2 L_{-1}^2 + tau/2 sum_a J^a_{-1} J^a_{-1}) phi_weight.

    The tau term runs over all of g. The raising set is L_2, L_1, J^a_1 and
    J^a_2; by g-invariance any vector of the irrep gives the same rows.
    """
    rep = irrep(spec, weight)
    module = HighestWeightModule(
        ModeAlgebra(spec, mode="semidirect"),
        rep,
        rep.basis_vector(0),
        h=wznw_conformal_weight(spec, k, weight),
        c=wznw_central_charge(spec, k),
        k=k,
    )
    units = [[1 if a == b else 0 for a in range(spec.dim)] for b in range(spec.dim)]
    psi = (
        OperatorPoly.symbol(L(-2), coeff=-2)
        + OperatorPoly.word(L(-1), L(-1), coeff=KAPPA / 2)
        + quadratic_current(spec, units, -1, -1).scale(TAU / 2)
    )
    state = module.act(psi, module.hw_state())
    raising: Dict[str, OperatorPoly] = {"L2": OperatorPoly.symbol(L(2)), "L1": OperatorPoly.symbol(L(1))}
    for a, direction in enumerate(units):
        for n in (1, 2):
            raising[f"J{a + 1}_{n}"] = current(direction, n)
    rows = []
    trivial = []
    for tag, op in raising.items():
        produced = rows_from_state(module.act(op, state), tag, "subset")
        if not produced:
            trivial.append(tag)
        rows.extend(produced)
    return ConstraintSystem(
        rows=dedupe_rows(rows),
        trivial=trivial,
        representative=f"{spec.name}_{k}{list(weight)}",
        source="engine",
    )


def wznw_classify(spec: AlgebraSpec, k: int, weight: Sequence[int]) -> AdmissibilityResult:
    """Solve the WZNW level-two system for one integrable weight."""
    return solve_constraints(wznw_constraints(spec, k, weight))

