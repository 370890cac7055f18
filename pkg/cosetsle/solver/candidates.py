"""
Level-two null-vector candidates.

    psi = (-2 L_{-2} + (kappa/2) L_{-1}^2 + (tau/2) sum_{complement} J^alpha_{-1} J^alpha_{-1}) phi

In "semidirect" mode L_n are primitive symbols with the coset central
charge. In "sugawara" mode they are coset Sugawara bilinears in the parent
currents and the candidate is evaluated one factor at a time.
"""

import logging
from typing import List, Sequence

import sympy as sp
from pydantic import BaseModel, ConfigDict

from ..algebra.coset import CosetField, EmbeddingSpec, coset_central_charge, zero_mode_state
from ..engine.algebra import ModeAlgebra
from ..engine.states import HighestWeightModule, StateVector
from ..engine.sugawara import coset_sugawara_mode, current, quadratic_current, sub_current
from ..engine.symbols import KAPPA, TAU, OperatorPoly, L
from ..errors import UnsupportedModelError
from .models import Normalization

logger = logging.getLogger(__name__)

NORMALIZATIONS = ("orthonormal", "difference")


def _unit_directions(dim: int) -> List[Sequence[int]]:
    return [[1 if a == b else 0 for a in range(dim)] for b in range(dim)]


def complement_quadratic(embedding: EmbeddingSpec, normalization: Normalization = "orthonormal") -> OperatorPoly:
    """
    Sum of J^alpha_{-1} J^alpha_{-1} over a K-orthonormal complement basis.

    Both normalizations contract with the inverse Gram matrix of their
    directions. "difference" takes the full parent sum minus the sum over the
    embedded image; since the complement is K-orthogonal to the image, it is
    the same operator as "orthonormal" for every embedding, and the two only
    differ as code paths. A Brownian normalization without the K^{-1} weight
    would rescale tau and is not offered.
    """
    parent = embedding.parent
    if normalization == "orthonormal":
        return quadratic_current(parent, [list(v) for v in embedding.complement_basis], -1, -1)
    if normalization == "difference":
        full = quadratic_current(parent, _unit_directions(parent.dim), -1, -1)
        image = quadratic_current(parent, [list(v) for v in embedding.coefficients], -1, -1)
        return full - image
    raise ValueError(f"Unknown normalization: {normalization}. Use one of {NORMALIZATIONS}")


class NullCandidate(BaseModel):
    """A level-two candidate evaluated on one coset primary."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    field: CosetField
    embedding: EmbeddingSpec
    mode: str
    normalization: str
    quadratic: OperatorPoly
    module: HighestWeightModule
    state: StateVector

    def virasoro(self, n: int) -> OperatorPoly:
        """L_n in this candidate's mode."""
        if self.mode == "sugawara":
            return coset_sugawara_mode(self.embedding, self.field.level, n)
        return OperatorPoly.symbol(L(n))

    def operator(self) -> OperatorPoly:
        """The candidate as one operator polynomial (semidirect mode only)."""
        if self.mode == "sugawara":
            raise UnsupportedModelError("sugawara candidates are evaluated factor by factor")
        return _semidirect_operator(self.quadratic)

    def operator_text(self) -> str:
        """Canonical text of the candidate operator."""
        if self.mode == "sugawara":
            return f"-2*L(-2) + kappa/2*L(-1) L(-1) + tau/2*Q, Q = {self.quadratic.to_text()}"
        return self.operator().to_text()


def _semidirect_operator(quadratic: OperatorPoly) -> OperatorPoly:
    return (
        OperatorPoly.symbol(L(-2), coeff=-2)
        + OperatorPoly.word(L(-1), L(-1), coeff=KAPPA / 2)
        + quadratic.scale(TAU / 2)
    )


def build_null_candidate(
    field: CosetField,
    embedding: EmbeddingSpec,
    mode: str = "semidirect",
    normalization: Normalization = "orthonormal",
) -> NullCandidate:
    """
    Build and evaluate the level-two candidate on the primary of field.

    Args:
        field: Realizable coset field
        embedding: Coset embedding
        mode: "semidirect" or "sugawara"
        normalization: Complement sum convention

    Returns:
        NullCandidate holding the evaluated state

    Raises:
        UnsupportedModelError: If the field has no grade-zero realization, or
            sugawara mode is requested for an embedding without a built-in family
    """
    if mode == "sugawara" and embedding.family is None:
        raise UnsupportedModelError("sugawara mode needs a built-in coset family")
    k = field.level
    algebra = ModeAlgebra(embedding.parent, mode=mode)  # type: ignore[arg-type]
    rep, vector = zero_mode_state(field, embedding)
    module = HighestWeightModule(
        algebra, rep, vector, h=field.h, c=coset_central_charge(embedding, k), k=k, field=field
    )
    quadratic = complement_quadratic(embedding, normalization)
    primary = module.hw_state()

    if mode == "sugawara":
        lm1 = coset_sugawara_mode(embedding, k, -1)
        lm2 = coset_sugawara_mode(embedding, k, -2)
        state = (
            module.act(lm2, primary).scale(-2)
            + module.act(lm1, module.act(lm1, primary)).scale(KAPPA / 2)
            + module.act(quadratic, primary).scale(TAU / 2)
        )
    else:
        state = module.act(_semidirect_operator(quadratic), primary)

    logger.debug(f"Candidate for {field} ({mode}, {normalization}): {len(state.items())} terms")
    return NullCandidate(
        field=field,
        embedding=embedding,
        mode=mode,
        normalization=normalization,
        quadratic=quadratic,
        module=module,
        state=state,
    )


def raising_sequences(candidate: NullCandidate) -> List[tuple]:
    """
    (tag, group, operators) triples; operators are applied right to left.

    The subset group holds L_2, L_1^2 and Jt_1 L_1; the closure group adds
    L_1 and J^a_1, J^a_2 for every parent generator.
    """
    emb = candidate.embedding
    l1 = candidate.virasoro(1)
    l2 = candidate.virasoro(2)
    seqs: List[tuple] = [("L2", "subset", [l2]), ("L1^2", "subset", [l1, l1])]
    for b in range(emb.sub.dim):
        seqs.append((f"Jt{b + 1}_1 L1", "subset", [sub_current(emb, b, 1), l1]))
    seqs.append(("L1", "closure", [l1]))
    for a, direction in enumerate(_unit_directions(emb.parent.dim)):
        for n in (1, 2):
            seqs.append((f"J{a + 1}_{n}", "closure", [current(direction, n)]))
    return seqs


def evaluate_sequence(candidate: NullCandidate, operators: Sequence[OperatorPoly]) -> StateVector:
    """Apply operators (rightmost first) to the candidate state."""
    state = candidate.state
    for op in reversed(list(operators)):
        state = candidate.module.act(op, state)
    return state


def candidate_at(candidate: NullCandidate, kappa: sp.Expr, tau: sp.Expr) -> StateVector:
    """The candidate state at fixed (kappa, tau)."""
    return candidate.state.subs({KAPPA: kappa, TAU: tau})
