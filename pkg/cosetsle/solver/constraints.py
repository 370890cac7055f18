"""
Constraint rows from raising operators, plus the closed-form transcriptions.

Every nonzero basis coefficient of a raising operator applied to the
candidate is affine in (kappa, tau). Complex coefficients split into real
and imaginary rows since kappa and tau are real.
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy as sp

from ..algebra.coset import (
    SU2_U1,
    CosetField,
    EmbeddingSpec,
    coset_central_charge,
    su2_u1_embedding,
    symmetric_charge,
)
from ..algebra.weights import casimir_eigenvalue
from ..engine.states import StateVector
from ..engine.symbols import KAPPA, TAU, Word
from ..errors import UnsupportedModelError
from .candidates import NullCandidate, evaluate_sequence, raising_sequences
from .models import ConstraintRow, ConstraintSystem, Source

logger = logging.getLogger(__name__)

CONVENTIONS = ("literal", "sign-corrected")
NORMALIZED = "normalized"
TRANSCRIPTIONS = CONVENTIONS + (NORMALIZED,)


def _component_label(word: Word, component: int) -> str:
    return f"{' '.join(str(s) for s in word) or '1'}|{component}"


def affine_coefficients(expr: sp.Expr) -> Tuple[sp.Expr, sp.Expr, sp.Expr]:
    """
    Split expr into (a, b, d) with expr = a*kappa + b*tau + d.

    Raises:
        ValueError: If expr is not affine in kappa and tau
    """
    e = sp.expand(expr)
    a = e.coeff(KAPPA, 1)
    b = e.coeff(TAU, 1)
    d = e.subs({KAPPA: 0, TAU: 0})
    if sp.expand(e - a * KAPPA - b * TAU - d) != 0 or (a.free_symbols | b.free_symbols | d.free_symbols):
        raise ValueError(f"coefficient is not affine in (kappa, tau): {e}")
    return a, b, d


def rows_from_state(state: StateVector, tag: str, group: str, source: Source = "engine") -> List[ConstraintRow]:
    """One row per nonzero coefficient (two for complex ones)."""
    rows: List[ConstraintRow] = []
    for (word, comp), coeff in state.items():
        a, b, d = affine_coefficients(coeff)
        label = _component_label(word, comp)
        parts = [("re", [sp.re(x) for x in (a, b, d)]), ("im", [sp.im(x) for x in (a, b, d)])]
        for suffix, (ra, rb, rd) in parts:
            ra, rb, rd = (sp.nsimplify(sp.expand(x)) for x in (ra, rb, rd))
            if ra == 0 and rb == 0 and rd == 0:
                continue
            component = label if suffix == "re" else f"{label}.im"
            rows.append(
                ConstraintRow(a=ra, b=rb, d=rd, tag=tag, component=component, group=group, source=source)  # type: ignore[arg-type]
            )
    return rows


def dedupe_rows(rows: Iterable[ConstraintRow]) -> List[ConstraintRow]:
    """Drop trivial rows and rows proportional to an earlier one."""
    kept: List[ConstraintRow] = []
    seen = set()
    for row in rows:
        if row.is_trivial:
            continue
        key = row.normalized()
        if key in seen:
            continue
        seen.add(key)
        kept.append(row)
    return kept


def derive_constraints(
    candidate: NullCandidate, groups: Sequence[str] = ("subset", "closure"), dedupe: bool = True
) -> ConstraintSystem:
    """
    Apply every raising operator to the candidate and collect rows.

    Args:
        candidate: Evaluated null-vector candidate
        groups: Which row groups to include
        dedupe: Drop rows proportional to an earlier one

    Returns:
        ConstraintSystem with deduplicated rows; tags whose raising result
        vanishes identically are listed in `trivial`
    """
    rows: List[ConstraintRow] = []
    trivial: List[str] = []
    for tag, group, operators in raising_sequences(candidate):
        if group not in groups:
            continue
        state = evaluate_sequence(candidate, operators)
        produced = rows_from_state(state, tag, group)
        if not produced:
            trivial.append(tag)
        rows.extend(produced)
    kept = dedupe_rows(rows) if dedupe else rows
    logger.debug(
        f"{candidate.field} ({candidate.mode}): {len(rows)} rows, {len(kept)} after dedup, "
        f"trivial: {trivial}"
    )
    return ConstraintSystem(
        rows=kept,
        trivial=trivial,
        field=candidate.field,
        representative=str(candidate.field),
        source="engine",
        mode=candidate.mode,
    )


def closed_form_constraints(
    field: CosetField,
    embedding: Optional[EmbeddingSpec] = None,
    convention: str = "literal",
    dedupe: bool = True,
) -> ConstraintSystem:
    """
    Closed-form L_2, L_1^2 and Jt_1 L_1 rows for su(2)_k/u(1).

    literal:        3h kappa + k tau + (c - 8h) = 0
                    2h(2h+1) kappa + (C_mu - C_nu) tau + 12h = 0
                    nu ((1+2h) kappa + tau - 6) = 0
    sign-corrected: as literal, with -(c + 8h) in the L_2 row
    normalized:     3h kappa + k tau - (c + 8h) = 0
                    2h(2h+1) kappa + (C_mu - C_nu / index) tau - 12h = 0
                    nu ((1+2h) kappa + h^v tau - 6) = 0

    literal and sign-corrected take C_nu as the square of the charge label
    as written. normalized uses the charge in (-k, k], measures its Casimir
    with the parent form (the u(1) Casimir divided by the embedding index,
    nu^2 / 2 here), and keeps the -2 L_{-2} sign in the L_1^2 constant. The
    Jt_1 L_1 row is absent when mu or nu is zero.

    Raises:
        UnsupportedModelError: For embeddings other than su2_u1
        ValueError: For unknown conventions
    """
    embedding = embedding or su2_u1_embedding()
    if embedding.family != SU2_U1:
        raise UnsupportedModelError("closed-form rows exist only for su2_u1")
    if convention not in TRANSCRIPTIONS:
        raise ValueError(f"Unknown convention: {convention}. Use one of {TRANSCRIPTIONS}")
    k = field.level
    h = field.h
    c = coset_central_charge(embedding, k)
    mu, nu = field.mu[0], field.nu[0]

    if convention == NORMALIZED:
        nu = symmetric_charge(nu, k)
        casimir_nu = casimir_eigenvalue(embedding.sub, (nu,)) / embedding.index
        l2_constant = -(c + 8 * h)
        l1_constant = -12 * h
        jt_tau = embedding.parent.dual_coxeter
    else:
        casimir_nu = field.casimir_nu
        l2_constant = -8 * h + (c if convention == "literal" else -c)
        l1_constant = 12 * h
        jt_tau = sp.Integer(1)
    scale = nu if mu != 0 and nu != 0 else 0

    candidates = [
        ("L2", 3 * h, sp.Integer(k), l2_constant),
        ("L1^2", 2 * h * (2 * h + 1), field.casimir_mu - casimir_nu, l1_constant),
        ("Jt1_1 L1", scale * (1 + 2 * h), scale * jt_tau, sp.Integer(-6 * scale)),
    ]
    rows: List[ConstraintRow] = []
    trivial: List[str] = []
    for tag, a, b, d in candidates:
        row = ConstraintRow(
            a=sp.nsimplify(a), b=sp.nsimplify(b), d=sp.nsimplify(d), tag=tag, group="subset", source=convention  # type: ignore[arg-type]
        )
        if row.is_trivial:
            trivial.append(tag)
        else:
            rows.append(row)
    return ConstraintSystem(
        rows=dedupe_rows(rows) if dedupe else rows,
        trivial=trivial,
        field=field,
        representative=str(field),
        source=convention,  # type: ignore[arg-type]
        mode="closed-form",
    )
