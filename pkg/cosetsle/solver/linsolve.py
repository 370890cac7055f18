"""
Exact elimination for (kappa, tau).
"""

import logging
from typing import Dict, List

import sympy as sp

from ..engine.symbols import KAPPA, TAU
from .models import AdmissibilityResult, ConstraintSystem

logger = logging.getLogger(__name__)

UNKNOWNS = (KAPPA, TAU)


def _verify(system: ConstraintSystem, values: Dict[sp.Symbol, sp.Expr]) -> Dict[str, sp.Expr]:
    diagnostics: Dict[str, sp.Expr] = {}
    for row in system.rows:
        residual = sp.simplify(row.a * values[KAPPA] + row.b * values[TAU] + row.d)
        diagnostics[row.key] = residual
        if residual != 0:
            raise RuntimeError(f"solution fails row {row.key}: residual {residual}")
    return diagnostics


def solve_constraints(system: ConstraintSystem, convention: str = "") -> AdmissibilityResult:
    """
    Solve a*kappa + b*tau + d = 0 over all rows by exact row reduction.

    Args:
        system: Deduplicated constraint rows
        convention: Label recorded in the result (defaults to the system source)

    Returns:
        AdmissibilityResult with status "unique", "one-parameter family",
        "inconsistent" or "underdetermined" (no nontrivial rows). Every
        returned solution has been substituted back into every row.
    """
    convention = convention or system.source
    label = system.representative or "system"
    if not system.rows:
        return AdmissibilityResult(
            status="underdetermined",
            free_variable="kappa, tau",
            sign_convention_used=convention,
            rank=0,
        )

    augmented = sp.Matrix([[row.a, row.b, -row.d] for row in system.rows])
    reduced, pivots = augmented.rref(simplify=True)
    if 2 in pivots:
        logger.info(f"{label} ({convention}): inconsistent")
        return AdmissibilityResult(
            status="inconsistent", sign_convention_used=convention, rank=len(pivots)
        )

    warnings: List[str] = []
    rank = len(pivots)
    if rank == 2:
        values = {KAPPA: sp.nsimplify(reduced[0, 2]), TAU: sp.nsimplify(reduced[1, 2])}
        status = "unique"
        free = None
        if values[TAU] <= 0:
            warnings.append(f"tau = {values[TAU]} is not positive; no Brownian group component")
            logger.warning(f"{label} ({convention}): tau = {values[TAU]} <= 0")
    else:
        pivot = pivots[0]
        free_symbol = UNKNOWNS[1 - pivot]
        pivot_symbol = UNKNOWNS[pivot]
        values = {
            free_symbol: free_symbol,
            pivot_symbol: sp.expand(reduced[0, 2] - reduced[0, 1 - pivot] * free_symbol),
        }
        status = "one-parameter family"
        free = str(free_symbol)

    diagnostics = _verify(system, values)
    logger.info(f"{label} ({convention}): {status}")
    return AdmissibilityResult(
        status=status,  # type: ignore[arg-type]
        solution={"kappa": values[KAPPA], "tau": values[TAU]},
        free_variable=free,
        diagnostics=diagnostics,
        sign_convention_used=convention,
        rank=rank,
        warnings=warnings,
    )
