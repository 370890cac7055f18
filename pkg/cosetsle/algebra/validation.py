"""
Structure checks for AlgebraSpec: antisymmetry, Jacobi identity, form symmetry.
"""

import itertools
import logging
from typing import List, Tuple

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field

from ..errors import StructureError
from .specs import AlgebraSpec

logger = logging.getLogger(__name__)


class Residual(BaseModel):
    """One nonzero residual of an algebra identity."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    identity: str = Field(..., description="antisymmetry | jacobi | form_symmetry | form_invertible")
    indices: Tuple[int, ...] = Field(..., description="0-based indices where it fails")
    value: sp.Rational = Field(..., description="Exact residual")


class StructureReport(BaseModel):
    """Diagnostic report of validate_structure."""

    model_config = ConfigDict(frozen=True)

    algebra: str
    antisymmetry: List[Residual] = Field(default_factory=list)
    jacobi: List[Residual] = Field(default_factory=list)
    form_symmetry: List[Residual] = Field(default_factory=list)
    form_invertible: bool = True

    @property
    def ok(self) -> bool:
        """True when every residual is exactly zero and K is invertible."""
        return (
            not self.antisymmetry
            and not self.jacobi
            and not self.form_symmetry
            and self.form_invertible
        )

    def first_failure(self) -> Residual:
        """First failing residual, in identity order."""
        for group in (self.antisymmetry, self.form_symmetry, self.jacobi):
            if group:
                return group[0]
        return Residual(identity="form_invertible", indices=(), value=sp.Integer(0))


def validate_structure(spec: AlgebraSpec) -> StructureReport:
    """
    Compute exact residuals of the Lie algebra identities.

    Args:
        spec: Algebra to check

    Returns:
        Report listing every nonzero residual (report only, never raises)
    """
    n = spec.dim
    f = spec.f

    antisym = [
        Residual(identity="antisymmetry", indices=(a, b, c), value=f(a, b, c) + f(b, a, c))
        for a, b, c in itertools.product(range(n), repeat=3)
        if f(a, b, c) + f(b, a, c) != 0
    ]

    jacobi = []
    if not spec.is_abelian:
        for a, b, c, d in itertools.product(range(n), repeat=4):
            total = sp.Integer(0)
            for e in range(n):
                total += f(a, b, e) * f(e, c, d) + f(b, c, e) * f(e, a, d) + f(c, a, e) * f(e, b, d)
            if total != 0:
                jacobi.append(Residual(identity="jacobi", indices=(a, b, c, d), value=total))

    form = spec.form
    form_sym = [
        Residual(identity="form_symmetry", indices=(a, b), value=form[a][b] - form[b][a])
        for a in range(n)
        for b in range(a + 1, n)
        if form[a][b] != form[b][a]
    ]
    invertible = spec.form_matrix().det() != 0

    report = StructureReport(
        algebra=spec.name,
        antisymmetry=antisym,
        jacobi=jacobi,
        form_symmetry=form_sym,
        form_invertible=invertible,
    )
    if not report.ok:
        logger.debug(
            f"{spec.name}: {len(antisym)} antisymmetry, {len(jacobi)} jacobi, "
            f"{len(form_sym)} form residuals, invertible={invertible}"
        )
    return report


def require_valid(spec: AlgebraSpec) -> AlgebraSpec:
    """
    Raise StructureError naming the first failing identity, else return spec.

    Raises:
        StructureError: If any residual is nonzero or K is singular
    """
    report = validate_structure(spec)
    if not report.ok:
        failure = report.first_failure()
        raise StructureError(failure.identity, failure.indices, failure.value)
    return spec
