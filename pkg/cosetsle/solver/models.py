"""
Constraint and admissibility records.

A constraint row a*kappa + b*tau + d = 0 carries its provenance: which
raising operator produced it, which basis component, which group
(subset or closure) and which source (engine or a closed-form
transcription).
"""

from typing import Dict, List, Literal, Optional, Tuple

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field, field_serializer

from ..algebra.coset import CosetField

Status = Literal["unique", "one-parameter family", "inconsistent", "underdetermined"]
RowGroup = Literal["subset", "closure"]
Source = Literal["engine", "literal", "sign-corrected", "normalized"]
Normalization = Literal["orthonormal", "difference"]

ADMISSIBLE_STATUSES = ("unique", "one-parameter family", "underdetermined")


def exact_str(value: sp.Expr) -> str:
    """Render an exact number as 'p/q' (or a sympy expression string)."""
    return sp.sstr(sp.nsimplify(value) if value.is_number else value, order="lex")


class ConstraintRow(BaseModel):
    """One affine-linear equation a*kappa + b*tau + d = 0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: sp.Expr = Field(..., description="kappa coefficient")
    b: sp.Expr = Field(..., description="tau coefficient")
    d: sp.Expr = Field(..., description="constant term")
    tag: str = Field(..., description="Raising operator, e.g. L2, L1^2, Jt1_1 L1, J2_1")
    component: str = Field(default="", description="Basis component the row came from")
    group: RowGroup = "subset"
    source: Source = "engine"

    @field_serializer("a", "b", "d")
    def serialize_exact(self, value: sp.Expr) -> str:
        """Exact rationals as 'p/q'."""
        return exact_str(value)

    @property
    def key(self) -> str:
        """Unique provenance key."""
        return f"{self.tag}[{self.component}]" if self.component else self.tag

    @property
    def is_trivial(self) -> bool:
        """True for 0 = 0."""
        return self.a == 0 and self.b == 0 and self.d == 0

    def normalized(self) -> Tuple[sp.Expr, sp.Expr, sp.Expr]:
        """Coefficients scaled so the first nonzero one is 1."""
        for pivot in (self.a, self.b, self.d):
            if pivot != 0:
                return tuple(sp.nsimplify(sp.expand(x / pivot)) for x in (self.a, self.b, self.d))  # type: ignore[return-value]
        return (sp.Integer(0), sp.Integer(0), sp.Integer(0))

    def proportional_to(self, other: "ConstraintRow") -> bool:
        """Equal up to a nonzero rescaling."""
        return self.normalized() == other.normalized()

    def residual(self, kappa: sp.Expr, tau: sp.Expr) -> sp.Expr:
        """a*kappa + b*tau + d at a point."""
        return sp.simplify(self.a * kappa + self.b * tau + self.d)

    def render(self) -> str:
        """Human-readable equation."""
        return f"({exact_str(self.a)})*kappa + ({exact_str(self.b)})*tau + ({exact_str(self.d)}) = 0"


class ConstraintSystem(BaseModel):
    """Deduplicated rows for one field representative."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rows: List[ConstraintRow] = Field(default_factory=list)
    trivial: List[str] = Field(default_factory=list, description="Keys of rows that vanish identically")
    field: Optional[CosetField] = Field(default=None, exclude=True)
    representative: str = ""
    source: Source = "engine"
    mode: str = "semidirect"

    def subset(self) -> "ConstraintSystem":
        """Only the L2, L1^2 and Jt1_1 L1 rows."""
        return self.model_copy(update={"rows": [r for r in self.rows if r.group == "subset"]})

    def row(self, tag: str) -> Optional[ConstraintRow]:
        """First row with a given tag."""
        for r in self.rows:
            if r.tag == tag:
                return r
        return None


class AdmissibilityResult(BaseModel):
    """Outcome of exact elimination on (kappa, tau)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    status: Status
    solution: Dict[str, sp.Expr] = Field(
        default_factory=dict,
        description="kappa/tau values; a family is parametrized by its free variable",
    )
    free_variable: Optional[str] = None
    diagnostics: Dict[str, sp.Expr] = Field(
        default_factory=dict, description="Row residual at the solution, keyed by row key"
    )
    sign_convention_used: str = "engine"
    rank: int = 0
    warnings: List[str] = Field(default_factory=list)

    @field_serializer("solution", "diagnostics")
    def serialize_map(self, value: Dict[str, sp.Expr]) -> Dict[str, str]:
        """Exact values as strings."""
        return {k: exact_str(v) for k, v in value.items()}

    @property
    def admissible(self) -> bool:
        """True when the solution set is non-empty."""
        return self.status in ADMISSIBLE_STATUSES

    def point(self) -> Optional[Tuple[sp.Expr, sp.Expr]]:
        """(kappa, tau) for a unique solution."""
        if self.status != "unique":
            return None
        return (self.solution["kappa"], self.solution["tau"])
