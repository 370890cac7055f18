"""
Lie algebra specifications.

An AlgebraSpec is a basis-level description of a finite-dimensional Lie
algebra: structure constants f_abc with [t^a, t^b] = i f_abc t^c, the
invariant form K_ab, the dual Coxeter number and the quadratic form on
Dynkin labels used for Casimir eigenvalues. Every number is an exact
sympy Rational.
"""

import logging
from typing import Any, Dict, List, Sequence, Tuple

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

logger = logging.getLogger(__name__)

RationalMatrix = Tuple[Tuple[sp.Rational, ...], ...]
StructureConstants = Dict[Tuple[int, int, int], sp.Rational]


def to_rational(value: Any) -> sp.Rational:
    """
    Convert an int, "p/q" string or sympy number to an exact Rational.

    Floats are rejected: an algebra must never pass through binary floating point.

    Raises:
        ValueError: If the value is a float or not a rational literal
    """
    if isinstance(value, bool):
        raise ValueError(f"Not a rational: {value!r}")
    if isinstance(value, float):
        raise ValueError(f"Floating point value {value!r} not allowed; use 'p/q'")
    if isinstance(value, sp.Rational):
        return value
    if isinstance(value, int):
        return sp.Integer(value)
    if isinstance(value, str):
        try:
            r = sp.Rational(value.strip())
        except (TypeError, ValueError, sp.SympifyError) as e:
            raise ValueError(f"Not a rational literal: {value!r}") from e
        return r
    if isinstance(value, sp.Expr):
        r = sp.nsimplify(value, rational=False)
        if r.is_Rational:
            return r
    raise ValueError(f"Not a rational: {value!r}")


class AlgebraSpec(BaseModel):
    """Finite-dimensional Lie algebra given by exact structure data."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(..., description="Identifier, e.g. su2")
    dim: int = Field(..., gt=0, description="Dimension of the algebra")
    rank: int = Field(..., ge=0, description="Rank (length of Dynkin labels)")
    structure_constants: StructureConstants = Field(
        default_factory=dict,
        description="Sparse f_abc, 0-based indices, zero entries omitted",
    )
    form: RationalMatrix = Field(..., description="Invariant form K_ab on the basis")
    dual_coxeter: sp.Rational = Field(..., description="Dual Coxeter number h^v")
    weyl_quadratic: RationalMatrix = Field(
        ...,
        description="Quadratic form on Dynkin labels, (l, m) = l^T G m",
    )
    basis_labels: Tuple[str, ...] = Field(default=(), description="Display labels of the basis")

    @field_validator("structure_constants", mode="before")
    @classmethod
    def coerce_structure_constants(cls, v: Any) -> StructureConstants:
        """Coerce entries to Rationals and drop zeros."""
        out: StructureConstants = {}
        for key, value in dict(v).items():
            r = to_rational(value)
            if r != 0:
                out[tuple(int(i) for i in key)] = r  # type: ignore[assignment]
        return out

    @field_validator("form", "weyl_quadratic", mode="before")
    @classmethod
    def coerce_matrix(cls, v: Any) -> RationalMatrix:
        """Coerce nested rows to tuples of Rationals."""
        return tuple(tuple(to_rational(x) for x in row) for row in v)

    @field_validator("dual_coxeter", mode="before")
    @classmethod
    def coerce_dual_coxeter(cls, v: Any) -> sp.Rational:
        """Coerce h^v and require it non-negative."""
        r = to_rational(v)
        if r < 0:
            raise ValueError(f"dual Coxeter number must be non-negative, got {r}")
        return r

    @model_validator(mode="after")
    def check_shapes(self) -> "AlgebraSpec":
        """Check index ranges and matrix shapes (identities are checked by validate_structure)."""
        for a, b, c in self.structure_constants:
            for idx in (a, b, c):
                if not 0 <= idx < self.dim:
                    raise ValueError(f"structure constant index {idx} out of range 0..{self.dim - 1}")
        if len(self.form) != self.dim or any(len(row) != self.dim for row in self.form):
            raise ValueError(f"form must be {self.dim}x{self.dim}")
        size = max(self.rank, 1)
        if len(self.weyl_quadratic) != size or any(len(r) != size for r in self.weyl_quadratic):
            raise ValueError(f"weyl_quadratic must be {size}x{size}")
        if self.basis_labels and len(self.basis_labels) != self.dim:
            raise ValueError("basis_labels length must equal dim")
        return self

    @property
    def is_abelian(self) -> bool:
        """True when every structure constant vanishes."""
        return not self.structure_constants

    def f(self, a: int, b: int, c: int) -> sp.Rational:
        """Structure constant f_abc (0-based)."""
        return self.structure_constants.get((a, b, c), sp.Integer(0))

    def bracket(self, a: int, b: int) -> List[Tuple[int, sp.Rational]]:
        """Nonzero (c, f_abc) pairs, ordered by c."""
        return [(c, self.f(a, b, c)) for c in range(self.dim) if self.f(a, b, c) != 0]

    def form_matrix(self) -> sp.Matrix:
        """K as a sympy Matrix."""
        return sp.Matrix(self.form)

    def form_inverse(self) -> sp.Matrix:
        """K^{-1} as a sympy Matrix."""
        return self.form_matrix().inv()

    def label(self, a: int) -> str:
        """Display label of basis element a."""
        return self.basis_labels[a] if self.basis_labels else str(a + 1)


def structure_from_matrices(
    matrices: Sequence[sp.Matrix],
) -> Tuple[StructureConstants, RationalMatrix]:
    """
    Solve [t^a, t^b] = i f_abc t^c and K_ab = tr(t^a t^b) from defining matrices.

    Args:
        matrices: Basis t^a of the algebra in some faithful representation

    Returns:
        (structure constants, form), both exact

    Raises:
        ValueError: If a structure constant is not rational
    """
    dim = len(matrices)
    form = sp.Matrix(dim, dim, lambda a, b: sp.expand((matrices[a] * matrices[b]).trace()))
    form_inv = form.inv()
    f: StructureConstants = {}
    for a in range(dim):
        for b in range(dim):
            comm = matrices[a] * matrices[b] - matrices[b] * matrices[a]
            traces = [sp.expand((matrices[d] * comm).trace()) for d in range(dim)]
            for c in range(dim):
                coeff = sp.expand(-sp.I * sum(form_inv[c, d] * traces[d] for d in range(dim)))
                if coeff != 0:
                    f[(a, b, c)] = to_rational(coeff)
    rows = tuple(tuple(to_rational(form[a, b]) for b in range(dim)) for a in range(dim))
    return f, rows


def _pauli_halves() -> List[sp.Matrix]:
    half = sp.Rational(1, 2)
    return [
        sp.Matrix([[0, half], [half, 0]]),
        sp.Matrix([[0, -sp.I * half], [sp.I * half, 0]]),
        sp.Matrix([[half, 0], [0, -half]]),
    ]


def _su3_rational_basis() -> List[sp.Matrix]:
    half = sp.Rational(1, 2)

    def unit(i: int, j: int, value: Any) -> sp.Matrix:
        m = sp.zeros(3, 3)
        m[i, j] = value
        return m

    def sym(i: int, j: int) -> sp.Matrix:
        return unit(i, j, half) + unit(j, i, half)

    def asym(i: int, j: int) -> sp.Matrix:
        return unit(i, j, -sp.I * half) + unit(j, i, sp.I * half)

    return [
        sym(0, 1),
        asym(0, 1),
        sp.diag(half, -half, 0),
        sym(0, 2),
        asym(0, 2),
        sym(1, 2),
        asym(1, 2),
        sp.diag(0, half, -half),
    ]


def defining_matrices(name: str) -> List[sp.Matrix]:
    """Defining-representation basis used to build a built-in algebra."""
    if name == "su2":
        return _pauli_halves()
    if name == "su3":
        return _su3_rational_basis()
    if name == "u1":
        return [sp.Matrix([[1]])]
    raise KeyError(name)


def _build_su2() -> AlgebraSpec:
    f, form = structure_from_matrices(_pauli_halves())
    return AlgebraSpec(
        name="su2",
        dim=3,
        rank=1,
        structure_constants=f,
        form=form,
        dual_coxeter=2,
        weyl_quadratic=[["1/2"]],
        basis_labels=("1", "2", "3"),
    )


def _build_su3() -> AlgebraSpec:
    f, form = structure_from_matrices(_su3_rational_basis())
    return AlgebraSpec(
        name="su3",
        dim=8,
        rank=2,
        structure_constants=f,
        form=form,
        dual_coxeter=3,
        weyl_quadratic=[["2/3", "1/3"], ["1/3", "2/3"]],
        basis_labels=("S12", "A12", "H1", "S13", "A13", "S23", "A23", "H2"),
    )


def _build_u1() -> AlgebraSpec:
    return AlgebraSpec(
        name="u1",
        dim=1,
        rank=1,
        structure_constants={},
        form=[[1]],
        dual_coxeter=0,
        weyl_quadratic=[[1]],
        basis_labels=("Q",),
    )


_BUILDERS = {"su2": _build_su2, "su3": _build_su3, "u1": _build_u1}
_CACHE: Dict[str, AlgebraSpec] = {}

BUILTIN_NAMES = tuple(_BUILDERS)


def builtin_algebra(name: str) -> AlgebraSpec:
    """
    Return a built-in algebra by name.

    Args:
        name: One of "su2", "su3", "u1"

    Returns:
        The (cached, immutable) AlgebraSpec

    Raises:
        KeyError: If the name is not a built-in
    """
    if name not in _BUILDERS:
        raise KeyError(f"Unknown built-in algebra: {name}. Available: {', '.join(BUILTIN_NAMES)}")
    if name not in _CACHE:
        _CACHE[name] = _BUILDERS[name]()
        logger.debug(f"Built algebra {name} (dim {_CACHE[name].dim})")
    return _CACHE[name]
