"""
Finite irreducible representations carrying the zero modes.

Matrices rho^a satisfy [rho^a, rho^b] = i f_abc rho^c, so that J^a_0 acts
on a primary field's multiplet as rho^a (the field generator is t^a = -rho^a).
The su2 irreps use a weight basis scaled so that every entry is rational
up to a factor of i.
"""

from typing import Dict, Optional, Sequence, Tuple

import sympy as sp
from pydantic import BaseModel, ConfigDict, Field

from ..errors import UnsupportedModelError
from .specs import AlgebraSpec

ADJOINT_HIGHEST_WEIGHTS: Dict[str, Tuple[int, ...]] = {"su2": (2,), "su3": (1, 1)}


class Irrep(BaseModel):
    """Zero-mode representation of a primary multiplet."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    algebra: str
    highest_weight: Tuple[int, ...]
    matrices: Tuple[sp.ImmutableMatrix, ...] = Field(..., description="rho^a, one per basis element")
    weights: Optional[Tuple[Tuple[int, ...], ...]] = Field(
        default=None,
        description="Dynkin weight of each basis vector when the basis is a weight basis",
    )

    @property
    def dim(self) -> int:
        """Dimension of the representation space."""
        return int(self.matrices[0].shape[0])

    def weight_index(self, weight: Sequence[int]) -> Optional[int]:
        """Index of the basis vector with the given weight, if present."""
        if self.weights is None:
            return None
        target = tuple(weight)
        for i, w in enumerate(self.weights):
            if w == target:
                return i
        return None

    def basis_vector(self, index: int) -> sp.ImmutableMatrix:
        """Unit column vector e_index."""
        v = sp.zeros(self.dim, 1)
        v[index, 0] = 1
        return sp.ImmutableMatrix(v)


def su2_irrep(mu: int) -> Irrep:
    """
    Spin mu/2 representation of su2 in a rescaled weight basis.

    Basis vector i has Dynkin weight mu - 2i; S- maps e_i to e_{i+1} with unit
    coefficient and S+ carries the product (j - m)(j + m + 1).
    """
    if mu < 0:
        raise ValueError(f"Dynkin label must be non-negative, got {mu}")
    j = sp.Rational(mu, 2)
    size = mu + 1
    m = [j - i for i in range(size)]
    s_plus = sp.zeros(size, size)
    s_minus = sp.zeros(size, size)
    for i in range(size):
        if i + 1 < size:
            s_minus[i + 1, i] = 1
        if i >= 1:
            s_plus[i - 1, i] = (j - m[i]) * (j + m[i] + 1)
    s1 = (s_plus + s_minus) / 2
    s2 = (s_plus - s_minus) / (2 * sp.I)
    s3 = sp.diag(*m)
    return Irrep(
        algebra="su2",
        highest_weight=(mu,),
        matrices=tuple(sp.ImmutableMatrix(x.applyfunc(sp.expand)) for x in (s1, s2, s3)),
        weights=tuple((mu - 2 * i,) for i in range(size)),
    )


def u1_irrep(charge: int) -> Irrep:
    """One-dimensional representation with J_0 = charge."""
    return Irrep(
        algebra="u1",
        highest_weight=(charge,),
        matrices=(sp.ImmutableMatrix([[charge]]),),
        weights=((charge,),),
    )


def adjoint_irrep(spec: AlgebraSpec) -> Irrep:
    """Adjoint representation (rho^a)_bc = -i f_abc."""
    n = spec.dim
    mats = tuple(
        sp.ImmutableMatrix(n, n, lambda b, c, a=a: -sp.I * spec.f(a, b, c)) for a in range(n)
    )
    return Irrep(
        algebra=spec.name,
        highest_weight=ADJOINT_HIGHEST_WEIGHTS.get(spec.name, ()),
        matrices=mats,
    )


def trivial_irrep(spec: AlgebraSpec) -> Irrep:
    """One-dimensional trivial representation."""
    return Irrep(
        algebra=spec.name,
        highest_weight=tuple([0] * max(spec.rank, 1)),
        matrices=tuple(sp.ImmutableMatrix([[0]]) for _ in range(spec.dim)),
        weights=(tuple([0] * max(spec.rank, 1)),),
    )


def irrep(spec: AlgebraSpec, highest_weight: Sequence[int]) -> Irrep:
    """
    Zero-mode irrep of spec with the given highest weight.

    Raises:
        UnsupportedModelError: If no construction is available for this weight
    """
    hw = tuple(int(x) for x in highest_weight)
    if spec.name == "su2":
        return su2_irrep(hw[0])
    if spec.name == "u1":
        return u1_irrep(hw[0])
    if all(x == 0 for x in hw):
        return trivial_irrep(spec)
    if ADJOINT_HIGHEST_WEIGHTS.get(spec.name) == hw:
        return adjoint_irrep(spec)
    raise UnsupportedModelError(f"No irrep construction for {spec.name} with highest weight {hw}")


def casimir_matrix(spec: AlgebraSpec, rep: Irrep) -> sp.Matrix:
    """Sum over a, b of (K^{-1})_ab rho^a rho^b in the representation."""
    k_inv = spec.form_inverse()
    out = sp.zeros(rep.dim, rep.dim)
    for a in range(spec.dim):
        for b in range(spec.dim):
            if k_inv[a, b] != 0:
                out += k_inv[a, b] * rep.matrices[a] * rep.matrices[b]
    return out.applyfunc(sp.expand)
