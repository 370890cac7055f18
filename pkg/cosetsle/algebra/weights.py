"""
Casimir eigenvalues, WZNW central charges and integrable weights.
"""

import itertools
import logging
from typing import List, Sequence, Tuple

import sympy as sp

from ..errors import UnsupportedModelError
from .specs import AlgebraSpec

logger = logging.getLogger(__name__)


def _quadratic(spec: AlgebraSpec, left: Sequence[int], right: Sequence[sp.Rational]) -> sp.Rational:
    g = spec.weyl_quadratic
    return sum(
        (g[i][j] * left[i] * right[j] for i in range(len(left)) for j in range(len(right))),
        sp.Integer(0),
    )


def casimir_eigenvalue(spec: AlgebraSpec, weight: Sequence[int]) -> sp.Rational:
    """
    Quadratic Casimir eigenvalue C = (l, l + 2 rho) in the normalization of spec.

    For abelian algebras rho = 0, so u1 gives nu^2.

    Args:
        spec: Algebra
        weight: Dynkin labels (a single charge for u1)

    Returns:
        Exact rational eigenvalue

    Raises:
        ValueError: If the weight length does not match the rank
    """
    weight = tuple(int(x) for x in weight)
    expected = max(spec.rank, 1)
    if len(weight) != expected:
        raise ValueError(f"{spec.name} weights have {expected} labels, got {len(weight)}")
    if spec.is_abelian:
        shifted = [sp.Integer(x) for x in weight]
    else:
        shifted = [sp.Integer(x + 2) for x in weight]
    return sp.Rational(_quadratic(spec, weight, shifted))


def wznw_central_charge(spec: AlgebraSpec, k: int) -> sp.Rational:
    """
    Central charge c = k dim g / (k + h^v); abelian algebras give c = dim.

    Raises:
        ValueError: If k < 1
    """
    if k < 1:
        raise ValueError(f"level must be a positive integer, got {k}")
    if spec.is_abelian:
        return sp.Integer(spec.dim)
    return sp.Rational(k * spec.dim) / (k + spec.dual_coxeter)


def wznw_conformal_weight(spec: AlgebraSpec, k: int, weight: Sequence[int]) -> sp.Rational:
    """Sugawara weight h = C / (2 (k + h^v)) of a WZNW primary."""
    return casimir_eigenvalue(spec, weight) / (2 * (k + spec.dual_coxeter))


def integrable_weights(spec: AlgebraSpec, k: int) -> List[Tuple[int, ...]]:
    """
    Integrable highest weights at level k, in lexicographic order.

    Only the su(n) built-ins are supported (all comarks equal 1).

    Raises:
        UnsupportedModelError: For algebras without known comarks
    """
    if spec.name not in ("su2", "su3"):
        raise UnsupportedModelError(f"integrable weights not available for {spec.name}")
    labels = itertools.product(range(k + 1), repeat=spec.rank)
    return sorted(w for w in labels if sum(w) <= k)
