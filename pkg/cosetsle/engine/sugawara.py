"""
Sugawara Virasoro modes as current bilinears.

    L_n = 1/(2(k + h^v)) sum_ab (K^{-1})_ab ( sum_{m <= -1} J^a_m J^b_{n-m}
                                            + sum_{m >= 0} J^a_{n-m} J^b_m )

The infinite sum is truncated to |m| <= SUGAWARA_WINDOW. Inside the level
budget every dropped term has a rightmost mode above 2 and annihilates any
state it can meet.
"""

from typing import List, Sequence, Tuple

import sympy as sp

from ..algebra.coset import EmbeddingSpec
from ..algebra.specs import AlgebraSpec
from .symbols import PARENT, OperatorPoly, Scalar, J

SUGAWARA_WINDOW = 4
MAX_MODE = 2

Direction = Sequence[sp.Rational]


def _check_mode(n: int) -> None:
    if abs(n) > MAX_MODE:
        raise ValueError(f"Sugawara mode {n} outside the level budget (|n| <= {MAX_MODE})")


def current(direction: Direction, n: int, sector: str = PARENT) -> OperatorPoly:
    """Current sum_a v_a J^a_n along a parent-basis direction."""
    return OperatorPoly.from_pairs((v, (J(a, n, sector),)) for a, v in enumerate(direction) if v != 0)


def quadratic_current(
    spec: AlgebraSpec, directions: Sequence[Direction], n1: int, n2: int
) -> OperatorPoly:
    """
    sum_{ij} (G^{-1})_ij X^i_{n1} X^j_{n2} with G the K-Gram matrix of the directions.

    This is the sum over a K-orthonormal basis of their span, without square roots.
    """
    if not directions:
        return OperatorPoly.zero()
    form = spec.form_matrix()
    vecs = [sp.Matrix(list(d)) for d in directions]
    gram = sp.Matrix(len(vecs), len(vecs), lambda i, j: (vecs[i].T * form * vecs[j])[0, 0])
    g_inv = gram.inv()
    out = OperatorPoly.zero()
    for i, vi in enumerate(directions):
        for j, vj in enumerate(directions):
            if g_inv[i, j] != 0:
                out = out + (current(vi, n1) * current(vj, n2)).scale(g_inv[i, j])
    return out


def _bilinear(spec: AlgebraSpec, directions: Sequence[Direction], n: int) -> OperatorPoly:
    out = OperatorPoly.zero()
    for m in range(-SUGAWARA_WINDOW, SUGAWARA_WINDOW + 1):
        if m <= -1:
            out = out + quadratic_current(spec, directions, m, n - m)
        else:
            out = out + quadratic_current(spec, directions, n - m, m)
    return out


def _unit_directions(dim: int) -> List[Tuple[int, ...]]:
    return [tuple(1 if a == b else 0 for a in range(dim)) for b in range(dim)]


def sugawara_mode(spec: AlgebraSpec, k: Scalar, n: int) -> OperatorPoly:
    """
    Sugawara L_n of spec at level k, truncated to the level budget.

    Abelian algebras use h^v = 0.

    Raises:
        ValueError: If |n| > 2 or k + h^v vanishes
    """
    _check_mode(n)
    denom = 2 * (sp.sympify(k) + spec.dual_coxeter)
    if denom == 0:
        raise ValueError("k + h^v must be nonzero")
    return _bilinear(spec, _unit_directions(spec.dim), n).scale(1 / denom)


def subalgebra_sugawara_mode(embedding: EmbeddingSpec, k: int, n: int) -> OperatorPoly:
    """Sugawara L^a_n of the embedded subalgebra, written in parent currents."""
    _check_mode(n)
    sub = embedding.sub
    k_sub = embedding.sub_level(k)
    denom = 2 * (k_sub + sub.dual_coxeter)
    directions = [tuple(row) for row in embedding.coefficients]
    # the Gram matrix of the image is index * K_sub, so this contracts with K_sub^{-1} / index
    return _bilinear(embedding.parent, directions, n).scale(embedding.index / denom)


def coset_sugawara_mode(embedding: EmbeddingSpec, k: int, n: int) -> OperatorPoly:
    """Coset Virasoro mode L_n = L^g_n - L^a_n in parent currents."""
    if embedding.is_trivial:
        _check_mode(n)
        return OperatorPoly.zero()
    return sugawara_mode(embedding.parent, k, n) - subalgebra_sugawara_mode(embedding, k, n)


def sub_current(embedding: EmbeddingSpec, b: int, n: int) -> OperatorPoly:
    """Subalgebra current Jt^b_n = sum_a m^b_a J^a_n."""
    return current(embedding.coefficients[b], n)

