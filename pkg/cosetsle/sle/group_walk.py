"""
Brownian motion on the coset directions, acting on an irrep vector.

With t^alpha the representation matrices of a K-orthonormal complement
basis and Q = sum_alpha t^alpha t^alpha, the Ito step is

    v <- v + (sqrt(tau) / w) sum_alpha dtheta^alpha t^alpha v + (tau / (2 w^2)) Q v dt

The drift is the quadratic variation of the group-valued walk; without it
E[v_t] would stay at v_0 instead of following exp((tau/2) Q t) v_0.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg
import sympy as sp
from pydantic import BaseModel, ConfigDict, Field

from ..algebra.coset import EmbeddingSpec
from ..algebra.irreps import Irrep
from ..algebra.specs import AlgebraSpec
from .models import LoewnerState, SimConfig

logger = logging.getLogger(__name__)


class GroupAction(BaseModel):
    """Numeric representation matrices of an orthonormal set of directions."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrices: np.ndarray = Field(..., description="Shape (directions, dim, dim)")
    casimir: np.ndarray = Field(..., description="Q = sum of squares, shape (dim, dim)")

    @property
    def directions(self) -> int:
        """Number of Brownian components."""
        return int(self.matrices.shape[0])

    @property
    def dim(self) -> int:
        """Irrep dimension."""
        return int(self.casimir.shape[0])

    def generate(self, dtheta: np.ndarray, v: np.ndarray) -> np.ndarray:
        """sum_alpha dtheta^alpha t^alpha v for a batch: dtheta (B, m), v (B, d)."""
        return np.einsum("bm,mij,bj->bi", dtheta, self.matrices, v)

    def drift(self, v: np.ndarray) -> np.ndarray:
        """Q v for a batch of vectors."""
        return v @ self.casimir.T


def _to_numpy(m: sp.Matrix) -> np.ndarray:
    return np.array(m.evalf(), dtype=complex)


def orthonormal_action(spec: AlgebraSpec, rep: Irrep, directions: Sequence[Sequence[sp.Rational]]) -> GroupAction:
    """
    Representation matrices of a K-orthonormal basis of span(directions).

    Raises:
        ValueError: If the directions are empty or degenerate
    """
    if not directions:
        empty = np.zeros((0, rep.dim, rep.dim), dtype=complex)
        return GroupAction(matrices=empty, casimir=np.zeros((rep.dim, rep.dim), dtype=complex))
    vecs = np.array([[float(x) for x in d] for d in directions])
    form = np.array(spec.form_matrix().evalf(), dtype=float)
    gram = vecs @ form @ vecs.T
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as e:
        raise ValueError(f"directions do not span a K-positive subspace: {e}") from e
    basis = np.linalg.solve(chol, vecs)
    rho = np.array([_to_numpy(m) for m in rep.matrices])
    mats = np.einsum("ma,aij->mij", basis, rho)
    casimir = np.einsum("mij,mjk->ik", mats, mats)
    return GroupAction(matrices=mats, casimir=casimir)


def complement_action(embedding: EmbeddingSpec, rep: Irrep) -> GroupAction:
    """Group action along the coset complement."""
    return orthonormal_action(embedding.parent, rep, [list(v) for v in embedding.complement_basis])


def full_action(spec: AlgebraSpec, rep: Irrep) -> GroupAction:
    """Group action along all of g (WZNW variant)."""
    units = [[1 if a == b else 0 for a in range(spec.dim)] for b in range(spec.dim)]
    return orthonormal_action(spec, rep, units)


def sqrt_tau(tau: float) -> complex:
    """sqrt(tau), imaginary for tau < 0."""
    if tau < 0:
        logger.warning(f"tau = {tau} < 0: group factor runs over complex scalars")
    return complex(np.sqrt(complex(tau)))


def group_factor_step(
    state: LoewnerState,
    config: SimConfig,
    dtheta: np.ndarray,
    action: GroupAction,
    coupling: bool = True,
) -> LoewnerState:
    """
    Apply one Ito step of the group factor to state.repvec.

    Args:
        state: State with repvec set; the first tracked point couples as 1/w
        config: Supplies tau and dt
        dtheta: Brownian increments, one per direction (variance dt each)
        action: Representation matrices
        coupling: False for the pure group walk (w = 1)

    Returns:
        New state with the updated vector
    """
    if state.repvec is None:
        raise ValueError("state has no representation vector")
    if config.tau == 0:
        return state
    w = complex(state.points[0]) if coupling else 1.0
    v = state.repvec.reshape(1, -1)
    dtheta = np.asarray(dtheta, dtype=float).reshape(1, -1)
    increment = (sqrt_tau(config.tau) / w) * action.generate(dtheta, v) + (
        config.tau * config.dt / (2 * w * w)
    ) * action.drift(v)
    return state.model_copy(update={"repvec": (v + increment).reshape(-1)})


def group_walk_oracle(action: GroupAction, v0: np.ndarray, tau: float, t: float) -> np.ndarray:
    """exp((tau/2) Q t) v0."""
    return scipy.linalg.expm(0.5 * tau * t * action.casimir) @ np.asarray(v0, dtype=complex)


class GroupWalkEstimate(BaseModel):
    """Monte Carlo mean of v_T for the pure walk against the matrix-exponential oracle."""

    model_config = ConfigDict(frozen=True)

    mean: List[Tuple[float, float]] = Field(..., description="(Re, Im) per component")
    oracle: List[Tuple[float, float]]
    relative_error: float
    samples: int
