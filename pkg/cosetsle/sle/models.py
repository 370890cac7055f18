"""
Simulation records: configuration, Loewner state, traces and martingale reports.
"""

from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SEED_MASK = (1 << 64) - 1

Verdict = Literal["pass", "fail", "insufficient samples", "no power ansatz"]
Scheme = Literal["euler", "slit"]


class SimConfig(BaseModel):
    """Parameters of one simulation run."""

    model_config = ConfigDict(frozen=True)

    kappa: float = Field(..., ge=0, description="SLE diffusivity")
    tau: float = Field(default=0.0, description="Group-walk diffusivity; negative values run over complex scalars")
    dt: float = Field(default=1e-3, gt=0, description="Time step")
    T: float = Field(default=0.5, gt=0, description="Final time")
    seed: int = Field(default=42, description="64-bit seed; stream i uses Philox key (seed, i)")
    samples: int = Field(default=10_000, ge=1, description="Independent streams")
    checkpoints: int = Field(default=5, ge=1, description="Uniformly spaced report times")
    start: Tuple[float, float] = Field(default=(1.0, 1.0), description="Tracked point (Re z, Im z)")
    scheme: Scheme = Field(default="euler", description="euler: Euler-Maruyama; slit: exact elementary slit maps")
    batch: int = Field(default=256, ge=1, description="Streams advanced together; does not affect results")

    @field_validator("seed")
    @classmethod
    def mask_seed(cls, v: int) -> int:
        """Reduce the seed to an unsigned 64-bit integer."""
        return v & SEED_MASK

    @model_validator(mode="after")
    def check_times(self) -> "SimConfig":
        """dt <= T and the tracked point lies in the upper half-plane."""
        if self.dt > self.T:
            raise ValueError(f"dt ({self.dt}) must not exceed T ({self.T})")
        if self.start[1] <= 0:
            raise ValueError("start point must have positive imaginary part")
        return self

    @property
    def steps(self) -> int:
        """Number of time steps."""
        return int(round(self.T / self.dt))

    @property
    def z0(self) -> complex:
        """Tracked point as a complex number."""
        return complex(*self.start)

    def checkpoint_steps(self) -> List[int]:
        """Step indices of the uniformly spaced checkpoints, ending at T."""
        n = self.steps
        marks = sorted({max(1, int(round(n * (i + 1) / self.checkpoints))) for i in range(self.checkpoints)})
        return marks


class LoewnerState(BaseModel):
    """Loewner map data for a set of tracked points."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    t: float = Field(default=0.0, ge=0)
    U: float = Field(default=0.0, description="Driving value sqrt(kappa) xi_t")
    points: np.ndarray = Field(..., description="w_i = g_t(z_i) - U_t")
    dlogw: np.ndarray = Field(..., description="log g_t'(z_i)")
    swallowed: np.ndarray = Field(..., description="Flags for points within the swallow radius")
    repvec: Optional[np.ndarray] = Field(default=None, description="Irrep vector under the group factor")

    @field_validator("points", "dlogw", mode="before")
    @classmethod
    def as_complex(cls, v: object) -> np.ndarray:
        """Complex 1-d copy."""
        return np.array(v, dtype=complex).reshape(-1)

    @field_validator("swallowed", mode="before")
    @classmethod
    def as_bool(cls, v: object) -> np.ndarray:
        """Boolean 1-d copy."""
        return np.array(v, dtype=bool).reshape(-1)

    @field_validator("repvec", mode="before")
    @classmethod
    def as_vector(cls, v: object) -> Optional[np.ndarray]:
        """Complex 1-d copy."""
        return None if v is None else np.array(v, dtype=complex).reshape(-1)

    @model_validator(mode="after")
    def check_points(self) -> "LoewnerState":
        """Shapes agree and unswallowed points lie in the upper half-plane."""
        if not (self.points.shape == self.dlogw.shape == self.swallowed.shape):
            raise ValueError("points, dlogw and swallowed must have the same length")
        alive = ~self.swallowed
        if np.any(self.points[alive].imag <= 0):
            raise ValueError("unswallowed points must lie in the upper half-plane")
        return self

    @classmethod
    def start(cls, points: List[complex], repvec: Optional[np.ndarray] = None) -> "LoewnerState":
        """State at t = 0 with g_0 = identity."""
        n = len(points)
        return cls(points=points, dlogw=np.zeros(n), swallowed=np.zeros(n, dtype=bool), repvec=repvec)


class TracePath(BaseModel):
    """Sampled SLE trace and the driving function that produced it."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    t: np.ndarray = Field(..., description="Times t_0 = 0, ..., t_N")
    driving: np.ndarray = Field(..., description="U(t_n); driving[0] = 0")
    tips: np.ndarray = Field(..., description="Tip z(t_n); tips[0] = 0")

    @property
    def dt(self) -> float:
        """Uniform step."""
        return float(self.t[1] - self.t[0]) if len(self.t) > 1 else 0.0

    def sample(self, count: int) -> "TracePath":
        """Uniformly spaced subsample including both endpoints."""
        if count >= len(self.t):
            return self
        idx = np.unique(np.round(np.linspace(0, len(self.t) - 1, count)).astype(int))
        return TracePath(t=self.t[idx], driving=self.driving[idx], tips=self.tips[idx])


class Checkpoint(BaseModel):
    """Sample statistics of M at one time; the *_im fields describe the imaginary part."""

    model_config = ConfigDict(frozen=True)

    t: float
    mean: float
    stderr: Optional[float] = Field(default=None, description="Undefined for fewer than two samples")
    z: Optional[float] = None
    mean_im: float = 0.0
    stderr_im: Optional[float] = None
    z_im: Optional[float] = None


class MartingaleReport(BaseModel):
    """Monte Carlo comparison of E[M_t] with M_0."""

    model_config = ConfigDict(frozen=True)

    observable: str
    M0: float
    M0_im: float = 0.0
    checkpoints: List[Checkpoint] = Field(default_factory=list)
    verdict: Verdict
    samples: int = Field(..., description="Streams used in the statistics")
    excluded: int = Field(default=0, description="Streams dropped for non-finite values")
    swallowed: int = Field(default=0, description="Streams whose tracked point was swallowed (observable stopped)")
    threshold: float = 3.0
    seed: int = 0
    dt: float = 0.0
    kappa: float = 0.0
    tau: float = 0.0
    parameters: Dict[str, float] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True for a pass verdict."""
        return self.verdict == "pass"
