"""
Martingale observables for the Monte Carlo harness.

Each observable advances a batch of independent streams. The harness hands
it one standard-normal vector per stream and step; noise_dim() says how
many components it needs.
"""

import logging
from abc import ABC, abstractmethod
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.linalg

from ..errors import IndicialRelationError
from .group_walk import GroupAction, sqrt_tau
from .loewner import advance
from .models import SimConfig

logger = logging.getLogger(__name__)

INDICIAL_TOLERANCE = 1e-9

BatchState = Dict[str, np.ndarray]


def indicial_exponents(kappa: float, h: float, tau_casimir: float = 0.0) -> Tuple[float, ...]:
    """
    Real roots p of (kappa/2) p^2 + (2 - kappa/2) p + tau_casimir/2 - 2h = 0, largest first.

    tau_casimir is tau times the Casimir difference of the field; the
    equation is linear when kappa = 0. Returns () when the roots are complex.
    """
    a = kappa / 2
    b = 2 - kappa / 2
    c = tau_casimir / 2 - 2 * h
    if a == 0:
        return (-c / b,)
    disc = b * b - 4 * a * c
    if disc < 0:
        return ()
    root = np.sqrt(disc)
    return tuple(sorted({(-b + root) / (2 * a), (-b - root) / (2 * a)}, reverse=True))


def indicial_residual(kappa: float, h: float, p: float, tau_casimir: float = 0.0) -> float:
    """2p + (kappa/2) p(p-1) + tau_casimir/2 - 2h."""
    return 2 * p + 0.5 * kappa * p * (p - 1) + 0.5 * tau_casimir - 2 * h


class MartingaleObservable(ABC):
    """
    A process M_t expected to have constant mean.

    Subclasses hold their parameters and implement the batch kernel.
    """

    def __init__(self, config: SimConfig):
        self.config = config

    @abstractmethod
    def name(self) -> str:
        """Return the name of this observable."""
        pass

    @abstractmethod
    def noise_dim(self) -> int:
        """Standard normals consumed per stream and step."""
        pass

    @abstractmethod
    def initial(self, batch: int) -> BatchState:
        """State of `batch` fresh streams at t = 0."""
        pass

    @abstractmethod
    def step(self, state: BatchState, normals: np.ndarray) -> BatchState:
        """
        Advance every stream by config.dt.

        Args:
            state: Current batch state
            normals: Standard normals, shape (batch, noise_dim)

        Returns:
            Next batch state
        """
        pass

    @abstractmethod
    def value(self, state: BatchState) -> np.ndarray:
        """M for every stream, complex array of shape (batch,)."""
        pass

    def record(self, state: BatchState) -> np.ndarray:
        """What the harness stores at checkpoints, shape (batch, r)."""
        return self.value(state).reshape(-1, 1)

    def check(self) -> None:
        """Raise if the parameters do not describe a martingale."""

    def parameters(self) -> Dict[str, float]:
        """Parameters echoed into the report."""
        return {}

    def swallowed(self, state: BatchState) -> int:
        """Streams whose tracked point has been swallowed."""
        alive = state.get("alive")
        return 0 if alive is None else int(np.count_nonzero(~alive))

    def initial_value(self) -> complex:
        """M_0."""
        return complex(self.value(self.initial(1))[0])


class _LoewnerPower(MartingaleObservable):
    """(g_t')^h (g_t - U_t)^p at one interior point, stopped when swallowed."""

    def __init__(self, config: SimConfig, h: float, p: float, force: bool = False):
        super().__init__(config)
        self.h = h
        self.p = p
        self.force = force

    def _power(self, w: np.ndarray, dlogw: np.ndarray) -> np.ndarray:
        return np.exp(self.h * dlogw + self.p * np.log(w))

    def _loewner_initial(self, batch: int) -> BatchState:
        w = np.full(batch, self.config.z0, dtype=complex)
        dlogw = np.zeros(batch, dtype=complex)
        return {"w": w, "dlogw": dlogw, "alive": np.ones(batch, dtype=bool), "m": self._power(w, dlogw)}

    def _loewner_step(self, state: BatchState, xi: np.ndarray) -> BatchState:
        cfg = self.config
        dU = np.sqrt(cfg.kappa * cfg.dt) * xi
        w, dlogw, alive = advance(state["w"], state["dlogw"], state["alive"], dU, cfg.dt, cfg.scheme)
        m = np.where(alive, self._power(w, dlogw), state["m"])
        return {**state, "w": w, "dlogw": dlogw, "alive": alive, "m": m}

    def _tau_casimir(self) -> float:
        return 0.0

    def check(self) -> None:
        residual = indicial_residual(self.config.kappa, self.h, self.p, self._tau_casimir())
        if abs(residual) > INDICIAL_TOLERANCE:
            if self.force:
                logger.warning(f"{self.name()}: indicial residual {residual:.3g}, running anyway")
                return
            raise IndicialRelationError(residual)

    def parameters(self) -> Dict[str, float]:
        return {"h": self.h, "p": self.p}


class PowerObservable(_LoewnerPower):
    """M_t = (g_t'(z))^h (g_t(z) - U_t)^p; a martingale when 2p + (kappa/2) p(p-1) = 2h."""

    def name(self) -> str:
        return "power"

    def noise_dim(self) -> int:
        return 1

    def initial(self, batch: int) -> BatchState:
        return self._loewner_initial(batch)

    def step(self, state: BatchState, normals: np.ndarray) -> BatchState:
        return self._loewner_step(state, normals[:, 0])

    def value(self, state: BatchState) -> np.ndarray:
        return state["m"]


class CosetOnePointObservable(_LoewnerPower):
    """
    M_t = (g_t')^h w_t^p v_t[index] with v driven by the coset group factor.

    v starts at the weight vector e_index, an eigenvector of Q with
    eigenvalue casimir; the martingale relation gains tau * casimir / 2.
    """

    def __init__(
        self,
        config: SimConfig,
        h: float,
        p: float,
        action: GroupAction,
        index: int,
        casimir: Optional[float] = None,
        force: bool = False,
    ):
        super().__init__(config, h, p, force)
        self.action = action
        self.index = index
        q = action.casimir[index, index].real if casimir is None else casimir
        self.casimir = float(q)
        self._sqrt_tau = sqrt_tau(config.tau) if config.tau != 0 else 0.0

    def _tau_casimir(self) -> float:
        return self.config.tau * self.casimir

    def name(self) -> str:
        return "coset-onepoint"

    def noise_dim(self) -> int:
        return 1 + self.action.directions

    def initial(self, batch: int) -> BatchState:
        state = self._loewner_initial(batch)
        v = np.zeros((batch, self.action.dim), dtype=complex)
        v[:, self.index] = 1.0
        state["v"] = v
        state["m"] = state["m"] * v[:, self.index]
        return state

    def step(self, state: BatchState, normals: np.ndarray) -> BatchState:
        cfg = self.config
        w = state["w"][:, None]
        v = state["v"]
        if cfg.tau != 0:
            dtheta = normals[:, 1:] * np.sqrt(cfg.dt)
            v = v + (self._sqrt_tau / w) * self.action.generate(dtheta, v) + (
                cfg.tau * cfg.dt / (2 * w * w)
            ) * self.action.drift(v)
            v = np.where(state["alive"][:, None], v, state["v"])
        nxt = self._loewner_step({**state, "v": v}, normals[:, 0])
        product = self._power(nxt["w"], nxt["dlogw"]) * v[:, self.index]
        nxt["m"] = np.where(nxt["alive"], product, state["m"])
        return nxt

    def value(self, state: BatchState) -> np.ndarray:
        return state["m"]

    def parameters(self) -> Dict[str, float]:
        return {"h": self.h, "p": self.p, "casimir": self.casimir}


class GroupWalkObservable(MartingaleObservable):
    """
    Pure group walk v_t (no Loewner coupling).

    value() is (exp(-(tau/2) Q t) v_t)[index], a martingale; with raw=True
    record() returns v_t itself for estimating E[v_t].
    """

    def __init__(self, config: SimConfig, action: GroupAction, v0: np.ndarray, index: int = 0, raw: bool = False):
        super().__init__(config)
        self.action = action
        self.v0 = np.asarray(v0, dtype=complex)
        self.index = index
        self.raw = raw
        self._sqrt_tau = sqrt_tau(config.tau) if config.tau != 0 else 0.0

    def name(self) -> str:
        return "group-walk"

    def noise_dim(self) -> int:
        return max(self.action.directions, 1)

    def initial(self, batch: int) -> BatchState:
        return {"v": np.tile(self.v0, (batch, 1)), "t": np.zeros(1)}

    def step(self, state: BatchState, normals: np.ndarray) -> BatchState:
        cfg = self.config
        v = state["v"]
        if cfg.tau != 0 and self.action.directions:
            dtheta = normals[:, : self.action.directions] * np.sqrt(cfg.dt)
            v = v + self._sqrt_tau * self.action.generate(dtheta, v) + 0.5 * cfg.tau * cfg.dt * self.action.drift(v)
        return {"v": v, "t": state["t"] + cfg.dt}

    def value(self, state: BatchState) -> np.ndarray:
        t = float(state["t"][0])
        undo = scipy.linalg.expm(-0.5 * self.config.tau * t * self.action.casimir)
        return (state["v"] @ undo.T)[:, self.index]

    def record(self, state: BatchState) -> np.ndarray:
        return state["v"] if self.raw else super().record(state)

    def parameters(self) -> Dict[str, float]:
        return {"index": float(self.index)}
