"""
Chordal Loewner evolution: point stepping, trace generation and unzipping.

    dw = 2 dt / w - dU,    d log g' = -2 dt / w^2,    dU = sqrt(kappa) dB

"euler" applies these increments directly. "slit" applies the elementary
vertical-slit map w -> sqrt(w^2 + 4 dt) - dU, which solves the drift exactly
over a step of constant driving.
"""

import logging
from typing import Tuple

import numpy as np

from ..errors import PathDomainError
from .models import LoewnerState, Scheme, SimConfig, TracePath
from .rng import stream_generator

logger = logging.getLogger(__name__)

SWALLOW_FACTOR = 1.5
DOMAIN_TOLERANCE = 1e-12


def swallow_radius(dt: float) -> float:
    """Points closer than this to the driving point are flagged as swallowed."""
    return SWALLOW_FACTOR * np.sqrt(dt)


def _upper_root(x: np.ndarray) -> np.ndarray:
    r = np.sqrt(x.astype(complex))
    return np.where(r.imag < 0, -r, r)


def advance(
    w: np.ndarray,
    dlogw: np.ndarray,
    alive: np.ndarray,
    dU: np.ndarray,
    dt: float,
    scheme: Scheme = "euler",
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    One step for arrays of points; swallowed entries are left unchanged.

    Returns:
        (w, dlogw, alive) after the step
    """
    if scheme == "slit":
        root = _upper_root(w * w + 4 * dt)
        w_next = root - dU
        dlog_next = dlogw + np.log(w / root)
    else:
        w_next = w + 2 * dt / w - dU
        dlog_next = dlogw - 2 * dt / (w * w)
    w_next = np.where(alive, w_next, w)
    dlog_next = np.where(alive, dlog_next, dlogw)
    still = alive & (np.abs(w_next) >= swallow_radius(dt)) & (w_next.imag > 0)
    return w_next, dlog_next, still


def loewner_step(state: LoewnerState, dU: float, dt: float, scheme: Scheme = "euler") -> LoewnerState:
    """
    Advance every tracked point by one step.

    Args:
        state: Current state
        dU: Driving increment over the step
        dt: Time step (> 0)
        scheme: "euler" or "slit"

    Returns:
        New state; points that came within the swallow radius are flagged
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    w, dlogw, alive = advance(state.points, state.dlogw, ~state.swallowed, np.asarray(dU), dt, scheme)
    return LoewnerState(
        t=state.t + dt,
        U=state.U + dU,
        points=w,
        dlogw=dlogw,
        swallowed=~alive,
        repvec=state.repvec,
    )


def _inverse_slit(z: np.ndarray, u: float, dt: float) -> np.ndarray:
    return u + _upper_root((z - u) ** 2 - 4 * dt)


def _forward_slit(z: np.ndarray, u: float, dt: float) -> np.ndarray:
    return u + _upper_root((z - u) ** 2 + 4 * dt)


def brownian_driving(config: SimConfig, stream: int = 0) -> np.ndarray:
    """U(t_0..t_N) = sqrt(kappa) B for one Philox stream."""
    rng = stream_generator(config.seed, stream)
    increments = rng.standard_normal(config.steps) * np.sqrt(config.kappa * config.dt)
    return np.concatenate([[0.0], np.cumsum(increments)])


def trace_from_driving(driving: np.ndarray, dt: float) -> TracePath:
    """
    Tip positions for a driving sequence held constant on each step.

    The tip at t_n is f_1 o ... o f_{n-1}(U_n + 2i sqrt(dt)) with f_j the
    inverse elementary slit map at driving U_j.
    """
    driving = np.asarray(driving, dtype=float)
    n = len(driving) - 1
    tips = np.zeros(n + 1, dtype=complex)
    tips[1:] = driving[1:] + 2j * np.sqrt(dt)
    for j in range(n - 1, 0, -1):
        tips[j + 1:] = _inverse_slit(tips[j + 1:], driving[j], dt)
    return TracePath(t=np.arange(n + 1) * dt, driving=driving, tips=tips)


def trace_generate(config: SimConfig) -> TracePath:
    """
    Sample an SLE_kappa trace from stream 0 of the configured seed.

    The path starts at the origin and has one point per step.
    """
    path = trace_from_driving(brownian_driving(config), config.dt)
    logger.info(f"Generated trace: kappa={config.kappa}, {config.steps} steps, seed={config.seed}")
    return path


def driving_recovery(path: TracePath) -> np.ndarray:
    """
    Unzip a trace with elementary slit maps.

    Returns:
        Driving values U(t_0..t_N) with U(t_0) = 0

    Raises:
        PathDomainError: If the path leaves the closed upper half-plane
    """
    tips = np.asarray(path.tips, dtype=complex)
    if np.any(tips.imag < -DOMAIN_TOLERANCE):
        bad = int(np.argmax(tips.imag < -DOMAIN_TOLERANCE))
        raise PathDomainError(f"path leaves the upper half-plane at index {bad}: {tips[bad]}")
    dt = path.dt
    n = len(tips) - 1
    driving = np.zeros(n + 1)
    remaining = tips[1:].copy()
    for j in range(1, n + 1):
        u = float(remaining[0].real)
        driving[j] = u
        remaining = _forward_slit(remaining[1:], u, dt)
    return driving
