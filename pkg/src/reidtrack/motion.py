"""Constant-velocity Kalman filtering and the Gaussian position likelihood.

State vector order is (cx, cy, vx, vy, w, h); the measurement is the
detection box (cx, cy, w, h). Box size is tracked without velocity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .types import STATE_DIM, BBox, Detection, TrackState, TrackStatus

__all__ = [
    "MotionParams",
    "predict",
    "update",
    "position_log_likelihood",
    "mahalanobis_sq",
    "init_track",
]

_MEAS_IDX = np.array([0, 1, 4, 5])  # rows of the state observed by a detection
_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class MotionParams:
    process_noise_pos: float = 1.0  # px^2 / frame
    process_noise_vel: float = 0.5  # px^2 / frame^3
    process_noise_size: float = 0.5  # px^2 / frame
    meas_noise_pos: float = 10.0  # px^2
    meas_noise_size: float = 10.0  # px^2
    initial_vel_var: float = 100.0  # px^2 / frame^2
    # Restrict the association likelihood to (cx, cy) when False; the
    # Kalman update always uses the full 4D measurement.
    likelihood_include_size: bool = True

    def __post_init__(self):
        for name in (
            "process_noise_pos",
            "process_noise_vel",
            "process_noise_size",
            "meas_noise_pos",
            "meas_noise_size",
            "initial_vel_var",
        ):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be strictly positive, got {v}")


def transition_matrix(dt: float) -> np.ndarray:
    F = np.eye(STATE_DIM)
    F[0, 2] = dt
    F[1, 3] = dt
    return F


def process_noise(params: MotionParams, dt: float) -> np.ndarray:
    q = np.array(
        [
            params.process_noise_pos,
            params.process_noise_pos,
            params.process_noise_vel,
            params.process_noise_vel,
            params.process_noise_size,
            params.process_noise_size,
        ]
    )
    return np.diag(q * dt)


def measurement_matrix() -> np.ndarray:
    H = np.zeros((4, STATE_DIM))
    H[np.arange(4), _MEAS_IDX] = 1.0
    return H


def measurement_noise(params: MotionParams) -> np.ndarray:
    return np.diag(
        [
            params.meas_noise_pos,
            params.meas_noise_pos,
            params.meas_noise_size,
            params.meas_noise_size,
        ]
    )


def _box_vector(z: BBox) -> np.ndarray:
    return np.array([z.cx, z.cy, z.w, z.h])


def predict(state: TrackState, params: MotionParams, dt: float = 1.0) -> TrackState:
    """Advance a track by dt frames under the constant-velocity model."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    F = transition_matrix(dt)
    mean = F @ state.mean
    cov = F @ state.cov @ F.T + process_noise(params, dt)
    cov = 0.5 * (cov + cov.T)
    return replace(state, mean=mean, cov=cov)


def _innovation(state: TrackState, params: MotionParams):
    """Innovation covariance of the full 4D measurement, Cholesky-factored."""
    H = measurement_matrix()
    S = H @ state.cov @ H.T + measurement_noise(params)
    S = 0.5 * (S + S.T)
    try:
        factor = cho_factor(S, lower=True)
    except np.linalg.LinAlgError:
        raise ValueError("degenerate innovation covariance") from None
    return H, S, factor


def update(state: TrackState, z: BBox, params: MotionParams) -> TrackState:
    """Kalman measurement update with Joseph-form covariance."""
    H, S, factor = _innovation(state, params)
    P = state.cov
    K = cho_solve(factor, H @ P).T  # P H^T S^-1
    innov = _box_vector(z) - H @ state.mean
    mean = state.mean + K @ innov
    I_KH = np.eye(STATE_DIM) - K @ H
    cov = I_KH @ P @ I_KH.T + K @ measurement_noise(params) @ K.T
    cov = 0.5 * (cov + cov.T)
    return replace(state, mean=mean, cov=cov)


def _likelihood_slice(params: MotionParams):
    return slice(0, 4) if params.likelihood_include_size else slice(0, 2)


def position_log_likelihood(state: TrackState, z: BBox, params: MotionParams) -> float:
    """Log Gaussian density of the detection box under the track's innovation
    distribution N(H mean, H P H^T + R). The track must already be predicted
    to the detection's frame."""
    H, S, _ = _innovation(state, params)
    sl = _likelihood_slice(params)
    Ss = S[sl, sl]
    innov = (_box_vector(z) - H @ state.mean)[sl]
    try:
        factor = cho_factor(Ss, lower=True)
    except np.linalg.LinAlgError:
        raise ValueError("degenerate innovation covariance") from None
    k = innov.shape[0]
    maha_sq = float(innov @ cho_solve(factor, innov))
    log_det = 2.0 * float(np.sum(np.log(np.diag(factor[0]))))
    return -0.5 * (k * _LOG_2PI + log_det + maha_sq)


def mahalanobis_sq(state: TrackState, z: BBox, params: MotionParams) -> float:
    """Squared Mahalanobis distance of the detection in innovation space,
    over the same components the likelihood uses."""
    H, S, _ = _innovation(state, params)
    sl = _likelihood_slice(params)
    Ss = S[sl, sl]
    innov = (_box_vector(z) - H @ state.mean)[sl]
    try:
        factor = cho_factor(Ss, lower=True)
    except np.linalg.LinAlgError:
        raise ValueError("degenerate innovation covariance") from None
    return float(innov @ cho_solve(factor, innov))


def init_track(det: Detection, params: MotionParams, track_id: int) -> TrackState:
    """Create a tentative track from an unassigned detection."""
    b = det.box
    mean = np.array([b.cx, b.cy, 0.0, 0.0, b.w, b.h])
    cov = np.diag(
        [
            params.meas_noise_pos,
            params.meas_noise_pos,
            params.initial_vel_var,
            params.initial_vel_var,
            params.meas_noise_size,
            params.meas_noise_size,
        ]
    )
    has_feature = det.feature is not None
    return TrackState(
        id=track_id,
        mean=mean,
        cov=cov,
        ref_feature=det.feature if has_feature else None,
        feature_count=1 if has_feature else 0,
        hits=1,
        misses=0,
        status=TrackStatus.TENTATIVE,
    )
