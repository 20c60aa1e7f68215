"""Appearance likelihoods: softmin over feature distances, reference upkeep."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .types import TrackState

__all__ = ["UpdateMode", "AppearanceParams", "appearance_row", "update_reference"]


class UpdateMode(enum.Enum):
    CUMULATIVE_MEAN = "cumulative"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class AppearanceParams:
    update_mode: UpdateMode = UpdateMode.CUMULATIVE_MEAN
    ewma_lambda: float = 0.9  # weight on the old reference in exponential mode
    renormalize: bool = True
    distance_scale: float = 1.0

    def __post_init__(self):
        if self.update_mode is UpdateMode.EXPONENTIAL and not (0.0 < self.ewma_lambda < 1.0):
            raise ValueError("ewma_lambda must lie in (0, 1)")
        if not (np.isfinite(self.distance_scale) and self.distance_scale > 0):
            raise ValueError("distance_scale must be strictly positive")


def appearance_row(
    g: np.ndarray,
    refs: Sequence[Optional[np.ndarray]],
    scale: float = 1.0,
) -> np.ndarray:
    """Softmin probabilities of a detection feature over the track references.

    Tracks with a reference receive p_j proportional to exp(-scale * ||g - f_j||),
    normalized over the referenced tracks; tracks without one receive the
    uniform value 1/n. The returned row is renormalized to sum to 1.
    """
    n = len(refs)
    if n == 0:
        raise ValueError("no tracks to score")
    present = [j for j, f in enumerate(refs) if f is not None]
    if not present:
        raise ValueError("no track has a reference feature")
    g = np.asarray(g, dtype=float)
    d = np.array([scale * np.linalg.norm(g - refs[j]) for j in present])
    # softmin via the usual max-shift for overflow safety
    w = np.exp(-(d - d.min()))
    p_present = w / w.sum()
    row = np.full(n, 1.0 / n)
    row[present] = p_present
    return row / row.sum()


def update_reference(track: TrackState, g: np.ndarray, params: AppearanceParams) -> TrackState:
    """Fold an assigned detection's feature into the track's reference."""
    g = np.asarray(g, dtype=float)
    if track.ref_feature is None:
        return replace(track, ref_feature=g, feature_count=1)
    if params.update_mode is UpdateMode.CUMULATIVE_MEAN:
        count = track.feature_count
        f = (count * track.ref_feature + g) / (count + 1)
        new_count = count + 1
    else:
        lam = params.ewma_lambda
        f = lam * track.ref_feature + (1.0 - lam) * g
        new_count = track.feature_count + 1
    if params.renormalize:
        norm = np.linalg.norm(f)
        if norm == 0.0:
            raise ValueError("degenerate feature average")
        f = f / norm
    return replace(track, ref_feature=f, feature_count=new_count)
