"""Per-frame association likelihood matrix over detections x (tracks + new-track)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .appearance import AppearanceParams, appearance_row
from .motion import MotionParams, mahalanobis_sq, position_log_likelihood
from .types import AssociationMatrix, Detection, TrackState

__all__ = ["Mode", "AssociationParams", "build_matrix"]


class Mode(enum.Enum):
    POS_ONLY = "posonly"
    APP_ONLY = "apponly"
    POS_APP = "posapp"


@dataclass(frozen=True)
class AssociationParams:
    mode: Mode = Mode.POS_ONLY
    gate_chi2: float = 0.0  # squared-Mahalanobis gate; 0 disables gating
    new_track_log_density: float = -18.0  # log birth/clutter density, log px^-4
    min_likelihood_floor: float = 1e-12

    def __post_init__(self):
        if not np.isfinite(self.new_track_log_density):
            raise ValueError("new_track_log_density must be finite")
        if self.gate_chi2 < 0:
            raise ValueError("gate_chi2 must be non-negative")
        if self.min_likelihood_floor < 0:
            raise ValueError("min_likelihood_floor must be non-negative")


def _uses_position(mode: Mode) -> bool:
    return mode in (Mode.POS_ONLY, Mode.POS_APP)


def _uses_appearance(mode: Mode) -> bool:
    return mode in (Mode.APP_ONLY, Mode.POS_APP)


def build_matrix(
    dets: Sequence[Detection],
    tracks: Sequence[TrackState],
    mp: MotionParams,
    ap: AppearanceParams,
    asp: AssociationParams,
    frame: Optional[int] = None,
) -> AssociationMatrix:
    """Build the normalized association matrix for one frame.

    All tracks must already be predicted to the detections' frame. Rows are
    independently normalized; gated entries get probability 0, and a row whose
    every track entry is gated puts all its mass on the new-track column.
    """
    m, n = len(dets), len(tracks)
    if frame is None:
        frame = dets[0].frame if dets else 0
    scores = np.full((m, n + 1), -np.inf)
    scores[:, n] = asp.new_track_log_density

    if _uses_appearance(asp.mode):
        for det in dets:
            if det.feature is None:
                raise ValueError(
                    f"feature required by association mode {asp.mode.value} "
                    f"(detection {det.frame},{det.index_in_frame})"
                )

    any_ref = any(t.ref_feature is not None for t in tracks)
    refs = [t.ref_feature for t in tracks]
    for i, det in enumerate(dets):
        if n and _uses_appearance(asp.mode) and any_ref:
            app_log = np.log(appearance_row(det.feature, refs, ap.distance_scale))
        else:
            app_log = np.zeros(n)
        for j, track in enumerate(tracks):
            if asp.gate_chi2 > 0 and mahalanobis_sq(track, det.box, mp) > asp.gate_chi2:
                continue  # stays -inf
            s = 0.0
            if _uses_position(asp.mode):
                s += position_log_likelihood(track, det.box, mp)
            if _uses_appearance(asp.mode):
                s += app_log[j]
            scores[i, j] = s

    values = np.zeros((m, n + 1))
    for i in range(m):
        row = scores[i]
        finite = np.isfinite(row)
        shifted = np.exp(row[finite] - row[finite].max())
        shifted += asp.min_likelihood_floor
        p = np.zeros(n + 1)
        p[finite] = shifted / shifted.sum()
        values[i] = p
    return AssociationMatrix(frame=frame, values=values, track_ids=[t.id for t in tracks])
