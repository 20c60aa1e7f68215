"""Core value types shared across the tracking engine.

All types are immutable once constructed; constructors validate their
invariants and raise ValueError with a descriptive message on violation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "BBox",
    "Detection",
    "TrackStatus",
    "TrackState",
    "AssociationMatrix",
    "Particle",
    "normalize_feature",
]

STATE_DIM = 6  # (cx, cy, vx, vy, w, h)


def normalize_feature(values) -> np.ndarray:
    """Return a unit-norm, read-only copy of a feature vector.

    Raises ValueError on non-finite entries or the zero vector.
    """
    v = np.array(values, dtype=float)
    if v.ndim != 1:
        raise ValueError("feature must be a 1-D vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("feature contains non-finite entries")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("cannot normalize zero feature")
    v /= norm
    v.setflags(write=False)
    return v


def _frozen_array(values, shape: tuple) -> np.ndarray:
    a = np.array(values, dtype=float)
    if a.shape != shape:
        raise ValueError(f"expected array of shape {shape}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("array contains non-finite entries")
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BBox:
    """Axis-aligned bounding box in center form (pixels)."""

    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self):
        vals = (self.cx, self.cy, self.w, self.h)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"non-finite box {vals}")
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"non-positive box size {self.w}x{self.h}")

    @property
    def left(self) -> float:
        return self.cx - self.w / 2.0

    @property
    def top(self) -> float:
        return self.cy - self.h / 2.0

    @staticmethod
    def from_ltwh(left: float, top: float, w: float, h: float) -> "BBox":
        return BBox(left + w / 2.0, top + h / 2.0, w, h)


@dataclass(frozen=True, eq=False)
class Detection:
    """One detector output: box, confidence and optional appearance feature."""

    frame: int
    index_in_frame: int
    box: BBox
    confidence: float
    feature: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.frame < 0:
            raise ValueError("frame must be non-negative")
        if self.index_in_frame < 0:
            raise ValueError("index_in_frame must be non-negative")
        if not np.isfinite(self.confidence):
            raise ValueError("non-finite confidence")
        if self.feature is not None:
            f = np.array(self.feature, dtype=float)
            if f.ndim != 1:
                raise ValueError("feature must be a 1-D vector")
            if not np.all(np.isfinite(f)):
                raise ValueError("feature contains non-finite entries")
            f.setflags(write=False)
            object.__setattr__(self, "feature", f)

    def __eq__(self, other):
        if not isinstance(other, Detection):
            return NotImplemented
        if (self.frame, self.index_in_frame, self.box, self.confidence) != (
            other.frame,
            other.index_in_frame,
            other.box,
            other.confidence,
        ):
            return False
        if (self.feature is None) != (other.feature is None):
            return False
        return self.feature is None or np.array_equal(self.feature, other.feature)

    def __hash__(self):
        return hash((self.frame, self.index_in_frame, self.box))


class TrackStatus(enum.Enum):
    TENTATIVE = "tentative"
    CONFIRMED = "confirmed"
    DELETED = "deleted"


_ALLOWED_TRANSITIONS = {
    (TrackStatus.TENTATIVE, TrackStatus.CONFIRMED),
    (TrackStatus.TENTATIVE, TrackStatus.DELETED),
    (TrackStatus.CONFIRMED, TrackStatus.DELETED),
}


def status_transition_allowed(old: TrackStatus, new: TrackStatus) -> bool:
    return old == new or (old, new) in _ALLOWED_TRANSITIONS


@dataclass(frozen=True, eq=False)
class TrackState:
    """One tracked person: Kalman state plus averaged reference feature."""

    id: int
    mean: np.ndarray  # (cx, cy, vx, vy, w, h)
    cov: np.ndarray  # 6x6 symmetric positive-definite
    ref_feature: Optional[np.ndarray] = None
    feature_count: int = 0
    hits: int = 0
    misses: int = 0
    status: TrackStatus = TrackStatus.TENTATIVE

    def __post_init__(self):
        if self.id < 1:
            raise ValueError("track id must be positive")
        object.__setattr__(self, "mean", _frozen_array(self.mean, (STATE_DIM,)))
        cov = _frozen_array(self.cov, (STATE_DIM, STATE_DIM))
        if np.max(np.abs(cov - cov.T)) > 1e-9:
            raise ValueError("covariance not symmetric")
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ValueError("covariance not positive-definite") from None
        object.__setattr__(self, "cov", cov)
        if self.feature_count < 0:
            raise ValueError("feature_count must be non-negative")
        if (self.ref_feature is not None) != (self.feature_count > 0):
            raise ValueError("ref_feature present iff feature_count > 0")
        if self.ref_feature is not None:
            f = np.array(self.ref_feature, dtype=float)
            if f.ndim != 1 or not np.all(np.isfinite(f)):
                raise ValueError("invalid reference feature")
            f.setflags(write=False)
            object.__setattr__(self, "ref_feature", f)

    def __eq__(self, other):
        if not isinstance(other, TrackState):
            return NotImplemented
        if (self.id, self.feature_count, self.hits, self.misses, self.status) != (
            other.id,
            other.feature_count,
            other.hits,
            other.misses,
            other.status,
        ):
            return False
        if not (np.array_equal(self.mean, other.mean) and np.array_equal(self.cov, other.cov)):
            return False
        if (self.ref_feature is None) != (other.ref_feature is None):
            return False
        return self.ref_feature is None or np.array_equal(self.ref_feature, other.ref_feature)

    def __hash__(self):
        return hash((self.id, self.hits, self.misses, self.status))

    @property
    def box(self) -> BBox:
        return BBox(self.mean[0], self.mean[1], self.mean[4], self.mean[5])


@dataclass(frozen=True, eq=False)
class AssociationMatrix:
    """Per-frame assignment probabilities over detections x (tracks + new-track)."""

    frame: int
    values: np.ndarray  # shape (m, n + 1); final column is the new-track event
    track_ids: tuple

    def __post_init__(self):
        object.__setattr__(self, "track_ids", tuple(self.track_ids))
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[1] != len(self.track_ids) + 1:
            raise ValueError(
                f"matrix shape {v.shape} inconsistent with {len(self.track_ids)} tracks"
            )
        if v.size and (np.min(v) < 0.0 or np.max(v) > 1.0 + 1e-12):
            raise ValueError("matrix entries must lie in [0, 1]")
        if v.shape[0] and np.max(np.abs(v.sum(axis=1) - 1.0)) > 1e-9:
            raise ValueError("matrix rows must sum to 1")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def num_detections(self) -> int:
        return self.values.shape[0]

    @property
    def num_tracks(self) -> int:
        return len(self.track_ids)


@dataclass(frozen=True, eq=False)
class Particle:
    """One joint data-association hypothesis."""

    tracks: tuple
    log_weight: float
    next_id: int

    def __post_init__(self):
        object.__setattr__(self, "tracks", tuple(self.tracks))
        ids = [t.id for t in self.tracks]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate track id within particle")
        if not np.isfinite(self.log_weight):
            raise ValueError("log_weight must be finite")
        if self.next_id < 1:
            raise ValueError("next_id must be positive")
