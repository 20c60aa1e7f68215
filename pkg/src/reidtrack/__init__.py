"""Multi-pedestrian tracking engine with appearance-aware data association."""

from .types import (
    AssociationMatrix,
    BBox,
    Detection,
    Particle,
    TrackState,
    TrackStatus,
    normalize_feature,
)

__all__ = [
    "AssociationMatrix",
    "BBox",
    "Detection",
    "Particle",
    "TrackState",
    "TrackStatus",
    "normalize_feature",
]

__version__ = "0.1.0"
