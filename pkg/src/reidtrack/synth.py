"""Deterministic synthetic scenarios: GT tracks, noisy detections, features.

Produces the crossing / occlusion / parallel / crowd situations that stress
data association, with identity-conditioned features drawn around unit-sphere
centroids so appearance carries real identity information.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from .io import GTRecord
from .types import BBox, Detection, normalize_feature

__all__ = [
    "ScenarioKind",
    "ScenarioSpec",
    "generate",
    "occlusion_window",
    "FRAME_WIDTH",
    "FRAME_HEIGHT",
]

FRAME_WIDTH = 1920
FRAME_HEIGHT = 1080
BOX_W = 40.0
BOX_H = 100.0


class ScenarioKind(enum.Enum):
    CROSSING = "crossing"
    OCCLUSION = "occlusion"
    PARALLEL = "parallel"
    CROWD = "crowd"


@dataclass(frozen=True)
class ScenarioSpec:
    kind: ScenarioKind
    frames: int = 120
    det_noise_pos: float = 2.0  # sigma, px
    det_dropout: float = 0.0
    clutter_rate: float = 0.0  # expected false detections per frame
    feature_dim: int = 16
    feature_noise: float = 0.05
    identity_separation: float = 0.8  # min pairwise centroid distance on the sphere
    seed: int = 0
    num_identities: int = 2  # used by Crowd; fixed at 2 for the other kinds
    occlusion_frames: int = 15  # length of the hidden window (Occlusion only)

    def __post_init__(self):
        if self.frames < 2:
            raise ValueError("frames must be at least 2")
        if not (0.0 <= self.det_dropout <= 1.0):
            raise ValueError("det_dropout must lie in [0, 1]")
        if not (0.0 <= self.identity_separation <= 2.0):
            raise ValueError("identity_separation must lie in [0, 2]")
        if self.det_noise_pos < 0 or self.feature_noise < 0 or self.clutter_rate < 0:
            raise ValueError("noise and clutter parameters must be non-negative")
        if self.feature_dim < 1:
            raise ValueError("feature_dim must be positive")
        if self.num_identities < 1:
            raise ValueError("num_identities must be positive")
        if self.occlusion_frames < 1:
            raise ValueError("occlusion_frames must be positive")


def _clamp_center(cx: float, cy: float) -> Tuple[float, float]:
    cx = min(max(cx, BOX_W / 2), FRAME_WIDTH - BOX_W / 2)
    cy = min(max(cy, BOX_H / 2), FRAME_HEIGHT - BOX_H / 2)
    return cx, cy


def _linear_path(start: Tuple[float, float], vel: Tuple[float, float], frames: int):
    for t in range(frames):
        cx, cy = _clamp_center(start[0] + vel[0] * t, start[1] + vel[1] * t)
        yield BBox(cx, cy, BOX_W, BOX_H)


def _paths(spec: ScenarioSpec, rng: np.random.Generator) -> List[List[BBox]]:
    T = spec.frames
    mid = (T - 1) / 2.0
    if spec.kind is ScenarioKind.CROSSING:
        # oblique crossing: co-moving in x, y paths swap slowly and intersect
        # at mid-sequence, where position alone is maximally ambiguous
        vx = min(8.0, (FRAME_WIDTH - 720.0) / (T - 1))
        vy = 160.0 / (T - 1)
        a = [(360.0 + vx * t, 500.0 + vy * t) for t in range(T)]
        b = [(360.0 + vx * t, 660.0 - vy * t) for t in range(T)]
        return [
            [BBox(*_clamp_center(x, y), BOX_W, BOX_H) for x, y in a],
            [BBox(*_clamp_center(x, y), BOX_W, BOX_H) for x, y in b],
        ]
    if spec.kind is ScenarioKind.OCCLUSION:
        # fast symmetric X-crossing; identity 0 is hidden around the meeting
        # point while identity 1 passes through its predicted path
        vx = min(9.0, (FRAME_WIDTH / 2 - 300.0) / mid)
        vy = 0.5
        a = [(960.0 + vx * (t - mid), 540.0 + vy * (t - mid)) for t in range(T)]
        b = [(960.0 - vx * (t - mid), 540.0 - vy * (t - mid)) for t in range(T)]
        return [
            [BBox(*_clamp_center(x, y), BOX_W, BOX_H) for x, y in a],
            [BBox(*_clamp_center(x, y), BOX_W, BOX_H) for x, y in b],
        ]
    if spec.kind is ScenarioKind.PARALLEL:
        vx = min(8.0, (FRAME_WIDTH - 720.0) / (T - 1))
        return [
            list(_linear_path((360.0, 500.0), (vx, 0.0), T)),
            list(_linear_path((360.0, 560.0), (vx, 0.0), T)),
        ]
    # Crowd: random linear paths, endpoints sampled inside the safe rect
    paths = []
    lo = np.array([BOX_W / 2, BOX_H / 2])
    hi = np.array([FRAME_WIDTH - BOX_W / 2, FRAME_HEIGHT - BOX_H / 2])
    for _ in range(spec.num_identities):
        start = rng.uniform(lo, hi)
        end = rng.uniform(lo, hi)
        vel = (end - start) / (T - 1)
        paths.append(list(_linear_path(tuple(start), tuple(vel), T)))
    return paths


def _identity_centroids(spec: ScenarioSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    centroids: List[np.ndarray] = []
    attempts = 0
    max_attempts = 1000 * n
    while len(centroids) < n:
        if attempts >= max_attempts:
            raise ValueError(
                f"cannot place identity centroids: separation {spec.identity_separation} "
                f"infeasible for {n} identities in dimension {spec.feature_dim}"
            )
        attempts += 1
        c = normalize_feature(rng.standard_normal(spec.feature_dim))
        if all(np.linalg.norm(c - prev) >= spec.identity_separation for prev in centroids):
            centroids.append(np.asarray(c))
    return np.stack(centroids)


def occlusion_window(spec: ScenarioSpec) -> range:
    """1-based frame numbers during which identity 0 is hidden."""
    start = max(0, spec.frames // 2 - spec.occlusion_frames // 2)
    stop = min(spec.frames, start + spec.occlusion_frames)
    return range(start + 1, stop + 1)


def generate(spec: ScenarioSpec) -> Tuple[List[GTRecord], List[Detection]]:
    """Generate (ground truth, detections-with-features) for one scenario.

    Fully determined by spec.seed. Frames are 1-based on output; identity 0
    is the one hidden during the occlusion window.
    """
    rng = np.random.default_rng(spec.seed & ((1 << 64) - 1))
    paths = _paths(spec, rng)
    n_ids = len(paths)
    centroids = _identity_centroids(spec, n_ids, rng)
    hidden = (
        {f - 1 for f in occlusion_window(spec)}
        if spec.kind is ScenarioKind.OCCLUSION
        else set()
    )

    gt: List[GTRecord] = []
    dets: List[Detection] = []
    for t in range(spec.frames):
        frame = t + 1
        idx = 0
        for ident in range(n_ids):
            box = paths[ident][t]
            occluded = ident == 0 and t in hidden
            gt.append(
                GTRecord(frame, ident + 1, box, visibility=0.0 if occluded else 1.0)
            )
            if occluded:
                continue
            if spec.det_dropout > 0 and rng.uniform() < spec.det_dropout:
                continue
            noise = spec.det_noise_pos * rng.standard_normal(2)
            feature = normalize_feature(
                centroids[ident] + spec.feature_noise * rng.standard_normal(spec.feature_dim)
            )
            dets.append(
                Detection(
                    frame,
                    idx,
                    BBox(box.cx + noise[0], box.cy + noise[1], box.w, box.h),
                    confidence=1.0,
                    feature=feature,
                )
            )
            idx += 1
        if spec.clutter_rate > 0:
            for _ in range(int(rng.poisson(spec.clutter_rate))):
                cx = rng.uniform(BOX_W / 2, FRAME_WIDTH - BOX_W / 2)
                cy = rng.uniform(BOX_H / 2, FRAME_HEIGHT - BOX_H / 2)
                dets.append(
                    Detection(frame, idx, BBox(cx, cy, BOX_W, BOX_H), confidence=0.5)
                )
                idx += 1
    return gt, dets
