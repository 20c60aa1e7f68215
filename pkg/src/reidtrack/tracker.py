"""Rao-Blackwellized particle filter over data-association hypotheses.

Each particle carries its own set of Kalman-tracked people; per frame the
filter samples a joint assignment of detections to (track | new-track)
columns, updates the per-track filters analytically, and resamples on
particle degeneracy.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .appearance import AppearanceParams, update_reference
from .association import AssociationParams, build_matrix
from .io import SequenceData
from .motion import MotionParams, init_track, predict, update
from .types import BBox, Detection, Particle, TrackState, TrackStatus

__all__ = ["TrackerParams", "FrameOutput", "init_particles", "step", "run_sequence"]

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class TrackerParams:
    num_particles: int = 100
    resample_ess_fraction: float = 0.5
    confirm_hits: int = 3
    delete_misses: int = 10
    rng_seed: int = 0
    deterministic: bool = False

    def __post_init__(self):
        if self.num_particles < 1:
            raise ValueError("num_particles must be at least 1")
        if not (0.0 < self.resample_ess_fraction <= 1.0):
            raise ValueError("resample_ess_fraction must lie in (0, 1]")
        if self.confirm_hits < 1 or self.delete_misses < 1:
            raise ValueError("confirm_hits and delete_misses must be positive")


@dataclass(frozen=True)
class FrameOutput:
    """Confirmed track boxes of the selected particle for one frame."""

    frame: int
    entries: tuple  # ((track_id, BBox), ...)

    def __post_init__(self):
        entries = tuple(self.entries)
        ids = [tid for tid, _ in entries]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate track id in frame output")
        object.__setattr__(self, "entries", entries)


def init_particles(tp: TrackerParams) -> List[Particle]:
    return [Particle(tracks=(), log_weight=0.0, next_id=1) for _ in range(tp.num_particles)]


def _particle_rng(tp: TrackerParams, particle_index: int, frame: int) -> np.random.Generator:
    return np.random.default_rng(
        [tp.rng_seed & _SEED_MASK, particle_index & _SEED_MASK, frame]
    )


def _advance_particle(
    particle: Particle,
    dets: Sequence[Detection],
    frame: int,
    dt: float,
    mp: MotionParams,
    ap: AppearanceParams,
    asp: AssociationParams,
    tp: TrackerParams,
    rng: np.random.Generator,
) -> Particle:
    predicted = [predict(t, mp, dt) for t in particle.tracks]
    n = len(predicted)
    matrix = build_matrix(dets, predicted, mp, ap, asp, frame)

    # sequential assignment sweep: sample each row over still-available columns
    available = np.ones(n + 1, dtype=bool)  # final new-track column is never consumed
    assigned: Dict[int, int] = {}  # track index -> detection index
    log_weight = particle.log_weight
    next_id = particle.next_id
    new_tracks: List[TrackState] = []
    for i, det in enumerate(dets):
        row = matrix.values[i]
        p = np.where(available, row, 0.0)
        mass = p.sum()
        log_weight += float(np.log(mass))
        p = p / mass
        if tp.deterministic:
            j = int(np.argmax(p))
        else:
            j = int(rng.choice(n + 1, p=p))
        if j < n:
            available[j] = False
            assigned[j] = i
        else:
            t = init_track(det, mp, next_id)
            next_id += 1
            if t.hits >= tp.confirm_hits:
                t = replace(t, status=TrackStatus.CONFIRMED)
            new_tracks.append(t)

    tracks: List[TrackState] = []
    for j, track in enumerate(predicted):
        if j in assigned:
            det = dets[assigned[j]]
            t = update(track, det.box, mp)
            t = replace(t, hits=t.hits + 1, misses=0)
            if det.feature is not None:
                t = update_reference(t, det.feature, ap)
            if t.status is TrackStatus.TENTATIVE and t.hits >= tp.confirm_hits:
                t = replace(t, status=TrackStatus.CONFIRMED)
            tracks.append(t)
        else:
            t = replace(track, misses=track.misses + 1)
            if t.misses >= tp.delete_misses:
                continue  # deleted; dropped from the particle
            tracks.append(t)
    tracks.extend(new_tracks)
    return Particle(tracks=tuple(tracks), log_weight=log_weight, next_id=next_id)


def _effective_sample_size(log_weights: np.ndarray) -> float:
    w = np.exp(log_weights - log_weights.max())
    w = w / w.sum()
    return float(1.0 / np.sum(w**2))


def _systematic_resample(
    particles: List[Particle], tp: TrackerParams, frame: int
) -> List[Particle]:
    n = len(particles)
    log_w = np.array([p.log_weight for p in particles])
    w = np.exp(log_w - log_w.max())
    w = w / w.sum()
    if tp.deterministic:
        u0 = 0.5 / n
    else:
        rng = np.random.default_rng([tp.rng_seed & _SEED_MASK, frame, 0x5E5A])
        u0 = rng.uniform(0.0, 1.0 / n)
    points = u0 + np.arange(n) / n
    indices = np.searchsorted(np.cumsum(w), points)
    indices = np.clip(indices, 0, n - 1)
    return [replace(particles[k], log_weight=0.0) for k in indices]


def step(
    particles: List[Particle],
    dets: Sequence[Detection],
    frame: int,
    mp: MotionParams,
    ap: AppearanceParams,
    asp: AssociationParams,
    tp: TrackerParams,
    dt: float = 1.0,
) -> Tuple[List[Particle], FrameOutput]:
    """Advance the filter by one frame; returns the new particle set and the
    confirmed-track output of the highest-weight particle."""
    if not particles:
        raise ValueError("particle list must be non-empty")
    for d in dets:
        if d.frame != frame:
            raise ValueError(f"detection from frame {d.frame} passed to step({frame})")
    ordered = sorted(dets, key=lambda d: (-d.confidence, d.index_in_frame))

    particles = [
        _advance_particle(
            p, ordered, frame, dt, mp, ap, asp, tp, _particle_rng(tp, idx, frame)
        )
        for idx, p in enumerate(particles)
    ]

    best = max(particles, key=lambda p: p.log_weight)
    entries = tuple(
        (t.id, t.box)
        for t in sorted(best.tracks, key=lambda t: t.id)
        if t.status is TrackStatus.CONFIRMED
    )
    output = FrameOutput(frame=frame, entries=entries)

    if len(particles) > 1:
        log_w = np.array([p.log_weight for p in particles])
        if _effective_sample_size(log_w) < tp.resample_ess_fraction * len(particles):
            particles = _systematic_resample(particles, tp, frame)
    return particles, output


def run_sequence(
    seq: SequenceData,
    mp: MotionParams,
    ap: AppearanceParams,
    asp: AssociationParams,
    tp: TrackerParams,
) -> List[FrameOutput]:
    """Fold the filter over all frames of a sequence, one frame at a time."""
    by_frame = seq.detections_by_frame()
    if seq.frame_count <= 0:
        return []
    particles = init_particles(tp)
    outputs: List[FrameOutput] = []
    for frame in range(1, seq.frame_count + 1):
        particles, out = step(
            particles, by_frame.get(frame, []), frame, mp, ap, asp, tp
        )
        outputs.append(out)
    return outputs


def output_rows(outputs: Sequence[FrameOutput]):
    """Flatten frame outputs into (frame, track_id, box) rows for io.write_results."""
    for out in outputs:
        for track_id, box in out.entries:
            yield out.frame, track_id, box
