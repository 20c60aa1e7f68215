"""MOTChallenge-style file I/O: detections, ground truth, feature sidecars, results.

Boxes are top-left based on disk and center based in memory; the conversion
lives here and nowhere else.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .types import BBox, Detection, normalize_feature

__all__ = [
    "GTRecord",
    "SequenceData",
    "parse_detections",
    "parse_ground_truth",
    "parse_results",
    "load_features",
    "write_results",
    "write_detections",
    "write_ground_truth",
    "write_features",
]


@dataclass(frozen=True)
class GTRecord:
    """One ground-truth annotation."""

    frame: int
    gt_id: int
    box: BBox
    visibility: float = 1.0


@dataclass(frozen=True)
class SequenceData:
    """Detections (and optionally ground truth) for one sequence."""

    detections: tuple
    ground_truth: Optional[tuple] = None
    frame_count: int = 0
    frame_rate: float = 30.0

    def __post_init__(self):
        dets = tuple(
            sorted(self.detections, key=lambda d: (d.frame, d.index_in_frame))
        )
        object.__setattr__(self, "detections", dets)
        if self.ground_truth is not None:
            gt = tuple(sorted(self.ground_truth, key=lambda g: (g.frame, g.gt_id)))
            object.__setattr__(self, "ground_truth", gt)
        if self.frame_count == 0 and dets:
            object.__setattr__(self, "frame_count", max(d.frame for d in dets))

    def detections_by_frame(self) -> Dict[int, List[Detection]]:
        by_frame: Dict[int, List[Detection]] = {}
        for d in self.detections:
            by_frame.setdefault(d.frame, []).append(d)
        return by_frame


def _split_line(line: str, n_fields: int, path: str, lineno: int) -> List[str]:
    parts = [p.strip() for p in line.strip().split(",")]
    if len(parts) != n_fields:
        raise ValueError(
            f"{path}:{lineno}: expected {n_fields} comma-separated fields, got {len(parts)}"
        )
    return parts


def _parse_box(parts: Sequence[str], path: str, lineno: int) -> BBox:
    try:
        left, top, w, h = (float(p) for p in parts)
    except ValueError:
        raise ValueError(f"{path}:{lineno}: malformed box fields {parts!r}") from None
    if w <= 0 or h <= 0:
        raise ValueError(f"{path}:{lineno}: non-positive box {w}x{h}")
    return BBox.from_ltwh(left, top, w, h)


def parse_detections(path, conf_threshold: float = 0.0) -> List[Detection]:
    """Parse a MOTChallenge det.txt file into center-form detections.

    index_in_frame follows file line order within each frame and is assigned
    before confidence filtering, so feature sidecars keyed on it stay valid
    for any threshold.
    """
    detections: List[Detection] = []
    counters: Dict[int, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = _split_line(line, 10, str(path), lineno)
            try:
                frame = int(parts[0])
                conf = float(parts[6])
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: malformed frame/confidence fields"
                ) from None
            if frame < 0:
                raise ValueError(f"{path}:{lineno}: negative frame number")
            box = _parse_box(parts[2:6], str(path), lineno)
            idx = counters.get(frame, 0)
            counters[frame] = idx + 1
            if conf < conf_threshold:
                continue
            detections.append(Detection(frame, idx, box, conf))
    detections.sort(key=lambda d: (d.frame, d.index_in_frame))
    return detections


def parse_ground_truth(path, class_whitelist: frozenset = frozenset({1})) -> List[GTRecord]:
    """Parse a MOTChallenge gt.txt file, keeping active pedestrian entries."""
    records: List[GTRecord] = []
    seen = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = _split_line(line, 9, str(path), lineno)
            try:
                frame = int(parts[0])
                gt_id = int(parts[1])
                flag = int(parts[6])
                cls = int(parts[7])
                visibility = float(parts[8])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed ground-truth fields") from None
            if flag == 0 or cls not in class_whitelist:
                continue
            box = _parse_box(parts[2:6], str(path), lineno)
            key = (frame, gt_id)
            if key in seen:
                raise ValueError(
                    f"{path}:{lineno}: duplicate ground-truth identity in frame "
                    f"(frame {frame}, id {gt_id})"
                )
            seen.add(key)
            records.append(GTRecord(frame, gt_id, box, visibility))
    records.sort(key=lambda g: (g.frame, g.gt_id))
    return records


def parse_results(path) -> List[Tuple[int, int, BBox]]:
    """Parse a results file written by write_results: (frame, track_id, box)."""
    rows: List[Tuple[int, int, BBox]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = _split_line(line, 10, str(path), lineno)
            try:
                frame = int(parts[0])
                track_id = int(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed frame/id fields") from None
            if track_id < 1:
                raise ValueError(f"{path}:{lineno}: non-positive track id")
            box = _parse_box(parts[2:6], str(path), lineno)
            rows.append((frame, track_id, box))
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def load_features(path, detections: Sequence[Detection]) -> List[Detection]:
    """Attach sidecar features to detections, keyed by (frame, index_in_frame).

    Features are L2-normalized on load. Detections without a feature line
    keep feature = None.
    """
    by_key = {(d.frame, d.index_in_frame): i for i, d in enumerate(detections)}
    out = list(detections)
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.strip().split()
        if len(parts) != 2 or parts[0] != "D":
            raise ValueError(f"{path}:1: expected header 'D <dim>', got {header.strip()!r}")
        try:
            dim = int(parts[1])
        except ValueError:
            raise ValueError(f"{path}:1: malformed feature dimension") from None
        if dim < 1:
            raise ValueError(f"{path}:1: feature dimension must be positive")
        seen = set()
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            fields = [p.strip() for p in line.strip().split(",")]
            if len(fields) != 2 + dim:
                raise ValueError(
                    f"{path}:{lineno}: expected {2 + dim} fields for dimension {dim}, "
                    f"got {len(fields)}"
                )
            try:
                frame = int(fields[0])
                idx = int(fields[1])
                values = np.array([float(v) for v in fields[2:]], dtype=float)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed feature record") from None
            key = (frame, idx)
            if key not in by_key:
                raise ValueError(
                    f"{path}:{lineno}: feature references unknown detection {key}"
                )
            if key in seen:
                raise ValueError(f"{path}:{lineno}: duplicate feature record {key}")
            seen.add(key)
            try:
                feature = normalize_feature(values)
            except ValueError as e:
                raise ValueError(f"{path}:{lineno}: {e}") from None
            i = by_key[key]
            out[i] = replace(out[i], feature=feature)
    return out


def write_results(path, rows: Iterable[Tuple[int, int, BBox]]) -> None:
    """Write tracker output in MOTChallenge result format."""
    ordered = sorted(rows, key=lambda r: (r[0], r[1]))
    with open(path, "w", encoding="utf-8") as fh:
        for frame, track_id, box in ordered:
            if track_id < 1:
                raise ValueError(f"non-positive track id {track_id}")
            fh.write(
                f"{frame},{track_id},{box.left:.2f},{box.top:.2f},"
                f"{box.w:.2f},{box.h:.2f},1,-1,-1,-1\n"
            )


def write_detections(path, detections: Sequence[Detection]) -> None:
    """Write detections in MOTChallenge det.txt format (id column = -1)."""
    ordered = sorted(detections, key=lambda d: (d.frame, d.index_in_frame))
    with open(path, "w", encoding="utf-8") as fh:
        for d in ordered:
            b = d.box
            fh.write(
                f"{d.frame},-1,{b.left:.2f},{b.top:.2f},{b.w:.2f},{b.h:.2f},"
                f"{d.confidence:.2f},-1,-1,-1\n"
            )


def write_ground_truth(path, records: Sequence[GTRecord]) -> None:
    """Write ground truth in MOTChallenge gt.txt format (flag 1, class 1)."""
    ordered = sorted(records, key=lambda g: (g.frame, g.gt_id))
    with open(path, "w", encoding="utf-8") as fh:
        for g in ordered:
            b = g.box
            fh.write(
                f"{g.frame},{g.gt_id},{b.left:.2f},{b.top:.2f},{b.w:.2f},{b.h:.2f},"
                f"1,1,{g.visibility:.2f}\n"
            )


def write_features(path, detections: Sequence[Detection], dim: Optional[int] = None) -> None:
    """Write the feature sidecar for all detections that carry a feature."""
    with_features = [d for d in detections if d.feature is not None]
    if dim is None:
        if not with_features:
            raise ValueError("cannot infer feature dimension: no detection has a feature")
        dim = len(with_features[0].feature)
    ordered = sorted(with_features, key=lambda d: (d.frame, d.index_in_frame))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"D {dim}\n")
        for d in ordered:
            if len(d.feature) != dim:
                raise ValueError(
                    f"feature dimension mismatch: expected {dim}, got {len(d.feature)}"
                )
            values = ",".join(f"{v:.8f}" for v in d.feature)
            fh.write(f"{d.frame},{d.index_in_frame},{values}\n")
