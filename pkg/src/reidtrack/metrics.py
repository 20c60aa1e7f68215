"""CLEAR MOT evaluation: MOTA, MOTP, FP, FN and ID switches."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .io import GTRecord
from .tracker import FrameOutput
from .types import BBox

__all__ = ["EvalReport", "iou", "evaluate", "format_report", "write_report"]


@dataclass(frozen=True)
class EvalReport:
    mota: float
    motp: float
    fp: int
    fn: int
    id_switches: int
    gt_total: int
    matches_total: int

    def __post_init__(self):
        for name in ("fp", "fn", "id_switches", "gt_total", "matches_total"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.gt_total > 0:
            expected = 1.0 - (self.fp + self.fn + self.id_switches) / self.gt_total
            if abs(self.mota - expected) > 1e-12:
                raise ValueError("mota inconsistent with its counters")

    @classmethod
    def from_counts(
        cls,
        fp: int,
        fn: int,
        id_switches: int,
        gt_total: int,
        matches_total: int = 0,
        motp: float = 0.0,
    ) -> "EvalReport":
        if gt_total <= 0:
            raise ValueError("empty ground truth")
        mota = 1.0 - (fp + fn + id_switches) / gt_total
        return cls(mota, motp, fp, fn, id_switches, gt_total, matches_total)


def iou(a: BBox, b: BBox) -> float:
    """Intersection area over union area of two boxes."""
    ix = min(a.cx + a.w / 2, b.cx + b.w / 2) - max(a.left, b.left)
    iy = min(a.cy + a.h / 2, b.cy + b.h / 2) - max(a.top, b.top)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    union = a.w * a.h + b.w * b.h - inter
    return inter / union


def evaluate(
    gt: Sequence[GTRecord],
    hyp: Sequence[FrameOutput],
    iou_threshold: float = 0.5,
) -> EvalReport:
    """CLEAR MOT bookkeeping over one sequence.

    Per frame: previous correspondences still valid at the IoU threshold are
    carried over, remaining pairs are matched by Hungarian assignment
    maximizing total IoU, and a ground-truth object matched to a different
    hypothesis id than its most recent match counts one ID switch.
    """
    if not gt:
        raise ValueError("empty ground truth")
    if not (0.0 < iou_threshold < 1.0):
        raise ValueError("iou_threshold must lie in (0, 1)")

    gt_frames: Dict[int, Dict[int, BBox]] = {}
    for rec in gt:
        gt_frames.setdefault(rec.frame, {})[rec.gt_id] = rec.box
    hyp_frames: Dict[int, Dict[int, BBox]] = {}
    for out in hyp:
        hyp_frames.setdefault(out.frame, {}).update(dict(out.entries))

    fp = fn = switches = gt_total = matches_total = 0
    iou_sum = 0.0
    last_match: Dict[int, int] = {}  # gt id -> most recent hypothesis id
    prev_corr: Dict[int, int] = {}  # correspondences from the previous frame

    for frame in sorted(set(gt_frames) | set(hyp_frames)):
        gboxes = gt_frames.get(frame, {})
        hboxes = hyp_frames.get(frame, {})
        gt_total += len(gboxes)

        corr: Dict[int, int] = {}
        frame_iou: Dict[int, float] = {}
        for gid, hid in prev_corr.items():
            if gid in gboxes and hid in hboxes:
                ov = iou(gboxes[gid], hboxes[hid])
                if ov >= iou_threshold:
                    corr[gid] = hid
                    frame_iou[gid] = ov

        free_g = [gid for gid in gboxes if gid not in corr]
        used_h = set(corr.values())
        free_h = [hid for hid in hboxes if hid not in used_h]
        if free_g and free_h:
            overlap = np.array(
                [[iou(gboxes[g], hboxes[h]) for h in free_h] for g in free_g]
            )
            cost = np.where(overlap >= iou_threshold, -overlap, 0.0)
            rows, cols = linear_sum_assignment(cost)
            for r, c in zip(rows, cols):
                if overlap[r, c] >= iou_threshold:
                    corr[free_g[r]] = free_h[c]
                    frame_iou[free_g[r]] = overlap[r, c]

        for gid, hid in corr.items():
            if gid in last_match and last_match[gid] != hid:
                switches += 1
            last_match[gid] = hid
            matches_total += 1
            iou_sum += frame_iou[gid]

        fn += len(gboxes) - len(corr)
        fp += len(hboxes) - len(corr)
        prev_corr = corr

    motp = iou_sum / matches_total if matches_total else 0.0
    return EvalReport.from_counts(fp, fn, switches, gt_total, matches_total, motp)


def format_report(report: EvalReport) -> str:
    """Fixed-order key=value rendering, one key per line."""
    return (
        f"mota={report.mota:.3f}\n"
        f"motp={report.motp:.3f}\n"
        f"fp={report.fp}\n"
        f"fn={report.fn}\n"
        f"idsw={report.id_switches}\n"
        f"gt={report.gt_total}\n"
    )


def write_report(path, report: EvalReport) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_report(report))
