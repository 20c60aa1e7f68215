"""Command-line entry points: track, eval, synth, compare.

Exit codes: 0 success, 1 internal error, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import io, metrics, synth, tracker
from .association import Mode
from .config import RunConfig, load_config
from .tracker import FrameOutput

__all__ = ["main", "entry"]


class InputError(Exception):
    """User-facing input problem; mapped to exit code 2."""


def _load_sequence(det_path, features_path) -> io.SequenceData:
    dets = io.parse_detections(det_path)
    if features_path is not None:
        dets = io.load_features(features_path, dets)
    return io.SequenceData(detections=tuple(dets))


def _apply_overrides(cfg: RunConfig, mode: Mode, args) -> RunConfig:
    assoc = replace(cfg.association, mode=mode)
    tp = cfg.tracker
    if args.seed is not None:
        tp = replace(tp, rng_seed=args.seed)
    if getattr(args, "deterministic", False):
        tp = replace(tp, deterministic=True)
    return replace(cfg, association=assoc, tracker=tp)


def _require_features(mode: Mode, features_path) -> None:
    if mode in (Mode.APP_ONLY, Mode.POS_APP) and features_path is None:
        raise InputError(f"feature required: mode {mode.value} needs --features")


def cmd_track(args) -> int:
    cfg = load_config(args.config)
    mode = Mode(args.mode)
    _require_features(mode, args.features)
    cfg = _apply_overrides(cfg, mode, args)
    seq = _load_sequence(args.det, args.features)
    outputs = tracker.run_sequence(
        seq, cfg.motion, cfg.appearance, cfg.association, cfg.tracker
    )
    io.write_results(args.out, tracker.output_rows(outputs))
    return 0


def _results_to_outputs(rows) -> List[FrameOutput]:
    by_frame: Dict[int, list] = {}
    for frame, track_id, box in rows:
        by_frame.setdefault(frame, []).append((track_id, box))
    return [
        FrameOutput(frame=f, entries=tuple(entries))
        for f, entries in sorted(by_frame.items())
    ]


def cmd_eval(args) -> int:
    gt = io.parse_ground_truth(args.gt)
    hyp = _results_to_outputs(io.parse_results(args.res))
    report = metrics.evaluate(gt, hyp, iou_threshold=args.iou)
    sys.stdout.write(metrics.format_report(report))
    report_path = args.report if args.report else str(args.res) + ".metrics"
    metrics.write_report(report_path, report)
    return 0


def cmd_synth(args) -> int:
    spec = synth.ScenarioSpec(
        kind=synth.ScenarioKind(args.kind),
        frames=args.frames,
        det_noise_pos=args.det_noise,
        det_dropout=args.dropout,
        clutter_rate=args.clutter,
        feature_dim=args.feature_dim,
        feature_noise=args.feature_noise,
        identity_separation=args.separation,
        seed=args.seed,
        num_identities=args.num_identities,
        occlusion_frames=args.occlusion_frames,
    )
    gt, dets = synth.generate(spec)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    io.write_detections(out_dir / "det.txt", dets)
    io.write_ground_truth(out_dir / "gt.txt", gt)
    io.write_features(out_dir / "features.txt", dets, dim=spec.feature_dim)
    return 0


def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    gt = io.parse_ground_truth(args.gt)
    modes = [(Mode.POS_ONLY, None)]
    if args.features is not None:
        modes += [(Mode.APP_ONLY, args.features), (Mode.POS_APP, args.features)]
    if args.hist_features is not None:
        modes.append((Mode.POS_APP, args.hist_features))

    print(f"{'mode':<14}{'mota':>8}{'motp':>8}{'fp':>8}{'fn':>8}{'idsw':>8}")
    for i, (mode, feats) in enumerate(modes):
        seq = _load_sequence(args.det, feats)
        totals = {"mota": 0.0, "motp": 0.0, "fp": 0.0, "fn": 0.0, "idsw": 0.0}
        for seed in range(args.seeds):
            run_cfg = cfg
            run_cfg = replace(
                run_cfg,
                association=replace(run_cfg.association, mode=mode),
                tracker=replace(
                    run_cfg.tracker,
                    rng_seed=seed,
                    deterministic=run_cfg.tracker.deterministic or args.deterministic,
                ),
            )
            outputs = tracker.run_sequence(
                seq, run_cfg.motion, run_cfg.appearance, run_cfg.association, run_cfg.tracker
            )
            report = metrics.evaluate(gt, outputs, iou_threshold=args.iou)
            totals["mota"] += report.mota
            totals["motp"] += report.motp
            totals["fp"] += report.fp
            totals["fn"] += report.fn
            totals["idsw"] += report.id_switches
        n = args.seeds
        label = mode.value if i < 3 else "posapp-hist"
        print(
            f"{label:<14}{totals['mota'] / n:>8.3f}{totals['motp'] / n:>8.3f}"
            f"{totals['fp'] / n:>8.1f}{totals['fn'] / n:>8.1f}{totals['idsw'] / n:>8.1f}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reidtrack",
        description="Multi-pedestrian tracking with appearance-aware data association.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("track", help="run the tracker over a detection file")
    p.add_argument("--det", required=True)
    p.add_argument("--features", default=None)
    p.add_argument("--mode", required=True, choices=[m.value for m in Mode])
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--deterministic", action="store_true")
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("eval", help="CLEAR MOT evaluation of a results file")
    p.add_argument("--gt", required=True)
    p.add_argument("--res", required=True)
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="generate a synthetic scenario")
    p.add_argument("--kind", required=True, choices=[k.value for k in synth.ScenarioKind])
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--frames", type=int, default=120)
    p.add_argument("--det-noise", type=float, default=2.0)
    p.add_argument("--dropout", type=float, default=0.0)
    p.add_argument("--clutter", type=float, default=0.0)
    p.add_argument("--feature-dim", type=int, default=16)
    p.add_argument("--feature-noise", type=float, default=0.05)
    p.add_argument("--separation", type=float, default=0.8)
    p.add_argument("--num-identities", type=int, default=2)
    p.add_argument("--occlusion-frames", type=int, default=15)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("compare", help="run all applicable modes over several seeds")
    p.add_argument("--det", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--features", default=None)
    p.add_argument("--hist-features", default=None)
    p.add_argument("--config", required=True)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--deterministic", action="store_true")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        return args.func(args)
    except (InputError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # pragma: no cover - internal failure path
        print(f"internal error: {e}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
