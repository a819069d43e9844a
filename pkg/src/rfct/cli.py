"""Command-line entry points.

::

    rfct track SEQ_DIR [--init x,y,w,h] [--config FILE] [--map KIND] [-o OUT]
    rfct eval PRED GT [-o OUT.json]
    rfct selftest [--scales S] [--iterations N] [--map KIND]

Exit codes: 0 success, 1 self-test failure, 2 unreadable input images,
3 bad configuration, 4 mismatched or empty box files.
"""

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .config import TrackerConfig, dump_config, load_config
from .errors import ConfigError, TrackingError
from .evaluation import BoundingBox, SequenceResult, evaluate, iou, read_boxes, write_boxes
from .spatial_map import MAP_KINDS
from .synthetic import moving_square
from .tracker import run_sequence

__all__ = ["main", "list_frames", "load_frame"]

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_IMAGES = 2
EXIT_CONFIG = 3
EXIT_BOXES = 4

IMAGE_SUFFIXES = (".jpg", ".jpeg", ".png")

log = logging.getLogger("rfct")


class InputError(Exception):
    """Unreadable frames; mapped to exit code 2."""


def list_frames(seq_dir):
    """Image files of a sequence in lexicographic order.

    Looks in ``seq_dir/img`` first (the OTB layout), then ``seq_dir``.
    """
    seq_dir = Path(seq_dir)
    for d in (seq_dir / "img", seq_dir):
        if d.is_dir():
            files = sorted(p for p in d.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
            if files:
                return files
    raise InputError(f"no JPEG or PNG frames found in {seq_dir}")


def load_frame(path):
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"))
    except (OSError, UnidentifiedImageError) as exc:
        raise InputError(f"cannot read image {path}: {exc}") from exc


def _parse_box(text):
    parts = [p for p in text.replace(",", " ").split() if p]
    try:
        x, y, w, h = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,w,h, got {text!r}") from None
    # 1-indexed on the command line, as in box files
    return BoundingBox(x - 1.0, y - 1.0, w, h)


def _build_config(args):
    cfg = load_config(args.config) if args.config else TrackerConfig()
    changes = {}
    if getattr(args, "map", None):
        changes["map_kind"] = args.map
    if getattr(args, "scales", None) is not None:
        changes["scale_s"] = args.scales
    if getattr(args, "iterations", None) is not None:
        changes["iterations"] = args.iterations
    return cfg.replace(**changes) if changes else cfg


def cmd_track(args):
    cfg = _build_config(args)
    if args.dump_config:
        Path(args.dump_config).write_text(dump_config(cfg))
    frames = list_frames(args.sequence)
    init = args.init
    if init is None:
        gt = Path(args.sequence) / "groundtruth_rect.txt"
        if not gt.is_file():
            raise InputError("no --init box given and no groundtruth_rect.txt to take it from")
        init = read_boxes(gt)[0]

    start = time.perf_counter()
    try:
        boxes = run_sequence((load_frame(p) for p in frames), init, cfg)
    except TrackingError as exc:
        if isinstance(exc.__cause__, InputError):
            raise exc.__cause__
        partial = getattr(exc, "partial", None)
        if partial and args.output:
            write_boxes(args.output, partial)
        raise
    elapsed = time.perf_counter() - start

    if args.output:
        write_boxes(args.output, boxes)
    else:
        for b in boxes:
            print(f"{b.x + 1.0:.4f},{b.y + 1.0:.4f},{b.w:.4f},{b.h:.4f}")
    log.info("%d frames in %.2f s (%.1f fps)", len(boxes), elapsed, len(boxes) / max(elapsed, 1e-9))
    return EXIT_OK


def cmd_eval(args):
    pred = read_boxes(args.pred)
    gt = read_boxes(args.gt)
    if not pred or not gt or len(pred) != len(gt):
        print(f"error: {len(pred)} predicted vs {len(gt)} ground-truth boxes", file=sys.stderr)
        return EXIT_BOXES
    try:
        metrics = evaluate(SequenceResult(pred, gt, Path(args.gt).parent.name))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOXES
    text = json.dumps(metrics, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    print(f"dp20 {metrics['dp20']:.4f}  op50 {metrics['op50']:.4f}  auc {metrics['auc']:.4f}")
    return EXIT_OK


def cmd_selftest(args):
    cfg = _build_config(args)
    seq = moving_square(n_frames=args.frames, seed=args.seed)
    start = time.perf_counter()
    boxes = run_sequence(seq.frames, seq.boxes[0], cfg)
    elapsed = time.perf_counter() - start
    mean_iou = float(np.mean([iou(p, g) for p, g in zip(boxes, seq.boxes)]))
    metrics = evaluate(SequenceResult(boxes, seq.boxes, "synthetic"))
    ok = mean_iou > 0.5
    print(
        f"selftest {'pass' if ok else 'FAIL'}: mean IoU {mean_iou:.3f}, dp20 {metrics['dp20']:.3f}, "
        f"op50 {metrics['op50']:.3f}, auc {metrics['auc']:.3f}, {len(boxes)} frames in {elapsed:.2f} s"
    )
    return EXIT_OK if ok else EXIT_SELFTEST


def _add_tuning(p):
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--map", choices=MAP_KINDS, help="spatial map variant")
    p.add_argument("--scales", type=int, help="number of pyramid levels (odd)")
    p.add_argument("--iterations", type=int, help="ADMM iterations per frame")


def build_parser():
    parser = argparse.ArgumentParser(prog="rfct", description="Region-filtering correlation tracker")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("track", help="track a target through an image sequence")
    p.add_argument("sequence", help="directory of frames (or containing img/)")
    p.add_argument("--init", type=_parse_box, help="initial box x,y,w,h (1-indexed)")
    p.add_argument("-o", "--output", help="box file to write (stdout when omitted)")
    p.add_argument("--dump-config", metavar="FILE", help="write the effective config")
    _add_tuning(p)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("eval", help="score a box file against ground truth")
    p.add_argument("pred")
    p.add_argument("gt")
    p.add_argument("-o", "--output", help="JSON file for the metrics and curves")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("selftest", help="track a synthetic moving square")
    _add_tuning(p)
    p.add_argument("--frames", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IMAGES
    except (OSError, ValueError) as exc:
        if args.command == "eval":
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BOXES
        raise


if __name__ == "__main__":
    sys.exit(main())
