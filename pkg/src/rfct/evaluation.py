"""One-pass evaluation metrics: precision (DP), success (OP) and AUC.

Boxes are ``(x, y, w, h)`` with a 0-indexed top-left corner.  Box files use
the benchmark convention of 1-indexed corners; :func:`read_boxes` and
:func:`write_boxes` convert.
"""

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "BoundingBox",
    "SequenceResult",
    "center_error",
    "iou",
    "precision_curve",
    "success_curve",
    "evaluate",
    "read_boxes",
    "write_boxes",
    "PRECISION_THRESHOLDS",
    "SUCCESS_THRESHOLDS",
]

PRECISION_THRESHOLDS = np.arange(51, dtype=float)
SUCCESS_THRESHOLDS = np.linspace(0.0, 1.0, 21)


@dataclass(frozen=True)
class BoundingBox:
    x: float
    y: float
    w: float
    h: float

    @classmethod
    def from_center(cls, cx, cy, w, h):
        return cls(cx - w / 2.0, cy - h / 2.0, w, h)

    @property
    def center(self):
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    @property
    def size(self):
        return (self.w, self.h)

    @property
    def valid(self):
        vals = (self.x, self.y, self.w, self.h)
        return all(math.isfinite(v) for v in vals) and self.w > 0 and self.h > 0

    def as_tuple(self):
        return (self.x, self.y, self.w, self.h)


@dataclass
class SequenceResult:
    predictions: list
    ground_truth: list
    name: str = ""

    def __post_init__(self):
        if len(self.predictions) != len(self.ground_truth):
            raise ValueError(
                f"{len(self.predictions)} predictions vs {len(self.ground_truth)} ground-truth boxes"
            )
        if not self.predictions:
            raise ValueError("a sequence result needs at least one frame")


def center_error(a, b):
    (ax, ay), (bx, by) = a.center, b.center
    return math.hypot(ax - bx, ay - by)


def iou(a, b):
    """Intersection over union of two boxes; 0 when disjoint."""
    # (x + w) - x can round past w; the overlap never exceeds either side
    iw = min(min(a.x + a.w, b.x + b.w) - max(a.x, b.x), a.w, b.w)
    ih = min(min(a.y + a.h, b.y + b.h) - max(a.y, b.y), a.h, b.h)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (a.w * a.h + b.w * b.h - inter)


def _pairs(results):
    if isinstance(results, SequenceResult):
        results = [results]
    pairs = [(p, g) for r in results for p, g in zip(r.predictions, r.ground_truth) if g.valid]
    if not pairs:
        raise ValueError("no frames with valid ground truth")
    return pairs


def precision_curve(results, thresholds=PRECISION_THRESHOLDS):
    """Fraction of frames with centre error ``<= t`` for each threshold.

    Returns ``(curve, dp20)``.  Frames whose ground truth is missing are
    skipped; an invalid prediction counts as an infinite error.
    """
    errs = np.array([center_error(p, g) if p.valid else np.inf for p, g in _pairs(results)])
    thresholds = np.asarray(thresholds, dtype=float)
    curve = (errs[None, :] <= thresholds[:, None]).mean(axis=1)
    return curve, float(np.mean(errs <= 20.0))


def success_curve(results, thresholds=SUCCESS_THRESHOLDS):
    """Fraction of frames with overlap ``>= t`` for each threshold.

    Returns ``(curve, op50, auc)`` where ``auc`` is the mean of the curve over
    the uniform threshold grid.
    """
    ious = np.array([iou(p, g) if p.valid else 0.0 for p, g in _pairs(results)])
    thresholds = np.asarray(thresholds, dtype=float)
    curve = (ious[None, :] >= thresholds[:, None]).mean(axis=1)
    return curve, float(np.mean(ious >= 0.5)), float(curve.mean())


def evaluate(results):
    """All metrics in one dictionary (the schema written by ``rfct eval``)."""
    prec, dp20 = precision_curve(results)
    succ, op50, auc = success_curve(results)
    return {"dp20": dp20, "op50": op50, "auc": auc, "precision": prec.tolist(), "success": succ.tolist()}


_SEP = re.compile(r"[,\s]+")


def read_boxes(path):
    """Parse one ``x,y,w,h`` box per line (comma, tab or space separated).

    Non-numeric entries such as ``NaN`` produce boxes that are skipped by
    the metrics.
    """
    boxes = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        fields = [f for f in _SEP.split(line) if f]
        if len(fields) != 4:
            raise ValueError(f"{path}: expected 4 values per line, got {line!r}")
        vals = []
        for f in fields:
            try:
                vals.append(float(f))
            except ValueError:
                vals.append(float("nan"))
        x, y, w, h = vals
        boxes.append(BoundingBox(x - 1.0, y - 1.0, w, h))
    return boxes


def write_boxes(path, boxes):
    lines = [f"{b.x + 1.0:.4f},{b.y + 1.0:.4f},{b.w:.4f},{b.h:.4f}" for b in boxes]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))
