"""
Tracking a synthetic sequence
=============================

A textured square drifts across a smooth background and grows by 1% per
frame.  The tracker starts from the first box and estimates position and
scale in every later frame.
"""

import numpy as np

from rfct.config import TrackerConfig
from rfct.evaluation import SequenceResult, evaluate, iou
from rfct.synthetic import moving_square
from rfct.tracker import RFCTracker

seq = moving_square(n_frames=60, zoom=1.01)
results = {}
for kind in ("binary", "rquadratic", "ours"):
    tracker = RFCTracker(TrackerConfig(map_kind=kind))
    tracker.init(seq.frames[0], seq.boxes[0])
    boxes, kappas = [seq.boxes[0]], [tracker.state.kappa]
    for frame in seq.frames[1:]:
        boxes.append(tracker.update(frame))
        kappas.append(tracker.state.kappa)
    results[kind] = (boxes, kappas)
    metrics = evaluate(SequenceResult(boxes, seq.boxes))
    print(f"{kind:10s} DP@20 {metrics['dp20']:.3f}  OP@0.5 {metrics['op50']:.3f}  AUC {metrics['auc']:.3f}")

# %%
# Overlap per frame and the estimated scale against the true one.

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, (ax_iou, ax_scale) = plt.subplots(1, 2, figsize=(10, 4))
    for kind, (boxes, kappas) in results.items():
        ax_iou.plot([iou(p, g) for p, g in zip(boxes, seq.boxes)], label=kind)
        ax_scale.plot(kappas, label=kind)
    ax_scale.plot(seq.scales, "k--", label="true")
    ax_iou.set_xlabel("frame")
    ax_iou.set_ylabel("IoU")
    ax_scale.set_xlabel("frame")
    ax_scale.set_ylabel("scale")
    ax_scale.legend()
    fig.tight_layout()

    ax = plt.figure(figsize=(4, 4)).gca()
    ax.imshow(seq.frames[-1])
    for kind, (boxes, _) in results.items():
        b = boxes[-1]
        ax.add_patch(plt.Rectangle((b.x, b.y), b.w, b.h, fill=False, label=kind))
    ax.axis("off")
    plt.show()
