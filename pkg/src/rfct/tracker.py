"""Per-frame tracking loop: detect over a scale pyramid, retrain, merge.

The fiducial feature grid is fixed at initialisation.  Every search region
is a ``search_area_scale`` multiple of the target (so ``search_area_scale**2``
times its area), resampled to the fiducial pixel size, converted to
features, Hann-windowed and moved so the region centre sits at grid index
``(0, 0)``.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import solver
from .config import TrackerConfig
from .detection import Detection, ScalePyramidConfig, detect_multiscale
from .errors import InitializationError, TrackingError
from .evaluation import BoundingBox
from .features import (
    assemble_sample,
    compute_colornames,
    compute_gray,
    compute_hog,
    extract_patch,
    load_colornames_table,
    search_size,
)
from .model_update import UpdateSchedule, merge
from .solver import FilterBank, SolverConfig
from .spatial_map import SpatialMap, build_map
from .spectral import gaussian_label, hann_window, to_origin

__all__ = ["TrackerState", "RFCTracker", "run_sequence"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrackerState:
    """Everything that changes from frame to frame."""

    box: BoundingBox
    kappa: float
    model: FilterBank
    k: int
    last_filter: FilterBank
    last_detection: Optional[Detection] = field(default=None, compare=False)


class RFCTracker:
    """Region-filtering correlation tracker.

    Example
    -------
    >>> tracker = RFCTracker()                       # doctest: +SKIP
    >>> tracker.init(frames[0], BoundingBox(x, y, w, h))
    >>> for frame in frames[1:]:
    ...     box = tracker.update(frame)
    """

    def __init__(self, config=None):
        self.config = config or TrackerConfig()
        self.solver_cfg: SolverConfig = self.config.solver_config()
        self.schedule: UpdateSchedule = self.config.schedule()
        self.pyramid: ScalePyramidConfig = self.config.pyramid()
        self.cn_table = None
        if self.config.cn_table:
            self.cn_table = load_colornames_table(self.config.cn_table)
        self.state: Optional[TrackerState] = None

    # geometry fixed at init
    def _setup(self, box):
        cfg = self.config
        target = np.array([box.w, box.h], dtype=float)
        area = float(np.prod(target * cfg.search_area_scale))
        # pixels of the frame per fiducial pixel, at kappa = 1
        self.base_scale = max(1.0, math.sqrt(area / cfg.max_sample_area))
        self.base_target = target
        self.fiducial = search_size(target / self.base_scale, cfg.search_area_scale, cfg.cell_size)
        fw, fh = self.fiducial
        self.grid = (fh // cfg.cell_size, fw // cfg.cell_size)
        target_cells = target / self.base_scale / cfg.cell_size
        self.target_cells = (min(target_cells[1], self.grid[0]), min(target_cells[0], self.grid[1]))
        sigma = math.sqrt(target_cells[0] * target_cells[1]) * cfg.output_sigma_factor
        self.label = gaussian_label(*self.grid, sigma)
        self.window = hann_window(*self.grid)
        self.map: SpatialMap = build_map(
            cfg.map_kind, self.grid, self.target_cells, cfg.map_nu, cfg.map_delta, cfg.map_expansion
        )

    def sample(self, image, center, kappa):
        """Origin-centred feature sample of the search region at scale ``kappa``."""
        fw, fh = self.fiducial
        region = (fw * self.base_scale * kappa, fh * self.base_scale * kappa)
        patch = extract_patch(image, center, region, out_size=self.fiducial)
        cell = self.config.cell_size
        parts = [compute_hog(patch, cell)]
        if self.cn_table is not None and patch.is_color:
            parts.append(compute_colornames(patch, self.cn_table, cell))
        if self.config.gray:
            parts.append(compute_gray(patch, cell))
        return to_origin(assemble_sample(parts, self.window))

    def init(self, frame, box):
        """Train the first filter on ``frame`` around ``box``."""
        frame = np.asarray(frame)
        if frame.ndim not in (2, 3) or frame.size == 0:
            raise InitializationError(f"unusable first frame of shape {frame.shape}")
        if not box.valid:
            raise InitializationError(f"degenerate initial box {box}")
        if self.cn_table is None and frame.ndim == 3:
            log.warning("no colour-name table configured; using HOG features only")
        self._setup(box)
        x = self.sample(frame, box.center, 1.0)
        w1 = solver.train(x, self.label, self.map, self.solver_cfg)
        self.state = TrackerState(box=box, kappa=1.0, model=w1, k=1, last_filter=w1)
        return self.state

    def update(self, frame):
        """Locate the target in ``frame``, retrain and merge; returns the new box."""
        st = self.state
        if st is None:
            raise TrackingError("tracker used before init")
        frame = np.asarray(frame)
        cx, cy = st.box.center

        def at_scale(factor):
            return self.sample(frame, (cx, cy), st.kappa * factor)

        det = detect_multiscale(at_scale, st.model, self.pyramid)
        factor = self.pyramid.a ** det.scale_index
        # one feature cell spans cell_size fiducial pixels
        step = self.config.cell_size * self.base_scale * st.kappa * factor
        du, dv = det.displacement
        kappa = st.kappa * factor
        w, h = self.base_target * kappa
        box = BoundingBox.from_center(cx + dv * step, cy + du * step, w, h)
        if not box.valid:
            raise TrackingError(f"tracker produced a degenerate box {box}")

        x = self.sample(frame, box.center, kappa)
        w_new = solver.train(x, self.label, self.map, self.solver_cfg, warm_start=st.model)
        model = merge(st.model, w_new, self.schedule, st.k + 1)
        self.state = replace(st, box=box, kappa=kappa, model=model, k=st.k + 1, last_filter=w_new, last_detection=det)
        return box


def run_sequence(frames, box, config=None):
    """Track through ``frames`` starting from ``box``; returns one box per frame.

    A failure part-way raises :class:`~rfct.errors.TrackingError` whose
    ``partial`` attribute holds the boxes produced so far.
    """
    frames = iter(frames)
    try:
        first = next(frames)
    except StopIteration:
        raise ValueError("need at least one frame") from None
    tracker = RFCTracker(config)
    tracker.init(first, box)
    boxes = [box]
    for frame in frames:
        try:
            boxes.append(tracker.update(frame))
        except TrackingError as exc:
            exc.partial = list(boxes)
            raise
        except Exception as exc:
            err = TrackingError(f"frame {len(boxes) + 1}: {exc}")
            err.partial = list(boxes)
            raise err from exc
    return boxes
