import numpy as np
import pytest

from rfct.config import TrackerConfig
from rfct.errors import InitializationError, TrackingError
from rfct.evaluation import BoundingBox, iou
from rfct.model_update import coefficients
from rfct.synthetic import _texture, moving_square, render_square
from rfct.tracker import RFCTracker, run_sequence

pytestmark = pytest.mark.filterwarnings("ignore")


@pytest.fixture(scope="module")
def scene():
    rng = np.random.default_rng(7)
    background = np.full((160, 160, 3), 128.0)
    return background, _texture(rng)


def frame_with(scene, center, side):
    background, texture = scene
    return np.clip(np.rint(render_square(background, texture, center, side)), 0, 255).astype(np.uint8)


def test_fiducial_grid_for_40px_target(scene):
    tr = RFCTracker()
    tr.init(frame_with(scene, (80, 80), 40), BoundingBox.from_center(80, 80, 40, 40))
    assert tr.grid == (40, 40)
    assert tr.state.k == 1 and tr.state.kappa == 1.0
    assert tr.map.shape == tr.grid == tr.label.shape


def test_init_rejects_degenerate_box(scene):
    with pytest.raises(InitializationError):
        RFCTracker().init(frame_with(scene, (80, 80), 30), BoundingBox(10, 10, 0, 5))
    with pytest.raises(InitializationError):
        RFCTracker().init(np.zeros((0, 0)), BoundingBox(0, 0, 4, 4))


def test_update_before_init():
    with pytest.raises(TrackingError):
        RFCTracker().update(np.zeros((10, 10)))


def test_init_deterministic(scene):
    f = frame_with(scene, (70, 90), 30)
    b = BoundingBox.from_center(70, 90, 30, 30)
    a, c = RFCTracker(), RFCTracker()
    a.init(f, b)
    c.init(f, b)
    assert np.array_equal(a.state.model.w, c.state.model.w)


def test_whole_frame_box_accepted(scene):
    f = frame_with(scene, (80, 80), 40)
    tr = RFCTracker()
    tr.init(f, BoundingBox(0, 0, 160, 160))
    assert tr.update(f).valid


def test_static_scene(scene):
    f = frame_with(scene, (80, 80), 32)
    box = BoundingBox.from_center(80, 80, 32, 32)
    tr = RFCTracker(TrackerConfig(scale_s=1))
    tr.init(f, box)
    k0 = tr.state.k
    new = tr.update(f)
    assert np.hypot(new.center[0] - 80, new.center[1] - 80) < 2.0
    assert tr.state.k == k0 + 1


def test_translation_by_two_cells(scene):
    box = BoundingBox.from_center(80, 80, 32, 32)
    tr = RFCTracker(TrackerConfig(scale_s=1))
    tr.init(frame_with(scene, (80, 80), 32), box)
    new = tr.update(frame_with(scene, (88, 80), 32))
    assert abs(new.center[0] - 88) <= 1.0
    assert abs(new.center[1] - 80) <= 1.0


def test_zoom_selects_larger_scale(scene):
    cfg = TrackerConfig()
    tr = RFCTracker(cfg)
    tr.init(frame_with(scene, (80, 80), 32), BoundingBox.from_center(80, 80, 32, 32))
    tr.update(frame_with(scene, (80, 80), 32 * cfg.scale_a))
    assert tr.state.last_detection.scale_index == 1


def test_kappa_nondecreasing_under_zoom():
    seq = moving_square(n_frames=20, velocity=(0.0, 0.0), amplitude=0.0, zoom=1.02)
    tr = RFCTracker()
    tr.init(seq.frames[0], seq.boxes[0])
    kappas = [1.0]
    for f in seq.frames[1:]:
        tr.update(f)
        kappas.append(tr.state.kappa)
    assert all(b >= a for a, b in zip(kappas, kappas[1:]))
    assert kappas[-1] > 1.2


def test_model_is_weighted_sum_of_frame_filters():
    seq = moving_square(n_frames=5)
    cfg = TrackerConfig(alpha=0.1, rho=1.05)
    tr = RFCTracker(cfg)
    tr.init(seq.frames[0], seq.boxes[0])
    filters = [tr.state.last_filter.w]
    for f in seq.frames[1:]:
        tr.update(f)
        filters.append(tr.state.last_filter.w)
    coef = coefficients(cfg.schedule(), 5)
    explicit = sum(a * w for a, w in zip(coef, filters))
    assert np.max(np.abs(tr.state.model.w - explicit)) < 1e-10


def test_grid_constant_across_frames():
    seq = moving_square(n_frames=6, zoom=1.03)
    tr = RFCTracker()
    tr.init(seq.frames[0], seq.boxes[0])
    shape = tr.state.model.w.shape
    for f in seq.frames[1:]:
        tr.update(f)
        assert tr.state.model.w.shape == shape


def test_run_sequence_protocol():
    seq = moving_square(n_frames=4)
    assert run_sequence(seq.frames[:1], seq.boxes[0]) == [seq.boxes[0]]
    boxes = run_sequence(seq.frames, seq.boxes[0])
    assert len(boxes) == 4 and boxes[0] == seq.boxes[0]
    with pytest.raises(ValueError):
        run_sequence([], seq.boxes[0])


def test_run_sequence_flags_partial_results():
    seq = moving_square(n_frames=3)
    frames = list(seq.frames) + [np.zeros((0, 0, 3), dtype=np.uint8)]
    with pytest.raises(TrackingError) as err:
        run_sequence(frames, seq.boxes[0])
    assert len(err.value.partial) == 3


def test_translation_only_sequence():
    seq = moving_square(n_frames=15, zoom=1.0)
    boxes = run_sequence(seq.frames, seq.boxes[0], TrackerConfig(scale_s=1))
    assert np.mean([iou(p, g) for p, g in zip(boxes, seq.boxes)]) > 0.7


@pytest.mark.parametrize("kind", ["binary", "rquadratic", "ours"])
def test_all_maps_track(kind):
    seq = moving_square(n_frames=12)
    boxes = run_sequence(seq.frames, seq.boxes[0], TrackerConfig(map_kind=kind))
    assert np.mean([iou(p, g) for p, g in zip(boxes, seq.boxes)]) > 0.5


def test_colornames_and_gray_channels(tmp_path):
    rng = np.random.default_rng(0)
    table = rng.uniform(0, 1, (32768, 11))
    np.save(tmp_path / "cn.npy", table / table.sum(axis=1, keepdims=True))
    seq = moving_square(n_frames=3)
    tr = RFCTracker(TrackerConfig(cn_table=str(tmp_path / "cn.npy"), gray=True))
    tr.init(seq.frames[0], seq.boxes[0])
    assert tr.state.model.channels == 31 + 11 + 1
    tr.update(seq.frames[1])
