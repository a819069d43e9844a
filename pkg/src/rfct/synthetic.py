"""Synthetic sequences with scripted ground truth.

A textured square moves (and optionally zooms) over a low-contrast
background.  Frames are rendered by inverse-mapping every pixel into the
texture, so sub-pixel motion and scale changes are exact.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .evaluation import BoundingBox

__all__ = ["SyntheticSequence", "moving_square", "render_square"]


@dataclass
class SyntheticSequence:
    frames: list
    boxes: list
    scales: np.ndarray


def _texture(rng, size=16, upsample=4):
    coarse = rng.uniform(0, 255, size=(size, size, 3))
    fine = np.kron(coarse, np.ones((upsample, upsample, 1)))
    return ndimage.gaussian_filter(fine, sigma=(1.0, 1.0, 0))


def render_square(background, texture, center, side):
    """Paste ``texture`` scaled to ``side`` pixels at ``center = (cx, cy)``."""
    frame = background.copy()
    H, W = frame.shape[:2]
    th, tw = texture.shape[:2]
    cx, cy = center
    x0, x1 = int(np.floor(cx - side / 2)), int(np.ceil(cx + side / 2))
    y0, y1 = int(np.floor(cy - side / 2)), int(np.ceil(cy + side / 2))
    xs = np.arange(max(x0, 0), min(x1, W))
    ys = np.arange(max(y0, 0), min(y1, H))
    if xs.size == 0 or ys.size == 0:
        return frame
    gy, gx = np.meshgrid(ys + 0.5, xs + 0.5, indexing="ij")
    u = (gx - (cx - side / 2)) / side
    v = (gy - (cy - side / 2)) / side
    inside = (u >= 0) & (u < 1) & (v >= 0) & (v < 1)
    tu = u * tw - 0.5
    tv = v * th - 0.5
    for ch in range(frame.shape[2]):
        vals = ndimage.map_coordinates(texture[..., ch], [tv, tu], order=1, mode="nearest")
        region = frame[ys[0] : ys[-1] + 1, xs[0] : xs[-1] + 1, ch]
        region[inside] = vals[inside]
    return frame


def moving_square(
    n_frames=30,
    frame_size=(192, 192),
    side=32.0,
    velocity=(1.5, 1.0),
    zoom=1.01,
    amplitude=6.0,
    seed=0,
):
    """Textured square on a smooth background.

    The centre follows a line with a sinusoidal wobble of ``amplitude``
    pixels; the side is multiplied by ``zoom`` every frame.  Returns uint8
    RGB frames, the exact boxes, and the per-frame side relative to frame 1.
    """
    rng = np.random.default_rng(seed)
    W, H = frame_size
    background = ndimage.gaussian_filter(rng.uniform(90, 150, size=(H, W, 3)), sigma=(6, 6, 0))
    texture = _texture(rng)
    start = np.array([W / 2.0 - velocity[0] * n_frames / 2, H / 2.0 - velocity[1] * n_frames / 2])
    frames, boxes, scales = [], [], []
    for k in range(n_frames):
        cx = start[0] + velocity[0] * k + amplitude * np.sin(2 * np.pi * k / 20.0)
        cy = start[1] + velocity[1] * k + amplitude * np.sin(2 * np.pi * k / 15.0)
        s = side * zoom**k
        frames.append(np.clip(np.rint(render_square(background, texture, (cx, cy), s)), 0, 255).astype(np.uint8))
        boxes.append(BoundingBox.from_center(cx, cy, s, s))
        scales.append(zoom**k)
    return SyntheticSequence(frames, boxes, np.array(scales))
