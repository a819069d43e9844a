"""Image patches to multi-channel feature samples.

Feature planes are returned channel-first, ``(d, M, N)``, on a grid of
``cell_size`` pixel cells.  The HOG variant is the 31-channel FHOG layout
(18 contrast-sensitive orientations, 9 contrast-insensitive orientations,
4 gradient-energy channels).
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .errors import ConfigError

__all__ = [
    "ImagePatch",
    "search_size",
    "extract_patch",
    "compute_hog",
    "compute_colornames",
    "compute_gray",
    "load_colornames_table",
    "assemble_sample",
    "HOG_CHANNELS",
    "CN_CHANNELS",
]

log = logging.getLogger(__name__)

HOG_CHANNELS = 31
CN_CHANNELS = 11
CN_TABLE_ROWS = 32768

_N_ORIENT = 18
_HOG_CLIP = 0.2
_HOG_EPS = 1e-4
_TEXTURE_GAIN = 0.2357


@dataclass(frozen=True)
class ImagePatch:
    """Pixels cut from a frame and the source rectangle ``(x0, y0, w, h)`` they cover."""

    pixels: np.ndarray
    rect: tuple

    @property
    def is_color(self):
        return self.pixels.ndim == 3 and self.pixels.shape[2] == 3


def search_size(target_size, search_area_scale=4.0, cell_size=4):
    """Pixel size ``(w, h)`` of the search region for a target ``(w, h)``.

    Each side is ``search_area_scale`` times the target side, so the area is
    ``search_area_scale**2`` times the target area, rounded to an even
    number of cells.
    """
    step = 2 * cell_size
    out = []
    for s in target_size:
        if not s > 0:
            raise ValueError(f"target size must be positive, got {target_size}")
        out.append(max(step, int(round(s * search_area_scale / step)) * step))
    return tuple(out)


def extract_patch(image, center, size, out_size=None):
    """Cut a ``size = (w, h)`` region centred on ``center = (cx, cy)``.

    Pixels outside the frame replicate the nearest border pixel.  With
    ``out_size`` the region is bilinearly resampled to that ``(w, h)``;
    otherwise the crop is pixel-exact, starting at
    ``round(cx - w/2), round(cy - h/2)``.
    """
    image = np.asarray(image)
    if image.size == 0 or image.ndim not in (2, 3):
        raise ValueError(f"image must be a non-empty H x W (x 3) array, got shape {image.shape}")
    w, h = size
    if not (w >= 1 and h >= 1):
        raise ValueError(f"patch size must be >= 1, got {size}")
    cx, cy = center
    x0 = cx - w / 2.0
    y0 = cy - h / 2.0
    H, W = image.shape[:2]

    if out_size is None:
        xs = np.clip(np.floor(x0 + 0.5).astype(int) + np.arange(int(w)), 0, W - 1)
        ys = np.clip(np.floor(y0 + 0.5).astype(int) + np.arange(int(h)), 0, H - 1)
        pixels = image[ys[:, None], xs[None, :]]
        return ImagePatch(pixels, (float(np.floor(x0 + 0.5)), float(np.floor(y0 + 0.5)), int(w), int(h)))

    ow, oh = out_size
    # pixel centres of the output grid mapped into source pixel coordinates
    sx = x0 + (np.arange(ow) + 0.5) * (w / ow) - 0.5
    sy = y0 + (np.arange(oh) + 0.5) * (h / oh) - 0.5
    gy, gx = np.meshgrid(sy, sx, indexing="ij")
    src = image.astype(float)
    if src.ndim == 2:
        pixels = ndimage.map_coordinates(src, [gy, gx], order=1, mode="nearest")
    else:
        pixels = np.stack(
            [ndimage.map_coordinates(src[..., ch], [gy, gx], order=1, mode="nearest") for ch in range(src.shape[2])],
            axis=-1,
        )
    return ImagePatch(pixels, (float(x0), float(y0), float(w), float(h)))


def _pixels(patch):
    return patch.pixels if isinstance(patch, ImagePatch) else np.asarray(patch)


def _gradients(img):
    """Central differences with replicated borders; colour keeps the strongest channel."""
    img = img.astype(float)
    if img.ndim == 2:
        img = img[..., None]
    padded = np.pad(img, ((1, 1), (1, 1), (0, 0)), mode="edge")
    dx = padded[1:-1, 2:] - padded[1:-1, :-2]
    dy = padded[2:, 1:-1] - padded[:-2, 1:-1]
    mag2 = dx * dx + dy * dy
    best = np.argmax(mag2, axis=2)[..., None]
    dx = np.take_along_axis(dx, best, axis=2)[..., 0]
    dy = np.take_along_axis(dy, best, axis=2)[..., 0]
    return dx, dy


def _cell_weights(n_pixels, n_cells, cell_size):
    """Triangular (bilinear) weights from pixels to cell centres, shape (cells, pixels)."""
    pix = np.arange(n_pixels) + 0.5
    centres = (np.arange(n_cells) + 0.5) * cell_size
    return np.maximum(0.0, 1.0 - np.abs(pix[None, :] - centres[:, None]) / cell_size)


def compute_hog(patch, cell_size=4):
    """31-channel FHOG features on ``floor(H/cell) x floor(W/cell)`` cells."""
    img = _pixels(patch)
    H, W = img.shape[:2]
    if H < cell_size or W < cell_size:
        raise ValueError(f"patch {H}x{W} is smaller than one {cell_size}-pixel cell")
    M, N = H // cell_size, W // cell_size

    dx, dy = _gradients(img)
    mag = np.hypot(dx, dy)
    # soft assignment between the two nearest of 18 orientations over [0, 2 pi)
    o = np.mod(np.arctan2(dy, dx) * (_N_ORIENT / (2 * np.pi)), _N_ORIENT)
    o0 = np.floor(o).astype(int) % _N_ORIENT
    frac = o - np.floor(o)
    o1 = (o0 + 1) % _N_ORIENT
    bins = np.arange(_N_ORIENT)[:, None, None]
    per_pixel = (bins == o0) * (mag * (1.0 - frac)) + (bins == o1) * (mag * frac)

    wy = _cell_weights(H, M, cell_size)
    wx = _cell_weights(W, N, cell_size)
    hist = wy @ per_pixel @ wx.T

    energy = np.sum((hist[:9] + hist[9:]) ** 2, axis=0)
    e = np.pad(energy, 1, mode="edge")
    # the four 2x2 cell blocks touching each cell
    blocks = [
        e[:-2, :-2] + e[:-2, 1:-1] + e[1:-1, :-2] + e[1:-1, 1:-1],
        e[:-2, 1:-1] + e[:-2, 2:] + e[1:-1, 1:-1] + e[1:-1, 2:],
        e[1:-1, :-2] + e[1:-1, 1:-1] + e[2:, :-2] + e[2:, 1:-1],
        e[1:-1, 1:-1] + e[1:-1, 2:] + e[2:, 1:-1] + e[2:, 2:],
    ]
    norms = [1.0 / np.sqrt(b + _HOG_EPS) for b in blocks]

    unsigned = hist[:9] + hist[9:]
    out = np.zeros((HOG_CHANNELS, M, N))
    for i, n in enumerate(norms):
        hs = np.minimum(hist * n, _HOG_CLIP)
        out[:18] += 0.5 * hs
        out[18:27] += 0.5 * np.minimum(unsigned * n, _HOG_CLIP)
        out[27 + i] = _TEXTURE_GAIN * hs.sum(axis=0)
    return out


def load_colornames_table(path):
    """Load a ``32768 x 11`` RGB-to-colour-name probability table (``.npy`` or text)."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"colour-name table not found: {path}")
    try:
        table = np.load(path) if path.suffix == ".npy" else np.loadtxt(path)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read colour-name table {path}: {exc}") from exc
    if table.shape != (CN_TABLE_ROWS, CN_CHANNELS):
        raise ConfigError(f"colour-name table must be {CN_TABLE_ROWS}x{CN_CHANNELS}, got {table.shape}")
    return np.asarray(table, dtype=float)


def compute_colornames(patch, table, cell_size=4):
    """Cell-averaged colour-name probabilities, 11 channels on the HOG grid.

    The table row for a pixel is ``(R>>3) + 32 (G>>3) + 1024 (B>>3)``.
    """
    if table is None:
        raise ConfigError("colour-name features need a lookup table")
    img = _pixels(patch)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ConfigError("colour-name features need an RGB patch")
    H, W = img.shape[:2]
    if H < cell_size or W < cell_size:
        raise ValueError(f"patch {H}x{W} is smaller than one {cell_size}-pixel cell")
    M, N = H // cell_size, W // cell_size
    q = np.clip(np.floor(img[: M * cell_size, : N * cell_size]), 0, 255).astype(int) >> 3
    idx = q[..., 0] + 32 * q[..., 1] + 1024 * q[..., 2]
    probs = np.asarray(table)[idx]
    cells = probs.reshape(M, cell_size, N, cell_size, CN_CHANNELS).mean(axis=(1, 3))
    return np.moveaxis(cells, -1, 0)


def compute_gray(patch, cell_size=4):
    """One channel of cell-averaged intensity, scaled to ``[-0.5, 0.5]``."""
    img = _pixels(patch).astype(float)
    if img.ndim == 3:
        img = img.mean(axis=2)
    H, W = img.shape
    M, N = H // cell_size, W // cell_size
    if M < 1 or N < 1:
        raise ValueError(f"patch {H}x{W} is smaller than one {cell_size}-pixel cell")
    cells = img[: M * cell_size, : N * cell_size].reshape(M, cell_size, N, cell_size).mean(axis=(1, 3))
    return (cells / 255.0 - 0.5)[None]


def assemble_sample(parts, window):
    """Concatenate channel stacks and multiply every channel by ``window``."""
    parts = [np.asarray(p, dtype=float) for p in parts if p is not None]
    if not parts:
        raise ValueError("no feature channels to assemble")
    parts = [p[None] if p.ndim == 2 else p for p in parts]
    window = np.asarray(window, dtype=float)
    for p in parts:
        if p.shape[-2:] != window.shape:
            raise ValueError(f"feature grid {p.shape[-2:]} does not match window {window.shape}")
    return np.concatenate(parts, axis=0) * window
