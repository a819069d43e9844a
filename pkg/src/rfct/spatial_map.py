"""Spatial maps that filter the cyclically shifted training samples.

All maps live on the feature grid with the target centre at index ``(0, 0)``
(wrapped).  The horizontal offset ``p`` runs along columns and is normalised
by the target width ``W``; the vertical offset ``q`` runs along rows and is
normalised by the target height ``H``.  Target sizes are in feature cells and
may be fractional.

A centred rectangle of extent ``a`` along an axis covers the offsets
``-a/2 <= p < a/2``, which holds exactly ``a`` cells when ``a`` is an integer.
"""

from dataclasses import dataclass, field

import numpy as np

from .spectral import wrapped_offsets

__all__ = [
    "SpatialMap",
    "binary_map",
    "rquadratic_map",
    "our_map",
    "custom_map",
    "build_map",
    "MAP_KINDS",
]

MAP_KINDS = ("binary", "rquadratic", "ours")


@dataclass(frozen=True)
class SpatialMap:
    """A real ``M x N`` map together with how it was built."""

    plane: np.ndarray
    kind: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        plane = np.array(self.plane, dtype=float)
        if plane.ndim != 2 or plane.size == 0:
            raise ValueError(f"spatial map must be a non-empty 2-D plane, got shape {plane.shape}")
        if not np.all(np.isfinite(plane)):
            raise ValueError("spatial map contains non-finite values")
        plane.setflags(write=False)
        object.__setattr__(self, "plane", plane)

    @property
    def shape(self):
        return self.plane.shape


def _offsets(grid_dims):
    M, N = grid_dims
    if M < 1 or N < 1:
        raise ValueError(f"grid dims must be >= 1, got {grid_dims}")
    q = wrapped_offsets(M)[:, None].astype(float)
    p = wrapped_offsets(N)[None, :].astype(float)
    return q, p


def _check_target(grid_dims, target_dims):
    M, N = grid_dims
    H, W = target_dims
    if not (H > 0 and W > 0):
        raise ValueError(f"target dims must be positive, got {target_dims}")
    if H > M or W > N:
        raise ValueError(f"target {target_dims} larger than grid {grid_dims}")
    return float(H), float(W)


def _rectangle(grid_dims, height, width):
    q, p = _offsets(grid_dims)
    return (q >= -height / 2) & (q < height / 2) & (p >= -width / 2) & (p < width / 2)


def _rquadratic_plane(grid_dims, H, W, nu, delta):
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    if delta < 0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    q, p = _offsets(grid_dims)
    return 1.0 / (nu + delta * (p / W) ** 2 + delta * (q / H) ** 2)


def binary_map(grid_dims, target_dims):
    """1 inside the centred target rectangle, 0 elsewhere.

    ``grid_dims`` and ``target_dims`` are both ``(rows, cols)``.
    """
    H, W = _check_target(grid_dims, target_dims)
    plane = _rectangle(grid_dims, H, W).astype(float)
    return SpatialMap(plane, "binary", {})


def rquadratic_map(grid_dims, target_dims, nu, delta):
    """Reciprocal quadratic ``1 / (nu + delta (p/W)^2 + delta (q/H)^2)``."""
    H, W = _check_target(grid_dims, target_dims)
    plane = _rquadratic_plane(grid_dims, H, W, nu, delta)
    return SpatialMap(plane, "rquadratic", {"nu": nu, "delta": delta})


def our_map(grid_dims, target_dims, nu, delta, expansion=1.6):
    """Reciprocal quadratic truncated to zero outside ``expansion`` times the target box."""
    H, W = _check_target(grid_dims, target_dims)
    if not expansion > 0:
        raise ValueError(f"expansion must be positive, got {expansion}")
    plane = _rquadratic_plane(grid_dims, H, W, nu, delta)
    plane = np.where(_rectangle(grid_dims, expansion * H, expansion * W), plane, 0.0)
    return SpatialMap(plane, "ours", {"nu": nu, "delta": delta, "expansion": expansion})


def custom_map(plane):
    """Wrap an arbitrary finite plane; values are not restricted."""
    return SpatialMap(plane, "custom", {})


def build_map(kind, grid_dims, target_dims, nu=0.2, delta=3.0, expansion=1.6):
    """Dispatch on ``kind`` (one of :data:`MAP_KINDS`)."""
    if kind == "binary":
        return binary_map(grid_dims, target_dims)
    if kind == "rquadratic":
        return rquadratic_map(grid_dims, target_dims, nu, delta)
    if kind == "ours":
        return our_map(grid_dims, target_dims, nu, delta, expansion)
    raise ValueError(f"unknown map kind {kind!r}; expected one of {MAP_KINDS}")
