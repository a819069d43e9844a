"""Detection responses, peak localisation and scale selection."""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .spectral import circulant_spectrum, idft2, real_part, wrapped_offsets

__all__ = [
    "ScalePyramidConfig",
    "Detection",
    "respond",
    "locate",
    "refine_peak",
    "scale_exponents",
    "detect_multiscale",
]


@dataclass(frozen=True)
class ScalePyramidConfig:
    """Scale increment ``a`` and odd number of levels ``s``."""

    a: float = 1.02
    s: int = 5

    def __post_init__(self):
        if not self.a > 1:
            raise ValueError(f"scale increment must exceed 1, got {self.a}")
        if int(self.s) != self.s or self.s < 1 or self.s % 2 == 0:
            raise ValueError(f"number of scales must be a positive odd integer, got {self.s}")


@dataclass(frozen=True)
class Detection:
    """Peak of a response: sub-cell ``(du, dv)`` in (rows, cols), scale level, value."""

    displacement: tuple
    scale_index: int
    response_peak: float
    response: np.ndarray


def respond(z, filter_bank):
    """Response ``sum_l z_l * (c w_l)`` (circular convolution) on the feature grid.

    ``filter_bank.effective_spectrum`` holds ``dft2(c * w)``, so the sum is
    ``idft2(sum_l circulant_spectrum(z_l) * effective_spectrum_l)``.
    """
    z = np.asarray(z, dtype=float)
    z = z[None] if z.ndim == 2 else z
    spec = filter_bank.effective_spectrum
    if z.shape != spec.shape:
        raise ValueError(f"sample dims {z.shape} do not match filter dims {spec.shape}")
    total = np.sum(circulant_spectrum(z) * spec, axis=0)
    return real_part(idft2(total))


def scale_exponents(s):
    """Pyramid exponents ``floor((1-s)/2) .. floor((s-1)/2)``."""
    return np.arange((1 - s) // 2, (s - 1) // 2 + 1)


# least-squares fit of a + b u + c v + d u^2 + e v^2 + f uv over the 3x3 neighbourhood
_U, _V = np.meshgrid([-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0], indexing="ij")
_BASIS = np.stack([np.ones(9), _U.ravel(), _V.ravel(), _U.ravel() ** 2, _V.ravel() ** 2, (_U * _V).ravel()], axis=1)
_FIT = np.linalg.pinv(_BASIS)


def refine_peak(response, row, col):
    """Quadratic sub-cell refinement around an integer peak.

    Returns the offset ``(du, dv)``, each clamped to ``[-0.5, 0.5]``, and the
    fitted value there.
    """
    M, N = response.shape
    rr = (row + np.array([-1, 0, 1])) % M
    cc = (col + np.array([-1, 0, 1])) % N
    patch = response[np.ix_(rr, cc)]
    a, bu, bv, duu, dvv, duv = _FIT @ patch.ravel()
    hess = np.array([[2 * duu, duv], [duv, 2 * dvv]])
    if hess[0, 0] < 0 and np.linalg.det(hess) > 0:
        du, dv = np.linalg.solve(hess, [-bu, -bv])
    else:
        du = -bu / (2 * duu) if duu < 0 else 0.0
        dv = -bv / (2 * dvv) if dvv < 0 else 0.0
    du = float(np.clip(du, -0.5, 0.5))
    dv = float(np.clip(dv, -0.5, 0.5))
    value = a + bu * du + bv * dv + duu * du * du + dvv * dv * dv + duv * du * dv
    return (du, dv), float(value)


def locate(response, scale_index=0):
    """Integer argmax plus sub-cell refinement.

    Ties go to the smallest wrapped displacement, then row-major order, so a
    flat response reports zero displacement.
    """
    response = np.asarray(response, dtype=float)
    if response.size == 0:
        raise ValueError("empty response")
    M, N = response.shape
    peak = response.max()
    rows, cols = np.nonzero(response == peak)
    if len(rows) > 1:
        dr = wrapped_offsets(M)[rows]
        dc = wrapped_offsets(N)[cols]
        order = np.lexsort((cols, rows, dr * dr + dc * dc))
        rows, cols = rows[order], cols[order]
    row, col = int(rows[0]), int(cols[0])
    if np.all(response == peak):
        offset, value = (0.0, 0.0), float(peak)
    else:
        offset, value = refine_peak(response, row, col)
    du = float(wrapped_offsets(M)[row]) + offset[0]
    dv = float(wrapped_offsets(N)[col]) + offset[1]
    return Detection((du, dv), int(scale_index), value, response)


def detect_multiscale(sample_at_scale: Callable, filter_bank, pyramid):
    """Evaluate every pyramid level and keep the best refined peak.

    Parameters
    ----------
    sample_at_scale : callable
        ``sample_at_scale(factor)`` returns the origin-centred feature sample
        of a search region ``factor`` times the current one, resampled to the
        fiducial grid.
    filter_bank : FilterBank
    pyramid : ScalePyramidConfig

    Returns
    -------
    Detection
        Its ``scale_index`` is the winning exponent ``r``; the caller
        multiplies its scale factor by ``pyramid.a ** r``.  Equal peaks
        prefer the level closest to ``r = 0``.
    """
    best = None
    for r in sorted(scale_exponents(pyramid.s), key=lambda r: (abs(r), r)):
        det = locate(respond(sample_at_scale(pyramid.a ** r), filter_bank), int(r))
        if best is None or det.response_peak > best.response_peak:
            best = det
    return best
