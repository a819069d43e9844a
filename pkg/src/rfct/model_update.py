"""Generalised linear-interpolation model update.

With learning rate ``alpha`` and per-frame rate sum ``rho`` the running
filter obeys ``w^1 = w^1_*`` and ``w^k = (rho - alpha) w^{k-1} + alpha w^k_*``.
Unrolled, frame ``j >= 2`` contributes ``alpha (rho - alpha)^(k-j)`` and the
first frame ``(rho - alpha)^(k-1)``.  ``rho = 1`` is the classic
exponential forgetting; ``rho > 1`` keeps more of the first filter, and the
coefficients then sum to more than one (no renormalisation is applied).
"""

import math
import sys
from dataclasses import dataclass

import numpy as np

from .solver import FilterBank

__all__ = ["UpdateSchedule", "merge", "coefficients", "crossover_frame", "NEVER"]

NEVER = sys.maxsize


@dataclass(frozen=True)
class UpdateSchedule:
    alpha: float = 0.02
    rho: float = 1.01

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not self.alpha < self.rho:
            raise ValueError(f"rho ({self.rho}) must exceed alpha ({self.alpha})")
        if not self.rho - self.alpha < 1:
            raise ValueError(f"rho - alpha must stay below 1, got {self.rho - self.alpha}")

    @property
    def decay(self):
        return self.rho - self.alpha


def merge(model, new_filter, schedule, k):
    """Fold the frame-``k`` filter into the model (``k`` counts from 1)."""
    if k < 1:
        raise ValueError(f"frame index must be >= 1, got {k}")
    if k == 1:
        return new_filter
    if model.w.shape != new_filter.w.shape:
        raise ValueError(f"filter dims mismatch: {model.w.shape} vs {new_filter.w.shape}")
    w = schedule.decay * model.w + schedule.alpha * new_filter.w
    return FilterBank(w, new_filter.c)


def coefficients(schedule, k):
    """Closed-form weight of each per-frame filter ``w^1_* .. w^k_*`` in ``w^k``."""
    if k < 1:
        raise ValueError(f"frame index must be >= 1, got {k}")
    j = np.arange(1, k + 1)
    out = schedule.alpha * schedule.decay ** (k - j).astype(float)
    out[0] = schedule.decay ** (k - 1)
    return out


def crossover_frame(schedule):
    """First frame whose own weight ``alpha`` exceeds that of the first filter.

    Returns the smallest ``k`` with ``(rho - alpha)^(k-1) < alpha``, or
    :data:`NEVER` when the decay is so close to 1 that no such frame is
    representable.
    """
    a, g = schedule.alpha, schedule.decay
    if g < a:
        # (rho - alpha)^1 is already below alpha at k = 2
        return 2
    ratio = math.log(a) / math.log(g) if g > 0 else 0.0
    if not math.isfinite(ratio) or ratio > 1e15:
        return NEVER
    k = max(1, int(math.floor(ratio)))
    while g ** (k - 1) >= a:
        k += 1
    while k > 1 and g ** (k - 2) < a:
        k -= 1
    return k
