"""ADMM training of the region-filtered correlation filter.

For every channel ``l`` the filter ``w_l`` minimises::

    || X_l^T diag(c) w_l - y ||^2 + lam || w_l ||^2

which is split with the auxiliary variable ``t_l = c * w_l``.  In the unitary
Fourier domain the data term becomes ``|| xhat_l * that_l - yhat ||^2`` with
``xhat_l = circulant_spectrum(x_l)``, and the augmented Lagrangian is
minimised by cycling three closed-form updates: ``t`` per frequency,
``w`` per pixel, then the multiplier and penalty.  Channels are independent
apart from sharing one penalty ``mu``.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .spatial_map import SpatialMap
from .spectral import circulant_spectrum, dft2, idft2, real_part

__all__ = [
    "SolverConfig",
    "AdmmState",
    "FilterBank",
    "update_t",
    "update_w",
    "update_multiplier",
    "balance_penalty",
    "iterate",
    "train",
]

PENALTY_RULES = ("schedule", "balanced")


@dataclass(frozen=True)
class SolverConfig:
    """ADMM settings.

    ``penalty="schedule"`` grows ``mu`` geometrically up to ``mu_max`` after
    each multiplier step.  ``penalty="balanced"`` instead rescales ``mu`` by
    the square root of the ratio of the relative primal residual
    ``|t - Cw| / max(|t|, |Cw|)`` to the relative change ``|Cw - Cw_prev| / |Cw|``
    (factor clamped to ``[1/balance_max, balance_max]``); ``beta`` and
    ``mu_max`` are then unused.  ``relax`` over-relaxes the auxiliary
    variable, ``t <- relax t + (1 - relax) Cw``, before the ``w`` and
    multiplier steps; 1.0 disables it.  ``tol`` enables early exit once the
    relative constraint residual drops below it.
    """

    lam: float = 0.01
    mu0: float = 5.0
    beta: float = 3.0
    mu_max: float = 20.0
    iterations: int = 8
    penalty: str = "schedule"
    balance_max: float = 10.0
    relax: float = 1.0
    tol: Optional[float] = None

    @classmethod
    def balanced(cls, iterations=50, **kwargs):
        """Residual-balanced settings that reach the exact minimiser in few sweeps.

        ``mu0=0.5`` with ``relax=1.6`` brings 50 sweeps within 1e-3 relative
        error of the dense solution on nearly all grids up to 12x12.
        """
        kwargs = {"mu0": 0.5, "relax": 1.6, **kwargs}
        return cls(iterations=iterations, penalty="balanced", **kwargs)

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        if not self.mu0 > 0:
            raise ValueError(f"mu0 must be positive, got {self.mu0}")
        if not self.beta > 1:
            raise ValueError(f"beta must exceed 1, got {self.beta}")
        if not self.mu_max >= self.mu0:
            raise ValueError(f"mu_max ({self.mu_max}) must be >= mu0 ({self.mu0})")
        if isinstance(self.iterations, bool) or int(self.iterations) != self.iterations or self.iterations < 1:
            raise ValueError(f"iterations must be an integer >= 1, got {self.iterations}")
        if self.penalty not in PENALTY_RULES:
            raise ValueError(f"penalty must be one of {PENALTY_RULES}, got {self.penalty!r}")
        if not self.balance_max > 1:
            raise ValueError(f"balance_max must exceed 1, got {self.balance_max}")
        if not 0 < self.relax < 2:
            raise ValueError(f"relax must lie in (0, 2), got {self.relax}")
        if self.tol is not None and not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")


@dataclass(frozen=True)
class AdmmState:
    """Auxiliary spectra ``t_hat``, multiplier spectra ``zeta_hat`` and penalty ``mu``."""

    t_hat: np.ndarray
    zeta_hat: np.ndarray
    mu: float
    iteration: int = 0

    def __post_init__(self):
        if self.t_hat.shape != self.zeta_hat.shape:
            raise ValueError("t_hat and zeta_hat must share dims")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")


@dataclass(frozen=True)
class FilterBank:
    """Filter ``w`` of shape ``(d, M, N)`` and the map ``c`` it is paired with.

    ``effective_spectrum`` caches ``dft2(c * w)`` and is recomputed whenever a
    new bank is constructed, so it can never go stale.
    """

    w: np.ndarray
    c: np.ndarray
    effective_spectrum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        c = self.c.plane if isinstance(self.c, SpatialMap) else np.array(self.c, dtype=float)
        if w.ndim == 2:
            w = w[None]
        if w.ndim != 3 or w.shape[-2:] != c.shape:
            raise ValueError(f"filter dims {w.shape} do not match map dims {c.shape}")
        w.setflags(write=False)
        c = np.array(c, dtype=float)
        c.setflags(write=False)
        spec = dft2(c * w)
        spec.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "effective_spectrum", spec)

    @classmethod
    def zeros(cls, d, c):
        c = c.plane if isinstance(c, SpatialMap) else np.asarray(c, dtype=float)
        return cls(np.zeros((d,) + c.shape), c)

    @property
    def channels(self):
        return self.w.shape[0]

    @property
    def shape(self):
        return self.w.shape[-2:]

    @property
    def effective(self):
        """The spatial effective filter ``c * w``."""
        return self.c * self.w


def update_t(x_hat, y_hat, zeta_hat, mu, cw_hat):
    """Closed-form minimiser over the auxiliary spectra.

    ``that = (conj(xhat) yhat - zeta + mu cwhat) / (conj(xhat) xhat + mu)``,
    element-wise.  ``x_hat`` is the circulant spectrum of the sample.
    """
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    x_hat = np.asarray(x_hat)
    denom = (np.conj(x_hat) * x_hat).real + mu
    return (np.conj(x_hat) * y_hat - zeta_hat + mu * cw_hat) / denom


def update_w(zeta_hat, t_hat, mu, c, lam):
    """Closed-form minimiser over the spatial filter.

    ``w = c * Re(idft2(zeta + mu t)) / (lam + mu c^2)``, element-wise.  The
    denominator is at least ``lam``.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    c = np.asarray(c, dtype=float)
    back = idft2(np.asarray(zeta_hat) + mu * np.asarray(t_hat)).real
    return c * back / (lam + mu * c * c)


def update_multiplier(state, cw_hat, beta, mu_max):
    """Dual ascent on the multipliers, then ``mu <- min(mu_max, beta mu)``."""
    zeta = state.zeta_hat + state.mu * (state.t_hat - cw_hat)
    return AdmmState(state.t_hat, zeta, min(mu_max, beta * state.mu), state.iteration + 1)


def _rel(num, den):
    return num / den if den > 0 else 0.0


def balance_penalty(mu, primal, dual, limit):
    """Residual-balancing rescale of ``mu`` from relative residuals."""
    if primal <= 0 or dual <= 0:
        return mu
    return mu * min(max(np.sqrt(primal / dual), 1.0 / limit), limit)


def _as_stack(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 2:
        x = x[None]
    if x.ndim != 3:
        raise ValueError(f"sample must be (d, M, N) or (M, N), got shape {x.shape}")
    return x


def iterate(x, y, c, cfg, warm_start=None):
    """Run the ADMM sweeps, yielding ``(w, state)`` after each one.

    ``t_hat`` and ``zeta_hat`` start at zero; ``w`` starts from
    ``warm_start.w`` or zero.
    """
    x = _as_stack(x)
    y = np.asarray(y, dtype=float)
    c = c.plane if isinstance(c, SpatialMap) else np.asarray(c, dtype=float)
    if y.shape != x.shape[-2:] or c.shape != x.shape[-2:]:
        raise ValueError(f"dims mismatch: sample {x.shape[-2:]}, label {y.shape}, map {c.shape}")
    if warm_start is not None:
        if warm_start.w.shape != x.shape:
            raise ValueError(f"warm start dims {warm_start.w.shape} do not match sample {x.shape}")
        w = np.array(warm_start.w)
    else:
        w = np.zeros_like(x)

    x_hat = circulant_spectrum(x)
    y_hat = dft2(y)
    cw_hat = dft2(c * w)
    state = AdmmState(np.zeros_like(x_hat), np.zeros_like(x_hat), cfg.mu0, 0)
    balanced = cfg.penalty == "balanced"

    for _ in range(cfg.iterations):
        mu = state.mu
        t_hat = update_t(x_hat, y_hat, state.zeta_hat, mu, cw_hat)
        t_relaxed = t_hat if cfg.relax == 1.0 else cfg.relax * t_hat + (1.0 - cfg.relax) * cw_hat
        w = update_w(state.zeta_hat, t_relaxed, mu, c, cfg.lam)
        prev = cw_hat
        cw_hat = dft2(c * w)
        state = replace(state, t_hat=t_relaxed)
        if balanced:
            state = update_multiplier(state, cw_hat, 1.0, np.inf)
        else:
            state = update_multiplier(state, cw_hat, cfg.beta, cfg.mu_max)

        primal = _rel(np.linalg.norm(t_hat - cw_hat), max(np.linalg.norm(t_hat), np.linalg.norm(cw_hat)))
        if balanced:
            dual = _rel(np.linalg.norm(cw_hat - prev), np.linalg.norm(cw_hat))
            state = replace(state, mu=balance_penalty(mu, primal, dual, cfg.balance_max))
        yield w, state
        if cfg.tol is not None and primal < cfg.tol:
            return


def train(x, y, c, cfg, warm_start=None, return_state=False):
    """Train a :class:`FilterBank` on one base sample.

    Parameters
    ----------
    x : ndarray, shape (d, M, N)
        Base training sample, target centre at the origin.
    y : ndarray, shape (M, N)
        Desired response.
    c : SpatialMap or ndarray
        Spatial map on the same grid.
    cfg : SolverConfig
    warm_start : FilterBank, optional
        Initial filter; zero when omitted.
    return_state : bool
        Also return the final :class:`AdmmState`.
    """
    w, state = None, None
    for w, state in iterate(x, y, c, cfg, warm_start):
        pass
    bank = FilterBank(w, c)
    return (bank, state) if return_state else bank
