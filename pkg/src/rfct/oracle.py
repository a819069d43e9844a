"""Dense reference solvers for small grids.

These build the circulant matrices explicitly and solve the normal
equations with a pivoted LU factorisation.  They exist to check the FFT and
ADMM code paths and refuse grids with more than ``MAX_CELLS`` cells.
"""

import numpy as np
import scipy.linalg

from .errors import TestScaleError
from .solver import FilterBank
from .spatial_map import SpatialMap

__all__ = [
    "MAX_CELLS",
    "build_circulant",
    "brute_convolve",
    "brute_correlate",
    "brute_response",
    "solve_standard_cf",
    "solve_standard_cf_fourier",
    "solve_rfct_dense",
    "solve_srdcf_equivalent",
    "rfct_objective",
]

MAX_CELLS = 4096


def _guard(shape):
    M, N = shape[-2:]
    if M * N > MAX_CELLS:
        raise TestScaleError(f"grid {M}x{N} exceeds the dense-oracle limit of {MAX_CELLS} cells")


def build_circulant(x):
    """Matrix whose row ``m*N + n`` is ``x`` cyclically shifted by ``(m, n)``, flattened.

    ``build_circulant(x).T @ w.ravel()`` is the circular convolution of
    ``x`` and ``w``.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError(f"expected a single (M, N) plane, got shape {x.shape}")
    _guard(x.shape)
    M, N = x.shape
    rows = np.empty((M * N, M * N))
    for m in range(M):
        for n in range(N):
            rows[m * N + n] = np.roll(x, (m, n), axis=(0, 1)).ravel()
    return rows


def brute_convolve(x, w):
    """Circular convolution by the O(M^2 N^2) double loop."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    _guard(x.shape)
    M, N = x.shape
    out = np.zeros((M, N))
    for k in range(M):
        for l in range(N):
            s = 0.0
            for p in range(M):
                for q in range(N):
                    s += x[(k - p) % M, (l - q) % N] * w[p, q]
            out[k, l] = s
    return out


def brute_correlate(x, w):
    """Circular cross-correlation ``sum_p x[p] w[p + k]`` by the double loop."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    _guard(x.shape)
    M, N = x.shape
    out = np.zeros((M, N))
    for k in range(M):
        for l in range(N):
            s = 0.0
            for p in range(M):
                for q in range(N):
                    s += x[p, q] * w[(p + k) % M, (q + l) % N]
            out[k, l] = s
    return out


def brute_response(z, w, c):
    """Detection response summed over channels with explicit circulant products."""
    z = _channels(z)
    w = _channels(w)
    c = c.plane if isinstance(c, SpatialMap) else np.asarray(c, dtype=float)
    out = np.zeros(z.shape[-2:])
    for zl, wl in zip(z, w):
        out += (build_circulant(zl).T @ (c * wl).ravel()).reshape(out.shape)
    return out


def _channels(x):
    x = np.asarray(x, dtype=float)
    x = x[None] if x.ndim == 2 else x
    _guard(x.shape)
    return x


def _solve(A, b):
    return scipy.linalg.lu_solve(scipy.linalg.lu_factor(A), b)


def solve_standard_cf(x, y, lam):
    """Per-channel ridge regression ``(X X^T + lam I) w = X y``."""
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    x = _channels(x)
    y = np.asarray(y, dtype=float)
    n = y.size
    w = np.empty_like(x)
    for l, xl in enumerate(x):
        X = build_circulant(xl)
        w[l] = _solve(X @ X.T + lam * np.eye(n), X @ y.ravel()).reshape(y.shape)
    return FilterBank(w, np.ones(y.shape))


def solve_standard_cf_fourier(x, y, lam):
    """Per-frequency closed form ``what = conj(xhat) yhat / (|xhat|^2 + lam)``.

    Independent of :func:`solve_standard_cf`; the two must agree.
    """
    x = _channels(x)
    y = np.asarray(y, dtype=float)
    xh = np.fft.fft2(x)
    wh = np.conj(xh) * np.fft.fft2(y) / (np.abs(xh) ** 2 + lam)
    return FilterBank(np.fft.ifft2(wh).real, np.ones(y.shape))


def solve_rfct_dense(x, y, c, lam):
    """Per-channel minimiser of ``||X^T diag(c) w - y||^2 + lam ||w||^2``.

    Solves ``(diag(c) X X^T diag(c) + lam I) w = diag(c) X y``.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    x = _channels(x)
    y = np.asarray(y, dtype=float)
    cp = c.plane if isinstance(c, SpatialMap) else np.asarray(c, dtype=float)
    cv = cp.ravel()
    n = y.size
    w = np.empty_like(x)
    for l, xl in enumerate(x):
        X = build_circulant(xl)
        A = (cv[:, None] * (X @ X.T)) * cv[None, :] + lam * np.eye(n)
        w[l] = _solve(A, cv * (X @ y.ravel())).reshape(y.shape)
    return FilterBank(w, cp)


def solve_srdcf_equivalent(x, y, c, lam):
    """Minimise ``||X^T t - y||^2 + lam ||diag(c)^-1 t||^2`` for strictly non-zero ``c``.

    Returns the stack ``t`` of shape ``(d, M, N)``; it equals ``c * w`` for
    the ``w`` of :func:`solve_rfct_dense`.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    x = _channels(x)
    y = np.asarray(y, dtype=float)
    cp = c.plane if isinstance(c, SpatialMap) else np.asarray(c, dtype=float)
    if np.any(cp == 0):
        raise ValueError("map has zero entries; diag(c) is not invertible")
    inv2 = 1.0 / cp.ravel() ** 2
    t = np.empty_like(x)
    for l, xl in enumerate(x):
        X = build_circulant(xl)
        t[l] = _solve(X @ X.T + lam * np.diag(inv2), X @ y.ravel()).reshape(y.shape)
    return t


def rfct_objective(x, y, c, lam, w):
    """Objective value summed over channels, evaluated with dense circulants."""
    x = _channels(x)
    w = np.asarray(w, dtype=float)
    w = w[None] if w.ndim == 2 else w
    cp = c.plane if isinstance(c, SpatialMap) else np.asarray(c, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    total = 0.0
    for xl, wl in zip(x, w):
        r = build_circulant(xl).T @ (cp * wl).ravel() - y
        total += r @ r + lam * np.sum(wl**2)
    return float(total)
