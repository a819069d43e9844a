"""2-D DFT primitives, circular products and windows.

Conventions used throughout the package
---------------------------------------
* ``dft2``/``idft2`` are the *unitary* transforms, so Parseval holds without
  an ``M*N`` factor and spatial and Fourier norms can be mixed freely.
* A base sample ``x`` acts as the circulant operator ``X^T`` whose rows are
  the cyclic shifts of ``x``; applied to a plane ``w`` this is the circular
  convolution ``x * w``.  Its eigenvalues are the *unnormalized* transform
  ``fft2(x)``, exposed as :func:`circulant_spectrum`.  Hence
  ``dft2(x * w) == circulant_spectrum(x) * dft2(w)`` exactly.
* Labels, maps and filters keep the target centre at grid index ``(0, 0)``
  (circularly wrapped).  :func:`to_origin` moves a patch-centred plane there.

Planes are plain ndarrays; every routine operates on the last two axes so a
``(d, M, N)`` stack is handled channel-wise.
"""

import numpy as np

__all__ = [
    "dft2",
    "idft2",
    "real_part",
    "circulant_spectrum",
    "circular_convolve",
    "circular_correlate",
    "hann_window",
    "gaussian_label",
    "wrapped_offsets",
    "to_origin",
    "from_origin",
]

_AXES = (-2, -1)


def _check_finite(a, name):
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] < 1 or a.shape[-2] < 1:
        raise ValueError(f"{name} must have at least two non-empty axes, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    return a


def dft2(p):
    """Unitary 2-D DFT over the last two axes."""
    p = _check_finite(p, "plane")
    return np.fft.fft2(p, axes=_AXES, norm="ortho")


def idft2(s, shape=None):
    """Inverse of :func:`dft2`.

    Parameters
    ----------
    s : array_like
        Spectrum, complex, last two axes ``(M, N)``.
    shape : tuple of int, optional
        Expected ``(M, N)``; a mismatch raises ``ValueError``.
    """
    s = _check_finite(s, "spectrum")
    if shape is not None and tuple(s.shape[-2:]) != tuple(shape):
        raise ValueError(f"spectrum dims {s.shape[-2:]} do not match {tuple(shape)}")
    return np.fft.ifft2(s, axes=_AXES, norm="ortho")


def real_part(z, tol=1e-8):
    """Real part of an inverse transform whose imaginary residue must be negligible.

    ``tol`` is relative to the largest magnitude in ``z``.
    """
    z = np.asarray(z)
    if np.iscomplexobj(z):
        scale = max(float(np.max(np.abs(z), initial=0.0)), 1.0)
        resid = float(np.max(np.abs(z.imag), initial=0.0))
        if resid > tol * scale:
            raise ValueError(f"imaginary residue {resid:.3g} exceeds tolerance")
        return z.real.copy()
    return z.astype(float, copy=True)


def circulant_spectrum(x):
    """Eigenvalues of the circulant operator built from ``x``.

    This is the unnormalized transform, ``sqrt(M*N) * dft2(x)``.
    """
    x = _check_finite(x, "sample")
    return np.fft.fft2(x, axes=_AXES)


def _pair(x, w):
    x = _check_finite(x, "x")
    w = _check_finite(w, "w")
    if x.shape[-2:] != w.shape[-2:]:
        raise ValueError(f"dims mismatch: {x.shape[-2:]} vs {w.shape[-2:]}")
    return x, w


def circular_convolve(x, w):
    """Circular convolution ``(x * w)[k] = sum_p x[k - p] w[p]``.

    Equal to ``idft2(circulant_spectrum(x) * dft2(w))``; the result is real
    for real inputs.
    """
    x, w = _pair(x, w)
    out = np.fft.ifft2(np.fft.fft2(x, axes=_AXES) * np.fft.fft2(w, axes=_AXES), axes=_AXES)
    if np.isrealobj(x) and np.isrealobj(w):
        return out.real
    return out


def circular_correlate(x, w):
    """Circular cross-correlation ``r[k] = sum_p x[p] w[p + k]``.

    Equal to ``idft2(conj(circulant_spectrum(x)) * dft2(w))``.  An impulse
    at ``(1, 0)`` in ``x`` yields ``w`` rolled by ``-1`` along rows.
    """
    x, w = _pair(x, w)
    out = np.fft.ifft2(np.conj(np.fft.fft2(x, axes=_AXES)) * np.fft.fft2(w, axes=_AXES), axes=_AXES)
    if np.isrealobj(x) and np.isrealobj(w):
        return out.real
    return out


def hann_window(M, N):
    """Separable Hann window with zero boundary rows and columns.

    A length-1 axis is defined as the constant 1.
    """
    if M < 1 or N < 1:
        raise ValueError(f"window dims must be >= 1, got {(M, N)}")
    return np.outer(np.hanning(M), np.hanning(N))


def wrapped_offsets(n):
    """Signed cyclic displacement of every index of an axis of length ``n``.

    Even ``n`` gives ``[0, 1, ..., n/2 - 1, -n/2, ..., -1]``.
    """
    return (np.arange(n) + n // 2) % n - n // 2


def gaussian_label(M, N, sigma):
    """Periodic Gaussian with peak 1 at the grid origin.

    Distances are wrapped displacements, so the zero-shift sample gets the
    maximal label and the plane is symmetric under negation of offsets.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if M < 1 or N < 1:
        raise ValueError(f"label dims must be >= 1, got {(M, N)}")
    r = wrapped_offsets(M)[:, None]
    c = wrapped_offsets(N)[None, :]
    return np.exp(-(r**2 + c**2) / (2.0 * sigma**2))


def to_origin(p):
    """Move the centre element ``(M//2, N//2)`` of a patch-centred plane to ``(0, 0)``."""
    return np.fft.ifftshift(p, axes=_AXES)


def from_origin(p):
    """Inverse of :func:`to_origin`, for display."""
    return np.fft.fftshift(p, axes=_AXES)
