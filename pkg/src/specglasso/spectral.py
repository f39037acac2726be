"""Discrete Fourier transforms and smoothed periodograms at Fourier frequencies.

Conventions
-----------
* Fourier indices live in ``F_n = {-[(n-1)/2], ..., [n/2]}``; any integer
  index is reduced modulo ``n`` into that set.
* ``d_j = n^{-1/2} sum_{t=1}^n X_t exp(-i t w_j)`` with ``w_j = 2 pi j / n``.
* Inputs are column-centered unless ``center=False``; the DFT at frequency
  zero is the only one affected by the mean.
* The averaged periodogram carries the ``1/(2 pi)`` factor, so for white
  noise it estimates ``Sigma / (2 pi)``.  The Gram matrix of the DFT data
  matrix, used by node-wise regression, omits it.
"""
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError


@dataclass(frozen=True)
class SpectralEstimate:
    frequency_index: int
    m: int
    n: int
    fhat: np.ndarray

    @property
    def omega(self):
        return 2 * np.pi * self.frequency_index / self.n


def as_panel(X, center=True):
    """Validate an (n, p) real observation matrix, optionally column-centering it."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise InvalidInputError(f"time series panel must be 2-d, got shape {X.shape}")
    if X.shape[0] < 2:
        raise InvalidInputError(f"need at least 2 time points, got {X.shape[0]}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("time series panel contains non-finite values")
    if center:
        X = X - X.mean(axis=0)
    return X


def fourier_grid(n):
    """Return the integer Fourier index set ``F_n`` in increasing order."""
    if n < 2:
        raise InvalidInputError(f"n must be >= 2, got {n}")
    return np.arange(-((n - 1) // 2), n // 2 + 1)


def wrap_index(j, n):
    """Reduce an integer index modulo ``n`` to its representative in ``F_n``."""
    lo = -((n - 1) // 2)
    return (np.asarray(j) - lo) % n + lo


def _check_index(j, n):
    lo, hi = -((n - 1) // 2), n // 2
    if not lo <= j <= hi:
        raise InvalidInputError(f"frequency index {j} outside F_n = [{lo}, {hi}]")


def nearest_fourier_index(omega, n):
    """Snap a frequency in radians to the closest Fourier index.

    Returns ``(j, omega_j)`` where ``omega_j = 2 pi j / n`` is the frequency
    actually used.
    """
    j = int(wrap_index(int(round(omega * n / (2 * np.pi))), n))
    return j, 2 * np.pi * j / n


def smoothing_span(n, rule="floor_sqrt_n"):
    """Half-width ``m`` of the periodogram average for a named rule or explicit count."""
    if isinstance(rule, (int, np.integer)):
        m = int(rule)
    elif rule == "floor_sqrt_n":
        m = math.isqrt(n)
    elif rule == "ceil_4_sqrt_n":
        m = math.ceil(4 * math.sqrt(n))
    else:
        try:
            m = int(rule)
        except (TypeError, ValueError):
            raise InvalidInputError(f"unknown smoothing rule {rule!r}") from None
    if m < 0:
        raise InvalidInputError(f"smoothing span must be >= 0, got {m}")
    return m


def dft(X, j, center=True):
    """DFT of the panel at Fourier index ``j`` by direct summation.

    Returns a complex vector of length p.
    """
    X = as_panel(X, center=center)
    n = X.shape[0]
    _check_index(j, n)
    t = np.arange(1, n + 1)
    phase = np.exp(-1j * t * (2 * np.pi * j / n))
    return phase @ X / np.sqrt(n)


def dft_all(X, center=True):
    """DFTs at every index of ``F_n`` via the FFT.

    Returns ``(indices, D)`` with ``D[i]`` the DFT at ``indices[i]``.
    """
    X = as_panel(X, center=center)
    n = X.shape[0]
    idx = fourier_grid(n)
    # numpy sums over t = 0..n-1; shifting to t = 1..n multiplies by exp(-i w_j)
    F = np.fft.fft(X, axis=0)[idx % n]
    phase = np.exp(-2j * np.pi * idx / n)
    return idx, F * phase[:, None] / np.sqrt(n)


def periodogram(d):
    """Rank-one periodogram ``d d^H``."""
    d = np.asarray(d, dtype=complex).reshape(-1)
    return np.outer(d, d.conj())


def _check_span(n, m):
    if m < 0 or 2 * m + 1 > n:
        raise InvalidInputError(f"smoothing span m={m} needs 2m+1 <= n={n}")


def dft_data_matrix(X, j, m, center=True):
    """Stack the DFTs at indices ``j-m, ..., j+m`` (wrapped) as rows.

    Returns an array of shape (2m+1, p).
    """
    X = as_panel(X, center=center)
    n = X.shape[0]
    _check_index(j, n)
    _check_span(n, m)
    idx = wrap_index(np.arange(j - m, j + m + 1), n)
    t = np.arange(1, n + 1)
    E = np.exp(-1j * np.outer(idx, t) * (2 * np.pi / n))
    return E @ X / np.sqrt(n)


def averaged_periodogram(X, j, m, center=True):
    """Smoothed periodogram ``(1 / (2 pi (2m+1))) sum_{|k|<=m} I(w_{j+k})``.

    The result is made exactly Hermitian.
    """
    X = as_panel(X, center=center)
    Z = dft_data_matrix(X, j, m, center=False)
    S = Z.T @ Z.conj()
    fhat = (S + S.conj().T) / (2 * 2 * np.pi * (2 * m + 1))
    return SpectralEstimate(frequency_index=int(j), m=int(m), n=X.shape[0], fhat=fhat)


def coherence(fhat):
    """Normalize a spectral matrix to unit diagonal."""
    d = np.sqrt(np.real(np.diag(fhat)))
    return fhat / np.outer(d, d)
