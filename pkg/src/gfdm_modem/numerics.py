"""Deterministic complex-vector kernels.

Radix-2 DFT/IDFT with an explicit complex-multiplication counter, polyphase
reshaping, and the discrete Zak transforms in both domains.

Conventions
-----------
* The DFT matrix is ``F[a, b] = exp(-2j*pi*a*b/n)`` and the inverse kernel is
  its conjugate ``F^H``.  Neither carries a ``1/n`` factor; every scale factor
  in the modem equations is applied explicitly by the caller.
* ``polyphase(a, Q, P)`` is the row-major ``Q x P`` reshape, so row ``q`` holds
  ``a[q*P : (q+1)*P]`` and column ``p`` is ``a`` decimated by ``P`` with
  phase ``p``.
* Transform cost is counted as ``(n/2) * log2(n)`` complex multiplications per
  length-``n`` vector for ``n > 2`` and zero for ``n <= 2`` (the 2-point
  butterfly needs additions only).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import ConfigError

__all__ = [
    "MulCounter",
    "dft",
    "fft_mul_count",
    "is_pow2",
    "polyphase",
    "unpolyphase",
    "zak_time",
    "zak_freq",
]


def is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def _require_pow2(n: int, what: str = "length") -> None:
    if not is_pow2(n):
        raise ConfigError(f"{what} must be a power of two, got {n}")


class MulCounter:
    """Monotone counter of complex multiplications.

    One counter belongs to one modem instance; it is the only mutable state in
    the numeric layer.
    """

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def add(self, k: int) -> None:
        if k < 0:
            raise ValueError("counter increments must be nonnegative")
        self.count += k

    def reset(self) -> None:
        self.count = 0

    def __repr__(self) -> str:
        return f"MulCounter(count={self.count})"


def fft_mul_count(n: int) -> int:
    """Complex multiplications of one length-``n`` radix-2 transform."""
    _require_pow2(n, "transform size")
    if n <= 2:
        return 0
    return (n // 2) * (n.bit_length() - 1)


@lru_cache(maxsize=None)
def _bit_reversal(n: int) -> np.ndarray:
    perm = np.zeros(n, dtype=np.intp)
    for i in range(1, n):
        perm[i] = (perm[i >> 1] >> 1) | ((i & 1) * (n >> 1))
    return perm


@lru_cache(maxsize=None)
def _twiddles(size: int) -> np.ndarray:
    # Forward twiddles for one butterfly stage of span `size`.
    half = size // 2
    return np.exp(-2j * np.pi * np.arange(half) / size)


def dft(x: np.ndarray, inverse: bool = False, counter: MulCounter | None = None) -> np.ndarray:
    """Radix-2 transform along axis 0 of a 1-D or 2-D array.

    Iterative decimation-in-time with precomputed twiddle tables; the
    multiplication count is deterministic.  A 2-D input is treated as a batch
    of column vectors.  No normalization is applied in either direction.
    """
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim not in (1, 2):
        raise ConfigError("dft expects a vector or a batch of column vectors")
    n = a.shape[0]
    _require_pow2(n, "transform size")
    batch = 1 if a.ndim == 1 else a.shape[1]

    if n == 1:
        return a.copy()

    a = a[_bit_reversal(n)].copy()
    flat = a.ndim == 1
    if flat:
        a = a[:, None]

    size = 2
    while size <= n:
        half = size // 2
        w = _twiddles(size)
        if inverse:
            w = w.conj()
        blk = a.reshape(n // size, size, -1)
        t = blk[:, half:, :] * w[None, :, None]
        top = blk[:, :half, :]
        blk[:, half:, :] = top - t
        blk[:, :half, :] = top + t
        size *= 2

    if counter is not None:
        counter.add(fft_mul_count(n) * batch)
    return a[:, 0] if flat else a


def polyphase(a: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Reshape a length ``rows*cols`` vector into its ``rows x cols`` polyphase matrix.

    ``out[q, p] = a[p + q*cols]``: column ``p`` samples ``a`` by the factor
    ``cols`` starting at phase ``p``.
    """
    v = np.asarray(a)
    if v.ndim != 1 or v.size != rows * cols:
        raise ConfigError(
            f"polyphase needs a vector of length {rows}*{cols}={rows * cols}, got shape {v.shape}"
        )
    return v.reshape(rows, cols)


def unpolyphase(mat: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`polyphase` (row-major flatten)."""
    m = np.asarray(mat)
    if m.ndim != 2:
        raise ConfigError("unpolyphase expects a matrix")
    return m.reshape(-1)


def zak_time(a: np.ndarray, rows: int, cols: int, counter: MulCounter | None = None) -> np.ndarray:
    """Discrete Zak transform: forward DFT down each polyphase column."""
    return dft(polyphase(a, rows, cols), counter=counter)


def zak_freq(af: np.ndarray, rows: int, cols: int, counter: MulCounter | None = None) -> np.ndarray:
    """Dual Zak transform of a spectrum: scaled inverse DFT down each polyphase column."""
    return dft(polyphase(af, rows, cols), inverse=True, counter=counter) / rows
