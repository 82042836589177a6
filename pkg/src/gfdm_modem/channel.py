"""Cyclic-prefix framing, multipath channel, and one-tap frequency equalizer.

The noise generator is fully specified so runs are reproducible anywhere:
sample i draws two 64-bit words from a splitmix64 stream seeded by the user,
maps them to uniforms, and applies the Box-Muller transform.  Identical seeds
give bit-identical noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SingularChannel
from .numerics import MulCounter, dft

__all__ = [
    "ChannelSpec",
    "add_cp",
    "remove_cp",
    "apply_channel",
    "fd_equalize_zf",
    "gaussian_pairs",
    "uniform64",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class ChannelSpec:
    """Impulse response, per-sample SNR in dB (``inf`` for noiseless), seed."""

    taps: np.ndarray
    snr_db: float = math.inf
    seed: int = 0

    def __post_init__(self) -> None:
        taps = np.atleast_1d(np.asarray(self.taps, dtype=np.complex128))
        if taps.ndim != 1 or taps.size < 1:
            raise ConfigError("channel needs at least one tap")
        object.__setattr__(self, "taps", taps)


def add_cp(x: np.ndarray, n_cp: int, n_cs: int = 0) -> np.ndarray:
    """Prepend the last ``n_cp`` samples and append the first ``n_cs``."""
    x = np.asarray(x).reshape(-1)
    if not 0 <= n_cp <= x.size or not 0 <= n_cs <= x.size:
        raise ConfigError(f"prefix/suffix lengths out of range for block of {x.size}")
    parts = []
    if n_cp:
        parts.append(x[-n_cp:])
    parts.append(x)
    if n_cs:
        parts.append(x[:n_cs])
    return np.concatenate(parts) if len(parts) > 1 else x.copy()


def remove_cp(y: np.ndarray, n_cp: int, n_cs: int = 0) -> np.ndarray:
    """Strip prefix and suffix, returning the core block."""
    y = np.asarray(y).reshape(-1)
    n = y.size - n_cp - n_cs
    if n < 1:
        raise ConfigError("framed block shorter than its prefix plus suffix")
    return y[n_cp : n_cp + n]


def uniform64(seed: int, index: int) -> float:
    """Uniform in (0, 1) from word ``index`` of the splitmix64 stream."""
    state = (seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    # 53-bit mantissa, offset keeps the value strictly positive for log().
    return ((z >> 11) + 0.5) / (1 << 53)


def gaussian_pairs(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """``count`` standard complex Gaussians (unit variance per complex sample)."""
    out = np.empty(count, dtype=np.complex128)
    for i in range(count):
        u1 = uniform64(seed, offset + 2 * i)
        u2 = uniform64(seed, offset + 2 * i + 1)
        r = math.sqrt(-2.0 * math.log(u1))
        out[i] = complex(r * math.cos(2 * math.pi * u2), r * math.sin(2 * math.pi * u2))
    return out / math.sqrt(2.0)


def apply_channel(x_framed: np.ndarray, spec: ChannelSpec) -> np.ndarray:
    """Linear convolution with the taps, truncated to the transmitted length,
    plus circularly symmetric Gaussian noise at the configured per-sample SNR.
    """
    x = np.asarray(x_framed, dtype=np.complex128).reshape(-1)
    y = np.convolve(x, spec.taps)[: x.size]
    if math.isfinite(spec.snr_db):
        power = float(np.mean(np.abs(x) ** 2))
        sigma2 = power / (10.0 ** (spec.snr_db / 10.0))
        y = y + math.sqrt(sigma2) * gaussian_pairs(spec.seed, x.size)
    return y


def fd_equalize_zf(
    y: np.ndarray,
    taps: np.ndarray,
    eps: float = 1e-8,
    counter: MulCounter | None = None,
) -> np.ndarray:
    """One-tap zero-forcing equalizer; output stays in the frequency domain.

    Only the N-point transform is metered, the per-bin division is part of the
    equalizer and outside the modem cost accounting.
    """
    y = np.asarray(y, dtype=np.complex128).reshape(-1)
    h = np.zeros(y.size, dtype=np.complex128)
    t = np.atleast_1d(np.asarray(taps, dtype=np.complex128))
    if t.size > y.size:
        raise ConfigError("more channel taps than block samples")
    h[: t.size] = t
    hf = dft(h)
    if np.abs(hf).min() <= eps:
        raise SingularChannel("channel frequency response has a null bin")
    return dft(y, counter=counter) / hf
