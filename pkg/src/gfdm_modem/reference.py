"""Ground-truth dense implementations used to verify the fast engines.

Everything here is deliberately naive: the full N x N modulation matrix,
O(N^2) modulation, dense solves for zero-forcing demodulation, plus symbol
mapping, multi-pulse superposition, and OQAM-precoded two-stream generation.
Intended for N up to a few thousand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SingularMatrix
from .pulses import GfdmParams, PrototypePulse, shift_pulse

__all__ = [
    "ModMatrix",
    "MultiPulseComponent",
    "build_matrix",
    "oracle_modulate",
    "oracle_demod_mf",
    "oracle_demod_zf",
    "map_symbols",
    "demap_symbols",
    "compose_multipulse",
    "fbmc_oqam_modulate",
]

#: Condition estimates at or above this classify the matrix as singular.
COND_LIMIT = 1e8


@dataclass(frozen=True, eq=False)
class ModMatrix:
    """Dense modulation matrix together with its block geometry."""

    mat: np.ndarray
    params: GfdmParams


def build_matrix(pulse: PrototypePulse) -> ModMatrix:
    """N x N modulation matrix; column ``k + m*K`` is the (k, m) pulse.

    The (k, m) pulse is the prototype circularly delayed by ``m*K`` samples
    and modulated onto subcarrier k: ``g[(n - m*K) mod N] * exp(2j*pi*n*k/K)``.
    """
    k, m, n = pulse.params.k, pulse.params.m, pulse.params.n
    idx = np.arange(n)
    phases = np.exp(2j * np.pi * np.outer(idx, np.arange(k)) / k)  # N x K
    shifts = np.empty((n, m), dtype=np.complex128)
    for mm in range(m):
        shifts[:, mm] = np.roll(pulse.time, mm * k)
    cols = phases[:, :, None] * shifts[:, None, :]  # N x K x M
    return ModMatrix(cols.transpose(0, 2, 1).reshape(n, n), pulse.params)


def oracle_modulate(mm: ModMatrix, grid: np.ndarray) -> np.ndarray:
    """x = A vec(D) with the column-major symbol vector d[k + m*K] = D[k, m]."""
    if grid.shape != (mm.params.k, mm.params.m):
        raise ConfigError(f"grid shape {grid.shape} does not match {mm.params.k}x{mm.params.m}")
    return mm.mat @ grid.flatten(order="F")


def oracle_demod_mf(mm: ModMatrix, x: np.ndarray) -> np.ndarray:
    """Matched-filter grid estimate unvec(A^H x)."""
    return (mm.mat.conj().T @ x).reshape((mm.params.k, mm.params.m), order="F")


def _condition_estimate(mat: np.ndarray, iters: int = 150) -> float:
    """Power-iteration estimate of cond(A^H A) = cond(A)^2.

    Plain power iteration for the largest eigenvalue of ``A^H A``, then a
    spectral-shift power iteration for the smallest.  Seeded random start
    vectors avoid being structurally orthogonal to the extreme eigenvectors;
    coarse accuracy is enough to separate true singularities from
    well-conditioned windows.
    """
    n = mat.shape[0]
    rng = np.random.default_rng(0x5EED)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)

    def gram(u: np.ndarray) -> np.ndarray:
        return mat.conj().T @ (mat @ u)

    lam_max = 0.0
    for _ in range(iters):
        w = gram(v)
        lam_max = float(np.linalg.norm(w))
        if lam_max == 0.0:
            return np.inf
        v = w / lam_max

    u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    u /= np.linalg.norm(u)
    shift_gain = 0.0
    for _ in range(iters):
        w = lam_max * u - gram(u)
        shift_gain = float(np.linalg.norm(w))
        if shift_gain == 0.0:
            break
        u = w / shift_gain
    lam_min = max(lam_max - shift_gain, 0.0)
    if lam_min == 0.0:
        return np.inf
    return lam_max / lam_min


def oracle_demod_zf(mm: ModMatrix, x: np.ndarray) -> np.ndarray:
    """Zero-forcing grid estimate unvec(A^-1 x) by dense solve."""
    if _condition_estimate(mm.mat) >= COND_LIMIT:
        raise SingularMatrix("modulation matrix is numerically singular")
    try:
        d = np.linalg.solve(mm.mat, x)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
    return d.reshape((mm.params.k, mm.params.m), order="F")


def map_symbols(d_on: np.ndarray, params: GfdmParams) -> np.ndarray:
    """Scatter active symbols onto the K x M grid, subcarrier index fastest."""
    d_on = np.asarray(d_on).reshape(-1)
    if d_on.size != params.n_active:
        raise ConfigError(
            f"expected {params.n_active} symbols for the active set, got {d_on.size}"
        )
    grid = np.zeros((params.k, params.m), dtype=np.complex128)
    it = iter(d_on)
    for m in params.m_on:
        for k in params.k_on:
            grid[k, m] = next(it)
    return grid


def demap_symbols(grid: np.ndarray, params: GfdmParams) -> np.ndarray:
    """Gather the active grid positions back into a symbol vector."""
    if grid.shape != (params.k, params.m):
        raise ConfigError(f"grid shape {grid.shape} does not match {params.k}x{params.m}")
    return np.array([grid[k, m] for m in params.m_on for k in params.k_on], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class MultiPulseComponent:
    """One pulse of a multi-pulse block with its active sets and symbols."""

    pulse: PrototypePulse
    k_on: tuple[int, ...]
    m_on: tuple[int, ...]
    grid: np.ndarray


def compose_multipulse(components: list[MultiPulseComponent]) -> np.ndarray:
    """Superpose per-pulse modulated blocks, each restricted to its active set."""
    if not components:
        raise ConfigError("multi-pulse composition needs at least one component")
    n = components[0].pulse.params.n
    out = np.zeros(n, dtype=np.complex128)
    for comp in components:
        p = comp.pulse.params
        if p.n != n:
            raise ConfigError(f"component block length {p.n} does not match {n}")
        mask = np.zeros((p.k, p.m))
        mask[np.ix_(list(comp.k_on), list(comp.m_on))] = 1.0
        out += oracle_modulate(build_matrix(comp.pulse), comp.grid * mask)
    return out


def fbmc_oqam_modulate(d_qam: np.ndarray, pulse: PrototypePulse) -> np.ndarray:
    """Offset-QAM two-stream block from complex QAM symbols.

    The real parts feed the prototype as-is, the imaginary parts feed a copy
    delayed by half a subsymbol (K/2 samples); both streams carry the
    alternating phase pattern that keeps neighbours orthogonal:
    stream 0 multiplies even subcarriers by j, stream 1 odd subcarriers by j.
    """
    params = pulse.params
    if params.k % 2 != 0:
        raise ConfigError("offset-QAM staggering needs an even subcarrier count")
    if d_qam.shape != (params.k, params.m):
        raise ConfigError(f"grid shape {d_qam.shape} does not match {params.k}x{params.m}")
    k_idx = np.arange(params.k)
    theta0 = np.where(k_idx % 2 == 0, 1j, 1.0)
    theta1 = np.where(k_idx % 2 == 0, 1.0, 1j)
    d0 = theta0[:, None] * d_qam.real
    d1 = theta1[:, None] * d_qam.imag
    x0 = oracle_modulate(build_matrix(pulse), d0)
    x1 = oracle_modulate(build_matrix(shift_pulse(pulse, params.k // 2)), d1)
    return x0 + x1
