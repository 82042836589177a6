"""Prototype pulse synthesis and Zak-domain modem windows.

A prototype pulse is stored as the pair ``(g, g_f)`` of its ``N`` time samples
and its ``N``-point spectrum, normalized to unit time-domain energy.  The
transmit window of a ``K x M`` block geometry is the ``K x M`` matrix of Zak
coefficients of the pulse; modulation and demodulation reduce to elementwise
multiplication by such windows.

The window of the time-domain processing path and the window of the
frequency-domain path are different matrices: they are coupled elementwise by
the phase ``exp(-2j*pi*p*q/N)``.  Every operation here therefore takes the
target domain explicitly, and receive windows are derived from the transmit
window of the same domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, SingularWindow
from .numerics import dft, is_pow2, zak_freq, zak_time

__all__ = [
    "GfdmParams",
    "PrototypePulse",
    "WindowPair",
    "PULSE_KINDS",
    "make_prototype",
    "shift_pulse",
    "tx_window",
    "rx_window",
    "window_pair",
    "freq_overlap",
]

PULSE_KINDS = ("RC", "RRC", "DIRICHLET", "RECT_TD")

#: Below this magnitude a zero-forcing window entry counts as singular.
SINGULAR_EPS = 1e-8


@dataclass(frozen=True)
class GfdmParams:
    """Block geometry: K subcarriers times M subsymbols, with active sets."""

    k: int
    m: int
    k_on: tuple[int, ...] = field(default=())
    m_on: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if not (is_pow2(self.k) and is_pow2(self.m)):
            raise ConfigError(f"K and M must be powers of two, got K={self.k}, M={self.m}")
        k_on = tuple(sorted(set(self.k_on))) if self.k_on else tuple(range(self.k))
        m_on = tuple(sorted(set(self.m_on))) if self.m_on else tuple(range(self.m))
        if not k_on or any(not 0 <= i < self.k for i in k_on):
            raise ConfigError(f"active subcarrier set out of range for K={self.k}: {k_on}")
        if not m_on or any(not 0 <= i < self.m for i in m_on):
            raise ConfigError(f"active subsymbol set out of range for M={self.m}: {m_on}")
        object.__setattr__(self, "k_on", k_on)
        object.__setattr__(self, "m_on", m_on)

    @property
    def n(self) -> int:
        return self.k * self.m

    @property
    def n_active(self) -> int:
        return len(self.k_on) * len(self.m_on)


@dataclass(frozen=True, eq=False)
class PrototypePulse:
    """Unit-energy prototype pulse with matched time and frequency samples."""

    kind: str
    params: GfdmParams
    alpha: float
    delta: float
    time: np.ndarray
    freq: np.ndarray


@dataclass(frozen=True, eq=False)
class WindowPair:
    """Transmit and receive windows of one processing domain."""

    w_tx: np.ndarray
    w_rx: np.ndarray
    rx_kind: str
    domain: str


def _rc_profile(u: np.ndarray, alpha: float) -> np.ndarray:
    """Raised-cosine frequency profile r_alpha(u) with unit passband."""
    u = np.abs(u)
    out = np.zeros_like(u)
    out[u <= (1 - alpha) / 2] = 1.0
    if alpha > 0:
        roll = (u > (1 - alpha) / 2) & (u <= (1 + alpha) / 2)
        out[roll] = 0.5 * (1 + np.cos((np.pi / alpha) * (u[roll] - (1 - alpha) / 2)))
    return out


def make_prototype(kind: str, params: GfdmParams, alpha: float = 0.0, delta: float = 0.0) -> PrototypePulse:
    """Synthesize a prototype pulse.

    ``RC``/``RRC`` sample the (root) raised-cosine profile on the grid
    ``u = (q + delta)/M`` over the bins ``q = -M .. M-1``; ``delta`` is the
    half-sample shift that keeps even/even geometries invertible.
    ``DIRICHLET`` is flat over the M bins of subcarrier band 0 and
    ``RECT_TD`` is flat over the K samples of subsymbol 0.

    A singular transmit window (for example RC with ``alpha=0``, ``delta=0``
    on an even/even geometry) is not an error here; it surfaces when a
    zero-forcing receive window is requested.
    """
    if kind not in PULSE_KINDS:
        raise ConfigError(f"unknown pulse kind {kind!r}, expected one of {PULSE_KINDS}")
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"rolloff must be in [0, 1], got {alpha}")
    if delta not in (0.0, 0.5):
        raise ConfigError(f"frequency-grid shift must be 0 or 1/2, got {delta}")

    k, m, n = params.k, params.m, params.n
    if kind in ("RC", "RRC"):
        if k < 2:
            raise ConfigError("the raised-cosine grid spans two subcarrier bands, needs K >= 2")
        gf = np.zeros(n, dtype=np.complex128)
        q = np.arange(-m, m)
        prof = _rc_profile((q + delta) / m, alpha)
        if kind == "RRC":
            prof = np.sqrt(prof)
        gf[q % n] = prof
        g = dft(gf, inverse=True) / n
    elif kind == "DIRICHLET":
        gf = np.zeros(n, dtype=np.complex128)
        gf[:m] = 1.0
        g = dft(gf, inverse=True) / n
    else:  # RECT_TD
        g = np.zeros(n, dtype=np.complex128)
        g[:k] = 1.0
        gf = dft(g)

    energy = np.linalg.norm(g)
    if energy == 0.0:
        raise ConfigError("degenerate pulse with zero energy")
    return PrototypePulse(kind, params, float(alpha), float(delta), g / energy, gf / energy)


def shift_pulse(pulse: PrototypePulse, shift: int) -> PrototypePulse:
    """Circularly delay the time pulse by ``shift`` samples."""
    g = np.roll(pulse.time, shift)
    return PrototypePulse(pulse.kind, pulse.params, pulse.alpha, pulse.delta, g, dft(g))


def tx_window(pulse: PrototypePulse, domain: str) -> np.ndarray:
    """K x M transmit window of the given processing domain.

    ``TD`` builds it from the Zak transform of the time pulse, ``FD`` from the
    dual Zak transform of the spectrum.  The two matrices agree only up to the
    elementwise phase ``exp(-2j*pi*p*q/N)``.
    """
    k, m = pulse.params.k, pulse.params.m
    if domain == "TD":
        return k * zak_time(pulse.time, m, k).T
    if domain == "FD":
        return k * zak_freq(pulse.freq, k, m)
    raise ConfigError(f"domain must be 'TD' or 'FD', got {domain!r}")


def rx_window(w_tx: np.ndarray, kind: str, eps: float = SINGULAR_EPS) -> np.ndarray:
    """Receive window matching a transmit window of the same domain.

    ``ZF`` inverts the window elementwise so that demodulation after
    modulation is the identity (``w_rx * w_tx == 1``); it raises
    :class:`SingularWindow` when any entry of ``w_tx`` falls below ``eps``.
    ``MF`` is the plain conjugate without renormalization.
    """
    w = np.asarray(w_tx)
    if kind == "ZF":
        low = np.abs(w).min()
        if low <= eps:
            raise SingularWindow(
                f"transmit window has |entry|={low:.3e} <= {eps:.1e}; "
                "zero-forcing dual does not exist for this pulse and geometry"
            )
        return 1.0 / w
    if kind == "MF":
        return w.conj()
    raise ConfigError(f"receive window kind must be 'ZF' or 'MF', got {kind!r}")


def window_pair(pulse: PrototypePulse, domain: str, rx_kind: str, eps: float = SINGULAR_EPS) -> WindowPair:
    """Transmit/receive window pair for one domain."""
    w_tx = tx_window(pulse, domain)
    return WindowPair(w_tx, rx_window(w_tx, rx_kind, eps), rx_kind, domain)


def freq_overlap(pulse: PrototypePulse, tol: float = 1e-12) -> int:
    """Number of consecutive subcarrier bands covering the pulse spectrum.

    The spectrum is split into K bands of M bins.  Returns the smallest L such
    that all bins with ``|g_f| > tol * max|g_f|`` fall inside L cyclically
    consecutive bands.
    """
    k, m = pulse.params.k, pulse.params.m
    mags = np.abs(pulse.freq).reshape(k, m)
    active = np.flatnonzero(mags.max(axis=1) > tol * np.abs(pulse.freq).max())
    count = active.size
    if count == 0:
        return 0
    if count == k:
        return k
    # Largest cyclic gap between active bands bounds the covering window.
    gaps = np.diff(np.concatenate([active, [active[0] + k]]))
    return k - int(gaps.max()) + 1
