"""Closed-form complexity, latency, and resource figures, plus reconciliation.

Complex-multiplication totals cover the modulator, the demodulator, and the
N-point equalizer transform of a frequency-domain-equalized link.  Latency
figures model pipelined block processing from first symbol in to last symbol
out, built on a per-size table of FFT-core processing cycles and a fixed
multiplier delay.  The reconciliation helper compares a closed-form total
against the instrumented counter of an actual run.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .errors import ConfigError, MissingCostEntry
from .numerics import is_pow2

__all__ = [
    "ARCH_KINDS",
    "LATENCY_KINDS",
    "CostModel",
    "ResourceCount",
    "ReconcileReport",
    "AnalysisRow",
    "cm_count",
    "latency",
    "latency_delta",
    "resources",
    "reconcile",
    "sweep",
    "rows_to_csv",
]

ARCH_KINDS = (
    "FFT_TD_FD",
    "FFT_TD_TD",
    "FFT_FD_FD",
    "DIR_TD_FD",
    "DIR_TD_TD",
    "DIR_FD_FD",
    "DIR_FD_FD_SPARSE",
)

LATENCY_KINDS = ("FFT_TD_FD", "DIR_TD_TD", "DIR_FD_FD")

#: Processing cycles of a pipelined streaming radix-2 FFT core, by size.
#: Sizes 2 and 4 are deliberately absent; requesting them is an error rather
#: than an extrapolation.
DEFAULT_FFT_CYCLES: Mapping[int, int] = MappingProxyType(
    {8: 57, 16: 110, 32: 126, 64: 177, 128: 241, 256: 387, 512: 643, 1024: 1170, 2048: 2194}
)


@dataclass(frozen=True)
class CostModel:
    """Per-size FFT processing cycles and complex-multiplier latency."""

    p_cycles: Mapping[int, int] = field(default_factory=lambda: DEFAULT_FFT_CYCLES)
    t_mul: int = 12

    def p(self, size: int) -> int:
        try:
            return self.p_cycles[size]
        except KeyError:
            raise MissingCostEntry(f"no cycle figure for a {size}-point transform") from None


@dataclass(frozen=True)
class ResourceCount:
    fft_cores: int
    multipliers: int
    rw_rams: int
    r_or_w_rams: int


def _geometry(k: int, m: int) -> tuple[int, int, int, int]:
    if not (is_pow2(k) and is_pow2(m)):
        raise ConfigError(f"K and M must be powers of two, got K={k}, M={m}")
    n = k * m
    return n, k.bit_length() - 1, m.bit_length() - 1, n.bit_length() - 1


def cm_count(kind: str, k: int, m: int, l: int | None = None) -> int:
    """Total complex multiplications of one modulate-equalize-demodulate block."""
    n, log_k, log_m, log_n = _geometry(k, m)
    if kind == "FFT_TD_FD":
        return 2 * n * log_n + 2 * n
    if kind == "FFT_TD_TD":
        return 2 * n * log_n + n * log_m + 2 * n
    if kind == "FFT_FD_FD":
        return 2 * n * log_n + n * log_k + 2 * n
    if kind == "DIR_TD_FD":
        return n * log_n + (k + m) * n
    if kind == "DIR_TD_TD":
        return n * log_n + n * log_k + 2 * m * n
    if kind == "DIR_FD_FD":
        return n * log_n + n * log_m + 2 * k * n
    if kind == "DIR_FD_FD_SPARSE":
        if l is None:
            raise ConfigError("the sparse frequency-domain count needs the band overlap L")
        return n * log_n + n * log_m + 2 * l * n
    raise ConfigError(f"unknown architecture kind {kind!r}")


def latency(kind: str, k: int, m: int, cost: CostModel = CostModel()) -> int:
    """Block latency in cycles, first symbol in to last symbol out."""
    n, _, _, _ = _geometry(k, m)
    if kind == "FFT_TD_FD":
        return 6 * n + 3 * (k + m) + cost.p(n) + 3 * (cost.p(k) + cost.p(m)) + 2 * cost.t_mul
    if kind == "DIR_TD_TD":
        return 5 * n + 2 * k + 2 * cost.p(n) + 2 * cost.p(k) + 2 * cost.t_mul
    if kind == "DIR_FD_FD":
        return 5 * n + 2 * m + 2 * cost.p(n) + 2 * cost.p(m) + 2 * cost.t_mul
    raise ConfigError(f"latency is defined for {LATENCY_KINDS}, got {kind!r}")


def latency_delta(k: int, m: int, cost: CostModel = CostModel()) -> int:
    """Extra cycles of the FFT pipeline over the direct time-domain modem."""
    n, _, _, _ = _geometry(k, m)
    return n + k + 3 * m + cost.p(k) + 3 * cost.p(m) - cost.p(n)


def resources(kind: str, l_max: int = 16) -> ResourceCount:
    """FPGA resource budget of either architecture."""
    if l_max < 1:
        raise ConfigError("l_max must be at least 1")
    if kind == "FFT_BASED":
        return ResourceCount(fft_cores=7, multipliers=2, rw_rams=4, r_or_w_rams=2)
    if kind == "DIRECT":
        return ResourceCount(
            fft_cores=4, multipliers=2 * l_max, rw_rams=2 * l_max, r_or_w_rams=2 * l_max
        )
    raise ConfigError(f"resource kind must be 'FFT_BASED' or 'DIRECT', got {kind!r}")


@dataclass(frozen=True)
class ReconcileReport:
    """Closed-form versus instrumented multiplication count for one run."""

    kind: str
    k: int
    m: int
    expected: int
    measured: int
    stages: Mapping[str, int] | None = None

    @property
    def passed(self) -> bool:
        return self.expected == self.measured

    def __str__(self) -> str:
        head = (
            f"{self.kind} K={self.k} M={self.m} N={self.k * self.m}: "
            f"expected {self.expected}, measured {self.measured} -> "
            f"{'PASS' if self.passed else 'MISMATCH'}"
        )
        if self.passed or not self.stages:
            return head
        lines = [head] + [f"  {name}: {count}" for name, count in self.stages.items()]
        return "\n".join(lines)


def reconcile(
    kind: str,
    k: int,
    m: int,
    measured: int,
    l: int | None = None,
    stages: Mapping[str, int] | None = None,
) -> ReconcileReport:
    """Compare an instrumented counter reading with the closed-form total."""
    return ReconcileReport(kind, k, m, cm_count(kind, k, m, l), measured, stages)


@dataclass(frozen=True)
class AnalysisRow:
    kind: str
    k: int
    m: int
    n: int
    cm: int
    latency: int | None
    delta: int | None
    increase_pct: float | None
    status: str = "ok"


def sweep(
    kinds: list[str],
    geometries: list[tuple[int, int]],
    cost: CostModel = CostModel(),
    l: int | None = None,
) -> list[AnalysisRow]:
    """Evaluate counts and latency over kind/geometry combinations.

    Rows whose transform sizes are missing from the cost table are emitted
    with empty latency fields and a ``missing cost entry`` status instead of
    failing the whole sweep.
    """
    rows = []
    for kind in kinds:
        if kind not in ARCH_KINDS:
            raise ConfigError(f"unknown architecture kind {kind!r}")
        for k, m in geometries:
            cm = cm_count(kind, k, m, l)
            lat = delta = pct = None
            status = "ok"
            if kind in LATENCY_KINDS:
                try:
                    lat = latency(kind, k, m, cost)
                    delta = latency_delta(k, m, cost)
                    base = latency("DIR_TD_TD", k, m, cost)
                    pct = 100.0 * delta / base
                except MissingCostEntry:
                    status = "missing cost entry"
                    lat = delta = pct = None
            rows.append(AnalysisRow(kind, k, m, k * m, cm, lat, delta, pct, status))
    return rows


def rows_to_csv(rows: list[AnalysisRow]) -> str:
    buf = io.StringIO()
    buf.write("kind,K,M,N,cm,latency,delta,increase_pct,status\n")
    for r in rows:
        lat = "" if r.latency is None else str(r.latency)
        delta = "" if r.delta is None else str(r.delta)
        pct = "" if r.increase_pct is None else f"{r.increase_pct:.1f}"
        buf.write(f"{r.kind},{r.k},{r.m},{r.n},{r.cm},{lat},{delta},{pct},{r.status}\n")
    return buf.getvalue()
