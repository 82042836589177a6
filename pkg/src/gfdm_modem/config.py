"""Run configuration: flat JSON in, validated dataclass out."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .numerics import is_pow2
from .pulses import PULSE_KINDS, GfdmParams

__all__ = ["RunConfig", "parse_config", "emit_config", "load_config"]

_RX_KINDS = ("zf", "mf")
_ARCHS = ("fft", "direct")
_DOMAINS = ("td", "fd")


@dataclass(frozen=True)
class RunConfig:
    k: int
    m: int
    pulse: str = "rc"
    alpha: float = 0.5
    delta: float = 0.5
    rx: str = "zf"
    arch: str = "fft"
    domain: str = "td"
    k_on: tuple[int, ...] | None = None
    m_on: tuple[int, ...] | None = None
    n_cp: int = 0
    n_cs: int = 0
    channel_taps: tuple[complex, ...] = (1 + 0j,)
    snr_db: float = math.inf
    seed: int = 0
    l_max: int = 16

    def __post_init__(self) -> None:
        if not (is_pow2(self.k) and is_pow2(self.m)):
            raise ConfigError(f"K and M must be powers of two, got K={self.k}, M={self.m}")
        if self.pulse.upper() not in PULSE_KINDS:
            raise ConfigError(f"unknown pulse kind {self.pulse!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"rolloff must be in [0, 1], got {self.alpha}")
        if self.delta not in (0.0, 0.5):
            raise ConfigError(f"frequency-grid shift must be 0 or 1/2, got {self.delta}")
        if self.rx not in _RX_KINDS:
            raise ConfigError(f"rx must be one of {_RX_KINDS}, got {self.rx!r}")
        if self.arch not in _ARCHS:
            raise ConfigError(f"arch must be one of {_ARCHS}, got {self.arch!r}")
        if self.domain not in _DOMAINS:
            raise ConfigError(f"domain must be one of {_DOMAINS}, got {self.domain!r}")
        n = self.k * self.m
        if not 0 <= self.n_cp <= n or not 0 <= self.n_cs <= n:
            raise ConfigError("prefix/suffix lengths must lie in [0, N]")
        if len(self.channel_taps) < 1:
            raise ConfigError("channel needs at least one tap")
        if len(self.channel_taps) > self.n_cp + 1:
            raise ConfigError(
                f"{len(self.channel_taps)} taps exceed the interference-free bound "
                f"n_cp + 1 = {self.n_cp + 1}"
            )
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.l_max < 1:
            raise ConfigError("l_max must be at least 1")
        # Re-run the upstream set validation early so bad configs fail at parse time.
        self.params  # noqa: B018

    @property
    def params(self) -> GfdmParams:
        return GfdmParams(self.k, self.m, self.k_on or (), self.m_on or ())

    @property
    def n(self) -> int:
        return self.k * self.m


def _as_taps(raw) -> tuple[complex, ...]:
    taps = []
    for item in raw:
        if isinstance(item, (list, tuple)):
            if len(item) != 2:
                raise ConfigError(f"channel tap {item!r} is not a [re, im] pair")
            taps.append(complex(float(item[0]), float(item[1])))
        else:
            taps.append(complex(float(item), 0.0))
    return tuple(taps)


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    known = {
        "k", "m", "pulse", "alpha", "delta", "rx", "arch", "domain",
        "k_on", "m_on", "n_cp", "n_cs", "channel_taps", "snr_db", "seed", "l_max",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    if "k" not in data or "m" not in data:
        raise ConfigError("configuration needs at least 'k' and 'm'")

    snr = data.get("snr_db", None)
    if snr is None or (isinstance(snr, str) and snr.lower() in ("inf", "infinity")):
        snr = math.inf
    try:
        return RunConfig(
            k=int(data["k"]),
            m=int(data["m"]),
            pulse=str(data.get("pulse", "rc")).lower(),
            alpha=float(data.get("alpha", 0.5)),
            delta=float(data.get("delta", 0.5)),
            rx=str(data.get("rx", "zf")).lower(),
            arch=str(data.get("arch", "fft")).lower(),
            domain=str(data.get("domain", "td")).lower(),
            k_on=tuple(int(i) for i in data["k_on"]) if data.get("k_on") else None,
            m_on=tuple(int(i) for i in data["m_on"]) if data.get("m_on") else None,
            n_cp=int(data.get("n_cp", 0)),
            n_cs=int(data.get("n_cs", 0)),
            channel_taps=_as_taps(data.get("channel_taps", [1.0])),
            snr_db=float(snr),
            seed=int(data.get("seed", 0)),
            l_max=int(data.get("l_max", 16)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed configuration value: {exc}") from exc


def emit_config(cfg: RunConfig) -> dict:
    return {
        "k": cfg.k,
        "m": cfg.m,
        "pulse": cfg.pulse,
        "alpha": cfg.alpha,
        "delta": cfg.delta,
        "rx": cfg.rx,
        "arch": cfg.arch,
        "domain": cfg.domain,
        "k_on": list(cfg.k_on) if cfg.k_on else None,
        "m_on": list(cfg.m_on) if cfg.m_on else None,
        "n_cp": cfg.n_cp,
        "n_cs": cfg.n_cs,
        "channel_taps": [[t.real, t.imag] for t in cfg.channel_taps],
        "snr_db": None if math.isinf(cfg.snr_db) else cfg.snr_db,
        "seed": cfg.seed,
        "l_max": cfg.l_max,
    }


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read configuration: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration is not valid JSON: {exc}") from exc
    return parse_config(data)
