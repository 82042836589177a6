"""Complex sample files: raw binary and CSV.

Binary layout: an optional 16-byte header (magic ``GFDMBLK1``, little-endian
u32 sample count, u32 flags) followed by interleaved re/im float64 pairs,
little-endian.  Readers accept headerless files and fall back to treating the
whole payload as samples.  CSV rows are ``index,re,im`` with a header line.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import ConfigError

__all__ = ["MAGIC", "write_samples", "read_samples", "guess_format"]

MAGIC = b"GFDMBLK1"
_HEADER = struct.Struct("<8sII")


def guess_format(path: str | Path, fallback: str = "bin") -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix in (".bin", ".dat", ".raw"):
        return "bin"
    return fallback


def write_samples(path: str | Path, data: np.ndarray, fmt: str = "bin", header: bool = True) -> None:
    vec = np.asarray(data, dtype=np.complex128).reshape(-1, order="F")
    path = Path(path)
    if fmt == "bin":
        inter = np.empty(2 * vec.size, dtype="<f8")
        inter[0::2] = vec.real
        inter[1::2] = vec.imag
        with path.open("wb") as fh:
            if header:
                fh.write(_HEADER.pack(MAGIC, vec.size, 0))
            fh.write(inter.tobytes())
    elif fmt == "csv":
        with path.open("w") as fh:
            fh.write("index,re,im\n")
            for i, v in enumerate(vec):
                fh.write(f"{i},{float(v.real)!r},{float(v.imag)!r}\n")
    else:
        raise ConfigError(f"unknown sample format {fmt!r}, expected 'bin' or 'csv'")


def read_samples(path: str | Path, fmt: str | None = None) -> np.ndarray:
    path = Path(path)
    fmt = fmt or guess_format(path)
    if fmt == "csv":
        values = []
        try:
            with path.open() as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    cells = line.split(",")
                    try:
                        re_v, im_v = float(cells[1]), float(cells[2])
                    except (IndexError, ValueError):
                        if not values:  # header line
                            continue
                        raise ConfigError(f"malformed CSV sample line: {line!r}") from None
                    values.append(complex(re_v, im_v))
        except UnicodeDecodeError:
            raise ConfigError(f"{path} is not a text CSV sample file") from None
        if not values:
            raise ConfigError(f"no samples in {path}")
        return np.asarray(values, dtype=np.complex128)

    raw = path.read_bytes()
    if len(raw) >= _HEADER.size and raw[:8] == MAGIC:
        _, count, _flags = _HEADER.unpack_from(raw)
        payload = raw[_HEADER.size :]
        if len(payload) < 16 * count:
            raise ConfigError(f"{path} truncated: header promises {count} samples")
        payload = payload[: 16 * count]
    else:
        payload = raw
    if len(payload) == 0 or len(payload) % 16:
        raise ConfigError(f"{path} does not hold interleaved float64 re/im pairs")
    inter = np.frombuffer(payload, dtype="<f8")
    return (inter[0::2] + 1j * inter[1::2]).astype(np.complex128)
