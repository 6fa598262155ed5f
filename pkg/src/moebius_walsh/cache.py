"""Binary caches for Moebius tables (MWU1) and Walsh spectra (MWSP).

Layout, little-endian: 4 magic bytes, u32 n, then 2**n entries
(int8 for MWU1, int64 for MWSP).
"""
from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .arith import MoebiusTable
from .errors import CorruptCacheError, ParameterError
from .walsh import WalshSpectrum

MAGIC_TABLE = b"MWU1"
MAGIC_SPECTRUM = b"MWSP"
_HEADER = struct.Struct("<4sI")
_MAX_N = 40

DEFAULT_CACHE_DIR = Path.home() / ".cache" / "moebius_walsh"


def cache_dir(override: str | os.PathLike | None = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get("MW_CACHE_DIR")
    return Path(env) if env else DEFAULT_CACHE_DIR


def table_path(n: int, directory=None) -> Path:
    return cache_dir(directory) / f"mu_{n}.mwu1"


def spectrum_path(n: int, directory=None) -> Path:
    return cache_dir(directory) / f"mu_{n}.mwsp"


def _encode(obj) -> bytes:
    if isinstance(obj, MoebiusTable):
        return _HEADER.pack(MAGIC_TABLE, obj.n) + obj.values.astype("<i1").tobytes()
    if isinstance(obj, WalshSpectrum):
        return _HEADER.pack(MAGIC_SPECTRUM, obj.n) + obj.coeffs.astype("<i8").tobytes()
    raise ParameterError(f"cannot cache objects of type {type(obj).__name__}")


def write(path, obj) -> Path:
    """Write atomically: a temporary sibling is renamed into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_bytes(_encode(obj))
    os.replace(tmp, path)
    return path


def read(path, expect: bytes | None = None):
    path = Path(path)
    try:
        data = path.read_bytes()
    except FileNotFoundError as exc:
        raise CorruptCacheError(f"cache file {path} is missing") from exc
    if len(data) < _HEADER.size:
        raise CorruptCacheError(f"{path}: truncated header")
    magic, n = _HEADER.unpack_from(data)
    if magic not in (MAGIC_TABLE, MAGIC_SPECTRUM):
        raise CorruptCacheError(f"{path}: bad magic {magic!r}")
    if expect is not None and magic != expect:
        raise CorruptCacheError(f"{path}: expected {expect!r}, found {magic!r}")
    if n > _MAX_N:
        raise CorruptCacheError(f"{path}: implausible exponent n={n}")
    width = 1 if magic == MAGIC_TABLE else 8
    payload = data[_HEADER.size :]
    if len(payload) != width << n:
        raise CorruptCacheError(f"{path}: payload has {len(payload)} bytes, expected {width << n}")
    if magic == MAGIC_TABLE:
        values = np.frombuffer(payload, dtype="<i1").astype(np.int8)
        if values.size and (np.abs(values).max() > 1 or values[0] != 0):
            raise CorruptCacheError(f"{path}: entries outside the Moebius range")
        return MoebiusTable(n, values)
    return WalshSpectrum(n, np.frombuffer(payload, dtype="<i8").astype(np.int64))


def cache_roundtrip(path, obj):
    write(path, obj)
    back = read(path)
    if type(back) is not type(obj) or back != obj:
        raise CorruptCacheError(f"{path}: roundtrip mismatch")
    return back
