"""On-disk cache of full-group class partitions.

File layout (little-endian)::

    magic     8s   b"PGL1DCLS"
    version   u16
    k         u16
    r_param   u8
    precision u8
    cubic     4 x u64   lifted cubic, low degree first
    count     u64       number of class ids
    checksum  u32       crc32 of the body
    body      count x i32  class_id in code order

The lifted cubic pins the arithmetic, so a cache written under a different
lift or precision is detected and ignored.
"""

from __future__ import annotations

import logging
import os
import struct
import zlib
from pathlib import Path

import numpy as np

from .census import ClassPartition, _partition_from_labels
from .quotient import QuotientContext

log = logging.getLogger(__name__)

MAGIC = b"PGL1DCLS"
VERSION = 1
HEADER = struct.Struct("<8sHHBB4QQI")
ENV_VAR = "PGL1D_CACHE_DIR"


class CacheError(ValueError):
    pass


def default_cache_dir() -> Path | None:
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def cache_key(ctx: QuotientContext) -> str:
    cubic = "-".join(str(c) for c in ctx.batch.cubic)
    return f"classes-k{ctx.k}-r{ctx.r_param}-N{ctx.N}-f{cubic}.bin"


def cache_path(directory, ctx: QuotientContext) -> Path:
    return Path(directory) / cache_key(ctx)


def write_partition(path, ctx: QuotientContext, part: ClassPartition) -> Path:
    if part.codes.size != ctx.order:
        raise ValueError("only full-group partitions are cached")
    body = np.ascontiguousarray(part.class_id, dtype="<i4").tobytes()
    header = HEADER.pack(MAGIC, VERSION, ctx.k, ctx.r_param, ctx.N, *ctx.batch.cubic,
                         part.class_id.size, zlib.crc32(body))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(header + body)
    tmp.replace(path)
    return path


def read_partition(path, ctx: QuotientContext) -> ClassPartition:
    """Load and validate a cached partition; raises CacheError on any mismatch."""
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise CacheError("truncated header")
    magic, version, k, r, prec, c0, c1, c2, c3, count, checksum = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CacheError("bad magic")
    if version != VERSION:
        raise CacheError(f"format version {version}, expected {VERSION}")
    expected = (ctx.k, ctx.r_param, ctx.N, tuple(ctx.batch.cubic), ctx.order)
    if (k, r, prec, (c0, c1, c2, c3), count) != expected:
        raise CacheError(f"config mismatch: {(k, r, prec, (c0, c1, c2, c3), count)} != {expected}")
    body = data[HEADER.size:]
    if len(body) != 4 * count or zlib.crc32(body) != checksum:
        raise CacheError("checksum mismatch")
    class_id = np.frombuffer(body, dtype="<i4").astype(np.int64)
    # classes are numbered by their smallest code, so first occurrence is the rep
    first = np.full(int(class_id.max()) + 1, -1, dtype=np.int64)
    first[class_id[::-1]] = np.arange(count - 1, -1, -1)
    if (first < 0).any() or not (np.diff(first) > 0).all():
        raise CacheError("class ids are not numbered by representative")
    codes = np.arange(count, dtype=np.int64)
    return _partition_from_labels(ctx, codes, first[class_id])


def load_or_none(directory, ctx: QuotientContext) -> ClassPartition | None:
    if directory is None:
        return None
    path = cache_path(directory, ctx)
    if not path.exists():
        return None
    try:
        return read_partition(path, ctx)
    except CacheError as exc:
        log.warning("ignoring cache %s: %s; recomputing", path, exc)
        return None
