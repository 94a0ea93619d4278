"""Seeded hashing and the bit-level primitives ``rho`` and ``sigma``.

Every item is mapped to three 64-bit words: one addresses the bucket, one
feeds the leading-one position (exponent), one feeds the mantissa. The
words come from two MurmurHash3_x64_128 invocations keyed by lane seeds
derived from the user seed: the first gives ``(w_bucket, w_exp)``, the
second gives ``w_mant``.

The user seed is never passed to MurmurHash3 as is. When the seed equals
the input length both output lanes become multiples of one value (seed 8
with 8-byte keys), which correlates the bucket and exponent words. Running
the seed through the 64-bit finaliser first leaves that a 2**-64 event.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from . import kernels
from .errors import ParameterError

HASH_ID = "mmh3-192"
MASK64 = (1 << 64) - 1

Item = Union[bytes, bytearray, memoryview, str, int]

_C1 = 0x87C37B91114253D5
_C2 = 0x4CF5AD432745937F


def _rotl(x: int, r: int) -> int:
    return ((x << r) | (x >> (64 - r))) & MASK64


def _fmix(k: int) -> int:
    k ^= k >> 33
    k = (k * 0xFF51AFD7ED558CCD) & MASK64
    k ^= k >> 33
    k = (k * 0xC4CEB9FE1A85EC53) & MASK64
    return k ^ (k >> 33)


def murmur3_x64_128(data: bytes, seed: int = 0) -> tuple[int, int]:
    """Reference MurmurHash3_x64_128 in plain Python; returns ``(h1, h2)``."""
    seed &= MASK64
    h1 = h2 = seed
    n = len(data)
    nblocks = n // 16
    for b in range(nblocks):
        k1 = int.from_bytes(data[16 * b : 16 * b + 8], "little")
        k2 = int.from_bytes(data[16 * b + 8 : 16 * b + 16], "little")
        k1 = (_rotl((k1 * _C1) & MASK64, 31) * _C2) & MASK64
        h1 ^= k1
        h1 = (_rotl(h1, 27) + h2) & MASK64
        h1 = (h1 * 5 + 0x52DCE729) & MASK64
        k2 = (_rotl((k2 * _C2) & MASK64, 33) * _C1) & MASK64
        h2 ^= k2
        h2 = (_rotl(h2, 31) + h1) & MASK64
        h2 = (h2 * 5 + 0x38495AB5) & MASK64
    tail = data[16 * nblocks :]
    if len(tail) > 8:
        k2 = int.from_bytes(tail[8:], "little")
        h2 ^= (_rotl((k2 * _C2) & MASK64, 33) * _C1) & MASK64
    if tail:
        k1 = int.from_bytes(tail[:8], "little")
        h1 ^= (_rotl((k1 * _C1) & MASK64, 31) * _C2) & MASK64
    h1 ^= n
    h2 ^= n
    h1 = (h1 + h2) & MASK64
    h2 = (h2 + h1) & MASK64
    h1 = _fmix(h1)
    h2 = _fmix(h2)
    h1 = (h1 + h2) & MASK64
    h2 = (h2 + h1) & MASK64
    return h1, h2


_LANE_A = 0x9E3779B97F4A7C15
_LANE_B = 0xC2B2AE3D27D4EB4F


def lane_seeds(seed: int) -> tuple[int, int]:
    """MurmurHash3 keys for the two invocations behind one user seed."""
    seed &= MASK64
    return _fmix(seed ^ _LANE_A), _fmix(seed ^ _LANE_B)


@dataclass(frozen=True)
class HashWords:
    w_bucket: int
    w_exp: int
    w_mant: int


def as_bytes(item: Item) -> bytes:
    """Canonical byte encoding: str as UTF-8, int as 8-byte little-endian."""
    if isinstance(item, (bytes, bytearray, memoryview)):
        return bytes(item)
    if isinstance(item, str):
        return item.encode("utf-8")
    if isinstance(item, (int, np.integer)):
        return int(item).to_bytes(8, "little", signed=False)
    raise TypeError(f"cannot hash item of type {type(item).__name__}")


def derive_words(item: Item, seed: int = 0) -> HashWords:
    data = as_bytes(item)
    sa, sb = lane_seeds(seed)
    a1, a2 = murmur3_x64_128(data, sa)
    b1, _ = murmur3_x64_128(data, sb)
    return HashWords(a1, a2, b1)


def rho(word: int, q: int) -> int:
    """1 + number of leading zeros of a 64-bit word, capped at 2**q."""
    if not 1 <= q <= 6:
        raise ParameterError(f"q must be in [1, 6], got {q}")
    lz = 64 - (word & MASK64).bit_length()
    return min(lz + 1, 1 << q)


def sigma(word: int, r: int) -> int:
    """Top ``r`` bits of a 64-bit word."""
    if not 0 <= r <= 63:
        raise ParameterError(f"r must be in [0, 63], got {r}")
    return (word & MASK64) >> (64 - r) if r else 0


def hash_u64(keys, seed: int = 0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batch ``derive_words`` for uint64 keys (8-byte little-endian items)."""
    return kernels.words_u64(np.asarray(keys, dtype=np.uint64), *lane_seeds(seed))


def pack_items(items: Iterable[Item]) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate items into a byte buffer plus an offsets array."""
    chunks = [as_bytes(x) for x in items]
    offsets = np.zeros(len(chunks) + 1, dtype=np.int64)
    if chunks:
        np.cumsum([len(c) for c in chunks], out=offsets[1:])
    buf = np.frombuffer(b"".join(chunks), dtype=np.uint8)
    return buf, offsets


def hash_items(items: Iterable[Item], seed: int = 0):
    """Batch ``derive_words`` for arbitrary items."""
    buf, offsets = pack_items(items)
    return kernels.words_bytes(buf, offsets, *lane_seeds(seed))
