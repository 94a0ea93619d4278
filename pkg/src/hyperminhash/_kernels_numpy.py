"""Vectorised numpy kernels (fallback path, always importable).

Every function here has a numba twin in ``_kernels_numba`` with the same
signature and bit-exact results. uint64 array arithmetic wraps modulo 2**64
without warnings, which is what the hash needs.
"""

from __future__ import annotations

import numpy as np

U64 = np.uint64
C1 = U64(0x87C37B91114253D5)
C2 = U64(0x4CF5AD432745937F)
F1 = U64(0xFF51AFD7ED558CCD)
F2 = U64(0xC4CEB9FE1A85EC53)


def _rotl(x, r):
    return (x << U64(r)) | (x >> U64(64 - r))


def _fmix(k):
    k = k ^ (k >> U64(33))
    k = k * F1
    k = k ^ (k >> U64(33))
    k = k * F2
    return k ^ (k >> U64(33))


def murmur3_u64(keys: np.ndarray, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """MurmurHash3_x64_128 of each key's 8-byte little-endian encoding."""
    keys = np.asarray(keys, dtype=np.uint64)
    s = U64(seed)
    k1 = keys * C1
    k1 = _rotl(k1, 31)
    k1 = k1 * C2
    h1 = np.full(keys.shape, s, dtype=np.uint64) ^ k1
    h2 = np.full(keys.shape, s, dtype=np.uint64)
    h1 ^= U64(8)
    h2 ^= U64(8)
    h1 += h2
    h2 += h1
    h1 = _fmix(h1)
    h2 = _fmix(h2)
    h1 += h2
    h2 += h1
    return h1, h2


def words_u64(keys: np.ndarray, seed_a: int, seed_b: int):
    """(w_bucket, w_exp, w_mant) for a batch of uint64 keys."""
    a1, a2 = murmur3_u64(keys, seed_a)
    b1, _ = murmur3_u64(keys, seed_b)
    return a1, a2, b1


def clz64(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64).copy()
    n = np.zeros(x.shape, dtype=np.int64)
    zero = x == 0
    for shift, limit in (
        (32, 0x00000000FFFFFFFF),
        (16, 0x0000FFFFFFFFFFFF),
        (8, 0x00FFFFFFFFFFFFFF),
        (4, 0x0FFFFFFFFFFFFFFF),
        (2, 0x3FFFFFFFFFFFFFFF),
        (1, 0x7FFFFFFFFFFFFFFF),
    ):
        m = x <= U64(limit)
        n[m] += shift
        x[m] <<= U64(shift)
    n[zero] = 64
    return n


def rho(words: np.ndarray, q: int) -> np.ndarray:
    return np.minimum(clz64(words) + 1, 1 << q)


def top_bits(words: np.ndarray, bits: int) -> np.ndarray:
    words = np.asarray(words, dtype=np.uint64)
    if bits == 0:
        return np.zeros(words.shape, dtype=np.uint64)
    return words >> U64(64 - bits)


def hmh_registers(w_bucket, w_exp, w_mant, p: int, q: int, r: int):
    """Bucket indices and max-transformed register words for a batch."""
    idx = top_bits(w_bucket, p).astype(np.int64)
    e = rho(w_exp, q).astype(np.uint64)
    mant = top_bits(w_mant, r)
    word = (e << U64(r)) | (U64((1 << r) - 1) - mant)
    return idx, word


def hmh_update(registers: np.ndarray, w_bucket, w_exp, w_mant, p, q, r) -> None:
    idx, word = hmh_registers(w_bucket, w_exp, w_mant, p, q, r)
    np.maximum.at(registers, idx, word)


def mh_update(registers: np.ndarray, w_bucket, w_value, k_log2: int, width: int) -> None:
    idx = top_bits(w_bucket, k_log2).astype(np.int64)
    word = U64(1 << width) - top_bits(w_value, width)
    np.maximum.at(registers, idx, word)


def words_bytes(buf: np.ndarray, offsets: np.ndarray, seed_a: int, seed_b: int):
    """Hash variable-length items packed into ``buf`` (slow pure-Python loop)."""
    from .hashing import murmur3_x64_128

    n = len(offsets) - 1
    out = np.empty((3, n), dtype=np.uint64)
    raw = bytes(buf)
    for i in range(n):
        item = raw[offsets[i] : offsets[i + 1]]
        a1, a2 = murmur3_x64_128(item, seed_a)
        b1, _ = murmur3_x64_128(item, seed_b)
        out[0, i], out[1, i], out[2, i] = a1, a2, b1
    return out[0], out[1], out[2]
