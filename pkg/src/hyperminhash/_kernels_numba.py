"""Numba-compiled kernels. Bit-exact twins of ``_kernels_numpy``.

All constants are wrapped in ``np.uint64``: mixing a uint64 with a plain
Python int promotes to float64 under numba.
"""

from __future__ import annotations

import numpy as np

from ._accel import njit

U64 = np.uint64
C1 = U64(0x87C37B91114253D5)
C2 = U64(0x4CF5AD432745937F)
F1 = U64(0xFF51AFD7ED558CCD)
F2 = U64(0xC4CEB9FE1A85EC53)
C5 = U64(5)
N1 = U64(0x52DCE729)
N2 = U64(0x38495AB5)


@njit(inline="always")
def _rotl(x, r):
    return (x << U64(r)) | (x >> U64(64 - r))


@njit(inline="always")
def _fmix(k):
    k ^= k >> U64(33)
    k *= F1
    k ^= k >> U64(33)
    k *= F2
    k ^= k >> U64(33)
    return k


@njit
def _murmur_key8(key, seed):
    k1 = key * C1
    k1 = _rotl(k1, 31)
    k1 *= C2
    h1 = seed ^ k1
    h2 = seed
    h1 ^= U64(8)
    h2 ^= U64(8)
    h1 += h2
    h2 += h1
    h1 = _fmix(h1)
    h2 = _fmix(h2)
    h1 += h2
    h2 += h1
    return h1, h2


@njit
def _load_le(buf, start, count):
    v = U64(0)
    for i in range(count):
        v |= U64(buf[start + i]) << U64(8 * i)
    return v


@njit
def _murmur_bytes(buf, start, stop, seed):
    length = stop - start
    nblocks = length // 16
    h1 = seed
    h2 = seed
    for b in range(nblocks):
        off = start + 16 * b
        k1 = _load_le(buf, off, 8)
        k2 = _load_le(buf, off + 8, 8)
        k1 *= C1
        k1 = _rotl(k1, 31)
        k1 *= C2
        h1 ^= k1
        h1 = _rotl(h1, 27)
        h1 += h2
        h1 = h1 * C5 + N1
        k2 *= C2
        k2 = _rotl(k2, 33)
        k2 *= C1
        h2 ^= k2
        h2 = _rotl(h2, 31)
        h2 += h1
        h2 = h2 * C5 + N2
    tail = start + 16 * nblocks
    rem = length & 15
    if rem > 8:
        k2 = _load_le(buf, tail + 8, rem - 8)
        k2 *= C2
        k2 = _rotl(k2, 33)
        k2 *= C1
        h2 ^= k2
    if rem > 0:
        k1 = _load_le(buf, tail, min(rem, 8))
        k1 *= C1
        k1 = _rotl(k1, 31)
        k1 *= C2
        h1 ^= k1
    h1 ^= U64(length)
    h2 ^= U64(length)
    h1 += h2
    h2 += h1
    h1 = _fmix(h1)
    h2 = _fmix(h2)
    h1 += h2
    h2 += h1
    return h1, h2


@njit
def _words_u64(keys, seed_a, seed_b, out):
    for i in range(keys.shape[0]):
        a1, a2 = _murmur_key8(keys[i], seed_a)
        b1, _ = _murmur_key8(keys[i], seed_b)
        out[0, i] = a1
        out[1, i] = a2
        out[2, i] = b1


def words_u64(keys: np.ndarray, seed_a: int, seed_b: int):
    keys = np.ascontiguousarray(keys, dtype=np.uint64)
    out = np.empty((3, keys.shape[0]), dtype=np.uint64)
    _words_u64(keys, U64(seed_a), U64(seed_b), out)
    return out[0], out[1], out[2]


@njit
def _words_bytes(buf, offsets, seed_a, seed_b, out):
    for i in range(offsets.shape[0] - 1):
        a1, a2 = _murmur_bytes(buf, offsets[i], offsets[i + 1], seed_a)
        b1, _ = _murmur_bytes(buf, offsets[i], offsets[i + 1], seed_b)
        out[0, i] = a1
        out[1, i] = a2
        out[2, i] = b1


def words_bytes(buf: np.ndarray, offsets: np.ndarray, seed_a: int, seed_b: int):
    buf = np.ascontiguousarray(buf, dtype=np.uint8)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    out = np.empty((3, offsets.shape[0] - 1), dtype=np.uint64)
    _words_bytes(buf, offsets, U64(seed_a), U64(seed_b), out)
    return out[0], out[1], out[2]


@njit(inline="always")
def _clz64(x):
    if x == 0:
        return 64
    n = 0
    if x <= U64(0x00000000FFFFFFFF):
        n += 32
        x <<= U64(32)
    if x <= U64(0x0000FFFFFFFFFFFF):
        n += 16
        x <<= U64(16)
    if x <= U64(0x00FFFFFFFFFFFFFF):
        n += 8
        x <<= U64(8)
    if x <= U64(0x0FFFFFFFFFFFFFFF):
        n += 4
        x <<= U64(4)
    if x <= U64(0x3FFFFFFFFFFFFFFF):
        n += 2
        x <<= U64(2)
    if x <= U64(0x7FFFFFFFFFFFFFFF):
        n += 1
    return n


@njit
def _clz_array(words, out):
    for i in range(words.shape[0]):
        out[i] = _clz64(words[i])


def clz64(words: np.ndarray) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype=np.uint64).ravel()
    out = np.empty(words.shape[0], dtype=np.int64)
    _clz_array(words, out)
    return out


def rho(words: np.ndarray, q: int) -> np.ndarray:
    return np.minimum(clz64(words) + 1, 1 << q)


@njit(inline="always")
def _top(word, bits):
    if bits == 0:
        return U64(0)
    return word >> U64(64 - bits)


@njit
def _hmh_update(registers, w_bucket, w_exp, w_mant, p, q, r):
    cap = 1 << q
    mask = U64((1 << r) - 1)
    for i in range(w_bucket.shape[0]):
        idx = _top(w_bucket[i], p)
        e = _clz64(w_exp[i]) + 1
        if e > cap:
            e = cap
        word = (U64(e) << U64(r)) | (mask - _top(w_mant[i], r))
        if word > registers[idx]:
            registers[idx] = word


def hmh_update(registers, w_bucket, w_exp, w_mant, p, q, r) -> None:
    _hmh_update(registers, w_bucket, w_exp, w_mant, p, q, r)


@njit
def _mh_update(registers, w_bucket, w_value, k_log2, width):
    top = U64(1 << width)
    for i in range(w_bucket.shape[0]):
        idx = _top(w_bucket[i], k_log2)
        word = top - _top(w_value[i], width)
        if word > registers[idx]:
            registers[idx] = word


def mh_update(registers, w_bucket, w_value, k_log2, width) -> None:
    _mh_update(registers, w_bucket, w_value, k_log2, width)
