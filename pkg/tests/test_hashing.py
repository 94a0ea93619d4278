import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from hyperminhash import ParameterError, derive_words, rho, sigma
from hyperminhash import _kernels_numpy as knp
from hyperminhash import kernels
from hyperminhash.hashing import (
    as_bytes,
    hash_items,
    hash_u64,
    lane_seeds,
    murmur3_x64_128,
)

from .conftest import random_u64

U64 = st.integers(min_value=0, max_value=2**64 - 1)


def _digest(h):
    return h[0].to_bytes(8, "little") + h[1].to_bytes(8, "little")


# Published MurmurHash3_x64_128 outputs (seed < 2**32).
@pytest.mark.parametrize(
    "data, seed, expected",
    [
        (b"", 0, bytes(16)),
        (
            b"The quick brown fox jumps over the lazy dog",
            0,
            bytes.fromhex("6c1b07bc7bbc4be347939ac4a93c437a"),
        ),
        (b"foo", 0, b"aE\xf5\x01W\x86q\xe2\x87}\xba+\xe4\x87\xaf~"),
    ],
)
def test_murmur3_reference_vectors(data, seed, expected):
    assert _digest(murmur3_x64_128(data, seed)) == expected


def test_murmur3_seeded_vector():
    h1, h2 = murmur3_x64_128(b"foo", 42)
    assert (h2 << 64) | h1 == 215966891540331383248189432718888555506


def test_derive_words_deterministic():
    assert derive_words(b"item", 7) == derive_words(b"item", 7)


def test_golden_vector():
    w = derive_words(b"abcdefgh", 0)
    assert (w.w_bucket, w.w_exp, w.w_mant) == (
        15926339221320030560,
        8242790094358318132,
        2684404065772592121,
    )


def test_lane_seeds_avoid_length_degeneracy():
    # seed 8 fed raw to MurmurHash3 on 8-byte keys makes h2 = 3/2 * h1
    for seed in range(64):
        sa, sb = lane_seeds(seed)
        assert sa not in range(64) and sb not in range(64)


def test_seeds_change_every_word(rng):
    keys = random_u64(rng, 10_000)
    seeds = random_u64(rng, 2)
    a = hash_u64(keys, int(seeds[0]))
    b = hash_u64(keys, int(seeds[1]))
    for x, y in zip(a, b):
        assert np.count_nonzero(x == y) == 0


def test_int_items_match_u64_path(rng):
    keys = random_u64(rng, 200)
    batch = hash_u64(keys, 99)
    for i in (0, 17, 199):
        w = derive_words(int(keys[i]), 99)
        assert (w.w_bucket, w.w_exp, w.w_mant) == tuple(int(a[i]) for a in batch)


@pytest.mark.parametrize("length", [0, 1, 7, 8, 9, 15, 16, 17, 31, 32, 33, 100])
def test_bytes_kernel_matches_reference(length, rng):
    items = [rng.integers(0, 256, size=length, dtype=np.uint8).tobytes() for _ in range(5)]
    batch = hash_items(items, 12345)
    for i, item in enumerate(items):
        w = derive_words(item, 12345)
        assert (w.w_bucket, w.w_exp, w.w_mant) == tuple(int(a[i]) for a in batch)


def test_numpy_and_active_backend_agree(rng):
    keys = random_u64(rng, 5000)
    sa, sb = lane_seeds(3)
    for x, y in zip(kernels.words_u64(keys, sa, sb), knp.words_u64(keys, sa, sb)):
        np.testing.assert_array_equal(x, y)
    words = random_u64(rng, 5000)
    np.testing.assert_array_equal(kernels.rho(words, 6), knp.rho(words, 6))


def test_as_bytes_canonical():
    assert as_bytes("hé") == "hé".encode()
    assert as_bytes(1) == b"\x01" + bytes(7)
    with pytest.raises(TypeError):
        as_bytes(1.5)


# -- rho / sigma ---------------------------------------------------------


def test_rho_examples():
    assert rho(0b0001 << 60, 6) == 4
    assert rho(1 << 63, 6) == 1
    assert rho(0, 6) == 64
    assert rho(0, 2) == 4
    assert rho(1, 6) == 64


def test_rho_rejects_q7():
    with pytest.raises(ParameterError):
        rho(1, 7)


def test_sigma_examples():
    assert sigma(0b01011 << 59, 5) == 0b01011 == 11
    assert sigma(0xDEADBEEF, 0) == 0
    assert sigma(2**64 - 1, 10) == 1023


@given(U64, U64, st.integers(1, 6))
def test_rho_monotone_non_increasing(a, b, q):
    lo, hi = min(a, b), max(a, b)
    assert rho(lo, q) >= rho(hi, q)


@given(U64, st.integers(1, 6))
def test_rho_vectorised_matches_scalar(w, q):
    arr = np.array([w], dtype=np.uint64)
    assert int(kernels.rho(arr, q)[0]) == rho(w, q)
    assert int(knp.rho(arr, q)[0]) == rho(w, q)


@given(U64, st.integers(0, 63))
def test_sigma_vectorised_matches_scalar(w, r):
    assert int(knp.top_bits(np.array([w], dtype=np.uint64), r)[0]) == sigma(w, r)


def test_rho_geometric_distribution(rng):
    n = 10**6
    q = 4
    vals = kernels.rho(random_u64(rng, n), q)
    counts = np.bincount(vals, minlength=(1 << q) + 1)
    for i in range(1, 1 << q):
        p = 2.0**-i
        sd = np.sqrt(n * p * (1 - p))
        assert abs(counts[i] - n * p) <= 3 * sd + 1, i


def test_sigma_uniform_chi_square(rng):
    vals = knp.top_bits(random_u64(rng, 10**6), 8).astype(np.int64)
    counts = np.bincount(vals, minlength=256)
    assert stats.chisquare(counts).pvalue > 0.001


def test_hashed_words_geometric_chi_square():
    # the real hash on sequential keys, not the RNG: P(rho = i) = 2**-i
    n = 10**6
    for w in hash_u64(np.arange(n, dtype=np.uint64), 5):
        counts = np.bincount(kernels.rho(w, 6), minlength=65)
        observed = np.append(counts[1:13], counts[13:].sum())
        expected = np.append(2.0 ** -np.arange(1, 13), 2.0**-12) * n
        assert stats.chisquare(observed, expected).pvalue > 0.001
