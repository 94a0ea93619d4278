import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperminhash import (
    EmptySketchError,
    IncompatibleSketchError,
    MhParams,
    MhSketch,
    ParameterError,
    mh_insert,
    mh_jaccard,
    mh_union,
)
from hyperminhash.hashing import hash_u64, sigma

K256W8 = MhParams(k_log2=8, width=8)


def mh_of(params, *ranges):
    s = MhSketch(params)
    for lo, n in ranges:
        s.update_u64(np.arange(lo, lo + n, dtype=np.uint64))
    return s


def test_param_guards():
    for kw in (dict(k_log2=25, width=8), dict(k_log2=4, width=0), dict(k_log2=4, width=63)):
        with pytest.raises(ParameterError):
            MhParams(**kw)


def test_new_sketch_empty():
    s = MhSketch(K256W8)
    assert (s.values == -1).all() and len(s.values) == 256


def test_insert_matches_reference():
    # per-partition minimum of the truncated value word, computed directly
    params = MhParams(k_log2=4, width=10, seed=3)
    keys = np.arange(1000, dtype=np.uint64) * np.uint64(31)
    wb, wv, _ = hash_u64(keys, params.seed)
    ref = [-1] * 16
    for b, v in zip(wb, wv):
        i, x = sigma(int(b), 4), sigma(int(v), 10)
        ref[i] = x if ref[i] < 0 else min(ref[i], x)
    s = MhSketch(params)
    s.update_u64(keys)
    assert s.values.tolist() == ref


def test_all_ones_value_is_representable():
    params = MhParams(k_log2=0, width=4)
    s = MhSketch(params)
    s.update_words(np.array([0], dtype=np.uint64), np.array([2**64 - 1], dtype=np.uint64))
    assert s.values.tolist() == [15]


def test_insert_idempotent():
    s = mh_of(K256W8, (0, 500))
    mh_insert(s, 3)
    before = s.copy()
    mh_insert(s, 3)
    assert s == before
    assert mh_of(K256W8, (0, 500), (0, 500)) == mh_of(K256W8, (0, 500))


def test_union_identity_and_resketch(rng):
    assert mh_union(mh_of(K256W8, (0, 100)), MhSketch(K256W8)) == mh_of(K256W8, (0, 100))
    for _ in range(200):
        a_keys = rng.integers(0, 2**63, rng.integers(0, 300), dtype=np.uint64)
        b_keys = rng.integers(0, 2**63, rng.integers(0, 300), dtype=np.uint64)
        a, b, ab = MhSketch(K256W8), MhSketch(K256W8), MhSketch(K256W8)
        a.update_u64(a_keys)
        b.update_u64(b_keys)
        ab.update_u64(np.concatenate([a_keys, b_keys]))
        assert mh_union(a, b) == ab


def test_union_mismatch():
    with pytest.raises(IncompatibleSketchError):
        mh_union(MhSketch(K256W8), MhSketch(MhParams(8, 16)))


items = st.lists(st.integers(0, 2**64 - 1), max_size=200)


@settings(max_examples=100, deadline=None)
@given(items, items, items)
def test_union_semilattice(xa, xb, xc):
    params = MhParams(k_log2=4, width=6)
    a, b, c = MhSketch(params), MhSketch(params), MhSketch(params)
    for s, x in ((a, xa), (b, xb), (c, xc)):
        s.update(x)
    assert mh_union(a, b) == mh_union(b, a)
    assert mh_union(mh_union(a, b), c) == mh_union(a, mh_union(b, c))
    assert mh_union(a, a) == a


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2**64 - 1), min_size=1, max_size=500), st.randoms())
def test_order_insensitive(xs, rnd):
    params = MhParams(k_log2=5, width=8)
    a, b = MhSketch(params), MhSketch(params)
    a.update(xs)
    ys = list(xs)
    rnd.shuffle(ys)
    b.update(ys)
    assert a == b


def test_jaccard_self_and_errors():
    s = mh_of(K256W8, (0, 5000))
    assert mh_jaccard(s, s) == 1.0
    with pytest.raises(EmptySketchError):
        mh_jaccard(MhSketch(K256W8), MhSketch(K256W8))
    with pytest.raises(IncompatibleSketchError):
        mh_jaccard(s, MhSketch(MhParams(8, 9)))


def _third_overlap_mean(params, n, trials):
    ests = []
    for t in range(trials):
        pt = MhParams(params.k_log2, params.width, seed=t)
        half = n // 2
        a = mh_of(pt, (0, half), (1 << 40, half))
        b = mh_of(pt, (0, half), (2 << 40, half))
        ests.append(mh_jaccard(a, b))
    return float(np.mean(ests))


def test_jaccard_small_sets_accurate():
    assert abs(_third_overlap_mean(K256W8, 2**10, 100) - 1 / 3) <= 0.05


def test_jaccard_saturates_for_large_sets():
    # 8-bit minima: with 2**16 items every partition minimum is 0, so J -> 1
    mean = _third_overlap_mean(K256W8, 2**16, 20)
    assert abs(mean - 1 / 3) / (1 / 3) > 0.5
