import struct
import zlib

import numpy as np
import pytest

from hyperminhash import (
    CorruptFileError,
    HmhSketch,
    SketchParams,
    TruncatedFileError,
    UnsupportedVersionError,
    deserialize,
    new_sketch,
    read_sketch,
    serialize,
    write_sketch,
)
from hyperminhash.errors import SketchFileError
from hyperminhash.serialization import HEADER_SIZE, payload_size


def random_sketch(rng, params, n=None):
    s = new_sketch(params)
    if n is None:
        n = int(rng.integers(0, 4 * params.num_buckets))
    s.update_u64(rng.integers(0, 2**64, n, dtype=np.uint64))
    return s


def test_roundtrip_randomized(rng):
    for i in range(500):
        params = SketchParams(p=8, q=4, r=4, seed=int(rng.integers(0, 2**63)))
        s = random_sketch(rng, params)
        t = deserialize(serialize(s))
        assert t == s and t.params == s.params


@pytest.mark.parametrize("p,q,r", [(0, 1, 0), (3, 6, 10), (5, 2, 32), (16, 6, 10), (12, 3, 7)])
def test_roundtrip_shapes(rng, p, q, r):
    s = random_sketch(rng, SketchParams(p=p, q=q, r=r), n=3 << p)
    assert deserialize(serialize(s)) == s


def test_empty_sketch_bytes():
    data = serialize(new_sketch(SketchParams(p=2, q=6, r=10)))
    assert data[:4] == b"HMH1" and data[4] == 1
    assert data[5:8] == bytes([2, 6, 10])
    assert data[8:16] == b"mmh3-192"
    payload = data[HEADER_SIZE:-4]
    assert payload == bytes(9)
    assert struct.unpack("<I", data[-4:])[0] == zlib.crc32(data[:-4])


def test_known_payload_bits():
    # one bucket (3, 5) at q=2, r=3: plain word 0b011101 in 6 bits, then padding
    params = SketchParams(p=0, q=2, r=3)
    s = HmhSketch.from_buckets(params, [(3, 5)])
    assert serialize(s)[HEADER_SIZE:-4] == bytes([0b01110100])


def test_size_formula():
    for p in (0, 1, 3, 8, 15):
        for q in (1, 4, 6):
            for r in (0, 1, 10, 16):
                params = SketchParams(p=p, q=q, r=r)
                size = len(serialize(new_sketch(params)))
                assert size == 24 + -(-(2**p * (q + 1 + r)) // 8) + 4
                assert payload_size(params) == size - 28


def test_every_bit_flip_detected(rng):
    data = serialize(random_sketch(rng, SketchParams(p=4, q=3, r=2), n=40))
    for i in range(len(data) * 8):
        bad = bytearray(data)
        bad[i // 8] ^= 1 << (i % 8)
        with pytest.raises(SketchFileError):
            deserialize(bytes(bad))


def _recrc(body):
    return body + struct.pack("<I", zlib.crc32(body))


def test_unsupported_version():
    data = bytearray(serialize(new_sketch(SketchParams(p=2))))
    data[4] = 2
    with pytest.raises(UnsupportedVersionError):
        deserialize(_recrc(bytes(data[:-4])))


def test_bad_magic():
    data = serialize(new_sketch(SketchParams(p=2)))
    with pytest.raises(CorruptFileError):
        deserialize(b"XXXX" + data[4:])


def test_truncated():
    data = serialize(new_sketch(SketchParams(p=6)))
    for cut in (0, 10, HEADER_SIZE, len(data) - 1):
        with pytest.raises(TruncatedFileError):
            deserialize(data[:cut])
    # truncated payload with a recomputed checksum is still caught
    with pytest.raises(TruncatedFileError):
        deserialize(_recrc(data[: len(data) - 10]))


def test_trailing_data():
    data = serialize(new_sketch(SketchParams(p=2)))
    with pytest.raises(CorruptFileError):
        deserialize(_recrc(data[:-4] + b"\0\0"))


def test_invalid_bucket_rejected():
    # exponent 0 with a nonzero mantissa is not a valid encoding
    params = SketchParams(p=0, q=2, r=3)
    head = serialize(new_sketch(params))[:HEADER_SIZE]
    with pytest.raises(CorruptFileError):
        deserialize(_recrc(head + bytes([0b00001100])))
    # exponent above 2**q
    with pytest.raises(CorruptFileError):
        deserialize(_recrc(head + bytes([0b10100000])))


def test_file_roundtrip(tmp_path, rng):
    s = random_sketch(rng, SketchParams(p=10, seed=9), n=5000)
    path = tmp_path / "a.hmh"
    write_sketch(path, s)
    assert read_sketch(path) == s
