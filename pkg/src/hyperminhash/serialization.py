"""Binary sketch file format.

Layout (all multi-byte integers little-endian)::

    offset  size  field
    0       4     magic  b"HMH1"
    4       1     version (1)
    5       3     p, q, r
    8       8     hash id, ASCII, NUL padded
    16      8     seed
    24      n     payload: 2**p buckets of (q+1+r) bits, exponent first,
                  MSB-first bitstream, zero padded to a byte boundary
    24+n    4     CRC-32 of every preceding byte

Buckets are stored in the plain encoding ``exponent << r | mantissa``.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from .errors import (
    CorruptFileError,
    ParameterError,
    TruncatedFileError,
    UnsupportedVersionError,
)
from .sketch import HmhSketch, SketchParams

MAGIC = b"HMH1"
VERSION = 1
_HEADER = struct.Struct("<4sB3B8sQ")
HEADER_SIZE = _HEADER.size
CRC_SIZE = 4
# multiple of 8 so every chunk's bitstream ends on a byte boundary
_CHUNK = 1 << 15


def payload_size(params: SketchParams) -> int:
    return (params.num_buckets * params.bucket_bits + 7) // 8


def _plain_words(s: HmhSketch) -> np.ndarray:
    r = s.params.r
    return (s.exponents().astype(np.uint64) << np.uint64(r)) | s.mantissas().astype(np.uint64)


def _to_bits(words: np.ndarray, width: int) -> np.ndarray:
    be = words.astype(">u8").view(np.uint8).reshape(-1, 8)
    return np.unpackbits(be, axis=1)[:, 64 - width :]


def _from_bits(bits: np.ndarray, width: int) -> np.ndarray:
    full = np.zeros((bits.shape[0], 64), dtype=np.uint8)
    full[:, 64 - width :] = bits
    return np.packbits(full, axis=1).view(">u8").ravel().astype(np.uint64)


def encode_payload(s: HmhSketch) -> bytes:
    width = s.params.bucket_bits
    words = _plain_words(s)
    parts = []
    for start in range(0, len(words), _CHUNK):
        bits = _to_bits(words[start : start + _CHUNK], width)
        parts.append(np.packbits(bits.ravel()).tobytes())
    return b"".join(parts)


def decode_payload(payload: bytes, params: SketchParams) -> np.ndarray:
    width = params.bucket_bits
    nb = params.num_buckets
    raw = np.frombuffer(payload, dtype=np.uint8)
    out = np.empty(nb, dtype=np.uint64)
    chunk_bytes = _CHUNK * width // 8
    for ci, start in enumerate(range(0, nb, _CHUNK)):
        count = min(_CHUNK, nb - start)
        piece = raw[ci * chunk_bytes : ci * chunk_bytes + (count * width + 7) // 8]
        bits = np.unpackbits(piece)[: count * width].reshape(count, width)
        out[start : start + count] = _from_bits(bits, width)
    return out


def serialize(s: HmhSketch) -> bytes:
    p = s.params
    hid = p.hash_id.encode("ascii").ljust(8, b"\0")
    head = _HEADER.pack(MAGIC, VERSION, p.p, p.q, p.r, hid, p.seed)
    body = head + encode_payload(s)
    return body + struct.pack("<I", zlib.crc32(body))


def deserialize(data: bytes) -> HmhSketch:
    data = bytes(data)
    if len(data) < HEADER_SIZE + CRC_SIZE:
        raise TruncatedFileError(f"sketch file too short ({len(data)} bytes)")
    magic, version, p, q, r, hid, seed = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorruptFileError(f"bad magic {magic!r}")
    expected_len = HEADER_SIZE + ((1 << min(p, 40)) * (q + 1 + r) + 7) // 8 + CRC_SIZE
    (crc,) = struct.unpack_from("<I", data, len(data) - CRC_SIZE)
    if zlib.crc32(data[:-CRC_SIZE]) != crc:
        if len(data) < expected_len:
            raise TruncatedFileError(f"payload truncated: {len(data)} < {expected_len} bytes")
        raise CorruptFileError("checksum mismatch")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported sketch file version {version}")
    try:
        hash_id = hid.rstrip(b"\0").decode("ascii")
        params = SketchParams(p=p, q=q, r=r, seed=seed, hash_id=hash_id)
    except (ParameterError, UnicodeDecodeError) as exc:
        raise CorruptFileError(f"invalid header: {exc}") from exc
    if len(data) < expected_len:
        raise TruncatedFileError(f"payload truncated: {len(data)} < {expected_len} bytes")
    if len(data) > expected_len:
        raise CorruptFileError(f"trailing data: {len(data)} > {expected_len} bytes")
    words = decode_payload(data[HEADER_SIZE:-CRC_SIZE], params)
    exps = words >> np.uint64(r)
    mants = words & np.uint64((1 << r) - 1)
    if (exps > (1 << q)).any() or ((exps == 0) & (mants != 0)).any():
        raise CorruptFileError("bucket outside the valid encoding range")
    mask = np.uint64((1 << r) - 1)
    regs = np.where(exps == 0, np.uint64(0), (exps << np.uint64(r)) | (mask - mants))
    return HmhSketch(params, regs.astype(np.uint64))


def write_sketch(path, s: HmhSketch) -> None:
    Path(path).write_bytes(serialize(s))


def read_sketch(path) -> HmhSketch:
    return deserialize(Path(path).read_bytes())
