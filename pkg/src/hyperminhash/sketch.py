"""The HyperMinHash sketch: 2**p buckets of (exponent, mantissa).

Buckets are kept in memory as one uint64 "register" each, holding the
max-transformed packed word

    0                                   for an empty bucket
    (exponent << r) | (2**r - 1 - mantissa)   otherwise

so that a bucket representing a smaller underlying hash is a numerically
larger register. Insert is a scatter-max and union is ``np.maximum``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels
from .errors import IncompatibleSketchError, ParameterError
from .hashing import HASH_ID, MASK64, Item, hash_items, hash_u64

MAX_P = 24


@dataclass(frozen=True)
class SketchParams:
    """Sketch configuration. Two sketches are comparable iff params are equal."""

    p: int
    q: int = 6
    r: int = 10
    seed: int = 0
    hash_id: str = HASH_ID

    def __post_init__(self):
        if not 0 <= self.p <= MAX_P:
            raise ParameterError(f"p must be in [0, {MAX_P}], got {self.p}")
        if not 1 <= self.q <= 6:
            raise ParameterError(f"q must be in [1, 6], got {self.q}")
        if not 0 <= self.r <= 32:
            raise ParameterError(f"r must be in [0, 32], got {self.r}")
        if not 0 <= self.seed <= MASK64:
            raise ParameterError(f"seed must be a 64-bit unsigned int, got {self.seed}")
        if not isinstance(self.hash_id, str) or len(self.hash_id.encode()) > 8:
            raise ParameterError(f"hash_id must be at most 8 bytes, got {self.hash_id!r}")

    @property
    def num_buckets(self) -> int:
        return 1 << self.p

    @property
    def bucket_bits(self) -> int:
        """Logical bits per bucket: q+1 for the exponent (incl. empty) plus r."""
        return self.q + 1 + self.r

    def replace(self, **changes) -> "SketchParams":
        fields = dict(p=self.p, q=self.q, r=self.r, seed=self.seed, hash_id=self.hash_id)
        fields.update(changes)
        return SketchParams(**fields)


class Bucket(NamedTuple):
    exponent: int
    mantissa: int

    @property
    def empty(self) -> bool:
        return self.exponent == 0


EMPTY = Bucket(0, 0)


def check_bucket(b: Bucket, params: SketchParams) -> None:
    e, m = b
    if not 0 <= e <= (1 << params.q):
        raise ParameterError(f"exponent {e} outside [0, {1 << params.q}]")
    if not 0 <= m < (1 << params.r):
        raise ParameterError(f"mantissa {m} outside [0, {(1 << params.r) - 1}]")
    if e == 0 and m != 0:
        raise ParameterError("empty bucket must have mantissa 0")


def bucket_less(a: Bucket, b: Bucket) -> bool:
    """True iff ``a`` represents a strictly smaller underlying hash than ``b``.

    Larger exponent wins, then smaller mantissa; the empty bucket is the
    maximum element.
    """
    if a.exponent == 0:
        return False
    if b.exponent == 0:
        return True
    if a.exponent != b.exponent:
        return a.exponent > b.exponent
    return a.mantissa < b.mantissa


def pack_bucket(b: Bucket, params: SketchParams, max_transform: bool = False) -> int:
    """Encode a bucket in one word.

    Plain: ``exponent * 2**r + mantissa``. With ``max_transform`` the mantissa
    is complemented (and empty maps to 0), so ``bucket_less`` becomes numeric
    ``>`` on the packed words.
    """
    if params.q + 1 + params.r > 62:
        raise ParameterError("bucket does not fit in 62 bits")
    check_bucket(b, params)
    e, m = b
    if not max_transform:
        return (e << params.r) | m
    if e == 0:
        return 0
    return (e << params.r) | ((1 << params.r) - 1 - m)


def unpack_bucket(word: int, params: SketchParams, max_transform: bool = False) -> Bucket:
    if params.q + 1 + params.r > 62:
        raise ParameterError("bucket does not fit in 62 bits")
    word = int(word)
    mask = (1 << params.r) - 1
    e = word >> params.r
    if not max_transform:
        b = Bucket(e, word & mask)
    elif word == 0:
        b = EMPTY
    else:
        b = Bucket(e, mask - (word & mask))
    check_bucket(b, params)
    return b


class HmhSketch:
    """A HyperMinHash sketch.

    >>> s = HmhSketch(SketchParams(p=4, q=6, r=10))
    >>> s.update(["a", "b", "c"])
    >>> s.is_empty()
    False
    """

    __slots__ = ("params", "registers")

    def __init__(self, params: SketchParams, registers: np.ndarray | None = None):
        self.params = params
        if registers is None:
            registers = np.zeros(params.num_buckets, dtype=np.uint64)
        else:
            registers = np.array(registers, dtype=np.uint64)
            if registers.shape != (params.num_buckets,):
                raise ParameterError(
                    f"expected {params.num_buckets} registers, got {registers.shape}"
                )
        self.registers = registers

    @classmethod
    def from_buckets(cls, params: SketchParams, buckets: Iterable[tuple[int, int]]):
        regs = [pack_bucket(Bucket(*b), params, max_transform=True) for b in buckets]
        return cls(params, np.array(regs, dtype=np.uint64))

    # -- views -------------------------------------------------------------

    def exponents(self) -> np.ndarray:
        return (self.registers >> np.uint64(self.params.r)).astype(np.int64)

    def mantissas(self) -> np.ndarray:
        r = self.params.r
        mask = np.uint64((1 << r) - 1)
        m = mask - (self.registers & mask)
        m[self.registers == 0] = 0
        return m.astype(np.int64)

    @property
    def buckets(self) -> list[Bucket]:
        return [Bucket(int(e), int(m)) for e, m in zip(self.exponents(), self.mantissas())]

    def bucket(self, i: int) -> Bucket:
        return unpack_bucket(int(self.registers[i]), self.params, max_transform=True)

    def occupied(self) -> np.ndarray:
        return self.registers != 0

    def is_empty(self) -> bool:
        return not self.registers.any()

    def __len__(self) -> int:
        return self.params.num_buckets

    def __eq__(self, other) -> bool:
        if not isinstance(other, HmhSketch):
            return NotImplemented
        return self.params == other.params and np.array_equal(self.registers, other.registers)

    def __repr__(self) -> str:
        p = self.params
        used = int(self.occupied().sum())
        return f"HmhSketch(p={p.p}, q={p.q}, r={p.r}, seed={p.seed}, occupied={used}/{len(self)})"

    def copy(self) -> "HmhSketch":
        return HmhSketch(self.params, self.registers.copy())

    # -- updates -----------------------------------------------------------

    def update_words(self, w_bucket, w_exp, w_mant) -> None:
        """Insert pre-hashed items given as three uint64 word arrays."""
        p = self.params
        kernels.hmh_update(self.registers, w_bucket, w_exp, w_mant, p.p, p.q, p.r)

    def _check_hash(self) -> None:
        if self.params.hash_id != HASH_ID:
            raise IncompatibleSketchError(
                f"sketch uses hash {self.params.hash_id!r}, this build hashes with {HASH_ID!r}"
            )

    def add(self, item: Item) -> None:
        self.update([item])

    def update(self, items: Iterable[Item]) -> None:
        self._check_hash()
        self.update_words(*hash_items(items, self.params.seed))

    def update_u64(self, keys) -> None:
        """Insert 64-bit integer items (vectorised; same result as ``update``)."""
        self._check_hash()
        self.update_words(*hash_u64(keys, self.params.seed))

    def merge(self, other: "HmhSketch") -> None:
        """In-place union."""
        check_compatible(self.params, other.params)
        np.maximum(self.registers, other.registers, out=self.registers)

    def __or__(self, other: "HmhSketch") -> "HmhSketch":
        return union(self, other)


def check_compatible(a: SketchParams, b: SketchParams) -> None:
    if a != b:
        raise IncompatibleSketchError(f"incompatible sketch parameters: {a} vs {b}")


def new_sketch(params: SketchParams) -> HmhSketch:
    return HmhSketch(params)


def insert(sketch: HmhSketch, item: Item) -> HmhSketch:
    """Insert one item in place and return the sketch."""
    sketch.add(item)
    return sketch


def union(s: HmhSketch, t: HmhSketch) -> HmhSketch:
    check_compatible(s.params, t.params)
    return HmhSketch(s.params, np.maximum(s.registers, t.registers))


def sketch_of(items: Iterable[Item], params: SketchParams) -> HmhSketch:
    s = HmhSketch(params)
    s.update(items)
    return s


def sketch_of_u64(keys, params: SketchParams) -> HmhSketch:
    s = HmhSketch(params)
    s.update_u64(keys)
    return s
