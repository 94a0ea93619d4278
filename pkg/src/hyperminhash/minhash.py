"""k-partition (one-permutation) MinHash with fixed-width minima.

Baseline for the accuracy comparison: items are routed to 2**k_log2
partitions by the top bits of the bucket word, and each partition keeps the
minimum of the top ``width`` bits of a second hash word.

Registers store ``2**width - value`` (0 = empty), i.e. the empty marker
lives outside the value range and the all-ones value stays representable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import kernels
from .errors import EmptySketchError, IncompatibleSketchError, ParameterError
from .hashing import HASH_ID, Item, hash_items, hash_u64


@dataclass(frozen=True)
class MhParams:
    k_log2: int
    width: int
    seed: int = 0
    hash_id: str = HASH_ID

    def __post_init__(self):
        if not 0 <= self.k_log2 <= 24:
            raise ParameterError(f"k_log2 must be in [0, 24], got {self.k_log2}")
        if not 1 <= self.width <= 62:
            raise ParameterError(f"width must be in [1, 62], got {self.width}")

    @property
    def k(self) -> int:
        return 1 << self.k_log2


class MhSketch:
    __slots__ = ("params", "registers")

    def __init__(self, params: MhParams, registers=None):
        self.params = params
        if registers is None:
            registers = np.zeros(params.k, dtype=np.uint64)
        self.registers = np.array(registers, dtype=np.uint64)
        if self.registers.shape != (params.k,):
            raise ParameterError(f"expected {params.k} registers")

    @property
    def values(self) -> np.ndarray:
        """Stored minima; -1 marks an empty partition."""
        v = (np.uint64(1 << self.params.width) - self.registers).astype(np.int64)
        v[self.registers == 0] = -1
        return v

    def update_words(self, w_bucket, w_value) -> None:
        p = self.params
        kernels.mh_update(self.registers, w_bucket, w_value, p.k_log2, p.width)

    def update(self, items: Iterable[Item]) -> None:
        wb, wv, _ = hash_items(items, self.params.seed)
        self.update_words(wb, wv)

    def update_u64(self, keys) -> None:
        wb, wv, _ = hash_u64(keys, self.params.seed)
        self.update_words(wb, wv)

    def add(self, item: Item) -> None:
        self.update([item])

    def __eq__(self, other):
        if not isinstance(other, MhSketch):
            return NotImplemented
        return self.params == other.params and np.array_equal(self.registers, other.registers)

    def __repr__(self):
        used = int(np.count_nonzero(self.registers))
        return f"MhSketch(k={self.params.k}, width={self.params.width}, occupied={used})"

    def copy(self) -> "MhSketch":
        return MhSketch(self.params, self.registers.copy())


def mh_insert(s: MhSketch, item: Item) -> MhSketch:
    s.add(item)
    return s


def mh_union(s: MhSketch, t: MhSketch) -> MhSketch:
    if s.params != t.params:
        raise IncompatibleSketchError(f"incompatible MinHash configs: {s.params} vs {t.params}")
    return MhSketch(s.params, np.maximum(s.registers, t.registers))


def mh_jaccard(s: MhSketch, t: MhSketch) -> float:
    """Fraction of equal partitions among those non-empty in either sketch."""
    if s.params != t.params:
        raise IncompatibleSketchError(f"incompatible MinHash configs: {s.params} vs {t.params}")
    a, b = s.registers, t.registers
    occupied = np.count_nonzero((a != 0) | (b != 0))
    if occupied == 0:
        raise EmptySketchError("Jaccard index undefined: both sketches are empty")
    return int(np.count_nonzero((a == b) & (a != 0))) / int(occupied)
