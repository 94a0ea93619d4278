"""Cardinality, Jaccard and intersection estimates from HyperMinHash sketches."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .collisions import expected_collisions_approx, expected_collisions_exact
from .errors import EmptySketchError, ParameterError, SaturatedSketchError
from .sketch import HmhSketch, check_compatible, union

CORRECTIONS = ("none", "exact", "approximate")


def _alpha(m: int) -> float:
    if m == 16:
        return 0.673
    if m == 32:
        return 0.697
    if m == 64:
        return 0.709
    return 0.7213 / (1.0 + 1.079 / m)


def hll_subestimate(exponents, p: int) -> float:
    """Standard HyperLogLog estimate with linear counting for small ranges."""
    b = np.asarray(exponents, dtype=np.float64)
    m = 1 << p
    if b.shape != (m,):
        raise ParameterError(f"expected {m} registers, got {b.shape}")
    raw = _alpha(m) * m * m / float(np.sum(np.exp2(-b)))
    zeros = int(np.count_nonzero(b == 0))
    if raw <= 2.5 * m and zeros > 0:
        return m * math.log(m / zeros)
    return raw


def estimate_cardinality(s: HmhSketch) -> float:
    """Distinct-count estimate.

    The exponents are HLL registers. Once the HLL estimate reaches 1024
    per bucket the exponents are near their cap, so the estimate switches
    to reconstructed bucket minima ``2**-e * (1 + mantissa / 2**r)``.
    """
    if s.is_empty():
        return 0.0
    p, r = s.params.p, s.params.r
    e = s.exponents()
    est = hll_subestimate(e, p)
    m = 1 << p
    if est < 1024 * m:
        return est
    vals = np.exp2(-e.astype(np.float64)) * (1.0 + s.mantissas() / float(1 << r))
    total = float(vals.sum())
    if total == 0.0:
        raise SaturatedSketchError("sketch saturated: reconstructed minima sum to zero")
    return m * m / total


@dataclass(frozen=True)
class JaccardResult:
    estimate: float
    matched: int
    occupied: int
    correction: float
    correction_method: str


def _normalise_mode(mode: str) -> str:
    if mode == "approx":
        return "approximate"
    if mode not in CORRECTIONS:
        raise ParameterError(f"unknown correction {mode!r}; choose from {CORRECTIONS}")
    return mode


def match_counts(s: HmhSketch, t: HmhSketch) -> tuple[int, int]:
    """(C, N): matching non-empty buckets, buckets non-empty in either."""
    check_compatible(s.params, t.params)
    a, b = s.registers, t.registers
    matched = int(np.count_nonzero((a == b) & (a != 0)))
    occupied = int(np.count_nonzero((a != 0) | (b != 0)))
    return matched, occupied


def jaccard(s: HmhSketch, t: HmhSketch, mode: str = "none") -> JaccardResult:
    mode = _normalise_mode(mode)
    matched, occupied = match_counts(s, t)
    if occupied == 0:
        raise EmptySketchError("Jaccard index undefined: both sketches are empty")
    correction = 0.0
    if mode != "none":
        n = estimate_cardinality(s)
        m = estimate_cardinality(t)
        if mode == "exact":
            correction = expected_collisions_exact(max(n, m), min(n, m), s.params)
        else:
            correction = expected_collisions_approx(n, m, s.params)
    est = min(1.0, max(0.0, (matched - correction) / occupied))
    return JaccardResult(est, matched, occupied, correction, mode)


def intersection(s: HmhSketch, t: HmhSketch, mode: str = "none") -> float:
    """|A n B| estimate: Jaccard times the union cardinality."""
    j = jaccard(s, t, mode)
    return j.estimate * estimate_cardinality(union(s, t))
