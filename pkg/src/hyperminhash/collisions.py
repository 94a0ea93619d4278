"""Expected accidental collisions between sketches of disjoint sets.

The exact value sums, over every (exponent, mantissa) cell of the encoding,
the probability that both sets' bucket minima fall in that cell. Powers
``(1 - b)**n`` are evaluated in log space, so no big-number arithmetic is
needed for cardinalities up to 2**64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CardinalityTooLargeError, InfeasibleError, ParameterError
from .sketch import SketchParams

# Empirical large-cardinality limit of collisions per 2**(p - r), n = m.
ASYMPTOTIC_COLLISION_RATE = 0.169919487159739093975315012348

MAX_EXACT_R = 24
_CHUNK = 1 << 20


@dataclass(frozen=True)
class CollisionEstimate:
    n: float
    m: float
    expected: float
    variance_bound: float
    method: str


def _cell_mass(count: float, lo: np.ndarray, width: np.ndarray) -> np.ndarray:
    """P(min of ``count`` uniforms lands in [lo, lo + width]) per cell.

    Equals (1-lo)**count - (1-lo-width)**count, written as
    (1-lo)**count * -expm1(count * log1p(-width / (1-lo))) to avoid
    cancellation.
    """
    with np.errstate(divide="ignore"):
        head = np.exp(count * np.log1p(-lo))
        tail = -np.expm1(count * np.log1p(-width / (1.0 - lo)))
    return head * tail


def _row_sum(n: float, m: float, lo0: float, step: float, nj: int) -> float:
    total = 0.0
    for start in range(0, nj, _CHUNK):
        j = np.arange(start, min(nj, start + _CHUNK), dtype=np.float64)
        lo = lo0 + j * step
        width = np.full_like(lo, step)
        total += float(np.dot(_cell_mass(n, lo, width), _cell_mass(m, lo, width)))
    return total


def expected_collisions_exact(n: float, m: float, params: SketchParams) -> float:
    """Expected number of matching non-empty buckets for disjoint sets of size n, m.

    Cost is O(2**q * 2**r); use :func:`expected_collisions_approx` for wide
    mantissas.
    """
    if n < 0 or m < 0:
        raise ParameterError("cardinalities must be non-negative")
    if params.r > MAX_EXACT_R:
        raise ParameterError(
            f"exact collision sum needs r <= {MAX_EXACT_R} (got {params.r}); "
            "use the approximation"
        )
    if n == 0 or m == 0:
        return 0.0
    p, q, r = params.p, params.q, params.r
    n, m = float(n), float(m)
    cap = 1 << q
    nj = 1 << r
    total = 0.0
    for i in range(1, cap + 1):
        if i < cap:
            # cells [(2^r + j), (2^r + j + 1)] / 2^(p+r+i)
            step = math.ldexp(1.0, -(p + r + i))
            lo0 = math.ldexp(1.0, -(p + i))
        else:
            # capped row [j, j + 1] / 2^(p+r+i-1) reaches down to 0
            step = math.ldexp(1.0, -(p + r + i - 1))
            lo0 = 0.0
        total += _row_sum(n, m, lo0, step, nj)
    return math.ldexp(total, p)


def expected_collisions_approx(n: float, m: float, params: SketchParams) -> float:
    """Fast approximation of :func:`expected_collisions_exact`.

    Small cardinalities use the r = 0 exact sum scaled by 2**-r; beyond
    2**(p+5) the constant large-n rate is used, scaled by the n/m imbalance.
    """
    if n < 0 or m < 0:
        raise ParameterError("cardinalities must be non-negative")
    if n < m:
        n, m = m, n
    p, q, r = params.p, params.q, params.r
    if n > 2.0 ** ((1 << q) + r):
        raise CardinalityTooLargeError(
            f"cardinality {n:g} too large for approximation (limit 2^{(1 << q) + r})"
        )
    if m == 0:
        return 0.0
    if n > 2.0 ** (p + 5):
        ratio = n / m
        phi = (4.0 * ratio) / (1.0 + ratio) ** 2
        return ASYMPTOTIC_COLLISION_RATE * math.ldexp(1.0, p - r) * phi
    return math.ldexp(expected_collisions_exact(n, m, params.replace(r=0)), -r)


def collision_bound(n: float, params: SketchParams) -> float:
    """Upper bound 2**p * (5/2**r + n/2**(p + 2**q + r)) on expected collisions."""
    p, q, r = params.p, params.q, params.r
    return math.ldexp(1.0, p) * (
        math.ldexp(5.0, -r) + math.ldexp(float(n), -(p + (1 << q) + r))
    )


def gamma_bound(n: float, q: int, r: int) -> float:
    """Single-bucket collision probability bound 6/2**r + n/2**(2**q + r)."""
    return math.ldexp(6.0, -r) + math.ldexp(float(n), -((1 << q) + r))


def variance_bound(expected: float) -> float:
    if expected < 0:
        raise ParameterError("expected collisions must be non-negative")
    return expected * expected + expected


def estimate_collisions(n: float, m: float, params: SketchParams, method: str = "exact"):
    """Bundle the expectation and the variance bound for a pair of cardinalities."""
    if n < m:
        n, m = m, n
    if method == "exact":
        e = expected_collisions_exact(n, m, params)
    elif method in ("approx", "approximate"):
        method = "approximate"
        e = expected_collisions_approx(n, m, params)
    elif method == "bound":
        e = collision_bound(n, params)
    else:
        raise ParameterError(f"unknown collision method {method!r}")
    return CollisionEstimate(n, m, e, variance_bound(e), method)


def _ceil_log2(x: float) -> int:
    return max(0, math.ceil(math.log2(x) - 1e-12))


def recommend_params(epsilon: float, t_min: float, n_max: int, seed: int = 0) -> SketchParams:
    """Smallest (p, q, r) for additive Jaccard error ``epsilon`` down to ``t_min``.

    r = ceil(log2(6 / (epsilon * t_min))) keeps the collision error below
    epsilon * t_min, p = ceil(log2(epsilon**-2)) controls sampling error and
    q is the smallest exponent width whose cap 2**(2**q) exceeds ``n_max``.
    """
    if not 0 < epsilon <= 1:
        raise ParameterError("epsilon must be in (0, 1]")
    if not 0 < t_min <= 1:
        raise ParameterError("t_min must be in (0, 1]")
    if n_max < 0:
        raise ParameterError("n_max must be non-negative")
    r = _ceil_log2(6.0 / (epsilon * t_min))
    p = _ceil_log2(epsilon**-2)
    n_eff = max(int(n_max), 4)
    q = max(1, _ceil_log2(math.log2(n_eff)))
    while q <= 6 and n_eff.bit_length() > (1 << q):  # need n_max < 2**(2**q)
        q += 1
    if q > 6:
        raise InfeasibleError(f"n_max={n_max} needs q > 6 (cardinality >= 2^64)")
    if r > 32 or p > 24:
        raise InfeasibleError(f"requested accuracy needs p={p}, r={r}; out of range")
    return SketchParams(p=p, q=q, r=r, seed=seed)
