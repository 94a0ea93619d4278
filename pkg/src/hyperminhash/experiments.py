"""Monte-Carlo harnesses: the similarity sweep and the collision-model check.

Synthetic items are 64-bit counters drawn from disjoint ranges, so set
sizes and overlaps are exact. Trial ``i`` hashes with seed ``seed + i``;
results do not depend on execution order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Sequence, TextIO

import numpy as np

from .collisions import collision_bound, expected_collisions_exact, variance_bound
from .errors import InfeasibleError, ParameterError
from .estimators import jaccard, match_counts
from .hashing import MASK64, hash_u64
from .minhash import MhParams, MhSketch, mh_jaccard
from .sketch import HmhSketch, SketchParams, union

DEFAULT_MAX_ITEMS = 1 << 24
DEFAULT_CARDINALITIES = tuple(1 << k for k in range(10, 23, 2))
_HASH_CHUNK = 1 << 20
# counter ranges: core / A-only / B-only, and a stride per cardinality point
_RANGE = 1 << 40
_POINT_STRIDE = 1 << 44


@dataclass(frozen=True)
class MethodConfig:
    """One sketch configuration in the sweep."""

    name: str
    kind: str  # "hmh" or "minhash"
    log2_buckets: int
    q: int = 0
    r: int = 0
    width: int = 0

    def bits(self) -> int:
        per = self.q + 1 + self.r if self.kind == "hmh" else self.width
        return (1 << self.log2_buckets) * per

    def new(self, seed: int):
        if self.kind == "hmh":
            return HmhSketch(SketchParams(p=self.log2_buckets, q=self.q, r=self.r, seed=seed))
        return MhSketch(MhParams(k_log2=self.log2_buckets, width=self.width, seed=seed))


# Nominal 256-byte configurations; the HyperMinHash one takes 288 bytes
# because its exponent field carries the empty marker.
COMPARISON_METHODS = (
    MethodConfig("hyperminhash_p8_q4_r4", "hmh", 8, q=4, r=4),
    MethodConfig("minhash_k256_w8", "minhash", 8, width=8),
    MethodConfig("minhash_k128_w16", "minhash", 7, width=16),
)


@dataclass(frozen=True)
class SweepRow:
    method: str
    cardinality: int
    trials: int
    mean_rel_error: float
    stddev_rel_error: float


def overlap_size(n: int, t: float) -> int:
    """Shared core size s for two n-sets with Jaccard t: s / (2n - s) = t."""
    return int(round(2 * n * t / (1 + t)))


def _feed(sketches, start: int, count: int, seed: int) -> None:
    for lo in range(0, count, _HASH_CHUNK):
        keys = np.arange(start + lo, start + min(count, lo + _HASH_CHUNK), dtype=np.uint64)
        wb, we, wm = hash_u64(keys, seed)
        for s in sketches:
            if isinstance(s, HmhSketch):
                s.update_words(wb, we, wm)
            else:
                s.update_words(wb, we)


def _estimate(a, b) -> float:
    if isinstance(a, HmhSketch):
        return jaccard(a, b, "none").estimate
    return mh_jaccard(a, b)


def _merge(a, b):
    if isinstance(a, HmhSketch):
        return union(a, b)
    out = a.copy()
    np.maximum(out.registers, b.registers, out=out.registers)
    return out


def similarity_trial(
    n: int,
    true_jaccard: float,
    seed: int,
    methods: Sequence[MethodConfig] = COMPARISON_METHODS,
    offset: int = 0,
) -> dict[str, float]:
    """One trial: Jaccard estimate per method for two n-sets."""
    s = overlap_size(n, true_jaccard)
    core = [m.new(seed) for m in methods]
    a_only = [m.new(seed) for m in methods]
    b_only = [m.new(seed) for m in methods]
    _feed(core, offset, s, seed)
    _feed(a_only, offset + _RANGE, n - s, seed)
    _feed(b_only, offset + 2 * _RANGE, n - s, seed)
    out = {}
    for m, c, a, b in zip(methods, core, a_only, b_only):
        out[m.name] = _estimate(_merge(c, a), _merge(c, b))
    return out


def run_similarity_sweep(
    cardinalities: Iterable[int] = DEFAULT_CARDINALITIES,
    trials: int = 30,
    true_jaccard: float = 1.0 / 3.0,
    seed: int = 0,
    methods: Sequence[MethodConfig] = COMPARISON_METHODS,
    max_items: int = DEFAULT_MAX_ITEMS,
) -> list[SweepRow]:
    """Mean and stddev of |t_hat - t| / t per (method, cardinality).

    No collision correction is applied, for any method.
    """
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    if not 0 < true_jaccard <= 1:
        raise ParameterError("true_jaccard must be in (0, 1]")
    cards = list(cardinalities)
    for n in cards:
        if n < 1 or n > max_items:
            raise InfeasibleError(f"cardinality {n} outside [1, max_items={max_items}]")
    rows = []
    for k, n in enumerate(cards):
        s = overlap_size(n, true_jaccard)
        t = s / (2 * n - s)
        errs = {m.name: [] for m in methods}
        for i in range(trials):
            est = similarity_trial(
                n, true_jaccard, (seed + i) & MASK64, methods, offset=k * _POINT_STRIDE
            )
            for name, v in est.items():
                errs[name].append(abs(v - t) / t)
        for m in methods:
            e = np.asarray(errs[m.name])
            sd = float(e.std(ddof=1)) if trials > 1 else 0.0
            rows.append(SweepRow(m.name, n, trials, float(e.mean()), sd))
    return rows


@dataclass(frozen=True)
class CollisionTrialSummary:
    p: int
    q: int
    r: int
    n: int
    m: int
    trials: int
    mean_collisions: float
    sample_variance: float
    expected_exact: float
    mean_bound: float
    var_bound: float
    mean_within_3se: bool
    mean_below_bound: bool
    variance_below_bound: bool

    @property
    def passed(self) -> bool:
        return self.mean_within_3se and self.mean_below_bound and self.variance_below_bound


def collision_counts(params: SketchParams, n: int, m: int, trials: int, seed: int = 0) -> np.ndarray:
    """Matching non-empty buckets between sketches of disjoint n- and m-sets, per trial."""
    counts = np.empty(trials, dtype=np.int64)
    a_keys = np.arange(n, dtype=np.uint64)
    b_keys = np.arange(m, dtype=np.uint64) + np.uint64(_RANGE)
    for i in range(trials):
        ps = params.replace(seed=(seed + i) & MASK64)
        a = HmhSketch(ps)
        b = HmhSketch(ps)
        a.update_u64(a_keys)
        b.update_u64(b_keys)
        counts[i] = match_counts(a, b)[0]
    return counts


def variance_standard_error(x: np.ndarray) -> float:
    """Standard error of the unbiased sample variance (fourth-moment formula)."""
    k = len(x)
    d = x - x.mean()
    m2 = float(np.mean(d**2))
    m4 = float(np.mean(d**4))
    return math.sqrt(max(0.0, (m4 - m2 * m2 * (k - 3) / (k - 1)) / k))


def run_collision_trials(
    params: SketchParams, n: int, m: int, trials: int = 2000, seed: int = 0
) -> CollisionTrialSummary:
    if trials < 2:
        raise ParameterError("trials must be >= 2")
    counts = collision_counts(params, n, m, trials, seed).astype(np.float64)
    mean = float(counts.mean())
    var = float(counts.var(ddof=1))
    big, small = max(n, m), min(n, m)
    exact = expected_collisions_exact(big, small, params)
    mean_cap = collision_bound(big, params)
    var_cap = variance_bound(exact)
    se = math.sqrt(var / trials)
    return CollisionTrialSummary(
        p=params.p,
        q=params.q,
        r=params.r,
        n=n,
        m=m,
        trials=trials,
        mean_collisions=mean,
        sample_variance=var,
        expected_exact=exact,
        mean_bound=mean_cap,
        var_bound=var_cap,
        mean_within_3se=abs(mean - exact) <= 3 * se,
        mean_below_bound=mean <= mean_cap,
        variance_below_bound=var <= var_cap + 3 * variance_standard_error(counts),
    )


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def write_csv(records, fh: TextIO) -> None:
    """Dataclass records to CSV, one header line; floats written with repr()."""
    records = list(records)
    if not records:
        return
    names = [f.name for f in fields(records[0])]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(names)
    for rec in records:
        d = asdict(rec)
        w.writerow([_fmt(d[k]) for k in names])
