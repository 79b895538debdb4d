"""Hypothesis tests, stratified sampling, and bootstrap effect estimation.

Test statistics are computed from their textbook formulas here; only the
distribution CDFs are delegated (normal via erfc, Student-t via scipy).
Everything randomized derives per-draw generators from integer seed paths
([seed, index]) so results are identical regardless of execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.stats import t as _student_t

MIN_BOOT = 100


def normal_sf(x: float) -> float:
    """Upper-tail probability of the standard normal, exact via erfc."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def t_sf(x: float, df: float) -> float:
    """Upper-tail probability of Student's t with df degrees of freedom."""
    return float(_student_t.sf(x, df))


@dataclass(frozen=True, slots=True)
class ZTestResult:
    z: float
    p: float
    degenerate: bool = False


def ztest_proportions(k1: int, n1: int, k2: int, n2: int) -> ZTestResult:
    """Two-sided pooled-variance two-proportion z-test.

    A pooled proportion of exactly 0 or 1 has no sampling variance; the
    result is flagged degenerate with p = 1.
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("both sample sizes must be >= 1")
    if not (0 <= k1 <= n1 and 0 <= k2 <= n2):
        raise ValueError("counts must satisfy 0 <= k <= n")
    pooled = (k1 + k2) / (n1 + n2)
    if pooled == 0.0 or pooled == 1.0:
        return ZTestResult(z=0.0, p=1.0, degenerate=True)
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    z = (k1 / n1 - k2 / n2) / se
    return ZTestResult(z=z, p=2.0 * normal_sf(abs(z)))


@dataclass(frozen=True, slots=True)
class TTestResult:
    t: float
    df: float
    p: float


def welch_ttest(sample1: Sequence[float], sample2: Sequence[float]) -> TTestResult:
    """Two-sided Welch's t-test with Welch-Satterthwaite degrees of freedom."""
    a = np.asarray(sample1, dtype=float)
    b = np.asarray(sample2, dtype=float)
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs at least 2 values")
    va = float(np.var(a, ddof=1))
    vb = float(np.var(b, ddof=1))
    if va == 0.0 and vb == 0.0:
        raise ValueError("both samples have zero variance")
    sa = va / len(a)
    sb = vb / len(b)
    t = (float(np.mean(a)) - float(np.mean(b))) / math.sqrt(sa + sb)
    # The Welch-Satterthwaite df depends only on the ratio sa:sb; normalize
    # before squaring so tiny variances cannot underflow the fraction to 0/0.
    scale = max(sa, sb)
    ra, rb = sa / scale, sb / scale
    df = (ra + rb) ** 2 / (ra**2 / (len(a) - 1) + rb**2 / (len(b) - 1))
    return TTestResult(t=t, df=df, p=2.0 * t_sf(abs(t), df))


@dataclass(frozen=True, slots=True)
class CorrelationResult:
    r: float
    p: float


def pearson_r(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Sample Pearson correlation; p from the t-transform with n-2 df."""
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if len(xs) != len(ys):
        raise ValueError("x and y must have equal length")
    n = len(xs)
    if n < 3:
        raise ValueError("need at least 3 points")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    vx = float(np.dot(dx, dx))
    vy = float(np.dot(dy, dy))
    if vx == 0.0 or vy == 0.0:
        raise ValueError("zero variance in x or y")
    denom = math.sqrt(vx * vy)
    if denom == 0.0:
        # vx * vy underflowed: the individual roots are still representable.
        denom = math.sqrt(vx) * math.sqrt(vy)
    r = float(np.dot(dx, dy)) / denom
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return CorrelationResult(r=r, p=0.0)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return CorrelationResult(r=r, p=2.0 * t_sf(abs(t), n - 2))


@dataclass(frozen=True, slots=True)
class StratifiedSampleSpec:
    strata_fields: tuple[str, ...]
    quota: int
    seed: int
    period: str | None = None

    def __post_init__(self):
        if self.quota < 1:
            raise ValueError("quota must be >= 1")


@dataclass(frozen=True, slots=True)
class StratumReport:
    key: tuple
    size: int
    sampled: bool


def stratified_sample(records: Sequence, spec: StratifiedSampleSpec):
    """Exactly spec.quota records, without replacement, per full stratum.

    Undersized strata are dropped and reported. Deterministic for a fixed
    (records, spec): stratum i in sorted-key order draws from
    default_rng([seed, i]).
    """
    from enum import Enum as _Enum

    def value_of(record, name):
        v = getattr(record, name)
        return v.value if isinstance(v, _Enum) else v

    pool = list(records)
    if spec.period is not None:
        pool = [r for r in pool if value_of(r, "period") == spec.period]
    strata: dict[tuple, list] = {}
    for record in pool:
        key = tuple(value_of(record, f) for f in spec.strata_fields)
        strata.setdefault(key, []).append(record)

    sampled = []
    reports = []
    any_full = False
    for i, key in enumerate(sorted(strata, key=lambda k: tuple(str(x) for x in k))):
        members = strata[key]
        if len(members) < spec.quota:
            reports.append(StratumReport(key, len(members), False))
            continue
        any_full = True
        rng = np.random.default_rng([spec.seed, i])
        chosen = rng.choice(len(members), size=spec.quota, replace=False)
        sampled.extend(members[j] for j in sorted(chosen.tolist()))
        reports.append(StratumReport(key, len(members), True))
    if strata and not any_full:
        raise ValueError("every stratum is smaller than the quota")
    return sampled, reports


class EffectMetric(str, Enum):
    CC = "CC"
    PC = "PC"
    NC = "NC"


@dataclass(frozen=True, slots=True)
class EffectEstimate:
    metric: str
    delta: float
    ci_low: float
    ci_high: float
    n_boot: int
    significant: bool
    n_a: int
    n_b: int


def _metric_values(records, metric) -> np.ndarray:
    """Per-record values, in percent for status-share metrics."""
    if callable(metric):
        return np.asarray([metric(r) for r in records], dtype=float)
    want = EffectMetric(metric).value
    return np.asarray(
        [100.0 if getattr(r, "status").value == want else 0.0 for r in records],
        dtype=float,
    )


def bootstrap_effect(
    records_a: Sequence,
    records_b: Sequence,
    metric: str | EffectMetric | Callable,
    n_boot: int = 10_000,
    seed: int = 0,
) -> EffectEstimate:
    """Percentile-bootstrap estimate of mean(A) - mean(B).

    Each iteration i resamples both groups with replacement using
    default_rng([seed, i]); the CI is the empirical 2.5/97.5 percentile of
    the resampled deltas, and the effect is significant iff the CI excludes
    zero. delta itself is the full-sample difference.
    """
    if n_boot < MIN_BOOT:
        raise ValueError(f"n_boot must be >= {MIN_BOOT}")
    if not len(records_a) or not len(records_b):
        raise ValueError("both groups must be non-empty")
    values_a = _metric_values(records_a, metric)
    values_b = _metric_values(records_b, metric)
    deltas = np.empty(n_boot)
    na, nb = len(values_a), len(values_b)
    for i in range(n_boot):
        rng = np.random.default_rng([seed, i])
        resample_a = values_a[rng.integers(0, na, na)]
        resample_b = values_b[rng.integers(0, nb, nb)]
        deltas[i] = resample_a.mean() - resample_b.mean()
    ci_low, ci_high = np.percentile(deltas, [2.5, 97.5])
    metric_name = metric.__name__ if callable(metric) else EffectMetric(metric).value
    return EffectEstimate(
        metric=metric_name,
        delta=float(values_a.mean() - values_b.mean()),
        ci_low=float(ci_low),
        ci_high=float(ci_high),
        n_boot=n_boot,
        significant=not (ci_low <= 0.0 <= ci_high),
        n_a=na,
        n_b=nb,
    )
