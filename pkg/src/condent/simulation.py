"""Seeded sampling and Monte Carlo campaigns.

Random numbers come from SplitMix64 used as a counter-based generator: draw
``l`` (1-based) of the stream with key ``K`` is ``mix(K + l * 0x9E3779B97F4A7C15)``
where ``mix`` is the SplitMix64 finaliser. The stream for trial ``t`` at sample
size ``n`` under seed ``S`` has key ``S xor mix(mix(n) + t)`` (all arithmetic
mod 2**64). The top 53 bits of each draw are located among integer
thresholds ``floor(2**53 * cdf)``, so sampling involves no floating point and
gives the same outcomes on every platform and with either kernel backend.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics, normal
from ._backend import kernels
from .estimation import SampleSet, empirical_joint, estimate_entropy
from .exact import Direction, Family, check_alpha, entropy
from .pmf import DomainError, JointPmf, validate

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
ONE53 = 1 << 53


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, n: int, trial: int = 0) -> int:
    return (seed & MASK64) ^ mix64(mix64(n) + trial)


def thresholds(probs) -> np.ndarray:
    """Integer inverse-CDF table: cell ``k`` is drawn when ``t[k-1] <= u < t[k]``."""
    p = np.asarray(probs, dtype=np.float64).ravel()
    if p.size == 0 or np.any(p < 0) or abs(float(p.sum()) - 1.0) > 1e-9:
        raise DomainError("not a probability vector")
    t = np.floor(np.cumsum(p) * ONE53)
    t = np.minimum(t, ONE53).astype(np.uint64)
    last = int(np.flatnonzero(p > 0)[-1])
    t[last:] = ONE53
    return t


@dataclass(frozen=True)
class ZipfSpec:
    beta: float
    m: int


def zipf_pmf(spec: ZipfSpec) -> np.ndarray:
    """``k**-beta / sum_i i**-beta`` for ``k = 1..m``."""
    if spec.m < 1:
        raise DomainError(f"m must be at least 1, got {spec.m}")
    if spec.beta < 0:
        raise DomainError(f"beta must be nonnegative, got {spec.beta}")
    w = np.arange(1, spec.m + 1, dtype=np.float64) ** -float(spec.beta)
    return w / w.sum()


def zipf_joint(beta: float = 2.0, r: int = 3, s: int = 2) -> JointPmf:
    """Zipf(beta, r*s) laid out as an ``r x s`` joint table."""
    return validate(zipf_pmf(ZipfSpec(beta, r * s)), r, s)


def _shape(pmf) -> tuple[np.ndarray, int, int]:
    if isinstance(pmf, JointPmf):
        return pmf.probs, pmf.r, pmf.s
    p = np.asarray(pmf, dtype=np.float64).ravel()
    return p, p.size, 1


def sample(pmf, n: int, seed: int, trial: int = 0) -> SampleSet:
    """``n`` i.i.d. draws, keeping the individual outcomes.

    ``pmf`` is a :class:`JointPmf` or a flat vector (treated as ``m x 1``).
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    p, r, s = _shape(pmf)
    out = kernels.draw_outcomes(thresholds(p), stream_key(seed, n, trial), n)
    return SampleSet.from_outcomes(out + 1, r, s)


def sample_counts(pmf, n: int, seed: int, trial: int = 0) -> SampleSet:
    """Same draws as :func:`sample`, counted without storing outcomes."""
    if n < 1:
        raise DomainError("n must be at least 1")
    p, r, s = _shape(pmf)
    return SampleSet.from_counts(kernels.draw_counts(thresholds(p), stream_key(seed, n, trial), n), r, s)


@dataclass(frozen=True)
class CampaignConfig:
    truth: JointPmf
    family: Family
    alpha: float | None
    direction: Direction
    sample_sizes: tuple[int, ...]
    trials: int
    seed: int
    variance_source: str = "delta-oracle"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "direction", Direction(self.direction))
        if not self.direction.conditional:
            raise DomainError("campaigns estimate conditional entropies only")
        alpha = None if self.family is Family.SHANNON else check_alpha(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        sizes = tuple(int(n) for n in self.sample_sizes)
        if not sizes:
            raise DomainError("sample_sizes must be nonempty")
        if any(n < 2 for n in sizes):
            raise DomainError("sample sizes must be at least 2")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise DomainError("sample sizes must be strictly ascending")
        object.__setattr__(self, "sample_sizes", sizes)
        if int(self.trials) < 1:
            raise DomainError("trials must be at least 1")
        if self.variance_source not in ("delta-oracle", "paper-literal"):
            raise DomainError(f"unknown variance source {self.variance_source!r}")
        if int(self.workers) < 1:
            raise DomainError("workers must be at least 1")


@dataclass(frozen=True)
class TrialRecord:
    n: int
    trial: int
    estimate: float
    error: float
    a_z: float
    a_x: float
    a_y: float
    standardized: float | None
    failure: str | None = None


@dataclass(frozen=True)
class SizeSummary:
    n: int
    count: int
    mean: float
    variance: float
    median_abs_error: float
    scaled_variance: float  # Monte Carlo variance of sqrt(n) (estimate - truth)
    ks: float | None = None
    ks_fitted: float | None = None


@dataclass
class SimulationTrace:
    truth_value: float
    sigma: float | None
    records: list[TrialRecord]
    summaries: list[SizeSummary]
    qq: list[tuple[float, float]] = field(default_factory=list)
    histogram: tuple[list[float], list[int]] | None = None

    def records_at(self, n: int) -> list[TrialRecord]:
        return [rec for rec in self.records if rec.n == n]

    def summary_at(self, n: int) -> SizeSummary:
        for s in self.summaries:
            if s.n == n:
                return s
        raise KeyError(n)


def ks_distance(values) -> float:
    """Kolmogorov-Smirnov distance between the sample's ECDF and N(0, 1)."""
    x = np.sort(np.asarray(values, dtype=np.float64).ravel())
    if x.size == 0:
        raise DomainError("ks_distance needs at least one value")
    t = x.size
    f = np.array([normal.cdf(v) for v in x])
    upper = np.arange(1, t + 1) / t - f
    lower = f - np.arange(0, t) / t
    return float(min(1.0, max(upper.max(), lower.max(), 0.0)))


def ks_distance_fitted(values) -> float:
    """KS distance after standardising by the sample's own mean and sd."""
    x = np.asarray(values, dtype=np.float64).ravel()
    sd = x.std(ddof=1) if x.size > 1 else 0.0
    if not sd > 0:
        raise DomainError("cannot standardise values with zero spread")
    return ks_distance((x - x.mean()) / sd)


def qq_pairs(values) -> list[tuple[float, float]]:
    """``(empirical quantile, normal quantile)`` with the ``(t - 0.5)/T`` convention."""
    x = np.sort(np.asarray(values, dtype=np.float64).ravel())
    t = x.size
    return [(float(v), normal.ppf((i + 0.5) / t)) for i, v in enumerate(x)]


def histogram(values) -> tuple[list[float], list[int]]:
    """Bin edges and counts using the Freedman-Diaconis width."""
    x = np.asarray(values, dtype=np.float64).ravel()
    q75, q25 = np.percentile(x, [75, 25])
    width = 2.0 * (q75 - q25) * x.size ** (-1.0 / 3.0)
    span = float(x.max() - x.min())
    bins = max(1, math.ceil(span / width)) if width > 0 and span > 0 else 1
    counts, edges = np.histogram(x, bins=bins)
    return [float(e) for e in edges], [int(c) for c in counts]


def _sigma(config: CampaignConfig) -> float | None:
    if config.variance_source == "delta-oracle":
        var = asymptotics.variance_delta(config.truth, config.family, config.alpha, config.direction)
    else:
        var = asymptotics.variance_total_paper(config.truth, config.family, config.alpha, config.direction)
    return math.sqrt(var) if var > 0 else None


def _trial(config: CampaignConfig, truth_value: float, sigma: float | None, n: int, t: int) -> TrialRecord:
    samples = sample_counts(config.truth, n, config.seed, t)
    a_z, a_x, a_y = asymptotics.sup_deviation(empirical_joint(samples), config.truth)
    try:
        est = estimate_entropy(samples, config.family, config.alpha, config.direction).value
    except (DomainError, ZeroDivisionError, ValueError) as exc:
        return TrialRecord(n, t, math.nan, math.nan, a_z, a_x, a_y, None, str(exc))
    err = est - truth_value
    z = math.sqrt(n) * err / sigma if sigma else None
    return TrialRecord(n, t, est, err, a_z, a_x, a_y, z)


def _run(config: CampaignConfig, sizes) -> tuple[float, float | None, list[TrialRecord]]:
    truth_value = entropy(config.truth, config.family, config.alpha, config.direction).value
    sigma = _sigma(config)
    tasks = [(n, t) for n in sizes for t in range(config.trials)]
    if config.workers == 1:
        records = [_trial(config, truth_value, sigma, n, t) for n, t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(lambda nt: _trial(config, truth_value, sigma, *nt), tasks,
                                    chunksize=64))
    return truth_value, sigma, records


def _summarise(n: int, recs: list[TrialRecord], normality: bool) -> SizeSummary:
    ok = [r for r in recs if r.failure is None]
    est = np.array([r.estimate for r in ok])
    err = np.array([r.error for r in ok])
    nan = math.nan
    mean = float(est.mean()) if ok else nan
    var = float(est.var(ddof=1)) if len(ok) > 1 else nan
    med = float(np.median(np.abs(err))) if ok else nan
    scaled = float(np.var(math.sqrt(n) * err, ddof=1)) if len(ok) > 1 else nan
    ks = ks_fit = None
    if normality:
        z = [r.standardized for r in ok if r.standardized is not None]
        if z:
            ks = ks_distance(z)
        if len(ok) > 1 and np.std(est) > 0:
            ks_fit = ks_distance_fitted(est)
    return SizeSummary(n, len(ok), mean, var, med, scaled, ks, ks_fit)


def run_convergence(config: CampaignConfig) -> SimulationTrace:
    """Fresh samples for every ``(n, trial)`` on the configured grid."""
    truth_value, sigma, records = _run(config, config.sample_sizes)
    summaries = [_summarise(n, [r for r in records if r.n == n], False) for n in config.sample_sizes]
    return SimulationTrace(truth_value, sigma, records, summaries)


def run_normality(config: CampaignConfig) -> SimulationTrace:
    """Standardised statistics at the largest configured sample size."""
    n = config.sample_sizes[-1]
    if _sigma(config) is None:
        raise DomainError(
            f"asymptotic variance from {config.variance_source!r} is not positive; "
            "switch variance_source to standardise")
    truth_value, sigma, records = _run(config, (n,))
    z = [r.standardized for r in records if r.standardized is not None]
    summary = _summarise(n, records, True)
    return SimulationTrace(truth_value, sigma, records, [summary], qq_pairs(z),
                           histogram(z) if z else None)
