"""Plug-in estimation from i.i.d. samples of the flat variable Z.

Samples are flat indices ``k`` in ``1..rs``; the empirical pmf is
``counts / n`` and every estimator is the exact functional from
:mod:`condent.exact` evaluated at that pmf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import exact
from ._backend import kernels
from .exact import Direction, Family
from .pmf import Axis, DomainError, JointPmf, MarginalPmf, Mode

VARIANCE_SOURCES = ("none", "paper-literal", "delta-oracle")


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Counts of an i.i.d. sample over an ``r x s`` grid.

    ``outcomes`` (1-based flat indices, in draw order) is kept when the sample
    was built from individual observations and is ``None`` when only counts
    are known.
    """

    r: int
    s: int
    counts: np.ndarray
    outcomes: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.shape != (self.r * self.s,):
            raise DomainError(f"counts must have length {self.r * self.s}")
        if np.any(counts < 0):
            raise DomainError("counts must be nonnegative")
        if counts.sum() < 1:
            raise DomainError("empty sample")

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_outcomes(cls, outcomes, r: int, s: int) -> SampleSet:
        k = np.array(outcomes, dtype=np.int64).ravel()
        if k.size == 0:
            raise DomainError("empty sample")
        try:
            counts = kernels.count_outcomes(k - 1, r * s)
        except ValueError:
            bad = k[(k < 1) | (k > r * s)][0]
            raise DomainError(f"outcome {bad} out of range 1..{r * s}") from None
        k.setflags(write=False)
        counts.setflags(write=False)
        return cls(r, s, counts, k)

    @classmethod
    def from_counts(cls, counts, r: int, s: int) -> SampleSet:
        c = np.array(counts, dtype=np.int64).ravel()
        c.setflags(write=False)
        return cls(r, s, c)


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    family: Family
    alpha: float | None
    direction: Direction
    n: int
    variance: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    variance_source: str = "none"

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "alpha": self.alpha,
            "direction": self.direction.value,
            "n": self.n,
            "value": self.value,
            "variance": self.variance,
            "variance_source": self.variance_source,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
        }


def empirical_joint(samples: SampleSet) -> JointPmf:
    n = samples.n
    probs = samples.counts / n
    if abs(float(probs.sum()) - 1.0) > 1e-12:
        raise DomainError("empirical probabilities do not sum to 1")
    probs.setflags(write=False)
    return JointPmf(samples.r, samples.s, probs, Mode.EMPIRICAL, samples.counts)


def empirical_marginals(samples: SampleSet) -> tuple[MarginalPmf, MarginalPmf]:
    """Marginal frequencies ``#{Z in A_i}/n`` and ``#{Z in B_j}/n``."""
    c = samples.counts.reshape(samples.r, samples.s)
    n = samples.n
    px, py = c.sum(axis=1) / n, c.sum(axis=0) / n
    px.setflags(write=False)
    py.setflags(write=False)
    return MarginalPmf(Axis.X, px), MarginalPmf(Axis.Y, py)


def estimate_entropy(samples: SampleSet, family, alpha=None, direction=Direction.Y_GIVEN_X,
                     variance_source: str = "none", ci_level: float | None = None) -> EntropyEstimate:
    """Plug-in estimate; optionally attach a plug-in variance and CI.

    The variance formulas are evaluated at the empirical pmf, restricted to
    its support.
    """
    if variance_source not in VARIANCE_SOURCES:
        raise DomainError(f"unknown variance source {variance_source!r}")
    pmf = empirical_joint(samples)
    ev = exact.entropy(pmf, family, alpha, direction)
    est = EntropyEstimate(ev.value, ev.family, ev.alpha, ev.direction, samples.n)
    if variance_source == "none":
        if ci_level is not None:
            raise DomainError("a confidence interval needs a variance source")
        return est
    from . import asymptotics

    fn = asymptotics.variance_delta if variance_source == "delta-oracle" else asymptotics.variance_total_paper
    var = fn(pmf, ev.family, ev.alpha, ev.direction)
    lo = hi = None
    # a negative published-form variance has no interval
    if ci_level is not None and var >= 0:
        lo, hi = asymptotics.confidence_interval(ev.value, var, samples.n, ci_level)
    return EntropyEstimate(ev.value, ev.family, ev.alpha, ev.direction, samples.n,
                           var, lo, hi, variance_source)


def estimate_power_sums(samples: SampleSet, alpha) -> tuple[float, float, float]:
    """Empirical ``S_a`` of the joint, X-marginal and Y-marginal."""
    alpha = float(alpha)
    if not alpha > 0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be positive, got {alpha}")
    mx, my = empirical_marginals(samples)
    joint = samples.counts / samples.n
    return (exact.power_sum(joint, alpha), exact.power_sum(mx.probs, alpha),
            exact.power_sum(my.probs, alpha))

