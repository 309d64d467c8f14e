"""Almost-sure bound constants and asymptotic variances of the plug-in
conditional entropy estimators.

Two variance routes are provided and never mixed:

``variance_paper``
    Term-by-term transcription of the published closed forms (the
    ``(p p')**(3/2)`` and ``(p p')**(a - 1/2)`` cross sums with their factor 2).
    The symbolic ``Cov(G_marginal, G_joint)`` terms are evaluated by contracting
    the gradients of the two linearised pieces against the multinomial
    covariance.

``variance_delta``
    ``g' C g`` where ``g`` is the exact gradient of the conditional functional
    with respect to the flat pmf and ``C = diag(p) - p p'`` is the covariance
    of ``sqrt(n) (p_hat - p)``.

The two disagree in general (for a uniform pmf the published Shannon form is
positive while the delta-method variance is zero). Monte Carlo agrees with
``variance_delta``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import normal
from .exact import Direction, Family, check_alpha, entropy
from .pmf import Axis, DomainError, JointPmf, Mode, marginal


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Covariance of ``rho_k = sqrt(n/p_k) (p_hat_k - p_k)`` (``normalized``)
    and of ``sqrt(n) (p_hat_k - p_k)`` (``multinomial``)."""

    normalized: np.ndarray
    multinomial: np.ndarray

    @property
    def dimension(self) -> int:
        return self.normalized.shape[0]


@dataclass(frozen=True)
class VarianceBreakdown:
    total: float
    marginal: float | None = None
    joint: float | None = None
    cross: float | None = None


@dataclass(frozen=True)
class AsymptoticProfile:
    family: Family
    alpha: float | None
    direction: Direction
    bound_constant: float
    bound_normalizer: str
    variance_paper: float
    variance_delta: float
    components: VarianceBreakdown

    def to_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value
        d["direction"] = self.direction.value
        return d


def covariance_matrix(pmf: JointPmf) -> CovarianceMatrix:
    p = pmf.probs
    sq = np.sqrt(p)
    normalized = -np.outer(sq, sq)
    np.fill_diagonal(normalized, 1.0 - p)
    multinomial = -np.outer(p, p)
    np.fill_diagonal(multinomial, p * (1.0 - p))
    return CovarianceMatrix(normalized, multinomial)


def _check_support(pmf: JointPmf) -> None:
    if pmf.mode is Mode.STRICT and np.any(pmf.probs <= 0):
        raise DomainError("all cells must be positive")


def _pieces(pmf: JointPmf, direction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Joint cells on the support, the conditioning marginal on its support,
    and each support cell's conditioning mass."""
    _check_support(pmf)
    direction = Direction(direction)
    axis = direction.conditioning_axis
    m = marginal(pmf, axis)
    lifted = np.repeat(m, pmf.s) if axis is Axis.X else np.tile(m, pmf.r)
    live = pmf.probs > 0
    return pmf.probs[live], m[m > 0], lifted[live]


def bound_normalizer(family, direction) -> str:
    """Which sup-deviation normalises the a.s. bound: ``a_Z``, ``a_X`` or ``a_Y``."""
    family, direction = Family(family), Direction(direction)
    if family is Family.RENYI:
        return "a_X" if direction is Direction.Y_GIVEN_X else "a_Y"
    return "a_Z"


def bound_constant(pmf: JointPmf, family, alpha=None, direction=Direction.Y_GIVEN_X) -> float:
    family, direction = Family(family), Direction(direction)
    p, m, _ = _pieces(pmf, direction)
    if family is Family.SHANNON:
        return float(np.sum(np.abs(1.0 + np.log(p))))
    alpha = check_alpha(alpha)
    s_joint, s_marg = np.sum(p**alpha), np.sum(m**alpha)
    if family is Family.RENYI:
        return float(alpha / abs(alpha - 1.0)
                     * (np.sum(p ** (alpha - 1.0)) / s_joint + np.sum(m ** (alpha - 1.0)) / s_marg))
    return float(alpha / (abs(1.0 - alpha) * s_marg)
                 * (s_joint / s_marg * np.sum(m ** (alpha - 1.0)) + np.sum(p ** (alpha - 1.0))))


def _offdiag_sum(w: np.ndarray) -> float:
    """``sum_{k != k'} w_k w_k'`` over ordered pairs."""
    return float(np.sum(w) ** 2 - np.sum(w * w))


def _power_block(q: np.ndarray, alpha: float) -> float:
    return float(np.sum((1.0 - q) * q ** (2.0 * alpha - 1.0))) - 2.0 * _offdiag_sum(q ** (alpha - 0.5))


def _contract(p: np.ndarray, g1: np.ndarray, g2: np.ndarray) -> float:
    """``g1' (diag(p) - p p') g2``."""
    return float(np.sum(p * g1 * g2) - np.sum(p * g1) * np.sum(p * g2))


def variance_paper(pmf: JointPmf, family, alpha=None, direction=Direction.Y_GIVEN_X) -> VarianceBreakdown:
    family, direction = Family(family), Direction(direction)
    p, m, lifted = _pieces(pmf, direction)
    if family is Family.SHANNON:
        lp = 1.0 + np.log(p)
        total = float(np.sum(p * (1.0 - p) * lp**2)) - 2.0 * _offdiag_sum(p**1.5 * lp)
        return VarianceBreakdown(total)
    alpha = check_alpha(alpha)
    s_joint, s_marg = float(np.sum(p**alpha)), float(np.sum(m**alpha))
    if family is Family.RENYI:
        var_m = (alpha / ((alpha - 1.0) * s_marg)) ** 2 * _power_block(m, alpha)
        var_j = (alpha / ((1.0 - alpha) * s_joint)) ** 2 * _power_block(p, alpha)
        g_m = alpha * lifted ** (alpha - 1.0) / ((1.0 - alpha) * s_marg)
        g_j = alpha * p ** (alpha - 1.0) / ((1.0 - alpha) * s_joint)
    else:
        c = alpha / (1.0 - alpha)
        var_m = c**2 * (s_joint / s_marg**2) ** 2 * _power_block(m, alpha)
        var_j = c**2 * (1.0 / s_marg**2) ** 2 * _power_block(p, alpha)
        g_m = -c * s_joint / s_marg**2 * lifted ** (alpha - 1.0)
        g_j = c / s_marg * p ** (alpha - 1.0)
    cross = _contract(p, g_m, g_j)
    return VarianceBreakdown(var_m + var_j + 2.0 * cross, var_m, var_j, cross)


def variance_total_paper(pmf: JointPmf, family, alpha=None, direction=Direction.Y_GIVEN_X) -> float:
    return variance_paper(pmf, family, alpha, direction).total


def _gradient(pmf: JointPmf, family: Family, alpha, direction: Direction) -> tuple[np.ndarray, np.ndarray]:
    """Support cells and the gradient of the functional at them."""
    _check_support(pmf)
    live = pmf.probs > 0
    p = pmf.probs[live]
    if direction.conditional:
        axis = direction.conditioning_axis
        m = marginal(pmf, axis)
        lifted = (np.repeat(m, pmf.s) if axis is Axis.X else np.tile(m, pmf.r))[live]
        s_marg = float(np.sum(m[m > 0] ** alpha)) if alpha is not None else None
    elif direction is Direction.JOINT:
        lifted = None
    else:
        axis = Axis.X if direction is Direction.MARGINAL_X else Axis.Y
        m = marginal(pmf, axis)
        # a marginal functional only sees the marginal entry of each cell
        p = (np.repeat(m, pmf.s) if axis is Axis.X else np.tile(m, pmf.r))[live]
        q = m[m > 0]
        weights = pmf.probs[live]
        if family is Family.SHANNON:
            return weights, -np.log(p) - 1.0
        s_m = float(np.sum(q**alpha))
        if family is Family.RENYI:
            return weights, alpha * p ** (alpha - 1.0) / ((1.0 - alpha) * s_m)
        return weights, alpha * p ** (alpha - 1.0) / (1.0 - alpha)

    if family is Family.SHANNON:
        g = -np.log(p) - 1.0
        if lifted is not None:
            g = g + np.log(lifted) + 1.0
        return p, g
    s_joint = float(np.sum(p**alpha))
    if family is Family.RENYI:
        g = alpha * p ** (alpha - 1.0) / ((1.0 - alpha) * s_joint)
        if lifted is not None:
            g = g - alpha * lifted ** (alpha - 1.0) / ((1.0 - alpha) * s_marg)
        return p, g
    if lifted is None:
        return p, alpha * p ** (alpha - 1.0) / (1.0 - alpha)
    g = (alpha * p ** (alpha - 1.0) / s_marg
         - s_joint * alpha * lifted ** (alpha - 1.0) / s_marg**2) / (1.0 - alpha)
    return p, g


def variance_delta(pmf: JointPmf, family, alpha=None, direction=Direction.Y_GIVEN_X) -> float:
    """Delta-method asymptotic variance of ``sqrt(n) (estimate - truth)``.

    Works for the joint and marginal functionals too; e.g. Shannon joint gives
    ``sum p log(p)**2 - H**2``.
    """
    family, direction = Family(family), Direction(direction)
    alpha = None if family is Family.SHANNON else check_alpha(alpha)
    w, g = _gradient(pmf, family, alpha, direction)
    centred = g - np.sum(w * g)
    return float(np.sum(w * centred**2))


def gradient(pmf: JointPmf, family, alpha=None, direction=Direction.Y_GIVEN_X) -> np.ndarray:
    """Full-length gradient (zeros off the support) used by ``variance_delta``."""
    family, direction = Family(family), Direction(direction)
    alpha = None if family is Family.SHANNON else check_alpha(alpha)
    _, g = _gradient(pmf, family, alpha, direction)
    full = np.zeros(pmf.r * pmf.s)
    full[pmf.probs > 0] = g
    return full


def confidence_interval(value: float, variance: float, n: int, level: float) -> tuple[float, float]:
    """Normal-approximation interval ``value +/- z sqrt(variance / n)``."""
    if not 0.0 < level < 1.0:
        raise DomainError(f"confidence level must lie in (0, 1), got {level}")
    if n < 1:
        raise DomainError("n must be at least 1")
    if variance < 0 or not math.isfinite(variance):
        raise DomainError(f"variance must be finite and nonnegative, got {variance}")
    half = normal.ppf(0.5 * (1.0 + level)) * math.sqrt(variance / n)
    return value - half, value + half


def sup_deviation(empirical: JointPmf, truth: JointPmf) -> tuple[float, float, float]:
    """``(a_Z, a_X, a_Y)``: sup-norm gaps of cells and both marginals."""
    if (empirical.r, empirical.s) != (truth.r, truth.s):
        raise DomainError(f"shape mismatch: {empirical.r}x{empirical.s} vs {truth.r}x{truth.s}")
    a_z = float(np.max(np.abs(empirical.probs - truth.probs)))
    a_x = float(np.max(np.abs(marginal(empirical, Axis.X) - marginal(truth, Axis.X))))
    a_y = float(np.max(np.abs(marginal(empirical, Axis.Y) - marginal(truth, Axis.Y))))
    return a_z, a_x, a_y


def profile(pmf: JointPmf, family, alpha=None, direction=Direction.Y_GIVEN_X) -> AsymptoticProfile:
    ev = entropy(pmf, family, alpha, direction)
    if not ev.direction.conditional:
        raise DomainError("profiles are defined for conditional directions only")
    parts = variance_paper(pmf, ev.family, ev.alpha, ev.direction)
    return AsymptoticProfile(
        family=ev.family,
        alpha=ev.alpha,
        direction=ev.direction,
        bound_constant=bound_constant(pmf, ev.family, ev.alpha, ev.direction),
        bound_normalizer=bound_normalizer(ev.family, ev.direction),
        variance_paper=parts.total,
        variance_delta=variance_delta(pmf, ev.family, ev.alpha, ev.direction),
        components=parts,
    )
