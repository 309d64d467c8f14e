"""Shannon, Renyi and Tsallis entropies of known pmfs, in nats.

Conditional Renyi and Tsallis entropies follow the power-sum definitions

    R_a(Y|X) = log(S_a(XY) / S_a(X)) / (1 - a)
    T_a(Y|X) = (S_a(XY) / S_a(X) - 1) / (1 - a)

with ``S_a(p) = sum(p**a)``. Zero cells contribute nothing (``0 log 0 = 0``,
``0**a = 0``), which only matters for empirical pmfs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .pmf import Axis, DomainError, JointPmf, marginal


class Family(str, enum.Enum):
    SHANNON = "shannon"
    RENYI = "renyi"
    TSALLIS = "tsallis"


class Direction(str, enum.Enum):
    JOINT = "joint"
    MARGINAL_X = "x"
    MARGINAL_Y = "y"
    Y_GIVEN_X = "yx"
    X_GIVEN_Y = "xy"

    @property
    def conditional(self) -> bool:
        return self in (Direction.Y_GIVEN_X, Direction.X_GIVEN_Y)

    @property
    def conditioning_axis(self) -> Axis:
        if self is Direction.Y_GIVEN_X:
            return Axis.X
        if self is Direction.X_GIVEN_Y:
            return Axis.Y
        raise DomainError(f"{self.value} is not a conditional direction")


CONDITIONAL_DIRECTIONS = (Direction.Y_GIVEN_X, Direction.X_GIVEN_Y)


@dataclass(frozen=True)
class EntropyValue:
    value: float
    family: Family
    alpha: float | None
    direction: Direction

    def __float__(self) -> float:
        return self.value


def check_alpha(alpha) -> float:
    """Validate an order for Renyi/Tsallis use; 1 is rejected on purpose."""
    alpha = float(alpha)
    if not alpha > 0 or not math.isfinite(alpha):
        raise DomainError(f"alpha must be positive and finite, got {alpha}")
    if alpha == 1.0:
        raise DomainError("alpha=1: request Shannon")
    return alpha


def _support(p) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64).ravel()
    if p.size == 0 or np.any(p < 0) or not np.all(np.isfinite(p)):
        raise DomainError("not a probability vector")
    if abs(float(p.sum()) - 1.0) > 1e-9:
        raise DomainError(f"probabilities sum to {float(p.sum())!r}, not 1")
    return p[p > 0]


def shannon(p) -> float:
    """``-sum p log p`` over the support of ``p``."""
    q = _support(p)
    return float(-np.sum(q * np.log(q)))


def power_sum(p, alpha) -> float:
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    q = _support(p)
    return float(np.sum(q**alpha))


def renyi(p, alpha) -> float:
    alpha = check_alpha(alpha)
    return math.log(power_sum(p, alpha)) / (1.0 - alpha)


def tsallis(p, alpha) -> float:
    alpha = check_alpha(alpha)
    return (power_sum(p, alpha) - 1.0) / (1.0 - alpha)


def _conditioning(pmf: JointPmf, direction) -> tuple[np.ndarray, np.ndarray]:
    """Joint cells as a (conditioning, other) table plus conditioning marginal."""
    direction = Direction(direction)
    axis = direction.conditioning_axis
    table = pmf.table if axis is Axis.X else pmf.table.T
    return table, marginal(pmf, axis)


def conditional_shannon(pmf: JointPmf, direction=Direction.Y_GIVEN_X) -> float:
    """``sum_{i,j} p_ij log(p_cond / p_ij)`` skipping empty cells."""
    table, m = _conditioning(pmf, direction)
    cond = np.broadcast_to(m[:, None], table.shape)
    live = table > 0
    return float(np.sum(table[live] * np.log(cond[live] / table[live])))


def _power_ratio(pmf: JointPmf, alpha: float, direction) -> float:
    _, m = _conditioning(pmf, direction)
    s_marg = power_sum(m, alpha)
    if s_marg <= 0:
        raise DomainError("conditioning power sum is zero")
    return power_sum(pmf.probs, alpha) / s_marg


def conditional_renyi(pmf: JointPmf, alpha, direction=Direction.Y_GIVEN_X) -> float:
    alpha = check_alpha(alpha)
    return math.log(_power_ratio(pmf, alpha, direction)) / (1.0 - alpha)


def conditional_tsallis(pmf: JointPmf, alpha, direction=Direction.Y_GIVEN_X) -> float:
    alpha = check_alpha(alpha)
    return (_power_ratio(pmf, alpha, direction) - 1.0) / (1.0 - alpha)


def entropy(pmf: JointPmf, family, alpha=None, direction=Direction.Y_GIVEN_X) -> EntropyValue:
    """Dispatch on family and direction, returning a tagged value."""
    family, direction = Family(family), Direction(direction)
    if family is not Family.SHANNON:
        alpha = check_alpha(alpha)
    else:
        alpha = None
    if direction.conditional:
        fn = {
            Family.SHANNON: lambda: conditional_shannon(pmf, direction),
            Family.RENYI: lambda: conditional_renyi(pmf, alpha, direction),
            Family.TSALLIS: lambda: conditional_tsallis(pmf, alpha, direction),
        }[family]
        value = fn()
    else:
        p = {
            Direction.JOINT: pmf.probs,
            Direction.MARGINAL_X: marginal(pmf, Axis.X),
            Direction.MARGINAL_Y: marginal(pmf, Axis.Y),
        }[direction]
        if family is Family.SHANNON:
            value = shannon(p)
        elif family is Family.RENYI:
            value = renyi(p, alpha)
        else:
            value = tsallis(p, alpha)
    return EntropyValue(value, family, alpha, direction)


@dataclass(frozen=True)
class IdentityReport:
    """Residuals of the algebraic identities linking joint, marginal and
    conditional entropies. All should be ~0 except ``monotonicity_slack``,
    which should be >= 0."""

    chain_shannon: float
    chain_renyi: float
    pseudo_additivity: float
    tsallis_renyi: float
    monotonicity_slack: float

    def max_residual(self) -> float:
        return max(abs(self.chain_shannon), abs(self.chain_renyi),
                   abs(self.pseudo_additivity), abs(self.tsallis_renyi))


def check_identities(pmf: JointPmf, alpha) -> IdentityReport:
    alpha = check_alpha(alpha)
    px, py = marginal(pmf, Axis.X), marginal(pmf, Axis.Y)
    h_yx = conditional_shannon(pmf, Direction.Y_GIVEN_X)
    h_xy = conditional_shannon(pmf, Direction.X_GIVEN_Y)
    r_yx = conditional_renyi(pmf, alpha, Direction.Y_GIVEN_X)
    t_yx = conditional_tsallis(pmf, alpha, Direction.Y_GIVEN_X)
    t_x, t_xy = tsallis(px, alpha), tsallis(pmf.probs, alpha)
    return IdentityReport(
        chain_shannon=h_yx - (shannon(pmf.probs) - shannon(px)),
        chain_renyi=r_yx - (renyi(pmf.probs, alpha) - renyi(px, alpha)),
        pseudo_additivity=t_xy - (t_x + t_yx + (1.0 - alpha) * t_x * t_yx),
        tsallis_renyi=t_yx - math.expm1((1.0 - alpha) * r_yx) / (1.0 - alpha),
        monotonicity_slack=shannon(px) - h_xy,
    )
