"""Joint pmfs of a pair (X, Y) and their flat view as a single variable Z.

Cell ``(i, j)`` of an ``r x s`` table lives at flat index ``k = s*(i-1) + j``
(1-based, X-major). Every other module addresses cells through
:func:`flatten_index` / :func:`unflatten_index` or the row-major layout of
:attr:`JointPmf.probs`, which is the same thing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

SUM_TOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class Axis(str, enum.Enum):
    X = "X"
    Y = "Y"


class Mode(str, enum.Enum):
    STRICT = "strict"
    EMPIRICAL = "empirical"


def flatten_index(i: int, j: int, s: int, r: int | None = None) -> int:
    """Map the pair ``(i, j)`` to its flat index ``s*(i-1) + j``.

    ``r`` is optional; when given, ``i`` is also checked against it.
    """
    if s < 1:
        raise DomainError(f"s must be positive, got {s}")
    if i < 1 or (r is not None and i > r):
        raise DomainError(f"row index i={i} out of range 1..{r if r is not None else 'r'}")
    if j < 1 or j > s:
        raise DomainError(f"column index j={j} out of range 1..{s}")
    return s * (i - 1) + j


def unflatten_index(k: int, s: int, r: int | None = None) -> tuple[int, int]:
    """Inverse of :func:`flatten_index`."""
    if s < 1:
        raise DomainError(f"s must be positive, got {s}")
    if k < 1 or (r is not None and k > r * s):
        raise DomainError(f"flat index k={k} out of range 1..{r * s if r is not None else 'rs'}")
    q = (k - 1) // s
    return 1 + q, k - s * q


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class JointPmf:
    """Validated ``r x s`` joint pmf stored flat in X-major order.

    Build instances with :func:`validate` (or :meth:`from_table`) rather than
    calling the constructor directly. Empirical pmfs built from samples also
    keep their integer ``counts`` so that marginals are computed from exact
    integer sums.
    """

    r: int
    s: int
    probs: np.ndarray
    mode: Mode = Mode.STRICT
    counts: np.ndarray | None = field(default=None, repr=False)

    @property
    def table(self) -> np.ndarray:
        return self.probs.reshape(self.r, self.s)

    def cell(self, i: int, j: int) -> float:
        return float(self.probs[flatten_index(i, j, self.s, self.r) - 1])

    def transpose(self) -> JointPmf:
        """The pmf of ``(Y, X)``; swaps the roles of rows and columns."""
        counts = None if self.counts is None else self.counts.reshape(self.r, self.s).T.ravel()
        return JointPmf(self.s, self.r, _frozen(self.table.T.ravel()), self.mode,
                        None if counts is None else _frozen_int(counts))

    @classmethod
    def from_table(cls, table, mode: Mode | str = Mode.STRICT) -> JointPmf:
        table = np.asarray(table, dtype=np.float64)
        if table.ndim != 2:
            raise DomainError("joint table must be two-dimensional")
        r, s = table.shape
        return validate(table.ravel(), r, s, mode)

    def to_dict(self) -> dict:
        return {"r": self.r, "s": self.s, "probs": [float(p) for p in self.probs]}

    def __eq__(self, other):
        if not isinstance(other, JointPmf):
            return NotImplemented
        return (self.r, self.s) == (other.r, other.s) and np.array_equal(self.probs, other.probs)

    __hash__ = None


def _frozen_int(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


def validate(probs, r: int, s: int, mode: Mode | str = Mode.STRICT) -> JointPmf:
    """Check ``probs`` and wrap it as a :class:`JointPmf`.

    Strict mode requires every cell (hence every marginal entry) to be
    positive; empirical mode allows zero cells.
    """
    mode = Mode(mode)
    if r <= 1:
        raise DomainError(f"r must exceed 1, got {r}")
    if s <= 1:
        raise DomainError(f"s must exceed 1, got {s}")
    p = np.asarray(probs, dtype=np.float64).ravel()
    if p.size != r * s:
        raise DomainError(f"expected {r * s} probabilities for a {r}x{s} table, got {p.size}")
    if not np.all(np.isfinite(p)):
        raise DomainError("probabilities must be finite")
    if np.any(p < 0):
        k = int(np.argmax(p < 0)) + 1
        raise DomainError(f"negative probability at flat index k={k}")
    total = float(p.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise DomainError(f"probabilities sum to {total!r}, not 1")
    if mode is Mode.STRICT and np.any(p == 0):
        k = int(np.argmax(p == 0)) + 1
        i, j = unflatten_index(k, s)
        raise DomainError(f"zero probability at cell ({i},{j}); strict mode requires all cells > 0")
    return JointPmf(r, s, _frozen(p), mode)


@dataclass(frozen=True, eq=False)
class MarginalPmf:
    axis: Axis
    probs: np.ndarray

    @property
    def size(self) -> int:
        return int(self.probs.size)


@dataclass(frozen=True, eq=False)
class ConditionalPmfTable:
    """Rows of conditional pmfs, one per outcome of ``given_axis``.

    Row ``i`` of a ``given_axis=X`` table is ``p(. | x_i)`` over Y. Rows whose
    conditioning mass is zero (empirical pmfs only) are NaN and flagged False
    in ``defined``.
    """

    given_axis: Axis
    rows: np.ndarray
    defined: np.ndarray


def marginals(pmf: JointPmf) -> tuple[MarginalPmf, MarginalPmf]:
    """X-marginal (row sums) and Y-marginal (column sums)."""
    if pmf.counts is not None:
        n = int(pmf.counts.sum())
        c = pmf.counts.reshape(pmf.r, pmf.s)
        px, py = c.sum(axis=1) / n, c.sum(axis=0) / n
    else:
        px, py = pmf.table.sum(axis=1), pmf.table.sum(axis=0)
    return MarginalPmf(Axis.X, _frozen(px)), MarginalPmf(Axis.Y, _frozen(py))


def marginal(pmf: JointPmf, axis: Axis | str) -> np.ndarray:
    mx, my = marginals(pmf)
    return mx.probs if Axis(axis) is Axis.X else my.probs


def conditionals(pmf: JointPmf, given_axis: Axis | str) -> ConditionalPmfTable:
    given_axis = Axis(given_axis)
    table = pmf.table if given_axis is Axis.X else pmf.table.T
    mass = marginal(pmf, given_axis)
    defined = mass > 0
    if not np.all(defined) and pmf.mode is Mode.STRICT:
        raise DomainError(f"zero conditioning mass on axis {given_axis.value}")
    rows = np.full(table.shape, np.nan)
    rows[defined] = table[defined] / mass[defined, None]
    rows.setflags(write=False)
    defined.setflags(write=False)
    return ConditionalPmfTable(given_axis, rows, defined)
