"""Directional differentials of expression functions.

Two independent routes compute the n-th order mixed differential
``d^n f(x; h1, ..., hn)``:

* :func:`gateaux_md` evaluates ``f(x + sum_i ei * hi)`` over the multi-dual
  algebra and reads the coefficient of ``e1 * ... * en`` (exact up to
  rounding);
* :func:`gateaux_fd` nests central difference quotients, innermost
  direction first.

For continuously differentiable maps between finite-dimensional spaces the
directional (Gateaux) differential and the chain differential coincide, so
the same value serves both.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import MultiDual
from .errors import ContractError
from .functions import evaluate_real
from .partitions import PARTITION_CAP, check_cap

#: Highest order accepted by the finite-difference oracle.
FD_MAX_ORDER = 4


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """Ordered directions; direction ``i`` carries tag ``i`` (1-based)."""

    dirs: np.ndarray  # shape (n, m)

    def __post_init__(self):
        arr = np.array(self.dirs, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise ContractError(f"directions must form an (n, m) array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ContractError("directions must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "dirs", arr)

    @classmethod
    def coerce(cls, dirs) -> "DirectionSet":
        return dirs if isinstance(dirs, DirectionSet) else cls(np.asarray(dirs, dtype=float))

    @property
    def n(self) -> int:
        return self.dirs.shape[0]

    @property
    def dim(self) -> int:
        return self.dirs.shape[1]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i):
        return self.dirs[i]

    def select(self, tags: Sequence[int]) -> "DirectionSet":
        """Sub-list of directions for 1-based tags, in the given order."""
        return DirectionSet(self.dirs[[t - 1 for t in tags]].reshape(len(tags), self.dim))

    def permuted(self, order: Sequence[int]) -> "DirectionSet":
        return DirectionSet(self.dirs[list(order)])


def as_point(x, dim: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1 or arr.shape[0] != dim:
        raise ContractError(f"point has dimension {arr.shape}, expected ({dim},)")
    if not np.all(np.isfinite(arr)):
        raise ContractError("point must be finite")
    return arr


def _check_dirs(fun, x, dirs) -> tuple[np.ndarray, DirectionSet]:
    x = as_point(x, fun.input_dim)
    dirs = DirectionSet.coerce(dirs)
    if dirs.n < 1:
        raise ContractError("at least one direction is required")
    if dirs.dim != fun.input_dim:
        raise ContractError(
            f"directions have dimension {dirs.dim}, function expects {fun.input_dim}"
        )
    return x, dirs


def seed_inputs(x: np.ndarray, dirs: DirectionSet) -> list[MultiDual]:
    """Inputs ``x_j + sum_i ei * (h_i)_j`` over the width-n algebra."""
    return [MultiDual.variable(x[j], dirs.dirs[:, j]) for j in range(x.shape[0])]


def gateaux_md(fun, x, dirs) -> np.ndarray:
    """``d^n fun(x; dirs)`` as the top coefficient of a multi-dual evaluation.

    ``fun`` is any callable accepting a list of algebra elements and exposing
    ``input_dim`` (an :class:`ExprFunction` or a composition).
    """
    x, dirs = _check_dirs(fun, x, dirs)
    check_cap("order", dirs.n)
    top = (1 << dirs.n) - 1
    return np.array([v.coefficient(top)[0] for v in fun(seed_inputs(x, dirs))])


def fd_step(x: np.ndarray, order: int) -> float:
    """Central-difference step balancing truncation and rounding at ``order``."""
    return float(np.finfo(float).eps ** (1.0 / (order + 2)) * max(1.0, np.max(np.abs(x))))


def gateaux_fd(fun, x, dirs) -> np.ndarray:
    """Nested central differences, one nesting level per direction."""
    x, dirs = _check_dirs(fun, x, dirs)
    if dirs.n > FD_MAX_ORDER:
        raise ContractError(
            f"finite differences support order <= {FD_MAX_ORDER}, got {dirs.n}"
        )
    h = fd_step(x, dirs.n)

    def nested(point, k):
        if k == 0:
            return evaluate_real(fun, point)
        eta = dirs.dirs[k - 1]
        return (nested(point + h * eta, k - 1) - nested(point - h * eta, k - 1)) / (2 * h)

    return nested(x, dirs.n)


def _slot_offsets(slot_dims: Sequence[int], total: int) -> list[int]:
    if any(d < 1 for d in slot_dims):
        raise ContractError(f"slot dimensions must be positive, got {list(slot_dims)}")
    if sum(slot_dims) != total:
        raise ContractError(
            f"slot dimensions {list(slot_dims)} do not add up to input_dim {total}"
        )
    return list(np.cumsum([0, *slot_dims]))


def embed_slot(slot_dims: Sequence[int], i: int, eta, total: int) -> np.ndarray:
    """Full-length direction equal to ``eta`` on slot ``i`` (1-based), 0 elsewhere."""
    offsets = _slot_offsets(slot_dims, total)
    if not 1 <= i <= len(slot_dims):
        raise ContractError(f"slot index {i} outside 1..{len(slot_dims)}")
    eta = np.atleast_1d(np.asarray(eta, dtype=float))
    if eta.shape != (slot_dims[i - 1],):
        raise ContractError(
            f"slot {i} direction has shape {eta.shape}, expected ({slot_dims[i - 1]},)"
        )
    full = np.zeros(total)
    full[offsets[i - 1]:offsets[i]] = eta
    return full


def partial_differential(fun, x, slot_dims: Sequence[int], i: int, eta) -> np.ndarray:
    """First differential with respect to slot ``i`` only."""
    full = embed_slot(slot_dims, i, eta, fun.input_dim)
    return gateaux_md(fun, x, [full])


@dataclass(frozen=True)
class TotalDifferentialReport:
    lhs: np.ndarray
    rhs: np.ndarray
    partials: tuple[np.ndarray, ...]
    discrepancy: float


def total_differential_check(fun, x, slot_dims: Sequence[int], etas) -> TotalDifferentialReport:
    """Compare the differential along the joined direction with the sum of partials."""
    if len(etas) != len(slot_dims):
        raise ContractError(f"got {len(etas)} slot directions for {len(slot_dims)} slots")
    joined = sum(
        (embed_slot(slot_dims, i, eta, fun.input_dim) for i, eta in enumerate(etas, start=1)),
        np.zeros(fun.input_dim),
    )
    lhs = gateaux_md(fun, x, [joined])
    partials = tuple(
        partial_differential(fun, x, slot_dims, i, eta) for i, eta in enumerate(etas, start=1)
    )
    rhs = sum(partials, np.zeros_like(lhs))
    return TotalDifferentialReport(lhs, rhs, partials, float(np.max(np.abs(lhs - rhs))))


def relative_discrepancy(value, reference) -> float:
    """``max_j |value_j - reference_j| / (1 + |reference_j|)``."""
    value = np.asarray(value, dtype=float)
    reference = np.asarray(reference, dtype=float)
    return float(np.max(np.abs(value - reference) / (1.0 + np.abs(reference))))

