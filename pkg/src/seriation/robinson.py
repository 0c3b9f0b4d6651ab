"""The Robinson cone: construction, membership, and Frobenius projection.

A symmetric matrix is Robinson when every row is unimodal with its peak on the
diagonal. Two cones are supported: the full symmetric cone and the row
relaxation that drops the symmetry requirement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import pava_nondecreasing, project_rows_unimodal, unimodal_fixed_mode
from .errors import ProjectionError
from .perms import check_symmetric


@dataclass(frozen=True)
class ToeplitzSpec:
    """A nonincreasing profile theta in [0, A]^n defining a banded-decay matrix."""

    theta: np.ndarray
    A: float

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=float)
        object.__setattr__(self, "theta", t)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("theta must be a nonempty vector")
        if np.any(np.diff(t) > 0):
            raise ValueError("theta must be nonincreasing")
        if self.A <= 0:
            raise ValueError("A must be positive")
        if t[0] > self.A or t[-1] < 0:
            raise ValueError("theta values must lie in [0, A]")

    @property
    def n(self) -> int:
        return self.theta.size


@dataclass(frozen=True)
class RobinsonFlags:
    """Cone choice: full symmetric cone, or rows-only relaxation."""

    symmetric_cone: bool = True


def toeplitz(spec: ToeplitzSpec) -> np.ndarray:
    """T[i, j] = theta_|i-j|; Robinson because theta is nonincreasing."""
    idx = np.abs(np.subtract.outer(np.arange(spec.n), np.arange(spec.n)))
    return spec.theta[idx]


def is_robinson(M: np.ndarray, flags: RobinsonFlags = RobinsonFlags(), tol: float = 0.0) -> bool:
    """True iff every row rises to its diagonal entry and falls after it."""
    M = np.asarray(M, dtype=float)
    if flags.symmetric_cone:
        if np.any(np.abs(M - M.T) > tol):
            return False
    n = M.shape[0]
    for i in range(n):
        row = M[i]
        if np.any(np.diff(row[: i + 1]) < -tol):
            return False
        if np.any(np.diff(row[i:]) > tol):
            return False
    return True


def pava_isotonic(v, weights=None, direction: str = "nonincreasing") -> np.ndarray:
    """Weighted least-squares monotone fit by pool-adjacent-violators.

    Ties are pooled, so the fit is deterministic and preserves the weighted
    mean of the input.
    """
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        raise ValueError("empty input")
    if weights is None:
        weights = np.ones_like(v)
    w = np.asarray(weights, dtype=float)
    if w.shape != v.shape or np.any(w <= 0):
        raise ValueError("weights must be positive and match v")
    if direction == "nondecreasing":
        return pava_nondecreasing(v, w)
    if direction == "nonincreasing":
        return -pava_nondecreasing(-v, w)
    raise ValueError(f"unknown direction {direction!r}")


def project_unimodal_rows(M: np.ndarray) -> np.ndarray:
    """Projection onto the rows-only cone: each row fitted independently."""
    return project_rows_unimodal(np.ascontiguousarray(M, dtype=float))


def project_robinson(
    M: np.ndarray,
    flags: RobinsonFlags = RobinsonFlags(),
    tol: float = 1e-8,
    max_iter: int | None = None,
) -> np.ndarray:
    """Frobenius projection of M onto the chosen Robinson cone.

    The rows-only cone decomposes row by row into unimodal regression with the
    mode pinned to the diagonal (two isotonic fits spliced at the peak). The
    symmetric cone is the intersection of that cone with the symmetric
    subspace and is handled by Dykstra's alternating projections, stopped when
    successive iterates differ by less than tol in Frobenius norm.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = np.asarray(M, dtype=float)
    if not flags.symmetric_cone:
        return project_unimodal_rows(M)

    M = check_symmetric(M)
    n = M.shape[0]
    if max_iter is None:
        max_iter = 10 * n * n
    x = M.copy()
    p = np.zeros_like(M)
    q = np.zeros_like(M)
    residual = np.inf
    for it in range(max_iter):
        y = project_unimodal_rows(x + p)
        p = x + p - y
        z = y + q
        x_new = 0.5 * (z + z.T)
        q = z - x_new
        residual = float(np.linalg.norm(x_new - x))
        x = x_new
        if residual < tol:
            return x
    raise ProjectionError(
        f"Dykstra did not reach tol={tol!r} within {max_iter} iterations "
        f"(last Frobenius step {residual:.3e})",
        residual=residual,
        iterations=max_iter,
    )


__all__ = [
    "ToeplitzSpec",
    "RobinsonFlags",
    "toeplitz",
    "is_robinson",
    "pava_isotonic",
    "project_unimodal_rows",
    "project_robinson",
    "unimodal_fixed_mode",
]
