"""Seriation losses: cone-projection loss and the model-based oracle surrogates.

The projection loss asks how far the reordered signal is from the Robinson
cone; the oracle surrogates compare against the model's canonical ordered
matrix and upper-bound it. Every loss here is invariant under reversing the
candidate ordering.
"""

from __future__ import annotations

import numpy as np

from .perms import Permutation, permute
from .robinson import RobinsonFlags, ToeplitzSpec, project_robinson, toeplitz


def _canonical_orientation(Z: np.ndarray) -> np.ndarray:
    """Pick the lexicographically smaller of Z and its reversal.

    Used so that reversal-invariant quantities are computed from literally the
    same array for Pi and for its reversal, making the invariance exact in
    floating point, not just in exact arithmetic.
    """
    rev = Z[::-1, ::-1]
    a = Z.ravel()
    b = rev.ravel()
    diff = np.flatnonzero(a != b)
    if diff.size == 0 or a[diff[0]] < b[diff[0]]:
        return Z
    return np.ascontiguousarray(rev)


def l2_loss(
    Pi: Permutation,
    X: np.ndarray,
    flags: RobinsonFlags = RobinsonFlags(),
    tol: float = 1e-8,
    max_iter: int | None = None,
) -> float:
    """Frobenius distance from the reordered signal to the Robinson cone."""
    Z = _canonical_orientation(permute(X, Pi))
    R = project_robinson(Z, flags, tol=tol, max_iter=max_iter)
    return float(np.linalg.norm(Z - R))


def oracle_loss_toeplitz(Pi: Permutation, X: np.ndarray, spec: ToeplitzSpec) -> float:
    """|| Pi . X - T(theta) ||_F, the evaluation surrogate for the banded model.

    T(theta) is reversal-invariant, so the loss is too; evaluating from the
    canonical orientation of Pi . X makes that invariance float-exact.
    """
    T = toeplitz(spec)
    if X.shape != T.shape:
        raise ValueError("size mismatch between X and the model matrix")
    Z = _canonical_orientation(permute(X, Pi))
    return float(np.linalg.norm(Z - T))


def oracle_loss_toeplitz_sup(Pi: Permutation, X: np.ndarray, spec: ToeplitzSpec) -> float:
    """Entrywise-max version of the oracle surrogate (sup-norm seriation)."""
    T = toeplitz(spec)
    if X.shape != T.shape:
        raise ValueError("size mismatch between X and the model matrix")
    Z = permute(X, Pi)
    direct = float(np.max(np.abs(Z - T)))
    rev = float(np.max(np.abs(Z[::-1, ::-1] - T)))
    return min(direct, rev)


def oracle_loss_latent(Pi: Permutation, X: np.ndarray, V: np.ndarray) -> float:
    """min over orientations of || Pi . X - M ||_F with M = X sorted by V."""
    V = np.asarray(V, dtype=float)
    if V.ndim != 1 or V.size != X.shape[0]:
        raise ValueError("V must be one latent position per row of X")
    order = np.argsort(V, kind="stable")
    M = X[np.ix_(order, order)]
    Z = permute(X, Pi)
    direct = float(np.linalg.norm(Z - M))
    reversed_ = float(np.linalg.norm(Z[::-1, ::-1] - M))
    return min(direct, reversed_)
