"""Plug-in estimators of pairwise row distances from a noisy observation.

The observed inner products <Y_i, Y_j> are unbiased for <X_i, X_j>; the
squared row norms are not, so each ||X_i||^2 is replaced by the largest inner
product against a neighborhood of rows with similar row sums. Row sums and
inner products keep every coordinate, diagonal included (the convention all
estimators here document and tests pin down).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import pairwise_supnorm
from .models import LatentSpec
from .perms import check_symmetric

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimatorConfig:
    """Constants behind the estimator thresholds.

    A is the entry bound (estimate it with models.estimate_A when unknown).
    c_nbhd scales the row-sum neighborhood threshold, c_eps the distance
    accuracy parameter handed to the ordering stage, kappa the tail exponent.
    exclude_diag is reserved: the current estimators keep diagonal entries in
    row sums and inner products, as their contracts state.
    """

    A: float
    c_nbhd: float = 2.0
    c_eps: float = 1.0
    kappa: float = 1.0
    exclude_diag: bool = True

    def __post_init__(self):
        if self.A <= 0 or self.c_nbhd <= 0 or self.c_eps <= 0 or self.kappa <= 0:
            raise ValueError("estimator constants must be positive")


def check_distance_table(d: np.ndarray) -> np.ndarray:
    """Validate symmetry, nonnegativity, and a zero diagonal."""
    d = check_symmetric(d)
    if np.any(d < 0) or np.any(np.diag(d) != 0):
        raise ValueError("distance table must be nonnegative with zero diagonal")
    return d


def row_sums(Y: np.ndarray) -> np.ndarray:
    """S_i = sum_j Y[i, j], diagonal included."""
    return np.asarray(Y, dtype=float).sum(axis=1)


def neighborhood_threshold(cfg: EstimatorConfig, n: int, variant: str) -> float:
    base = cfg.c_nbhd * math.sqrt(cfg.kappa * n * math.log(n))
    if variant == "toeplitz":
        return 2.0 * cfg.A + 2.0 * base
    if variant == "latent":
        return 2.0 * cfg.A * base
    raise ValueError(f"unknown neighborhood variant {variant!r}")


def neighborhoods(Y: np.ndarray, cfg: EstimatorConfig, variant: str = "toeplitz") -> np.ndarray:
    """Boolean mask: N[i, j] true when j is in the row-sum neighborhood of i.

    Empty neighborhoods (possible on off-model data) are reported and fall
    back to the single index with the nearest row sum.
    """
    Y = np.asarray(Y, dtype=float)
    n = Y.shape[0]
    if n < 2:
        raise ValueError("need n >= 2")
    S = row_sums(Y)
    gap = np.abs(S[:, None] - S[None, :])
    mask = gap <= neighborhood_threshold(cfg, n, variant)
    np.fill_diagonal(mask, False)
    empty = ~mask.any(axis=1)
    if np.any(empty):
        logger.warning("empty row-sum neighborhoods for %d rows; falling back "
                       "to nearest row sum", int(empty.sum()))
        np.fill_diagonal(gap, np.inf)
        nearest = np.argmin(gap, axis=1)
        for i in np.flatnonzero(empty):
            mask[i, nearest[i]] = True
    return mask


def norm_estimates(Y: np.ndarray, nbhd: np.ndarray, cfg: EstimatorConfig) -> np.ndarray:
    """U_i = max over the neighborhood of the plain inner product <Y_i, Y_j>."""
    Y = np.asarray(Y, dtype=float)
    G = _gram(Y)
    if not nbhd.any(axis=1).all():
        raise ValueError("every row needs a nonempty neighborhood")
    return np.where(nbhd, G, -np.inf).max(axis=1)


def _gram(Y: np.ndarray) -> np.ndarray:
    G = Y @ Y.T
    return 0.5 * (G + G.T)


def _assemble_table(U: np.ndarray, G: np.ndarray, inv_lam: float) -> np.ndarray:
    """sqrt of clamped (U_i + U_j)/lam - 2 <Y_i, Y_j>/lam^2, zero diagonal."""
    d2 = (U[:, None] * inv_lam + U[None, :] * inv_lam
          - (2.0 * inv_lam * inv_lam) * G)
    d = np.sqrt(np.maximum(d2, 0.0))
    np.fill_diagonal(d, 0.0)
    return d


def dhat_toeplitz(Y: np.ndarray, cfg: EstimatorConfig) -> np.ndarray:
    """Distance table for the banded-decay model (additive threshold)."""
    Y = np.asarray(Y, dtype=float)
    nbhd = neighborhoods(Y, cfg, "toeplitz")
    G = _gram(Y)
    U = np.where(nbhd, G, -np.inf).max(axis=1)
    return _assemble_table(U, G, 1.0)


def dhat_latent(Y: np.ndarray, cfg: EstimatorConfig) -> np.ndarray:
    """Distance table for the latent-position model (multiplicative threshold)."""
    Y = np.asarray(Y, dtype=float)
    nbhd = neighborhoods(Y, cfg, "latent")
    G = _gram(Y)
    U = np.where(nbhd, G, -np.inf).max(axis=1)
    return _assemble_table(U, G, 1.0)


def dhat_missing(Ymasked: np.ndarray, B: np.ndarray, cfg: EstimatorConfig) -> np.ndarray:
    """Debiased table under Bernoulli masking; identical to dhat_toeplitz at lam=1.

    lam is estimated as the observed fraction of entries; the estimator
    refuses once lam falls below sqrt(log n)/n, outside the regime where
    masked seriation is consistent.
    """
    Ymasked = np.asarray(Ymasked, dtype=float)
    B = np.asarray(B, dtype=float)
    if B.shape != Ymasked.shape:
        raise ValueError("mask shape mismatch")
    n = Ymasked.shape[0]
    lam_hat = float(B.mean())
    if lam_hat < math.sqrt(math.log(n)) / n:
        raise ValueError(
            f"observed fraction {lam_hat:.4g} is below sqrt(log n)/n = "
            f"{math.sqrt(math.log(n)) / n:.4g}; masked seriation is only "
            "consistent above that density")
    nbhd = neighborhoods(Ymasked, cfg, "toeplitz")
    G = _gram(Ymasked)
    U = np.where(nbhd, G, -np.inf).max(axis=1)
    return _assemble_table(U, G, 1.0 / lam_hat)


def dhat_supnorm(Y: np.ndarray) -> np.ndarray:
    """Entrywise-max distances ||Y_i - Y_j||_inf (adversarial-noise estimator)."""
    return pairwise_supnorm(np.ascontiguousarray(Y, dtype=float))


def pairwise_row_distances(Y: np.ndarray) -> np.ndarray:
    """Plain Euclidean distances between rows (the epsilon -> 0 estimator).

    On a noiseless observation this is exactly the row distance of the signal.
    """
    Y = np.asarray(Y, dtype=float)
    G = _gram(Y)
    sq = np.diag(G)
    d2 = sq[:, None] + sq[None, :] - 2.0 * G
    d = np.sqrt(np.maximum(d2, 0.0))
    np.fill_diagonal(d, 0.0)
    return d


def latent_target_distances(V: np.ndarray, spec: LatentSpec, quad_points: int = 20001) -> np.ndarray:
    """Target latent distances d(i,j)^2 = n * integral (phi_{V_i} - phi_{V_j})^2.

    Box kernels use the exact interval-overlap formula; other kernels fall
    back to a dense trapezoid quadrature (oracle-grade at small n).
    """
    V = np.asarray(V, dtype=float)
    n = V.size
    if spec.kind == "box":
        w, A = spec.width, spec.A
        lo = np.clip(V - w, 0.0, 1.0)
        hi = np.clip(V + w, 0.0, 1.0)
        length = hi - lo
        inter = np.clip(np.minimum.outer(hi, hi) - np.maximum.outer(lo, lo), 0.0, None)
        d2 = A * A * (length[:, None] + length[None, :] - 2.0 * inter)
    else:
        phi = spec.phi()
        grid = np.linspace(0.0, 1.0, quad_points)
        vals = phi(grid[None, :] - V[:, None])
        diff2 = (vals[:, None, :] - vals[None, :, :]) ** 2
        d2 = np.trapezoid(diff2, grid, axis=2)
    d = np.sqrt(np.maximum(n * d2, 0.0))
    np.fill_diagonal(d, 0.0)
    return 0.5 * (d + d.T)
