"""Reference algorithms: spectral ordering and exhaustive least squares.

The exhaustive estimators realize the information-theoretic benchmark at desk
scale (factorial search); the spectral method is the classical noiseless
baseline. Both are deliberately independent of the packing pipeline.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._kernels import jacobi_eigh
from .errors import DegenerateSpectrumError
from .perms import Permutation, check_symmetric, permute
from .robinson import ToeplitzSpec, pava_isotonic, toeplitz


@dataclass(frozen=True)
class LSConfig:
    """Exhaustive-search configuration.

    grid_step defaults to 1/n^2 when None (the analysis grid); the latent
    grids are deliberately coarse: the analysis grid step of n^-8 exists to
    make union bounds countable, not to be enumerated, so only the estimator's
    shape is reproduced, not its constant-level guarantee.
    """

    A: float
    max_n: int = 8
    grid_step: float | None = None
    snap_to_grid: bool = False
    v_step: float = 0.5
    phi_step: float = 0.5
    node_budget: int = 2_000_000

    def __post_init__(self):
        if self.A <= 0:
            raise ValueError("A must be positive")
        if not 2 <= self.max_n <= 9:
            raise ValueError("max_n must be between 2 and 9")
        if self.grid_step is not None and self.grid_step <= 0:
            raise ValueError("grid_step must be positive")
        if self.v_step <= 0 or self.phi_step <= 0:
            raise ValueError("grid steps must be positive")


def spectral_seriation(Y: np.ndarray, tol: float = 1e-10, max_sweeps: int = 100) -> Permutation:
    """Order by the eigenvector of the second-smallest Laplacian eigenvalue.

    Y is shifted to be nonnegative, L = D - Y is diagonalized by cyclic Jacobi
    rotations, and the ordering is the argsort of the Fiedler vector (defined
    up to reversal by the eigenvector sign). A near-zero second eigenvalue
    means a disconnected similarity graph; a near-tie between the second and
    third means the ordering is not identifiable; both raise.
    """
    Y = check_symmetric(Y, tol=0.0)
    n = Y.shape[0]
    if n < 3:
        raise ValueError("need n >= 3")
    shifted = Y - min(0.0, float(Y.min()))
    L = np.diag(shifted.sum(axis=1)) - shifted
    vals, vecs = jacobi_eigh(np.ascontiguousarray(L), tol, max_sweeps)
    idx = np.argsort(vals, kind="stable")
    vals = vals[idx]
    vecs = vecs[:, idx]
    scale = max(1.0, float(np.linalg.norm(L)))
    zero_tol = 1e-8 * scale
    if vals[1] <= zero_tol:
        raise DegenerateSpectrumError(
            f"similarity graph looks disconnected: second eigenvalue {vals[1]:.3e}")
    if vals[2] - vals[1] <= zero_tol:
        raise DegenerateSpectrumError(
            f"degenerate spectrum: eigenvalue gap {vals[2] - vals[1]:.3e}")
    fiedler = vecs[:, 1]
    order = np.argsort(fiedler, kind="stable")
    pi = np.empty(n, dtype=np.int64)
    pi[order] = np.arange(n)
    return Permutation(pi)


def _diagonal_means(Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = Z.shape[0]
    means = np.empty(n)
    weights = np.empty(n)
    for k in range(n):
        diag = np.diagonal(Z, offset=k)
        means[k] = diag.mean()
        weights[k] = float(n) if k == 0 else 2.0 * (n - k)
    return means, weights


def ls_toeplitz(Y: np.ndarray, cfg: LSConfig) -> tuple[Permutation, np.ndarray]:
    """Exhaustive least squares over orderings of a banded-decay fit.

    For each permutation the inner infimum is solved exactly by weighted
    nonincreasing regression of the off-diagonal means (weights n and 2(n-k)),
    clamped to [0, A] and optionally snapped to the analysis grid. Ties
    between permutations break lexicographically.
    """
    Y = check_symmetric(Y)
    n = Y.shape[0]
    if n > cfg.max_n:
        raise ValueError(f"n = {n} exceeds the exhaustive-search cap {cfg.max_n}")
    u = cfg.grid_step if cfg.grid_step is not None else 1.0 / (n * n)
    best = (math.inf, None, None)
    for p in itertools.permutations(range(n)):
        P = Permutation(np.asarray(p, dtype=np.int64))
        Z = permute(Y, P)
        means, weights = _diagonal_means(Z)
        theta = pava_isotonic(means, weights, "nonincreasing")
        theta = np.clip(theta, 0.0, cfg.A)
        if cfg.snap_to_grid:
            theta = np.clip(np.round(theta / u) * u, 0.0, cfg.A)
            theta = pava_isotonic(theta, weights, "nonincreasing")
        spec = ToeplitzSpec(theta=theta, A=cfg.A)
        obj = float(np.linalg.norm(Z - toeplitz(spec)) ** 2)
        if obj < best[0]:
            best = (obj, P, theta)
    return best[1], best[2]


def _nonincreasing_tuples(levels: np.ndarray, length: int):
    for combo in itertools.combinations_with_replacement(range(levels.size), length):
        yield levels[np.asarray(combo, dtype=np.int64)][::-1]


def ls_latent(Y: np.ndarray, cfg: LSConfig) -> tuple[Permutation, np.ndarray, np.ndarray]:
    """Exhaustive least squares over orderings, gridded latent positions, and
    gridded nonincreasing kernels. Guarded by a node budget."""
    Y = check_symmetric(Y)
    n = Y.shape[0]
    if n > min(cfg.max_n, 6):
        raise ValueError("latent exhaustive search is capped at n = 6")
    v_grid = np.arange(0.0, 1.0 + 1e-12, cfg.v_step)
    gap_count = v_grid.size
    phi_levels = np.arange(0.0, cfg.A + 1e-12, cfg.phi_step)

    n_v = math.comb(v_grid.size + n - 1, n)
    n_phi = math.comb(phi_levels.size + gap_count - 1, gap_count)
    total = math.factorial(n) * n_v * n_phi
    if total > cfg.node_budget:
        raise ValueError(f"grid size {total} exceeds the node budget {cfg.node_budget}")

    v_choices = [np.asarray(c, dtype=float)
                 for c in itertools.combinations_with_replacement(v_grid, n)]
    phi_choices = list(_nonincreasing_tuples(phi_levels, gap_count))

    best = (math.inf, None, None, None)
    for p in itertools.permutations(range(n)):
        P = Permutation(np.asarray(p, dtype=np.int64))
        Z = permute(Y, P)
        for V in v_choices:
            gap_idx = np.rint(np.abs(V[:, None] - V[None, :]) / cfg.v_step).astype(np.int64)
            for phi in phi_choices:
                R = phi[gap_idx]
                obj = float(np.linalg.norm(Z - R) ** 2)
                if obj < best[0]:
                    best = (obj, P, V, phi)
    return best[1], best[2], best[3]
