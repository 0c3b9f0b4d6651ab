"""Generators for the two statistical models, noise, and masking.

Instances are reproducible: all randomness flows through a counter-based
(Philox) generator keyed by the instance seed, and every draw is a whole-array
operation in a fixed order, so results do not depend on traversal order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .perms import Permutation, permute
from .robinson import ToeplitzSpec, toeplitz

LATENT_KERNELS = ("box", "triangle", "gaussian", "table")


@dataclass(frozen=True)
class LatentSpec:
    """Symmetric unimodal kernel on R with values in [0, A], plus the size n.

    Named families:
      box      phi(x) = A * 1{|x| <= width}
      triangle phi(x) = A * max(0, 1 - |x|/width)
      gaussian phi(x) = A * exp(-(x/width)^2 / 2)
      table    piecewise-constant: values[k] on [breaks[k], breaks[k+1]),
               nonincreasing in |x|
    """

    kind: str
    A: float
    n: int
    width: float = 0.1
    breaks: np.ndarray | None = None
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in LATENT_KERNELS:
            raise ValueError(f"unknown kernel {self.kind!r}")
        if self.A <= 0 or self.n < 2:
            raise ValueError("need A > 0 and n >= 2")
        if self.kind == "table":
            b = np.asarray(self.breaks, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if b.ndim != 1 or v.ndim != 1 or v.size != b.size - 1:
                raise ValueError("table kernel needs len(values) == len(breaks) - 1")
            if np.any(np.diff(b) <= 0) or b[0] != 0:
                raise ValueError("breaks must start at 0 and increase")
            if np.any(np.diff(v) > 0) or np.any(v < 0) or np.any(v > self.A):
                raise ValueError("table values must be nonincreasing in [0, A]")
            object.__setattr__(self, "breaks", b)
            object.__setattr__(self, "values", v)
        elif self.width <= 0:
            raise ValueError("width must be positive")

    def phi(self) -> Callable[[np.ndarray], np.ndarray]:
        """The kernel as a vectorized function of the signed gap."""
        A, w = self.A, self.width
        if self.kind == "box":
            return lambda x: A * (np.abs(x) <= w).astype(float)
        if self.kind == "triangle":
            return lambda x: A * np.maximum(0.0, 1.0 - np.abs(x) / w)
        if self.kind == "gaussian":
            return lambda x: A * np.exp(-0.5 * (x / w) ** 2)
        breaks, values = self.breaks, self.values

        def table(x):
            idx = np.searchsorted(breaks, np.abs(x), side="right") - 1
            out = np.where(idx < values.size, values[np.minimum(idx, values.size - 1)], 0.0)
            return np.asarray(out, dtype=float)

        return table


@dataclass(frozen=True)
class NoiseSpec:
    """Additive noise: gaussian(sigma), bernoulli (entries resampled), or none.

    Gaussian sigma defaults to 1 (subgaussian scale 1). ``symmetric`` mirrors
    the upper triangle so that Y stays symmetric; the asymmetric variant draws
    every entry independently.
    """

    kind: str = "gaussian"
    sigma: float = 1.0
    symmetric: bool = True

    def __post_init__(self):
        if self.kind not in ("gaussian", "bernoulli", "none"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.kind == "gaussian" and self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


@dataclass(frozen=True)
class ModelInstance:
    """A generated problem: signal X, observation Y, and the hidden ordering.

    ``pi_star`` satisfies permute(X, pi_star) == ordered model matrix exactly
    (T(theta) in the banded model; X sorted by V in the latent model).
    """

    X: np.ndarray
    Y: np.ndarray
    pi_star: Permutation
    spec: ToeplitzSpec | LatentSpec
    seed: int
    model: str
    V: np.ndarray | None = None
    mask: np.ndarray | None = None
    lam: float = 1.0

    @property
    def n(self) -> int:
        return self.X.shape[0]


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def _symmetric_noise(n: int, noise: NoiseSpec, rng: np.random.Generator,
                     X: np.ndarray) -> np.ndarray:
    if noise.kind == "none":
        return np.zeros((n, n))
    if noise.kind == "gaussian":
        if noise.symmetric:
            draws = rng.normal(0.0, noise.sigma, size=(n, n))
            upper = np.triu(draws)
            return upper + np.triu(upper, 1).T
        return rng.normal(0.0, noise.sigma, size=(n, n))
    # bernoulli: Y_ij ~ Ber(X_ij), so E = Y - X
    if np.any(X < 0) or np.any(X > 1):
        raise ValueError("bernoulli noise requires entries of X in [0, 1]")
    u = rng.random(size=(n, n))
    if noise.symmetric:
        u = np.triu(u) + np.triu(u, 1).T
    return (u < X).astype(float) - X


def gen_toeplitz_instance(
    spec: ToeplitzSpec,
    pi: Permutation | str = "random",
    noise: NoiseSpec = NoiseSpec(),
    seed: int = 0,
) -> ModelInstance:
    """Draw Y = X + E with X a hidden-order banded-decay matrix.

    ``pi`` may be a Permutation, "random", or "identity". Deterministic given
    the seed (the permutation consumes the first draw).
    """
    rng = _rng(seed)
    T = toeplitz(spec)
    n = spec.n
    if isinstance(pi, str):
        if pi == "random":
            pi_star = Permutation.random(n, rng)
        elif pi == "identity":
            pi_star = Permutation.identity(n)
        else:
            raise ValueError(f"unknown pi choice {pi!r}")
    else:
        pi_star = pi
        if pi_star.n != n:
            raise ValueError("permutation size mismatch")
    # X[a, b] = T[pi(a), pi(b)] makes permute(X, pi_star) == T exactly
    X = T[np.ix_(pi_star.map, pi_star.map)]
    E = _symmetric_noise(n, noise, rng, X)
    return ModelInstance(X=X, Y=X + E, pi_star=pi_star, spec=spec, seed=seed,
                         model="toeplitz")


def gen_latent_instance(
    spec: LatentSpec,
    noise: NoiseSpec = NoiseSpec(),
    seed: int = 0,
    V: np.ndarray | None = None,
) -> ModelInstance:
    """Draw Y = X + E with X[i, j] = phi(V_i - V_j), V uniform unless given.

    pi_star maps each index to the rank of its latent position (stable in the
    original index on ties), so permute(X, pi_star) is ordered by V.
    """
    rng = _rng(seed)
    n = spec.n
    if V is None:
        V = rng.random(n)
    else:
        V = np.asarray(V, dtype=float)
        if V.shape != (n,):
            raise ValueError("V must have length n")
    phi = spec.phi()
    X = phi(np.subtract.outer(V, V))
    order = np.argsort(V, kind="stable")
    rank = np.empty(n, dtype=np.int64)
    rank[order] = np.arange(n)
    pi_star = Permutation(rank)
    E = _symmetric_noise(n, noise, rng, X)
    return ModelInstance(X=X, Y=X + E, pi_star=pi_star, spec=spec, seed=seed,
                         model="latent", V=V)


def apply_mask(inst: ModelInstance, lam: float, seed: int) -> ModelInstance:
    """Bernoulli(lam) symmetric observation mask; Y is replaced by B * Y."""
    if not 0 < lam <= 1:
        raise ValueError("lambda must lie in (0, 1]")
    rng = _rng(seed)
    n = inst.n
    u = rng.random(size=(n, n))
    u = np.triu(u) + np.triu(u, 1).T
    B = (u < lam).astype(float)
    return replace(inst, Y=B * inst.Y, mask=B, lam=lam)


def estimate_A(Y: np.ndarray) -> float:
    """Data-driven upper bound for the entry bound: max Y + sqrt(8 log n)."""
    Y = np.asarray(Y, dtype=float)
    n = Y.shape[0]
    if n < 2:
        raise ValueError("need n >= 2")
    return float(Y.max() + math.sqrt(8.0 * math.log(n)))
