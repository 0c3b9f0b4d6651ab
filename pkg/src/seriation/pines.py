"""Packing-based seriation (the PINES procedure).

Pipeline: greedily pack the index set at radius rho1, split each center's
surroundings into connected components of the rho3-neighborhood graph after
removing a rho2-ball, walk the packing from an extremal center by matching
components against the already-ordered prefix, then expand cells in packing
order (members in ascending index, an arbitrary choice the guarantees allow).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import constants
from ._kernels import center_component_labels, greedy_packing
from .distances import (EstimatorConfig, check_distance_table, dhat_latent,
                        dhat_missing, dhat_supnorm, dhat_toeplitz)
from .errors import SeriationError
from .perms import Permutation

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class PinesParams:
    """Connectivity radii, either explicit or derived from (alpha, delta, eps)."""

    rho1: float
    rho2: float
    rho3: float
    alpha: float | None = None
    delta: float | None = None
    epsilon: float | None = None

    def __post_init__(self):
        if min(self.rho1, self.rho2, self.rho3) < 0:
            raise ValueError("radii must be nonnegative")

    @property
    def derived(self) -> bool:
        return self.alpha is not None

    def entrywise_bound(self) -> float:
        """The per-index guarantee (2 alpha + 1) rho1 + 2 alpha epsilon."""
        if not self.derived:
            raise ValueError("bound is defined for derived parameters only")
        return (2.0 * self.alpha + 1.0) * self.rho1 + 2.0 * self.alpha * self.epsilon


def default_params(alpha: float, delta: float, epsilon: float) -> PinesParams:
    """Radii from the generic guarantee: rho3 = delta + eps,
    rho2 = alpha delta + 2(1+alpha) eps, rho1 = alpha^2 delta + (2 alpha^2 + 3 alpha + 2) eps.
    """
    if alpha < 1:
        raise ValueError("alpha must be at least 1")
    if delta < 0 or epsilon < 0:
        raise ValueError("delta and epsilon must be nonnegative")
    rho3 = delta + epsilon
    rho2 = alpha * delta + 2.0 * (1.0 + alpha) * epsilon
    rho1 = alpha * alpha * delta + (2.0 * alpha * alpha + 3.0 * alpha + 2.0) * epsilon
    return PinesParams(rho1, rho2, rho3, alpha=alpha, delta=delta, epsilon=epsilon)


def _mst_max_edge(d: np.ndarray) -> float:
    """Largest edge of a minimum spanning tree of the distance table (Prim)."""
    n = d.shape[0]
    best = d[0].copy()
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    max_edge = 0.0
    for _ in range(n - 1):
        best[in_tree] = np.inf
        j = int(np.argmin(best))
        max_edge = max(max_edge, float(best[j]))
        in_tree[j] = True
        np.minimum(best, d[j], out=best)
    return max_edge


def exact_distance_params(d: np.ndarray) -> PinesParams:
    """Radii for trusted (epsilon -> 0) distances.

    Every point becomes its own packing cell (rho1 = rho2 below the smallest
    positive distance) and rho3 sits just above the connectivity radius (the
    largest minimum-spanning-tree edge, i.e. the largest adjacent gap on
    line-like data). Exact recovery follows whenever one-step gaps stay below
    the spanning separation, which holds on separated instances.
    """
    d = np.asarray(d, dtype=float)
    positive = d[d > 0]
    if positive.size == 0:
        return PinesParams(0.0, 0.0, 0.0)
    ball = constants.EXACT_BALL_FRACTION * float(positive.min())
    edge = constants.EXACT_EDGE_MARGIN * _mst_max_edge(d)
    return PinesParams(ball, ball, edge)


@dataclass(frozen=True)
class PackingResult:
    """Ordered centers plus the cell partition they induce."""

    centers: np.ndarray
    cells: list[np.ndarray]

    def __post_init__(self):
        if len(self.cells) != self.centers.size:
            raise ValueError("one cell per center required")


@dataclass(frozen=True)
class SeriationOutput:
    pi_hat: Permutation
    packing_order: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def maximal_packing(d: np.ndarray, rho1: float) -> PackingResult:
    """Greedy maximal packing, lowest uncovered index first (deterministic)."""
    d = check_distance_table(d)
    centers, n_centers, cell_id = greedy_packing(d, float(rho1))
    cells = [np.flatnonzero(cell_id == c) for c in range(n_centers)]
    return PackingResult(centers=np.asarray(centers, dtype=np.int64), cells=cells)


def split_components(
    d: np.ndarray,
    center: int,
    rho2: float,
    rho3: float,
    P: np.ndarray,
) -> tuple[list[np.ndarray], int]:
    """Components of the punctured neighborhood graph, traced on the packing.

    Vertices are the points farther than rho2 from the center; edges join
    vertex pairs within rho3. Returns (parts, count) where parts partitions
    the centers of P minus {center} that appear in the graph, and count is
    len(parts). Centers swallowed by the rho2-ball are absent from every part
    (they violate the packing geometry and surface later as ordering
    failures). More than two parts is a structured failure.
    """
    d = np.asarray(d, dtype=float)
    _, labels = center_component_labels(d, int(center), float(rho2), float(rho3))
    others = P[P != center]
    lab = labels[others]
    parts: list[np.ndarray] = []
    for root in np.unique(lab[lab >= 0]):
        parts.append(others[lab == root])
    if len(parts) > 2:
        raise SeriationError(
            "too_many_components",
            f"{len(parts)} components of the packing around center {center}",
            diagnostics={"center": int(center),
                         "component_sizes": [int(p.size) for p in parts]},
        )
    return parts, len(parts)


def order_packing(d: np.ndarray, pk: PackingResult, rho2: float, rho3: float) -> np.ndarray:
    """Walk the packing from an extremal center, matching components to the
    ordered prefix. Any of: no extremal start, no continuation, or an
    ambiguous continuation is a structured failure (silent misordering would
    be worse than a diagnosable error).
    """
    P = pk.centers
    m = P.size
    if m == 1:
        return P.copy()

    parts_by_center: dict[int, list[np.ndarray]] = {}
    counts: dict[int, int] = {}
    for c in P:
        parts, count = split_components(d, int(c), rho2, rho3, P)
        parts_by_center[int(c)] = parts
        counts[int(c)] = count

    start = -1
    for c in P:
        if counts[int(c)] <= 1:
            start = int(c)
            break
    if start < 0:
        raise SeriationError("no_extremal",
                             "no center has a single-component surrounding",
                             diagnostics={"component_counts": counts})

    # fingerprints (size, label sum) make prefix-vs-part comparison cheap
    part_keys = {
        c: [(p.size, int(p.sum())) for p in parts]
        for c, parts in parts_by_center.items()
    }
    placed = np.zeros(d.shape[0], dtype=bool)
    placed[start] = True
    order = [start]
    prefix_size = 1
    prefix_sum = start
    while len(order) < m:
        key = (prefix_size, prefix_sum)
        candidates = []
        for c in P:
            c = int(c)
            if placed[c]:
                continue
            for p, k in zip(parts_by_center[c], part_keys[c]):
                if k == key and bool(placed[p].all()):
                    candidates.append(c)
                    break
        if not candidates:
            raise SeriationError(
                "no_continuation",
                f"no center continues the ordered prefix of size {prefix_size}",
                diagnostics={"ordered": list(order),
                             "component_counts": counts})
        if len(candidates) > 1:
            raise SeriationError(
                "ambiguous_continuation",
                f"{len(candidates)} centers continue the ordered prefix",
                diagnostics={"ordered": list(order), "candidates": candidates})
        nxt = candidates[0]
        order.append(nxt)
        placed[nxt] = True
        prefix_size += 1
        prefix_sum += nxt
    return np.asarray(order, dtype=np.int64)


def pines(d: np.ndarray, params: PinesParams) -> SeriationOutput:
    """Full pipeline: pack, order the packing, expand cells.

    pi_hat maps each index to its recovered position, so permuting the
    observation by pi_hat realizes the recovered ordering.
    """
    d = check_distance_table(d)
    pk = maximal_packing(d, params.rho1)
    order = order_packing(d, pk, params.rho2, params.rho3)
    cell_of = {int(c): cell for c, cell in zip(pk.centers, pk.cells)}
    pi = np.empty(d.shape[0], dtype=np.int64)
    pos = 0
    for c in order:
        for member in cell_of[int(c)]:
            pi[member] = pos
            pos += 1
    diagnostics = {
        "n_centers": int(pk.centers.size),
        "cell_sizes": [int(c.size) for c in pk.cells],
        "packing_order": [int(c) for c in order],
    }
    return SeriationOutput(pi_hat=Permutation(pi), packing_order=order,
                           diagnostics=diagnostics)


def params_for_model(
    model: str,
    n: int,
    cfg: EstimatorConfig,
    lam_hat: float = 1.0,
    einf: float | None = None,
) -> PinesParams:
    """The per-model (alpha, delta, epsilon) parameterizations with frozen constants."""
    A = cfg.A
    log_term = cfg.kappa * n * math.log(n)
    if model == "toeplitz":
        eps = cfg.c_eps * constants.C_EPS_TOEPLITZ * (A + math.sqrt(A) * log_term ** 0.25)
        return default_params(SQRT2, SQRT2 * A, eps)
    if model == "latent":
        delta = constants.C_DELTA_LATENT * A * math.sqrt(math.log(n))
        eps = cfg.c_eps * constants.C_EPS_LATENT * A * log_term ** 0.25
        return default_params(SQRT2, delta, eps)
    if model == "missing":
        delta = constants.C_DELTA_MISSING * A
        eps = (cfg.c_eps * constants.C_EPS_MISSING * A
               * lam_hat ** -1.5 * log_term ** 0.25)
        return default_params(1.0, delta, eps)
    if model == "supnorm":
        if einf is None:
            raise ValueError("supnorm parameterization needs the noise bound einf")
        return default_params(1.0, constants.C_SUP_DELTA * einf, 2.0 * einf)
    raise ValueError(f"unknown model {model!r}")


def seriate(
    Y: np.ndarray,
    model: str,
    cfg: EstimatorConfig,
    B: np.ndarray | None = None,
    einf: float | None = None,
    params: PinesParams | None = None,
) -> SeriationOutput:
    """Distance estimation composed with the ordering stage.

    ``params`` overrides the per-model radii (the CLI exposes this as
    --rho1/--rho2/--rho3).
    """
    Y = np.asarray(Y, dtype=float)
    n = Y.shape[0]
    lam_hat = 1.0
    if model == "toeplitz":
        d = dhat_toeplitz(Y, cfg)
    elif model == "latent":
        d = dhat_latent(Y, cfg)
    elif model == "missing":
        if B is None:
            raise ValueError("missing-data model needs the observation mask B")
        d = dhat_missing(Y, B, cfg)
        lam_hat = float(np.asarray(B, dtype=float).mean())
    elif model == "supnorm":
        d = dhat_supnorm(Y)
    else:
        raise ValueError(f"unknown model {model!r}")
    if params is None:
        params = params_for_model(model, n, cfg, lam_hat=lam_hat, einf=einf)
    return pines(d, params)
