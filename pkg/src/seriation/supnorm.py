"""Sup-norm seriation under adversarial bounded noise.

Large jumps in the entry values order part of the data for free: threshold the
matrix at the highest value gap, seriate the resulting indicator exactly with
the spectral method, and run the packing pipeline only on the middle block
whose rows the indicator cannot distinguish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import constants
from .baselines import spectral_seriation
from .distances import dhat_supnorm
from .errors import DegenerateSpectrumError
from .perms import Permutation, check_symmetric
from .pines import SeriationOutput, default_params, pines
from .robinson import RobinsonFlags, is_robinson


@dataclass(frozen=True)
class GapSplit:
    """Thresholding of the entry values at the highest gap of size >= lam.

    q_mask marks the retained pairs; degenerate means no such gap exists and
    the whole dataset goes to the middle block. parts, when set, is the
    (prefix, middle, suffix) index partition induced by seriating the
    indicator.
    """

    lam: float
    q_mask: np.ndarray
    cut: float
    degenerate: bool
    parts: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None


def gap_split(Y: np.ndarray, lam: float) -> GapSplit:
    """Scan the sorted entry values downward and cut at the first gap >= lam."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    Y = check_symmetric(Y)
    values = np.unique(Y)
    gaps = np.diff(values)
    big = np.flatnonzero(gaps >= lam)
    if big.size == 0:
        return GapSplit(lam=lam, q_mask=np.ones_like(Y, dtype=bool),
                        cut=float(values[0]), degenerate=True)
    cut = float(values[big[-1] + 1])
    return GapSplit(lam=lam, q_mask=Y >= cut, cut=cut, degenerate=False)


def seriate_indicator(q_mask: np.ndarray) -> tuple[Permutation | None, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Noiseless seriation of the 0/1 retained-pair matrix.

    Returns the spectral ordering (None when it is unusable) and the
    (prefix, middle, suffix) split: rows with duplicated indicator patterns
    cannot be ordered by the indicator and form the middle block; the distinct
    prefix and suffix are already ordered. Degenerate or non-Robinson
    indicators send everything to the middle.
    """
    ind = np.asarray(q_mask, dtype=float)
    n = ind.shape[0]
    everything = (np.empty(0, dtype=np.int64), np.arange(n), np.empty(0, dtype=np.int64))
    try:
        perm = spectral_seriation(ind)
    except DegenerateSpectrumError:
        return None, everything
    labels_in_order = perm.inverse().map
    ordered = ind[np.ix_(labels_in_order, labels_in_order)]
    if not is_robinson(ordered, RobinsonFlags(symmetric_cone=True)):
        return None, everything
    patterns = {}
    for lbl in range(n):
        patterns.setdefault(ind[lbl].tobytes(), []).append(lbl)
    ambiguous = {lbl for group in patterns.values() if len(group) > 1 for lbl in group}
    if not ambiguous:
        return perm, (labels_in_order, np.empty(0, dtype=np.int64),
                      np.empty(0, dtype=np.int64))
    positions = [k for k, lbl in enumerate(labels_in_order) if lbl in ambiguous]
    lo, hi = min(positions), max(positions)
    prefix = labels_in_order[:lo]
    middle = labels_in_order[lo:hi + 1]
    suffix = labels_in_order[hi + 1:]
    return perm, (np.asarray(prefix, dtype=np.int64),
                  np.asarray(middle, dtype=np.int64),
                  np.asarray(suffix, dtype=np.int64))


def _middle_delta(Y: np.ndarray, middle: np.ndarray, einf: float) -> float:
    """Adjacent-gap scale on the middle block: the largest consecutive value
    jump among its entries, floored by a frozen multiple of the noise bound."""
    floor = constants.C_SUP_DELTA * einf
    if middle.size < 2:
        return floor
    vals = np.unique(Y[np.ix_(middle, middle)])
    if vals.size < 2:
        return floor
    return max(float(np.diff(vals).max()), floor)


def _orient_middle(Y: np.ndarray, order: np.ndarray, prefix: np.ndarray,
                   suffix: np.ndarray) -> np.ndarray:
    """Flip the middle-block order so its near end faces the ordered prefix."""
    if order.size < 2:
        return order
    if prefix.size:
        anchor = int(prefix[-1])
        head, tail = int(order[0]), int(order[-1])
    elif suffix.size:
        anchor = int(suffix[0])
        head, tail = int(order[-1]), int(order[0])
    else:
        return order
    d_head = float(np.max(np.abs(Y[anchor] - Y[head])))
    d_tail = float(np.max(np.abs(Y[anchor] - Y[tail])))
    return order if d_head <= d_tail else order[::-1].copy()


def supnorm_seriate(Y: np.ndarray, E_inf_bound: float) -> SeriationOutput:
    """Gap split, exact indicator seriation, packing pipeline on the middle.

    The gap parameter is 4 * E_inf_bound (the guarantee only needs it above
    twice the noise bound; the margin keeps the value scan robust).
    """
    if E_inf_bound <= 0:
        raise ValueError("E_inf_bound must be positive")
    Y = check_symmetric(Y)
    n = Y.shape[0]
    lam = 4.0 * E_inf_bound
    split = gap_split(Y, lam)
    if split.degenerate:
        prefix = np.empty(0, dtype=np.int64)
        middle = np.arange(n)
        suffix = np.empty(0, dtype=np.int64)
    else:
        _, (prefix, middle, suffix) = seriate_indicator(split.q_mask)

    diagnostics = {"lambda": lam, "degenerate_split": bool(split.degenerate),
                   "parts": (prefix, middle, suffix),
                   "sizes": (int(prefix.size), int(middle.size), int(suffix.size))}

    if middle.size >= 2:
        dsub = dhat_supnorm(Y[np.ix_(middle, middle)])
        delta = _middle_delta(Y, middle, E_inf_bound)
        params = default_params(1.0, delta, 2.0 * E_inf_bound)
        sub = pines(dsub, params)
        middle_order = middle[np.argsort(sub.pi_hat.map, kind="stable")]
        diagnostics["middle_delta"] = delta
        diagnostics["middle_centers"] = sub.diagnostics["n_centers"]
    else:
        middle_order = middle

    middle_order = _orient_middle(Y, middle_order, prefix, suffix)
    full_order = np.concatenate([prefix, middle_order, suffix])
    pi = np.empty(n, dtype=np.int64)
    pi[full_order] = np.arange(n)
    return SeriationOutput(pi_hat=Permutation(pi), packing_order=middle_order,
                           diagnostics=diagnostics)
