"""Hot numeric kernels (numba-compiled unless SERIATION_NO_NUMBA is set).

All kernels are plain-loop implementations that run unchanged, with identical
results, on the pure-Python fallback path.
"""

import numpy as np

from ._accel import maybe_njit


@maybe_njit
def pava_nondecreasing(y, w):
    """Weighted least-squares nondecreasing fit, pooling on ties."""
    n = y.shape[0]
    val = np.empty(n)
    wt = np.empty(n)
    cnt = np.empty(n, np.int64)
    m = 0
    for k in range(n):
        cv = y[k]
        cw = w[k]
        cc = 1
        while m > 0 and val[m - 1] >= cv:
            cv = (wt[m - 1] * val[m - 1] + cw * cv) / (wt[m - 1] + cw)
            cw = cw + wt[m - 1]
            cc = cc + cnt[m - 1]
            m -= 1
        val[m] = cv
        wt[m] = cw
        cnt[m] = cc
        m += 1
    out = np.empty(n)
    pos = 0
    for p in range(m):
        for _ in range(cnt[p]):
            out[pos] = val[p]
            pos += 1
    return out


@maybe_njit
def unimodal_fixed_mode(v, mode):
    """Projection of v onto {x: x_0 <= ... <= x_mode >= ... >= x_{n-1}}.

    Two isotonic fits spliced at the mode: the peak value t minimizes the
    convex splice objective sum((min(fit_k, t) - v_k)^2) + (t - v_mode)^2,
    found by scanning pool levels downward (pool values are pool means, so the
    derivative is continuous and the first admissible root is exact).
    """
    n = v.shape[0]
    ones = np.ones(n)
    left = pava_nondecreasing(v[:mode], ones[:mode])
    right = -pava_nondecreasing(-v[mode + 1:], ones[mode + 1:])

    nfit = n - 1
    fits = np.empty(nfit)
    origs = np.empty(nfit)
    for k in range(mode):
        fits[k] = left[k]
        origs[k] = v[k]
    for k in range(mode + 1, n):
        fits[k - 1] = right[k - mode - 1]
        origs[k - 1] = v[k]

    order = np.argsort(-fits)
    cum_w = 0.0
    cum_s = 0.0
    t_star = v[mode]
    j = 0
    while True:
        lev = fits[order[j]] if j < nfit else -np.inf
        t_hat = (v[mode] + cum_s) / (1.0 + cum_w)
        if t_hat >= lev:
            t_star = t_hat
            break
        # absorb every item sitting at this level, then step below it
        while j < nfit and fits[order[j]] == lev:
            cum_w += 1.0
            cum_s += origs[order[j]]
            j += 1

    out = np.empty(n)
    for k in range(mode):
        out[k] = min(left[k], t_star)
    out[mode] = t_star
    for k in range(mode + 1, n):
        out[k] = min(right[k - mode - 1], t_star)
    return out


@maybe_njit
def project_rows_unimodal(M):
    """Row-wise unimodal projection with the mode fixed at the diagonal."""
    n = M.shape[0]
    out = np.empty_like(M)
    for i in range(n):
        out[i, :] = unimodal_fixed_mode(M[i, :], i)
    return out


@maybe_njit
def jacobi_eigh(A, tol, max_sweeps):
    """Cyclic Jacobi diagonalization of a symmetric matrix.

    Returns (eigenvalues, eigenvectors-as-columns), unsorted. Sweeps stop when
    the off-diagonal Frobenius norm drops below tol * max(1, ||A||_F).
    """
    n = A.shape[0]
    a = A.copy()
    V = np.eye(n)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += A[i, j] * A[i, j]
    thresh = tol * max(1.0, np.sqrt(scale))
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * a[i, j] * a[i, j]
        if np.sqrt(off) <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                app = a[p, p]
                aqq = a[q, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    if k != p and k != q:
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[p, k] = a[k, p]
                        a[k, q] = s * akp + c * akq
                        a[q, k] = a[k, q]
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    return np.diag(a).copy(), V


@maybe_njit
def greedy_packing(d, rho1):
    """Greedy maximal packing, lowest uncovered index first.

    Returns (centers, n_centers, cell_id) where cell_id[j] is the index into
    centers of the cell owning j.
    """
    n = d.shape[0]
    cell_id = np.full(n, -1, np.int64)
    centers = np.empty(n, np.int64)
    c = 0
    for i in range(n):
        if cell_id[i] >= 0:
            continue
        centers[c] = i
        for j in range(n):
            if cell_id[j] < 0 and d[i, j] <= rho1:
                cell_id[j] = c
        c += 1
    return centers[:c], c, cell_id


@maybe_njit
def _uf_find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@maybe_njit
def center_component_labels(d, center, rho2, rho3):
    """Connected-component roots of the graph around one removed ball.

    Vertices are {j : d[center, j] > rho2}; edges join vertex pairs at
    distance <= rho3. Returns (vertex_mask, root_label) with root_label[j] = -1
    for non-vertices.
    """
    n = d.shape[0]
    vertex = np.empty(n, np.bool_)
    for j in range(n):
        vertex[j] = d[center, j] > rho2 and j != center
    parent = np.arange(n)
    for j in range(n):
        if not vertex[j]:
            continue
        for k in range(j + 1, n):
            if vertex[k] and d[j, k] <= rho3:
                rj = _uf_find(parent, j)
                rk = _uf_find(parent, k)
                if rj != rk:
                    parent[rk] = rj
    labels = np.full(n, -1, np.int64)
    for j in range(n):
        if vertex[j]:
            labels[j] = _uf_find(parent, j)
    return vertex, labels


@maybe_njit
def pairwise_supnorm(Y):
    """Entrywise-max distance between every pair of rows."""
    n = Y.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            m = 0.0
            for k in range(n):
                diff = abs(Y[i, k] - Y[j, k])
                if diff > m:
                    m = diff
            out[i, j] = m
            out[j, i] = m
    return out
