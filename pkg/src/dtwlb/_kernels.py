"""Compiled inner loops.

All arrays are contiguous float64, indices are 0-based. Every kernel sums its
terms in column order (left to right), which is what makes the exact
float comparisons in the test-suite (dominance, oracle equality) hold.
"""

import numpy as np
from numba import njit

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def dtw_sq(a, b, w, cutoff):
    """Windowed DTW in the squared domain with two rolling rows.

    Returns ``(value, abandoned)``. When the minimum of a row exceeds
    ``cutoff`` the computation stops and that row minimum is returned; it is a
    lower bound on the final value.
    """
    n = a.shape[0]
    inf = np.inf
    prev = np.full(n + 1, inf)
    curr = np.full(n + 1, inf)
    prev[0] = 0.0
    for i in range(1, n + 1):
        lo = max(1, i - w)
        hi = min(n, i + w)
        curr[lo - 1] = inf
        ai = a[i - 1]
        row_min = inf
        for j in range(lo, hi + 1):
            best = prev[j - 1]
            if prev[j] < best:
                best = prev[j]
            if curr[j - 1] < best:
                best = curr[j - 1]
            d = ai - b[j - 1]
            v = d * d + best
            curr[j] = v
            if v < row_min:
                row_min = v
        if hi < n:
            curr[hi + 1] = inf
        if row_min > cutoff:
            return row_min, True
        prev, curr = curr, prev
    return prev[n], False


@njit(**_JIT)
def sq_euclidean(a, b, cutoff):
    s = 0.0
    for i in range(a.shape[0]):
        d = a[i] - b[i]
        s += d * d
        if s > cutoff:
            return s
    return s


@njit(**_JIT)
def sq_euclidean_rows(x, q):
    out = np.empty(x.shape[0])
    for r in range(x.shape[0]):
        s = 0.0
        for i in range(q.shape[0]):
            d = x[r, i] - q[i]
            s += d * d
        out[r] = s
    return out


@njit(**_JIT)
def envelope(b, w):
    """Sliding max/min over ``[i - w, i + w]`` with monotonic deques, O(L)."""
    n = b.shape[0]
    upper = np.empty(n)
    lower = np.empty(n)
    dq_max = np.empty(n, dtype=np.int64)
    dq_min = np.empty(n, dtype=np.int64)
    hmax = tmax = 0
    hmin = tmin = 0
    for j in range(n + w):
        if j < n:
            x = b[j]
            while tmax > hmax and b[dq_max[tmax - 1]] <= x:
                tmax -= 1
            dq_max[tmax] = j
            tmax += 1
            while tmin > hmin and b[dq_min[tmin - 1]] >= x:
                tmin -= 1
            dq_min[tmin] = j
            tmin += 1
        i = j - w
        if i >= 0:
            while dq_max[hmax] < i - w:
                hmax += 1
            while dq_min[hmin] < i - w:
                hmin += 1
            upper[i] = b[dq_max[hmax]]
            lower[i] = b[dq_min[hmin]]
    return upper, lower


@njit(**_JIT)
def keogh(a, upper, lower, init, cutoff):
    s = init
    for i in range(a.shape[0]):
        x = a[i]
        if x > upper[i]:
            d = x - upper[i]
            s += d * d
            if s >= cutoff:
                return s, True
        elif x < lower[i]:
            d = lower[i] - x
            s += d * d
            if s >= cutoff:
                return s, True
    return s, False


@njit(**_JIT)
def projection(a, upper, lower):
    out = np.empty(a.shape[0])
    for i in range(a.shape[0]):
        x = a[i]
        if x > upper[i]:
            out[i] = upper[i]
        elif x < lower[i]:
            out[i] = lower[i]
        else:
            out[i] = x
    return out


@njit(**_JIT)
def yi(a, b):
    bmax = b.max()
    bmin = b.min()
    s = 0.0
    for i in range(a.shape[0]):
        x = a[i]
        if x > bmax:
            d = x - bmax
            s += d * d
        elif x < bmin:
            d = bmin - x
            s += d * d
    return s


@njit(**_JIT)
def lb_new(a, b, w, cutoff):
    n = a.shape[0]
    d = a[0] - b[0]
    s = d * d
    for i in range(1, n - 1):
        x = a[i]
        m = np.inf
        for j in range(max(0, i - w), min(n - 1, i + w) + 1):
            d = x - b[j]
            d = d * d
            if d < m:
                m = d
        s += m
        if s >= cutoff:
            return s, True
    d = a[n - 1] - b[n - 1]
    s += d * d
    return s, False


@njit(**_JIT)
def lb_enhanced(a, b, upper, lower, w, v, cutoff):
    n = a.shape[0]
    if n == 1:
        d = a[0] - b[0]
        return d * d, False
    nb = min(n // 2, v)

    d = a[0] - b[0]
    left = d * d
    for i in range(1, nb):
        d = a[i] - b[i]
        m = d * d
        for j in range(max(0, i - w), i):
            d = a[i] - b[j]
            d = d * d
            if d < m:
                m = d
            d = a[j] - b[i]
            d = d * d
            if d < m:
                m = d
        left += m

    # right[k] holds the band minimum of column n - nb + k
    right = np.empty(nb)
    d = a[n - 1] - b[n - 1]
    right[nb - 1] = d * d
    for i in range(1, nb):
        c = n - 1 - i
        d = a[c] - b[c]
        m = d * d
        for j in range(c + 1, min(n - 1, c + w) + 1):
            d = a[c] - b[j]
            d = d * d
            if d < m:
                m = d
            d = a[j] - b[c]
            d = d * d
            if d < m:
                m = d
        right[nb - 1 - i] = m

    partial = left
    for k in range(nb):
        partial += right[k]
    if partial >= cutoff:
        return partial, True

    s = left
    for i in range(nb, n - nb):
        x = a[i]
        if x > upper[i]:
            d = x - upper[i]
            s += d * d
        elif x < lower[i]:
            d = lower[i] - x
            s += d * d
    for k in range(nb):
        s += right[k]
    return s, False
