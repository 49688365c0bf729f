"""numba kernels for the matcher and the synthetic generator.

Import this module only when the numba backend is active (see _backend).
The PRNG helpers mirror predmatch.rng word for word; the match kernel
mirrors the numpy fallback in predmatch.matcher. Parity across all paths
is enforced by tests.
"""

import numpy as np
from numba import njit

_U0 = np.uint64(0)
_U1 = np.uint64(1)
_U5 = np.uint64(5)
_U7 = np.uint64(7)
_U9 = np.uint64(9)
_U11 = np.uint64(11)
_U17 = np.uint64(17)
_U19 = np.uint64(19)
_U45 = np.uint64(45)
_U57 = np.uint64(57)

_INV_2_53 = 1.0 / 9007199254740992.0
_TWO_PI = 2.0 * np.pi

DIST_BETA = 0
DIST_FIXED = 1
CAL_IDENTITY = 0
CAL_AFFINE = 1
CAL_POWER = 2


@njit(cache=True)
def next_u64(s):
    s1 = s[1]
    x = s1 * _U5
    result = ((x << _U7) | (x >> _U57)) * _U9
    t = s1 << _U17
    s[2] ^= s[0]
    s[3] ^= s1
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    x3 = s[3]
    s[3] = (x3 << _U45) | (x3 >> _U19)
    return result


@njit(cache=True)
def next_f64(s):
    return np.float64(next_u64(s) >> _U11) * _INV_2_53


@njit(cache=True)
def randbelow(s, n):
    m = np.uint64(n - 1)
    mask = _U0
    while mask < m:
        mask = (mask << _U1) | _U1
    while True:
        r = next_u64(s) & mask
        if r <= m:
            return np.int64(r)


@njit(cache=True)
def fill_u64(s, out):
    for i in range(out.shape[0]):
        out[i] = next_u64(s)


@njit(cache=True)
def fill_randbelow(s, n, out):
    for i in range(out.shape[0]):
        out[i] = randbelow(s, n)


@njit(cache=True)
def _normal(s):
    u1 = next_f64(s)
    u2 = next_f64(s)
    return np.sqrt(-2.0 * np.log(1.0 - u1)) * np.cos(_TWO_PI * u2)


@njit(cache=True)
def _gamma_ge1(s, shape):
    d = shape - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    while True:
        x = _normal(s)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = next_f64(s)
        x2 = x * x
        if u < 1.0 - 0.0331 * x2 * x2:
            return d * v
        if u <= 0.0:
            return d * v
        if np.log(u) < 0.5 * x2 + d * (1.0 - v + np.log(v)):
            return d * v


@njit(cache=True)
def _gamma(s, shape):
    if shape < 1.0:
        g = _gamma_ge1(s, shape + 1.0)
        u = next_f64(s)
        return g * u ** (1.0 / shape)
    return _gamma_ge1(s, shape)


@njit(cache=True)
def _beta(s, a, b):
    x = _gamma(s, a)
    y = _gamma(s, b)
    if x == 0.0 and y == 0.0:
        return 0.5
    return x / (x + y)


@njit(cache=True)
def _in_window(src_conf, tgt_conf, eps):
    # the eligibility test: tgt confidence inside [src - eps, src + eps]
    return src_conf - eps <= tgt_conf and tgt_conf <= src_conf + eps


@njit(cache=True)
def _bisect_left(arr, x, lo, hi):
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def _bisect_right(arr, x, lo, hi):
    while lo < hi:
        mid = (lo + hi) >> 1
        if x < arr[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


@njit(cache=True)
def _select_uth(vals, pos, c, u):
    """Partial in-place quickselect over vals[:c] (pos kept aligned).

    On return vals[u] holds the u-th smallest value. Values are distinct
    source indices, so no equal-key subtleties arise.
    """
    lo = 0
    hi = c - 1
    while lo < hi:
        mid = (lo + hi) >> 1
        if vals[mid] < vals[lo]:
            vals[lo], vals[mid] = vals[mid], vals[lo]
            pos[lo], pos[mid] = pos[mid], pos[lo]
        if vals[hi] < vals[lo]:
            vals[lo], vals[hi] = vals[hi], vals[lo]
            pos[lo], pos[hi] = pos[hi], pos[lo]
        if vals[hi] < vals[mid]:
            vals[mid], vals[hi] = vals[hi], vals[mid]
            pos[mid], pos[hi] = pos[hi], pos[mid]
        pivot = vals[mid]
        i = lo
        j = hi
        while i <= j:
            while vals[i] < pivot:
                i += 1
            while vals[j] > pivot:
                j -= 1
            if i <= j:
                vals[i], vals[j] = vals[j], vals[i]
                pos[i], pos[j] = pos[j], pos[i]
                i += 1
                j -= 1
        if u <= j:
            hi = j
        elif u >= i:
            lo = i
        else:
            return


@njit(cache=True)
def match_kernel(sorted_conf, sorted_idx, group_lo, group_hi,
                 t_conf, t_group, order, eps, state, out_pick):
    """Greedy without-replacement matching over a per-label sorted index.

    out_pick[k] receives the picked source record index (original order)
    for the k-th iterated target, or -1 when no candidate remains.
    """
    n = sorted_conf.shape[0]
    m = order.shape[0]
    alive = np.ones(n, np.bool_)
    cand = np.empty(n, np.int64)
    pos = np.empty(n, np.int64)
    for k in range(m):
        ti = order[k]
        tc = t_conf[ti]
        g = t_group[ti]
        lo0 = group_lo[g]
        hi0 = group_hi[g]
        if lo0 >= hi0:
            out_pick[k] = -1
            continue
        # approximate window by binary search, then pin the boundaries with
        # the exact eligibility predicate (the +-eps bounds can be 1 ulp off)
        lo = _bisect_left(sorted_conf, tc - eps, lo0, hi0)
        hi = _bisect_right(sorted_conf, tc + eps, lo0, hi0)
        while lo > lo0 and _in_window(sorted_conf[lo - 1], tc, eps):
            lo -= 1
        while lo < hi and not _in_window(sorted_conf[lo], tc, eps):
            lo += 1
        while hi < hi0 and _in_window(sorted_conf[hi], tc, eps):
            hi += 1
        while hi > lo and not _in_window(sorted_conf[hi - 1], tc, eps):
            hi -= 1
        c = 0
        for p in range(lo, hi):
            if alive[p]:
                cand[c] = sorted_idx[p]
                pos[c] = p
                c += 1
        if c == 0:
            out_pick[k] = -1
            continue
        u = randbelow(state, c)
        if c > 1:
            _select_uth(cand, pos, c, u)
        alive[pos[u]] = False
        out_pick[k] = cand[u]


@njit(cache=True)
def synth_kernel(state, num_classes, dist_kind, p0, p1, floor_at_chance,
                 calib_kind, cal0, cal1, out_y, out_yhat, out_p):
    """Sample (ground truth, predicted label, confidence) triples.

    Per record: confidence from the configured distribution, predicted label
    uniform, ground truth equal to the prediction with probability given by
    the calibration function, otherwise uniform over the other labels.
    """
    n = out_y.shape[0]
    inv_k = 1.0 / num_classes
    for i in range(n):
        if dist_kind == DIST_BETA:
            p = _beta(state, p0, p1)
        else:
            p = p0
        if floor_at_chance:
            p = inv_k + (1.0 - inv_k) * p
        yhat = randbelow(state, num_classes)
        if calib_kind == CAL_IDENTITY:
            q = p
        elif calib_kind == CAL_AFFINE:
            q = cal0 + cal1 * p
            if q < 0.0:
                q = 0.0
            elif q > 1.0:
                q = 1.0
        else:
            q = p ** cal0
        u = next_f64(state)
        if u < q:
            y = yhat
        else:
            j = randbelow(state, num_classes - 1)
            y = j if j < yhat else j + 1
        out_y[i] = y
        out_yhat[i] = yhat
        out_p[i] = p
