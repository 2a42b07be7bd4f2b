"""Compiled inner loops for exhaustive enumeration.

Bitsets are rows of ``uint64`` words, least-significant word first.  Patterns
are ordered by comparing the most significant word first, which matches
``np.lexsort`` over the word columns.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True, inline="always")
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True, inline="always")
def popcount_row(a):
    s = 0
    for k in range(a.shape[0]):
        s += popcount64(a[k])
    return s


@njit(cache=True, inline="always")
def xor_popcount(a, b):
    s = 0
    for k in range(a.shape[0]):
        s += popcount64(a[k] ^ b[k])
    return s


@njit(cache=True, inline="always")
def cmp_rows(a, b):
    for k in range(a.shape[0] - 1, -1, -1):
        if a[k] < b[k]:
            return -1
        if a[k] > b[k]:
            return 1
    return 0


@njit(cache=True)
def canonicalize(d, full, w):
    """Replace ``d`` in place by the lighter of d and d^full (ties: smaller value)."""
    pc = popcount_row(d)
    flip = False
    if 2 * pc > w:
        flip = True
    elif 2 * pc == w:
        for k in range(d.shape[0] - 1, -1, -1):
            c = d[k] ^ full[k]
            if c < d[k]:
                flip = True
                break
            if c > d[k]:
                break
    if flip:
        for k in range(d.shape[0]):
            d[k] ^= full[k]


@njit(cache=True, inline="always")
def dist_eq(a, b, w):
    p = xor_popcount(a, b)
    q = w - p
    return p if p < q else q


@njit(cache=True)
def _binom(n, k):
    if k < 0 or k > n:
        return 0
    r = 1
    for i in range(k):
        r = r * (n - i) // (i + 1)
    return r


@njit(cache=True)
def enumerate_arrays(loc_pat, loc_dat, t, full, w):
    """Enumerate every subset of <= t locations in (size, lexicographic) order.

    Returns XORed patterns, canonical XORed data errors and subset sizes.
    """
    L = loc_pat.shape[0]
    pw = loc_pat.shape[1]
    dw = loc_dat.shape[1]
    total = 0
    for k in range(t + 1):
        total += _binom(L, k)
    pat = np.zeros((total, pw), dtype=np.uint64)
    dat = np.zeros((total, dw), dtype=np.uint64)
    wt = np.zeros(total, dtype=np.uint8)
    row = 1  # row 0 is the empty set
    canonicalize(dat[0], full, w)
    idx = np.zeros(max(t, 1), dtype=np.int64)
    # prefix XOR stacks so each subset costs O(words)
    pstack = np.zeros((max(t, 1) + 1, pw), dtype=np.uint64)
    dstack = np.zeros((max(t, 1) + 1, dw), dtype=np.uint64)
    for k in range(1, t + 1):
        if k > L:
            break
        for i in range(k):
            idx[i] = i
        for i in range(k):
            for q in range(pw):
                pstack[i + 1, q] = pstack[i, q] ^ loc_pat[idx[i], q]
            for q in range(dw):
                dstack[i + 1, q] = dstack[i, q] ^ loc_dat[idx[i], q]
        while True:
            for q in range(pw):
                pat[row, q] = pstack[k, q]
            for q in range(dw):
                dat[row, q] = dstack[k, q]
            canonicalize(dat[row], full, w)
            wt[row] = k
            row += 1
            # advance to the next combination
            i = k - 1
            while i >= 0 and idx[i] == L - k + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, k):
                idx[j] = idx[j - 1] + 1
            for j in range(i, k):
                for q in range(pw):
                    pstack[j + 1, q] = pstack[j, q] ^ loc_pat[idx[j], q]
                for q in range(dw):
                    dstack[j + 1, q] = dstack[j, q] ^ loc_dat[idx[j], q]
    return pat, dat, wt


@njit(cache=True)
def group_bounds(pat_sorted):
    n = pat_sorted.shape[0]
    starts = np.empty(n + 1, dtype=np.int64)
    g = 0
    for i in range(n):
        if i == 0 or cmp_rows(pat_sorted[i], pat_sorted[i - 1]) != 0:
            starts[g] = i
            g += 1
    starts[g] = n
    return starts[: g + 1]


@njit(cache=True)
def _valid(c, members_d, members_k, m, w):
    for i in range(m):
        if dist_eq(c, members_d[i], w) > members_k[i]:
            return False
    return True


@njit(cache=True)
def _in_span(x, allowed, full):
    # every boundary x[p] != x[p-1] (with x[-1] = 0) must sit at an allowed position
    carry = np.uint64(0)
    for k in range(x.shape[0]):
        v = x[k]
        b = (v ^ ((v << np.uint64(1)) | carry)) & full[k] & ~allowed[k]
        carry = v >> np.uint64(63)
        if b != 0:
            return False
    return True


@njit(cache=True)
def _allowed(x, allowed, full, tmp):
    if _in_span(x, allowed, full):
        return True
    for k in range(x.shape[0]):
        tmp[k] = x[k] ^ full[k]
    return _in_span(tmp, allowed, full)


@njit(cache=True)
def decide_groups(order, starts, dat, wt, ball, ball_wt, full, w, stop_on_fail, restrict, allowed):
    """Intersect stabilizer-equivalent Hamming balls for each pattern class.

    ``order`` lists enumeration rows sorted stably by pattern, so the first row
    of each group is the class's minimal (weight, lexicographic) member.
    The chosen correction is the intersection member closest to that member's
    data error, ties broken by the smallest canonical value.  With ``restrict``
    only corrections whose suffix boundaries lie in ``allowed`` (up to the
    stabilizer) are admissible.

    Returns (ok per group, chosen correction per group, number of groups done).
    """
    ng = starts.shape[0] - 1
    dw = dat.shape[1]
    ok = np.ones(ng, dtype=np.bool_)
    corr = np.zeros((ng, dw), dtype=np.uint64)
    maxm = 1
    for g in range(ng):
        s = starts[g + 1] - starts[g]
        if s > maxm:
            maxm = s
    md = np.zeros((maxm, dw), dtype=np.uint64)
    mk = np.zeros(maxm, dtype=np.int64)
    c = np.zeros(dw, dtype=np.uint64)
    best = np.zeros(dw, dtype=np.uint64)
    tmp = np.zeros(dw, dtype=np.uint64)
    done = ng
    for g in range(ng):
        a = starts[g]
        b = starts[g + 1]
        first = order[a]
        for q in range(dw):
            corr[g, q] = dat[first, q]
        # distinct data errors with their minimal fault weight
        m = 0
        for r in range(a, b):
            row = order[r]
            found = -1
            for i in range(m):
                if cmp_rows(md[i], dat[row]) == 0:
                    found = i
                    break
            if found < 0:
                for q in range(dw):
                    md[m, q] = dat[row, q]
                mk[m] = wt[row]
                m += 1
            elif wt[row] < mk[found]:
                mk[found] = wt[row]
        first_ok = not restrict or _allowed(dat[first], allowed, full, tmp)
        if first_ok and (m == 1 or _valid(dat[first], md, mk, m, w)):
            continue
        k0 = wt[first]
        have = False
        level = -1
        for bi in range(ball.shape[0]):
            bw = ball_wt[bi]
            if bw > k0:
                break
            if have and bw > level:
                break
            for q in range(dw):
                c[q] = dat[first, q] ^ ball[bi, q]
            if _valid(c, md, mk, m, w) and (not restrict or _allowed(c, allowed, full, tmp)):
                canonicalize(c, full, w)
                if not have or cmp_rows(c, best) < 0:
                    for q in range(dw):
                        best[q] = c[q]
                have = True
                level = bw
        if have:
            for q in range(dw):
                corr[g, q] = best[q]
        else:
            ok[g] = False
            if stop_on_fail:
                done = g + 1
                break
    return ok, corr, done


@njit(cache=True)
def find_row(keys, q):
    """Binary search for ``q`` among lexicographically sorted ``keys``; -1 if absent."""
    lo = 0
    hi = keys.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        c = cmp_rows(keys[mid], q)
        if c == 0:
            return mid
        if c < 0:
            lo = mid + 1
        else:
            hi = mid
    return -1


@njit(cache=True)
def verify_kernel(loc_pat, loc_dat, t, keys, corr, w):
    """Check the flag fault-tolerance condition for every subset of <= t locations.

    Returns (index combination of the first violation or empty, residual,
    correction row used, number of subsets that hit a missing pattern,
    number of subsets checked).
    """
    L = loc_pat.shape[0]
    pw = loc_pat.shape[1]
    dw = loc_dat.shape[1]
    zero_corr = np.zeros(dw, dtype=np.uint64)
    p = np.zeros(pw, dtype=np.uint64)
    d = np.zeros(dw, dtype=np.uint64)
    idx = np.zeros(max(t, 1), dtype=np.int64)
    pstack = np.zeros((max(t, 1) + 1, pw), dtype=np.uint64)
    dstack = np.zeros((max(t, 1) + 1, dw), dtype=np.uint64)
    missing = 0
    checked = 0
    for k in range(0, t + 1):
        if k > L:
            break
        for i in range(k):
            idx[i] = i
        for i in range(k):
            for q in range(pw):
                pstack[i + 1, q] = pstack[i, q] ^ loc_pat[idx[i], q]
            for q in range(dw):
                dstack[i + 1, q] = dstack[i, q] ^ loc_dat[idx[i], q]
        while True:
            for q in range(pw):
                p[q] = pstack[k, q]
            for q in range(dw):
                d[q] = dstack[k, q]
            r = find_row(keys, p)
            if r < 0:
                missing += 1
                res = dist_eq(d, zero_corr, w)
            else:
                res = dist_eq(d, corr[r], w)
            checked += 1
            if res > k:
                return idx[:k].copy(), res, r, missing, checked
            if k == 0:
                break
            i = k - 1
            while i >= 0 and idx[i] == L - k + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, k):
                idx[j] = idx[j - 1] + 1
            for j in range(i, k):
                for q in range(pw):
                    pstack[j + 1, q] = pstack[j, q] ^ loc_pat[idx[j], q]
                for q in range(dw):
                    dstack[j + 1, q] = dstack[j, q] ^ loc_dat[idx[j], q]
    return np.zeros(0, dtype=np.int64), -1, -1, missing, checked


@njit(cache=True)
def independent_upto(cols, dmax):
    """True iff no nonempty subset of <= dmax columns XORs to zero.

    Returns (ok, number of subsets examined, first failing subset).
    """
    n = cols.shape[0]
    idx = np.zeros(max(dmax, 1), dtype=np.int64)
    acc = np.zeros(max(dmax, 1) + 1, dtype=np.uint64)
    seen = 0
    for k in range(1, dmax + 1):
        if k > n:
            break
        for i in range(k):
            idx[i] = i
            acc[i + 1] = acc[i] ^ cols[i]
        while True:
            seen += 1
            if acc[k] == 0:
                return False, seen, idx[:k].copy()
            i = k - 1
            while i >= 0 and idx[i] == n - k + i:
                i -= 1
            if i < 0:
                break
            idx[i] += 1
            for j in range(i + 1, k):
                idx[j] = idx[j - 1] + 1
            for j in range(i, k):
                acc[j + 1] = acc[j] ^ cols[idx[j]]
    return True, seen, np.zeros(0, dtype=np.int64)
