"""Compiled inner loops for segment sampling with on-line deduplication.

Two drivers share one per-pair body: the hull pass kernel walks the ordered
pair ranges of a pass, the drop kernel walks apex-to-base segments.  Both
sample each connecting segment at arc-length steps of res and append every
sample that is not within dedup_tol of an already stored point.  Candidates
are visited in ascending (i, j, k) order, which is what makes runs
reproducible point for point.

The spatial index is an open-addressing hash table over chart-space grid
cells (cell edge = dedup_tol) with per-cell chains threaded through `nxt`.
Hash collisions between distinct cells only cause extra distance checks,
never missed neighbors, so the kept set does not depend on the hash.

Space codes: 0 = Euclidean rows of any width (vertical extensions of
Euclidean bases included, their metric is Euclidean one dimension up),
1 = half-plane rows (x, y), 2 = half-plane extension rows (x, y, h).
Chart rows replace y by ln(y) for codes 1 and 2.

Falls back to undecorated Python when numba is unavailable; slow but
semantically identical, and the hull module prefers its own reference
engine in that case anyway.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


EMPTY_KEY = np.int64(-(1 << 62))

PASS_DONE = 0
PASS_GROW_POINTS = 1
PASS_GROW_TABLE = 2
PASS_HIT_LIMIT = 3

# state vector layout for the resumable kernels
S_COUNT = 0
S_ENTRIES = 1
S_ROW = 2
S_COL = 3

# overflow failsafe for arc parameters, not an accuracy device
_S_CLIP = 690.0


@njit(cache=True)
def _key_of(c0, c1, c2, c3):
    k = np.int64(-3750763034362895579)
    k = (k ^ c0) * np.int64(1099511628211)
    k = (k ^ c1) * np.int64(1099511628211)
    k = (k ^ c2) * np.int64(1099511628211)
    k = (k ^ c3) * np.int64(1099511628211)
    return k


@njit(cache=True)
def _find_slot(keys, key):
    mask = keys.shape[0] - 1
    slot = np.int64(key) & mask
    while True:
        k = keys[slot]
        if k == EMPTY_KEY or k == key:
            return slot
        slot = (slot + 1) & mask


@njit(cache=True)
def _insert_grid(keys, vals, nxt, key, idx):
    """Returns 1 if a fresh table slot was consumed."""
    slot = _find_slot(keys, key)
    if keys[slot] == EMPTY_KEY:
        keys[slot] = key
        vals[slot] = idx
        nxt[idx] = -1
        return 1
    nxt[idx] = vals[slot]
    vals[slot] = idx
    return 0


@njit(cache=True)
def rebuild_table(m, cha, n, inv, keys, vals, nxt):
    """Reindex the first n stored points into a cleared table."""
    entries = 0
    for idx in range(n):
        c0 = np.int64(math.floor(cha[idx, 0] * inv))
        c1 = np.int64(math.floor(cha[idx, 1] * inv)) if m > 1 else np.int64(0)
        c2 = np.int64(math.floor(cha[idx, 2] * inv)) if m > 2 else np.int64(0)
        c3 = np.int64(math.floor(cha[idx, 3] * inv)) if m > 3 else np.int64(0)
        entries += _insert_grid(keys, vals, nxt, _key_of(c0, c1, c2, c3), idx)
    return entries


@njit(cache=True)
def _pair_dist(code, nd, nat, i, j):
    if code == 0:
        s = 0.0
        for d in range(nd):
            t = nat[i, d] - nat[j, d]
            s += t * t
        return math.sqrt(s)
    dx = nat[i, 0] - nat[j, 0]
    ya = nat[i, 1]
    yb = nat[j, 1]
    straight = math.sqrt(dx * dx + (ya - yb) * (ya - yb))
    mirrored = math.sqrt(dx * dx + (ya + yb) * (ya + yb))
    db = 2.0 * math.log((straight + mirrored) / (2.0 * math.sqrt(ya * yb)))
    if code == 1:
        return db
    dh = nat[i, 2] - nat[j, 2]
    return math.sqrt(db * db + dh * dh)


@njit(cache=True)
def _is_dup(code, nd, nat, cha, idx, w0, w1, w2, w3, u1, tol, tol2):
    """True metric test between stored point idx and the candidate
    (w0..w3 native coords, u1 = candidate chart ln y for codes 1 and 2)."""
    if code == 0:
        s = (nat[idx, 0] - w0) ** 2
        if nd > 1:
            s += (nat[idx, 1] - w1) ** 2
        if nd > 2:
            s += (nat[idx, 2] - w2) ** 2
        if nd > 3:
            s += (nat[idx, 3] - w3) ** 2
        return s <= tol2
    # chart distance dominates the hyperbolic one once both points sit at
    # y >= 1 (ln y >= 0), which settles most duplicates without the log below
    if cha[idx, 1] >= 0.0 and u1 >= 0.0:
        cd = (cha[idx, 0] - w0) ** 2 + (cha[idx, 1] - u1) ** 2
        if code == 2:
            cd += (cha[idx, 2] - w2) ** 2
        if cd <= tol2:
            return True
    dx = nat[idx, 0] - w0
    ya = nat[idx, 1]
    straight = math.sqrt(dx * dx + (ya - w1) * (ya - w1))
    mirrored = math.sqrt(dx * dx + (ya + w1) * (ya + w1))
    db = 2.0 * math.log((straight + mirrored) / (2.0 * math.sqrt(ya * w1)))
    if code == 1:
        return db <= tol
    dh = nat[idx, 2] - w2
    return db * db + dh * dh <= tol2


@njit(cache=True)
def _covered(code, nd, m, nat, cha, keys, vals, nxt, inv,
             w0, w1, w2, w3, u0, u1, u2, u3, tol, tol2):
    c0 = np.int64(math.floor(u0 * inv))
    c1 = np.int64(math.floor(u1 * inv)) if m > 1 else np.int64(0)
    c2 = np.int64(math.floor(u2 * inv)) if m > 2 else np.int64(0)
    c3 = np.int64(math.floor(u3 * inv)) if m > 3 else np.int64(0)
    # own cell first: in dense regions it almost always decides
    slot = _find_slot(keys, _key_of(c0, c1, c2, c3))
    if keys[slot] != EMPTY_KEY:
        idx = vals[slot]
        while idx >= 0:
            if _is_dup(code, nd, nat, cha, idx, w0, w1, w2, w3, u1, tol, tol2):
                return True
            idx = nxt[idx]
    lo2, hi2 = (-1, 1) if m > 2 else (0, 0)
    lo3, hi3 = (-1, 1) if m > 3 else (0, 0)
    for d0 in range(-1, 2):
        for d1 in range(-1, 2):
            for d2 in range(lo2, hi2 + 1):
                for d3 in range(lo3, hi3 + 1):
                    if d0 == 0 and d1 == 0 and d2 == 0 and d3 == 0:
                        continue
                    key = _key_of(c0 + d0, c1 + d1, c2 + d2, c3 + d3)
                    slot = _find_slot(keys, key)
                    if keys[slot] == EMPTY_KEY:
                        continue
                    idx = vals[slot]
                    while idx >= 0:
                        if _is_dup(code, nd, nat, cha, idx,
                                   w0, w1, w2, w3, u1, tol, tol2):
                            return True
                        idx = nxt[idx]
    return False


@njit(cache=True)
def _do_pair(code, nd, m, nat, cha, nxt, par, keys, vals,
             i, j, res, tol, inv, max_points, n, entries):
    """Sample segment (i, j) and append the survivors starting at n.

    Returns (n, entries, rc); rc != PASS_DONE means nothing was written for
    this pair and the caller must grow and retry it.
    """
    cap = nat.shape[0]
    tcap = keys.shape[0]
    tol2 = tol * tol
    d = _pair_dist(code, nd, nat, i, j)
    K = np.int64(math.floor(d / res))
    if K * res >= d:
        K -= 1
    if K <= 0:
        return n, entries, PASS_DONE
    if n + K > max_points:
        return n, entries, PASS_HIT_LIMIT
    if n + K > cap:
        return n, entries, PASS_GROW_POINTS
    if tol > 0.0 and (entries + K) * 5 > tcap * 3:
        return n, entries, PASS_GROW_TABLE

    # hoist the geodesic data for this pair
    vertical = False
    mC = 0.0
    R = 0.0
    sa = 0.0
    sb = 0.0
    la = 0.0
    lb = 0.0
    x0 = 0.0
    if code != 0:
        xa = nat[i, 0]
        ya = nat[i, 1]
        xb = nat[j, 0]
        yb = nat[j, 1]
        scale = max(1.0, abs(xa), abs(xb))
        if abs(xb - xa) <= 1e-8 * scale:
            vertical = True
            x0 = xa
            la = math.log(ya)
            lb = math.log(yb)
        else:
            mC = (xb * xb + yb * yb - xa * xa - ya * ya) / (2.0 * (xb - xa))
            R = math.sqrt((xa - mC) * (xa - mC) + ya * ya)
            # log form of atanh((x-mC)/R), stable out to |x-mC| ~ R
            dxa = xa - mC
            dxb = xb - mC
            if dxa >= 0.0:
                sa = math.log((R + dxa) / ya)
            else:
                sa = -math.log((R - dxa) / ya)
            if dxb >= 0.0:
                sb = math.log((R + dxb) / yb)
            else:
                sb = -math.log((R - dxb) / yb)
            if sa > _S_CLIP:
                sa = _S_CLIP
            elif sa < -_S_CLIP:
                sa = -_S_CLIP
            if sb > _S_CLIP:
                sb = _S_CLIP
            elif sb < -_S_CLIP:
                sb = -_S_CLIP
    for k in range(1, K + 1):
        t = k * res / d
        w0 = 0.0
        w1 = 0.0
        w2 = 0.0
        w3 = 0.0
        u0 = 0.0
        u1 = 0.0
        u2 = 0.0
        u3 = 0.0
        if code == 0:
            w0 = (1.0 - t) * nat[i, 0] + t * nat[j, 0]
            u0 = w0
            if nd > 1:
                w1 = (1.0 - t) * nat[i, 1] + t * nat[j, 1]
                u1 = w1
            if nd > 2:
                w2 = (1.0 - t) * nat[i, 2] + t * nat[j, 2]
                u2 = w2
            if nd > 3:
                w3 = (1.0 - t) * nat[i, 3] + t * nat[j, 3]
                u3 = w3
        else:
            if vertical:
                w0 = x0
                ls = (1.0 - t) * la + t * lb
                w1 = math.exp(ls)
                u1 = ls
            else:
                s = (1.0 - t) * sa + t * sb
                w0 = mC + R * math.tanh(s)
                w1 = R / math.cosh(s)
                u1 = math.log(w1)
            u0 = w0
            if code == 2:
                w2 = (1.0 - t) * nat[i, 2] + t * nat[j, 2]
                u2 = w2
        if tol > 0.0 and _covered(code, nd, m, nat, cha, keys, vals, nxt, inv,
                                  w0, w1, w2, w3, u0, u1, u2, u3, tol, tol2):
            continue
        nat[n, 0] = w0
        cha[n, 0] = u0
        if nd > 1:
            nat[n, 1] = w1
        if m > 1:
            cha[n, 1] = u1
        if nd > 2:
            nat[n, 2] = w2
        if m > 2:
            cha[n, 2] = u2
        if nd > 3:
            nat[n, 3] = w3
        if m > 3:
            cha[n, 3] = u3
        par[n, 0] = i
        par[n, 1] = j
        if tol > 0.0:
            c0 = np.int64(math.floor(u0 * inv))
            c1 = np.int64(math.floor(u1 * inv)) if m > 1 else np.int64(0)
            c2 = np.int64(math.floor(u2 * inv)) if m > 2 else np.int64(0)
            c3 = np.int64(math.floor(u3 * inv)) if m > 3 else np.int64(0)
            entries += _insert_grid(keys, vals, nxt, _key_of(c0, c1, c2, c3), n)
        n += 1
    return n, entries, PASS_DONE


@njit(cache=True)
def run_pass(code, nd, m, nat, cha, nxt, par, keys, vals, state,
             size, prev, res, tol, inv, max_points):
    """Process pairs (i, j) with i < size, j in [max(prev, i+1), size).

    Resumable: position and counters live in state; on a grow/limit return
    the offending pair has written nothing and is retried after resize.
    """
    n = state[S_COUNT]
    entries = state[S_ENTRIES]
    i = state[S_ROW]
    j_resume = state[S_COL]
    while i < size:
        j = j_resume if j_resume >= 0 else max(prev, i + 1)
        j_resume = -1
        while j < size:
            n, entries, rc = _do_pair(code, nd, m, nat, cha, nxt, par, keys,
                                      vals, i, j, res, tol, inv, max_points,
                                      n, entries)
            if rc != PASS_DONE:
                state[S_COUNT] = n
                state[S_ENTRIES] = entries
                state[S_ROW] = i
                state[S_COL] = j
                return rc
            j += 1
        i += 1
    state[S_COUNT] = n
    state[S_ENTRIES] = entries
    state[S_ROW] = i
    state[S_COL] = -1
    return PASS_DONE


@njit(cache=True)
def run_drop(code, nd, m, nat, cha, nxt, par, keys, vals, state,
             size, res, tol, inv, max_points):
    """Process segments (0, j) for j in [1, size): drops from one apex."""
    n = state[S_COUNT]
    entries = state[S_ENTRIES]
    j = state[S_COL] if state[S_COL] >= 1 else 1
    while j < size:
        n, entries, rc = _do_pair(code, nd, m, nat, cha, nxt, par, keys,
                                  vals, 0, j, res, tol, inv, max_points,
                                  n, entries)
        if rc != PASS_DONE:
            state[S_COUNT] = n
            state[S_ENTRIES] = entries
            state[S_COL] = j
            return rc
        j += 1
    state[S_COUNT] = n
    state[S_ENTRIES] = entries
    state[S_COL] = j
    return PASS_DONE
