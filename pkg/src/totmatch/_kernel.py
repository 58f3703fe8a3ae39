"""JIT-compiled inner search for the full-mode subdeterminant engine.

The heavy loop — for each surviving row subset, branch over candidate
columns with incremental fraction-free elimination — is compiled with
numba when available.  All bookkeeping uses int64 bitmasks (element
counts are capped well below 63), and every intermediate elimination
value is itself a subdeterminant of the 0/1 constraint matrix, so it
stays far inside int64 range; an overflow sentinel guards the claim.

When numba is missing, ``search_row_masks`` is None and callers use the
pure-Python search instead.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

# DFS outcome status codes.
STATUS_EXHAUSTED = 0
STATUS_EARLY_EXIT = 1
STATUS_OVERFLOW = 2

_OVERFLOW_LIMIT = 1 << 40


def _search_impl(masks, inc, mat, unc_prop, col_prop, bic_prop,
                 init_best, threshold):
    """Exact max |det| over (row subset, column subset) pairs.

    masks     int64[:]  surviving row masks, in search order
    inc       int64[:]  per-element incidence bitmask (self included)
    mat       int64[:,:] the full constraint matrix
    unc_prop  int64[:]  per element a, elements forced uncolored when a
                        is uncolored (degree-2 run implications)
    col_prop  int64[:]  per element b, elements forced colored when b
                        is colored (the contrapositive direction)
    bic_prop  int64[:]  per chain element b, elements forced cyan when
                        b and both its neighbours are red and b is also
                        picked as a column
    init_best int64     baseline value (1 = empty witness)
    threshold int64     early-exit bound, or -1 for none

    Returns (best, best_rmask, best_cmask, status).  Pruning discards
    only configurations that cannot be minimal witnesses (row/column
    support >= 2, fault pairs, chain classes) or cannot strictly beat
    the incumbent (Hadamard bound), so the maximum over minimal
    witnesses — which is the true maximum — is preserved.
    """
    n_elem = inc.shape[0]
    best = init_best
    best_r = np.int64(0)
    best_c = np.int64(0)

    rows = np.empty(n_elem, np.int64)
    cand = np.empty(n_elem, np.int64)
    idx_of = np.empty(n_elem, np.int64)
    impl = np.empty(n_elem, np.int64)
    colv = np.empty((n_elem, n_elem), np.int64)
    colbit = np.empty(n_elem, np.int64)
    norms = np.empty(n_elem, np.float64)
    conf = np.empty(n_elem, np.int64)
    suf_any = np.empty(n_elem + 1, np.int64)
    suf_two = np.empty(n_elem + 1, np.int64)

    red = np.empty((n_elem, n_elem), np.int64)
    pivrow = np.empty(n_elem, np.int64)
    pivval = np.empty(n_elem, np.int64)
    chosen = np.empty(n_elem, np.int64)
    jptr = np.empty(n_elem + 1, np.int64)
    chosenm = np.empty(n_elem + 1, np.int64)
    fstk = np.empty(n_elem + 1, np.int64)
    banned = np.empty(n_elem + 1, np.int64)
    cnt0s = np.empty(n_elem + 1, np.int64)
    cnt1s = np.empty(n_elem + 1, np.int64)
    normp = np.empty(n_elem + 1, np.float64)
    usedrows = np.empty(n_elem + 1, np.int64)

    for mi in range(masks.shape[0]):
        rmask = masks[mi]

        k = 0
        for v in range(n_elem):
            if (rmask >> v) & 1:
                rows[k] = v
                k += 1
        if k == 0:
            continue

        # Columns incident to at least two selected rows; a column of a
        # minimal witness has >= 2 ones.
        cm = np.int64(0)
        for c in range(n_elem):
            x = inc[c] & rmask
            x -= (x >> 1) & 0x5555555555555555
            x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
            x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
            if (x * 0x0101010101010101) >> 56 >= 2:
                cm |= np.int64(1) << c

        fullelems = (np.int64(1) << n_elem) - 1

        # Degree-2 run implications. Row elements are colored; their
        # colored-closure outside the row set is forced into the column
        # set. Elements that are neither rows nor column candidates are
        # uncolored; their uncolored-closure is banned from the column
        # set, which can strip more candidates, so iterate to fixpoint.
        col = rmask
        frontier = rmask
        while frontier != 0:
            nxt = np.int64(0)
            t = frontier
            i = 0
            while t != 0:
                if t & 1:
                    nxt |= col_prop[i]
                t >>= 1
                i += 1
            frontier = nxt & ~col
            col |= frontier
        ok = True
        unc = np.int64(0)
        while True:
            frontier = fullelems & ~(rmask | cm) & ~unc
            if frontier == 0:
                break
            while frontier != 0:
                unc |= frontier
                nxt = np.int64(0)
                t = frontier
                i = 0
                while t != 0:
                    if t & 1:
                        nxt |= unc_prop[i]
                    t >>= 1
                    i += 1
                frontier = nxt & ~unc
            cm &= ~unc
        if (unc & col) != 0:
            continue
        forced_elems = col & ~rmask
        if (forced_elems & ~cm) != 0:
            continue

        nc = 0
        fmask = np.int64(0)
        for c in range(n_elem):
            if (cm >> c) & 1:
                if (forced_elems >> c) & 1:
                    fmask |= np.int64(1) << nc
                idx_of[c] = nc
                cand[nc] = c
                nc += 1
        if nc < k:
            continue
        x = forced_elems
        x -= (x >> 1) & 0x5555555555555555
        x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
        x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
        if (x * 0x0101010101010101) >> 56 > k:
            continue

        # Each selected row must itself have >= 2 candidate columns.
        ok = True
        for ii in range(k):
            x = inc[rows[ii]] & cm
            x -= (x >> 1) & 0x5555555555555555
            x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
            x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
            if (x * 0x0101010101010101) >> 56 < 2:
                ok = False
                break
        if not ok:
            continue

        # Row fault pairs: containment with <= 1 extra entry over the
        # candidate columns kills the row set outright.
        for ii in range(k):
            a = inc[rows[ii]] & cm
            for jj in range(ii + 1, k):
                b = inc[rows[jj]] & cm
                d_ab = a & ~b
                d_ba = b & ~a
                if d_ab == 0:
                    x = d_ba
                elif d_ba == 0:
                    x = d_ab
                else:
                    continue
                x -= (x >> 1) & 0x5555555555555555
                x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
                x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
                if (x * 0x0101010101010101) >> 56 <= 1:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue

        # Candidate column vectors over the selected rows.
        maxnorm = 0.0
        for j in range(nc):
            c = cand[j]
            s = 0
            bits = np.int64(0)
            for ii in range(k):
                val = mat[rows[ii], c]
                colv[j, ii] = val
                if val != 0:
                    s += 1
                    bits |= np.int64(1) << ii
            colbit[j] = bits
            norms[j] = np.sqrt(np.float64(s))
            if norms[j] > maxnorm:
                maxnorm = norms[j]

        # Column fault pairs -> mutual-exclusion masks.
        for j in range(nc):
            conf[j] = 0
        for j1 in range(nc):
            b1 = colbit[j1]
            for j2 in range(j1 + 1, nc):
                b2 = colbit[j2]
                d_ab = b1 & ~b2
                d_ba = b2 & ~b1
                if d_ab == 0:
                    x = d_ba
                elif d_ba == 0:
                    x = d_ab
                else:
                    continue
                x -= (x >> 1) & 0x5555555555555555
                x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
                x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
                if (x * 0x0101010101010101) >> 56 <= 1:
                    conf[j1] |= np.int64(1) << j2
                    conf[j2] |= np.int64(1) << j1

        # suf_any[j] / suf_two[j]: rows hit >= 1 / >= 2 times by
        # candidate columns j..nc-1.
        suf_any[nc] = 0
        suf_two[nc] = 0
        for j in range(nc - 1, -1, -1):
            b = colbit[j]
            suf_two[j] = suf_two[j + 1] | (suf_any[j + 1] & b)
            suf_any[j] = suf_any[j + 1] | b

        # Same-color-triple rule: picking a red chain element as a column
        # while both its neighbours are red forces four nearby elements
        # into the column set as well (or is impossible outright).
        banned0 = np.int64(0)
        for j in range(nc):
            impl[j] = 0
            ce = cand[j]
            bp = bic_prop[ce]
            if bp != 0 and ((rmask >> ce) & 1) != 0:
                if (inc[ce] & ~(np.int64(1) << ce) & ~rmask) == 0:
                    if bp & ~cm:
                        banned0 |= np.int64(1) << j
                    else:
                        m2 = np.int64(0)
                        t = bp
                        i2 = 0
                        while t != 0:
                            if t & 1:
                                m2 |= np.int64(1) << idx_of[i2]
                            t >>= 1
                            i2 += 1
                        impl[j] = m2 & ~(np.int64(1) << j)

        fullrows = (np.int64(1) << k) - 1

        d = 0
        jptr[0] = 0
        chosenm[0] = 0
        fstk[0] = fmask
        banned[0] = banned0
        cnt0s[0] = fullrows
        cnt1s[0] = 0
        normp[0] = 1.0
        usedrows[0] = 0

        while d >= 0:
            j = jptr[d]
            need = k - d
            if j > nc - need:
                d -= 1
                continue
            # A forced column that the ascending scan has already passed
            # can never be picked in this subtree.
            if fstk[d] & ~chosenm[d] & ((np.int64(1) << j) - 1):
                d -= 1
                continue
            c0 = cnt0s[d]
            c1 = cnt1s[d]
            # Suffix support: rows still short of two hits must be
            # servable by the remaining candidates.
            if (c0 & ~suf_two[j]) != 0 or (c1 & ~suf_any[j]) != 0:
                d -= 1
                continue
            jptr[d] = j + 1
            if (banned[d] >> j) & 1:
                continue
            npd = normp[d] * norms[j]
            if npd * maxnorm ** (need - 1) < np.float64(best + 1):
                continue
            b = colbit[j]
            nc0 = c0 & ~b
            nc1 = (c1 & ~b) | (c0 & b)
            if (nc0 & ~suf_two[j + 1]) != 0 or (nc1 & ~suf_any[j + 1]) != 0:
                continue

            # Close the forced-column set under the same-color-triple
            # implications of this pick.
            nf = fstk[d]
            if impl[j] != 0:
                nf |= impl[j]
                while True:
                    add = np.int64(0)
                    t = nf
                    i2 = 0
                    while t != 0:
                        if t & 1:
                            add |= impl[i2]
                        t >>= 1
                        i2 += 1
                    if (add & ~nf) == 0:
                        break
                    nf |= add
            nban = banned[d] | conf[j]
            if (nf & nban) != 0:
                continue
            rem = nf & ~(chosenm[d] | (np.int64(1) << j))
            rem -= (rem >> 1) & 0x5555555555555555
            rem = (rem & 0x3333333333333333) + ((rem >> 2) & 0x3333333333333333)
            rem = (rem + (rem >> 4)) & 0x0F0F0F0F0F0F0F0F
            if (rem * 0x0101010101010101) >> 56 > need - 1:
                continue

            # Fraction-free reduction of column j against prior pivots.
            for ii in range(k):
                red[d, ii] = colv[j, ii]
            dependent = False
            for t in range(d):
                pr = pivrow[t]
                pv = pivval[t]
                cpr = red[d, pr]
                prev = pivval[t - 1] if t > 0 else np.int64(1)
                um = usedrows[t + 1]
                for ii in range(k):
                    if (um >> ii) & 1:
                        continue
                    val = (pv * red[d, ii] - red[t, ii] * cpr) // prev
                    if val > _OVERFLOW_LIMIT or val < -_OVERFLOW_LIMIT:
                        return best, best_r, best_c, STATUS_OVERFLOW
                    red[d, ii] = val
            pr = -1
            um = usedrows[d]
            for ii in range(k):
                if not (um >> ii) & 1 and red[d, ii] != 0:
                    pr = ii
                    break
            if pr < 0:
                continue
            pv = red[d, pr]

            if d == k - 1:
                val = pv if pv >= 0 else -pv
                if val > best:
                    best = val
                    best_r = rmask
                    cmask = np.int64(0)
                    for t in range(d):
                        cmask |= np.int64(1) << cand[chosen[t]]
                    cmask |= np.int64(1) << cand[j]
                    best_c = cmask
                    if threshold >= 0 and val > threshold:
                        return best, best_r, best_c, STATUS_EARLY_EXIT
                continue

            pivrow[d] = pr
            pivval[d] = pv
            chosen[d] = j
            chosenm[d + 1] = chosenm[d] | (np.int64(1) << j)
            fstk[d + 1] = nf
            usedrows[d + 1] = um | (np.int64(1) << pr)
            banned[d + 1] = nban
            cnt0s[d + 1] = nc0
            cnt1s[d + 1] = nc1
            normp[d + 1] = npd
            d += 1
            jptr[d] = j + 1

    return best, best_r, best_c, STATUS_EXHAUSTED


def _enum_impl(incp, orig_bits, out):
    """Enumerate row masks that can carry a support-valid witness.

    Elements are decided one by one in a bandwidth-reduced order; incp
    holds incidence masks in that order, orig_bits the original bit of
    each position. A partial decision fails as soon as some selected,
    decided element can no longer see two columns that might reach two
    selected incident elements. Emits masks (in original bit positions)
    into out; returns the count, or -1 if out is too small.
    """
    n = incp.shape[0]
    lb = np.zeros(n, np.int64)      # selected decided incidences per column
    ud = np.empty(n, np.int64)      # undecided incidences per column
    cand_ub = np.zeros(n, np.int64)  # possibly-candidate columns per row
    sel = np.zeros(n, np.int64)
    alive = np.ones(n, np.int64)    # column may still reach two incidences
    trystate = np.zeros(n + 1, np.int64)

    for c in range(n):
        x = incp[c]
        x -= (x >> 1) & 0x5555555555555555
        x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
        x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
        ud[c] = (x * 0x0101010101010101) >> 56
    alive_cnt = 0
    for c in range(n):
        if ud[c] < 2:
            alive[c] = 0
        else:
            alive_cnt += 1
    for r in range(n):
        t = incp[r]
        i = 0
        while t != 0:
            if t & 1 and alive[i] == 1:
                cand_ub[r] += 1
            t >>= 1
            i += 1

    viol = 0
    selcnt = 0
    cur = np.int64(0)
    cnt = 0
    p = 0
    trystate[0] = 0
    while p >= 0:
        if p == n:
            if selcnt >= 1 and alive_cnt >= selcnt:
                if cnt >= out.shape[0]:
                    return -1
                out[cnt] = cur
                cnt += 1
            p -= 1
            continue
        ts = trystate[p]
        if ts == 0:
            d1, d2 = _apply_undo(incp, lb, ud, cand_ub, sel, alive, p, 1, 1)
            viol += d1
            alive_cnt += d2
            selcnt += 1
            cur |= orig_bits[p]
            trystate[p] = 1
        elif ts == 1:
            d1, d2 = _apply_undo(incp, lb, ud, cand_ub, sel, alive, p, 1, -1)
            viol += d1
            alive_cnt += d2
            selcnt -= 1
            cur &= ~orig_bits[p]
            d1, d2 = _apply_undo(incp, lb, ud, cand_ub, sel, alive, p, 0, 1)
            viol += d1
            alive_cnt += d2
            trystate[p] = 2
        else:
            d1, d2 = _apply_undo(incp, lb, ud, cand_ub, sel, alive, p, 0, -1)
            viol += d1
            alive_cnt += d2
            trystate[p] = 0
            p -= 1
            continue
        if viol == 0 and alive_cnt >= selcnt:
            p += 1
            trystate[p] = 0
    return cnt


def _apply_undo_impl(incp, lb, ud, cand_ub, sel, alive, p, val, sign):
    """Apply (sign=+1) or revert (sign=-1) deciding position p to val.

    Returns (viol delta, alive count delta). A column dies when its
    selected + undecided incidences drop below two; rows watching it
    lose a potential candidate, and a selected decided row with fewer
    than two potential candidates is a violation.
    """
    dviol = 0
    dalive = 0
    if sign > 0:
        sel[p] = val
        t = incp[p]
        c = 0
        while t != 0:
            if t & 1:
                ud[c] -= 1
                lb[c] += val
                if alive[c] == 1 and lb[c] + ud[c] < 2:
                    alive[c] = 0
                    dalive -= 1
                    t2 = incp[c]
                    r = 0
                    while t2 != 0:
                        if t2 & 1:
                            cand_ub[r] -= 1
                            if cand_ub[r] == 1 and sel[r] == 1 and r <= p:
                                dviol += 1
                        t2 >>= 1
                        r += 1
            t >>= 1
            c += 1
        if val == 1 and cand_ub[p] < 2:
            dviol += 1
    else:
        if val == 1 and cand_ub[p] < 2:
            dviol -= 1
        t = incp[p]
        c = 0
        while t != 0:
            if t & 1:
                was_dead_by_this = (alive[c] == 0 and lb[c] + ud[c] == 1 + val)
                ud[c] += 1
                lb[c] -= val
                if was_dead_by_this and lb[c] + ud[c] >= 2:
                    alive[c] = 1
                    dalive += 1
                    t2 = incp[c]
                    r = 0
                    while t2 != 0:
                        if t2 & 1:
                            cand_ub[r] += 1
                            if cand_ub[r] == 2 and sel[r] == 1 and r <= p:
                                dviol -= 1
                        t2 >>= 1
                        r += 1
            t >>= 1
            c += 1
        sel[p] = 0
    return dviol, dalive


if njit is not None:
    _apply_undo = njit(cache=True)(_apply_undo_impl)
    search_row_masks = njit(cache=True)(_search_impl)
    enum_row_masks = njit(cache=True)(_enum_impl)
else:  # pragma: no cover
    _apply_undo = None
    search_row_masks = None
    enum_row_masks = None
