"""Exact maximum-subdeterminant search over the constraint matrix M(G).

Three modes:

* full       -- max |det| over all square submatrices of M(G);
* principal  -- max |det| over principal submatrices M[S, S] (equals the
                full maximum on forests, where optimal witnesses have no
                monochromatic element);
* forced     -- max |det| over submatrices whose row and column sets both
                contain a required element set.

The full-mode search enumerates row subsets with a vectorized prefilter and
then runs a branch-and-bound over column subsets with incremental
fraction-free elimination; optimal submatrices of value >= 2 can always be
reduced to ones in which every row and column of the submatrix carries at
least two ones, which is the default pruning rule. Pruning never changes
the returned value; `prune=False` disables it for verification runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ._kernel import (STATUS_EARLY_EXIT, STATUS_OVERFLOW, enum_row_masks,
                      search_row_masks)
from .errors import InputError, SizeCapError
from .graphs import Element, Graph, components
from .matrices import constraint_matrix, det_bareiss, extract

DEFAULT_FULL_CAP = 14
DEFAULT_PRINCIPAL_CAP = 22

_CHUNK_BITS = 20


@dataclass(frozen=True)
class ElementColoring:
    """Witness encoding: red elements index rows, cyan elements columns."""

    red: tuple[Element, ...]
    cyan: tuple[Element, ...]

    def __post_init__(self):
        if len(self.red) != len(self.cyan):
            raise InputError("witness needs equally many red and cyan elements")

    @property
    def bichromatic(self) -> frozenset[Element]:
        return frozenset(self.red) & frozenset(self.cyan)

    @property
    def monochromatic(self) -> frozenset[Element]:
        return frozenset(self.red) ^ frozenset(self.cyan)


@dataclass(frozen=True)
class SubdetResult:
    value: int
    witness: ElementColoring
    mode: str  # "full", "principal" or "forced"
    exhaustive: bool = True  # False when an early-exit threshold fired


def format_coloring(c: ElementColoring) -> str:
    red = " ".join(str(e) for e in c.red)
    cyan = " ".join(str(e) for e in c.cyan)
    return f"red: {red} / cyan: {cyan}"


def witness_determinant(g: Graph, c: ElementColoring) -> int:
    """|det| of the submatrix of M(g) selected by the coloring."""
    m = constraint_matrix(g)
    index = {lbl: i for i, lbl in enumerate(m.row_labels)}
    rows = [index[e] for e in c.red]
    cols = [index[e] for e in c.cyan]
    return abs(det_bareiss(extract(m, rows, cols).to_lists()))


def verify_result(g: Graph, r: SubdetResult) -> bool:
    return witness_determinant(g, r.witness) == r.value


# ---------------------------------------------------------------------------
# Shared machinery


def _incidence_bits(g: Graph) -> list[int]:
    """Per element (vertices then edges), the bitmask of incident elements,
    self included. These are the rows/columns of M(G) as bitmasks."""
    n = g.n
    inc = [1 << i for i in range(g.num_elements)]
    for i, (u, v, _w) in enumerate(g.edges):
        e = n + i
        inc[u - 1] |= 1 << e
        inc[v - 1] |= 1 << e
        inc[e] |= (1 << (u - 1)) | (1 << (v - 1))
    return inc


def _bits_of(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def _coloring_from_masks(g: Graph, rmask: int, cmask: int) -> ElementColoring:
    labels = g.elements()
    return ElementColoring(
        red=tuple(labels[i] for i in _bits_of(rmask)),
        cyan=tuple(labels[i] for i in _bits_of(cmask)))


def _empty_result(g: Graph, mode: str) -> SubdetResult:
    # The 0x0 submatrix has determinant 1; it is the baseline witness.
    return SubdetResult(value=1, witness=ElementColoring((), ()), mode=mode)


def _is_forest(g: Graph) -> bool:
    return g.m == g.n - len(components(g)) if g.n else g.m == 0


class _EarlyExit(Exception):
    def __init__(self, value: int, rmask: int, cmask: int):
        self.value = value
        self.rmask = rmask
        self.cmask = cmask


# ---------------------------------------------------------------------------
# Full mode


def max_subdet_brute(g: Graph,
                     early_exit: Optional[int] = None,
                     cap: int = DEFAULT_FULL_CAP,
                     prune: bool = True) -> SubdetResult:
    """Exact maximum |det| over all square submatrices of M(g).

    With `early_exit` set, the search may stop at the first submatrix whose
    |det| exceeds that threshold; the result is then flagged non-exhaustive
    (sufficient for a "greater than bound" report). Instances with more than
    `cap` elements are rejected unless early_exit is given.

    `prune=False` disables the minimal-witness support pruning; values are
    identical, only the visited-witness set (and hence runtime) changes.
    """
    size = g.num_elements
    if early_exit is None and size > cap:
        raise SizeCapError(f"graph has {size} elements, full-mode cap is {cap}",
                           size=size, cap=cap)
    if size == 0:
        return _empty_result(g, "full")

    inc = _incidence_bits(g)
    mat = _matrix_rows(g, inc)
    if prune and search_row_masks is not None:
        fast = _brute_compiled(g, inc, mat, early_exit)
        if fast is not None:
            return fast
    best_value = 1
    best_rmask = 0
    best_cmask = 0
    try:
        for rmask, candmask in _row_subsets(inc, size, prune):
            found = _best_over_columns(
                mat, inc, rmask, candmask, best_value,
                prune=prune, early_exit=early_exit, forced_cols=0)
            if found is not None and found[0] > best_value:
                best_value, best_rmask, best_cmask = found
    except _EarlyExit as stop:
        return SubdetResult(
            value=stop.value,
            witness=_coloring_from_masks(g, stop.rmask, stop.cmask),
            mode="full", exhaustive=False)
    return SubdetResult(value=best_value,
                        witness=_coloring_from_masks(g, best_rmask, best_cmask),
                        mode="full")


def _matrix_rows(g: Graph, inc: list[int]) -> list[list[int]]:
    size = g.num_elements
    return [[(inc[r] >> c) & 1 for c in range(size)] for r in range(size)]


def _chain_implications(inc: list[int]) -> tuple[list[int], list[int]]:
    """Coloring implications along induced degree-2 runs.

    Call an element a chain element when it has exactly two incident
    elements besides itself. For incident elements a, b where both b and
    the neighbour of b opposite a are chain elements, a minimal witness
    satisfies: a uncolored implies b uncolored (else the two columns --
    or rows -- for b and its far neighbour form a fault). Returned as
    masks: unc_prop[a] collects such b, col_prop[b] the contrapositive
    targets a (b colored implies a colored)."""
    size = len(inc)
    nbrs = [_bits_of(inc[i] & ~(1 << i)) for i in range(size)]
    chain = [len(nb) == 2 for nb in nbrs]
    unc_prop = [0] * size
    col_prop = [0] * size
    for b in range(size):
        if not chain[b]:
            continue
        for a in nbrs[b]:
            c = nbrs[b][1] if nbrs[b][0] == a else nbrs[b][0]
            if chain[c]:
                unc_prop[a] |= 1 << b
                col_prop[b] |= 1 << a
    return unc_prop, col_prop


def _bicolor_implications(inc: list[int]) -> list[int]:
    """Same-color-triple implications for chain elements.

    For a run x0 x1 x2 x3 x4 whose middle three are chain elements, a
    minimal witness in which x1, x2, x3 are all red and x2 is also cyan
    must color x0, x1, x3, x4 cyan (else two red rows form a fault).
    bic_prop[x2] holds the mask {x0, x1, x3, x4}; it applies only when
    x2's two neighbours are both red, which the search checks per row
    set."""
    size = len(inc)
    nbrs = [_bits_of(inc[i] & ~(1 << i)) for i in range(size)]
    chain = [len(nb) == 2 for nb in nbrs]
    bic_prop = [0] * size
    for b in range(size):
        if not chain[b]:
            continue
        a, c = nbrs[b]
        if not (chain[a] and chain[c]):
            continue
        x0 = nbrs[a][1] if nbrs[a][0] == b else nbrs[a][0]
        x4 = nbrs[c][1] if nbrs[c][0] == b else nbrs[c][0]
        bic_prop[b] = (1 << a) | (1 << c) | (1 << x0) | (1 << x4)
    return bic_prop


def _enum_surviving_masks(inc: list[int], size: int) -> Optional[np.ndarray]:
    """Row masks that can carry a support-valid witness, via pruned
    depth-first enumeration over elements in breadth-first order (small
    incidence bandwidth makes the pruning bite early). Returns None when
    the output buffer overflows; the caller then uses the chunked scan."""
    order: list[int] = []
    seen = [False] * size
    for start in range(size):
        if seen[start]:
            continue
        seen[start] = True
        queue = [start]
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in _bits_of(inc[x] & ~(1 << x)):
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    pos = {x: i for i, x in enumerate(order)}
    incp = np.zeros(size, dtype=np.int64)
    for x in range(size):
        m = 0
        for y in _bits_of(inc[x]):
            m |= 1 << pos[y]
        incp[pos[x]] = m
    orig_bits = np.array([1 << x for x in order], dtype=np.int64)
    out = np.empty(1 << min(size, 23), dtype=np.int64)
    cnt = enum_row_masks(incp, orig_bits, out)
    if cnt < 0:
        return None
    masks = out[:cnt]
    return masks[np.lexsort((masks, np.bitwise_count(masks.astype(np.uint64))))]


def _brute_compiled(g: Graph, inc: list[int], mat: list[list[int]],
                    early_exit: Optional[int]) -> Optional[SubdetResult]:
    """Run the full-mode search through the compiled kernel.

    Returns None on the (theoretical) int64-overflow sentinel, in which
    case the caller falls back to the arbitrary-precision search."""
    size = g.num_elements
    masks = _enum_surviving_masks(inc, size)
    if masks is None:
        masks, _cands = _collect_row_masks(inc, size, prune=True)
    inc_np = np.array(inc, dtype=np.int64)
    mat_np = np.array(mat, dtype=np.int64)
    unc_prop, col_prop = _chain_implications(inc)
    bic_prop = _bicolor_implications(inc)
    threshold = np.int64(-1 if early_exit is None else early_exit)
    best, rmask, cmask, status = search_row_masks(
        masks.astype(np.int64), inc_np, mat_np,
        np.array(unc_prop, dtype=np.int64),
        np.array(col_prop, dtype=np.int64),
        np.array(bic_prop, dtype=np.int64),
        np.int64(1), threshold)
    if status == STATUS_OVERFLOW:
        return None
    return SubdetResult(
        value=int(best),
        witness=_coloring_from_masks(g, int(rmask), int(cmask)),
        mode="full",
        exhaustive=(status != STATUS_EARLY_EXIT))


def _row_subsets(inc: list[int], size: int, prune: bool):
    """Yield (row mask, candidate column mask) pairs ordered by subset size
    then by mask value.

    With pruning on, a row mask R is kept only if it can carry a witness in
    which every row and column of the submatrix has at least two ones and no
    two rows form a fault: candidate columns C* = {c : |inc(c) & R| >= 2}
    must number at least |R|, every row of R must meet C* twice, and no row
    pair of R may satisfy containment-with-difference-at-most-one over C*
    (such a pair is a fault for every column choice)."""
    masks, cands = _collect_row_masks(inc, size, prune)
    for rmask, cmask in zip(masks.tolist(), cands.tolist()):
        if rmask:
            yield rmask, cmask


def _collect_row_masks(inc: list[int], size: int, prune: bool):
    """Surviving row masks (and their candidate column masks), as numpy
    arrays sorted by subset size then mask value."""
    total = 1 << size
    if size > 32:
        raise SizeCapError("full-mode search limited to 32 elements", size=size)
    inc_arr = [np.uint64(m) for m in inc]
    keep_masks = []
    keep_cands = []
    for start in range(0, total, 1 << _CHUNK_BITS):
        stop = min(total, start + (1 << _CHUNK_BITS))
        chunk = np.arange(start, stop, dtype=np.uint64)
        if not prune:
            keep_masks.append(chunk)
            keep_cands.append(np.full(chunk.shape, np.uint64(total - 1)))
            continue
        cand = np.zeros(chunk.shape, dtype=np.uint64)
        for c in range(size):
            sup = np.bitwise_count(chunk & inc_arr[c])
            cand |= (sup >= 2).astype(np.uint64) << np.uint64(c)
        k = np.bitwise_count(chunk)
        ok = (np.bitwise_count(cand) >= k) & (k > 0)
        for r in range(size):
            sel = ((chunk >> np.uint64(r)) & np.uint64(1)).astype(bool)
            if not sel.any():
                continue
            rowsup = np.bitwise_count(cand & inc_arr[r])
            ok &= ~(sel & (rowsup < 2))
        masks = chunk[ok]
        cands = cand[ok]
        if masks.size:
            good = _fault_free_rows(inc_arr, size, masks, cands)
            masks = masks[good]
            cands = cands[good]
        keep_masks.append(masks)
        keep_cands.append(cands)
    masks = np.concatenate(keep_masks)
    cands = np.concatenate(keep_cands)
    order = np.lexsort((masks, np.bitwise_count(masks)))
    return masks[order], cands[order]


def _fault_free_rows(inc_arr, size, masks, cands):
    """Boolean filter: drop row sets containing a pair (r, s) whose
    candidate-restricted rows satisfy r <= s with |s \\ r| <= 1. Any column
    choice then yields a fault, which a minimal witness cannot have."""
    one = np.uint64(1)
    ok = np.ones(masks.shape, dtype=bool)
    sel = [((masks >> np.uint64(r)) & one).astype(bool) for r in range(size)]
    for r in range(size):
        if not sel[r].any():
            continue
        rrow = cands & inc_arr[r]
        for s in range(size):
            if s == r or not sel[s].any():
                continue
            both = sel[r] & sel[s]
            if not both.any():
                continue
            contained = (rrow & ~inc_arr[s]) == 0
            near = np.bitwise_count(cands & inc_arr[s] & ~inc_arr[r]) <= 1
            ok &= ~(both & contained & near)
    return ok


def _best_over_columns(mat: list[list[int]],
                       inc: list[int],
                       rmask: int,
                       candmask: int,
                       best_value: int,
                       prune: bool,
                       early_exit: Optional[int],
                       forced_cols: int):
    """Branch-and-bound over column subsets of the fixed row set.

    Maintains an incremental fraction-free elimination of the chosen
    columns; linearly dependent columns are never extended (their
    completions all have determinant 0). With pruning on, two further
    minimal-witness rules apply: a row with exactly two candidate ones
    forces both columns, and a column pair forming a fault is never chosen
    together. Returns (value, rmask, cmask) of the best strictly-improving
    submatrix, or None.
    """
    rows = _bits_of(rmask)
    k = len(rows)

    forced_set = forced_cols
    if prune:
        # Unit propagation: each row needs two ones among the chosen columns.
        for r in rows:
            avail = inc[r] & candmask
            c = avail.bit_count()
            if c < 2:
                return None
            if c == 2:
                forced_set |= avail
        if forced_set.bit_count() > k:
            return None

    forced = _bits_of(forced_set)
    cand = [c for c in _bits_of(candmask) if not (forced_set >> c) & 1]
    ncols = len(cand) + len(forced)
    if ncols < k:
        return None

    # Column vectors over the selected rows, as exact lists and as bitmasks
    # over row positions 0..k-1.
    colvecs: dict[int, list[int]] = {}
    colbits: dict[int, int] = {}
    for c in cand + forced:
        bits = 0
        vec = []
        for i, r in enumerate(rows):
            x = mat[r][c]
            vec.append(x)
            bits |= x << i
        colvecs[c] = vec
        colbits[c] = bits
    norms = {c: math.sqrt(colbits[c].bit_count()) or 1.0 for c in cand + forced}
    max_norm = max(norms.values())

    conflict: dict[int, int] = {}
    if prune:
        # Fault pairs among columns: if one candidate column contains another
        # (over the selected rows) with at most one extra entry, any witness
        # using both has a fault.
        all_cols = cand + forced
        for a in all_cols:
            cm = 0
            ba = colbits[a]
            for b in all_cols:
                if a == b:
                    continue
                bb = colbits[b]
                if (ba & ~bb) == 0 and (bb & ~ba).bit_count() <= 1:
                    cm |= 1 << b
                elif (bb & ~ba) == 0 and (ba & ~bb).bit_count() <= 1:
                    cm |= 1 << b
            conflict[a] = cm
        for c in forced:
            if conflict[c] & forced_set:
                return None

    # Suffix masks for support feasibility: rows reachable at least once /
    # twice from candidate positions idx..end.
    nc = len(cand)
    suffix_any = [0] * (nc + 1)
    suffix_two = [0] * (nc + 1)
    if prune:
        for idx in range(nc - 1, -1, -1):
            cb = colbits[cand[idx]]
            suffix_any[idx] = suffix_any[idx + 1] | cb
            suffix_two[idx] = suffix_two[idx + 1] | (suffix_any[idx + 1] & cb)

    pivots: list[tuple[int, list[int], int]] = []  # (pivot row, column, value)
    state = {"best": best_value, "rmask": 0, "cmask": 0, "found": False}

    def reduce_column(col: int) -> Optional[tuple[list[int], int]]:
        c = list(colvecs[col])
        done = bytearray(k)
        prev = 1
        for pr, u, pv in pivots:
            done[pr] = 1
            cpr = c[pr]
            for i in range(k):
                if not done[i]:
                    c[i] = (pv * c[i] - u[i] * cpr) // prev
            prev = pv
        pivot = next((i for i in range(k) if not done[i] and c[i] != 0), None)
        if pivot is None:
            return None
        return c, pivot

    def leaf(cmask: int, cnt0: int, cnt1: int) -> None:
        if prune and (cnt0 | cnt1):
            return
        value = abs(pivots[-1][2])
        if early_exit is not None and value > early_exit:
            raise _EarlyExit(value, rmask, cmask)
        if value > state["best"]:
            state.update(best=value, rmask=rmask, cmask=cmask, found=True)

    def dfs(depth: int, start: int, cmask: int, banned: int,
            cnt0: int, cnt1: int, norm_prod: float) -> None:
        if depth == k:
            leaf(cmask, cnt0, cnt1)
            return
        need = k - depth
        if prune and ((cnt1 & ~suffix_any[start]) or (cnt0 & ~suffix_two[start])):
            return
        for idx in range(start, nc - need + 1):
            col = cand[idx]
            if (banned >> col) & 1:
                continue
            vnorm = norms[col]
            # Hadamard-style bound; strict, so the maximum is unaffected.
            if norm_prod * vnorm * max_norm ** (need - 1) < state["best"]:
                continue
            red = reduce_column(col)
            if red is None:
                continue
            vec, pr = red
            pivots.append((pr, vec, vec[pr]))
            cb = colbits[col]
            dfs(depth + 1, idx + 1, cmask | (1 << col),
                banned | conflict.get(col, 0),
                cnt0 & ~cb, (cnt1 & ~cb) | (cnt0 & cb),
                norm_prod * vnorm)
            pivots.pop()

    cnt0 = (1 << k) - 1  # rows with no ones yet
    cnt1 = 0             # rows with exactly one
    base_cmask = 0
    base_banned = 0
    base_norm = 1.0
    for col in forced:
        red = reduce_column(col)
        if red is None:
            return None  # all completions are singular
        vec, pr = red
        pivots.append((pr, vec, vec[pr]))
        cb = colbits[col]
        cnt0, cnt1 = cnt0 & ~cb, (cnt1 & ~cb) | (cnt0 & cb)
        base_cmask |= 1 << col
        base_banned |= conflict.get(col, 0)
        base_norm *= norms[col]

    dfs(len(forced), 0, base_cmask, base_banned, cnt0, cnt1, base_norm)
    if state["found"]:
        return state["best"], state["rmask"], state["cmask"]
    return None


# ---------------------------------------------------------------------------
# Principal mode


def max_subdet_principal(g: Graph,
                         cap: int = DEFAULT_PRINCIPAL_CAP) -> SubdetResult:
    """Maximum |det| over principal submatrices M[S, S] of M(g).

    Requires a forest: there the overall maximum is attained principally
    (optimal witnesses have no monochromatic element), so this equals the
    full-mode value.
    """
    if not _is_forest(g):
        raise InputError("principal mode requires a forest")
    return _principal_search(g, cap, forced_mask=0, mode="principal")


def _principal_search(g: Graph, cap: int, forced_mask: int,
                      mode: str) -> SubdetResult:
    size = g.num_elements
    if size > cap:
        raise SizeCapError(
            f"graph has {size} elements, principal-mode cap is {cap}",
            size=size, cap=cap)
    if size == 0:
        return _empty_result(g, mode)
    inc = _incidence_bits(g)
    mnp = np.zeros((size, size), dtype=np.int64)
    for r in range(size):
        for c in _bits_of(inc[r]):
            mnp[r, c] = 1

    inc_arr = [np.uint64(m) for m in inc]
    forced_np = np.uint64(forced_mask)
    best_value = 1 if forced_mask == 0 else -1
    best_mask = 0
    total = 1 << size
    exact_fallback: list[int] = []
    for start in range(0, total, 1 << _CHUNK_BITS):
        stop = min(total, start + (1 << _CHUNK_BITS))
        chunk = np.arange(start, stop, dtype=np.uint64)
        ok = (chunk & forced_np) == forced_np
        ok &= chunk > 0
        for e in range(size):
            sel = ((chunk >> np.uint64(e)) & np.uint64(1)).astype(bool)
            if not sel.any():
                continue
            if (forced_mask >> e) & 1:
                continue  # forced elements may sit isolated in the witness
            sup = np.bitwise_count(chunk & inc_arr[e])
            ok &= ~(sel & (sup < 2))
        masks = chunk[ok]
        if masks.size == 0:
            continue
        sizes = np.bitwise_count(masks)
        order = np.lexsort((masks, sizes))
        masks = masks[order]
        sizes = sizes[order]
        for ksize in np.unique(sizes):
            group = masks[sizes == ksize]
            value, mask, bad = _principal_group_best(mnp, group, int(ksize))
            exact_fallback.extend(bad)
            if value > best_value:
                best_value, best_mask = value, int(mask)
    for mask in exact_fallback:
        idx = _bits_of(mask)
        value = abs(det_bareiss(
            [[int(mnp[r, c]) for c in idx] for r in idx]))
        if value > best_value:
            best_value, best_mask = value, mask

    if best_value < 0:
        raise InputError("forced element set admits no witness")
    witness = _coloring_from_masks(g, best_mask, best_mask)
    result = SubdetResult(value=best_value, witness=witness, mode=mode)
    # The winner came from a rounded float determinant: re-check exactly.
    idx = _bits_of(best_mask)
    exact = abs(det_bareiss([[int(mnp[r, c]) for c in idx] for r in idx]))
    if exact != best_value:
        raise AssertionError("float determinant verification failed")
    return result


def _principal_group_best(mnp: np.ndarray, group: np.ndarray, ksize: int):
    """Best |det| over the principal submatrices given by the masks in
    `group`, all of popcount `ksize`. Determinants are evaluated in floating
    point (magnitudes here stay far below 2^53); any candidate whose float
    value is suspiciously unrounded is returned for exact re-evaluation."""
    if ksize == 0:
        return 1, 0, []
    best = -1
    best_mask = 0
    bad: list[int] = []
    size = mnp.shape[0]
    bitcols = ((group[:, None] >> np.arange(size, dtype=np.uint64)) &
               np.uint64(1)).astype(bool)
    for lo in range(0, group.shape[0], 1 << 14):
        hi = min(group.shape[0], lo + (1 << 14))
        idx = np.nonzero(bitcols[lo:hi])[1].reshape(hi - lo, ksize)
        sub = mnp[idx[:, :, None], idx[:, None, :]].astype(np.float64)
        dets = np.abs(np.linalg.det(sub))
        rounded = np.rint(dets)
        suspect = np.abs(dets - rounded) > 0.25
        for i in np.nonzero(suspect)[0]:
            bad.append(int(group[lo + i]))
        rounded[suspect] = -1
        i = int(np.argmax(rounded))
        if rounded[i] > best:
            best = int(rounded[i])
            best_mask = int(group[lo + i])
    return best, best_mask, bad


# ---------------------------------------------------------------------------
# Forced mode


def max_subdet_forced(g: Graph,
                      forced: Sequence[Element],
                      cap: Optional[int] = None) -> SubdetResult:
    """Maximum |det| over submatrices whose rows and columns both contain
    all forced elements (forced elements are bicolored in the witness).

    With an empty forced set this is exactly the full-mode search. On
    forests the search is restricted to principal submatrices containing
    the forced set, mirroring the structure of unconstrained forest
    witnesses; elsewhere a full (unpruned) enumeration is used.
    """
    forced = tuple(forced)
    for e in forced:
        g.check_element(e)
    if not forced:
        res = max_subdet_brute(g, cap=cap if cap is not None else DEFAULT_FULL_CAP)
        return SubdetResult(res.value, res.witness, "forced", res.exhaustive)

    fmask = 0
    for e in forced:
        pos = e.index - 1 if e.kind == "v" else g.n + e.index - 1
        fmask |= 1 << pos

    if _is_forest(g):
        return _principal_search(
            g, cap if cap is not None else DEFAULT_PRINCIPAL_CAP,
            forced_mask=fmask, mode="forced")

    size = g.num_elements
    eff_cap = cap if cap is not None else DEFAULT_FULL_CAP
    if size > eff_cap:
        raise SizeCapError(
            f"graph has {size} elements, forced-mode cap is {eff_cap}",
            size=size, cap=eff_cap)
    inc = _incidence_bits(g)
    mat = _matrix_rows(g, inc)
    # Fallback witness: the forced set against itself (always square).
    best_value = witness_determinant(
        g, _coloring_from_masks(g, fmask, fmask))
    best_rmask = best_cmask = fmask
    for rmask, candmask in _row_subsets(inc, size, prune=False):
        if rmask & fmask != fmask:
            continue
        found = _best_over_columns(
            mat, inc, rmask, candmask, best_value,
            prune=False, early_exit=None, forced_cols=fmask)
        if found is not None and found[0] > best_value:
            best_value, best_rmask, best_cmask = found
    return SubdetResult(value=best_value,
                        witness=_coloring_from_masks(g, best_rmask, best_cmask),
                        mode="forced")


# ---------------------------------------------------------------------------


def delta_by_components(g: Graph,
                        per_component_solver: Optional[Callable[[Graph], object]] = None
                        ) -> int:
    """Product of per-component maximum subdeterminants.

    The constraint matrix is block-diagonal across components, so the
    maximum subdeterminant multiplies. The empty graph yields 1.
    """
    if per_component_solver is None:
        per_component_solver = max_subdet_brute
    product = 1
    for sub in components(g):
        res = per_component_solver(sub.graph)
        product *= res.value if isinstance(res, SubdetResult) else int(res)
    return product
