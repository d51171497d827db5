"""Vectorized winner computation for the standard game variants.

Every variant here has a state space that factors as (cop configuration) x
(robber vertex) x (turn).  Robber sets are packed into bitmask words per
configuration, so one attractor iteration is a handful of bulk array (or
big-int) operations instead of per-transition work.  The update is the same
least fixed point the explicit worklist solver computes:

    CT[cfg] = occupied[cfg] | union of RT[cfg'] over joint cop moves
    RT[cfg] = occupied[cfg] | { r : closed_nbhd(r) subset of CT[cfg] }

with capture states seeding both sides.  Cops win iff some legal placement
configuration ends up with a full CT row.  Agreement with the explicit
arena solver is enforced by the test suite.
"""

from __future__ import annotations

import numpy as np

from .games import Classic, Complementary, Tandem, Traps, Variant, Winner
from .graphs import Graph, complement

__all__ = ["winner"]


def _closed_masks(g: Graph) -> list[int]:
    return [g.adjacency[v] | (1 << v) for v in range(g.n)]


def _mask_to_list(m: int) -> list[int]:
    out = []
    while m:
        b = m & -m
        out.append(b.bit_length() - 1)
        m ^= b
    return out


def _single_cop_winner(cop_closed: list[int], robber_closed: list[int], n: int) -> Winner:
    """Classic one-cop game; cop and robber adjacency may differ."""
    full = (1 << n) - 1
    occ = [1 << c for c in range(n)]
    cop_moves = [_mask_to_list(cop_closed[c]) for c in range(n)]
    rt = occ[:]
    while True:
        ct = []
        for c in range(n):
            u = occ[c]
            for c2 in cop_moves[c]:
                u |= rt[c2]
            ct.append(u)
        if any(row == full for row in ct):
            return Winner.COP
        new_rt = []
        for c in range(n):
            row = ct[c]
            m = occ[c]
            for r in range(n):
                if robber_closed[r] & ~row == 0:
                    m |= 1 << r
            new_rt.append(m)
        if new_rt == rt:
            return Winner.ROBBER
        rt = new_rt


def _pack_int(x: int, words: int) -> np.ndarray:
    out = np.zeros(words, dtype=np.uint64)
    for w in range(words):
        out[w] = (x >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def _pack_rows(masks: list[int], words: int) -> np.ndarray:
    return np.stack([_pack_int(m, words) for m in masks])


def _tandem_winner(g: Graph) -> Winner:
    n = g.n
    words = (n + 63) >> 6
    full = _pack_int((1 << n) - 1, words)
    bits = _pack_rows([1 << v for v in range(n)], words)
    closed = [np.fromiter((u for u in range(n) if u == v or g.has_edge(u, v)), dtype=np.intp) for v in range(n)]
    nmask = _pack_rows(_closed_masks(g), words)
    occ = bits[:, None, :] | bits[None, :, :]
    valid = np.zeros((n, n), dtype=bool)
    for c1 in range(n):
        valid[c1, closed[c1]] = True  # equal or adjacent pairs
    rt = occ.copy()
    while True:
        v_arr = np.empty((n, words), dtype=np.uint64)
        for a in range(n):
            v_arr[a] = np.bitwise_or.reduce(rt[a][closed[a]], axis=0)
        w_arr = np.empty_like(v_arr)
        for c1 in range(n):
            w_arr[c1] = np.bitwise_or.reduce(v_arr[closed[c1]], axis=0)
        ct = occ | w_arr[:, None, :]
        full_rows = (ct == full).all(axis=2)
        if (full_rows & valid).any():
            return Winner.COP
        new_rt = occ.copy()
        for r in range(n):
            m = nmask[r]
            ok = ((ct & m) == m).all(axis=2)
            new_rt[ok, r >> 6] |= np.uint64(1 << (r & 63))
        if np.array_equal(new_rt, rt):
            return Winner.ROBBER
        rt = new_rt


def _classic_multi_winner(g: Graph, k: int) -> Winner:
    """k >= 2 cops with ordered position tuples and per-axis move unions.

    The union over joint cop moves decomposes into one closed-neighborhood
    OR-reduction per cop axis, which is what keeps this polynomial in n
    instead of exponential in the joint branching.
    """
    n = g.n
    words = (n + 63) >> 6
    full = _pack_int((1 << n) - 1, words)
    bits = _pack_rows([1 << v for v in range(n)], words)
    closed = [np.fromiter((u for u in range(n) if u == v or g.has_edge(u, v)), dtype=np.intp) for v in range(n)]
    nmask = _pack_rows(_closed_masks(g), words)
    shape = (n,) * k + (words,)
    occ = np.zeros(shape, dtype=np.uint64)
    for ax in range(k):
        view = (1,) * ax + (n,) + (1,) * (k - 1 - ax) + (words,)
        occ |= bits.reshape(view)
    flat_occ = occ.reshape(-1, words)
    rt = occ.copy()
    while True:
        u = rt
        for ax in range(k):
            new_u = np.empty_like(u)
            for v in range(n):
                sel = u.take(closed[v], axis=ax)
                new_u[(slice(None),) * ax + (v,)] = np.bitwise_or.reduce(sel, axis=ax)
            u = new_u
        ct = occ | u
        flat_ct = ct.reshape(-1, words)
        if (flat_ct == full).all(axis=1).any():
            return Winner.COP
        new_rt = flat_occ.copy()
        for r in range(n):
            m = nmask[r]
            ok = ((flat_ct & m) == m).all(axis=1)
            new_rt[ok, r >> 6] |= np.uint64(1 << (r & 63))
        new_rt = new_rt.reshape(shape)
        if np.array_equal(new_rt, rt):
            return Winner.ROBBER
        rt = new_rt


def _traps_single_cop_winner(g: Graph, t: int) -> Winner:
    """One cop with a stock of t reusable traps."""
    from itertools import combinations

    n = g.n
    words = (n + 63) >> 6
    full = _pack_int((1 << n) - 1, words)
    closed = [sorted(set(g.neighbors(v)) | {v}) for v in range(n)]
    nmask = _pack_rows(_closed_masks(g), words)

    subsets: list[tuple[int, ...]] = []
    for size in range(t + 1):
        subsets.extend(combinations(range(n), size))
    sub_index = {s: i for i, s in enumerate(subsets)}
    s_count = len(subsets)
    add_target = {}
    del_target = {}
    for si, sub in enumerate(subsets):
        if len(sub) < t:
            for v in range(n):
                if v not in sub:
                    add_target[(si, v)] = sub_index[tuple(sorted(sub + (v,)))]
        for v in sub:
            del_target[(si, v)] = sub_index[tuple(x for x in sub if x != v)]

    occ_masks = []
    for c in range(n):
        for sub in subsets:
            m = 1 << c
            for s in sub:
                m |= 1 << s
            occ_masks.append(m)
    occ = _pack_rows(occ_masks, words)

    succ_rows: list[list[int]] = []
    for c in range(n):
        for si in range(s_count):
            row = []
            for c2 in closed[c]:
                base = c2 * s_count
                row.append(base + si)
                a = add_target.get((si, c2))
                if a is not None:
                    row.append(base + a)
                d = del_target.get((si, c2))
                if d is not None:
                    row.append(base + d)
            succ_rows.append(row)
    width = max(len(r) for r in succ_rows)
    succ = np.empty((n * s_count, width), dtype=np.intp)
    for i, row in enumerate(succ_rows):
        succ[i, : len(row)] = row
        succ[i, len(row):] = row[0]  # padding duplicates are harmless in a union

    placement_ids = np.array([c * s_count for c in range(n)], dtype=np.intp)  # no traps yet
    rt = occ.copy()
    while True:
        ct = occ | np.bitwise_or.reduce(rt[succ], axis=1)
        if (ct[placement_ids] == full).all(axis=1).any():
            return Winner.COP
        new_rt = occ.copy()
        for r in range(n):
            m = nmask[r]
            ok = ((ct & m) == m).all(axis=1)
            new_rt[ok, r >> 6] |= np.uint64(1 << (r & 63))
        if np.array_equal(new_rt, rt):
            return Winner.ROBBER
        rt = new_rt


def winner(g: Graph, v: Variant) -> Winner | None:
    """Winner for the supported variants, or None when unsupported."""
    if isinstance(v, Classic):
        if v.k == 1:
            masks = _closed_masks(g)
            return _single_cop_winner(masks, masks, g.n)
        return _classic_multi_winner(g, v.k)
    if isinstance(v, Complementary):
        return _single_cop_winner(_closed_masks(complement(g)), _closed_masks(g), g.n)
    if isinstance(v, Tandem):
        return _tandem_winner(g)
    if isinstance(v, Traps) and v.m == 1:
        return _traps_single_cop_winner(g, v.t)
    return None
