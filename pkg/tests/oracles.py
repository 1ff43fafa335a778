"""Independent oracles used by the tests.

These are deliberately naive: exhaustive placement enumeration for cuboid
partitions, and breadth-first reachability over single splitting moves.
They share no code path with the recursive admissibility checker or the
lattice operations they cross-check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from cantorv.algebra import AlgebraSpec
from cantorv.terms import Basis, Leaf, enumerate_bases, expand

ZERO = Fraction(0)
ONE = Fraction(1)


def _block_widths_at_least(spec: AlgebraSpec, block_index: int, bound: Fraction):
    """All valid interval widths >= bound for one block, descending."""
    blk = spec.blocks[block_index]
    widths = set()
    frontier = {ONE}
    while frontier:
        widths |= frontier
        nxt = set()
        for w in frontier:
            for a in blk.arities:
                w2 = w / a
                if w2 >= bound and w2 not in widths:
                    nxt.add(w2)
        frontier = nxt
    return sorted(widths, reverse=True)


def _volumes_at_least(spec: AlgebraSpec, bound: Fraction):
    """All cell volumes >= bound (products of per-block widths)."""
    per_block = [
        _block_widths_at_least(spec, bi, bound) for bi in range(spec.num_blocks)
    ]
    out = set()
    for combo in itertools.product(*per_block):
        v = ONE
        for w in combo:
            v *= w
        if v >= bound:
            out.add(v)
    return out


def _volume_multisets(spec: AlgebraSpec, max_cells: int):
    """All descending volume multisets summing to 1 with <= max_cells terms."""
    results = []

    def rec(remaining: Fraction, budget: int, ceiling: Fraction, acc):
        if remaining == 0:
            results.append(tuple(acc))
            return
        if budget == 0:
            return
        bound = remaining / budget
        for v in sorted(_volumes_at_least(spec, bound), reverse=True):
            if v > ceiling or v > remaining:
                continue
            acc.append(v)
            rec(remaining - v, budget - 1, v, acc)
            acc.pop()

    rec(ONE, max_cells, ONE, [])
    return results


def _cells_with_volume(spec: AlgebraSpec, root: int, anchor, volume: Fraction):
    """All valid cells of the given volume whose lower corner is anchor."""
    per_block = []
    for bi in range(spec.num_blocks):
        opts = []
        for w in _block_widths_at_least(spec, bi, volume):
            lo = anchor[bi]
            if (lo / w).denominator != 1:
                continue
            if lo + w > 1:
                continue
            opts.append(w)
        per_block.append(opts)
    out = []
    for combo in itertools.product(*per_block):
        v = ONE
        for w in combo:
            v *= w
        if v != volume:
            continue
        ivs = tuple((anchor[bi], anchor[bi] + w) for bi, w in enumerate(combo))
        out.append(Leaf(root, ivs))
    return out


def _first_uncovered(spec: AlgebraSpec, placed):
    """Lexicographically least uncovered corner, via breakpoint boxes."""
    breaks = []
    for bi in range(spec.num_blocks):
        pts = {ZERO, ONE}
        for c in placed:
            lo, hi = c.intervals[bi]
            pts.add(lo)
            pts.add(hi)
        breaks.append(sorted(pts))
    for corner in itertools.product(*(range(len(b) - 1) for b in breaks)):
        point = tuple(breaks[bi][k] for bi, k in enumerate(corner))
        covered = False
        for c in placed:
            if all(
                lo <= point[bi] < hi
                for bi, (lo, hi) in enumerate(c.intervals)
            ):
                covered = True
                break
        if not covered:
            return point
    return None


def enumerate_partitions(spec: AlgebraSpec, max_cells: int):
    """Every partition of the root cuboid into <= max_cells valid cells
    (admissible or not), for single-root specs."""
    assert spec.roots == 1
    results: set[frozenset] = set()
    for volumes in _volume_multisets(spec, max_cells):
        pool = list(volumes)

        def rec(placed: list[Leaf], remaining: list[Fraction]):
            anchor = _first_uncovered(spec, placed)
            if anchor is None:
                results.add(frozenset(placed))
                return
            tried = set()
            for i, v in enumerate(remaining):
                if v in tried:
                    continue
                tried.add(v)
                rest = remaining[:i] + remaining[i + 1 :]
                for cell in _cells_with_volume(spec, 0, anchor, v):
                    if all(
                        not _overlap(cell, other) for other in placed
                    ):
                        rec(placed + [cell], rest)

        rec([], pool)
    return sorted(results, key=lambda s: (len(s), sorted(c.key() for c in s)))


def _overlap(a: Leaf, b: Leaf) -> bool:
    return all(
        max(alo, blo) < min(ahi, bhi)
        for (alo, ahi), (blo, bhi) in zip(a.intervals, b.intervals)
    )


def reachable_cellsets(spec: AlgebraSpec, max_size: int) -> set[frozenset]:
    """Cell sets of every basis reachable from the roots by single splits."""
    return {b.cellset() for b in enumerate_bases(spec, max_size)}


def reachable_from(basis: Basis, max_size: int) -> set[frozenset]:
    """Cell sets reachable from one basis by splits, up to a size bound."""
    seen = {basis.cellset()}
    frontier = [basis]
    while frontier:
        nxt = []
        for cur in frontier:
            for leaf in cur.cells:
                for color in range(cur.spec.num_colors):
                    if len(cur) + cur.spec.arity(color) - 1 > max_size:
                        continue
                    child = expand(cur, leaf, color)
                    if child.cellset() not in seen:
                        seen.add(child.cellset())
                        nxt.append(child)
        frontier = nxt
    return seen
