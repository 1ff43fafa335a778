"""Cones: descendant-closures of finite leaf sets, and tuples of them.

A cone is determined by the point set covered by its support cuboids; two
supports describe the same cone exactly when those unions coincide, so
equality, disjointness and covering are decided by exact volume arithmetic.
The group acts on cones by mapping supports through element diagrams.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .algebra import AlgebraSpec
from .terms import (
    Basis,
    Leaf,
    ZERO,
    ONE,
    boxes_intersect,
    cells_admissible,
    check_leaf,
    leaf_contains,
    leaf_to_text,
    lub,
    parse_leaf,
    root_leaf,
    sibling_families,
    split_leaf,
)
from .elements import Element


class ConeError(ValueError):
    """Malformed cone input or a tuple without the required flags."""


def _color_exponents(spec: AlgebraSpec, leaf: Leaf) -> tuple[int, ...]:
    """Per-colour split depths of a leaf relative to its root cuboid."""
    out = []
    for bi, blk in enumerate(spec.blocks):
        lo, hi = leaf.intervals[bi]
        exps = blk.exponents(ONE / (hi - lo))
        out.extend(exps)
    return tuple(out)


def _contract_support(spec: AlgebraSpec, cells: set[Leaf]) -> tuple[Leaf, ...]:
    """Deterministic greedy contraction of a disjoint cell set.

    Maximal contraction is applied scan-by-scan in canonical order; the
    result is a fixed function of the input cell set (uniqueness across
    different representations of the same cone is tested, not assumed).
    """
    cells = set(cells)
    changed = True
    while changed:
        changed = False
        for color, fam, parent in sibling_families(spec, cells):
            if set(fam) <= cells:
                cells -= set(fam)
                cells.add(parent)
                changed = True
                break
    return tuple(sorted(cells, key=Leaf.key))


def _box_intersection_volume(a: Leaf, b: Leaf) -> Fraction:
    if a.root != b.root:
        return ZERO
    v = ONE
    for (alo, ahi), (blo, bhi) in zip(a.intervals, b.intervals):
        lo = max(alo, blo)
        hi = min(ahi, bhi)
        if lo >= hi:
            return ZERO
        v *= hi - lo
    return v


def _monoid_refinement_exponents(spec: AlgebraSpec, block_index: int, denom: int) -> tuple[int, ...]:
    """Smallest per-colour exponent vector whose arity product is divisible
    by ``denom``; breadth-first over exponent vectors."""
    from math import gcd

    blk = spec.blocks[block_index]
    arities = blk.arities
    frontier = [(0,) * len(arities)]
    seen = {frontier[0]}
    while frontier:
        nxt = []
        for e in frontier:
            n = 1
            for a, k in zip(arities, e):
                n *= a**k
            if n % denom == 0:
                return e
            for i in range(len(arities)):
                e2 = e[:i] + (e[i] + 1,) + e[i + 1 :]
                if e2 not in seen:
                    seen.add(e2)
                    nxt.append(e2)
        frontier = nxt
    raise ConeError(f"denominator {denom} unreachable in block {block_index}")


def _box_to_cells(spec: AlgebraSpec, root: int, box) -> list[Leaf]:
    """Decompose an axis-aligned box with grid-rational corners into leaves."""
    per_block: list[list[tuple[Fraction, Fraction]]] = []
    for bi, (lo, hi) in enumerate(box):
        denom = 1
        for x in (lo, hi):
            d = x.denominator
            g = denom
            from math import gcd

            denom = denom * d // gcd(denom, d)
        exps = _monoid_refinement_exponents(spec, bi, denom)
        n = 1
        for a, k in zip(spec.blocks[bi].arities, exps):
            n *= a**k
        w = Fraction(1, n)
        count = (hi - lo) / w
        assert count.denominator == 1
        per_block.append([(lo + k * w, lo + (k + 1) * w) for k in range(int(count))])
    return [Leaf(root, ivs) for ivs in itertools.product(*per_block)]


class Cone:
    """A union of leaf cuboids, canonically stored as a contracted antichain."""

    __slots__ = ("spec", "cells")

    def __init__(self, spec: AlgebraSpec, cells: tuple[Leaf, ...]):
        self.spec = spec
        self.cells = cells

    @staticmethod
    def empty(spec: AlgebraSpec) -> "Cone":
        return Cone(spec, ())

    @staticmethod
    def from_leaves(spec: AlgebraSpec, leaves) -> "Cone":
        cells = list(dict.fromkeys(leaves))
        for c in cells:
            check_leaf(spec, c)
        if not cells:
            return Cone.empty(spec)
        disjoint = all(
            not boxes_intersect(a, b) for a, b in itertools.combinations(cells, 2)
        )
        if not disjoint:
            # overlapping input: normalise through the union's point set
            flat: list[Leaf] = []
            for r in range(spec.roots):
                group = [c for c in cells if c.root == r]
                if group:
                    flat.extend(_union_boxes_to_cells(spec, r, group))
            cells = flat
        return Cone(spec, _contract_support(spec, set(cells)))

    def is_empty(self) -> bool:
        return not self.cells

    def volume(self) -> Fraction:
        return sum((c.volume() for c in self.cells), ZERO)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Cone({len(self.cells)} cells)"


def _union_boxes_to_cells(spec: AlgebraSpec, root: int, group) -> list[Leaf]:
    """Exact cell decomposition of a union of possibly overlapping cuboids."""
    breaks = []
    for bi in range(spec.num_blocks):
        pts = {ZERO, ONE}
        for c in group:
            lo, hi = c.intervals[bi]
            pts.add(lo)
            pts.add(hi)
        breaks.append(sorted(pts))
    out: list[Leaf] = []
    for corner in itertools.product(*(range(len(b) - 1) for b in breaks)):
        box = tuple(
            (breaks[bi][k], breaks[bi][k + 1]) for bi, k in enumerate(corner)
        )
        probe = Leaf(root, box)
        if any(leaf_contains(c, probe) for c in group):
            out.extend(_box_to_cells(spec, root, box))
    return out


def cone_equals(u: Cone, v: Cone) -> bool:
    """Same point set: mutual containment by exact volume accounting."""
    _same_spec(u, v)
    vu, vv = u.volume(), v.volume()
    if vu != vv:
        return False
    inter = sum(
        (_box_intersection_volume(a, b) for a in u.cells for b in v.cells), ZERO
    )
    return inter == vu


def _same_spec(u: Cone, v: Cone) -> None:
    if u.spec != v.spec:
        raise ConeError("cones belong to different specs")


def cone_disjoint(u: Cone, v: Cone) -> bool:
    _same_spec(u, v)
    return all(
        _box_intersection_volume(a, b) == 0 for a in u.cells for b in v.cells
    )


def cone_intersection(u: Cone, v: Cone) -> Cone:
    """Point-set intersection; plumbing beyond the disjoint-or-not test."""
    _same_spec(u, v)
    boxes: list[tuple[int, tuple]] = []
    for a in u.cells:
        for b in v.cells:
            if a.root != b.root:
                continue
            ivs = []
            empty = False
            for (alo, ahi), (blo, bhi) in zip(a.intervals, b.intervals):
                lo, hi = max(alo, blo), min(ahi, bhi)
                if lo >= hi:
                    empty = True
                    break
                ivs.append((lo, hi))
            if not empty:
                boxes.append((a.root, tuple(ivs)))
    cells: list[Leaf] = []
    for root, box in boxes:
        cells.extend(_box_to_cells(u.spec, root, box))
    return Cone.from_leaves(u.spec, cells)


def cone_norm(u: Cone) -> int:
    """0 for the empty cone, else the representative in (0, d] of the
    support size on a witness basis, mod d."""
    if u.is_empty():
        return 0
    spec = u.spec
    d = spec.d
    count = _support_count_on_grid(u)
    return ((count - 1) % d) + 1


def _support_count_on_grid(u: Cone) -> int:
    """Size of the support re-expressed on a fine enough full grid basis."""
    spec = u.spec
    count = 0
    for r in range(spec.roots):
        group = [c for c in u.cells if c.root == r]
        if not group:
            continue
        maxes = [0] * spec.num_colors
        exps_by_cell = {}
        for c in group:
            e = _color_exponents(spec, c)
            exps_by_cell[c] = e
            maxes = [max(a, b) for a, b in zip(maxes, e)]
        for c in group:
            n = 1
            for color, (e_grid, e_cell) in enumerate(
                zip(maxes, exps_by_cell[c])
            ):
                n *= spec.arity(color) ** (e_grid - e_cell)
            count += n
    return count


def witness_basis(spec: AlgebraSpec, cones) -> tuple[Basis, list[list[Leaf]]]:
    """A basis containing every cone's support as a set of its cells.

    Requires pairwise disjoint supports.  Tries the supports plus a cell
    decomposition of the complement; if that partition is not admissible,
    falls back to a per-root full grid.
    """
    all_cells: list[tuple[int, Leaf]] = []
    for i, cone in enumerate(cones):
        for c in cone.cells:
            all_cells.append((i, c))
    cover_cells = [c for _, c in all_cells]
    for a, b in itertools.combinations(cover_cells, 2):
        if boxes_intersect(a, b):
            raise ConeError("witness basis requires disjoint supports")
    candidate: list[Leaf] = list(cover_cells)
    for r in range(spec.roots):
        group = [c for c in cover_cells if c.root == r]
        missing = ONE - sum((c.volume() for c in group), ZERO)
        if missing:
            candidate.extend(_complement_cells(spec, r, group))
    if cells_admissible(spec, candidate):
        basis = Basis.from_cells_trusted(spec, candidate)
    else:
        basis = _grid_basis(spec, cover_cells)
    assignment: list[list[Leaf]] = [[] for _ in cones]
    for cell in basis.cells:
        for i, cone in enumerate(cones):
            if any(leaf_contains(s, cell) for s in cone.cells):
                assignment[i].append(cell)
                break
    return basis, assignment


def _complement_cells(spec: AlgebraSpec, root: int, group) -> list[Leaf]:
    breaks = []
    for bi in range(spec.num_blocks):
        pts = {ZERO, ONE}
        for c in group:
            lo, hi = c.intervals[bi]
            pts.add(lo)
            pts.add(hi)
        breaks.append(sorted(pts))
    out: list[Leaf] = []
    for corner in itertools.product(*(range(len(b) - 1) for b in breaks)):
        box = tuple((breaks[bi][k], breaks[bi][k + 1]) for bi, k in enumerate(corner))
        probe = Leaf(root, box)
        if not any(leaf_contains(c, probe) for c in group):
            out.extend(_box_to_cells(spec, root, box))
    return out


def _grid_basis(spec: AlgebraSpec, cells) -> Basis:
    """Per-root full grids fine enough that every given cell is a grid union."""
    out: list[Leaf] = []
    for r in range(spec.roots):
        group = [c for c in cells if c.root == r]
        maxes = [0] * spec.num_colors
        for c in group:
            e = _color_exponents(spec, c)
            maxes = [max(a, b) for a, b in zip(maxes, e)]
        grid = [root_leaf(spec, r)]
        for color, depth in enumerate(maxes):
            for _ in range(depth):
                grid = [child for g in grid for child in split_leaf(spec, g, color)]
        out.extend(grid)
    return Basis.from_cells_trusted(spec, out)


def act(g: Element, u: Cone) -> Cone:
    """The image cone; supports map leafwise through the diagram."""
    if g.spec != u.spec:
        raise ConeError("element and cone belong to different specs")
    if u.is_empty():
        return u
    basis, assignment = witness_basis(u.spec, [u])
    mid = lub(basis, g.domain)
    images = [
        g.image_of_leaf(cell)
        for cell in mid.cells
        if any(leaf_contains(s, cell) for s in u.cells)
    ]
    return Cone.from_leaves(u.spec, images)


# ---------------------------------------------------------------------------
# tuples
# ---------------------------------------------------------------------------

class ConeTuple:
    """An ordered tuple of cones with recomputed covering/disjoint flags."""

    __slots__ = ("spec", "cones", "covering", "disjoint")

    def __init__(self, spec: AlgebraSpec, cones):
        self.spec = spec
        self.cones = tuple(cones)
        for c in self.cones:
            if c.spec != spec:
                raise ConeError("cone tuple mixes specs")
        self.disjoint = all(
            cone_disjoint(a, b)
            for a, b in itertools.combinations(self.cones, 2)
        )
        self.covering = self._covering()

    def _covering(self) -> bool:
        total = Fraction(self.spec.roots)
        if self.disjoint:
            return sum((c.volume() for c in self.cones), ZERO) == total
        covered = ZERO
        cells = [c for cone in self.cones for c in cone.cells]
        for r in range(self.spec.roots):
            group = [c for c in cells if c.root == r]
            covered += sum(
                (c.volume() for c in _union_boxes_to_cells(self.spec, r, group)),
                ZERO,
            ) if group else ZERO
        return covered == total

    def __len__(self) -> int:
        return len(self.cones)

    def __iter__(self):
        return iter(self.cones)


def act_tuple(g: Element, t: ConeTuple) -> ConeTuple:
    return ConeTuple(t.spec, [act(g, c) for c in t.cones])


def tuple_classify(t: ConeTuple) -> tuple[int, ...]:
    """The orbit invariant: the tuple of norms (zeros mark empty slots)."""
    if not (t.covering and t.disjoint):
        raise ConeError("classification requires a covering, disjoint tuple")
    return tuple(cone_norm(c) for c in t.cones)


def _representable(target: int, steps: list[int]) -> list[int] | None:
    """Write ``target`` as a nonnegative combination of ``steps``; returns
    per-step counts or None (small dynamic program)."""
    best: dict[int, list[int]] = {0: [0] * len(steps)}
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for i, s in enumerate(steps):
                w = v + s
                if w > target or w in best:
                    continue
                counts = list(best[v])
                counts[i] += 1
                best[w] = counts
                nxt.append(w)
        frontier = nxt
    return best.get(target)


def tuple_witness(t1: ConeTuple, t2: ConeTuple) -> Element | None:
    """An element carrying t1 to t2 componentwise, when the invariants match.

    Supports are laid out on witness bases; component sizes agree mod d, so
    both sides are padded by splitting moves until the counts match exactly,
    then the matched cells are paired off in canonical order.
    """
    if tuple_classify(t1) != tuple_classify(t2):
        return None
    spec = t1.spec
    basis1, parts1 = witness_basis(spec, list(t1.cones))
    basis2, parts2 = witness_basis(spec, list(t2.cones))
    steps = sorted({spec.arity(c) - 1 for c in range(spec.num_colors)})
    step_colors = {
        spec.arity(c) - 1: c for c in range(spec.num_colors - 1, -1, -1)
    }

    def pad(basis: Basis, parts: list[list[Leaf]], i: int, combo: list[int]) -> Basis:
        from .terms import expand as expand_basis

        for count, step in zip(combo, steps):
            color = step_colors[step]
            for _ in range(count):
                cell = min(parts[i], key=Leaf.key)
                basis = expand_basis(basis, cell, color)
                parts[i].remove(cell)
                parts[i].extend(split_leaf(spec, cell, color))
        return basis

    for i in range(len(t1.cones)):
        a, b = len(parts1[i]), len(parts2[i])
        if a == b:
            continue
        target = max(a, b)
        while True:
            ca = _representable(target - a, steps)
            cb = _representable(target - b, steps)
            if ca is not None and cb is not None:
                break
            target += spec.d
        basis1 = pad(basis1, parts1, i, ca)
        basis2 = pad(basis2, parts2, i, cb)
    mapping: dict[Leaf, Leaf] = {}
    for cells1, cells2 in zip(parts1, parts2):
        for c1, c2 in zip(sorted(cells1, key=Leaf.key), sorted(cells2, key=Leaf.key)):
            mapping[c1] = c2
    dom = Basis.from_cells_trusted(spec, mapping.keys())
    rng = Basis.from_cells_trusted(spec, mapping.values())
    perm = [rng.index_of(mapping[c]) for c in dom.cells]
    return Element(spec, dom, rng, perm)


def tuple_stabilizer_shape(t: ConeTuple) -> tuple[int, ...]:
    """Component support sizes on a common witness basis; the setwise
    stabiliser is the direct product of the groups over these sizes."""
    if not (t.covering and t.disjoint):
        raise ConeError("stabiliser shape requires a covering, disjoint tuple")
    _, parts = witness_basis(t.spec, list(t.cones))
    return tuple(len(p) for p in parts)


def stabilizer_shape_report(t: ConeTuple) -> str:
    ks = tuple_stabilizer_shape(t)
    return " x ".join(f"V_{k}(S)" for k in ks)


def disjointify(t: ConeTuple) -> ConeTuple:
    """Refine a covering tuple into the covering, disjoint tuple indexed by
    nonempty subsets of the components, in binary-counter order.

    Slot S collects the points lying in exactly the components of S.
    """
    if not t.covering:
        raise ConeError("disjointify requires a covering tuple")
    spec = t.spec
    n = len(t.cones)
    label_cells: dict[int, list[Leaf]] = {}
    for r in range(spec.roots):
        breaks = []
        for bi in range(spec.num_blocks):
            pts = {ZERO, ONE}
            for cone in t.cones:
                for c in cone.cells:
                    if c.root == r:
                        lo, hi = c.intervals[bi]
                        pts.add(lo)
                        pts.add(hi)
            breaks.append(sorted(pts))
        for corner in itertools.product(*(range(len(b) - 1) for b in breaks)):
            box = tuple(
                (breaks[bi][k], breaks[bi][k + 1]) for bi, k in enumerate(corner)
            )
            probe = Leaf(r, box)
            mask = 0
            for i, cone in enumerate(t.cones):
                if any(leaf_contains(c, probe) for c in cone.cells):
                    mask |= 1 << i
            if mask == 0:
                raise ConeError("covering flag inconsistent with cells")
            label_cells.setdefault(mask, []).extend(_box_to_cells(spec, r, box))
    out = []
    for mask in range(1, 2**n):
        out.append(Cone.from_leaves(spec, label_cells.get(mask, [])))
    return ConeTuple(spec, out)


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def cone_to_text(u: Cone) -> str:
    if u.is_empty():
        return "EMPTY\n"
    return "\n".join(leaf_to_text(c) for c in u.cells) + "\n"


def parse_cone_text(spec: AlgebraSpec, text: str) -> Cone:
    lines = [line for line in text.splitlines() if line.strip()]
    if lines == ["EMPTY"]:
        return Cone.empty(spec)
    return Cone.from_leaves(spec, [parse_leaf(spec, line) for line in lines])
