"""Leaves, cuboids and admissible bases, with the expansion order.

A leaf is a root index plus one exact half-open interval per block; a basis
is a finite leaf set that partitions the root cuboids and is reachable from
the roots by splitting moves.  All arithmetic is exact (``Fraction``), so
equality of terms is decided by interval comparison.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction

from .algebra import AlgebraSpec

ZERO = Fraction(0)
ONE = Fraction(1)


class TermError(ValueError):
    """Malformed leaves, non-partitions, or misused operations."""


class NotBoundedError(RuntimeError):
    """Soundness alarm: a join computation reached an impossible state.

    Must never fire for the block-structured algebras this package builds;
    if it does, the interval model of the algebra is broken.
    """


class ResourceCapError(RuntimeError):
    """An enumeration exceeded its configured cap."""


class Leaf:
    """A cuboid: root index plus one half-open interval per block."""

    __slots__ = ("root", "intervals", "_key", "_hash")

    def __init__(self, root: int, intervals):
        self.root = root
        self.intervals = tuple(intervals)
        # hash over bare integers: much cheaper than Fraction.__hash__
        self._key = (root,) + tuple(
            (lo.numerator, lo.denominator, hi.numerator, hi.denominator)
            for lo, hi in self.intervals
        )
        self._hash = hash(self._key)

    def key(self):
        """Canonical sort key: root, then per block interval lo then hi."""
        return (self.root, self.intervals)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Leaf)
            and self._hash == other._hash
            and self._key == other._key
        )

    def volume(self) -> Fraction:
        v = ONE
        for lo, hi in self.intervals:
            v *= hi - lo
        return v

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        ivs = " ".join(f"[{lo},{hi})" for lo, hi in self.intervals)
        return f"Leaf(root={self.root} {ivs})"


def root_leaf(spec: AlgebraSpec, root: int) -> Leaf:
    return Leaf(root, tuple((ZERO, ONE) for _ in spec.blocks))


def valid_interval(spec: AlgebraSpec, block_index: int, lo: Fraction, hi: Fraction) -> bool:
    """Interval invariants: width 1/N with N in the block's arity monoid,
    and lo an integer multiple of the width."""
    if not (0 <= lo < hi <= 1):
        return False
    w = hi - lo
    if w.numerator != 1:
        return False
    exps = spec.blocks[block_index].exponents(Fraction(w.denominator))
    if exps is None or any(e < 0 for e in exps):
        return False
    return (lo / w).denominator == 1


def check_leaf(spec: AlgebraSpec, leaf: Leaf) -> None:
    if not 0 <= leaf.root < spec.roots:
        raise TermError(f"root {leaf.root} out of range")
    if len(leaf.intervals) != spec.num_blocks:
        raise TermError("leaf has wrong number of block coordinates")
    for bi, (lo, hi) in enumerate(leaf.intervals):
        if not valid_interval(spec, bi, lo, hi):
            raise TermError(f"invalid interval [{lo},{hi}) in block {bi}")


def split_leaf(spec: AlgebraSpec, leaf: Leaf, color: int) -> tuple[Leaf, ...]:
    """The ordered children of ``leaf`` under one splitting move."""
    bi, n = spec.colors[color]
    lo, hi = leaf.intervals[bi]
    w = (hi - lo) / n
    out = []
    for k in range(n):
        ivs = list(leaf.intervals)
        ivs[bi] = (lo + k * w, lo + (k + 1) * w)
        out.append(Leaf(leaf.root, tuple(ivs)))
    return tuple(out)


def leaf_contains(outer: Leaf, inner: Leaf) -> bool:
    if outer.root != inner.root:
        return False
    # integer cross-multiplication avoids Fraction comparison overhead
    ok = outer._key
    ik = inner._key
    for b in range(1, len(ok)):
        olo_n, olo_d, ohi_n, ohi_d = ok[b]
        ilo_n, ilo_d, ihi_n, ihi_d = ik[b]
        if olo_n * ilo_d > ilo_n * olo_d:
            return False
        if ihi_n * ohi_d > ohi_n * ihi_d:
            return False
    return True


def relative_exponents(spec: AlgebraSpec, outer: Leaf, inner: Leaf) -> tuple[int, ...] | None:
    """Per-colour split counts taking ``outer`` to ``inner``, or None.

    Exponents are read off the interval-width ratios; they are unique by
    multiplicative independence of each block's arities.  Also validates the
    relative alignment, i.e. that inner sits on outer's subdivision grid.
    """
    if not leaf_contains(outer, inner):
        return None
    out: list[int] = []
    for bi, blk in enumerate(spec.blocks):
        olo, ohi = outer.intervals[bi]
        ilo, ihi = inner.intervals[bi]
        ratio = (ohi - olo) / (ihi - ilo)
        exps = blk.exponents(ratio)
        if exps is None or any(e < 0 for e in exps):
            return None
        if ((ilo - olo) / (ihi - ilo)).denominator != 1:
            return None
        out.extend(exps)
    return tuple(out)


def transport(outer_from: Leaf, outer_to: Leaf, inner: Leaf) -> Leaf:
    """Carry ``inner`` (inside outer_from) to the cell with the same
    relative coordinates inside outer_to."""
    ivs = []
    for (flo, fhi), (tlo, thi), (ilo, ihi) in zip(
        outer_from.intervals, outer_to.intervals, inner.intervals
    ):
        scale = (thi - tlo) / (fhi - flo)
        ivs.append((tlo + (ilo - flo) * scale, tlo + (ihi - flo) * scale))
    return Leaf(outer_to.root, tuple(ivs))


# ---------------------------------------------------------------------------
# admissible patterns
# ---------------------------------------------------------------------------

def _cells_in(cells, outer: Leaf):
    return frozenset(c for c in cells if leaf_contains(outer, c))


def _admissible_pattern(spec: AlgebraSpec, cuboid: Leaf, cells: frozenset):
    """Certificate tree if ``cells`` is reachable from ``cuboid`` by splits,
    else None.  Backtracking over the first split colour, memoised: a greedy
    single-choice split is not assumed sufficient.
    """
    cache = spec.cache("patterns")
    key = (cuboid, cells)
    if key in cache:
        return cache[key]
    if cells == frozenset((cuboid,)):
        cache[key] = ("leaf",)
        return cache[key]
    result = None
    for color in range(spec.num_colors):
        parts = split_leaf(spec, cuboid, color)
        assignment = [[] for _ in parts]
        ok = True
        for c in cells:
            for k, p in enumerate(parts):
                if leaf_contains(p, c):
                    assignment[k].append(c)
                    break
            else:
                ok = False
                break
        if not ok:
            continue
        subtrees = []
        for part, sub in zip(parts, assignment):
            t = _admissible_pattern(spec, part, frozenset(sub))
            if t is None:
                break
            subtrees.append(t)
        else:
            result = ("split", color, tuple(subtrees))
            break
    cache[key] = result
    return result


def _replay_certificate(spec: AlgebraSpec, cuboid: Leaf, tree) -> frozenset:
    if tree[0] == "leaf":
        return frozenset((cuboid,))
    _, color, subtrees = tree
    out = set()
    for part, sub in zip(split_leaf(spec, cuboid, color), subtrees):
        out |= _replay_certificate(spec, part, sub)
    return frozenset(out)


def is_admissible(spec: AlgebraSpec, leaves) -> tuple[bool, dict | None]:
    """Decide reachability-from-the-roots for a cuboid partition.

    Returns (flag, certificate); the certificate maps each root to its split
    tree and replays to the input.  Malformed leaves or a non-partition are
    errors, not False.
    """
    cells = list(leaves)
    for leaf in cells:
        check_leaf(spec, leaf)
    if len(set(cells)) != len(cells):
        raise TermError("repeated leaves")
    by_root: dict[int, list[Leaf]] = {r: [] for r in range(spec.roots)}
    for c in cells:
        by_root[c.root].append(c)
    for r, group in by_root.items():
        total = sum((c.volume() for c in group), ZERO)
        if total != ONE:
            raise TermError(f"leaves of root {r} do not have total volume 1")
        for a, b in itertools.combinations(group, 2):
            if boxes_intersect(a, b):
                raise TermError(f"overlapping leaves in root {r}")
    cert: dict[int, tuple] = {}
    for r, group in by_root.items():
        tree = _admissible_pattern(spec, root_leaf(spec, r), frozenset(group))
        if tree is None:
            return False, None
        cert[r] = tree
    return True, cert


def cells_admissible(spec: AlgebraSpec, cells) -> bool:
    """Pattern-only admissibility for internally produced partitions."""
    for r in range(spec.roots):
        group = frozenset(c for c in cells if c.root == r)
        if _admissible_pattern(spec, root_leaf(spec, r), group) is None:
            return False
    return True


def boxes_intersect(a: Leaf, b: Leaf) -> bool:
    if a.root != b.root:
        return False
    return all(
        max(alo, blo) < min(ahi, bhi)
        for (alo, ahi), (blo, bhi) in zip(a.intervals, b.intervals)
    )


# ---------------------------------------------------------------------------
# Basis
# ---------------------------------------------------------------------------

class Basis:
    """An admissible leaf set, stored in canonical order with a certificate."""

    __slots__ = ("spec", "cells", "_cellset", "certificate", "_hash")

    def __init__(self, spec: AlgebraSpec, cells, certificate: dict):
        self.spec = spec
        self.cells: tuple[Leaf, ...] = tuple(sorted(cells, key=Leaf.key))
        self._cellset = frozenset(self.cells)
        self.certificate = certificate
        self._hash = hash(self._cellset)
        d = spec.d
        if (len(self.cells) - spec.roots) % d != 0:
            raise TermError(
                f"basis size {len(self.cells)} violates size = roots mod {d}"
            )

    @staticmethod
    def from_cells(spec: AlgebraSpec, cells) -> "Basis":
        ok, cert = is_admissible(spec, cells)
        if not ok:
            raise TermError("leaf set is a partition but is not admissible")
        return Basis(spec, cells, cert)

    @staticmethod
    def from_cells_trusted(spec: AlgebraSpec, cells) -> "Basis":
        """Internal fast path for cell sets produced by our own moves.

        A successful pattern certificate already proves the partition
        property, so the quadratic disjointness pre-check is skipped.
        """
        cells = list(cells)
        cert: dict[int, tuple] = {}
        for r in range(spec.roots):
            group = frozenset(c for c in cells if c.root == r)
            tree = _admissible_pattern(spec, root_leaf(spec, r), group)
            if tree is None:
                raise TermError("cell set is not admissible")
            cert[r] = tree
        return Basis(spec, cells, cert)

    @staticmethod
    def roots(spec: AlgebraSpec) -> "Basis":
        cells = [root_leaf(spec, r) for r in range(spec.roots)]
        return Basis(spec, cells, {r: ("leaf",) for r in range(spec.roots)})

    def cellset(self) -> frozenset:
        return self._cellset

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    def __contains__(self, leaf: Leaf) -> bool:
        return leaf in self._cellset

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Basis)
            and (self.spec is other.spec or self.spec == other.spec)
            and self._cellset == other._cellset
        )

    def __hash__(self) -> int:
        return self._hash

    def index_of(self, leaf: Leaf) -> int:
        return self.cells.index(leaf)

    def __repr__(self) -> str:
        inner = "; ".join(leaf_to_text(c) for c in self.cells)
        return f"Basis[{inner}]"


def _require_same_spec(a: Basis, b: Basis) -> None:
    if a.spec is not b.spec and a.spec != b.spec:
        raise TermError("bases belong to different specs")


def expand(b: Basis, leaf: Leaf, color: int) -> Basis:
    """Replace ``leaf`` by its ordered children under ``color``."""
    if leaf not in b:
        raise TermError("leaf not in basis")
    if not 0 <= color < b.spec.num_colors:
        raise TermError(f"invalid colour {color}")
    cells = set(b.cells)
    cells.remove(leaf)
    cells.update(split_leaf(b.spec, leaf, color))
    return Basis.from_cells_trusted(b.spec, cells)


def parent_of_family(spec: AlgebraSpec, family, color: int) -> Leaf | None:
    """The parent leaf if ``family`` is a complete ordered sibling family
    along ``color``, else None."""
    bi, n = spec.colors[color]
    fam = list(family)
    if len(fam) != n:
        return None
    fam.sort(key=Leaf.key)
    first = fam[0]
    lo, _ = first.intervals[bi]
    w = first.intervals[bi][1] - first.intervals[bi][0]
    parent_ivs = list(first.intervals)
    parent_ivs[bi] = (lo, lo + n * w)
    parent = Leaf(first.root, tuple(parent_ivs))
    if not valid_interval(spec, bi, lo, lo + n * w):
        return None
    if tuple(fam) != split_leaf(spec, parent, color):
        return None
    return parent


def contract(b: Basis, family, color: int) -> Basis:
    """Replace a complete sibling family along ``color`` by its parent."""
    fam = set(family)
    if not fam <= b.cellset():
        raise TermError("family not contained in basis")
    parent = parent_of_family(b.spec, fam, color)
    if parent is None:
        raise TermError("not a complete sibling family for this colour")
    cells = set(b.cells) - fam
    cells.add(parent)
    return Basis.from_cells(b.spec, cells)  # strict: contractions can leave the window


def sibling_families(spec: AlgebraSpec, cells) -> list[tuple[int, tuple[Leaf, ...], Leaf]]:
    """All (color, family, parent) contractions available in a cell set,
    in canonical order."""
    out = []
    cellset = set(cells)
    for color in range(spec.num_colors):
        bi, n = spec.colors[color]
        groups: dict[tuple, list[Leaf]] = {}
        for c in cellset:
            key = (
                c.root,
                tuple(iv for j, iv in enumerate(c.intervals) if j != bi),
                c.intervals[bi][1] - c.intervals[bi][0],
            )
            groups.setdefault(key, []).append(c)
        for group in groups.values():
            group.sort(key=Leaf.key)
            for i in range(len(group) - n + 1):
                fam = tuple(group[i : i + n])
                parent = parent_of_family(spec, fam, color)
                if parent is not None:
                    out.append((color, fam, parent))
    out.sort(key=lambda t: (t[0], tuple(c.key() for c in t[1])))
    return out


# ---------------------------------------------------------------------------
# the expansion order
# ---------------------------------------------------------------------------

def find_ancestor(a: Basis, leaf: Leaf) -> Leaf | None:
    for c in a.cells:
        if leaf_contains(c, leaf):
            return c
    return None


def leq(a: Basis, b: Basis) -> bool:
    """True iff b is reachable from a by splitting moves.

    Checked as: every b-leaf nests in an a-leaf with exact grid-compatible
    relative coordinates, and each a-leaf's restriction is an admissible
    pattern.  Mere cuboid refinement is not assumed sufficient.
    """
    _require_same_spec(a, b)
    if a == b:
        return True
    if len(a) > len(b):
        return False
    spec = a.spec
    grouped: dict[Leaf, list[Leaf]] = {c: [] for c in a.cells}
    for cell in b.cells:
        anc = find_ancestor(a, cell)
        if anc is None:
            return False
        if relative_exponents(spec, anc, cell) is None:
            return False
        grouped[anc].append(cell)
    for anc, cells in grouped.items():
        if _admissible_pattern(spec, anc, frozenset(cells)) is None:
            return False
    return True


def _first_colors(spec: AlgebraSpec, cuboid: Leaf, cells: frozenset) -> set[int]:
    """Colours that can open a derivation of ``cells`` from ``cuboid``."""
    out = set()
    for color in range(spec.num_colors):
        parts = split_leaf(spec, cuboid, color)
        assignment = [[] for _ in parts]
        ok = True
        for c in cells:
            for k, p in enumerate(parts):
                if leaf_contains(p, c):
                    assignment[k].append(c)
                    break
            else:
                ok = False
                break
        if not ok:
            continue
        if all(
            _admissible_pattern(spec, p, frozenset(sub)) is not None
            for p, sub in zip(parts, assignment)
        ):
            out.add(color)
    return out


def _lub_pattern(spec: AlgebraSpec, cuboid: Leaf, A: frozenset, B: frozenset) -> frozenset:
    """Least common refinement of two admissible patterns of one cuboid.

    If some colour opens derivations of both patterns, recurse into its
    parts.  Otherwise pick opening colours i of A and j of B: any common
    refinement splits the cuboid by i and by j, hence refines the i-then-j
    double split G (splits by distinct colours commute, within a block by
    the order-preserving identification and across blocks coordinate-wise),
    so lub(A,B) = lub(lub(A,G), lub(B,G)) glued over the cells of G.
    """
    single = frozenset((cuboid,))
    if A == single:
        return B
    if B == single:
        return A
    fsa = _first_colors(spec, cuboid, A)
    fsb = _first_colors(spec, cuboid, B)
    if not fsa or not fsb:
        raise NotBoundedError("admissible pattern with no opening colour")
    common = fsa & fsb
    if common:
        color = min(common)
        out: set[Leaf] = set()
        for part in split_leaf(spec, cuboid, color):
            out |= _lub_pattern(spec, part, _cells_in(A, part), _cells_in(B, part))
        return frozenset(out)
    i, j = min(fsa), min(fsb)
    grid = frozenset(
        q for p in split_leaf(spec, cuboid, i) for q in split_leaf(spec, p, j)
    )
    a2 = _lub_pattern(spec, cuboid, A, grid)
    b2 = _lub_pattern(spec, cuboid, B, grid)
    out = set()
    for g in grid:
        out |= _lub_pattern(spec, g, _cells_in(a2, g), _cells_in(b2, g))
    return frozenset(out)


def lub(a: Basis, b: Basis) -> Basis:
    """The least upper bound in the expansion order."""
    _require_same_spec(a, b)
    if a == b:
        return a
    spec = a.spec
    cells: set[Leaf] = set()
    for r in range(spec.roots):
        ra = frozenset(c for c in a.cells if c.root == r)
        rb = frozenset(c for c in b.cells if c.root == r)
        cells |= _lub_pattern(spec, root_leaf(spec, r), ra, rb)
    return Basis.from_cells_trusted(spec, cells)


def lower_closure(b: Basis, cap: int | None = None) -> list[Basis]:
    """All bases C with roots <= C <= b, by contraction search from b."""
    seen = {b.cellset(): b}
    queue = deque([b])
    while queue:
        cur = queue.popleft()
        for color, fam, parent in sibling_families(cur.spec, cur.cells):
            cells = frozenset(set(cur.cells) - set(fam) | {parent})
            if cells in seen:
                continue
            if not cells_admissible(cur.spec, cells):
                continue
            nxt = Basis.from_cells_trusted(cur.spec, cells)
            seen[cells] = nxt
            if cap is not None and len(seen) > cap:
                raise ResourceCapError("lower closure exceeded cap")
            queue.append(nxt)
    return sorted(seen.values(), key=lambda x: (len(x), tuple(c.key() for c in x.cells)))


def glb(a: Basis, b: Basis) -> Basis:
    """Greatest common coarsening: the join of all common lower bounds,
    found by exhaustive contraction search below the smaller basis."""
    _require_same_spec(a, b)
    if a == b:
        return a
    small, other = (a, b) if len(a) <= len(b) else (b, a)
    candidates = [c for c in lower_closure(small) if leq(c, other)]
    out = candidates[0]
    for c in candidates[1:]:
        out = lub(out, c)
    return out


def elementary_leq(a: Basis, b: Basis) -> bool:
    """a <= b with no colour repeated along any split path."""
    _require_same_spec(a, b)
    if not leq(a, b):
        raise TermError("bases are not comparable")
    spec = a.spec
    for cell in b.cells:
        anc = find_ancestor(a, cell)
        exps = relative_exponents(spec, anc, cell)
        if any(e > 1 for e in exps):
            return False
    return True


def very_elementary_leq(a: Basis, b: Basis) -> bool:
    """a <= b with every split path of length at most 1."""
    _require_same_spec(a, b)
    if not leq(a, b):
        raise TermError("bases are not comparable")
    spec = a.spec
    for cell in b.cells:
        anc = find_ancestor(a, cell)
        exps = relative_exponents(spec, anc, cell)
        if sum(exps) > 1:
            return False
    return True


def max_elementary(a: Basis) -> Basis:
    """Split every leaf once by every colour: the largest elementary
    refinement, of size len(a) * product of all arities."""
    spec = a.spec
    cells = list(a.cells)
    for color in range(spec.num_colors):
        cells = [child for c in cells for child in split_leaf(spec, c, color)]
    return Basis.from_cells(spec, cells)


def elementary_core(a: Basis, b: Basis) -> Basis:
    """The largest elementary refinement of a that b still refines."""
    _require_same_spec(a, b)
    if a == b or not leq(a, b):
        raise TermError("requires a < b")
    return glb(max_elementary(a), b)


def enumerate_bases(spec: AlgebraSpec, max_size: int, cap: int | None = None) -> list[Basis]:
    """All bases above the roots with at most ``max_size`` leaves,
    deduplicated, in canonical order (breadth-first over single splits)."""
    if max_size < spec.roots:
        raise TermError("max_size smaller than the root basis")
    start = Basis.roots(spec)
    seen = {start.cellset(): start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for leaf in cur.cells:
            for color in range(spec.num_colors):
                n = spec.arity(color)
                if len(cur) + n - 1 > max_size:
                    continue
                cells = frozenset(set(cur.cells) - {leaf} | set(split_leaf(spec, leaf, color)))
                if cells in seen:
                    continue
                nxt = Basis.from_cells_trusted(spec, cells)
                seen[cells] = nxt
                if cap is not None and len(seen) > cap:
                    raise ResourceCapError("basis enumeration exceeded cap")
                queue.append(nxt)
    return sorted(seen.values(), key=lambda x: (len(x), tuple(c.key() for c in x.cells)))


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def leaf_to_text(leaf: Leaf) -> str:
    parts = [f"root:{leaf.root}"]
    for lo, hi in leaf.intervals:
        parts.append(f"[{format_fraction(lo)},{format_fraction(hi)})")
    return " ".join(parts)


def basis_to_text(b: Basis) -> str:
    return "\n".join(leaf_to_text(c) for c in b.cells) + "\n"


def parse_leaf(spec: AlgebraSpec, line: str) -> Leaf:
    parts = line.split()
    if not parts or not parts[0].startswith("root:"):
        raise TermError(f"bad leaf line: {line!r}")
    root = int(parts[0][5:])
    ivs = []
    for tok in parts[1:]:
        if not (tok.startswith("[") and tok.endswith(")")):
            raise TermError(f"bad interval token: {tok!r}")
        lo_s, hi_s = tok[1:-1].split(",")
        ivs.append((Fraction(lo_s), Fraction(hi_s)))
    leaf = Leaf(root, tuple(ivs))
    check_leaf(spec, leaf)
    return leaf


def parse_basis_text(spec: AlgebraSpec, text: str) -> Basis:
    cells = [parse_leaf(spec, line) for line in text.splitlines() if line.strip()]
    return Basis.from_cells(spec, cells)


def expansion_script(b: Basis) -> list[tuple[int, int]]:
    """A deterministic (leaf index, colour) script replaying the basis from
    the roots, derived from the admissibility certificate."""
    spec = b.spec
    trees: dict[Leaf, tuple] = {}
    for r in range(spec.roots):
        trees[root_leaf(spec, r)] = b.certificate[r]
    cells = sorted(trees, key=Leaf.key)
    script: list[tuple[int, int]] = []
    while True:
        for idx, cell in enumerate(cells):
            tree = trees[cell]
            if tree[0] == "split":
                _, color, subtrees = tree
                script.append((idx, color))
                del trees[cell]
                for child, sub in zip(split_leaf(spec, cell, color), subtrees):
                    trees[child] = sub
                cells = sorted(trees, key=Leaf.key)
                break
        else:
            return script


def replay_script(spec: AlgebraSpec, script, start: Basis | None = None) -> Basis:
    basis = start if start is not None else Basis.roots(spec)
    for idx, color in script:
        if not 0 <= idx < len(basis):
            raise TermError(f"script index {idx} out of range")
        basis = expand(basis, basis.cells[idx], color)
    return basis


def script_to_text(script) -> str:
    return "".join(f"E {idx} {color}\n" for idx, color in script)


def parse_script_text(text: str) -> list[tuple[int, int]]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] != "E":
            raise TermError(f"bad script line: {line!r}")
        out.append((int(parts[1]), int(parts[2])))
    return out
