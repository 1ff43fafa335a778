"""Group elements as basis-pair diagrams with a leaf bijection.

An element is (domain basis, range basis, permutation); the automorphism
sends the i-th domain leaf (canonical order) to the perm[i]-th range leaf,
extending to finer cells by relative-coordinate transport.  Composition is
right-to-left: (g * h)(u) = g(h(u)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import AlgebraSpec
from .terms import (
    Basis,
    cells_admissible,
    Leaf,
    TermError,
    check_leaf,
    expansion_script,
    find_ancestor,
    leq,
    lub,
    parent_of_family,
    parse_script_text,
    relative_exponents,
    replay_script,
    script_to_text,
    sibling_families,
    split_leaf,
    transport,
)


class CapExceededError(RuntimeError):
    """Subgroup closure went past its cap: infinite or large subgroup."""


UNKNOWN = "unknown"


class Element:
    """An automorphism given by a pair of equal-size bases and a bijection."""

    __slots__ = ("spec", "domain", "range", "perm", "_hash")

    def __init__(self, spec: AlgebraSpec, domain: Basis, range_: Basis, perm):
        if domain.spec != spec or range_.spec != spec:
            raise TermError("element bases belong to a different spec")
        if len(domain) != len(range_):
            raise TermError("domain and range have different sizes")
        perm = tuple(perm)
        if sorted(perm) != list(range(len(domain))):
            raise TermError("map is not a bijection of leaf indices")
        self.spec = spec
        self.domain = domain
        self.range = range_
        self.perm = perm
        self._hash = hash((domain.cellset(), range_.cellset(), perm))

    def key(self):
        return (self.domain.cells, self.range.cells, self.perm)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        """Identical diagram; semantic equality is ``equals``."""
        return isinstance(other, Element) and self.key() == other.key()

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Element({len(self.domain)} leaves)"

    def image_of_leaf(self, leaf: Leaf) -> Leaf:
        """Image of any cell lying under the domain basis."""
        anc = find_ancestor(self.domain, leaf)
        if anc is None or relative_exponents(self.spec, anc, leaf) is None:
            raise TermError("cell does not lie under the domain basis")
        target = self.range.cells[self.perm[self.domain.index_of(anc)]]
        return transport(anc, target, leaf)


def identity(spec: AlgebraSpec) -> Element:
    base = Basis.roots(spec)
    return Element(spec, base, base, range(len(base)))


def invert(g: Element) -> Element:
    inv = [0] * len(g.perm)
    for i, p in enumerate(g.perm):
        inv[p] = i
    return Element(g.spec, g.range, g.domain, inv)


def _same_spec(g: Element, h: Element) -> None:
    if g.spec != h.spec:
        raise TermError("elements belong to different specs")


def expand_diagram(g: Element, refined_domain: Basis) -> Element:
    """Rewrite g on a finer domain basis (refined_domain >= g.domain)."""
    pairs = [(c, g.image_of_leaf(c)) for c in refined_domain.cells]
    rng = Basis.from_cells_trusted(g.spec, [img for _, img in pairs])
    perm = [rng.index_of(img) for _, img in pairs]
    return Element(g.spec, refined_domain, rng, perm)


def compose(g: Element, h: Element) -> Element:
    """g * h, applying h first."""
    _same_spec(g, h)
    mid = lub(h.range, g.domain)
    pulled = []
    pushed = []
    h_inv = invert(h)
    for cell in mid.cells:
        pulled.append(h_inv.image_of_leaf(cell))
        pushed.append(g.image_of_leaf(cell))
    dom = Basis.from_cells_trusted(g.spec, pulled)
    rng = Basis.from_cells_trusted(g.spec, pushed)
    perm = [0] * len(dom)
    for p, q in zip(pulled, pushed):
        perm[dom.index_of(p)] = rng.index_of(q)
    return reduce(Element(g.spec, dom, rng, perm))


def equals(g: Element, h: Element) -> bool:
    """Semantic equality, decided over the common refined domain."""
    _same_spec(g, h)
    if g.key() == h.key():
        return True
    common = lub(g.domain, h.domain)
    return all(g.image_of_leaf(c) == h.image_of_leaf(c) for c in common.cells)


def reduce(g: Element) -> Element:
    """Contract matching sibling families on both sides until none remain.

    A move is accepted only if both contracted leaf sets stay admissible;
    a contraction can produce a cuboid partition that is not reachable from
    the roots, and diagrams are kept over root-refining bases.
    """
    spec = g.spec
    dom_cells = list(g.domain.cells)
    rng_cells = list(g.range.cells)
    mapping = {dom_cells[i]: rng_cells[g.perm[i]] for i in range(len(dom_cells))}
    changed = True
    while changed:
        changed = False
        for color, fam, parent in sibling_families(spec, mapping.keys()):
            images = [mapping[c] for c in fam]
            img_parent = parent_of_family(spec, images, color)
            if img_parent is None:
                continue
            if tuple(images) != split_leaf(spec, img_parent, color):
                continue
            new_dom = set(mapping) - set(fam) | {parent}
            new_rng = set(mapping.values()) - set(images) | {img_parent}
            if not cells_admissible(spec, new_dom):
                continue
            if not cells_admissible(spec, new_rng):
                continue
            for c in fam:
                del mapping[c]
            mapping[parent] = img_parent
            changed = True
            break
    dom = Basis.from_cells_trusted(spec, mapping.keys())
    rng = Basis.from_cells_trusted(spec, mapping.values())
    perm = [rng.index_of(mapping[c]) for c in dom.cells]
    return Element(spec, dom, rng, perm)


def order_of(g: Element, cap: int):
    """Least k <= cap with g^k the identity, else the UNKNOWN sentinel."""
    if cap < 1:
        raise TermError("cap must be at least 1")
    e = identity(g.spec)
    power = g
    for k in range(1, cap + 1):
        if equals(power, e):
            return k
        power = compose(g, power)
    return UNKNOWN


def permutation_element(b: Basis, perm) -> Element:
    """The automorphism permuting the leaves of one basis."""
    perm = tuple(perm)
    if sorted(perm) != list(range(len(b))):
        raise TermError("permutation does not match basis size")
    return Element(b.spec, b, b, perm)


def apply_to_basis(g: Element, b: Basis) -> Basis:
    """The image basis g(b); requires b to refine g's domain."""
    if not leq(g.domain, b):
        raise TermError("basis does not refine the element's domain")
    return Basis.from_cells_trusted(g.spec, [g.image_of_leaf(c) for c in b.cells])


def represent_on(g: Element, y: Basis):
    """Rewrite g as a diagram with domain exactly y, if possible.

    Succeeds iff for every y-leaf there is a target cell such that g acts on
    everything below that leaf by plain relative-coordinate transport onto
    the target; returns (range basis, index map) or None.
    """
    if g.spec != y.spec:
        raise TermError("element and basis belong to different specs")
    mid = lub(g.domain, y)
    spec = g.spec
    targets: list[Leaf] = []
    for cell in y.cells:
        below = [c for c in mid.cells if find_ancestor(y, c) == cell]
        first = below[0]
        img = g.image_of_leaf(first)
        target = transport(first, img, cell)
        try:
            check_leaf(spec, target)
        except TermError:
            return None
        for c in below:
            if g.image_of_leaf(c) != transport(cell, target, c):
                return None
        targets.append(target)
    try:
        rng = Basis.from_cells(spec, targets)
    except TermError:
        return None
    return rng, tuple(rng.index_of(t) for t in targets)


def construct_from_images(spec: AlgebraSpec, images) -> Element:
    """Extend roots -> images to an automorphism; the images must form an
    admissible basis (in any order), which is exactly when this succeeds."""
    images = list(images)
    rng = Basis.from_cells(spec, images)
    dom = Basis.roots(spec)
    if len(images) != len(dom):
        raise TermError("need exactly one image per root")
    perm = [rng.index_of(img) for img in images]
    return Element(spec, dom, rng, perm)


def random_element(spec: AlgebraSpec, size_bound: int, seed: int) -> Element:
    """Seed-deterministic random element with bases of equal size <= bound."""
    if size_bound < spec.roots:
        raise TermError("size bound below the root count")
    rng = random.Random(seed)
    colors: list[int] = []
    size = spec.roots
    while True:
        options = [c for c in range(spec.num_colors) if size + spec.arity(c) - 1 <= size_bound]
        if not options or (colors and rng.random() < 0.25):
            break
        c = rng.choice(options)
        colors.append(c)
        size += spec.arity(c) - 1

    def build(order):
        basis = Basis.roots(spec)
        from .terms import expand as expand_basis

        for color in order:
            leaf = basis.cells[rng.randrange(len(basis))]
            basis = expand_basis(basis, leaf, color)
        return basis

    domain = build(colors)
    shuffled = list(colors)
    rng.shuffle(shuffled)
    range_ = build(shuffled)
    perm = list(range(len(domain)))
    rng.shuffle(perm)
    return reduce(Element(spec, domain, range_, perm))


@dataclass(frozen=True)
class FiniteSubgroup:
    """A finite set of elements closed under composition and inverse."""

    spec: AlgebraSpec
    elements: tuple[Element, ...]
    generators: tuple[Element, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def close_subgroup(gens, cap: int) -> FiniteSubgroup:
    """Closure of the generators, or CapExceededError past ``cap``.

    Deduplication uses identical reduced diagrams as a fast path and falls
    back to semantic equality, so it never assumes reduction is confluent.
    """
    if cap < 1:
        raise TermError("cap must be at least 1")
    gens = [reduce(g) for g in gens]
    if not gens:
        raise TermError("need at least one generator")
    spec = gens[0].spec
    for g in gens:
        if g.spec != spec:
            raise TermError("generators belong to different specs")
    seeds = gens + [invert(g) for g in gens]
    elems: list[Element] = [identity(spec)]
    keys = {elems[0].key()}
    frontier = [elems[0]]
    while frontier:
        nxt = []
        for x in frontier:
            for g in seeds:
                y = compose(g, x)
                if y.key() in keys:
                    continue
                if any(equals(y, z) for z in elems):
                    keys.add(y.key())
                    continue
                elems.append(y)
                keys.add(y.key())
                nxt.append(y)
                if len(elems) > cap:
                    raise CapExceededError(
                        f"subgroup closure exceeded cap {cap}"
                    )
        frontier = nxt
    elems.sort(key=lambda e: (len(e.domain), e.key()[0], e.key()[1], e.perm))
    return FiniteSubgroup(spec, tuple(elems), tuple(gens))


# ---------------------------------------------------------------------------
# serialisation
# ---------------------------------------------------------------------------

def element_to_text(g: Element) -> str:
    g = reduce(g)
    out = ["domain:"]
    out.append(script_to_text(expansion_script(g.domain)).rstrip("\n"))
    out.append("range:")
    out.append(script_to_text(expansion_script(g.range)).rstrip("\n"))
    out.append("perm: " + " ".join(str(p) for p in g.perm))
    return "\n".join(line for line in out if line != "") + "\n"


def parse_element_text(spec: AlgebraSpec, text: str) -> Element:
    section = None
    dom_lines: list[str] = []
    rng_lines: list[str] = []
    perm: tuple[int, ...] | None = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line == "domain:":
            section = dom_lines
        elif line == "range:":
            section = rng_lines
        elif line.startswith("perm:"):
            perm = tuple(int(x) for x in line[5:].split())
            section = None
        elif section is not None:
            section.append(line)
        else:
            raise TermError(f"unexpected line in element text: {line!r}")
    if perm is None:
        raise TermError("element text has no perm line")
    dom = replay_script(spec, parse_script_text("\n".join(dom_lines)))
    rng = replay_script(spec, parse_script_text("\n".join(rng_lines)))
    return Element(spec, dom, rng, perm)


def group_to_text(q: FiniteSubgroup) -> str:
    return "--\n".join(element_to_text(g) for g in q.elements)


def parse_group_text(spec: AlgebraSpec, text: str, cap: int = 4096) -> FiniteSubgroup:
    blocks = [blk for blk in text.split("--") if blk.strip()]
    gens = [parse_element_text(spec, blk) for blk in blocks]
    return close_subgroup(gens, cap)
