"""Centralisers and normalisers of finite subgroups.

Pipeline: find a setwise-invariant basis, minimise it, split it into orbit
types, and read off the centraliser's factors: for each realized type, a
locally finite kernel of label maps glued along diagonal refinement, and a
copy of the group over one root per orbit of that type, acting diagonally.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .algebra import AlgebraSpec
from .cones import Cone, ConeTuple
from .elements import (
    Element,
    FiniteSubgroup,
    apply_to_basis,
    compose,
    equals,
    identity,
    permutation_element,
    represent_on,
)
from .terms import Basis, Leaf, TermError, lower_closure, lub, root_leaf, split_leaf, transport


class IterationCapExceededError(RuntimeError):
    """The invariant-basis iteration failed to stabilise within its cap."""


class BruteForceCapError(RuntimeError):
    """A brute-force enumeration (symmetric group scan) exceeded its cap."""


# ---------------------------------------------------------------------------
# group bookkeeping
# ---------------------------------------------------------------------------

def _perm_mul(p, q):
    """(p ∘ q)[i] = p[q[i]]: apply q first, matching left actions."""
    return tuple(p[q[i]] for i in range(len(p)))


def _perm_inv(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


class GroupData:
    """Index-based multiplication structure of a finite subgroup."""

    def __init__(self, q: FiniteSubgroup):
        self.subgroup = q
        self.elements = list(q.elements)
        n = len(self.elements)
        self.identity_index = next(
            i for i, g in enumerate(self.elements) if equals(g, identity(q.spec))
        )
        self.mult = [[0] * n for _ in range(n)]
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                prod = compose(a, b)
                self.mult[i][j] = next(
                    k for k, c in enumerate(self.elements) if equals(prod, c)
                )
        self.inv = [0] * n
        for i in range(n):
            self.inv[i] = next(
                j for j in range(n) if self.mult[i][j] == self.identity_index
            )

    def __len__(self) -> int:
        return len(self.elements)

    def conjugate_subgroup(self, h: frozenset[int], g: int) -> frozenset[int]:
        gi = self.inv[g]
        return frozenset(self.mult[self.mult[g][x]][gi] for x in h)

    def subgroups_conjugate(self, h1: frozenset[int], h2: frozenset[int]) -> int | None:
        """Least conjugator index with g h1 g^-1 == h2, or None."""
        if len(h1) != len(h2):
            return None
        for g in range(len(self.elements)):
            if self.conjugate_subgroup(h1, g) == h2:
                return g
        return None

    def is_cyclic(self) -> bool:
        n = len(self.elements)
        for g in range(n):
            seen = {self.identity_index}
            cur = g
            while cur != self.identity_index:
                seen.add(cur)
                cur = self.mult[g][cur]
            if len(seen) == n:
                return True
        return n == 1


# ---------------------------------------------------------------------------
# invariant bases
# ---------------------------------------------------------------------------

def invariant_basis(q: FiniteSubgroup, max_iter: int = 64) -> Basis:
    """A basis fixed setwise by every element of q.

    Iterates Y <- lub(Y, images of the refined Y through each element) until
    the basis stabilises; the fixed point is provably invariant.
    """
    spec = q.spec
    y = Basis.roots(spec)
    for _ in range(max_iter):
        acc = y
        for g in q.elements:
            mid = lub(g.domain, y)
            acc = lub(acc, apply_to_basis(g, mid))
        if acc == y:
            for g in q.elements:
                rep = represent_on(g, y)
                if rep is None or rep[0] != y:
                    raise IterationCapExceededError(
                        "fixed point is not invariant; model violation"
                    )
            return y
        y = acc
    raise IterationCapExceededError(f"no invariant basis within {max_iter} rounds")


def _is_invariant(q: FiniteSubgroup, y: Basis) -> bool:
    for g in q.elements:
        rep = represent_on(g, y)
        if rep is None or rep[0] != y:
            return False
    return True


def minimize_invariant_basis(y: Basis, q: FiniteSubgroup) -> Basis:
    """Smallest invariant basis reachable from y by contractions
    (exhaustive search below y; ties broken canonically)."""
    if not _is_invariant(q, y):
        raise TermError("basis is not invariant")
    best = y
    for cand in lower_closure(y):
        if len(cand) < len(best) and _is_invariant(q, cand):
            best = cand
    return best


# ---------------------------------------------------------------------------
# orbit types
# ---------------------------------------------------------------------------

@dataclass
class OrbitData:
    indices: tuple[int, ...]          # positions in Y, canonical order
    marked: int                       # least position
    stabilizer: frozenset[int]        # subgroup of Q fixing the marked leaf
    type_id: str = ""
    numbering: tuple[int, ...] = ()   # orbit letter k -> position in Y


@dataclass
class TypeData:
    type_id: str
    m: int                            # orbit length
    orbit_ids: tuple[int, ...]        # which orbits realize the type
    phi: dict[int, tuple[int, ...]]   # Q element index -> permutation of [m]

    @property
    def r(self) -> int:
        return len(self.orbit_ids)


@dataclass
class InvariantBasisReport:
    basis: Basis
    group: GroupData
    perms: dict[int, tuple[int, ...]]  # Q element index -> permutation of Y
    orbits: list[OrbitData]
    types: dict[str, TypeData]

    def type_of_orbit(self, orbit_id: int) -> str:
        return self.orbits[orbit_id].type_id


def orbit_types(y: Basis, q: FiniteSubgroup) -> InvariantBasisReport:
    """Split an invariant basis into orbits and classify their types.

    Types are identified by point-stabiliser conjugacy; the marked element
    of each orbit is its canonically least leaf, and every orbit of a type
    is numbered compatibly with the type's reference orbit, so one
    permutation representation serves all of them.
    """
    group = GroupData(q)
    perms: dict[int, tuple[int, ...]] = {}
    for gi, g in enumerate(group.elements):
        rep = represent_on(g, y)
        if rep is None or rep[0] != y:
            raise TermError("basis is not invariant under the subgroup")
        perms[gi] = rep[1]
    n = len(y)
    seen: set[int] = set()
    orbits: list[OrbitData] = []
    for start in range(n):
        if start in seen:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for pos in frontier:
                for p in perms.values():
                    tgt = p[pos]
                    if tgt not in orbit:
                        orbit.add(tgt)
                        nxt.append(tgt)
            frontier = nxt
        seen |= orbit
        indices = tuple(sorted(orbit))
        marked = indices[0]
        stab = frozenset(gi for gi, p in perms.items() if p[marked] == marked)
        orbits.append(OrbitData(indices=indices, marked=marked, stabilizer=stab))

    types: dict[str, TypeData] = {}
    refs: list[tuple[OrbitData, int]] = []  # reference orbit, type counter
    counter = 0
    for oid, orb in enumerate(orbits):
        assigned = None
        for ref, _ in refs:
            g0 = group.subgroups_conjugate(orb.stabilizer, ref.stabilizer)
            if g0 is not None:
                assigned = ref
                break
        if assigned is None:
            # new type: reference numbering is the canonical position order
            orb.numbering = orb.indices
            m = len(orb.indices)
            pos_to_letter = {pos: k for k, pos in enumerate(orb.numbering)}
            phi = {
                gi: tuple(pos_to_letter[perms[gi][pos]] for pos in orb.numbering)
                for gi in range(len(group))
            }
            if m == 1:
                tid = "trivial"
            elif len(orb.stabilizer) == 1 and m == len(group):
                tid = "regular"
            else:
                tid = f"type{counter}"
            counter += 1
            orb.type_id = tid
            types[tid] = TypeData(type_id=tid, m=m, orbit_ids=(oid,), phi=phi)
            refs.append((orb, counter))
        else:
            tid = assigned.type_id
            orb.type_id = tid
            tdata = types[tid]
            # Transport the reference numbering through the equivariant
            # bijection sending marked -> g0(ref_marked), which exists since
            # stab(marked) = g0 stab(ref_marked) g0^-1.
            g0 = group.subgroups_conjugate(assigned.stabilizer, orb.stabilizer)
            t = perms[g0][assigned.marked]
            numbering = [0] * tdata.m
            pos_to_letter_ref = {pos: k for k, pos in enumerate(assigned.numbering)}
            for gi in range(len(group)):
                letter = pos_to_letter_ref[perms[gi][t]]
                numbering[letter] = perms[gi][orb.marked]
            orb.numbering = tuple(numbering)
            types[tid] = TypeData(
                type_id=tid,
                m=tdata.m,
                orbit_ids=tdata.orbit_ids + (oid,),
                phi=tdata.phi,
            )
    report = InvariantBasisReport(
        basis=y, group=group, perms=perms, orbits=orbits, types=types
    )
    _check_numbering(report)
    return report


def _check_numbering(report: InvariantBasisReport) -> None:
    """Every orbit's numbering must intertwine the type's representation."""
    for orb in report.orbits:
        tdata = report.types[orb.type_id]
        for gi, p in report.perms.items():
            phi = tdata.phi[gi]
            for k in range(tdata.m):
                if p[orb.numbering[k]] != orb.numbering[phi[k]]:
                    raise TermError("orbit numbering fails equivariance")


def type_centralizer_L(
    report: InvariantBasisReport, type_id: str, cap: int = 8
) -> tuple[tuple[int, ...], ...]:
    """All permutations of the orbit letters commuting with the type's
    representation, by exhaustive scan of the symmetric group.

    Cross-validated against the quotient description
    N_{P}(P_1)/P_1 for P the image and P_1 a point stabiliser, and against
    P itself when the acting group is cyclic.
    """
    tdata = report.types[type_id]
    m = tdata.m
    if m > cap:
        raise BruteForceCapError(f"orbit length {m} above brute-force cap {cap}")
    image = {tdata.phi[gi] for gi in range(len(report.group))}
    out = []
    for perm in itertools.permutations(range(m)):
        if all(_perm_mul(perm, s) == _perm_mul(s, perm) for s in image):
            out.append(perm)
    result = tuple(sorted(out))
    stab1 = {s for s in image if s[0] == 0}
    normal = {
        s
        for s in image
        if {_perm_mul(_perm_mul(s, t), _perm_inv(s)) for t in stab1} == stab1
    }
    if len(result) * len(stab1) != len(normal):
        raise TermError("centraliser size disagrees with quotient description")
    if report.group.is_cyclic() and set(result) != image:
        raise TermError("cyclic image must be its own letter centraliser")
    return result


@dataclass
class TypeFactor:
    type_id: str
    m: int
    r: int
    L: tuple[tuple[int, ...], ...]


@dataclass
class CentralizerStructure:
    spec: AlgebraSpec
    report: InvariantBasisReport
    factors: list[TypeFactor]
    d: int

    def statement(self) -> str:
        parts = [f"(K[{f.type_id}] x| V_{f.r})" for f in self.factors]
        return "C = " + " x ".join(parts)

    def lines(self) -> list[str]:
        out = [f"t_realized={len(self.factors)}"]
        for f in self.factors:
            perm_list = " ".join(",".join(str(v) for v in p) for p in f.L)
            out.append(
                f"type={f.type_id} m={f.m} r={f.r} |L|={len(f.L)} L={perm_list}"
            )
        out.append(self.statement())
        out.append(
            f"note: raw orbit counts reported; counts mod d={self.d} lie in (0, d]"
        )
        return out


def centralizer_structure(q: FiniteSubgroup, cap: int = 8) -> CentralizerStructure:
    y = minimize_invariant_basis(invariant_basis(q), q)
    report = orbit_types(y, q)
    factors = [
        TypeFactor(
            type_id=tid,
            m=tdata.m,
            r=tdata.r,
            L=type_centralizer_L(report, tid, cap=cap),
        )
        for tid, tdata in report.types.items()
    ]
    return CentralizerStructure(
        spec=q.spec, report=report, factors=factors, d=q.spec.d
    )


# ---------------------------------------------------------------------------
# kernel elements and lifts
# ---------------------------------------------------------------------------

def quotient_spec(spec: AlgebraSpec, r: int) -> AlgebraSpec:
    return AlgebraSpec(r, spec.blocks)


@dataclass
class KernelElement:
    """A basis over the type quotient with one letter-centralising label
    per leaf; equal elements are related by diagonal refinement."""

    qspec: AlgebraSpec
    basis: Basis
    labels: dict[Leaf, tuple[int, ...]]

    def __post_init__(self) -> None:
        if set(self.labels) != set(self.basis.cells):
            raise TermError("labels must cover exactly the basis leaves")


def expand_kernel(k: KernelElement, leaf: Leaf, color: int) -> KernelElement:
    """Diagonal refinement: children inherit the parent's label."""
    from .terms import expand as expand_basis

    basis = expand_basis(k.basis, leaf, color)
    labels = dict(k.labels)
    lab = labels.pop(leaf)
    for child in split_leaf(k.qspec, leaf, color):
        labels[child] = lab
    return KernelElement(k.qspec, basis, labels)


def kernel_equals(a: KernelElement, b: KernelElement) -> bool:
    """Equality in the glued system: same labels over a common refinement."""
    common = lub(a.basis, b.basis)
    from .terms import find_ancestor

    for cell in common.cells:
        la = a.labels[find_ancestor(a.basis, cell)]
        lb = b.labels[find_ancestor(b.basis, cell)]
        if la != lb:
            return False
    return True


def kernel_action(v: Element, k: KernelElement) -> KernelElement:
    """The quotient group acts by carrying labels along the diagram."""
    mid = lub(v.domain, k.basis)
    from .terms import find_ancestor

    expanded_labels = {cell: k.labels[find_ancestor(k.basis, cell)] for cell in mid.cells}
    image = apply_to_basis(v, mid)
    labels = {v.image_of_leaf(cell): lab for cell, lab in expanded_labels.items()}
    return KernelElement(k.qspec, image, labels)


def _orbit_copies(report: InvariantBasisReport, type_id: str):
    """For each orbit of the type (quotient root order): the list mapping
    letter k to the orbit's Y-leaf at that letter."""
    tdata = report.types[type_id]
    y = report.basis
    out = []
    for oid in tdata.orbit_ids:
        orb = report.orbits[oid]
        out.append([y.cells[pos] for pos in orb.numbering])
    return out


def build_kernel_element(
    report: InvariantBasisReport, type_id: str, k: KernelElement
) -> Element:
    """Realize a kernel element as an automorphism: inside every orbit copy
    of the quotient leaf a, permute the copies by a's label; fix the rest."""
    spec = report.basis.spec
    tdata = report.types[type_id]
    copies = _orbit_copies(report, type_id)
    if k.qspec.roots != tdata.r or k.qspec.blocks != spec.blocks:
        raise TermError("kernel element is over the wrong quotient")
    for lab in k.labels.values():
        if len(lab) != tdata.m:
            raise TermError("label degree does not match the orbit length")
    mapping: dict[Leaf, Leaf] = {}
    other = {
        report.basis.cells[pos]
        for oid, orb in enumerate(report.orbits)
        if orb.type_id != type_id
        for pos in orb.indices
    }
    for cell in other:
        mapping[cell] = cell
    for j, letter_cells in enumerate(copies):
        qroot = root_leaf(k.qspec, j)
        for a in k.basis.cells:
            if a.root != j:
                continue
            lab = k.labels[a]
            for pos_k, target in enumerate(letter_cells):
                src = transport(qroot, target, a)
                dst = transport(qroot, letter_cells[lab[pos_k]], a)
                mapping[src] = dst
    dom = Basis.from_cells_trusted(spec, mapping.keys())
    rng = Basis.from_cells_trusted(spec, mapping.values())
    perm = [rng.index_of(mapping[c]) for c in dom.cells]
    return Element(spec, dom, rng, perm)


def encode_kernel_element(k: KernelElement, letters) -> ConeTuple:
    """The covering cone tuple indexed by a fixed order on the labels:
    slot s is the cone of leaves labelled s."""
    cones = []
    for s in letters:
        cells = [a for a in k.basis.cells if k.labels[a] == s]
        cones.append(Cone.from_leaves(k.qspec, cells))
    return ConeTuple(k.qspec, cones)


def splitting_lift(
    report: InvariantBasisReport, type_id: str, v: Element
) -> Element:
    """Lift a quotient element diagonally across the orbits of one type."""
    spec = report.basis.spec
    tdata = report.types[type_id]
    copies = _orbit_copies(report, type_id)
    if v.spec.roots != tdata.r or v.spec.blocks != spec.blocks:
        raise TermError("element is over the wrong quotient")
    mapping: dict[Leaf, Leaf] = {}
    for orb in report.orbits:
        if orb.type_id != type_id:
            for pos in orb.indices:
                cell = report.basis.cells[pos]
                mapping[cell] = cell
    qspec = v.spec
    for i, dcell in enumerate(v.domain.cells):
        rcell = v.range.cells[v.perm[i]]
        src_root = root_leaf(qspec, dcell.root)
        dst_root = root_leaf(qspec, rcell.root)
        for letter in range(tdata.m):
            src = transport(src_root, copies[dcell.root][letter], dcell)
            dst = transport(dst_root, copies[rcell.root][letter], rcell)
            mapping[src] = dst
    dom = Basis.from_cells_trusted(spec, mapping.keys())
    rng = Basis.from_cells_trusted(spec, mapping.values())
    perm = [rng.index_of(mapping[c]) for c in dom.cells]
    return Element(spec, dom, rng, perm)


# ---------------------------------------------------------------------------
# normalisers
# ---------------------------------------------------------------------------

@dataclass
class NormalizerReport:
    basis: Basis
    sy_order: int
    normalizer_order: int
    centralizer_order: int
    weyl_order: int
    coset_reps: tuple[tuple[int, ...], ...]

    def lines(self) -> list[str]:
        return [
            f"|Y|={len(self.basis)} |S(Y)|={self.sy_order}",
            f"|N_S(Y)(Q)|={self.normalizer_order} |C_S(Y)(Q)|={self.centralizer_order}",
            f"weyl={self.weyl_order}",
            "coset_reps="
            + " ".join(",".join(str(v) for v in p) for p in self.coset_reps),
        ]


def normalizer_analysis(q: FiniteSubgroup, cap: int = 40320) -> NormalizerReport:
    """Weyl group data inside the setwise stabiliser of the minimal
    invariant basis: the full normaliser is the centraliser times this
    finite normaliser, so the Weyl group is computed here exactly."""
    y = minimize_invariant_basis(invariant_basis(q), q)
    n = len(y)
    if math.factorial(n) > cap:
        raise BruteForceCapError(f"|S(Y)| = {n}! exceeds cap {cap}")
    report = orbit_types(y, q)
    image = {report.perms[gi] for gi in range(len(report.group))}
    normal: list[tuple[int, ...]] = []
    central: list[tuple[int, ...]] = []
    for perm in itertools.permutations(range(n)):
        conj = {_perm_mul(_perm_mul(perm, s), _perm_inv(perm)) for s in image}
        if conj == image:
            normal.append(perm)
            if all(_perm_mul(perm, s) == _perm_mul(s, perm) for s in image):
                central.append(perm)
    weyl = len(normal) // len(central)
    central_set = set(central)
    reps: list[tuple[int, ...]] = []
    covered: set[tuple[int, ...]] = set()
    for p in sorted(normal):
        if p in covered:
            continue
        reps.append(p)
        covered |= {_perm_mul(p, c) for c in central_set}
    return NormalizerReport(
        basis=y,
        sy_order=math.factorial(n),
        normalizer_order=len(normal),
        centralizer_order=len(central),
        weyl_order=weyl,
        coset_reps=tuple(reps),
    )


def permutation_stabilizer_elements(y: Basis):
    """All elements fixing the basis setwise, i.e. its leaf permutations."""
    n = len(y)
    return [
        permutation_element(y, perm) for perm in itertools.permutations(range(n))
    ]


def decompose_fixing_element(report: InvariantBasisReport, x: Element):
    """Attempt to split a centralising element that fixes the invariant
    basis setwise into per-type (kernel labels, root permutation) data.

    Returns {type_id: (labels per quotient root, root permutation)} and
    verifies the reconstruction; None when x does not fix the basis, does
    not centralise, or its letter maps leave the letter centralisers.
    Membership testing beyond basis-fixing elements is not attempted.
    """
    y = report.basis
    rep = represent_on(x, y)
    if rep is None or rep[0] != y:
        return None
    perm = rep[1]
    group = report.group
    for gi in range(len(group)):
        p = report.perms[gi]
        if tuple(perm[p[i]] for i in range(len(y))) != tuple(
            p[perm[i]] for i in range(len(y))
        ):
            return None
    out: dict[str, tuple[tuple, tuple]] = {}
    for tid, tdata in report.types.items():
        orbit_positions = {oid: report.orbits[oid].numbering for oid in tdata.orbit_ids}
        root_perm = [None] * tdata.r
        labels = [None] * tdata.r
        for j, oid in enumerate(tdata.orbit_ids):
            numbering = orbit_positions[oid]
            target_pos = perm[numbering[0]]
            target_j = next(
                (
                    jj
                    for jj, oid2 in enumerate(tdata.orbit_ids)
                    if target_pos in report.orbits[oid2].indices
                ),
                None,
            )
            if target_j is None:
                return None
            tgt_numbering = orbit_positions[tdata.orbit_ids[target_j]]
            letter_of = {pos: k for k, pos in enumerate(tgt_numbering)}
            lmap = tuple(letter_of[perm[numbering[k]]] for k in range(tdata.m))
            root_perm[j] = target_j
            labels[j] = lmap
        if sorted(root_perm) != list(range(tdata.r)):
            return None
        L = set(type_centralizer_L(report, tid))
        if any(l not in L for l in labels):
            return None
        out[tid] = (tuple(labels), tuple(root_perm))
    # verify the reconstruction: per type, letter maps then the root swap
    spec = y.spec
    rebuilt = identity(spec)
    for tid, (labels, root_perm) in out.items():
        tdata = report.types[tid]
        qspec = quotient_spec(spec, tdata.r)
        roots = Basis.roots(qspec)
        kernel = KernelElement(
            qspec, roots, {roots.cells[j]: labels[j] for j in range(tdata.r)}
        )
        part = build_kernel_element(report, tid, kernel)
        lift = splitting_lift(report, tid, permutation_element(roots, root_perm))
        rebuilt = compose(compose(lift, part), rebuilt)
    if not equals(rebuilt, x):
        return None
    return out
