"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report.  Every tolerance here is exact (integer or rational equality); no
numeric slack is involved anywhere.
"""

import itertools
import math
import random
import time

import pytest

from cantorv.algebra import parse_spec
from cantorv.centralizer import (
    KernelElement,
    build_kernel_element,
    encode_kernel_element,
    invariant_basis,
    kernel_action,
    minimize_invariant_basis,
    normalizer_analysis,
    orbit_types,
    quotient_spec,
    splitting_lift,
    type_centralizer_L,
)
from cantorv.cones import (
    Cone,
    ConeTuple,
    act,
    act_tuple,
    cone_disjoint,
    cone_equals,
    cone_norm,
    disjointify,
    tuple_classify,
    tuple_witness,
)
from cantorv.elements import (
    close_subgroup,
    compose,
    equals,
    identity,
    invert,
    permutation_element,
    random_element,
)
from cantorv.stein import (
    classify_vertex,
    h_descending_link,
    homology,
    l0_matches_model,
    link_vertices,
    model_Kn,
)
from cantorv.terms import (
    Basis,
    Leaf,
    TermError,
    elementary_leq,
    enumerate_bases,
    expand,
    glb,
    is_admissible,
    leq,
    lub,
    max_elementary,
    root_leaf,
    split_leaf,
)

from conftest import SPEC_SOURCES
from oracles import enumerate_partitions, reachable_cellsets

from fractions import Fraction as F


def _report(num, text):
    print(f"ACCEPTANCE {num}: PASS - {text}")


def _expand_all(basis, color):
    for cell in list(basis.cells):
        basis = expand(basis, cell, color)
    return basis


def _tracked_double_split(spec, first, second):
    """Split the root by ``first``, then every child by ``second``; return
    the basis and the leaves in construction (tree picture) order."""
    x = Basis.roots(spec)
    children = list(split_leaf(spec, x.cells[0], first))
    basis = expand(x, x.cells[0], first)
    order = []
    for child in children:
        grandchildren = list(split_leaf(spec, child, second))
        basis = expand(basis, child, second)
        order.extend(grandchildren)
    return basis, order


def test_criterion_1_identification_golden():
    t0 = time.time()
    for name, expected in [
        ("brin23", [1, 4, 2, 5, 3, 6]),
        ("stein23", [1, 2, 3, 4, 5, 6]),
    ]:
        spec = parse_spec(SPEC_SOURCES[name])
        left_basis, left_order = _tracked_double_split(spec, 0, 1)
        right_basis, right_order = _tracked_double_split(spec, 1, 0)
        assert left_basis == right_basis
        assert len(left_basis) == 6
        identification = [left_order.index(leaf) + 1 for leaf in right_order]
        assert identification == expected
    elapsed = time.time() - t0
    assert elapsed < 1.0
    _report(1, f"leaf identifications exact (interleave vs order-preserving), {elapsed:.2f}s")


def test_criterion_2_group_axiom_suite():
    t0 = time.time()
    triples = 1000
    for name, src in SPEC_SOURCES.items():
        spec = parse_spec(src)
        e = identity(spec)
        bound = spec.roots + 5
        for k in range(triples):
            f = random_element(spec, bound, 3 * k)
            g = random_element(spec, bound, 3 * k + 1)
            h = random_element(spec, bound, 3 * k + 2)
            assert equals(compose(compose(f, g), h), compose(f, compose(g, h)))
            assert equals(compose(f, invert(f)), e)
            assert equals(compose(e, f), f)
    elapsed = time.time() - t0
    assert elapsed < 120.0
    _report(2, f"{triples} exact triples x {len(SPEC_SOURCES)} specs in {elapsed:.1f}s")


def test_criterion_3_admissibility_oracle_equivalence():
    disagreements = 0
    checked = 0
    for name in ("stein23", "2v"):
        spec = parse_spec(SPEC_SOURCES[name])
        oracle = reachable_cellsets(spec, 5)
        for candidate in enumerate_partitions(spec, 5):
            checked += 1
            if is_admissible(spec, candidate)[0] != (candidate in oracle):
                disagreements += 1
    witness = frozenset(
        [
            Leaf(0, ((F(0), F(1, 2)),)),
            Leaf(0, ((F(1, 2), F(2, 3)),)),
            Leaf(0, ((F(2, 3), F(1)),)),
        ]
    )
    spec = parse_spec(SPEC_SOURCES["stein23"])
    assert not is_admissible(spec, witness)[0]
    assert witness not in reachable_cellsets(spec, 5)
    assert disagreements == 0
    _report(3, f"checker == expansion search on {checked} partition candidates, witness rejected by both")


def test_criterion_4_mod_d_law():
    produced = 0
    for name, src in SPEC_SOURCES.items():
        spec = parse_spec(src)
        d = spec.d
        for b in enumerate_bases(spec, spec.roots + 4):
            assert (len(b) - spec.roots) % d == 0
            produced += 1
        for seed in range(50):
            g = random_element(spec, spec.roots + 6, seed)
            for basis in (g.domain, g.range, lub(g.domain, g.range)):
                assert (len(basis) - spec.roots) % d == 0
                produced += 1
    # the constructor enforces the law on every basis the engine ever builds
    v31 = parse_spec(SPEC_SOURCES["v31"])
    x = Basis.roots(v31)
    with pytest.raises(TermError):
        Basis(v31, [root_leaf(v31, 0), root_leaf(v31, 0)], {})
    _report(4, f"size = roots (mod d) on {produced} bases; constructor guard active")


class _LazyOrder:
    """Order rows of the enumerated poset, computed on demand."""

    def __init__(self, bases):
        self.bases = bases
        self._up: dict[int, set[int]] = {}
        self._down: dict[int, set[int]] = {}

    def up(self, i):
        if i not in self._up:
            a = self.bases[i]
            self._up[i] = {
                j
                for j, b in enumerate(self.bases)
                if len(b) >= len(a) and leq(a, b)
            }
        return self._up[i]

    def down(self, i):
        if i not in self._down:
            b = self.bases[i]
            self._down[i] = {
                j
                for j, a in enumerate(self.bases)
                if len(a) <= len(b) and leq(a, b)
            }
        return self._down[i]


def _lattice_check(spec, bases, pairs, elementary_memo):
    from cantorv.terms import elementary_core

    index = {b.cellset(): i for i, b in enumerate(bases)}
    order = _LazyOrder(bases)
    for i, j in pairs:
        a, b = bases[i], bases[j]
        ubs = order.up(i) & order.up(j)
        join = lub(a, b)
        jid = index.get(join.cellset())
        if jid is None:
            assert not ubs
            assert leq(a, join) and leq(b, join)
        else:
            assert jid in ubs
            assert ubs <= order.up(jid)
        lbs = order.down(i) & order.down(j)
        meet = glb(a, b)
        mid = index[meet.cellset()]
        assert mid in lbs
        assert lbs <= order.down(mid)
        # elementary core against brute force, whenever comparable
        for lo, hi, lo_i, hi_i in ((a, b, i, j), (b, a, j, i)):
            if lo_i == hi_i or hi_i not in order.up(lo_i):
                continue
            core = elementary_core(lo, hi)
            cid = index[core.cellset()]
            brute = {
                k
                for k in order.down(hi_i)
                if k in order.up(lo_i) and _elem(bases, elementary_memo, lo_i, k)
            }
            assert cid in brute
            assert brute <= order.down(cid)


def _elem(bases, memo, i, k):
    if (i, k) not in memo:
        memo[(i, k)] = elementary_leq(bases[i], bases[k])
    return memo[(i, k)]


def test_criterion_5_lattice_laws():
    t0 = time.time()
    pair_count = 0
    for name, src in SPEC_SOURCES.items():
        spec = parse_spec(src)
        bases = enumerate_bases(spec, 6)
        n = len(bases)
        if n <= 100:
            pairs = list(itertools.combinations(range(n), 2))
        elif n <= 250:
            # all pairs with a small member, plus a seeded dense sample
            small = [i for i, b in enumerate(bases) if len(b) <= 5]
            pairs = list(itertools.combinations(small, 2))
            rng = random.Random(0)
            pairs += [(rng.randrange(n), rng.randrange(n)) for _ in range(2000)]
        else:
            small = [i for i, b in enumerate(bases) if len(b) <= 4]
            pairs = list(itertools.combinations(small, 2))
            rng = random.Random(0)
            pairs += [(rng.randrange(n), rng.randrange(n)) for _ in range(250)]
        _lattice_check(spec, bases, pairs, {})
        pair_count += len(pairs)
    elapsed = time.time() - t0
    assert elapsed < 300.0
    _report(5, f"lub/glb/core vs brute force on {pair_count} pairs in {elapsed:.1f}s")


def test_criterion_6_max_elementary_cardinality():
    for name, src in SPEC_SOURCES.items():
        spec = parse_spec(src)
        prod = math.prod(spec.arity(c) for c in range(spec.num_colors))
        for seed in range(100):
            basis = random_element(spec, spec.roots + 5, seed).domain
            assert len(max_elementary(basis)) == len(basis) * prod
    _report(6, "E(A) has exactly |A| * prod(arities) leaves on 100 random bases per spec")


def test_criterion_7_centralizer_of_sigma():
    t0 = time.time()
    v21 = parse_spec(SPEC_SOURCES["v21"])
    x = Basis.roots(v21)
    halves = expand(x, x.cells[0], 0)
    sigma = permutation_element(halves, [1, 0])
    q = close_subgroup([sigma], 8)
    report = orbit_types(minimize_invariant_basis(invariant_basis(q), q), q)
    assert list(report.types) == ["regular"]
    tdata = report.types["regular"]
    L = type_centralizer_L(report, "regular")
    assert (tdata.m, tdata.r, len(L)) == (2, 1, 2)

    qs = quotient_spec(v21, tdata.r)
    rng = random.Random(17)
    kernel_bases = enumerate_bases(qs, 4)
    built = 0
    for k in range(150):
        basis = kernel_bases[rng.randrange(len(kernel_bases))]
        labels = {c: L[rng.randrange(len(L))] for c in basis.cells}
        elem = build_kernel_element(
            report, "regular", KernelElement(qs, basis, labels)
        )
        assert equals(compose(elem, sigma), compose(sigma, elem))
        built += 1
    for k in range(150):
        v = random_element(qs, 5, k)
        elem = splitting_lift(report, "regular", v)
        assert equals(compose(elem, sigma), compose(sigma, elem))
        built += 1

    # mixed three-leaf example: factors of distinct types commute pairwise
    b3 = expand(halves, halves.cells[1], 0)
    tau = permutation_element(b3, [0, 2, 1])
    q2 = close_subgroup([tau], 8)
    rep2 = orbit_types(minimize_invariant_basis(invariant_basis(q2), q2), q2)
    assert {t.type_id for t in rep2.types.values()} == {"trivial", "regular"}
    qs_t = quotient_spec(v21, rep2.types["trivial"].r)
    qs_r = quotient_spec(v21, rep2.types["regular"].r)
    at, ar = Basis.roots(qs_t), Basis.roots(qs_r)
    trivial_side = [
        build_kernel_element(rep2, "trivial", KernelElement(qs_t, at, {at.cells[0]: (0,)})),
        splitting_lift(rep2, "trivial", random_element(qs_t, 4, 0)),
    ]
    regular_side = [
        build_kernel_element(rep2, "regular", KernelElement(qs_r, ar, {ar.cells[0]: (1, 0)})),
        splitting_lift(rep2, "regular", random_element(qs_r, 4, 1)),
    ]
    for a in trivial_side:
        for b in regular_side:
            assert equals(compose(a, b), compose(b, a))
    elapsed = time.time() - t0
    assert elapsed < 60.0
    _report(7, f"one regular type (m=2, r=1, |L|=2); {built} constructed elements commute, {elapsed:.1f}s")


def test_criterion_8_weyl_groups():
    v21 = parse_spec(SPEC_SOURCES["v21"])
    x = Basis.roots(v21)
    halves = expand(x, x.cells[0], 0)
    sigma_rep = normalizer_analysis(close_subgroup([permutation_element(halves, [1, 0])], 8))
    assert sigma_rep.weyl_order == 1

    v31 = parse_spec(SPEC_SOURCES["v31"])
    x3 = Basis.roots(v31)
    thirds = expand(x3, x3.cells[0], 0)
    rho_rep = normalizer_analysis(close_subgroup([permutation_element(thirds, [1, 2, 0])], 8))
    assert rho_rep.normalizer_order == 6
    assert rho_rep.centralizer_order == 3
    assert rho_rep.weyl_order == 2
    _report(8, "Weyl orders exact: 1 for the swap, 2 for the 3-cycle")


def _random_cone_from(spec, rng, bases):
    basis = bases[rng.randrange(len(bases))]
    cells = [c for c in basis.cells if rng.random() < 0.6]
    return Cone.from_leaves(spec, cells), basis


def test_criterion_9_cone_suite():
    t0 = time.time()
    # refinement invariance: 500 pairs spread over the bundled specs
    pairs_done = 0
    spec_list = [parse_spec(src) for src in SPEC_SOURCES.values()]
    bases_cache = {id(s): enumerate_bases(s, s.roots + 4) for s in spec_list}
    rng = random.Random(9)
    while pairs_done < 500:
        spec = spec_list[pairs_done % len(spec_list)]
        cone, basis = _random_cone_from(spec, rng, bases_cache[id(spec)])
        if cone.is_empty():
            pairs_done += 1
            continue
        other = Cone.from_leaves(
            spec, [c for c in basis.cells if c not in set(cone.cells)]
        )
        cells = list(cone.cells)
        target = cells[rng.randrange(len(cells))]
        color = rng.randrange(spec.num_colors)
        refined = Cone.from_leaves(
            spec,
            [c for c in cells if c != target] + list(split_leaf(spec, target, color)),
        )
        assert cone_equals(cone, refined)
        assert cone_norm(cone) == cone_norm(refined)
        assert cone_disjoint(other, cone) == cone_disjoint(other, refined)
        pairs_done += 1

    # the action preserves covering + disjoint
    for seed in range(120):
        spec = spec_list[seed % len(spec_list)]
        bases = bases_cache[id(spec)]
        basis = bases[seed % len(bases)]
        local = random.Random(seed)
        groups = [[], []]
        for c in basis.cells:
            groups[local.randrange(2)].append(c)
        t = ConeTuple(spec, [Cone.from_leaves(spec, g) for g in groups])
        assert t.covering and t.disjoint
        g = random_element(spec, spec.roots + 4, seed)
        image = act_tuple(g, t)
        assert image.covering and image.disjoint

    # witness succeeds exactly on matching invariants, exhaustively
    for name in ("v21", "v31"):
        spec = parse_spec(SPEC_SOURCES[name])
        tuples = []
        for basis in enumerate_bases(spec, 5):
            for assignment in itertools.product((0, 1), repeat=len(basis)):
                groups = [[], []]
                for cell, slot in zip(basis.cells, assignment):
                    groups[slot].append(cell)
                tuples.append(
                    ConeTuple(spec, [Cone.from_leaves(spec, g) for g in groups])
                )
        classes = {}
        for t in tuples:
            classes.setdefault(tuple_classify(t), []).append(t)
        for invariant, members in classes.items():
            rep = members[0]
            for t in members:
                g = tuple_witness(rep, t)
                assert g is not None
                for a, b in zip(rep.cones, t.cones):
                    assert cone_equals(act(g, a), b)
        for inv1, inv2 in itertools.combinations(classes, 2):
            assert tuple_witness(classes[inv1][0], classes[inv2][0]) is None
    elapsed = time.time() - t0
    _report(9, f"refinement invariance x500, action preserves flags x120, witness iff invariant ({elapsed:.1f}s)")


def test_criterion_10_desk_scale_topology():
    t0 = time.time()
    v21 = parse_spec(SPEC_SOURCES["v21"])
    for t in range(2, 7):
        assert l0_matches_model(v21, t)

    k4 = model_Kn(v21, 4)
    assert k4.connected_components() == 3
    assert homology(k4).betti_gf2[0] == 2

    case_i_total = 0
    for name in ("2v", "stein23", "brin23", "mixed232"):
        spec = parse_spec(SPEC_SOURCES[name])
        for t in range(2, 7):
            for vertex in link_vertices(spec, t):
                if classify_vertex(spec, vertex) != "i":
                    continue
                case_i_total += 1
                rep = h_descending_link(spec, t, vertex)
                assert rep.uplink_cone_witness is not None
                assert homology(rep.uplink).reduced_vanishes()
    elapsed = time.time() - t0
    assert elapsed < 600.0
    _report(10, f"L0 = subdivision of model for t<=6; K4 components exact; {case_i_total} case-i uplinks vanish ({elapsed:.1f}s)")


def test_criterion_11_equivariance_of_encode_and_disjointify():
    t0 = time.time()
    # rho: disjointify commutes with the action, 200 random pairs
    spec_names = ("v21", "stein23")
    done = 0
    rng = random.Random(23)
    bases_cache = {
        name: enumerate_bases(parse_spec(SPEC_SOURCES[name]), 5)
        for name in spec_names
    }
    while done < 200:
        name = spec_names[done % 2]
        spec = parse_spec(SPEC_SOURCES[name])
        bases = bases_cache[name]
        basis = bases[rng.randrange(len(bases))]
        groups = [[], []]
        for c in basis.cells:
            mask = rng.randrange(1, 4)
            if mask & 1:
                groups[0].append(c)
            if mask & 2:
                groups[1].append(c)
        t = ConeTuple(spec, [Cone.from_leaves(spec, g) for g in groups])
        assert t.covering
        g = random_element(spec, spec.roots + 4, 7000 + done)
        lhs = disjointify(act_tuple(g, t))
        rhs = act_tuple(g, disjointify(t))
        for a, b in zip(lhs.cones, rhs.cones):
            assert cone_equals(a, b)
        done += 1

    # xi: encoding kernel elements commutes with the quotient action
    v21 = parse_spec(SPEC_SOURCES["v21"])
    x = Basis.roots(v21)
    halves = expand(x, x.cells[0], 0)
    sigma = permutation_element(halves, [1, 0])
    q = close_subgroup([sigma], 8)
    report = orbit_types(minimize_invariant_basis(invariant_basis(q), q), q)
    L = type_centralizer_L(report, "regular")
    qs = quotient_spec(v21, report.types["regular"].r)
    kernel_bases = enumerate_bases(qs, 5)
    rng = random.Random(31)
    for k in range(200):
        basis = kernel_bases[rng.randrange(len(kernel_bases))]
        labels = {c: L[rng.randrange(len(L))] for c in basis.cells}
        kern = KernelElement(qs, basis, labels)
        g = random_element(qs, 5, 9000 + k)
        lhs = encode_kernel_element(kernel_action(g, kern), L)
        rhs = [act(g, c) for c in encode_kernel_element(kern, L).cones]
        for a, b in zip(lhs.cones, rhs):
            assert cone_equals(a, b)
    elapsed = time.time() - t0
    _report(11, f"act-then-map == map-then-act, 200 exact pairs per map ({elapsed:.1f}s)")
