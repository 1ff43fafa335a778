import pytest

from cantorv.stein import (
    ComplexError,
    SimplicialComplex,
    build_stein,
    classify_vertex,
    coarsening_vertex,
    complexes_isomorphic_via,
    descending_link,
    h_descending_link,
    height,
    homology,
    l0_matches_model,
    link_vertices,
    model_Kn,
    vertex_height,
    vertex_le,
)
from cantorv.terms import Basis, enumerate_bases, expand, leq, elementary_leq


def _expand_all(basis, color):
    for cell in list(basis.cells):
        basis = expand(basis, cell, color)
    return basis


def _grid(brin2v):
    x = Basis.roots(brin2v)
    return _expand_all(expand(x, x.cells[0], 0), 1)


# -- complexes and homology -----------------------------------------------

def test_point_has_trivial_reduced_homology():
    cx = SimplicialComplex({0: [frozenset(("p",))]})
    rep = homology(cx, rational=True)
    assert rep.reduced_vanishes()
    assert rep.betti_rational == rep.betti_gf2


def test_circle_has_one_loop():
    edges = [frozenset((i, (i + 1) % 4)) for i in range(4)]
    cx = SimplicialComplex.from_maximal(edges)
    rep = homology(cx, rational=True)
    assert rep.betti_gf2 == {0: 0, 1: 1}
    assert rep.betti_rational == {0: 0, 1: 1}


def test_two_points():
    cx = SimplicialComplex({0: [frozenset(("a",)), frozenset(("b",))]})
    rep = homology(cx)
    assert rep.betti_gf2 == {0: 1}


def test_filled_triangle_contractible():
    cx = SimplicialComplex.from_maximal([frozenset((0, 1, 2))])
    assert homology(cx, rational=True).reduced_vanishes()


def test_empty_complex_reduced_homology():
    rep = homology(SimplicialComplex({}))
    assert rep.betti_gf2 == {-1: 1}


def test_euler_equals_alternating_count():
    cx = SimplicialComplex.from_maximal(
        [frozenset((0, 1, 2)), frozenset((2, 3))]
    )
    rep = homology(cx)
    f = cx.f_vector()
    assert rep.euler == f[0] - f[1] + f.get(2, 0)


def test_join_with_point_is_cone():
    base = SimplicialComplex.from_maximal(
        [frozenset((0, 1)), frozenset((1, 2)), frozenset((2, 0))]
    )
    cone = base.join(SimplicialComplex({0: [frozenset(("apex",))]}))
    assert homology(cone).reduced_vanishes()


# -- model complex ----------------------------------------------------------

def test_model_k4_matching_complex(v21):
    k4 = model_Kn(v21, 4)
    assert k4.f_vector() == {0: 6, 1: 3}
    assert k4.connected_components() == 3
    rep = homology(k4, rational=True)
    assert rep.betti_gf2[0] == 2
    assert rep.betti_rational[0] == 2


def test_model_empty_below_min_arity(v31):
    assert model_Kn(v31, 2).is_empty()


def test_model_vertex_count(specs):
    from math import comb

    for spec in specs.values():
        n = 5
        cx = model_Kn(spec, n)
        expected = sum(
            comb(n, spec.arity(c)) for c in range(spec.num_colors) if spec.arity(c) <= n
        )
        assert len(cx.vertices()) == expected


def test_model_simplices_are_disjoint_families(stein23):
    cx = model_Kn(stein23, 5)
    for d, simplices in cx.simplices.items():
        for s in simplices:
            members = list(s)
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    assert not (members[i][1] & members[j][1])


# -- the truncated complex ---------------------------------------------------

def test_build_stein_smallest_window(v21):
    cx = build_stein(v21, 2)
    assert cx.f_vector() == {0: 2, 1: 1}


def test_build_stein_vertices_match_enumeration(v21, stein23):
    for spec, cap in [(v21, 4), (stein23, 4)]:
        cx = build_stein(spec, cap)
        assert len(cx.vertices()) == len(enumerate_bases(spec, cap))


def test_build_stein_edges_are_elementary(v21):
    cx = build_stein(v21, 4)
    for d, simplices in cx.simplices.items():
        if d == 0:
            continue
        for s in simplices:
            chain = sorted(s, key=len)
            assert leq(chain[0], chain[-1])
            assert elementary_leq(chain[0], chain[-1])


def test_build_stein_faces_closed(v21):
    cx = build_stein(v21, 4)
    for d in cx.simplices:
        if d == 0:
            continue
        for s in cx.simplices[d]:
            for v in s:
                assert cx.contains_simplex(s - {v})


# -- links --------------------------------------------------------------------

def test_link_of_halves_is_a_point(v21):
    cx = descending_link(v21, 2)
    assert cx.f_vector() == {0: 1}


def test_link_vertices_have_smaller_size(stein23):
    for t in range(2, 6):
        for v in link_vertices(stein23, t):
            assert len(v) < t


def test_link_of_grid_contains_expected_bases(brin2v):
    grid = _grid(brin2v)
    x = Basis.roots(brin2v)
    vs = set(link_vertices(brin2v, 4))
    assert coarsening_vertex(brin2v, grid, x) in vs
    vsplit = expand(x, x.cells[0], 0)
    hsplit = expand(x, x.cells[0], 1)
    assert coarsening_vertex(brin2v, grid, vsplit) in vs
    assert coarsening_vertex(brin2v, grid, hsplit) in vs


def test_l0_subcomplex_of_link(stein23):
    for t in (3, 4, 5):
        full = set(link_vertices(stein23, t))
        very = set(link_vertices(stein23, t, very=True))
        assert very <= full


def test_l0_isomorphic_to_model_subdivision(v21, stein23, brin2v):
    for spec in (v21, stein23, brin2v):
        for t in range(2, 6):
            assert l0_matches_model(spec, t)


def test_link_order_is_partial(stein23):
    vs = link_vertices(stein23, 4)
    for u in vs:
        assert vertex_le(u, u)
    for u in vs:
        for v in vs:
            if vertex_le(u, v) and vertex_le(v, u):
                assert u == v


# -- heights ------------------------------------------------------------------

def test_height_of_grid_coarsening(brin2v):
    grid = _grid(brin2v)
    x = Basis.roots(brin2v)
    assert height(grid, x) == (4, 1)


def test_height_of_very_elementary_is_zero_vector(brin2v):
    grid = _grid(brin2v)
    x = Basis.roots(brin2v)
    vsplit = expand(x, x.cells[0], 0)
    h = height(grid, vsplit)
    assert h[:-1] == (0,)
    assert h[-1] == 2


def test_heights_totally_ordered(stein23):
    hs = [vertex_height(stein23, v) for v in link_vertices(stein23, 5)]
    for a in hs:
        for b in hs:
            assert a <= b or b <= a


def test_height_rejects_non_elementary(v21):
    x = Basis.roots(v21)
    four = _expand_all(expand(x, x.cells[0], 0), 0)
    with pytest.raises(Exception):
        height(four, x)


# -- height-descending links --------------------------------------------------

def test_classification(brin2v):
    full = frozenset(((frozenset(range(4)), frozenset((0, 1))),))
    assert classify_vertex(brin2v, full) == "ii"
    for v in link_vertices(brin2v, 6):
        kinds = {"very-elementary", "i", "ii"}
        assert classify_vertex(brin2v, v) in kinds


def test_uplink_empty_for_maximal_vertex(brin2v):
    # the all-singletons-with-one-pair vertex at t=2: nothing finer below h
    vs = link_vertices(brin2v, 2)
    rep = h_descending_link(brin2v, 2, vs[0])
    assert rep.uplink.is_empty()


def test_join_structure(brin2v):
    lv = [v for v in link_vertices(brin2v, 6) if classify_vertex(brin2v, v) == "i"]
    rep = h_descending_link(brin2v, 6, lv[0])
    down_simplices = {s for ss in rep.downlink.simplices.values() for s in ss}
    up_simplices = {s for ss in rep.uplink.simplices.values() for s in ss}
    joined = {s for ss in rep.complex.simplices.values() for s in ss}
    for a in down_simplices:
        for b in up_simplices:
            assert (a | b) in joined
    assert down_simplices <= joined and up_simplices <= joined


def test_case_i_uplinks_contractible_homology(brin2v, stein23):
    for spec in (brin2v, stein23):
        for t in range(2, 7):
            for v in link_vertices(spec, t):
                if classify_vertex(spec, v) != "i":
                    continue
                rep = h_descending_link(spec, t, v)
                assert rep.uplink_cone_witness is not None
                assert homology(rep.uplink).reduced_vanishes()


def test_downlink_preserves_c_vector(brin2v):
    for t in (4, 6):
        for v in link_vertices(brin2v, t):
            if classify_vertex(brin2v, v) == "very-elementary":
                continue
            h_descending_link(brin2v, t, v)  # raises on violations


def test_h_link_rejects_foreign_vertex(brin2v, stein23):
    # a vertex with a 3-element block is valid for the 2,3-block spec only
    v = next(
        vert
        for vert in link_vertices(stein23, 4)
        if any(len(leaves) == 3 for leaves, _ in vert)
    )
    with pytest.raises(ComplexError):
        h_descending_link(brin2v, 4, v)


# -- isomorphism helper ---------------------------------------------------------

def test_iso_helper_detects_mismatch():
    a = SimplicialComplex.from_maximal([frozenset((0, 1))])
    b = SimplicialComplex.from_maximal([frozenset((10,)), frozenset((11,))])
    assert not complexes_isomorphic_via(a, b, lambda v: v + 10)
    c = SimplicialComplex.from_maximal([frozenset((10, 11))])
    assert complexes_isomorphic_via(a, c, lambda v: v + 10)
