from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import assume, given, strategies as st

from twoquadrics import cones, linalg
from twoquadrics.lattice import Side, make_space, pair
from twoquadrics.planes import all_labels, canonical, plane_class
from twoquadrics.weyl import GroupTooLarge, sigma, weyl_group

import oracles


# -- generic double description ---------------------------------------------


def test_orthant_self_dual():
    eye = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    C = cones.cone_from_rays(eye)
    assert C.facets == tuple(sorted(eye))
    assert cones.same_cone(cones.dual(C), C)


def test_zero_ray_rejected():
    with pytest.raises(ValueError):
        cones.cone_from_rays([(0, 0, 0), (1, 0, 0)])


def test_lineality_reported():
    C = cones.cone_from_rays([(1, 0, 0), (-1, 0, 0), (0, 1, 0)])
    assert not C.is_pointed
    assert C.lineality == ((1, 0, 0),)
    assert C.rays == ((0, 1, 0),)
    assert C.equations == ((0, 0, 1),)
    assert cones.membership(C, (-7, 2, 0))
    assert not cones.membership(C, (0, -1, 0))


def test_cone_from_facets_lower_dimensional():
    C = cones.cone_from_facets([(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, -1)])
    assert C.rays == ((0, 1, 0), (1, 0, 0))
    assert C.cone_dim == 2


small_vectors = st.lists(st.integers(-3, 3), min_size=1, max_size=1)


@st.composite
def small_cones(draw):
    d = draw(st.integers(3, 6))
    k = draw(st.integers(d, 8))
    vec = st.lists(st.integers(-3, 3), min_size=d, max_size=d).filter(any)
    rays = draw(st.lists(vec, min_size=k, max_size=k))
    return d, rays


@given(small_cones())
def test_double_description_matches_brute_force(data):
    d, rays = data
    assume(oracles.matrix_rank(rays) == d)
    C = cones.cone_from_rays(rays)
    assume(C.is_pointed)
    extreme, facets = oracles.brute_force_cone(rays)
    assert list(C.rays) == extreme
    assert list(C.facets) == facets
    back = cones.cone_from_facets(C.facets)
    assert back.rays == C.rays


@given(small_cones())
def test_dual_involution_and_pairing(data):
    d, rays = data
    assume(oracles.matrix_rank(rays) == d)
    C = cones.cone_from_rays(rays)
    assume(C.is_pointed)
    D = cones.dual(C)
    assert cones.same_cone(cones.dual(D), C)
    assert all(linalg.dot(f, r) >= 0 for f in C.facets for r in C.rays)
    # every facet contains at least d - 1 linearly independent rays
    for f in C.facets:
        tight = [r for r in C.rays if linalg.dot(f, r) == 0]
        assert linalg.rank(tight) == d - 1


def test_face_of():
    C = cones.cone_from_rays([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    F = cones.face_of(C, (1, 0, 0))
    assert F.rays == ((0, 0, 1), (0, 1, 0))
    with pytest.raises(ValueError):
        cones.face_of(C, (1, -1, 0))


def test_polytope_unbounded():
    with pytest.raises(cones.DegenerateCone):
        cones.polytope_from_inequalities([(0, 1, 0), (0, 0, 1)], 2)


def test_polytope_square():
    P = cones.polytope_from_inequalities([(1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1)], 2)
    assert len(P.vertices) == 4
    assert P.contains((0, 0)) and P.in_interior((0, 0))
    assert not P.in_interior((1, 0)) and P.contains((1, 0))
    assert P.centroid() == (0, 0)


# -- the demihypercube --------------------------------------------------------


@pytest.mark.parametrize("N, facets", [(5, 26), (7, 78)])
def test_demihypercube_against_qhull(N, facets):
    P = cones.demihypercube_by_double_description(N)
    assert list(P.vertices) == oracles.demihypercube_vertices(N)
    assert len(P.inequalities) == facets == 2 ** (N - 1) + 2 * N
    hull = oracles.hull_facets(P.vertices)
    assert len(hull) == facets
    ours = set()
    for h in P.inequalities:
        # c0 + c.alpha >= 0  <=>  -c.alpha - c0 <= 0 in qhull's (normal, offset) convention
        v = [-Fraction(c) for c in h[1:]] + [-Fraction(h[0])]
        scale = max(abs(c) for c in v[:-1])
        ours.add(tuple(round(float(c / scale), 6) for c in v))
    assert ours == hull


@pytest.mark.parametrize("N", [5, 7])
def test_demihypercube_listed_facets(N):
    P = cones.demihypercube_by_double_description(N)
    assert set(P.inequalities) == set(cones.demihypercube_inequalities(N))
    assert cones.demihypercube(N).vertices == P.vertices


@pytest.mark.parametrize("N", [5, 7])
def test_demihypercube_simplex_facets(N):
    P = cones.demihypercube(N)
    for I in cones.even_subsets(N):
        h = cones.H_inequality(I, 1, N)
        assert sum(1 for v in P.vertices if cones.evaluate_inequality(h, v) == 0) == N


def test_demihypercube_small_N():
    with pytest.raises(ValueError):
        cones.demihypercube(3)


def test_eval_H_examples():
    N = 5
    assert cones.eval_H((), (0,) * N) == Fraction(N, 2)
    assert cones.eval_H({1, 3}, cones.hypercube_vertex({1, 3}, N)) == 0
    assert cones.eval_H({1, 2}, cones.hypercube_vertex({1, 3}, N)) == 2


@given(N=st.sampled_from([5, 7, 9]), data=st.data())
def test_eval_H_is_graph_distance(N, data):
    sub = st.frozensets(st.integers(1, N))
    I, J = data.draw(sub), data.draw(sub)
    assert cones.eval_H(I, cones.hypercube_vertex(J, N)) == len(I ^ J)


# -- E and its dual -----------------------------------------------------------


@pytest.mark.parametrize("n", [2, 4])
def test_E_counts_and_facets(n):
    N = n + 3
    E = cones.E_cone(n)
    assert len(E.rays) == 2 ** (n + 2)
    assert set(E.rays) == {oracles.primitive(v) for v in oracles.all_plane_vectors(n)}
    assert len(E.facets) == 2 ** (n + 2) + 2 * N
    assert set(E.facets) == set(cones.E_facet_normals(n))
    facet_cone = cones.cone_from_facets(cones.E_facet_normals(n), make_space(n, Side.Z), "eps")
    assert cones.same_cone(facet_cone, E)


@pytest.mark.parametrize("n", [2, 4])
def test_E_dual(n):
    E = cones.E_cone(n)
    D = cones.dual(E)
    assert len(D.rays) == 2 ** (n + 2) + 2 * (n + 3)
    gens = {linalg.primitive(g.canonical) for g in cones.E_dual_generators(n)}
    assert set(D.rays) == gens
    assert cones.contains_cone(E, D)
    assert cones.same_cone(cones.dual(D), E)


def test_fiber_class_in_E():
    Z = make_space(2, Side.Z)
    x = Z.eta() / 2 + Z.eps(1)
    assert x == plane_class(canonical((), 2)) + plane_class(canonical({1}, 2))
    assert cones.membership(cones.E_cone(2), x)


@pytest.mark.parametrize("n", [2, 4])
def test_faces_of_E(n):
    N = n + 3
    m = n // 2
    Z = make_space(n, Side.Z)
    E = cones.E_cone(n)
    F = cones.face_of(E, cones.delta_class(canonical((), n)))
    assert set(F.rays) == {oracles.primitive(oracles.plane_eps({i}, n)) for i in range(1, N + 1)}
    G = cones.face_of(E, Z.eta() / 2 + Z.eps(1))
    expected = {oracles.primitive(oracles.plane_eps(I, n)) for I in oracles.all_subsets(N)
                if 1 not in I and len(I) % 2 != m % 2}
    assert set(G.rays) == expected


@pytest.mark.parametrize("n", [2, 4, 6])
def test_delta_pairing(n):
    N = n + 3
    for L in all_labels(n)[:6]:
        d = cones.delta_class(L)
        for k in range(1, N + 1, 2):
            for I in list(combinations(range(1, N + 1), k))[:10]:
                target = oracles.plane_eps(L.rep ^ set(I), n)
                assert oracles.z_pair(d.canonical, target, n) == Fraction(k - 1, 2)


def test_M_basis_inequalities():
    n = 2
    Z = make_space(n, Side.Z)
    ineqs = cones.E_dual_inequalities_M_basis(n)
    # z = 1, t = 0: every inequality reads 2 >= 0
    x = Z.vector([1] + [0] * 5, "M")
    assert all(linalg.dot(h, x.coords) == 2 for h in ineqs)
    assert cones.membership(cones.E_dual_cone(n), x)
    C = cones.cone_from_facets(ineqs, Z, "M")
    D = cones.E_dual_cone(n)
    assert all(cones.membership(D, r) for r in C.ray_classes())
    assert all(cones.membership(C, r) for r in D.ray_classes())


# -- linear symmetries ----------------------------------------------------------


@pytest.mark.parametrize("n", [2, 4])
def test_sign_changes_are_symmetries(n):
    E = cones.E_cone(n)
    eta = make_space(n, Side.Z).eta()
    for I in cones.even_subsets(n + 3):
        assert cones.is_linear_symmetry(sigma(I, n + 3).matrix(), E, eta)


def test_non_vertex_map_rejected():
    E = cones.E_cone(2)
    eta = make_space(2, Side.Z).eta()
    scale = tuple(tuple(Fraction(2 * (i == j)) for j in range(6)) for i in range(6))
    assert not cones.is_linear_symmetry(scale, E, eta)


def test_symmetry_cap():
    with pytest.raises(GroupTooLarge):
        cones.linear_symmetries(cones.E_cone(6), make_space(6, Side.Z).eta())


@pytest.mark.slow
def test_symmetry_group_n2():
    G = cones.linear_symmetries(cones.E_cone(2), make_space(2, Side.Z).eta())
    assert G.order == 1920
    mats = set(G.matrices)
    assert mats == {w.matrix() for w in weyl_group(5).elements()}


def test_json_sorted():
    E = cones.E_cone(2)
    data = E.to_json()
    assert data["rays"] == sorted(data["rays"])
    assert data["ambient"] == {"n": 2, "side": "ZSide"}
