"""Exact rational polyhedral cones and the demihypercube.

Cones are kept in double description: primitive integer generators and
primitive integer facet normals, both sorted. Conversion between the two uses
the incremental double description method over Python integers with the
combinatorial adjacency test on bitset zero sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import linalg
from .lattice import LatticeClass, LatticeSpace, Side, make_space, pair
from .planes import all_labels, plane_class
from .weyl import GroupHandle, GroupTooLarge, WeylElement


class DegenerateCone(ValueError):
    """The requested operation needs a pointed or full-dimensional cone."""


IntVec = tuple[int, ...]


def _idot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _combine(ca: int, a: IntVec, cb: int, b: IntVec) -> IntVec:
    return linalg.primitive_int(tuple(ca * x + cb * y for x, y in zip(a, b)))


def double_description(ineqs: Sequence[IntVec], dim: int) -> tuple[list[IntVec], list[IntVec]]:
    """Extreme rays and a lineality basis of ``{x : a . x >= 0 for a in ineqs}``.

    Rays are determined modulo the lineality space; callers canonicalize.
    """
    lin: list[IntVec] = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    rays: list[IntVec] = []
    zs: list[int] = []
    done = 0
    for k, a in enumerate(ineqs):
        bit = 1 << k
        lvals = [_idot(a, l) for l in lin]
        piv = next((i for i, v in enumerate(lvals) if v), None)
        if piv is not None:
            l = lin.pop(piv)
            al = lvals.pop(piv)
            if al < 0:
                l, al = tuple(-x for x in l), -al
            lin = [_combine(al, lj, -v, l) if v else lj for lj, v in zip(lin, lvals)]
            new_rays = []
            for r in rays:
                v = _idot(a, r)
                new_rays.append(_combine(al, r, -v, l) if v else r)
            rays = new_rays + [l]
            zs = [z | bit for z in zs] + [done]
            done |= bit
            continue
        vals = [_idot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            zs = [z | bit if v == 0 else z for z, v in zip(zs, vals)]
            done |= bit
            continue
        need = dim - len(lin) - 2
        new_rays = [rays[i] for i in range(len(rays)) if vals[i] >= 0]
        new_zs = [zs[i] | bit if vals[i] == 0 else zs[i]
                  for i in range(len(rays)) if vals[i] >= 0]
        for p in pos:
            zp = zs[p]
            for q in neg:
                common = zp & zs[q]
                if common.bit_count() < need:
                    continue
                for r, zr in enumerate(zs):
                    if r != p and r != q and zr & common == common:
                        break
                else:
                    new_rays.append(_combine(vals[p], rays[q], -vals[q], rays[p]))
                    new_zs.append(common | bit)
        rays, zs = new_rays, new_zs
        done |= bit
    return rays, lin


def _to_int_vectors(vectors: Iterable[Sequence]) -> list[IntVec]:
    out = []
    for v in vectors:
        fr = linalg.as_fractions(v)
        if not any(fr):
            raise ValueError("zero vector")
        out.append(linalg.primitive(fr))
    return out


def _reduce_basis(vectors: Sequence[Sequence]) -> tuple[tuple, tuple[int, ...]]:
    if not vectors:
        return (), ()
    return linalg.rref(vectors)


def _canonical(vectors: Iterable[Sequence], modulo: Sequence[Sequence] = ()) -> tuple[IntVec, ...]:
    """Primitive, deduplicated, sorted; reduced modulo the span of ``modulo``."""
    red, piv = _reduce_basis(modulo)
    out = set()
    for v in vectors:
        v = linalg.as_fractions(v)
        for row, p in zip(red, piv):
            if v[p]:
                c = v[p]
                v = tuple(x - c * y for x, y in zip(v, row))
        if any(v):
            out.add(linalg.primitive(v))
    return tuple(sorted(out))


def _canonical_span(vectors: Sequence[Sequence]) -> tuple[IntVec, ...]:
    red, _ = _reduce_basis(vectors)
    return tuple(linalg.primitive(r) for r in red)


def _zero_sets(gens: Sequence[IntVec], constraints: Sequence[IntVec]) -> list[int]:
    out = []
    for g in gens:
        z = 0
        for k, c in enumerate(constraints):
            if _idot(c, g) == 0:
                z |= 1 << k
        out.append(z)
    return out


def _extreme_filter(gens: Sequence[IntVec], constraints: Sequence[IntVec]) -> list[IntVec]:
    """Irredundant generators of a pointed cone given its facet normals."""
    gens = sorted(set(gens))
    zs = _zero_sets(gens, constraints)
    keep = []
    for i, zi in enumerate(zs):
        if not any(j != i and zj & zi == zi for j, zj in enumerate(zs)):
            keep.append(gens[i])
    return keep


@dataclass(frozen=True)
class RationalCone:
    """A cone in double description.

    ``facets`` pair with points by the standard dot product of coordinates;
    ``equations`` vanish on the cone and ``lineality`` spans its largest
    linear subspace. Rays and facets are canonical modulo these.
    """

    dim: int
    rays: tuple[IntVec, ...]
    facets: tuple[IntVec, ...]
    lineality: tuple[IntVec, ...] = ()
    equations: tuple[IntVec, ...] = ()
    space: LatticeSpace | None = None
    basis: str | None = None

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    @property
    def cone_dim(self) -> int:
        return self.dim - len(self.equations)

    def coords_of(self, x) -> tuple:
        if isinstance(x, LatticeClass):
            if self.space is None:
                raise ValueError("cone has no ambient lattice")
            return x.to(self.basis).coords
        return linalg.as_fractions(x)

    def ray_classes(self) -> list[LatticeClass]:
        if self.space is None:
            raise ValueError("cone has no ambient lattice")
        return [self.space.vector(r, self.basis) for r in self.rays]

    def to_json(self) -> dict:
        ambient = None if self.space is None else {"n": self.space.n, "side": self.space.side.value}
        out = {"ambient": ambient, "basis": self.basis,
               "rays": [list(r) for r in self.rays],
               "facets": [list(f) for f in self.facets]}
        if self.lineality:
            out["lineality"] = [list(v) for v in self.lineality]
        if self.equations:
            out["equations"] = [list(v) for v in self.equations]
        return out


def _resolve_ambient(vectors, space, basis):
    vectors = list(vectors)
    if vectors and isinstance(vectors[0], LatticeClass):
        space = space or vectors[0].space
        basis = basis or space.canonical_basis
        vectors = [v.to(basis).coords for v in vectors]
    elif space is not None:
        basis = basis or space.canonical_basis
    return vectors, space, basis


def _build(dim, rays, lin, facets, eqs, space, basis) -> RationalCone:
    lin_c = _canonical_span(lin)
    eqs_c = _canonical_span(eqs)
    return RationalCone(dim, _canonical(rays, lin_c), _canonical(facets, eqs_c),
                        lin_c, eqs_c, space, basis)


def cone_from_rays(rays, space: LatticeSpace | None = None, basis: str | None = None,
                   dim: int | None = None) -> RationalCone:
    """The cone generated by ``rays`` (classes or coordinate vectors)."""
    vecs, space, basis = _resolve_ambient(rays, space, basis)
    if dim is None:
        if vecs:
            dim = len(vecs[0])
        elif space is not None:
            dim = space.rank
        else:
            raise ValueError("cannot infer the ambient dimension of an empty cone")
    gens = _to_int_vectors(vecs)
    if not gens:
        eye = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
        return _build(dim, [], [], [], eye, space, basis)
    facets, eqs = double_description(gens, dim)
    constraints = list(facets) + list(eqs) + [tuple(-x for x in e) for e in eqs]
    lin = linalg.nullspace(constraints, dim) if constraints else [
        tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    if not lin:
        rays_out = _extreme_filter(gens, facets)
    else:
        rays_out, lin = double_description(constraints, dim)
    return _build(dim, rays_out, lin, facets, eqs, space, basis)


def cone_from_facets(normals, space: LatticeSpace | None = None, basis: str | None = None,
                     dim: int | None = None) -> RationalCone:
    """The cone ``{x : a . x >= 0}`` for the given normals (standard dot product)."""
    normals = list(normals)
    if space is not None:
        basis = basis or space.canonical_basis
        dim = dim or space.rank
    if dim is None:
        dim = len(normals[0])
    cons = _to_int_vectors(normals)
    rays, lin = double_description(cons, dim)
    if not rays and not lin:
        eye = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
        return _build(dim, [], [], [], eye, space, basis)
    dual_cons = list(rays) + list(lin) + [tuple(-x for x in l) for l in lin]
    eqs = linalg.nullspace(dual_cons, dim)
    if not eqs:
        facets = _extreme_filter(cons, rays)
    else:
        facets, eqs = double_description(dual_cons, dim)
    return _build(dim, rays, lin, facets, eqs, space, basis)


def _gram(cone: RationalCone) -> linalg.Matrix:
    if cone.space is None:
        return linalg.identity(cone.dim)
    return cone.space.gram(cone.basis)


def dual(cone: RationalCone) -> RationalCone:
    """Functionals nonnegative on ``cone``, written back through the bilinear form."""
    g = _gram(cone)
    ginv = linalg.inverse(g)
    rays = [linalg.mat_vec(ginv, f) for f in cone.facets]
    lin = [linalg.mat_vec(ginv, e) for e in cone.equations]
    facets = [linalg.mat_vec(g, r) for r in cone.rays]
    eqs = [linalg.mat_vec(g, l) for l in cone.lineality]
    return _build(cone.dim, rays, lin, facets, eqs, cone.space, cone.basis)


def evaluate(cone: RationalCone, normal: Sequence, x) -> Fraction:
    return linalg.dot(normal, cone.coords_of(x))


def membership(cone: RationalCone, x) -> bool:
    c = cone.coords_of(x)
    return (all(linalg.dot(f, c) >= 0 for f in cone.facets)
            and all(linalg.dot(e, c) == 0 for e in cone.equations))


def in_interior(cone: RationalCone, x) -> bool:
    """Relative interior membership."""
    c = cone.coords_of(x)
    return (all(linalg.dot(f, c) > 0 for f in cone.facets)
            and all(linalg.dot(e, c) == 0 for e in cone.equations))


def _functional_values(cone: RationalCone, functional) -> tuple[list, list]:
    if isinstance(functional, LatticeClass):
        classes = cone.ray_classes()
        lin = [cone.space.vector(l, cone.basis) for l in cone.lineality]
        return [pair(functional, r) for r in classes], [pair(functional, l) for l in lin]
    f = linalg.as_fractions(functional)
    return ([linalg.dot(f, r) for r in cone.rays], [linalg.dot(f, l) for l in cone.lineality])


def face_of(cone: RationalCone, functional) -> RationalCone:
    """The face cut out by a functional nonnegative on the cone.

    A :class:`LatticeClass` functional acts through the lattice form; a bare
    vector acts through the coordinate dot product.
    """
    rvals, lvals = _functional_values(cone, functional)
    if any(v < 0 for v in rvals) or any(v != 0 for v in lvals):
        raise ValueError("functional is not nonnegative on the cone")
    gens = [r for r, v in zip(cone.rays, rvals) if v == 0]
    gens += list(cone.lineality) + [tuple(-x for x in l) for l in cone.lineality]
    return cone_from_rays(gens, cone.space, cone.basis, dim=cone.dim)


def contains_cone(outer: RationalCone, inner: RationalCone) -> bool:
    return (all(membership(outer, r) for r in inner.rays)
            and all(membership(outer, l) and membership(outer, tuple(-x for x in l))
                    for l in inner.lineality))


def same_cone(a: RationalCone, b: RationalCone) -> bool:
    return a.dim == b.dim and a.rays == b.rays and a.lineality == b.lineality


def map_cone(matrix: linalg.Matrix, cone: RationalCone, space=None, basis=None) -> RationalCone:
    """Image of a cone under an invertible linear map (matrix acts on coordinates)."""
    rays = [linalg.mat_vec(matrix, r) for r in cone.rays]
    lin = [linalg.mat_vec(matrix, l) for l in cone.lineality]
    inv_t = linalg.transpose(linalg.inverse(matrix))
    facets = [linalg.mat_vec(inv_t, f) for f in cone.facets]
    eqs = [linalg.mat_vec(inv_t, e) for e in cone.equations]
    return _build(cone.dim, rays, lin, facets, eqs, space, basis)


# ---------------------------------------------------------------------------
# affine slices and the demihypercube

Inequality = tuple[int, ...]  # (c0, c1..cN): c0 + sum c_i alpha_i >= 0


def normalize_inequality(const, coeffs: Sequence) -> Inequality:
    return linalg.primitive((const,) + tuple(coeffs))


def H_inequality(I: Iterable[int], k, N: int, at_least: bool = True) -> Inequality:
    """``H_I >= k`` (or ``<= k``) in slice coordinates."""
    I = frozenset(I)
    const = Fraction(N, 2) - Fraction(k)
    coeffs = [Fraction(-1) if i in I else Fraction(1) for i in range(1, N + 1)]
    if not at_least:
        const, coeffs = -const, [-c for c in coeffs]
    return normalize_inequality(const, coeffs)


def box_inequality(i: int, N: int, upper: bool) -> Inequality:
    """``alpha_i <= 1/2`` when ``upper`` else ``alpha_i >= -1/2``."""
    s = -1 if upper else 1
    return normalize_inequality(Fraction(1, 2), [s if j == i else 0 for j in range(1, N + 1)])


def eval_H(I: Iterable[int], point: Sequence) -> Fraction:
    """``H_I = sum_{j not in I} (1/2 + a_j) + sum_{i in I} (1/2 - a_i)``."""
    I = frozenset(I)
    half = Fraction(1, 2)
    return sum(((half - Fraction(a)) if j in I else (half + Fraction(a))
                for j, a in enumerate(point, start=1)), Fraction(0))


def hypercube_vertex(I: Iterable[int], N: int) -> tuple[Fraction, ...]:
    I = frozenset(I)
    return tuple(Fraction(1, 2) if i in I else Fraction(-1, 2) for i in range(1, N + 1))


def evaluate_inequality(ineq: Sequence, point: Sequence) -> Fraction:
    return ineq[0] + linalg.dot(ineq[1:], point)


@dataclass(frozen=True)
class AffinePolytope:
    """A polytope in slice coordinates ``alpha_1..alpha_N``."""

    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    inequalities: tuple[Inequality, ...]
    equations: tuple[Inequality, ...] = ()

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    def contains(self, point: Sequence) -> bool:
        return (all(evaluate_inequality(h, point) >= 0 for h in self.inequalities)
                and all(evaluate_inequality(e, point) == 0 for e in self.equations))

    def in_interior(self, point: Sequence) -> bool:
        return (all(evaluate_inequality(h, point) > 0 for h in self.inequalities)
                and all(evaluate_inequality(e, point) == 0 for e in self.equations))

    def tight(self, point: Sequence) -> list[Inequality]:
        return [h for h in self.inequalities if evaluate_inequality(h, point) == 0]

    def centroid(self) -> tuple[Fraction, ...]:
        k = len(self.vertices)
        return tuple(sum(col, Fraction(0)) / k for col in zip(*self.vertices))

    def cone(self) -> RationalCone:
        """Homogenization ``{(t, t * alpha)}``."""
        return cone_from_rays([(Fraction(1),) + v for v in self.vertices])

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "vertices": [[str(c) for c in v] for v in self.vertices],
                "inequalities": [list(h) for h in self.inequalities],
                "equations": [list(e) for e in self.equations]}


def _polytope_from_cone(dim: int, cone: RationalCone) -> AffinePolytope:
    if cone.lineality or any(r[0] <= 0 for r in cone.rays):
        raise DegenerateCone("polyhedron is unbounded")
    verts = tuple(sorted(tuple(Fraction(x, r[0]) for x in r[1:]) for r in cone.rays))
    ineqs = tuple(f for f in cone.facets if any(f[1:]))
    return AffinePolytope(dim, verts, ineqs, cone.equations)


def polytope_from_inequalities(ineqs: Iterable[Sequence], dim: int) -> AffinePolytope:
    """Vertices and irredundant inequalities of a bounded intersection of halfspaces."""
    cons = [linalg.primitive(h) for h in ineqs]
    cons.append((1,) + (0,) * dim)
    return _polytope_from_cone(dim, cone_from_facets(cons, dim=dim + 1))


def polytope_from_vertices(vertices: Iterable[Sequence]) -> AffinePolytope:
    verts = [linalg.as_fractions(v) for v in vertices]
    dim = len(verts[0])
    return _polytope_from_cone(dim, cone_from_rays([(Fraction(1),) + v for v in verts]))


def odd_subsets(N: int) -> list[frozenset]:
    return [frozenset(c) for k in range(1, N + 1, 2) for c in combinations(range(1, N + 1), k)]


def even_subsets(N: int) -> list[frozenset]:
    return [frozenset(c) for k in range(0, N + 1, 2) for c in combinations(range(1, N + 1), k)]


def demihypercube_inequalities(N: int) -> list[Inequality]:
    """Box constraints and ``H_I >= 1`` for even ``|I|``."""
    out = []
    for i in range(1, N + 1):
        out.append(box_inequality(i, N, upper=False))
        out.append(box_inequality(i, N, upper=True))
    out.extend(H_inequality(I, 1, N) for I in even_subsets(N))
    return out


def demihypercube(N: int) -> AffinePolytope:
    """Convex hull of the odd vertices of ``[-1/2, 1/2]^N`` with its known facets."""
    if N < 4:
        raise ValueError("the demihypercube is considered for N >= 4")
    verts = tuple(sorted(hypercube_vertex(I, N) for I in odd_subsets(N)))
    return AffinePolytope(N, verts, tuple(sorted(demihypercube_inequalities(N))))


def demihypercube_by_double_description(N: int) -> AffinePolytope:
    if N < 4:
        raise ValueError("the demihypercube is considered for N >= 4")
    return polytope_from_vertices(hypercube_vertex(I, N) for I in odd_subsets(N))


# ---------------------------------------------------------------------------
# the cone E spanned by the planes, and its dual


def E_cone(n: int) -> RationalCone:
    return cone_from_rays([plane_class(L) for L in all_labels(n)], basis="eps")


def E_dual_cone(n: int) -> RationalCone:
    return dual(E_cone(n))


def E_facet_normals(n: int) -> list[IntVec]:
    """Minimal inequalities of E in ``(eta, eps)`` coordinates."""
    N = n + 3
    out = []
    for i in range(1, N + 1):
        for s in (1, -1):
            out.append(linalg.primitive([2] + [s if j == i else 0 for j in range(1, N + 1)]))
    for I in even_subsets(N):
        out.append(linalg.primitive([2 * (n + 1)] + [-1 if j in I else 1 for j in range(1, N + 1)]))
    return out


def E_dual_generators(n: int) -> list[LatticeClass]:
    """``eta/2 +- eps_i`` and ``(n+1)/2 eta + (-1)^m (sum_{j not in I} eps_j - sum_{i in I} eps_i)``."""
    Z = make_space(n, Side.Z)
    m = n // 2
    N = n + 3
    sgn = (-1) ** m
    out = []
    for i in range(1, N + 1):
        out.append(Z.eta() / 2 + Z.eps(i))
        out.append(Z.eta() / 2 - Z.eps(i))
    for I in even_subsets(N):
        out.append(Z.vector([Fraction(n + 1, 2)] + [-sgn if j in I else sgn for j in range(1, N + 1)]))
    return out


def delta_class(L) -> LatticeClass:
    """``floor((m+1)/2) eta + (-1)^m M``: generator of the simplicial facet at M."""
    m = L.n // 2
    Z = make_space(L.n, Side.Z)
    return Z.eta() * ((m + 1) // 2) + plane_class(L) * ((-1) ** m)


def E_dual_inequalities_M_basis(n: int) -> list[IntVec]:
    """Membership in E^vee for ``z eta + sum t_i M_i``: one normal per ``|I| = m mod 2``."""
    m = n // 2
    N = n + 3
    out = []
    for k in range(m % 2, N + 1, 2):
        for I in combinations(range(1, N + 1), k):
            out.append(tuple([2] + [(k - m) - (2 if j in I else 0) for j in range(1, N + 1)]))
    return out


# ---------------------------------------------------------------------------
# linear symmetries of E fixing the eta pairing


@dataclass(frozen=True)
class LinearSymmetryGroup:
    space: LatticeSpace
    basis: str
    matrices: tuple[linalg.Matrix, ...]

    @property
    def order(self) -> int:
        return len(self.matrices)

    def as_weyl_elements(self) -> list[WeylElement]:
        """Read each map as a signed permutation of the ``eps_i`` (must fix ``eta``)."""
        out = []
        for mat in self.matrices:
            mat = _to_eps_basis(self.space, self.basis, mat)
            N = self.space.N
            if mat[0][0] != 1 or any(mat[0][1:]) or any(mat[i][0] for i in range(1, N + 1)):
                raise ValueError("map does not fix eta")
            perm, signs = [], []
            for col in range(1, N + 1):
                nz = [(r, mat[r][col]) for r in range(1, N + 1) if mat[r][col]]
                if len(nz) != 1 or abs(nz[0][1]) != 1:
                    raise ValueError("map is not a signed permutation of eps")
                perm.append(nz[0][0])
                signs.append(int(nz[0][1]))
            out.append(WeylElement(tuple(perm), tuple(signs)))
        return out

    def handle(self) -> GroupHandle:
        return GroupHandle(self.space.N, tuple(self.as_weyl_elements()))


def _to_eps_basis(space: LatticeSpace, basis: str, mat: linalg.Matrix) -> linalg.Matrix:
    if basis == "eps":
        return mat
    p = space.basis_matrix(basis)
    return linalg.mat_mul(p, linalg.mat_mul(mat, space.inverse_basis_matrix(basis)))


def _vertex_classes(E: RationalCone, eta: LatticeClass) -> list[tuple[Fraction, ...]]:
    verts = []
    for r in E.ray_classes():
        s = pair(eta, r)
        if s <= 0:
            raise DegenerateCone("eta must be positive on every ray")
        verts.append((r / s).to(E.basis).coords)
    return verts


def is_linear_symmetry(mat: linalg.Matrix, E: RationalCone, eta: LatticeClass) -> bool:
    """Whether ``mat`` (on E's coordinates) maps E onto E and preserves pairing with eta."""
    verts = _vertex_classes(E, eta)
    vset = set(verts)
    images = [linalg.mat_vec(mat, v) for v in verts]
    if set(images) != vset:
        return False
    g = E.space.gram(E.basis)
    eta_dual = linalg.mat_vec(g, eta.to(E.basis).coords)
    return linalg.mat_vec(linalg.transpose(mat), eta_dual) == eta_dual


def linear_symmetries(E: RationalCone, eta: LatticeClass, cap: int = 4) -> LinearSymmetryGroup:
    """All linear maps with ``f(E) = E`` and ``f(x) . eta = x . eta``.

    Searches vertex permutations that respect the facet incidence counts,
    extends each assignment on a basis of vertices linearly, and keeps the
    maps that permute the vertex set.
    """
    space = E.space
    if space is None or space.side is not Side.Z:
        raise ValueError("expected the plane cone on the Z side")
    if space.n > cap:
        raise GroupTooLarge(f"n={space.n} exceeds the symmetry search cap {cap}")
    verts = _vertex_classes(E, eta)
    index = {v: i for i, v in enumerate(verts)}
    k = len(verts)
    inc = [sum(1 << f for f, nrm in enumerate(E.facets) if linalg.dot(nrm, v) == 0) for v in verts]
    common = [[(inc[a] & inc[b]).bit_count() for b in range(k)] for a in range(k)]

    basis_idx: list[int] = []
    rows: list = []
    for i, v in enumerate(verts):
        if linalg.rank(rows + [v]) > len(rows):
            rows.append(v)
            basis_idx.append(i)
        if len(rows) == E.dim:
            break
    if len(rows) < E.dim:
        raise DegenerateCone("vertices do not span the ambient space")
    binv = linalg.inverse(linalg.from_columns([verts[i] for i in basis_idx]))
    g = space.gram(E.basis)
    eta_dual = linalg.mat_vec(g, eta.to(E.basis).coords)

    found: list[linalg.Matrix] = []
    assigned: list[int] = []

    def extend(t: int):
        if t == len(basis_idx):
            mat = linalg.mat_mul(linalg.from_columns([verts[j] for j in assigned]), binv)
            image = set()
            for v in verts:
                w = linalg.mat_vec(mat, v)
                j = index.get(w)
                if j is None:
                    return
                image.add(j)
            if len(image) == k and linalg.mat_vec(linalg.transpose(mat), eta_dual) == eta_dual:
                found.append(mat)
            return
        src = basis_idx[t]
        for cand in range(k):
            if cand in assigned or common[cand][cand] != common[src][src]:
                continue
            if all(common[cand][assigned[s]] == common[src][basis_idx[s]] for s in range(t)):
                assigned.append(cand)
                extend(t + 1)
                assigned.pop()

    extend(0)
    return LinearSymmetryGroup(space, E.basis, tuple(found))
