"""The Fano variety G and its dictionary with X.

Divisors on G (via beta) and curves on G (via alpha^{-1}) are both written in
Z-side coordinates; the intersection of a divisor with a curve is the Z-side
form. The maps ``h~_M`` identify the Picard lattice of X with those
coordinates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from . import cones, linalg, mcd
from .cones import RationalCone
from .lattice import LatticeClass, LatticeSpace, Side, make_space, pair
from .planes import (Family, PlaneLabel, all_labels, canonical, family_parity, label_of,
                     neighbour, plane_class)
from .weyl import WeylElement, act, decompose, sigma, sign_elements


class NotPseudoIsomorphism(ValueError):
    """The map is not the pullback of a pseudo-isomorphism ``G --> X``."""


# ---------------------------------------------------------------------------
# linear maps between the lattices


@dataclass(frozen=True)
class LatticeMap:
    """A linear map acting on canonical coordinates of ``source`` and ``target``."""

    source: LatticeSpace
    target: LatticeSpace
    matrix: linalg.Matrix
    name: str = ""

    def __post_init__(self):
        mat = linalg.as_matrix(self.matrix)
        if len(mat) != self.target.rank or any(len(r) != self.source.rank for r in mat):
            raise ValueError("matrix shape does not match the spaces")
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_images(cls, source: LatticeSpace, target: LatticeSpace, basis: str,
                    images: Sequence[LatticeClass], name: str = "") -> "LatticeMap":
        """The map sending the ``basis`` vectors of ``source`` to ``images``."""
        if len(images) != source.rank:
            raise ValueError(f"need {source.rank} images")
        cols = []
        for im in images:
            if im.space != target:
                raise ValueError("image outside the target space")
            cols.append(im.canonical)
        in_basis = linalg.from_columns(cols)
        return cls(source, target, linalg.mat_mul(in_basis, source.inverse_basis_matrix(basis)), name)

    def __call__(self, x: LatticeClass) -> LatticeClass:
        if x.space != self.source:
            raise ValueError(f"{self.name or 'map'} expects a class of {self.source!r}")
        return self.target.vector(linalg.mat_vec(self.matrix, x.canonical))

    def __matmul__(self, other: "LatticeMap") -> "LatticeMap":
        """Composition ``self o other``."""
        if other.target != self.source:
            raise ValueError("cannot compose: spaces do not match")
        return LatticeMap(other.source, self.target, linalg.mat_mul(self.matrix, other.matrix),
                          f"{self.name} o {other.name}".strip(" o"))

    def inverse(self) -> "LatticeMap":
        return LatticeMap(self.target, self.source, linalg.inverse(self.matrix),
                          f"{self.name}^-1" if self.name else "")

    def matrix_in(self, source_basis: str, target_basis: str) -> linalg.Matrix:
        p = self.source.basis_matrix(source_basis)
        q = self.target.inverse_basis_matrix(target_basis)
        return linalg.mat_mul(q, linalg.mat_mul(self.matrix, p))

    def is_identity(self) -> bool:
        return self.source == self.target and self.matrix == linalg.identity(self.source.rank)

    def __eq__(self, other):
        if not isinstance(other, LatticeMap):
            return NotImplemented
        return (self.source, self.target, self.matrix) == (other.source, other.target, other.matrix)

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def to_json(self) -> dict:
        return {"source": {"n": self.source.n, "side": self.source.side.value},
                "target": {"n": self.target.n, "side": self.target.side.value},
                "name": self.name,
                "matrix": [[str(c) for c in row] for row in self.matrix]}


def weyl_map(w: WeylElement, n: int) -> LatticeMap:
    Z = make_space(n, Side.Z)
    return LatticeMap(Z, Z, w.matrix(), "w")


# ---------------------------------------------------------------------------
# divisors and curves on G


@dataclass(frozen=True)
class DivisorClass:
    """A class in H^2(G), stored through beta as a Z-side vector."""

    z: LatticeClass

    def __add__(self, other):
        return DivisorClass(self.z + other.z)

    def __sub__(self, other):
        return DivisorClass(self.z - other.z)

    def __mul__(self, s):
        return DivisorClass(self.z * s)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"divisor": self.z.to_json()}


@dataclass(frozen=True)
class CurveClass:
    """A class in N_1(G), stored through alpha as a Z-side vector."""

    z: LatticeClass

    def __add__(self, other):
        return CurveClass(self.z + other.z)

    def __sub__(self, other):
        return CurveClass(self.z - other.z)

    def __mul__(self, s):
        return CurveClass(self.z * s)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"curve": self.z.to_json()}


def beta(x: LatticeClass) -> DivisorClass:
    if x.space.side is not Side.Z:
        raise ValueError("beta takes Z-side classes")
    return DivisorClass(x)


def alpha_inv(x: LatticeClass) -> CurveClass:
    if x.space.side is not Side.Z:
        raise ValueError("alpha^-1 takes Z-side classes")
    return CurveClass(x)


def alpha(c: CurveClass) -> LatticeClass:
    return c.z


def beta_inv(d: DivisorClass) -> LatticeClass:
    return d.z


def intersect(d: DivisorClass, c: CurveClass) -> Fraction:
    """Intersection number on G: the Z-side form of ``beta^-1(d)`` and ``alpha(c)``."""
    return pair(d.z, c.z)


def beta_class(L: PlaneLabel) -> DivisorClass:
    """``E_M = beta(M)``."""
    return beta(plane_class(L))


def line_class(L: PlaneLabel) -> CurveClass:
    """``l_M = alpha^-1(M)``."""
    return alpha_inv(plane_class(L))


def anticanonical_G(n: int) -> DivisorClass:
    return beta(make_space(n, Side.Z).eta())


def act_divisor(w: WeylElement, d: DivisorClass) -> DivisorClass:
    return DivisorClass(act(w, d.z))


def act_curve(w: WeylElement, c: CurveClass) -> CurveClass:
    return CurveClass(act(w, c.z))


def delta_class(L: PlaneLabel) -> LatticeClass:
    return cones.delta_class(L)


def eta_class(L: PlaneLabel) -> LatticeClass:
    """``floor(m/2) eta + (-1)^(m-1) M``."""
    m = L.n // 2
    return make_space(L.n, Side.Z).eta() * (m // 2) + plane_class(L) * ((-1) ** (m - 1))


def D_class(L: PlaneLabel) -> DivisorClass:
    """``D_M = beta(delta_M)``: the nef divisor contracting the planes ``sigma_i(M)``."""
    return beta(delta_class(L))


def class_H_M(L: PlaneLabel) -> DivisorClass:
    """``H_M = m(-K_G) - (n-1) E_M``."""
    m = L.n // 2
    return anticanonical_G(L.n) * m - beta_class(L) * (L.n - 1)


class CurveKind(enum.Enum):
    LINE = "line"
    D = "d"
    E = "e"
    PHI_FIBER = "phi_fiber"
    PSI_FIBER = "psi_fiber"
    ELLIPTIC = "elliptic"


def fiber_class(i: int, L: PlaneLabel) -> tuple[Family, CurveClass]:
    """``l_M + l_{sigma_i(M)}`` together with the fibration it is a fiber of."""
    c = line_class(L) + line_class(neighbour(L, {i}))
    return family_parity(i, L), c


def curve_class(kind: CurveKind | str, L: PlaneLabel | None = None, i: int | None = None,
                n: int | None = None) -> CurveClass:
    """Named curve classes on G.

    ``line``, ``d`` and ``e`` need a label; the fibers need an index ``i``
    (and use the base plane unless a label is given); ``elliptic`` needs ``n``.
    """
    kind = CurveKind(kind)
    if kind is CurveKind.ELLIPTIC:
        n = L.n if L is not None else n
        if n is None:
            raise ValueError("elliptic class needs n or a label")
        return alpha_inv(make_space(n, Side.Z).eta())
    if kind in (CurveKind.PHI_FIBER, CurveKind.PSI_FIBER):
        if i is None:
            raise ValueError("fiber classes need an index i")
        want = Family.PHI if kind is CurveKind.PHI_FIBER else Family.PSI
        if L is None:
            if n is None:
                raise ValueError("fiber classes need n or a label")
            # M_0 lies in Tpsi and M_{j} (j != i) in Tphi for every i
            L = canonical((), n) if want is Family.PSI else canonical({1 if i != 1 else 2}, n)
        fam, c = fiber_class(i, L)
        if fam is not want:
            raise ValueError(f"{L!r} gives a {fam.value} fiber for i={i}, not {want.value}")
        return c
    if L is None:
        raise ValueError(f"{kind.value} needs a label")
    if kind is CurveKind.LINE:
        return line_class(L)
    if kind is CurveKind.D:
        return alpha_inv(delta_class(L))
    return alpha_inv(eta_class(L))


def planes_in_E_M(L: PlaneLabel) -> list[PlaneLabel]:
    """Labels ``sigma_I(M)`` with ``|I| <= m - 1`` and ``|I| != m mod 2``."""
    m = L.n // 2
    out = set()
    from itertools import combinations
    for k in range(0, m):
        if (k - m) % 2:
            for I in combinations(range(1, L.N + 1), k):
                out.add(neighbour(L, I))
    return sorted(out)


# ---------------------------------------------------------------------------
# h~_M and the X side


@lru_cache(maxsize=None)
def h_tilde(L: PlaneLabel) -> LatticeMap:
    """``h~_M``: ``-K_X -> eta`` and ``E_i -> sigma_i(M)``."""
    X = make_space(L.n, Side.X)
    Z = make_space(L.n, Side.Z)
    images = [Z.eta()] + [plane_class(neighbour(L, {i})) for i in range(1, L.N + 1)]
    return LatticeMap.from_images(X, Z, "KE", images, f"h~_{L!r}")


def h_map(L: PlaneLabel) -> LatticeMap:
    """``h_M = beta o h~_M``: pullback H^2(X) -> H^2(G) in Z-side coordinates."""
    t = h_tilde(L)
    return LatticeMap(t.source, t.target, t.matrix, f"h_{L!r}")


def relabel(perm: Sequence[int], n: int) -> LatticeMap:
    """``E_i -> E_{perm[i-1]}``, fixing H."""
    X = make_space(n, Side.X)
    perm = tuple(perm)
    if sorted(perm) != list(range(1, n + 4)):
        raise ValueError("not a permutation of 1..n+3")
    return LatticeMap.from_images(X, X, "HE", [X.H()] + [X.E(p) for p in perm], "relabel")


def cremona_pullback(i: int, j: int, n: int) -> LatticeMap:
    """The pullback by the Cremona involution exchanging ``p_i`` and ``p_j``.

    Fixes ``-K_X``, swaps ``E_i`` and ``E_j`` and sends ``E_r`` to
    ``H - sum E_h + E_i + E_j + E_r`` for ``r != i, j``.
    """
    N = n + 3
    if i == j or not (1 <= i <= N and 1 <= j <= N):
        raise ValueError("need two distinct indices in 1..n+3")
    X = make_space(n, Side.X)
    total = mcd_sum_E(n)
    images = [X.anticanonical()]
    for r in range(1, N + 1):
        if r == i:
            images.append(X.E(j))
        elif r == j:
            images.append(X.E(i))
        else:
            images.append(X.H() - total + X.E(i) + X.E(j) + X.E(r))
    return LatticeMap.from_images(X, X, "KE", images, f"omega_{i}{j}*")


def mcd_sum_E(n: int) -> LatticeClass:
    X = make_space(n, Side.X)
    return X.vector([0] + [1] * (n + 3))


def cremona_H_image(i: int, j: int, n: int) -> LatticeClass:
    """``n H - (n-1)(sum_{all h} E_h - E_i - E_j)``: the image of H under the Cremona pullback."""
    X = make_space(n, Side.X)
    return X.H() * n - (mcd_sum_E(n) - X.E(i) - X.E(j)) * (n - 1)


def transport_to_Z(cone: RationalCone, L: PlaneLabel) -> RationalCone:
    """Image of an X-side cone (``HE`` coordinates) under ``h~_M``."""
    if cone.space is None or cone.space.side is not Side.X or cone.basis != "HE":
        raise ValueError("expected an X-side cone in HE coordinates")
    return cones.map_cone(h_tilde(L).matrix, cone, make_space(L.n, Side.Z), "eps")


def slice_cone(n: int, name: str) -> RationalCone:
    """Cone over one of the named slices of X, from its defining inequalities."""
    X = make_space(n, Side.X)
    poly = mcd.named_cones(n).by_name(name)
    normals = [mcd.linear_form(h, n) for h in poly.declared]
    normals.append(tuple([n + 1] + [1] * (n + 3)))
    return cones.cone_from_facets(normals, X, "HE")


def isometry_defect(n: int, basis: Iterable[LatticeClass] | None = None) -> list[tuple]:
    """Pairs of ``(-K_X)^perp`` basis vectors where ``h~_{M_0}`` fails to scale the form by ``(-1)^(m-1)``."""
    X = make_space(n, Side.X)
    m = n // 2
    h = h_tilde(canonical((), n))
    if basis is None:
        basis = [X.eps_tilde(i) for i in range(1, n + 4)]
    basis = list(basis)
    K = X.anticanonical()
    for b in basis:
        if pair(b, K) != 0:
            raise ValueError(f"{b!r} is not orthogonal to -K_X")
    bad = []
    for a in range(len(basis)):
        for b in range(a, len(basis)):
            x, y = basis[a], basis[b]
            if pair(h(x), h(y)) != (-1) ** (m - 1) * pair(x, y):
                bad.append((a, b))
    return bad


def integral_perp_basis(n: int) -> list[LatticeClass]:
    """``E_i - E_{i+1}`` and ``H - (n+1) E_1``: a basis of ``(-K_X)^perp``."""
    X = make_space(n, Side.X)
    out = [X.E(i) - X.E(i + 1) for i in range(1, n + 3)]
    out.append(X.H() - X.E(1) * (n + 1))
    return out


# ---------------------------------------------------------------------------
# cones of G


@dataclass(frozen=True)
class GCones:
    n: int
    NE: RationalCone
    Nef: RationalCone
    Eff: RationalCone
    Mov_1: RationalCone
    Mov1_dual: RationalCone | None
    Mov1: RationalCone | None

    def items(self):
        return [("NE", self.NE), ("Nef", self.Nef), ("Eff", self.Eff), ("Mov_1", self.Mov_1),
                ("Mov1_dual", self.Mov1_dual), ("Mov1", self.Mov1)]


def movable_divisors(n: int) -> RationalCone:
    """Mov^1(G): the movable slice of X transported by ``h~_{M_0}``."""
    return transport_to_Z(slice_cone(n, "Mov"), canonical((), n))


@lru_cache(maxsize=None)
def G_cones(n: int, with_movable: bool = True) -> GCones:
    E = cones.E_cone(n)
    Ed = cones.dual(E)
    mov = movable_divisors(n) if with_movable else None
    return GCones(n, NE=E, Nef=Ed, Eff=E, Mov_1=Ed,
                  Mov1_dual=cones.dual(mov) if mov is not None else None, Mov1=mov)


def movable_dual_generators(n: int) -> list[LatticeClass]:
    """``e_M`` (through alpha) and ``l_M + l_{sigma_i(M)}`` for all M, i."""
    out = {alpha(curve_class(CurveKind.E, L)) for L in all_labels(n)}
    for L in all_labels(n):
        for i in range(1, n + 4):
            out.add(alpha(fiber_class(i, L)[1]))
    return sorted(out, key=lambda c: c.canonical)


def contraction_ray(family: Family, i: int, n: int) -> LatticeClass:
    """The nef ray (``eta/2 +- eps_i``) whose contraction has the given fibers."""
    Z = make_space(n, Side.Z)
    fiber = alpha(curve_class(CurveKind.PSI_FIBER if family is Family.PSI else CurveKind.PHI_FIBER,
                              i=i, n=n))
    for s in (1, -1):
        r = Z.eta() / 2 + Z.eps(i) * s
        if pair(r, fiber) == 0:
            return r
    raise ArithmeticError("no nef ray contracts the fiber")


def contracted_face(family: Family, i: int, n: int) -> RationalCone:
    """``NE(phi_i)`` or ``NE(psi_i)`` seen through alpha: the face of E killed by the nef ray."""
    return cones.face_of(cones.E_cone(n), contraction_ray(family, i, n))


def expected_contracted_labels(family: Family, i: int, n: int) -> list[PlaneLabel]:
    """Labels ``I`` with ``i not in I`` and ``|I|`` odd (phi) or even (psi)."""
    want = 1 if family is Family.PHI else 0
    out = set()
    for L in all_labels(n):
        J = L.rep if i not in L.rep else L.complement
        if len(J) % 2 == want:
            out.add(L)
    return sorted(out)


# ---------------------------------------------------------------------------
# pseudo-isomorphisms and automorphisms


def _signed_permutation(mat: linalg.Matrix, N: int) -> WeylElement:
    if mat[0][0] != 1 or any(mat[0][1:]) or any(mat[r][0] for r in range(1, N + 1)):
        raise NotPseudoIsomorphism("map does not fix eta")
    perm, signs = [], []
    for col in range(1, N + 1):
        nz = [(r, mat[r][col]) for r in range(1, N + 1) if mat[r][col]]
        if len(nz) != 1 or abs(nz[0][1]) != 1:
            raise NotPseudoIsomorphism("map is not a signed permutation of the eps basis")
        perm.append(nz[0][0])
        signs.append(int(nz[0][1]))
    if signs.count(-1) % 2:
        raise NotPseudoIsomorphism("odd number of sign changes: not in W(D_{n+3})")
    return WeylElement(tuple(perm), tuple(signs))


def classify_pseudo_iso(f: LatticeMap, n: int | None = None) -> tuple[PlaneLabel, tuple[int, ...]]:
    """The unique ``(M, kappa)`` with ``f = h_M o relabel(kappa)``."""
    if f.source.side is not Side.X or f.target.side is not Side.Z or f.source.n != f.target.n:
        raise NotPseudoIsomorphism("expected a map from the X-side lattice to H^2(G) coordinates")
    n = f.source.n if n is None else n
    if n != f.source.n:
        raise ValueError("n does not match the map")
    X = f.source
    Z = f.target
    if f(X.anticanonical()) != Z.eta():
        raise NotPseudoIsomorphism("-K_X is not sent to -K_G")
    eff_images = {linalg.primitive(f(x).canonical) for x in mcd.effective_generators(n)}
    if eff_images != set(cones.E_cone(n).rays):
        raise NotPseudoIsomorphism("Eff(X) is not mapped onto Eff(G)")
    base = canonical((), n)
    g = f @ h_tilde(base).inverse()
    w = _signed_permutation(g.matrix, n + 3)
    I, perm = decompose(w)
    return canonical(I, n), tuple(perm)


def pseudo_iso_pullback(I: Iterable[int], perm: Sequence[int], n: int) -> LatticeMap:
    """``sigma_I o h_{M_0} o relabel(perm)``."""
    s = weyl_map(sigma(I, n + 3), n)
    return s @ h_map(canonical((), n)) @ relabel(perm, n)


@dataclass(frozen=True)
class AutBounds:
    n: int
    lower: int
    upper: int
    checked: int
    failures: tuple
    note: str

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"n": self.n, "lower": self.lower, "upper": self.upper, "checked": self.checked,
                "failures": [list(f) for f in self.failures], "note": self.note}


def _preserves(w: WeylElement, cone: RationalCone) -> bool:
    return {linalg.primitive(w.apply_coords(r)) for r in cone.rays} == set(cone.rays)


def aut_bounds(n: int, extra: Iterable[WeylElement] = ()) -> AutBounds:
    """``2^(n+2) <= |Aut(G)| <= 2^(n+2) (n+3)!`` with every sign change checked on the lattice."""
    Z = make_space(n, Side.Z)
    E = cones.E_cone(n)
    Ed = cones.dual(E)
    failures = []
    elements = list(sign_elements(n + 3)) + list(extra)
    for w in elements:
        if act(w, Z.eta()) != Z.eta():
            failures.append((w.flips, "eta"))
        if not _preserves(w, Ed):
            failures.append((w.flips, "Nef"))
        if not _preserves(w, E):
            failures.append((w.flips, "Eff"))
    return AutBounds(n, 2 ** (n + 2), 2 ** (n + 2) * factorial(n + 3), len(elements), tuple(failures),
                     "equality with the lower bound holds for general points; "
                     "this is not visible on the lattice")


# ---------------------------------------------------------------------------
# named ray inventories


def _fmt(L: PlaneLabel) -> str:
    return "{" + ",".join(map(str, sorted(L.rep))) + "}"


def ray_names(n: int) -> dict[tuple[int, ...], list[str]]:
    """Human-readable names of the primitive Z-side vectors that occur as cone rays."""
    names: dict[tuple[int, ...], list[str]] = {}

    def add(x: LatticeClass, name: str):
        names.setdefault(linalg.primitive(x.canonical), []).append(name)

    Z = make_space(n, Side.Z)
    for L in all_labels(n):
        add(plane_class(L), f"l_M / E_M, M={_fmt(L)}")
        add(delta_class(L), f"d_M / D_M, M={_fmt(L)}")
        add(eta_class(L), f"e_M, M={_fmt(L)}")
    for i in range(1, n + 4):
        add(Z.eta() / 2 + Z.eps(i), f"psi_{i}-fiber / E_M+E_sigma_{i}(M), M in Tpsi")
        add(Z.eta() / 2 - Z.eps(i), f"phi_{i}-fiber / E_M+E_sigma_{i}(M), M in Tphi")
    add(Z.eta(), "-K_G / c")
    return names


def ray_inventory(cone: RationalCone) -> list[dict]:
    n = cone.space.n
    names = ray_names(n)
    return [{"ray": list(r), "name": "; ".join(names.get(r, ["unnamed"]))} for r in cone.rays]
