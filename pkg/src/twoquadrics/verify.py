"""Verification suites behind ``twoquadrics verify``.

Every check compares an expected value with a computed one exactly. Suites
are plain functions of ``n`` that return a :class:`Report`.
"""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Any, Callable, Iterable

from . import bridge, cones, linalg, mcd
from .lattice import Side, is_integral, make_space, pair
from .planes import (Family, all_labels, canonical, family_parity, intersection_dim,
                     neighbour, plane_class)
from .weyl import act, base_stabilizer, orbit, sigma, sign_subgroup, weyl_group

WORKERS_ENV = "TWOQUADRICS_WORKERS"
SUITES = ("lattice", "cones", "mcd", "bridge")
SUITE_CAP = 8
SYMMETRY_CAP = 4
# the search at n = 4 walks a group of order 322560; only run it on request
SYMMETRY_DEFAULT = 2


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class Check:
    check_id: str
    anchor: str
    expected: Any
    computed: Any

    @property
    def passed(self) -> bool:
        return self.expected == self.computed

    def to_json(self) -> dict:
        return {"id": self.check_id, "anchor": self.anchor, "expected": _jsonable(self.expected),
                "computed": _jsonable(self.computed), "pass": self.passed}


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (set, frozenset)):
        return sorted((_jsonable(x) for x in v), key=json.dumps)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


@dataclass
class Report:
    n: int
    suite: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check_id: str, anchor: str, expected, computed):
        self.checks.append(Check(check_id, anchor, expected, computed))

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)
        self.seconds += other.seconds

    def to_json(self) -> dict:
        return {"schema": 1, "n": self.n, "suite": self.suite, "pass": self.passed,
                "seconds": round(self.seconds, 3), "checks": [c.to_json() for c in self.checks]}


# ---------------------------------------------------------------------------
# the identity suite


def _eps_rel(L, i):
    """``eps_i`` relative to the base plane ``L``: ``M + sigma_i(M) - eta/2``."""
    Z = make_space(L.n, Side.Z)
    return plane_class(L) + plane_class(neighbour(L, {i})) - Z.eta() / 2


def identity_eta(n, L, i, j) -> bool:
    """``eta = M + sigma_i M + sigma_j M + sigma_ij M``."""
    Z = make_space(n, Side.Z)
    total = (plane_class(L) + plane_class(neighbour(L, {i})) + plane_class(neighbour(L, {j}))
             + plane_class(neighbour(L, {i, j})))
    return total == Z.eta()


def identity_M_I(n, I) -> bool:
    """The closed form of ``M_I``, ``sigma_I(M_0)``, and the expansion in the ``M_j``."""
    Z = make_space(n, Side.Z)
    N = n + 3
    I = frozenset(I)
    half = Fraction((-1) ** len(I), 2)
    closed = Z.vector([Fraction(1, 4)] + [-half if j in I else half for j in range(1, N + 1)])
    acted = act(sigma(I, N), plane_class(canonical((), n)))
    if closed != acted or closed != plane_class(canonical(I, n)):
        return False
    if len(I) % 2:
        return True
    k = len(I)
    coords = [Fraction(n + 2 - k, 2 * (n + 1))]
    for j in range(1, N + 1):
        coords.append(Fraction(-(n + 2 - k), n + 1) if j in I else Fraction(k - 1, n + 1))
    return Z.vector(coords, "M") == closed


def identity_eps_i(n, L, i) -> bool:
    """``eps_i = eta/(2(n+1)) - sum M_j/(n+1) + M_i`` with ``M_j = sigma_j(M)``."""
    Z = make_space(n, Side.Z)
    N = n + 3
    total = Z.zero()
    for j in range(1, N + 1):
        total = total + plane_class(neighbour(L, {j}))
    rhs = (Z.eta() / 2 - total) / (n + 1) + plane_class(neighbour(L, {i}))
    return rhs == _eps_rel(L, i)


def identity_parity(n, L, i, I) -> bool:
    """``(eta/2 + eps_i) . sigma_I(M)`` is 1 iff ``|I| = m mod 2`` and the minus sign the complement."""
    Z = make_space(n, Side.Z)
    m = n // 2
    e = _eps_rel(L, i)
    target = plane_class(neighbour(L, I))
    plus = pair(Z.eta() / 2 + e, target)
    minus = pair(Z.eta() / 2 - e, target)
    same = (len(I) - m) % 2 == 0
    return (plus, minus) == ((1, 0) if same else (0, 1))


def identity_delta(n, L, I) -> bool:
    """``delta_M . sigma_I(M) = (|I| - 1)/2`` for odd ``|I|``."""
    return pair(cones.delta_class(L), plane_class(neighbour(L, I))) == Fraction(len(I) - 1, 2)


def identity_eta_M(n, L, i, j) -> bool:
    """``eta_M . sigma_ij(M) = 0``."""
    return pair(bridge.eta_class(L), plane_class(neighbour(L, {i, j}))) == 0


IDENTITIES: dict[str, Callable] = {
    "eta": identity_eta,
    "M_I": identity_M_I,
    "eps_i": identity_eps_i,
    "parity": identity_parity,
    "delta": identity_delta,
    "eta_M": identity_eta_M,
}


def exhaustive_instances(n: int) -> Iterable[tuple]:
    N = n + 3
    labels = all_labels(n)
    idx = range(1, N + 1)
    for L in labels:
        for i, j in combinations(idx, 2):
            yield ("eta", L, i, j)
            yield ("eta_M", L, i, j)
        for i in idx:
            yield ("eps_i", L, i)
            rest = [x for x in idx if x != i]
            for k in range(len(rest) + 1):
                for I in combinations(rest, k):
                    yield ("parity", L, i, frozenset(I))
        for k in range(1, N + 1, 2):
            for I in combinations(idx, k):
                yield ("delta", L, frozenset(I))
    for k in range(N + 1):
        for I in combinations(idx, k):
            yield ("M_I", frozenset(I))


def random_instances(n: int, count: int, seed: int = 0) -> list[tuple]:
    """``count`` instances of every identity, drawn uniformly."""
    rng = random.Random(seed)
    N = n + 3
    labels = all_labels(n)
    out = []

    def subset(pool, parity=None):
        while True:
            I = frozenset(x for x in pool if rng.random() < 0.5)
            if parity is None or len(I) % 2 == parity:
                return I

    for _ in range(count):
        L = rng.choice(labels)
        i, j = rng.sample(range(1, N + 1), 2)
        out.append(("eta", L, i, j))
        out.append(("eta_M", L, i, j))
        out.append(("eps_i", L, i))
        out.append(("parity", L, i, subset([x for x in range(1, N + 1) if x != i])))
        out.append(("delta", L, subset(range(1, N + 1), 1)))
        out.append(("M_I", subset(range(1, N + 1))))
    return out


def _run_chunk(args) -> list[tuple]:
    n, chunk = args
    failures = []
    for inst in chunk:
        kind, *params = inst
        if not IDENTITIES[kind](n, *params):
            failures.append(inst)
    return failures


def run_identities(n: int, instances: list[tuple], workers: int | None = None) -> dict:
    """Counts per identity and the list of failing instances."""
    workers = worker_count() if workers is None else workers
    counts: dict[str, int] = {}
    for inst in instances:
        counts[inst[0]] = counts.get(inst[0], 0) + 1
    if workers > 1 and len(instances) > 1000:
        size = -(-len(instances) // workers)
        chunks = [(n, instances[k:k + size]) for k in range(0, len(instances), size)]
        with ProcessPoolExecutor(workers) as pool:
            failures = [f for part in pool.map(_run_chunk, chunks) for f in part]
    else:
        failures = _run_chunk((n, instances))
    return {"counts": counts, "failures": failures}


def identity_suite(n: int, random_count: int = 10_000, seed: int = 0) -> Report:
    """Exhaustive at ``n = 2``; ``random_count`` draws per identity otherwise."""
    t = time.perf_counter()
    rep = Report(n, "identities")
    instances = list(exhaustive_instances(n)) if n == 2 else random_instances(n, random_count, seed)
    res = run_identities(n, instances)
    for kind in IDENTITIES:
        bad = sum(1 for f in res["failures"] if f[0] == kind)
        rep.add(f"identity.{kind}", f"identity {kind} over {res['counts'].get(kind, 0)} instances", 0, bad)
    rep.seconds = time.perf_counter() - t
    return rep


# ---------------------------------------------------------------------------
# module suites


def lattice_suite(n: int, random_count: int = 2_000, unsafe: bool = False) -> Report:
    t = time.perf_counter()
    rep = Report(n, "lattice")
    N = n + 3
    m = n // 2
    Z = make_space(n, Side.Z)
    X = make_space(n, Side.X)
    rep.add("lattice.eta_square", "eta^2 = 4", 4, pair(Z.eta(), Z.eta()))
    rep.add("lattice.eps_square", "eps_i^2 = (-1)^m", [(-1) ** m] * N,
            [pair(Z.eps(i), Z.eps(i)) for i in range(1, N + 1)])
    labels = all_labels(n)
    rep.add("planes.count", "2^(n+2) planes", 2 ** (n + 2), len(labels))
    rep.add("planes.injective", "plane classes are distinct", len(labels),
            len({plane_class(L) for L in labels}))
    rep.add("planes.degree", "eta . M = 1 for every plane", {1}, {pair(Z.eta(), plane_class(L)) for L in labels})
    self_pairing = (1 + (-1) ** m * N) / Fraction(4)
    rep.add("planes.self_pairing", "M . M is the same for every plane", {self_pairing},
            {pair(plane_class(L), plane_class(L)) for L in labels})
    rep.add("planes.integral", "every plane class is integral", True,
            all(is_integral(plane_class(L)) for L in labels))
    rep.add("X.anticanonical_square", "(-K_X)^2 = 4(n-1)", 4 * (n - 1),
            pair(X.anticanonical(), X.anticanonical()))
    rep.add("weyl.order", "|W(D_N)| = 2^(N-1) N!", 2 ** (N - 1) * factorial(N), weyl_group(N).order())
    rep.add("weyl.sign_subgroup", "|W'| = 2^(N-1)", 2 ** (N - 1), sign_subgroup(N).order())
    rep.add("weyl.stabilizer", "|G_0| = N!", factorial(N), base_stabilizer(N).order())
    rep.add("weyl.orbit", "W' orbit of M_0 is every plane", len(labels),
            len(orbit(sign_subgroup(N), plane_class(canonical((), n)))))
    base = canonical((), n)
    rep.add("planes.neighbour_dim", "dim(M & sigma_i M) = m - 1", {m - 1},
            {intersection_dim(L, neighbour(L, {i})) for L in labels for i in range(1, N + 1)})
    for i in (1, N):
        fams = [family_parity(i, L) for L in labels]
        rep.add(f"planes.family_split.{i}", "half the planes in each spinor family",
                (2 ** (n + 1), 2 ** (n + 1)), (fams.count(Family.PHI), fams.count(Family.PSI)))
    rep.add("planes.base_family", "M_0 lies in Tpsi for every i", {Family.PSI.value},
            {family_parity(i, base).value for i in range(1, N + 1)})
    ids = identity_suite(n, random_count)
    rep.checks.extend(ids.checks)
    rep.seconds = time.perf_counter() - t
    return rep


def cones_suite(n: int, unsafe: bool = False) -> Report:
    t = time.perf_counter()
    rep = Report(n, "cones")
    N = n + 3
    m = n // 2
    Z = make_space(n, Side.Z)
    P = cones.demihypercube_by_double_description(N)
    rep.add("delta.vertices", "2^(N-1) vertices", 2 ** (N - 1), len(P.vertices))
    rep.add("delta.facets", "2^(N-1) + 2N facets", 2 ** (N - 1) + 2 * N, len(P.inequalities))
    rep.add("delta.facet_list", "facets are the box and H_I >= 1 for even I", True,
            set(P.inequalities) == set(cones.demihypercube_inequalities(N)))
    E = cones.E_cone(n)
    Ed = cones.dual(E)
    rep.add("E.rays", "E has 2^(n+2) rays", 2 ** (n + 2), len(E.rays))
    rep.add("E.facets", "E has 2^(n+2) + 2(n+3) facets", 2 ** (n + 2) + 2 * N, len(E.facets))
    rep.add("E.facet_list", "listed inequalities are exactly the facets of E", True,
            set(E.facets) == set(cones.E_facet_normals(n)))
    rep.add("Edual.rays", "E^vee has 2^(n+2) + 2(n+3) rays", 2 ** (n + 2) + 2 * N, len(Ed.rays))
    gens = cones.cone_from_rays(cones.E_dual_generators(n), basis="eps")
    rep.add("Edual.generators", "E^vee rays are the listed generators", True, cones.same_cone(gens, Ed))
    rep.add("Edual.inside_E", "E^vee is contained in E", True, cones.contains_cone(E, Ed))
    rep.add("E.reflexive", "dual(dual(E)) = E", True, cones.same_cone(cones.dual(Ed), E))
    base = canonical((), n)
    face = cones.face_of(E, cones.delta_class(base))
    simplex = cones.cone_from_rays([plane_class(canonical({i}, n)) for i in range(1, N + 1)])
    rep.add("E.simplicial_facet", "face of delta_M0 is the cone on the M_i", True,
            cones.same_cone(face, simplex))
    Mbasis = [(Z.eta() * Fraction(1, 2) + Z.eps(1))]
    face1 = cones.face_of(E, Mbasis[0])
    labels1 = [L for L in all_labels(n)
               if len(L.rep if 1 not in L.rep else L.complement) % 2 != m % 2]
    rep.add("E.demihypercube_facet", "face of M_0 + M_1 is the cone on the matching parity labels", True,
            cones.same_cone(face1, cones.cone_from_rays([plane_class(L) for L in labels1])))
    ineqs = cones.E_dual_inequalities_M_basis(n)
    inM = cones.cone_from_facets(ineqs, Z, "M")
    rep.add("Edual.M_basis_inequalities", "the M-basis inequalities cut out E^vee", True,
            all(cones.membership(inM, r) for r in Ed.ray_classes())
            and all(cones.membership(Ed, r) for r in inM.ray_classes()))
    if n <= SYMMETRY_DEFAULT or (unsafe and n <= SYMMETRY_CAP):
        sym = cones.linear_symmetries(E, Z.eta(), cap=SYMMETRY_CAP)
        rep.add("E.symmetries", "linear symmetries of E fixing eta form W(D_N)",
                2 ** (N - 1) * factorial(N), sym.order)
    rep.seconds = time.perf_counter() - t
    return rep


def mcd_suite(n: int, unsafe: bool = False, vertex_cap: int = 4) -> Report:
    t = time.perf_counter()
    rep = Report(n, "mcd")
    N = n + 3
    m = n // 2
    X = make_space(n, Side.X)
    full = frozenset(range(1, N + 1))
    proj_ok = all(mcd.radial_project(mcd.class_E_I(full - J, n)) == cones.hypercube_vertex(J, N)
                  for J in cones.odd_subsets(N))
    rep.add("mcd.project_E_I", "E_I projects to v_{I^c}", True, proj_ok)
    rep.add("mcd.project_K", "-K_X projects to the origin", (Fraction(0),) * N,
            mcd.radial_project(X.anticanonical()))
    rep.add("mcd.arrangement", "hyperplanes H_I = k of the arrangement",
            sum(comb(N, s) for k in range(2, N // 2 + 1) for s in range(N + 1) if (s - k) % 2),
            len(mcd.arrangement(n)))
    nc = mcd.named_cones(n)
    origin = (Fraction(0),) * N
    rep.add("mcd.fano_interior", "-K_X is interior to the Fano slice", True,
            all(cones.evaluate_inequality(h, origin) > 0 for h in nc.fano.declared))
    ch = mcd.chamber_of(X.anticanonical())
    rep.add("mcd.fano_signs", "-K_X is strictly off every wall", True, ch.is_full_dimensional)
    fano_KE = {linalg.primitive(h) for h in mcd.fano_inequalities_KE(n)}
    from_slice = set()
    KE = X.basis_matrix("KE")
    for h in nc.fano.declared:
        form = mcd.linear_form(h, n)
        from_slice.add(linalg.primitive(linalg.mat_vec(linalg.transpose(KE), form)))
    rep.add("mcd.fano_KE", "Fano inequalities in (-K_X, E_i) coordinates", fano_KE, from_slice)
    if n <= vertex_cap:
        delta, mov, nef, fano = (p.polytope for p in nc)
        rep.add("mcd.nest_nef_mov", "Nef slice inside Mov slice", True, all(mov.contains(v) for v in nef.vertices))
        rep.add("mcd.nest_fano_mov", "Fano slice inside Mov slice", True, all(mov.contains(v) for v in fano.vertices))
        rep.add("mcd.nest_mov_delta", "Mov slice inside Delta", True, all(delta.contains(v) for v in mov.vertices))
        box_ok = True
        for i in range(1, N + 1):
            for upper in (False, True):
                b = cones.box_inequality(i, N, upper)
                box_ok &= b in mov.inequalities
        if n >= 4:
            rep.add("mcd.mov_box_facets", "box hyperplanes support facets of the Mov slice", True, box_ok)
        disjoint = all(cones.evaluate_inequality(cones.H_inequality(I, 1, N), v) > 0
                       for I in cones.even_subsets(N) for v in mov.vertices)
        rep.add("mcd.mov_off_H1", "H_I = 1 facets of Delta miss the Mov slice", True, disjoint)
        fano_cell = mcd.cell_polytope(n, (1,) * len(mcd.arrangement(n)))
        rep.add("mcd.fano_cell", "cell of -K_X equals the Fano slice", set(fano.vertices),
                set(fano_cell.vertices))
        if n == 2:
            rep.add("mcd.n2_equal", "Fano = Nef = Mov slices at n = 2", True,
                    set(fano.vertices) == set(nef.vertices) == set(mov.vertices))
    kinds = {}
    for w in mcd.arrangement(n):
        k = mcd.classify_wall(w)
        kinds[k.kind] = kinds.get(k.kind, 0) + 1
    n_div = sum(comb(N, s) for s in range(1, N + 1, 2))
    rep.add("mcd.wall_kinds", "k = 2 walls are divisorial and the rest flips",
            {"divisorial": n_div, "flip": len(mcd.arrangement(n)) - n_div} if n > 2 else {"divisorial": n_div},
            kinds)
    fac = mcd.factorization(n)
    counts = mcd.terminal_counts(n)
    rep.add("mcd.terminal_total", "special m-planes on the Fano model", 2 ** (n + 2), counts["total"])
    rep.add("mcd.terminal_enumerated", "binomial counts match enumeration",
            (counts["dim_m"], counts["dim_m_minus_1"]),
            (fac.counts["enumerated_dim_m"], fac.counts["enumerated_dim_m_minus_1"]))
    rep.add("mcd.steps", "m - 1 flip steps", m - 1, len(fac.steps))
    rep.add("mcd.step_walls", "each step crosses one wall per flipped locus", True,
            all(len(s.walls) == len(s.flipped) for s in fac.steps))
    if n == 4:
        rep.add("mcd.n4_flipped", "n = 4 flips 21 lines and 1 curve", 22, len(fac.steps[0].flipped))
        rep.add("mcd.n4_terminal", "42 + 22 special planes", (42, 22), (counts["dim_m"], counts["dim_m_minus_1"]))
    rep.seconds = time.perf_counter() - t
    return rep


def bridge_suite(n: int, unsafe: bool = False, pair_samples: int = 256, seed: int = 0,
                 movable_cap: int = 4) -> Report:
    t = time.perf_counter()
    rep = Report(n, "bridge")
    N = n + 3
    m = n // 2
    Z = make_space(n, Side.Z)
    X = make_space(n, Side.X)
    labels = all_labels(n)
    rng = random.Random(seed)
    if n == 2:
        pairs = [(a, b) for a in labels for b in labels]
    else:
        pairs = [(rng.choice(labels), rng.choice(labels)) for _ in range(pair_samples)]
    bad = sum(1 for a, b in pairs
              if bridge.intersect(bridge.beta_class(a), bridge.line_class(b)) != pair(plane_class(a), plane_class(b)))
    rep.add("bridge.duality", f"E_M . l_M' = M . M' over {len(pairs)} pairs", 0, bad)
    base = canonical((), n)
    h = bridge.h_tilde(base)
    rep.add("bridge.h_eps", "h~(eps~_i) = eps_i", True,
            all(h(X.eps_tilde(i)) == Z.eps(i) for i in range(1, N + 1)))
    rep.add("bridge.h_E_I", "h~(E_I) = M_I", True,
            all(h(mcd.class_E_I(I, n)) == plane_class(canonical(I, n)) for I in cones.even_subsets(N)))
    rep.add("bridge.delta_to_E", "h~ maps the cone over Delta onto E", True,
            cones.same_cone(bridge.transport_to_Z(bridge.slice_cone(n, "Delta"), base), cones.E_cone(n)))
    rep.add("bridge.fano_to_Edual", "h~ maps Nef of the Fano model onto E^vee", True,
            cones.same_cone(bridge.transport_to_Z(bridge.slice_cone(n, "Fano"), base), cones.E_dual_cone(n)))
    rep.add("bridge.isometry", "h~ scales the form on (-K_X)^perp by (-1)^(m-1)", ([], []),
            (bridge.isometry_defect(n), bridge.isometry_defect(n, bridge.integral_perp_basis(n))))
    crem_bad = []
    for i, j in combinations(range(1, N + 1), 2):
        w = bridge.cremona_pullback(i, j, n)
        if (h @ w @ h.inverse()).matrix != sigma({i, j}, N).matrix() or not (w @ w).is_identity() \
                or w(X.H()) != bridge.cremona_H_image(i, j, n):
            crem_bad.append((i, j))
    rep.add("bridge.cremona", "Cremona pullbacks conjugate to sigma_ij", [], crem_bad)
    rep.add("bridge.H_M", "h_M(H) = m(-K_G) - (n-1) E_M", True,
            all(bridge.h_map(L)(X.H()) == bridge.class_H_M(L).z for L in labels))
    rep.add("bridge.H_M_equivariant", "H_{sigma_I M} = sigma_I H_M", True,
            all(bridge.class_H_M(neighbour(L, {1, 2})).z == act(sigma({1, 2}, N), bridge.class_H_M(L).z)
                for L in labels))
    K = bridge.anticanonical_G(n)

    def star_form(L):
        total = K
        for i in range(1, N + 1):
            total = total + bridge.beta_class(neighbour(L, {i})) * (n - 1)
        return total * Fraction(1, n + 1)

    rep.add("bridge.H_M_line", "H_M . d_M = 1", {1},
            {bridge.intersect(bridge.class_H_M(L), bridge.curve_class("d", L)) for L in labels})
    rep.add("bridge.H_M_star", "H_M = (-K_G + (n-1) sum E_sigma_i(M))/(n+1)", True,
            all(star_form(L) == bridge.class_H_M(L) for L in labels))
    rep.extend(curve_pairings(n))
    G = bridge.G_cones(n, with_movable=n <= movable_cap)
    rep.add("G.NE_rays", "NE(G) has 2^(n+2) rays", 2 ** (n + 2), len(G.NE.rays))
    rep.add("G.Nef_rays", "Nef(G) has 2^(n+2) + 2(n+3) rays", 2 ** (n + 2) + 2 * N, len(G.Nef.rays))
    if G.Mov1 is not None:
        gens = cones.cone_from_rays(bridge.movable_dual_generators(n))
        rep.add("G.Mov1_dual", "dual of Mov^1(G) is generated by e_M and the fibers", True,
                cones.same_cone(gens, G.Mov1_dual))
        if n >= 4:
            rep.add("G.Mov1_dual_rays", "dual of Mov^1(G) has 2^(n+2) + 2(n+3) rays",
                    2 ** (n + 2) + 2 * N, len(G.Mov1_dual.rays))
        else:
            rep.add("G.Mov1_is_Nef", "Mov^1(G) = Nef(G) at n = 2", True, cones.same_cone(G.Mov1, G.Nef))
    face_ok = True
    for fam in Family:
        for i in range(1, N + 1):
            F = bridge.contracted_face(fam, i, n)
            exp = cones.cone_from_rays([plane_class(L) for L in bridge.expected_contracted_labels(fam, i, n)])
            face_ok &= cones.same_cone(F, exp) and len(F.rays) == 2 ** (n + 1)
    rep.add("G.fiber_faces", "contracted faces of the fibrations are the parity facets of E", True, face_ok)
    simplicial = [f for f in G.Eff.facets
                  if sum(1 for r in G.Eff.rays if linalg.dot(f, r) == 0) == N]
    simp_sets = {frozenset(r for r in G.Eff.rays if linalg.dot(f, r) == 0) for f in simplicial}
    expected_sets = {frozenset(linalg.primitive(plane_class(neighbour(L, {i})).canonical)
                               for i in range(1, N + 1)) for L in labels}
    rep.add("G.simplicial_facets", "simplicial facets of Eff(G) are the stars of the planes",
            expected_sets, simp_sets)
    aut = bridge.aut_bounds(n)
    rep.add("G.aut_bounds", "sign changes preserve -K_G, Nef and Eff",
            (2 ** (n + 2), 2 ** (n + 2) * factorial(N), True), (aut.lower, aut.upper, aut.ok))
    rep.add("G.planes_in_E_M", "planes sigma_I(M) with |I| <= m-1, |I| != m mod 2",
            sum(comb(N, k) for k in range(0, m) if (k - m) % 2), len(bridge.planes_in_E_M(base)))
    rep.extend(classify_roundtrip(n, 100, seed))
    rep.seconds = time.perf_counter() - t
    return rep


def curve_pairings(n: int) -> Report:
    t = time.perf_counter()
    rep = Report(n, "curves")
    N = n + 3
    K = bridge.anticanonical_G(n)
    labels = all_labels(n)
    c = bridge.curve_class("elliptic", n=n)
    bad = {"K.d": 0, "E_sigma.d": 0, "E.e": 0, "E_j.e": 0, "K.c": 0, "E.c": 0, "fiber": 0, "K.l": 0}
    for L in labels:
        d = bridge.curve_class("d", L)
        e = bridge.curve_class("e", L)
        E_M = bridge.beta_class(L)
        bad["K.l"] += bridge.intersect(K, bridge.line_class(L)) != 1
        bad["K.d"] += bridge.intersect(K, d) != n + 1
        bad["E_sigma.d"] += any(bridge.intersect(bridge.beta_class(neighbour(L, {i})), d) != 0
                                for i in range(1, N + 1))
        bad["E.e"] += bridge.intersect(E_M, e) != -1
        bad["E_j.e"] += any(bridge.intersect(bridge.beta_class(neighbour(L, {i, j})), e) != 0
                            for i, j in combinations(range(1, N + 1), 2))
        bad["K.c"] += bridge.intersect(K, c) != 4
        bad["E.c"] += bridge.intersect(E_M, c) != 1
    Ed = cones.E_dual_cone(n)
    for fam in Family:
        kind = "phi_fiber" if fam is Family.PHI else "psi_fiber"
        for i in range(1, N + 1):
            f = bridge.curve_class(kind, i=i, n=n)
            face = cones.face_of(Ed, bridge.alpha(f))
            r = bridge.contraction_ray(fam, i, n)
            # f spans the contracted facet of E, so its dual face is the single ray r
            ok = (bridge.intersect(K, f) == 2 and face.cone_dim == 1
                  and cones.membership(face, r))
            bad["fiber"] += not ok
    for key, v in bad.items():
        rep.add(f"curves.{key}", f"curve pairing {key} over all planes", 0, v)
    rep.seconds = time.perf_counter() - t
    return rep


def classify_roundtrip(n: int, count: int, seed: int = 0) -> Report:
    t = time.perf_counter()
    rep = Report(n, "classify")
    rng = random.Random(seed)
    N = n + 3
    bad = 0
    for _ in range(count):
        I = frozenset(x for x in range(1, N + 1) if rng.random() < 0.5)
        if len(I) % 2:
            I = I ^ {rng.randint(1, N)}
        perm = list(range(1, N + 1))
        rng.shuffle(perm)
        f = bridge.pseudo_iso_pullback(I, perm, n)
        if bridge.classify_pseudo_iso(f) != (canonical(I, n), tuple(perm)):
            bad += 1
    rep.add("bridge.classify_roundtrip", f"classifier recovers (I, kappa) over {count} draws", 0, bad)
    rep.seconds = time.perf_counter() - t
    return rep


SUITE_FUNCS: dict[str, Callable[[int], Report]] = {
    "lattice": lattice_suite,
    "cones": cones_suite,
    "mcd": mcd_suite,
    "bridge": bridge_suite,
}


def run_suite(n: int, suite: str, unsafe: bool = False) -> Report:
    if suite not in SUITE_FUNCS and suite != "all":
        raise KeyError(f"unknown suite {suite!r}")
    if n % 2 or n < 2:
        raise ValueError(f"n must be even and at least 2, got {n}")
    if n > SUITE_CAP and not unsafe:
        raise ValueError(f"n = {n} exceeds the cap {SUITE_CAP}; pass --unsafe-cap to run anyway")
    if suite == "all":
        rep = Report(n, "all")
        for name in SUITES:
            rep.extend(SUITE_FUNCS[name](n, unsafe=unsafe))
        return rep
    return SUITE_FUNCS[suite](n, unsafe=unsafe)
