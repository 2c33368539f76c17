"""Independent reference computations used to derive expected values.

Nothing here imports the package: the oracles rebuild the objects from their
closed formulas with plain integers, sympy or scipy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product
from math import gcd

import numpy as np
import sympy
from scipy.spatial import ConvexHull


def primitive(v):
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints) if g else tuple(ints)


# -- Z side -----------------------------------------------------------------


def z_gram(n):
    m = n // 2
    return [4] + [(-1) ** m] * (n + 3)


def z_pair(u, v, n):
    return sum(Fraction(g) * Fraction(a) * Fraction(b) for g, a, b in zip(z_gram(n), u, v))


def plane_eps(I, n):
    """Closed formula for the plane class in (eta, eps) coordinates."""
    N = n + 3
    I = set(I)
    half = Fraction((-1) ** len(I), 2)
    return (Fraction(1, 4),) + tuple(-half if j in I else half for j in range(1, N + 1))


def delta_eps(I, n):
    m = n // 2
    p = plane_eps(I, n)
    return tuple(Fraction((m + 1) // 2 if k == 0 else 0) + (-1) ** m * c for k, c in enumerate(p))


def all_subsets(N):
    for k in range(N + 1):
        for c in combinations(range(1, N + 1), k):
            yield frozenset(c)


def all_plane_vectors(n):
    return {plane_eps(I, n) for I in all_subsets(n + 3)}


# -- X side -----------------------------------------------------------------


def x_pair(u, v, n):
    g = [n - 1] + [-1] * (n + 3)
    return sum(Fraction(a) * Fraction(b) * c for a, b, c in zip(u, v, g))


def E_I_HE(I, n):
    N = n + 3
    rest = N - len(I)
    if rest == 1:
        (i,) = set(range(1, N + 1)) - set(I)
        return tuple(int(k == i) for k in range(N + 1))
    s = (rest - 3) // 2
    return tuple([s + 1] + [-(s + 1) if j in I else -s for j in range(1, N + 1)])


def radial(x, n):
    """Slice coordinates of an (H, E) vector ``y H + sum x_i E_i``."""
    y, xs = Fraction(x[0]), [Fraction(c) for c in x[1:]]
    D = (n + 1) * y + sum(xs)
    return tuple((y + xi) / D - Fraction(1, 2) for xi in xs)


# -- polytopes and cones ----------------------------------------------------


def demihypercube_vertices(N):
    return sorted(tuple(Fraction(s, 2) for s in signs)
                  for signs in product((-1, 1), repeat=N) if signs.count(1) % 2 == 1)


def hull_facets(points):
    """Facets of a full-dimensional polytope via qhull, merged across coplanar simplices."""
    hull = ConvexHull(np.array([[float(c) for c in p] for p in points]))
    planes = set()
    for eq in hull.equations:
        planes.add(tuple(np.round(eq / np.abs(eq[:-1]).max(), 6)))
    return planes


def brute_force_cone(rays):
    """Facets and extreme rays of a full-dimensional pointed cone by subset enumeration."""
    rays = sorted({primitive(r) for r in rays})
    d = len(rays[0])
    facets = set()
    for sub in combinations(rays, d - 1):
        M = sympy.Matrix(sub)
        if M.rank() != d - 1:
            continue
        (ns,) = M.nullspace()
        f = primitive(list(ns))
        vals = [sum(a * b for a, b in zip(f, r)) for r in rays]
        if all(v >= 0 for v in vals):
            facets.add(f)
        elif all(v <= 0 for v in vals):
            facets.add(tuple(-x for x in f))
    extreme = []
    for r in rays:
        tight = [f for f in facets if sum(a * b for a, b in zip(f, r)) == 0]
        if tight and sympy.Matrix(tight).rank() == d - 1:
            extreme.append(r)
    return sorted(extreme), sorted(facets)


def matrix_rank(rows):
    return sympy.Matrix(rows).rank() if rows else 0


# -- W(D_N) -----------------------------------------------------------------


def weyl_matrices(N):
    """All signed permutation matrices on (eta, eps_1..eps_N) with an even number of -1."""
    out = set()
    for perm in permutations(range(1, N + 1)):
        for signs in product((1, -1), repeat=N):
            if signs.count(-1) % 2:
                continue
            rows = [[0] * (N + 1) for _ in range(N + 1)]
            rows[0][0] = 1
            for i, (p, s) in enumerate(zip(perm, signs), start=1):
                rows[p][i] = s
            out.add(tuple(tuple(r) for r in rows))
    return out
