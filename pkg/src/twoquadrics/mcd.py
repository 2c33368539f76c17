"""The blow-up X of P^n at n + 3 points: effective divisors, the Mori chamber
arrangement on the demihypercube slice, wall crossings and the flips to the
Fano model.

Points of the slice ``(n+1) y + sum x_i = 1`` are written in coordinates
``alpha_1..alpha_{n+3}`` centred at ``-K_X / 4``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from . import cones, linalg
from .cones import (AffinePolytope, H_inequality, box_inequality, eval_H,
                    evaluate_inequality, polytope_from_inequalities)
from .lattice import LatticeClass, LatticeSpace, Side, make_space


class NotEffective(ValueError):
    """The class is not in the effective cone of X."""


def _check_n(n: int):
    if not isinstance(n, int) or n < 2 or n % 2:
        raise ValueError(f"n must be an even integer >= 2, got {n!r}")


def _subset(I: Iterable[int], N: int) -> frozenset:
    I = frozenset(I)
    if not I <= set(range(1, N + 1)):
        raise ValueError(f"subset {sorted(I)} not inside 1..{N}")
    return I


# ---------------------------------------------------------------------------
# divisor classes and the radial projection


def class_E_I(I: Iterable[int], n: int) -> LatticeClass:
    """``(s+1) H - (s+1) sum_{i in I} E_i - s sum_{j not in I} E_j`` with ``|I^c| = 2s+3``.

    ``I = {i}^c`` gives ``E_i``.
    """
    _check_n(n)
    N = n + 3
    I = _subset(I, N)
    rest = N - len(I)
    if rest == 1:
        (i,) = set(range(1, N + 1)) - I
        return make_space(n, Side.X).E(i)
    if rest % 2 == 0 or rest < 3:
        raise ValueError(f"|I^c| = {rest} must be odd (>= 3, or 1 for E_i)")
    s = (rest - 3) // 2
    coords = [s + 1] + [-(s + 1) if j in I else -s for j in range(1, N + 1)]
    return make_space(n, Side.X).vector(coords, "HE")


def effective_generators(n: int) -> list[LatticeClass]:
    """All ``E_I``: one per subset with odd complement."""
    N = n + 3
    return [class_E_I(frozenset(range(1, N + 1)) - J, n) for J in cones.odd_subsets(N)]


def slice_denominator(x: LatticeClass) -> Fraction:
    """``(n+1) y + sum x_i``; positive on effective classes."""
    if x.space.side is not Side.X:
        raise ValueError("expected an X-side class")
    y, *xs = x.to("HE").coords
    return (x.space.n + 1) * y + sum(xs, Fraction(0))


def radial_project(x: LatticeClass) -> tuple[Fraction, ...]:
    """``alpha_i = (y + x_i) / ((n+1) y + sum x) - 1/2``."""
    d = slice_denominator(x)
    if d == 0:
        raise ValueError("class lies on the hyperplane excluded from the radial projection")
    y, *xs = x.to("HE").coords
    return tuple((y + xi) / d - Fraction(1, 2) for xi in xs)


def slice_point(alpha: Sequence, n: int) -> LatticeClass:
    """The class ``-K_X / 4 + sum alpha_i eps~_i`` on the slice."""
    X = make_space(n, Side.X)
    return X.vector([Fraction(1, 4)] + list(linalg.as_fractions(alpha)), "Keps")


def linear_form(ineq: Sequence, n: int) -> tuple[int, ...]:
    """Homogenize a slice inequality to a normal on ``(y, x_1..x_N)`` coordinates.

    ``c0 + sum c_i alpha_i`` becomes ``c0 D + sum c_i (y + x_i - D/2)`` where
    ``D = (n+1) y + sum x_i``; positive multiples agree in sign on ``D > 0``.
    """
    N = n + 3
    c0, cs = Fraction(ineq[0]), [Fraction(c) for c in ineq[1:]]
    k = c0 - sum(cs, Fraction(0)) / 2
    y = k * (n + 1) + sum(cs, Fraction(0))
    xs = [k + c for c in cs]
    return linalg.primitive([y] + xs) if any([y] + xs) else (0,) * (N + 1)


# ---------------------------------------------------------------------------
# the arrangement and named polytopes


class WallSide(enum.Enum):
    BELOW = "below"
    ABOVE = "above"


@dataclass(frozen=True)
class WallDescriptor:
    """A hyperplane of the chamber arrangement, or one of the box walls.

    ``H_I = k`` with ``2 <= k <= (n+3)/2`` and ``|I| != k mod 2``; or, when
    ``box`` is ``(i, sign)``, the facet ``alpha_i = sign/2`` of the slice.
    ``side`` names the halfspace ``H_I <= k`` (below) or ``H_I >= k`` (above).
    """

    n: int
    I: frozenset = frozenset()
    k: int = 0
    side: WallSide = WallSide.BELOW
    box: tuple[int, int] | None = None

    def __post_init__(self):
        _check_n(self.n)
        N = self.n + 3
        object.__setattr__(self, "I", _subset(self.I, N))
        if self.box is not None:
            i, sgn = self.box
            if not 1 <= i <= N or sgn not in (1, -1) or self.I or self.k:
                raise ValueError(f"invalid box wall {self.box}")
            return
        if not 2 <= self.k <= N // 2:
            raise ValueError(f"k = {self.k} outside 2..{N // 2}")
        if (len(self.I) - self.k) % 2 == 0:
            raise ValueError(f"|I| = {len(self.I)} and k = {self.k} must have different parity")

    @classmethod
    def box_wall(cls, i: int, sign: int, n: int) -> "WallDescriptor":
        return cls(n, box=(i, sign))

    @property
    def is_box(self) -> bool:
        return self.box is not None

    def normal(self) -> tuple[int, ...]:
        """Primitive slice inequality, nonnegative on the ``side`` halfspace."""
        N = self.n + 3
        if self.box is not None:
            i, sgn = self.box
            return box_inequality(i, N, upper=sgn > 0)
        return H_inequality(self.I, self.k, N, at_least=self.side is WallSide.ABOVE)

    def value(self, alpha: Sequence) -> Fraction:
        """Signed offset: ``H_I - k``, or ``alpha_i - sign/2`` for box walls."""
        if self.box is not None:
            i, sgn = self.box
            return Fraction(alpha[i - 1]) - Fraction(sgn, 2)
        return eval_H(self.I, alpha) - self.k

    def sort_key(self):
        if self.box is not None:
            return (0, self.box[0], self.box[1])
        return (1, self.k, len(self.I), sorted(self.I))

    def __repr__(self):
        if self.box is not None:
            i, sgn = self.box
            return f"(alpha_{i} = {'+' if sgn > 0 else '-'}1/2)"
        return f"(H_{{{','.join(map(str, sorted(self.I)))}}} = {self.k})"

    def to_json(self) -> dict:
        if self.box is not None:
            return {"box": self.box[0], "value": f"{'+' if self.box[1] > 0 else '-'}1/2"}
        return {"I": sorted(self.I), "k": self.k, "side": self.side.value}


@lru_cache(maxsize=None)
def arrangement(n: int) -> tuple[WallDescriptor, ...]:
    """All hyperplanes ``H_I = k`` of the chamber arrangement, in a fixed order."""
    _check_n(n)
    N = n + 3
    out = []
    for k in range(2, N // 2 + 1):
        for size in range(N + 1):
            if (size - k) % 2:
                out.extend(WallDescriptor(n, frozenset(c), k)
                           for c in combinations(range(1, N + 1), size))
    return tuple(sorted(out, key=WallDescriptor.sort_key))


def box_walls(n: int) -> tuple[WallDescriptor, ...]:
    return tuple(WallDescriptor.box_wall(i, s, n) for i in range(1, n + 4) for s in (-1, 1))


def mov_inequalities(n: int) -> list[tuple[int, ...]]:
    N = n + 3
    out = [box_inequality(i, N, upper) for i in range(1, N + 1) for upper in (False, True)]
    out.extend(H_inequality(I, 2, N) for I in cones.odd_subsets(N))
    return out


def nef_inequalities(n: int) -> list[tuple[int, ...]]:
    N = n + 3
    out = [H_inequality({i}, 2, N) for i in range(1, N + 1)]
    out.extend(H_inequality(c, 3, N, at_least=False) for c in combinations(range(1, N + 1), 2))
    # D . C >= 0 for the rational normal curve C; only binding at n = 2, where C = E_0
    out.append(H_inequality((), 3, N, at_least=False))
    return out


def fano_inequalities(n: int) -> list[tuple[int, ...]]:
    N = n + 3
    m = n // 2
    return [H_inequality(c, m + 1, N)
            for size in range(m % 2, N + 1, 2) for c in combinations(range(1, N + 1), size)]


def fano_inequalities_KE(n: int) -> list[tuple[int, ...]]:
    """Nef cone of the Fano model in ``(-K_X, E_i)`` coordinates ``(z, t)``."""
    return cones.E_dual_inequalities_M_basis(n)


@dataclass(frozen=True)
class NamedPolytope:
    """A polytope of the slice with the inequality list that defines it.

    Vertices are computed on first use; the movable slice grows quickly with n.
    """

    name: str
    n: int
    declared: tuple[tuple[int, ...], ...]

    @cached_property
    def polytope(self) -> AffinePolytope:
        if self.name == "Delta":
            return cones.demihypercube(self.n + 3)
        return polytope_from_inequalities(self.declared, self.n + 3)

    def cone(self) -> cones.RationalCone:
        """Cone over the polytope in ``{H, E_i}`` coordinates."""
        return cones.cone_from_rays([slice_point(v, self.n) for v in self.polytope.vertices],
                                    basis="HE")

    def satisfies_declared(self, alpha: Sequence) -> bool:
        """Membership straight from the defining inequalities (no vertex enumeration)."""
        return all(evaluate_inequality(h, alpha) >= 0 for h in self.declared)

    def contains(self, alpha: Sequence) -> bool:
        return self.polytope.contains(alpha)

    def in_interior(self, alpha: Sequence) -> bool:
        return self.polytope.in_interior(alpha)


@dataclass(frozen=True)
class NamedCones:
    n: int
    delta: NamedPolytope
    mov: NamedPolytope
    nef: NamedPolytope
    fano: NamedPolytope

    def __iter__(self):
        return iter((self.delta, self.mov, self.nef, self.fano))

    def by_name(self, name: str) -> NamedPolytope:
        for p in self:
            if p.name == name:
                return p
        raise KeyError(name)


def _named(name: str, n: int, ineqs: list) -> NamedPolytope:
    return NamedPolytope(name, n, tuple(sorted(set(ineqs))))


@lru_cache(maxsize=None)
def named_cones(n: int) -> NamedCones:
    """The slices of Eff(X), Mov(X), Nef(X) and Nef of the Fano model."""
    _check_n(n)
    return NamedCones(n, _named("Delta", n, cones.demihypercube_inequalities(n + 3)),
                      _named("Mov", n, mov_inequalities(n)),
                      _named("Nef", n, nef_inequalities(n)),
                      _named("Fano", n, fano_inequalities(n)))


# ---------------------------------------------------------------------------
# chambers


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def cell_polytope(n: int, signs: Sequence[int]) -> AffinePolytope:
    """The closed cell of the slice of Eff(X) with the given arrangement signs."""
    walls = arrangement(n)
    ineqs = list(cones.demihypercube_inequalities(n + 3))
    for w, s in zip(walls, signs):
        up = H_inequality(w.I, w.k, n + 3)
        if s >= 0:
            ineqs.append(up)
        if s <= 0:
            ineqs.append(tuple(-c for c in up))
    return polytope_from_inequalities(ineqs, n + 3)


@dataclass(frozen=True)
class ChamberDescriptor:
    """Signs of ``H_I - k`` over :func:`arrangement` at a point of the slice."""

    n: int
    signs: tuple[int, ...]

    @property
    def is_full_dimensional(self) -> bool:
        return 0 not in self.signs

    def walls_containing(self) -> list[WallDescriptor]:
        return [w for w, s in zip(arrangement(self.n), self.signs) if s == 0]

    @cached_property
    def polytope(self) -> AffinePolytope:
        return cell_polytope(self.n, self.signs)

    @property
    def sample_point(self) -> tuple[Fraction, ...]:
        """Vertex centroid: a relative-interior point of the cell."""
        return self.polytope.centroid()

    def bounding_walls(self) -> list[WallDescriptor]:
        """Arrangement hyperplanes supporting a facet of the cell."""
        facets = set(self.polytope.inequalities)
        out = []
        for w, s in zip(arrangement(self.n), self.signs):
            if s == 0:
                continue
            normal = H_inequality(w.I, w.k, self.n + 3, at_least=s > 0)
            if normal in facets:
                out.append(WallDescriptor(self.n, w.I, w.k,
                                          WallSide.ABOVE if s > 0 else WallSide.BELOW))
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "signs": list(self.signs)}


def signs_at(alpha: Sequence, n: int) -> tuple[int, ...]:
    return tuple(_sign(w.value(alpha)) for w in arrangement(n))


def chamber_of(x: LatticeClass) -> ChamberDescriptor:
    """The arrangement cell whose relative interior contains the class of ``x``."""
    if x.space.side is not Side.X:
        raise ValueError("expected an X-side class")
    n = x.space.n
    if slice_denominator(x) <= 0:
        raise NotEffective(f"{x!r} is not effective")
    alpha = radial_project(x)
    if not cones.demihypercube(n + 3).contains(alpha):
        raise NotEffective(f"{x!r} is not effective")
    return ChamberDescriptor(n, signs_at(alpha, n))


def chamber_at(alpha: Sequence, n: int) -> ChamberDescriptor:
    return chamber_of(slice_point(alpha, n))


def enumerate_chambers(n: int, cap: int = 10_000) -> list[ChamberDescriptor]:
    """All full-dimensional cells of the subdivision of the slice, by adjacency search.

    Starts from the cell of ``-K_X`` and crosses every bounding wall.
    """
    _check_n(n)
    start = chamber_at((0,) * (n + 3), n)
    seen = {start.signs: start}
    queue = deque([start])
    walls = arrangement(n)
    index = {(w.I, w.k): t for t, w in enumerate(walls)}
    while queue:
        c = queue.popleft()
        for w in c.bounding_walls():
            t = index[(w.I, w.k)]
            flipped = list(c.signs)
            flipped[t] = -flipped[t]
            key = tuple(flipped)
            if key not in seen:
                if len(seen) >= cap:
                    raise RuntimeError(f"more than {cap} chambers; raise the cap")
                d = ChamberDescriptor(n, key)
                seen[key] = d
                queue.append(d)
    return sorted(seen.values(), key=lambda d: d.signs)


# ---------------------------------------------------------------------------
# special subvarieties and the factorization


@dataclass(frozen=True)
class SpecialVariety:
    """``J_{I,s}``: strict transform of the join of ``<p_i : i in I>`` with ``Sec_{s-1}(C)``."""

    n: int
    I: frozenset
    s: int

    def __post_init__(self):
        _check_n(self.n)
        object.__setattr__(self, "I", _subset(self.I, self.n + 3))
        d = len(self.I)
        if d > self.n or self.s < 0 or d + 2 * self.s > self.n:
            raise ValueError(f"need |I| <= n and 0 <= s <= (n - |I|)/2, got |I|={d}, s={self.s}")

    @property
    def d(self) -> int:
        return len(self.I)

    @property
    def dim(self) -> int:
        return self.d + 2 * self.s - 1

    @property
    def is_divisorial(self) -> bool:
        return self.d + 2 * self.s == self.n

    def divisor_class(self) -> LatticeClass:
        if not self.is_divisorial:
            raise ValueError(f"{self!r} is not a divisor")
        return class_E_I(self.I, self.n)

    def sort_key(self):
        return (self.dim, self.d, sorted(self.I), self.s)

    def __repr__(self):
        return f"J_{{{{{','.join(map(str, sorted(self.I)))}}},{self.s}}}"

    def to_json(self) -> dict:
        return {"I": sorted(self.I), "s": self.s, "dim": self.dim}


def special_varieties(n: int, dim: int) -> list[SpecialVariety]:
    _check_n(n)
    N = n + 3
    out = []
    for d in range(0, n + 1):
        twice_s = dim + 1 - d
        if twice_s < 0 or twice_s % 2 or d + twice_s > n:
            continue
        out.extend(SpecialVariety(n, frozenset(c), twice_s // 2)
                   for c in combinations(range(1, N + 1), d))
    return sorted(out, key=SpecialVariety.sort_key)


@dataclass(frozen=True)
class FactorizationStep:
    step: int
    flipped: tuple[SpecialVariety, ...]
    walls: tuple[WallDescriptor, ...]

    def to_json(self) -> dict:
        return {"step": self.step, "flipped": [j.to_json() for j in self.flipped],
                "count": len(self.flipped)}


@dataclass(frozen=True)
class Factorization:
    n: int
    steps: tuple[FactorizationStep, ...]
    counts: dict = field(compare=False)

    def to_json(self) -> dict:
        return {"n": self.n, "steps": [s.to_json() for s in self.steps], "counts": dict(self.counts)}


def walls_to_fano(n: int) -> list[WallDescriptor]:
    """Walls crossed from the Nef cell to the Fano cell: ``3 <= k <= m+1``, ``|I| <= k-1``."""
    m = n // 2
    return [WallDescriptor(n, w.I, w.k, WallSide.BELOW) for w in arrangement(n)
            if 3 <= w.k <= m + 1 and len(w.I) <= w.k - 1]


def terminal_counts(n: int) -> dict:
    """Binomial counts of the special m-planes on the Fano model."""
    m = n // 2
    N = n + 3
    top = sum(comb(N, d) for d in range(0, m + 2) if (d - m) % 2)
    below = sum(comb(N, d) for d in range(0, m + 1) if (d - m) % 2 == 0)
    return {"dim_m": top, "dim_m_minus_1": below, "total": top + below}


def factorization(n: int) -> Factorization:
    """The flips ``X = X_0 --> X_1 --> ... --> X_{m-1}`` reaching the Fano model."""
    _check_n(n)
    m = n // 2
    crossed = walls_to_fano(n)
    steps = []
    for i in range(1, m):
        flipped = tuple(special_varieties(n, i))
        walls = tuple(w for w in crossed if w.k == i + 2)
        steps.append(FactorizationStep(i, flipped, walls))
    counts = terminal_counts(n)
    counts["enumerated_dim_m"] = len(special_varieties(n, m))
    counts["enumerated_dim_m_minus_1"] = len(special_varieties(n, m - 1))
    return Factorization(n, tuple(steps), counts)


@dataclass(frozen=True)
class ExceptionalJoin:
    """``J^i_{I,s}``: join inside ``E_i`` of the points ``q_j`` (``j in I``) with ``Sec_{s-1}(C')``."""

    i: int
    I: frozenset
    s: int

    def to_json(self) -> dict:
        return {"i": self.i, "I": sorted(self.I), "s": self.s}


def restrict_to_exceptional(i: int, J: SpecialVariety) -> ExceptionalJoin | None:
    """``E_i`` intersected with ``J_{I,s}``; ``None`` when empty."""
    if not 1 <= i <= J.n + 3:
        raise ValueError(f"index {i} outside 1..{J.n + 3}")
    if i in J.I:
        return ExceptionalJoin(i, J.I - {i}, J.s)
    if J.s == 0:
        return None
    return ExceptionalJoin(i, J.I | {i}, J.s - 1)


# ---------------------------------------------------------------------------
# wall crossings


@dataclass(frozen=True)
class WallKind:
    """Outcome of crossing a wall.

    ``kind`` is ``"fiber"``, ``"divisorial"`` or ``"flip"``; ``dims`` holds the
    flipped and flipping projective-space dimensions for flips.
    """

    wall: WallDescriptor
    kind: str
    description: str
    loci: tuple[SpecialVariety, ...] = ()
    exceptional: LatticeClass | None = None
    dims: tuple[int, int] | None = None

    def to_json(self) -> dict:
        out = dict(self.wall.to_json())
        out["kind"] = self.kind
        out["loci"] = [j.to_json() for j in self.loci]
        out["description"] = self.description
        if self.exceptional is not None:
            out["exceptional"] = self.exceptional.to_json()
        if self.dims is not None:
            out["dims"] = list(self.dims)
        return out


@lru_cache(maxsize=None)
def nef_interior_point(n: int) -> tuple[Fraction, ...]:
    return named_cones(n).nef.polytope.centroid()


def classify_wall(w: WallDescriptor, n: int | None = None) -> WallKind:
    """Fiber type for box walls, divisorial for ``k = 2``, a flip for ``k >= 3``."""
    n = w.n if n is None else n
    if n != w.n:
        raise ValueError("wall belongs to a different n")
    if w.box is not None:
        i, sgn = w.box
        fiber = (f"strict transform of a general line through p_{i}" if sgn < 0 else
                 f"strict transform of a general rational normal curve through the points other than p_{i}")
        desc = (f"generic P^1-bundle onto the Fano model of the blow-up of P^{n - 1} at the {n + 2} "
                f"points projected from p_{i}; fiber: {fiber}")
        return WallKind(w, "fiber", desc)
    if (w.I, w.k) not in {(v.I, v.k) for v in arrangement(n)}:
        raise ValueError(f"{w!r} is not in the arrangement")
    N = n + 3
    if w.k == 2:
        target = frozenset(range(1, N + 1)) - w.I
        label = "{" + ",".join(map(str, sorted(target))) + "}"
        return WallKind(w, "divisorial", f"blow-up of a smooth point with exceptional divisor E_{label}",
                        exceptional=class_E_I(target, n))
    k = w.k
    h = eval_H(w.I, nef_interior_point(n))
    if h < k:
        s = (k - len(w.I) - 1) // 2
        locus = SpecialVariety(n, w.I, s)
    elif h > k:
        comp = frozenset(range(1, N + 1)) - w.I
        s = (len(w.I) - k - 1) // 2
        locus = SpecialVariety(n, comp, s)
    else:
        raise ArithmeticError("the Nef cell meets the wall in its interior")
    # the Nef side contracts the locus; the other side carries the complementary space
    a, b = locus.dim, n - 1 - locus.dim
    return WallKind(w, "flip", f"flips P^{a} into P^{b}; locus {locus!r}",
                    loci=(locus,), dims=(a, b))
