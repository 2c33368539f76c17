"""W(D_N) as signed permutations with an even number of sign changes.

An element sends ``eps_i`` to ``signs[i-1] * eps_{perm[i-1]}`` and fixes
``eta``. Indices are 1-based throughout, matching subset labels.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from sympy.combinatorics import Permutation, PermutationGroup

from .lattice import LatticeClass, Side


class GroupTooLarge(RuntimeError):
    """Raised instead of attempting an enumeration beyond the configured cap."""


@dataclass(frozen=True)
class WeylElement:
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        perm, signs = tuple(self.perm), tuple(self.signs)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError(f"not a permutation of 1..{len(perm)}: {perm}")
        if len(signs) != len(perm) or any(s not in (1, -1) for s in signs):
            raise ValueError(f"signs must be a +-1 vector of length {len(perm)}")
        if signs.count(-1) % 2:
            raise ValueError("W(D_N) allows only an even number of sign changes")

    @property
    def N(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, N: int) -> "WeylElement":
        return cls(tuple(range(1, N + 1)), (1,) * N)

    @property
    def flips(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, s in enumerate(self.signs) if s < 0)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        """Composition ``self o other`` (apply ``other`` first)."""
        if other.N != self.N:
            raise ValueError("size mismatch")
        perm = tuple(self.perm[p - 1] for p in other.perm)
        signs = tuple(s * self.signs[p - 1] for s, p in zip(other.signs, other.perm))
        return WeylElement(perm, signs)

    def inverse(self) -> "WeylElement":
        perm = [0] * self.N
        signs = [1] * self.N
        for i, (p, s) in enumerate(zip(self.perm, self.signs), start=1):
            perm[p - 1] = i
            signs[p - 1] = s
        return WeylElement(tuple(perm), tuple(signs))

    def apply_coords(self, x: Sequence) -> tuple:
        """Act on ``(eta, eps_1..eps_N)`` coordinates."""
        if len(x) != self.N + 1:
            raise ValueError("size mismatch")
        out = [None] * (self.N + 1)
        out[0] = x[0]
        for i, (p, s) in enumerate(zip(self.perm, self.signs), start=1):
            out[p] = s * x[i]
        return tuple(out)

    def matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        """Matrix on the ``(eta, eps)`` basis; columns are images of basis vectors."""
        size = self.N + 1
        rows = [[Fraction(0)] * size for _ in range(size)]
        rows[0][0] = Fraction(1)
        for i, (p, s) in enumerate(zip(self.perm, self.signs), start=1):
            rows[p][i] = Fraction(s)
        return tuple(tuple(r) for r in rows)

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "flips": list(self.flips)}

    @classmethod
    def from_json(cls, data: dict) -> "WeylElement":
        perm = tuple(int(p) for p in data["perm"])
        flips = {int(f) for f in data["flips"]}
        return cls(perm, tuple(-1 if i in flips else 1 for i in range(1, len(perm) + 1)))


def sigma(I: Iterable[int], N: int) -> WeylElement:
    """The sign change ``sigma_I``; odd ``I`` is replaced by its complement."""
    I = frozenset(I)
    if not I <= set(range(1, N + 1)):
        raise ValueError(f"subset {sorted(I)} not inside 1..{N}")
    if len(I) % 2:
        I = frozenset(range(1, N + 1)) - I
    return WeylElement(tuple(range(1, N + 1)), tuple(-1 if i in I else 1 for i in range(1, N + 1)))


def permutation_element(perm: Sequence[int]) -> WeylElement:
    """The element of the stabilizer of ``M_0`` sending ``eps_i`` to ``eps_{perm[i-1]}``."""
    return WeylElement(tuple(perm), (1,) * len(perm))


def transposition(i: int, j: int, N: int) -> WeylElement:
    perm = list(range(1, N + 1))
    perm[i - 1], perm[j - 1] = j, i
    return permutation_element(perm)


def act(w: WeylElement, x: LatticeClass) -> LatticeClass:
    space = x.space
    if space.side is not Side.Z:
        raise ValueError("W(D_N) acts on the Z-side lattice")
    if space.N != w.N:
        raise ValueError(f"element of W(D_{w.N}) cannot act on a rank {space.rank} lattice")
    moved = space.vector(w.apply_coords(x.to("eps").coords), "eps")
    return moved.to(x.basis)


def decompose(w: WeylElement) -> tuple[frozenset[int], tuple[int, ...]]:
    """Split ``w = sigma(I) o permutation_element(perm)`` with ``|I|`` even."""
    I = frozenset(p for p, s in zip(w.perm, w.signs) if s < 0)
    return I, w.perm


def recompose(I: Iterable[int], perm: Sequence[int]) -> WeylElement:
    return sigma(I, len(perm)) * permutation_element(perm)


@dataclass(frozen=True)
class GroupHandle:
    """A subgroup of W(D_N) given by generators."""

    N: int
    generators: tuple[WeylElement, ...]
    cap: int = 10
    _order: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if any(g.N != self.N for g in gens):
            raise ValueError("generator size mismatch")

    def _check_cap(self):
        if self.N > self.cap:
            raise GroupTooLarge(f"N={self.N} exceeds the enumeration cap {self.cap}")

    @cached_property
    def _perm_group(self) -> PermutationGroup:
        # faithful action on the 2N signed basis vectors +-eps_i
        N = self.N
        perms = []
        for g in self.generators:
            img = [0] * (2 * N)
            for i, (p, s) in enumerate(zip(g.perm, g.signs)):
                plus, minus = (p - 1, N + p - 1) if s > 0 else (N + p - 1, p - 1)
                img[i] = plus
                img[N + i] = minus
            perms.append(Permutation(img))
        if not perms:
            perms = [Permutation(list(range(2 * N)))]
        return PermutationGroup(perms)

    def order(self) -> int:
        if not self._order:
            self._check_cap()
            self._order.append(int(self._perm_group.order()))
        return self._order[0]

    def elements(self) -> list[WeylElement]:
        """All group elements by breadth-first closure, in discovery order."""
        self._check_cap()
        ident = WeylElement.identity(self.N)
        seen = {ident}
        out = [ident]
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for s in self.generators:
                h = s * g
                if h not in seen:
                    seen.add(h)
                    out.append(h)
                    queue.append(h)
        return out


def group_order(gens: GroupHandle) -> int:
    return gens.order()


def weyl_group(N: int, cap: int = 10) -> GroupHandle:
    """The full W(D_N): adjacent transpositions and ``sigma({1, 2})``."""
    gens = [transposition(i, i + 1, N) for i in range(1, N)]
    gens.append(sigma({1, 2}, N))
    return GroupHandle(N, tuple(gens), cap)


def sign_subgroup(N: int, cap: int = 10) -> GroupHandle:
    """The normal subgroup W' of sign changes, order ``2^(N-1)``."""
    return GroupHandle(N, tuple(sigma({i, i + 1}, N) for i in range(1, N)), cap)


def base_stabilizer(N: int, cap: int = 10) -> GroupHandle:
    """G_0, the stabilizer of ``M_0``: pure permutations."""
    return GroupHandle(N, tuple(transposition(i, i + 1, N) for i in range(1, N)), cap)


def sign_elements(N: int) -> list[WeylElement]:
    """All ``2^(N-1)`` elements of W', one per even subset."""
    from itertools import combinations

    out = []
    for k in range(0, N + 1, 2):
        for I in combinations(range(1, N + 1), k):
            out.append(sigma(I, N))
    return out


def orbit(gens: GroupHandle, x: LatticeClass) -> set[LatticeClass]:
    """Closure of ``{x}`` under the generators."""
    if x.space.N != gens.N:
        raise ValueError("size mismatch")
    start = x.to("eps")
    seen = {start.coords}
    queue = deque([start.coords])
    while queue:
        c = queue.popleft()
        for g in gens.generators:
            d = g.apply_coords(c)
            if d not in seen:
                seen.add(d)
                queue.append(d)
    return {x.space.vector(c, "eps") for c in seen}
