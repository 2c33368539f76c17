"""The ``2^(n+2)`` m-planes ``M_I = sigma_I(M_0)`` and their classes.

A label is a subset ``I`` of ``{1..n+3}`` modulo complement. Since ``n + 3`` is
odd exactly one of ``I``, ``I^c`` has at most ``m + 1`` elements; that one is
the canonical representative.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .lattice import LatticeClass, Side, make_space


class Family(enum.Enum):
    PHI = "Tphi"
    PSI = "Tpsi"


@dataclass(frozen=True)
class PlaneLabel:
    n: int
    rep: frozenset

    def __post_init__(self):
        rep = frozenset(self.rep)
        object.__setattr__(self, "rep", rep)
        N = self.n + 3
        if not rep <= set(range(1, N + 1)):
            raise ValueError(f"label {sorted(rep)} not inside 1..{N}")
        if len(rep) > self.n // 2 + 1:
            raise ValueError(f"{sorted(rep)} is not a canonical representative; use canonical()")

    @property
    def N(self) -> int:
        return self.n + 3

    @property
    def complement(self) -> frozenset:
        return frozenset(range(1, self.N + 1)) - self.rep

    def sort_key(self):
        return (len(self.rep), sorted(self.rep))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        inner = ",".join(str(i) for i in sorted(self.rep))
        return f"M_{{{inner}}}"

    def to_json(self) -> list[int]:
        return sorted(self.rep)


def canonical(I: Iterable[int], n: int) -> PlaneLabel:
    I = frozenset(I)
    N = n + 3
    if not I <= set(range(1, N + 1)):
        raise ValueError(f"subset {sorted(I)} not inside 1..{N}")
    if len(I) > n // 2 + 1:
        I = frozenset(range(1, N + 1)) - I
    return PlaneLabel(n, I)


@lru_cache(maxsize=None)
def all_labels(n: int) -> tuple[PlaneLabel, ...]:
    N = n + 3
    labels = [PlaneLabel(n, frozenset(c))
              for k in range(n // 2 + 2) for c in combinations(range(1, N + 1), k)]
    return tuple(sorted(labels))


def neighbour(L: PlaneLabel, I: Iterable[int]) -> PlaneLabel:
    """Label of ``sigma_I(M_L)``."""
    return canonical(L.rep.symmetric_difference(I), L.n)


@lru_cache(maxsize=None)
def _plane_coords(n: int, rep: frozenset) -> tuple[Fraction, ...]:
    N = n + 3
    half = Fraction((-1) ** len(rep), 2)
    return (Fraction(1, 4),) + tuple(-half if j in rep else half for j in range(1, N + 1))


def plane_class(L: PlaneLabel) -> LatticeClass:
    """``M_I = eta/4 + (-1)^|I|/2 (sum_{j not in I} eps_j - sum_{i in I} eps_i)``."""
    return make_space(L.n, Side.Z).vector(_plane_coords(L.n, L.rep), "eps")


@lru_cache(maxsize=None)
def _class_index(n: int) -> dict:
    return {plane_class(L).canonical: L for L in all_labels(n)}


def label_of(x: LatticeClass) -> PlaneLabel | None:
    """Inverse of :func:`plane_class`; ``None`` if ``x`` is not a plane class."""
    return _class_index(x.space.n).get(x.canonical)


def intersection_dim(L1: PlaneLabel, L2: PlaneLabel) -> int:
    """``dim(M_1 & M_2)``; ``-1`` when the planes are disjoint."""
    if L1.n != L2.n:
        raise ValueError("labels for different n")
    k = len(L1.rep ^ L2.rep)
    d = min(k, L1.N - k)
    return L1.n // 2 - d


def family_parity(i: int, L: PlaneLabel) -> Family:
    """Which spinor family the projection from the i-th coordinate point lands in.

    Normalized so that ``M_0`` (the empty label) lies in ``Tpsi`` for every ``i``.
    """
    if not 1 <= i <= L.N:
        raise ValueError(f"index {i} outside 1..{L.N}")
    J = L.rep if i not in L.rep else L.complement
    return Family.PSI if len(J) % 2 == 0 else Family.PHI
