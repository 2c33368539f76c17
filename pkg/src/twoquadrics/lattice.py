"""The two rank ``n + 4`` quadratic lattices.

``Side.Z`` is the middle cohomology of the intersection of two quadrics,
spanned over the rationals by ``eta`` (codimension-m linear section) and the
orthogonal classes ``eps_1 .. eps_{n+3}`` built from a base plane ``M_0``.
``Side.X`` is the Picard lattice of the blow-up of ``P^n`` at ``n + 3`` points
with the Dolgachev pairing.

Classes carry exact ``Fraction`` coordinates in a named basis::

    >>> Z = make_space(2, Side.Z)
    >>> pair(Z.eta(), Z.eta())
    Fraction(4, 1)
    >>> X = make_space(4, Side.X)
    >>> X.anticanonical().to("HE").coords
    (Fraction(5, 1), Fraction(-3, 1), Fraction(-3, 1), Fraction(-3, 1), Fraction(-3, 1), Fraction(-3, 1), Fraction(-3, 1), Fraction(-3, 1))
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from sympy import Matrix as SympyMatrix
from sympy.matrices.normalforms import hermite_normal_form

from . import linalg


class Side(enum.Enum):
    Z = "ZSide"
    X = "XSide"


class LatticeSpace:
    """One of the two quadratic lattices for a fixed even ``n``.

    Instances are interned by :func:`make_space`; compare by ``(n, side)``.
    """

    def __init__(self, n: int, side: Side):
        if not isinstance(n, int) or n < 2 or n % 2:
            raise ValueError(f"n must be an even integer >= 2, got {n!r}")
        self.n = n
        self.side = Side(side)
        self.m = n // 2
        self.N = n + 3
        self.rank = n + 4
        half = Fraction(1, 2)
        N = self.N
        if self.side is Side.Z:
            self.canonical_basis = "eps"
            self.gram_diagonal = (Fraction(4),) + (Fraction((-1) ** self.m),) * N
            # M_i = 1/4 eta - 1/2 (sum_{j != i} eps_j - eps_i)
            cols = [tuple(Fraction(int(k == 0)) for k in range(self.rank))]
            for i in range(1, N + 1):
                cols.append((Fraction(1, 4),) + tuple(half if j == i else -half
                                                       for j in range(1, N + 1)))
            self._bases = {"eps": linalg.identity(self.rank),
                           "M": linalg.from_columns(cols)}
        else:
            self.canonical_basis = "HE"
            self.gram_diagonal = (Fraction(n - 1),) + (Fraction(-1),) * N
            antican = (Fraction(n + 1),) + (Fraction(-(n - 1)),) * N
            ke = [antican] + [tuple(Fraction(int(k == i)) for k in range(self.rank))
                              for i in range(1, N + 1)]
            # eps~_i = 1/2 (H - sum_{j != i} E_j + E_i)
            keps = [antican] + [(half,) + tuple(half if j == i else -half
                                                for j in range(1, N + 1))
                                for i in range(1, N + 1)]
            self._bases = {"HE": linalg.identity(self.rank),
                           "KE": linalg.from_columns(ke),
                           "Keps": linalg.from_columns(keps)}
        self._inverses: dict[str, linalg.Matrix] = {}

    # identity and pickling

    def __eq__(self, other):
        return (isinstance(other, LatticeSpace)
                and (self.n, self.side) == (other.n, other.side))

    def __hash__(self):
        return hash((self.n, self.side))

    def __reduce__(self):
        return (make_space, (self.n, self.side))

    def __repr__(self):
        return f"LatticeSpace(n={self.n}, side={self.side.value})"

    # bases

    @property
    def basis_names(self) -> tuple[str, ...]:
        return tuple(self._bases)

    def basis_matrix(self, basis: str) -> linalg.Matrix:
        """Columns are the basis vectors in canonical coordinates."""
        try:
            return self._bases[basis]
        except KeyError:
            raise KeyError(f"unknown basis {basis!r} for {self!r}; "
                           f"known: {self.basis_names}") from None

    def inverse_basis_matrix(self, basis: str) -> linalg.Matrix:
        if basis not in self._inverses:
            self._inverses[basis] = linalg.inverse(self.basis_matrix(basis))
        return self._inverses[basis]

    def gram(self, basis: str | None = None) -> linalg.Matrix:
        basis = basis or self.canonical_basis
        p = self.basis_matrix(basis)
        d = linalg.diagonal(self.gram_diagonal)
        return linalg.mat_mul(linalg.transpose(p), linalg.mat_mul(d, p))

    # constructors

    def vector(self, coords: Sequence, basis: str | None = None) -> "LatticeClass":
        return LatticeClass(self, tuple(coords), basis or self.canonical_basis)

    def zero(self) -> "LatticeClass":
        return self.vector([0] * self.rank)

    def _unit(self, k: int, basis: str) -> "LatticeClass":
        return self.vector([int(j == k) for j in range(self.rank)], basis)

    def _check_index(self, i: int):
        if not 1 <= i <= self.N:
            raise ValueError(f"index {i} outside 1..{self.N}")

    def _require(self, side: Side):
        if self.side is not side:
            raise ValueError(f"{self!r} is not a {side.value} space")

    def eta(self) -> "LatticeClass":
        self._require(Side.Z)
        return self._unit(0, "eps")

    def eps(self, i: int) -> "LatticeClass":
        self._require(Side.Z)
        self._check_index(i)
        return self._unit(i, "eps")

    def M(self, i: int) -> "LatticeClass":
        """The plane ``M_i = sigma_i(M_0)`` as a basis vector of the ``M`` basis."""
        self._require(Side.Z)
        self._check_index(i)
        return self._unit(i, "M")

    def H(self) -> "LatticeClass":
        self._require(Side.X)
        return self._unit(0, "HE")

    def E(self, i: int) -> "LatticeClass":
        self._require(Side.X)
        self._check_index(i)
        return self._unit(i, "HE")

    def anticanonical(self) -> "LatticeClass":
        self._require(Side.X)
        return self._unit(0, "KE")

    def eps_tilde(self, i: int) -> "LatticeClass":
        self._require(Side.X)
        self._check_index(i)
        return self._unit(i, "Keps")

    # integrality (Z side)

    @cached_property
    def _integral_basis(self) -> linalg.Matrix:
        """HNF basis (columns, canonical coords scaled by 4) of the span of all planes."""
        from .planes import all_labels, plane_class

        self._require(Side.Z)
        cols = [[int(4 * c) for c in plane_class(L).canonical]
                for L in all_labels(self.n)]
        hnf = hermite_normal_form(SympyMatrix(cols).T)
        return tuple(tuple(Fraction(int(x)) for x in row) for row in hnf.tolist())

    def integral_basis(self) -> list["LatticeClass"]:
        """A Z-basis of the lattice generated by the plane classes."""
        b = self._integral_basis
        return [self.vector([x / 4 for x in col]) for col in linalg.transpose(b)]


def make_space(n: int, side: Side | str) -> LatticeSpace:
    """Interned lattice for even ``n >= 2``; ``side`` is a :class:`Side` or its value."""
    return _make_space(n, Side(side))


@lru_cache(maxsize=None)
def _make_space(n: int, side: Side) -> LatticeSpace:
    return LatticeSpace(n, side)


@dataclass(frozen=True, eq=False)
class LatticeClass:
    """An exact vector of a :class:`LatticeSpace` written in a named basis."""

    space: LatticeSpace
    coords: tuple
    basis: str

    def __post_init__(self):
        if len(self.coords) != self.space.rank:
            raise ValueError(f"expected {self.space.rank} coordinates, got {len(self.coords)}")
        self.space.basis_matrix(self.basis)
        object.__setattr__(self, "coords", linalg.as_fractions(self.coords))

    @cached_property
    def canonical(self) -> tuple[Fraction, ...]:
        if self.basis == self.space.canonical_basis:
            return self.coords
        return linalg.mat_vec(self.space.basis_matrix(self.basis), self.coords)

    def to(self, basis: str) -> "LatticeClass":
        if basis == self.basis:
            return self
        inv = self.space.inverse_basis_matrix(basis)
        return LatticeClass(self.space, linalg.mat_vec(inv, self.canonical), basis)

    def __eq__(self, other):
        if not isinstance(other, LatticeClass):
            return NotImplemented
        return self.space == other.space and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.space, self.canonical))

    def _coerce(self, other: "LatticeClass") -> tuple:
        if not isinstance(other, LatticeClass):
            raise TypeError(f"expected LatticeClass, got {type(other).__name__}")
        if other.space != self.space:
            raise ValueError(f"mismatched spaces: {self.space!r} vs {other.space!r}")
        return other.to(self.basis).coords

    def __add__(self, other):
        oc = self._coerce(other)
        return LatticeClass(self.space, tuple(a + b for a, b in zip(self.coords, oc)), self.basis)

    def __sub__(self, other):
        oc = self._coerce(other)
        return LatticeClass(self.space, tuple(a - b for a, b in zip(self.coords, oc)), self.basis)

    def __neg__(self):
        return LatticeClass(self.space, tuple(-a for a in self.coords), self.basis)

    def __mul__(self, scalar):
        s = Fraction(scalar)
        return LatticeClass(self.space, tuple(s * a for a in self.coords), self.basis)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / Fraction(scalar))

    def __repr__(self):
        body = ", ".join(str(c) for c in self.coords)
        return f"LatticeClass(n={self.space.n}, {self.space.side.value}, {self.basis}: [{body}])"

    def to_json(self) -> dict:
        return {"space": {"n": self.space.n, "side": self.space.side.value},
                "basis": self.basis,
                "coords": [[c.numerator, c.denominator] for c in self.coords]}

    @classmethod
    def from_json(cls, data: dict) -> "LatticeClass":
        space = make_space(int(data["space"]["n"]), data["space"]["side"])
        coords = [Fraction(int(a), int(b)) for a, b in data["coords"]]
        return cls(space, tuple(coords), data["basis"])


def pair(x: LatticeClass, y: LatticeClass) -> Fraction:
    """Symmetric bilinear form of the common space (basis independent)."""
    if x.space != y.space:
        raise ValueError(f"cannot pair classes of {x.space!r} and {y.space!r}")
    return sum((g * a * b for g, a, b in zip(x.space.gram_diagonal, x.canonical, y.canonical)),
               Fraction(0))


def convert(x: LatticeClass, target_basis: str) -> LatticeClass:
    return x.to(target_basis)


def is_integral(x: LatticeClass) -> bool:
    """Whether ``x`` lies in the Z-span of the plane classes (Z side only)."""
    space = x.space
    space._require(Side.Z)
    scaled = [4 * c for c in x.canonical]
    if any(c.denominator != 1 for c in scaled):
        return False
    basis = space._integral_basis
    if len(basis[0]) != space.rank:
        raise ArithmeticError("plane classes do not span the space")
    coeffs = linalg.solve(basis, scaled)
    return all(c.denominator == 1 for c in coeffs)


def sum_classes(classes: Iterable[LatticeClass]) -> LatticeClass:
    it = iter(classes)
    total = next(it)
    for c in it:
        total = total + c
    return total
