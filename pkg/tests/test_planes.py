from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twoquadrics.lattice import Side, make_space, pair
from twoquadrics.planes import (Family, PlaneLabel, all_labels, canonical, family_parity, intersection_dim,
                                label_of, neighbour, plane_class)
from twoquadrics.weyl import act, sigma

import oracles


def test_canonical_examples():
    assert canonical({2, 3, 4, 5}, 2).rep == {1}
    assert canonical((), 2).rep == frozenset()
    assert canonical({1, 2, 3, 4}, 4).rep == {5, 6, 7}
    assert canonical({1, 2, 3}, 4).rep == {1, 2, 3}


def test_canonical_rejects_out_of_range():
    with pytest.raises(ValueError):
        canonical({0, 1}, 2)
    with pytest.raises(ValueError):
        canonical({6}, 2)
    with pytest.raises(ValueError):
        PlaneLabel(2, frozenset({1, 2, 3}))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_label_count(n):
    labels = all_labels(n)
    assert len(labels) == len(set(labels)) == 2 ** (n + 2)


def test_plane_class_empty_n2():
    Z = make_space(2, Side.Z)
    expected = Z.eta() / 4 + sum((Z.eps(i) for i in range(2, 6)), Z.eps(1)) / 2
    assert plane_class(canonical((), 2)) == expected
    assert pair(expected, Z.eta()) == 1


def test_plane_class_single():
    L = canonical({1}, 2)
    assert plane_class(L).canonical == oracles.plane_eps({1}, 2)
    assert plane_class(L) == act(sigma({1}, 5), plane_class(canonical((), 2)))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_plane_classes_match_oracle(n):
    assert {plane_class(L).canonical for L in all_labels(n)} == oracles.all_plane_vectors(n)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_self_pairing(n):
    m = n // 2
    values = {pair(plane_class(L), plane_class(L)) for L in all_labels(n)}
    v = oracles.plane_eps((), n)
    assert values == {oracles.z_pair(v, v, n)} == {Fraction(1 + (-1) ** m * (n + 3), 4)}
    if n == 2:
        assert values == {-1}


@pytest.mark.parametrize("n", [2, 4])
def test_label_of_inverts(n):
    for L in all_labels(n):
        assert label_of(plane_class(L)) == L
    assert label_of(make_space(n, Side.Z).eta()) is None


def test_intersection_dim_examples():
    assert intersection_dim(canonical((), 4), canonical((), 4)) == 2
    assert intersection_dim(canonical((), 4), canonical({1, 2}, 4)) == 0
    assert intersection_dim(canonical({1}, 2), canonical({2}, 2)) == -1


@pytest.mark.parametrize("n", [2, 4, 6])
def test_intersection_dim_from_pairing(n):
    # M . M' depends only on dim(M & M'); check that classes with equal dimension pair equally
    by_dim = {}
    for a in all_labels(n):
        for b in all_labels(n)[:8]:
            by_dim.setdefault(intersection_dim(a, b), set()).add(pair(plane_class(a), plane_class(b)))
    assert all(len(v) == 1 for v in by_dim.values())
    assert set(by_dim) == set(range(-1, n // 2 + 1))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_neighbour_dimension(n):
    m = n // 2
    assert {intersection_dim(L, neighbour(L, {i})) for L in all_labels(n) for i in range(1, n + 4)} == {m - 1}


def test_family_examples():
    assert family_parity(3, canonical((), 4)) is Family.PSI
    assert family_parity(1, canonical({2}, 2)) is Family.PHI
    with pytest.raises(ValueError):
        family_parity(0, canonical((), 2))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_families_split_evenly(n):
    for i in range(1, n + 4):
        fams = [family_parity(i, L) for L in all_labels(n)]
        assert fams.count(Family.PHI) == fams.count(Family.PSI) == 2 ** (n + 1)


@given(n=st.sampled_from([2, 4, 6]), data=st.data())
def test_neighbour_and_family(n, data):
    N = n + 3
    L = data.draw(st.sampled_from(all_labels(n)))
    I = data.draw(st.frozensets(st.integers(1, N)))
    i = data.draw(st.integers(1, N))
    assert neighbour(neighbour(L, I), I) == L
    same = family_parity(i, L) is family_parity(i, neighbour(L, I))
    # moving by an even number of flips away from i keeps the family
    J = I - {i}
    assert same == (len(J) % 2 == 0)


def test_json():
    assert canonical({3, 1}, 4).to_json() == [1, 3]
