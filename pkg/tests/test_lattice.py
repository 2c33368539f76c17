from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twoquadrics.lattice import LatticeClass, Side, convert, is_integral, make_space, pair
from twoquadrics.planes import all_labels, canonical, plane_class

import oracles

EVEN_N = st.sampled_from([2, 4, 6])
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def vectors(space):
    return st.lists(rationals, min_size=space.rank, max_size=space.rank)


def test_z_gram_n2():
    Z = make_space(2, Side.Z)
    expected = [[0] * 6 for _ in range(6)]
    for i, d in enumerate([4, -1, -1, -1, -1, -1]):
        expected[i][i] = d
    assert [list(r) for r in Z.gram()] == expected


def test_x_gram_n4():
    X = make_space(4, Side.X)
    assert pair(X.H(), X.H()) == 3
    assert all(pair(X.E(i), X.E(i)) == -1 for i in range(1, 8))


def test_anticanonical_square_n2():
    X = make_space(2, Side.X)
    assert pair(X.anticanonical(), X.anticanonical()) == 4


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_anticanonical_square(n):
    X = make_space(n, Side.X)
    K = tuple([n + 1] + [-(n - 1)] * (n + 3))
    assert pair(X.anticanonical(), X.anticanonical()) == oracles.x_pair(K, K, n) == 4 * (n - 1)


@pytest.mark.parametrize("n", [0, 3, -2, 5])
def test_make_space_rejects(n):
    with pytest.raises(ValueError):
        make_space(n, Side.Z)


def test_spaces_interned():
    assert make_space(4, Side.Z) is make_space(4, "ZSide")


def test_pair_eta_eta_n4():
    Z = make_space(4, Side.Z)
    assert pair(Z.eta(), Z.eta()) == 4


@pytest.mark.parametrize("n", [2, 4, 6])
def test_eta_pairs_one_with_every_plane(n):
    Z = make_space(n, Side.Z)
    assert {pair(Z.eta(), plane_class(L)) for L in all_labels(n)} == {1}


def test_empty_plane_self_pairing_n2():
    # oracle: (1/4)^2 * 4 + 5 * (1/2)^2 * (-1) = -1
    v = oracles.plane_eps((), 2)
    assert oracles.z_pair(v, v, 2) == -1
    M = plane_class(canonical((), 2))
    assert pair(M, M) == -1


def test_pair_rejects_mixed_spaces():
    with pytest.raises(ValueError):
        pair(make_space(2, Side.Z).eta(), make_space(4, Side.Z).eta())
    with pytest.raises(ValueError):
        pair(make_space(2, Side.Z).eta(), make_space(2, Side.X).H())


@pytest.mark.parametrize("n", [2, 4, 6])
def test_eps_in_M_basis(n):
    # eps_i = eta/(2(n+1)) - sum_j M_j/(n+1) + M_i
    Z = make_space(n, Side.Z)
    N = n + 3
    for i in range(1, N + 1):
        expected = [Fraction(1, 2 * (n + 1))] + [Fraction(-1, n + 1) + (j == i) for j in range(1, N + 1)]
        assert list(convert(Z.eps(i), "M").coords) == expected


def test_eta_fixed_by_conversion():
    Z = make_space(4, Side.Z)
    assert Z.eta().to("M").coords == (1,) + (0,) * 7


def test_anticanonical_in_bases():
    for n in (2, 4, 6):
        X = make_space(n, Side.X)
        he = X.vector([n + 1] + [-(n - 1)] * (n + 3), "HE")
        assert he.to("KE").coords == (1,) + (0,) * (n + 3)
        assert he.to("Keps").coords == (1,) + (0,) * (n + 3)


def test_eps_tilde_formula():
    X = make_space(4, Side.X)
    for i in range(1, 8):
        expected = [Fraction(1, 2)] + [Fraction(1, 2) if j == i else Fraction(-1, 2) for j in range(1, 8)]
        assert list(X.eps_tilde(i).to("HE").coords) == expected


def test_unknown_basis():
    Z = make_space(2, Side.Z)
    with pytest.raises(KeyError):
        Z.eta().to("HE")


@given(n=EVEN_N, data=st.data())
def test_pair_symmetric_bilinear_and_basis_free(n, data):
    for side, bases in ((Side.Z, ("eps", "M")), (Side.X, ("HE", "KE", "Keps"))):
        S = make_space(n, side)
        x = S.vector(data.draw(vectors(S)), data.draw(st.sampled_from(bases)))
        y = S.vector(data.draw(vectors(S)), data.draw(st.sampled_from(bases)))
        z = S.vector(data.draw(vectors(S)))
        a = data.draw(rationals)
        assert pair(x, y) == pair(y, x)
        assert pair(x * a + z, y) == a * pair(x, y) + pair(z, y)
        for b in bases:
            assert pair(x.to(b), y) == pair(x, y)
            assert x.to(b).to(x.basis).coords == x.coords


@given(n=EVEN_N, data=st.data())
def test_conversion_matrices_mutually_inverse(n, data):
    for side in Side:
        S = make_space(n, side)
        for b in S.basis_names:
            v = data.draw(vectors(S))
            assert S.vector(v, b).to(S.canonical_basis).to(b).coords == tuple(v)


def test_json_round_trip():
    X = make_space(4, Side.X)
    x = X.vector([Fraction(1, 3), 2, 0, 0, -1, 0, 0, Fraction(5, 2)], "KE")
    data = x.to_json()
    assert data["space"] == {"n": 4, "side": "XSide"}
    assert data["coords"][0] == [1, 3]
    back = LatticeClass.from_json(data)
    assert back == x and back.basis == "KE"


def test_is_integral_examples():
    Z = make_space(2, Side.Z)
    assert is_integral(Z.eta())
    assert not is_integral(Z.eta() / 2)
    assert is_integral(plane_class(canonical({1, 2}, 2)))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_is_integral_planes_and_eps_sums(n):
    Z = make_space(n, Side.Z)
    assert all(is_integral(plane_class(L)) for L in all_labels(n))
    assert is_integral(Z.eps(1) + Z.eps(2))


@pytest.mark.parametrize("n", [2, 4])
def test_plane_lattice_unimodular(n):
    # the integral span of the planes carries a form of determinant +-1
    Z = make_space(n, Side.Z)
    basis = Z.integral_basis()
    gram = [[pair(a, b) for b in basis] for a in basis]
    assert abs(oracles.sympy.Matrix(gram).det()) == 1


def test_is_integral_rejects_x_side():
    with pytest.raises(ValueError):
        is_integral(make_space(2, Side.X).H())
