import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from folner.errors import IndexNotInRange
from folner.groups import (Group, cantor_pair, cantor_unpair, is_prime, parse_group,
                           z_element, z_index)


# ---- oracles ---------------------------------------------------------------

def matmul_oracle(G, a, b):
    """Product via explicit integer matrices."""
    A = np.array(G.to_matrix(a), dtype=object)
    B = np.array(G.to_matrix(b), dtype=object)
    return G.from_matrix((A.dot(B)).tolist())


def pairing_table(limit):
    """Cantor pairing enumerated diagonal by diagonal."""
    table, z = {}, 0
    for s in range(limit):
        for y in range(s + 1):
            table[(s - y, y)] = z
            z += 1
    return table


ZD2, UT3, UT4 = Group("zd", 2), Group("ut", 3), Group("ut", 4)

small = st.integers(-50, 50)


def elements(G):
    return st.tuples(*[small] * G.ncoords)


# ---- identity / multiply / inverse ------------------------------------------

def test_identity_examples():
    assert ZD2.identity() == (0, 0)
    assert UT3.identity() == (0, 0, 0)
    assert UT4.to_matrix(UT4.identity()) == np.eye(4, dtype=int).tolist()


def test_multiply_examples():
    assert ZD2.multiply((1, 2), (3, 4)) == (4, 6)
    assert UT3.multiply((1, 0, 0), (0, 1, 0)) == (1, 1, 1)
    assert UT3.multiply((1, 1, 1), (-1, -1, 0)) == (0, 0, 0)
    assert matmul_oracle(UT3, (1, 1, 1), (-1, -1, 0)) == (0, 0, 0)


def test_inverse_examples():
    assert ZD2.inverse((5, -3)) == (-5, 3)
    assert UT3.inverse((1, 1, 1)) == (-1, -1, 0)
    assert UT3.inverse((2, 3, 1)) == (-2, -3, 5)
    assert UT3.multiply((2, 3, 1), (-2, -3, 5)) == UT3.identity()


@pytest.mark.parametrize("G", [ZD2, UT3, UT4, Group("ut", 5)])
def test_product_matches_matrix_oracle(G):
    rng = np.random.default_rng(1)
    for _ in range(300):
        a = tuple(int(x) for x in rng.integers(-20, 20, G.ncoords))
        b = tuple(int(x) for x in rng.integers(-20, 20, G.ncoords))
        if G.family == "ut":
            assert G.multiply(a, b) == matmul_oracle(G, a, b)
        else:
            assert G.multiply(a, b) == tuple(x + y for x, y in zip(a, b))


@pytest.mark.parametrize("G", [Group("zd", 3), UT3, UT4])
def test_group_laws_on_many_random_triples(G):
    rng = np.random.default_rng(2)
    A, B, C = (rng.integers(-30, 30, (10_000, G.ncoords)) for _ in range(3))
    left = G.vmul(G.vmul(A, B), C)
    right = G.vmul(A, G.vmul(B, C))
    assert np.array_equal(left, right)
    e = np.zeros(G.ncoords, dtype=np.int64)
    assert np.array_equal(G.vmul(A, e), A) and np.array_equal(G.vmul(e, A), A)
    assert not G.vmul(A, G.vinv(A)).any()
    assert not G.vmul(G.vinv(A), A).any()


@given(st.data())
def test_vectorized_matches_scalar(data):
    G = data.draw(st.sampled_from([ZD2, UT3, UT4]))
    a, b = data.draw(elements(G)), data.draw(elements(G))
    assert tuple(G.vmul(np.array(a), np.array(b))) == G.multiply(a, b)
    assert tuple(G.vinv(np.array(a))) == G.inverse(a)
    assert int(G.vindex(np.array([a]))[0]) == G.index_of(a)


def test_generator_products_stay_unit_upper_triangular():
    G = UT4
    rng = np.random.default_rng(3)
    g = G.identity()
    for _ in range(200):
        i, j = sorted(rng.choice(np.arange(1, 5), 2, replace=False))
        g = G.multiply(g, G.generator(int(i), int(j), int(rng.integers(-3, 4))))
        m = G.to_matrix(g)
        assert all(m[r][r] == 1 for r in range(4))
        assert all(m[r][c] == 0 for r in range(4) for c in range(r))


def test_overflow_is_detected():
    big = np.array([[2 ** 40, 2 ** 40, 0]])
    with pytest.raises(OverflowError):
        UT3.vmul(big, big)


# ---- indexing -----------------------------------------------------------------

def test_z_index_examples():
    assert z_index(0) == 1
    assert z_index(-1) == 2 and z_index(1) == 3
    assert z_element(1) == 0 and z_element(4) == -2
    with pytest.raises(IndexNotInRange):
        z_element(0)


def test_z_index_is_the_stated_formula():
    for n in range(-500, 500):
        assert z_index(n) == 2 * abs(n) + (1 if n >= 0 else 0)
        assert z_element(z_index(n)) == n


def test_pairing_matches_table():
    table = pairing_table(60)
    for (x, y), z in table.items():
        assert cantor_pair(x, y) == z
        assert cantor_unpair(z) == (x, y)


def test_zd2_origin_index_is_pair_of_ones():
    assert ZD2.index_of((0, 0)) == pairing_table(5)[(1, 1)]
    assert ZD2.element_at(ZD2.index_of((0, 0))) == (0, 0)


def test_ut_index_uses_row_major_entries():
    G = UT4
    g = (1, 2, 3, 4, 5, 6)  # storage order (1,2),(2,3),(3,4),(1,3),(2,4),(1,4)
    m = G.to_matrix(g)
    row_major = (m[0][1], m[0][2], m[0][3], m[1][2], m[1][3], m[2][3])
    z = z_index(row_major[0])
    for x in row_major[1:]:
        z = cantor_pair(z, z_index(x))
    assert G.index_of(g) == z


@pytest.mark.parametrize("G", [Group("zd", 1), ZD2, Group("zd", 3), UT3, UT4])
def test_index_injective_and_invertible(G):
    rng = np.random.default_rng(4)
    pts = {tuple(int(x) for x in r) for r in rng.integers(-1000, 1000, (10_000, G.ncoords))}
    idx = {G.index_of(p) for p in pts}
    assert len(idx) == len(pts)
    for p in list(pts)[:2000]:
        assert G.element_at(G.index_of(p)) == p


def test_element_at_rejects_non_indices():
    with pytest.raises(IndexNotInRange):
        ZD2.element_at(0)
    # index 1 pairs to (0, 1); its second component 1 is a valid Z index but
    # pair(0, .) has a zero first component, which no Z index produces
    with pytest.raises(IndexNotInRange):
        ZD2.element_at(1)


def test_every_index_below_a_bound_is_hit_or_rejected():
    G = ZD2
    for i in range(1, 400):
        try:
            g = G.element_at(i)
        except IndexNotInRange:
            continue
        assert G.index_of(g) == i


@given(st.tuples(st.integers(-10 ** 30, 10 ** 30), st.integers(-10 ** 30, 10 ** 30),
                 st.integers(-10 ** 30, 10 ** 30)))
def test_big_integer_indices_round_trip(g):
    assert UT3.element_at(UT3.index_of(g)) == g


# ---- descriptors ----------------------------------------------------------------

def test_tokens():
    assert parse_group("zd:2") == ZD2
    assert parse_group("ut:3:p=2") == Group("ut", 3, 2)
    assert Group("ut", 3, 2).token == "ut:3:p=2"
    for bad in ("zd:0", "ut:1", "ut:3:p=4", "xx:2", "zd"):
        with pytest.raises(ValueError):
            parse_group(bad)


def test_is_prime_against_trial_division():
    def oracle(p):
        return p >= 2 and all(p % q for q in range(2, p))
    assert [p for p in range(200) if is_prime(p)] == [p for p in range(200) if oracle(p)]


def test_from_matrix_validates_shape():
    with pytest.raises(ValueError):
        UT3.from_matrix([[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    with pytest.raises(ValueError):
        UT3.from_matrix([[2, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_all_small_ut3_products_agree_with_matrices():
    vals = range(-1, 2)
    for a in itertools.product(vals, repeat=3):
        for b in itertools.product(vals, repeat=3):
            assert UT3.multiply(a, b) == matmul_oracle(UT3, a, b)
