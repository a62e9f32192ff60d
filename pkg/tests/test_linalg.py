import random

from hypothesis import given, settings, strategies as st

from capkit import linalg as la
from oracles import det_laplace, smith_by_minors

small = st.integers(min_value=-9, max_value=9)


def matrices(max_dim=5):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_hnf_of_small_example():
    h, u = la.hnf([[2, 4], [6, 8]])
    assert h == [[2, 0], [0, 4]]
    assert la.mat_mul(u, [[2, 4], [6, 8]]) == h
    assert abs(la.det(u)) == 1


def test_hnf_trivial_inputs():
    assert la.hnf(la.identity(3))[0] == la.identity(3)
    assert la.hnf([[0, 0], [0, 0]])[0] == [[0, 0], [0, 0]]


def test_snf_examples():
    assert la.snf([[2, 4], [6, 8]]).d == (2, 4)
    assert la.snf([[2, 0], [0, 3]]).d == (1, 6)
    assert la.snf(la.identity(2)).d == (1, 1)


def test_solve_integer_examples():
    assert la.solve_integer([[2]], [4]) == [2]
    assert la.solve_integer([[2]], [3]) is None
    x = la.solve_integer([[1, 1], [0, 2]], [3, 4])
    assert x == [1, 2]


def test_kernel_basis_annihilates():
    m = [[1, 2, 3], [2, 4, 6]]
    ker = la.kernel_basis(m)
    assert len(ker) == 2
    for v in ker:
        assert la.mat_vec(m, v) == [0, 0]


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_reconstructs_diagonal(m):
    rows, cols = len(m), len(m[0])
    s = la.snf(m)
    assert la.mat_mul(la.mat_mul(s.u, m), s.v) == s.diagonal()
    assert la.is_unimodular(s.u) and la.is_unimodular(s.v)
    nz = [x for x in s.d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert nz == smith_by_minors(m, rows, cols)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_invariant_product_is_determinant(m):
    d = det_laplace(m)
    if d:
        prod = 1
        for x in la.snf(m).d:
            prod *= x
        assert prod == abs(d)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_hnf_is_idempotent(m):
    h, u = la.hnf(m)
    assert la.mat_mul(u, m) == h
    assert la.hnf(h)[0] == h


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_solve_integer_recovers_consistent_system(m, data):
    cols = len(m[0])
    x = data.draw(st.lists(small, min_size=cols, max_size=cols))
    b = la.mat_vec(m, x)
    y = la.solve_integer(m, b)
    assert y is not None and la.mat_vec(m, y) == b


def test_rational_inverse_roundtrip():
    rng = random.Random(3)
    for _ in range(30):
        m = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
        if la.det(m) == 0:
            continue
        inv = la.inverse_rational(m)
        assert la.mat_mul(m, inv) == la.identity(3)
