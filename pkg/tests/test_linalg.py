import pytest

from gengeo import linalg
from gengeo.scalar import I, ONE, ZERO, Scalar

from strategies import rand_invertible, rand_positive_matrix, rand_scalar, seeded


def test_inverse_and_det_on_random_matrices():
    rng = seeded(1)
    for n in range(1, 6):
        for _ in range(5):
            a = rand_invertible(rng, n)
            assert linalg.matmul(a, linalg.inverse(a)) == linalg.identity(n)
            assert linalg.det(a) * linalg.det(linalg.inverse(a)) == ONE


def test_det_multiplicative():
    rng = seeded(2)
    a = linalg.matrix([[rand_scalar(rng) for _ in range(4)] for _ in range(4)])
    b = linalg.matrix([[rand_scalar(rng) for _ in range(4)] for _ in range(4)])
    assert linalg.det(linalg.matmul(a, b)) == linalg.det(a) * linalg.det(b)


def test_nullspace_and_rank():
    a = linalg.matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert linalg.rank(a) == 2
    ns = linalg.nullspace(a)
    assert len(ns) == 1
    assert all(x == ZERO for x in linalg.matvec(a, ns[0]))
    assert len(linalg.nullspace((), 3)) == 3


def test_singular_inverse_raises():
    with pytest.raises((ValueError, ZeroDivisionError)):
        linalg.inverse(linalg.matrix([[1, 1], [1, 1]]))


def test_blocks_round_trip():
    rng = seeded(3)
    m = linalg.matrix([[rand_scalar(rng) for _ in range(4)] for _ in range(4)])
    assert linalg.block(*linalg.split_blocks(m)) == m


def test_hermitian_definiteness():
    rng = seeded(4)
    for n in range(1, 5):
        g = rand_positive_matrix(rng, n)
        assert linalg.hermitian_definiteness_witness(g) is None
        assert all(x.re > 0 for x in linalg.leading_minors(g))
    h = linalg.matrix([[1, I], [-I, 1]])
    w = linalg.hermitian_definiteness_witness(h)
    assert w is not None
    val = sum((w[i].conj() * h[i][j] * w[j] for i in range(2) for j in range(2)), ZERO)
    assert val.re <= 0
