import random
from fractions import Fraction

from f4tori.octonion import (
    MAT2_ZERO,
    OCT_I,
    Octonion,
    is_norm_isometry,
    linear_map_matrix,
    mat2,
    mat8_det,
    mat8_identity,
    mat8_mul,
    mat8_vec,
    oct_inner,
)


def rand_oct(rng):
    return Octonion.from_coords(
        [Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3])) for _ in range(8)])


def test_unit_law():
    rng = random.Random(1)
    one = Octonion.one()
    for _ in range(50):
        x = rand_oct(rng)
        assert (one * x).coords() == x.coords()
        assert (x * one).coords() == x.coords()


def test_norm_of_i():
    # i = (diag(1,-1), 0): n = det diag(1,-1) - det 0 = -1
    assert OCT_I.norm() == -1


def test_norm_multiplicative():
    rng = random.Random(2)
    for _ in range(1000):
        x, y = rand_oct(rng), rand_oct(rng)
        assert (x * y).norm() == x.norm() * y.norm()


def test_conjugation_is_an_involution_and_antihomomorphism():
    rng = random.Random(3)
    for _ in range(60):
        x, y = rand_oct(rng), rand_oct(rng)
        assert x.conj().conj().coords() == x.coords()
        assert (x * y).conj().coords() == (y.conj() * x.conj()).coords()
        # x * conj(x) = n(x) * 1
        prod = x * x.conj()
        assert prod.coords() == (Octonion.one() * x.norm()).coords()


def test_inner_is_full_polarization():
    rng = random.Random(4)
    for _ in range(40):
        x = rand_oct(rng)
        assert oct_inner(x, x) == 2 * x.norm()


def test_nonassociative_but_alternative():
    rng = random.Random(5)
    associators = 0
    for _ in range(30):
        x, y, z = rand_oct(rng), rand_oct(rng), rand_oct(rng)
        if ((x * y) * z).coords() != (x * (y * z)).coords():
            associators += 1
        assert ((x * x) * y).coords() == (x * (x * y)).coords()
        assert ((y * x) * x).coords() == (y * (x * x)).coords()
    assert associators > 0


def test_left_multiplication_matrix_agrees():
    rng = random.Random(6)
    m = rand_oct(rng)
    lm = linear_map_matrix(lambda x: m * x)
    for _ in range(20):
        x = rand_oct(rng)
        assert tuple(mat8_vec(lm, x.coords())) == (m * x).coords()


def test_isometry_detection():
    d = Octonion(mat2(2, 0, 0, Fraction(1, 2)), MAT2_ZERO)
    right = linear_map_matrix(lambda x: x * d)
    assert is_norm_isometry(right)
    not_iso = linear_map_matrix(lambda x: x * Octonion.scalar(2))
    assert not is_norm_isometry(not_iso)


def test_det_of_8x8():
    assert mat8_det(mat8_identity()) == 1
    m = mat8_identity()
    m[0][0] = Fraction(3)
    m[4][5] = Fraction(7)
    assert mat8_det(m) == 3
    assert mat8_det(mat8_mul(m, m)) == 9
