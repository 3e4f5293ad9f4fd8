import random
from fractions import Fraction

import pytest

from f4tori.places import (
    REAL,
    InvalidPlace,
    bad_places,
    factorize,
    hilbert_symbol,
    is_prime,
    is_square_local,
    legendre,
    place_key,
    square_class,
    unit_part,
    valuation,
)


def conic_has_local_point(a: int, b: int, v) -> bool:
    """Brute-force oracle: does z^2 = a x^2 + b y^2 have a nontrivial point in Q_v?

    a, b must be squarefree integers.  Finite places are handled by searching
    primitive solutions modulo p^k with k large enough for Hensel lifting.
    """
    if v == REAL:
        return a > 0 or b > 0
    p = v
    k = 7 if p == 2 else 3
    M = p**k
    odd_squares = {(z * z) % M for z in range(M) if z % p}
    all_squares = odd_squares | {(z * z) % M for z in range(0, M, p)}
    for x in range(M):
        for y in range(M):
            t = (a * x * x + b * y * y) % M
            if x % p or y % p:
                if t in all_squares:
                    return True
            else:
                if t in odd_squares:
                    return True
    return False


class TestPrimesAndClasses:
    def test_is_prime_small(self):
        primes = [p for p in range(60) if is_prime(p)]
        assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]

    def test_factorize(self):
        assert factorize(360) == {2: 3, 3: 2, 5: 1}
        assert factorize(-17) == {17: 1}
        assert factorize(1) == {}

    def test_valuation_and_unit(self):
        x = Fraction(12, 75)
        assert valuation(x, 2) == 2
        assert valuation(x, 5) == -2
        assert unit_part(x, 5) == Fraction(4)

    def test_square_class_canonical(self):
        assert square_class(Fraction(8)) == 2
        assert square_class(Fraction(-4)) == -1
        assert square_class(Fraction(12, 25)) == 3
        assert square_class(Fraction(1, 2)) == 2
        assert square_class(square_class(Fraction(-720, 49))) == square_class(Fraction(-720, 49))

    def test_place_order(self):
        assert sorted([7, 2, REAL, 3], key=place_key) == [REAL, 2, 3, 7]


class TestHilbert:
    def test_one_is_always_split(self):
        for v in [REAL, 2, 3, 7, 11]:
            for b in [2, -5, Fraction(3, 7)]:
                assert hilbert_symbol(1, b, v) == 1

    def test_minus_one_minus_one(self):
        assert hilbert_symbol(-1, -1, REAL) == -1
        assert hilbert_symbol(-1, -1, 2) == -1
        assert hilbert_symbol(-1, -1, 3) == 1
        assert hilbert_symbol(-1, -1, 5) == 1

    def test_against_conic_oracle(self):
        pairs = [(-1, -1), (2, 3), (2, -3), (-2, 5), (3, 3), (6, -10),
                 (2, 2), (-1, 2), (5, 7), (-6, -15), (1, -1), (30, -7)]
        for a, b in pairs:
            for v in [REAL, 2, 3, 5, 7]:
                expected = 1 if conic_has_local_point(a, b, v) else -1
                assert hilbert_symbol(a, b, v) == expected, (a, b, v)

    def test_symmetric_and_bimultiplicative(self):
        rng = random.Random(0)
        vals = [Fraction(n, d) for n in range(-9, 10) if n for d in (1, 2, 3, 5)]
        for _ in range(300):
            a, a2, b = rng.choice(vals), rng.choice(vals), rng.choice(vals)
            v = rng.choice([REAL, 2, 3, 5, 7, 11, 13])
            assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
            assert hilbert_symbol(a * a2, b, v) == hilbert_symbol(a, b, v) * hilbert_symbol(a2, b, v)

    def test_reciprocity(self):
        rng = random.Random(42)
        for _ in range(500):
            a = Fraction(rng.randint(-40, 40) or 1, rng.randint(1, 20))
            b = Fraction(rng.randint(-40, 40) or 1, rng.randint(1, 20))
            prod = 1
            for v in bad_places([a, b]):
                prod *= hilbert_symbol(a, b, v)
            assert prod == 1, (a, b)

    def test_invalid_place(self):
        with pytest.raises(InvalidPlace):
            hilbert_symbol(1, 2, 4)
        with pytest.raises(InvalidPlace):
            hilbert_symbol(1, 2, "complex")


class TestLocalSquares:
    def test_spec_examples(self):
        assert legendre(2, 7) == 1  # 3^2 = 2 mod 7
        assert is_square_local(2, 7) is True
        assert is_square_local(2, 2) is False  # odd valuation
        assert is_square_local(-4, REAL) is False

    def test_two_adic_units(self):
        assert is_square_local(17, 2) is True  # 17 = 1 mod 8
        assert is_square_local(3, 2) is False
        assert is_square_local(Fraction(9, 17), 2) is True

    def test_square_classes_consistent(self):
        rng = random.Random(5)
        for _ in range(200):
            x = Fraction(rng.randint(-30, 30) or 3, rng.randint(1, 12))
            cls = square_class(x)
            for v in bad_places([x]):
                assert is_square_local(x, v) == is_square_local(cls, v)
