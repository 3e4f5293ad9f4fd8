"""Places of Q and the local symbols used by the invariant calculus.

A place is either the real place (the string "inf") or a rational prime as an
int.  The complex place never carries a condition, so it has no
representation.  Everything here is exact integer/Fraction arithmetic:
deterministic Miller-Rabin primality, Pollard rho factoring, Legendre symbols,
canonical square classes, Hilbert symbols and local square tests.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Place = Union[int, str]

REAL: Place = "inf"

# Miller-Rabin with these bases is deterministic below 3.3 * 10^24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class InvalidPlace(ValueError):
    """Not a prime number or the real place."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_place(v: Place) -> Place:
    if v == REAL:
        return v
    if isinstance(v, int) and is_prime(v):
        return v
    raise InvalidPlace(f"{v!r} is not a prime or the real place")


def place_key(v: Place) -> tuple[int, int]:
    """Sort key: the real place first, then primes in order."""
    return (0, 0) if v == REAL else (1, v)


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    # Brent's cycle finding with deterministic parameter sweep
    for c in range(1, 50):
        x, y, d = 2, 2, 1
        f = lambda z: (z * z + c) % n
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = _gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"failed to factor {n}")


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| (n nonzero) as {prime: exponent}."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend([d, m // d])
    return dict(sorted(out.items()))


def valuation(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if x == 0:
        raise ValueError("valuation of 0")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part(x: Fraction, p: int) -> Fraction:
    return x / Fraction(p) ** valuation(x, p)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def _mod_reduce(x: Fraction, m: int) -> int:
    """x mod m for a rational with denominator invertible mod m."""
    den = x.denominator % m
    return x.numerator * pow(den, -1, m) % m


def legendre_frac(u: Fraction, p: int) -> int:
    """Legendre symbol of a p-unit rational."""
    return legendre(_mod_reduce(u, p), p)


def square_class(x: Union[int, Fraction]) -> int:
    """Canonical representative of x modulo squares: a signed squarefree integer."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no square class")
    sign = -1 if x < 0 else 1
    n = abs(x.numerator) * x.denominator  # same class as |x|
    out = 1
    for p, e in factorize(n).items():
        if e % 2:
            out *= p
    return sign * out


def hilbert_symbol(a: Union[int, Fraction], b: Union[int, Fraction], v: Place) -> int:
    """Hilbert symbol (a, b)_v in {+1, -1}."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero entries")
    check_place(v)
    if v == REAL:
        return -1 if (a < 0 and b < 0) else 1
    p = v
    alpha, beta = valuation(a, p), valuation(b, p)
    u, w = unit_part(a, p), unit_part(b, p)
    if p != 2:
        sign = 1
        if (alpha * beta) % 2 and p % 4 == 3:
            sign = -sign
        if beta % 2 and legendre_frac(u, p) == -1:
            sign = -sign
        if alpha % 2 and legendre_frac(w, p) == -1:
            sign = -sign
        return sign
    u8, w8 = _mod_reduce(u, 8), _mod_reduce(w, 8)
    eps_u = (u8 - 1) // 2 % 2
    eps_w = (w8 - 1) // 2 % 2
    om_u = (u8 * u8 - 1) // 8 % 2
    om_w = (w8 * w8 - 1) // 8 % 2
    exp = eps_u * eps_w + alpha * om_w + beta * om_u
    return -1 if exp % 2 else 1


def is_square_local(a: Union[int, Fraction], v: Place) -> bool:
    """Whether a is a square in the completion at v."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("0 is degenerate here")
    check_place(v)
    if v == REAL:
        return a > 0
    p = v
    if valuation(a, p) % 2:
        return False
    u = unit_part(a, p)
    if p == 2:
        return _mod_reduce(u, 8) == 1
    return legendre_frac(u, p) == 1


def rational_primes(x: Union[int, Fraction]) -> list[int]:
    """Primes at which the rational x is not a unit."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("0 has no support")
    return sorted(set(factorize(x.numerator or 1)) | set(factorize(x.denominator))
                  if x.numerator else set(factorize(x.denominator)))


def bad_places(values: Iterable[Union[int, Fraction]]) -> list[Place]:
    """{inf, 2} plus every prime dividing some value; sorted canonically."""
    places: set[Place] = {REAL, 2}
    for x in values:
        places.update(rational_primes(x))
    return sorted(places, key=place_key)


def place_to_json(v: Place) -> Union[int, str]:
    return v


def place_from_json(v) -> Place:
    if v == REAL:
        return REAL
    if isinstance(v, int):
        return check_place(v)
    raise InvalidPlace(f"bad place {v!r}")
