"""Minimal polynomial arithmetic over GF(p) for the tame splitting tests.

Polynomials are lists of ints in [0, p), ascending degree, trailing zeros
stripped.  Only what the distinct-degree square tests need: remainder, gcd,
modular exponentiation, and the distinct-degree factor extraction.
"""

from __future__ import annotations


def gf_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def gf_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        for i, bc in enumerate(b):
            a[k + i] = (a[k + i] - c * bc) % p
        gf_trim(a)
    return a


def gf_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return gf_trim(out)


def gf_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    return gf_mod(gf_mul(a, b, p), m, p)


def gf_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    a = gf_mod(a[:], m, p)
    while e:
        if e & 1:
            result = gf_mulmod(result, a, m, p)
        a = gf_mulmod(a, a, m, p)
        e >>= 1
    return result


def gf_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = a[:], b[:]
    while b:
        a, b = b, gf_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def gf_monic(a: list[int], p: int) -> list[int]:
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def gf_deriv(a: list[int], p: int) -> list[int]:
    return gf_trim([k * c % p for k, c in enumerate(a)][1:])


def distinct_degree_factors(f: list[int], p: int) -> list[tuple[int, list[int]]]:
    """[(d, product of all irreducible factors of degree d)], f squarefree monic."""
    f = gf_monic(f[:], p)
    out = []
    h = [0, 1]  # x
    d = 0
    rest = f
    while len(rest) - 1 >= 2 * (d + 1):
        d += 1
        h = gf_powmod(h, p, rest, p)
        diff = h[:]
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = gf_gcd(rest, gf_trim(diff), p)
        if len(g) > 1:
            out.append((d, g))
            rest = gf_monic(gf_mod_exact(rest, g, p), p)
            h = gf_mod(h, rest, p) if len(rest) > 1 else [0]
    if len(rest) > 1:
        out.append((len(rest) - 1, rest))
    return out


def gf_mod_exact(a: list[int], b: list[int], p: int) -> list[int]:
    """Exact quotient a // b (remainder must vanish)."""
    a = a[:]
    q = [0] * (len(a) - len(b) + 1)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] = (a[k + i] - c * bc) % p
        gf_trim(a)
    if a:
        raise ArithmeticError("division was not exact")
    return gf_trim(q)
