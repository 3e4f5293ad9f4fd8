"""Arithmetic in a single quotient Q[t]/(f).

Used for elements of the field (or etale) factors of involution algebras:
reduction, inversion, traces, norms and characteristic polynomials.  The
modulus is kept monic; the quotient need not be a field, only invertibility
fails then.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polynomials import Polynomial, ZeroPolynomial, poly_ext_gcd, resultant


class NotInvertible(ArithmeticError):
    """Element shares a factor with the modulus."""


@dataclass(frozen=True)
class NumberFieldElement:
    """Residue `rep` modulo the monic polynomial `modulus`."""

    modulus: Polynomial
    rep: Polynomial

    @staticmethod
    def make(modulus: Polynomial, rep: Polynomial) -> "NumberFieldElement":
        if modulus.degree < 1:
            raise ZeroPolynomial("modulus must be nonconstant")
        m = modulus.monic()
        return NumberFieldElement(m, rep % m)

    def _check(self, other: "NumberFieldElement") -> None:
        if self.modulus != other.modulus:
            raise ValueError("elements of different quotients")

    def __add__(self, other):
        self._check(other)
        return NumberFieldElement(self.modulus, (self.rep + other.rep) % self.modulus)

    def __sub__(self, other):
        self._check(other)
        return NumberFieldElement(self.modulus, (self.rep - other.rep) % self.modulus)

    def __neg__(self):
        return NumberFieldElement(self.modulus, -self.rep)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement(self.modulus, self.rep * other)
        self._check(other)
        return NumberFieldElement(self.modulus, (self.rep * other.rep) % self.modulus)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def inverse(self) -> "NumberFieldElement":
        g, u, _ = poly_ext_gcd(self.rep, self.modulus)
        if g.degree != 0:
            raise NotInvertible(f"{self.rep} is a zero divisor mod {self.modulus}")
        return NumberFieldElement(self.modulus, (u * (1 / g.lc)) % self.modulus)

    def matrix(self) -> list[list[Fraction]]:
        """Multiplication matrix on the power basis 1, t, ..., t^(n-1)."""
        n = self.modulus.degree
        cols = []
        col = self.rep % self.modulus
        t = Polynomial([0, 1])
        for _ in range(n):
            cols.append([col.coeff(i) for i in range(n)])
            col = (col * t) % self.modulus
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def trace(self) -> Fraction:
        m = self.matrix()
        return sum((m[i][i] for i in range(len(m))), Fraction(0))

    def norm(self) -> Fraction:
        """Norm to Q; the modulus is monic so this is Res(modulus, rep)."""
        if self.rep.is_zero():
            return Fraction(0)
        return resultant(self.modulus, self.rep)

    def charpoly(self) -> Polynomial:
        """Characteristic polynomial of this element acting on Q[t]/(modulus)."""
        return element_charpoly(self.modulus, self.rep)

    def is_generator(self) -> bool:
        """True when the element generates the quotient (charpoly squarefree)."""
        return self.charpoly().is_squarefree()


def trace_of(modulus: Polynomial, rep: Polynomial) -> Fraction:
    return NumberFieldElement.make(modulus, rep).trace()


def element_charpoly(modulus: Polynomial, rep: Polynomial) -> Polynomial:
    """charpoly(y) = Res_t(f(t), y - g(t)), found by interpolation in y.

    The result is monic of degree deg f; it equals prod (y - g(alpha_i)) over
    the roots of f.
    """
    f = modulus.monic()
    n = f.degree
    g = rep % f
    if g.degree <= 0:
        c = g.coeff(0)
        return Polynomial([-c, 1]) ** n
    points = []
    for k in range(n + 1):
        y0 = Fraction(k)
        points.append((y0, resultant(f, Polynomial([y0]) - g)))
    return _lagrange(points)


def _lagrange(points: list[tuple[Fraction, Fraction]]) -> Polynomial:
    total = Polynomial()
    for i, (xi, yi) in enumerate(points):
        if yi == 0:
            continue
        num = Polynomial([1])
        den = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            num = num * Polynomial([-xj, 1])
            den *= xi - xj
        total = total + num * (yi / den)
    return total
