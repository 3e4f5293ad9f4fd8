"""Split octonions as pairs of 2x2 rational matrices.

The product is (A,B)(C,D) = (AC + bar(D)B, DA + B bar(C)) with bar the
adjugate, and the norm is n(A,B) = det A - det B.  Linear maps on the
8-dimensional space are handled as exact 8x8 matrices in the basis
E11,E12,E21,E22 of each matrix slot (row-major, first slot then second).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

Mat2 = tuple  # (a11, a12, a21, a22), Fractions


def mat2(a11, a12, a21, a22) -> Mat2:
    return (Fraction(a11), Fraction(a12), Fraction(a21), Fraction(a22))


MAT2_ZERO = mat2(0, 0, 0, 0)
MAT2_ID = mat2(1, 0, 0, 1)


def mat2_add(x: Mat2, y: Mat2) -> Mat2:
    return (x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3])


def mat2_scale(c, x: Mat2) -> Mat2:
    c = Fraction(c)
    return (c * x[0], c * x[1], c * x[2], c * x[3])


def mat2_mul(x: Mat2, y: Mat2) -> Mat2:
    return (x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
            x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3])


def mat2_bar(x: Mat2) -> Mat2:
    """Adjugate: bar(A) A = det(A) I."""
    return (x[3], -x[1], -x[2], x[0])


def mat2_det(x: Mat2) -> Fraction:
    return x[0] * x[3] - x[1] * x[2]


@dataclass(frozen=True)
class Octonion:
    a: Mat2
    b: Mat2

    @staticmethod
    def zero() -> "Octonion":
        return Octonion(MAT2_ZERO, MAT2_ZERO)

    @staticmethod
    def one() -> "Octonion":
        return Octonion(MAT2_ID, MAT2_ZERO)

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion(mat2_add(self.a, other.a), mat2_add(self.b, other.b))

    def __sub__(self, other: "Octonion") -> "Octonion":
        return self + (-other)

    def __neg__(self) -> "Octonion":
        return Octonion(mat2_scale(-1, self.a), mat2_scale(-1, self.b))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Octonion(mat2_scale(other, self.a), mat2_scale(other, self.b))
        a, b = self.a, self.b
        c, d = other.a, other.b
        return Octonion(mat2_add(mat2_mul(a, c), mat2_mul(mat2_bar(d), b)),
                        mat2_add(mat2_mul(d, a), mat2_mul(b, mat2_bar(c))))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def conj(self) -> "Octonion":
        return Octonion(mat2_bar(self.a), mat2_scale(-1, self.b))

    def norm(self) -> Fraction:
        return mat2_det(self.a) - mat2_det(self.b)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.a + self.b)

    def coords(self) -> tuple:
        return self.a + self.b

    @staticmethod
    def from_coords(cs: Sequence) -> "Octonion":
        cs = [Fraction(c) for c in cs]
        if len(cs) != 8:
            raise ValueError("octonion needs 8 coordinates")
        return Octonion(tuple(cs[:4]), tuple(cs[4:]))

    @staticmethod
    def scalar(c) -> "Octonion":
        return Octonion(mat2_scale(c, MAT2_ID), MAT2_ZERO)


def oct_inner(x: Octonion, y: Octonion) -> Fraction:
    """Polarization of the norm: <x, y> = n(x+y) - n(x) - n(y), <x, x> = 2n(x)."""
    return (x + y).norm() - x.norm() - y.norm()


OCT_BASIS = tuple(
    Octonion.from_coords([1 if i == k else 0 for i in range(8)]) for k in range(8)
)

# the standard trace-zero element i = (diag(1,-1), 0)
OCT_I = Octonion(mat2(1, 0, 0, -1), MAT2_ZERO)


# ---------------------------------------------------------------------------
# exact 8x8 matrices over Q (row-major lists of lists)
# ---------------------------------------------------------------------------


def linear_map_matrix(f: Callable[[Octonion], Octonion]) -> list[list[Fraction]]:
    cols = [f(e).coords() for e in OCT_BASIS]
    return [[cols[j][i] for j in range(8)] for i in range(8)]


def mat8_mul(a, b):
    n = len(a)
    return [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)]
            for i in range(n)]


def mat8_vec(a, v):
    return [sum((a[i][k] * v[k] for k in range(len(v))), Fraction(0)) for i in range(len(a))]


def mat8_identity(n=8):
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def mat8_transpose(a):
    return [list(row) for row in zip(*a)]


def mat8_det(a) -> Fraction:
    m = [row[:] for row in a]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if m[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            if m[i][k]:
                factor = m[i][k] * inv
                for j in range(k, n):
                    m[i][j] -= factor * m[k][j]
    return det


def norm_gram() -> list[list[Fraction]]:
    """Gram matrix of the octonion norm in the canonical basis."""
    return [[oct_inner(OCT_BASIS[i], OCT_BASIS[j]) for j in range(8)] for i in range(8)]


def is_norm_isometry(m: list[list[Fraction]]) -> bool:
    g = norm_gram()
    return mat8_mul(mat8_transpose(m), mat8_mul(g, m)) == g
