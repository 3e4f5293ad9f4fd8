"""Exact univariate polynomial arithmetic over Q.

Polynomials are immutable, coefficients are `fractions.Fraction` stored in
ascending degree order with the trailing zeros stripped.  On top of the ring
operations this module provides Sturm sequences, real root isolation with
rational endpoints, exact sign evaluation at algebraic numbers, resultants and
discriminants.  No floating point is used anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class ZeroPolynomial(ValueError):
    """Raised when an operation requires a nonzero (or nonconstant) polynomial."""


class NotSquarefree(ValueError):
    """Raised when an operation requires a squarefree polynomial."""


class PolynomialParseError(ValueError):
    """Raised on malformed polynomial text."""


def _frac(x: Scalar) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Polynomial:
    """A polynomial with rational coefficients, ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- basic structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial having degree -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Polynomial([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k <= self.degree else Fraction(0)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial(c * other for c in self.coeffs)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        d, lc = other.degree, other.lc
        while len(r) - 1 >= d and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            c = r[-1] / lc
            q[k] = c
            for j, b in enumerate(other.coeffs):
                r[k + j] -= c * b
        return Polynomial(q), Polynomial(r)

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    # -- calculus & evaluation ----------------------------------------------

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __call__(self, x: Scalar) -> Fraction:
        x = _frac(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: "Polynomial") -> "Polynomial":
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + Polynomial([c])
        return acc

    def monic(self) -> "Polynomial":
        if self.is_zero():
            raise ZeroPolynomial("cannot normalize the zero polynomial")
        return self * (1 / self.lc)

    # -- gcd / squarefree ----------------------------------------------------

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree_part(self) -> "Polynomial":
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial")
        if self.degree == 0:
            return Polynomial([1])
        return (self // self.gcd(self.derivative())).monic()

    def is_squarefree(self) -> bool:
        if self.is_zero():
            return False
        if self.degree == 0:
            return True
        return self.gcd(self.derivative()).degree == 0

    # -- printing -------------------------------------------------------------

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def _coerce(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial([x])
    raise TypeError(f"cannot coerce {x!r} to Polynomial")


X = Polynomial([0, 1])


def poly_ext_gcd(a: Polynomial, b: Polynomial) -> tuple[Polynomial, Polynomial, Polynomial]:
    """Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = Polynomial([1]), Polynomial()
    t0, t1 = Polynomial(), Polynomial([1])
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = 1 / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


# ---------------------------------------------------------------------------
# Sturm sequences and root isolation
# ---------------------------------------------------------------------------


def _require_squarefree(p: Polynomial) -> None:
    if p.is_zero():
        raise ZeroPolynomial("zero polynomial")
    if not p.is_squarefree():
        raise NotSquarefree(f"polynomial {p} has a repeated root; reduce it first")


def sturm_chain(p: Polynomial) -> list[Polynomial]:
    """Sturm chain p, p', then negated remainders until a constant."""
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _variations(values: Sequence[Fraction]) -> int:
    count, last = 0, 0
    for v in values:
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count


def _chain_variations_at(chain: Sequence[Polynomial], x: Fraction) -> int:
    return _variations([q(x) for q in chain])


def _chain_variations_at_inf(chain: Sequence[Polynomial], sign: int) -> int:
    vals = []
    for q in chain:
        if q.is_zero():
            vals.append(Fraction(0))
        else:
            lead = q.lc if (sign > 0 or q.degree % 2 == 0) else -q.lc
            vals.append(lead)
    return _variations(vals)


def sturm_count(p: Polynomial, low: Fraction, high: Fraction,
                chain: Sequence[Polynomial] | None = None) -> int:
    """Number of distinct real roots of squarefree p in the half-open (low, high]."""
    if chain is None:
        chain = sturm_chain(p)
    return _chain_variations_at(chain, low) - _chain_variations_at(chain, high)


def sturm_real_root_count(p: Polynomial) -> int:
    """Exact number of distinct real roots of a squarefree polynomial."""
    _require_squarefree(p)
    if p.degree == 0:
        return 0
    chain = sturm_chain(p)
    return _chain_variations_at_inf(chain, -1) - _chain_variations_at_inf(chain, +1)


def cauchy_bound(p: Polynomial) -> Fraction:
    """B with every real root of p strictly inside (-B, B)."""
    if p.degree < 1:
        return Fraction(1)
    return 1 + max(abs(c / p.lc) for c in p.coeffs[:-1])


@dataclass(frozen=True)
class IsolatingInterval:
    """Rational interval (low, high] containing exactly one real root of `polynomial`."""

    low: Fraction
    high: Fraction
    polynomial: Polynomial

    def midpoint(self) -> Fraction:
        return (self.low + self.high) / 2

    def width(self) -> Fraction:
        return self.high - self.low

    def refine(self) -> "IsolatingInterval":
        """Halve the interval.  The root may land exactly on the new right endpoint."""
        m = self.midpoint()
        if self.polynomial(m) == 0:
            return IsolatingInterval(self.low, m, self.polynomial)
        if sturm_count(self.polynomial, self.low, m) == 1:
            return IsolatingInterval(self.low, m, self.polynomial)
        return IsolatingInterval(m, self.high, self.polynomial)

    def exact_root(self) -> Fraction | None:
        """The root if it is rational and sits at the right endpoint, else None."""
        return self.high if self.polynomial(self.high) == 0 else None


def isolate_real_roots(p: Polynomial) -> list[IsolatingInterval]:
    """Disjoint ordered isolating intervals covering every real root of squarefree p."""
    _require_squarefree(p)
    if p.degree < 1:
        return []
    chain = sturm_chain(p)
    bound = cauchy_bound(p)
    total = sturm_count(p, -bound, bound, chain)
    out: list[IsolatingInterval] = []
    stack = [(-bound, bound, total)]
    while stack:
        low, high, count = stack.pop()
        if count == 0:
            continue
        if count == 1:
            out.append(IsolatingInterval(low, high, p))
            continue
        mid = (low + high) / 2
        left = sturm_count(p, low, mid, chain)
        stack.append((low, mid, left))
        stack.append((mid, high, count - left))
    out.sort(key=lambda iv: (iv.low, iv.high))
    return out


def sign_at_root(q: Polynomial, root: IsolatingInterval) -> int:
    """Exact sign of q at the algebraic number isolated by `root`.

    The zero case is detected through a gcd with the defining polynomial, so
    the interval refinement below always terminates.
    """
    if q.is_zero():
        return 0
    p = root.polynomial
    g = p.gcd(q)
    if g.degree >= 1 and sturm_count(g, root.low, root.high) == 1:
        return 0
    iv = root
    q_sf = q.squarefree_part()
    while True:
        exact = iv.exact_root()
        if exact is not None:
            val = q(exact)
            return 0 if val == 0 else (1 if val > 0 else -1)
        if sturm_count(q_sf, iv.low, iv.high) == 0:
            val = q(iv.high)
            # no root of q inside (low, high], so the sign there is constant
            return 1 if val > 0 else -1
        iv = iv.refine()


# ---------------------------------------------------------------------------
# Resultants
# ---------------------------------------------------------------------------


def resultant(p: Polynomial, q: Polynomial) -> Fraction:
    """Classical resultant Res(p, q), computed by the exact Euclidean chain."""
    if p.is_zero() or q.is_zero():
        raise ZeroPolynomial("resultant of the zero polynomial")
    m, n = p.degree, q.degree
    if m == 0:
        return p.lc ** n
    if n == 0:
        return q.lc ** m
    r = p % q
    if r.is_zero():
        return Fraction(0)
    sign = Fraction(-1 if (m * n) % 2 else 1)
    return sign * q.lc ** (m - r.degree) * resultant(q, r)


def discriminant(p: Polynomial) -> Fraction:
    """disc(p) = (-1)^(n(n-1)/2) Res(p, p') / lc(p)."""
    if p.is_zero():
        raise ZeroPolynomial("discriminant of the zero polynomial")
    n = p.degree
    if n < 1:
        raise ZeroPolynomial("discriminant needs a nonconstant polynomial")
    if n == 1:
        return Fraction(1)
    sign = Fraction(-1 if (n * (n - 1) // 2) % 2 else 1)
    return sign * resultant(p, p.derivative()) / p.lc


# ---------------------------------------------------------------------------
# ASCII grammar:  c_n*t^n + ... + c_0  with '*' and '^' optional
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"""^
    (?P<coeff>[+-]?\d+(?:/\d+)?)?        # optional rational coefficient
    (?:(?<=\d)\*)?                       # optional '*' only after a coefficient
    (?P<var>[a-zA-Z])?                   # optional variable letter
    (?:\^?(?P<exp>\d+))?                 # optional exponent, '^' optional
    $""",
    re.VERBOSE,
)


def parse_polynomial(text: str, var: str | None = None) -> Polynomial:
    """Parse `c_n*t^n + ... + c_0`; raises PolynomialParseError on bad input."""
    s = text.strip().replace(" ", "")
    if not s:
        raise PolynomialParseError("empty polynomial")
    s = s.replace("-", "+-")
    if s.startswith("+"):
        s = s[1:]
    coeffs: dict[int, Fraction] = {}
    seen_var = var
    for raw in s.split("+"):
        if not raw:
            raise PolynomialParseError(f"malformed polynomial {text!r}")
        term = raw
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        m = _TERM_RE.match(term)
        if not m or (m.group("coeff") is None and m.group("var") is None):
            raise PolynomialParseError(f"bad term {raw!r} in {text!r}")
        coeff = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
        if neg:
            coeff = -coeff
        v = m.group("var")
        if m.group("exp") is not None and v is None:
            raise PolynomialParseError(f"exponent without variable in {raw!r}")
        if v is not None:
            if seen_var is None:
                seen_var = v
            elif v != seen_var:
                raise PolynomialParseError(
                    f"mixed variables {seen_var!r} and {v!r} in {text!r}")
            exp = int(m.group("exp")) if m.group("exp") else 1
        else:
            exp = 0
        coeffs[exp] = coeffs.get(exp, Fraction(0)) + coeff
    n = max(coeffs) if coeffs else 0
    return Polynomial([coeffs.get(k, Fraction(0)) for k in range(n + 1)])


def format_polynomial(p: Polynomial, var: str = "t") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            pw = var if k == 1 else f"{var}^{k}"
            body = pw if mag == 1 else f"{mag}*{pw}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text
