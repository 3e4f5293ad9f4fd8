"""Etale algebras with involution over Q and over a cubic etale algebra L.

An algebra with involution is a product of factors, each either
F(sqrt(d))/F with sigma negating the square root, or the swap algebra F x F.
This module computes real-place data (which real places of the fixed algebra
split), the rho counts, exact trace forms Tr(alpha x sigma(y)) with their
diagonalizations, the split Phi-algebra with its Psi map, and the datum
container (L, E, sigma, beta) with its validity checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .numberfield import element_charpoly, poly_ext_gcd
from .places import REAL, is_square_local, rational_primes, square_class
from .polynomials import (
    IsolatingInterval,
    NotSquarefree,
    Polynomial,
    ZeroPolynomial,
    isolate_real_roots,
    resultant,
    sign_at_root,
)
from .quadforms import DiagonalForm, invariants_of, is_trivial_clifford


class SingularAlpha(ArithmeticError):
    """The scaling element of a trace form must be invertible."""


class InvalidDatum(ValueError):
    """Datum fails a structural invariant."""


class FixedPointInvolution(ValueError):
    """The involution on Hom must be fixed-point-free."""


class NotSplitData(ValueError):
    """Operation requires fully split (diagonalized) data."""


# ---------------------------------------------------------------------------
# Involution factors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvolutionFactor:
    """One factor of (E, sigma): F(sqrt(d))/F, or the swap algebra F x F."""

    fixed_poly: Polynomial
    d: Optional[Polynomial]  # None marks the swap factor

    @staticmethod
    def quadratic(fixed_poly: Polynomial, d: Polynomial) -> "InvolutionFactor":
        f = fixed_poly.monic()
        if not f.is_squarefree():
            raise NotSquarefree(f"fixed algebra {fixed_poly} is not etale")
        d = d % f
        if d.is_zero():
            raise ZeroPolynomial("d must be nonzero")
        return InvolutionFactor(f, d)

    @staticmethod
    def split(fixed_poly: Polynomial) -> "InvolutionFactor":
        f = fixed_poly.monic()
        if not f.is_squarefree():
            raise NotSquarefree(f"fixed algebra {fixed_poly} is not etale")
        return InvolutionFactor(f, None)

    @property
    def kind(self) -> str:
        return "split" if self.d is None else "quadratic"

    @property
    def degree(self) -> int:
        """Rank of the fixed algebra F over Q."""
        return self.fixed_poly.degree

    def real_places(self) -> list[IsolatingInterval]:
        return isolate_real_roots(self.fixed_poly)

    def real_split_pattern(self) -> list[bool]:
        """For each real place of F in order: does the factor split there?"""
        out = []
        for tau in self.real_places():
            if self.d is None:
                out.append(True)
                continue
            s = sign_at_root(self.d, tau)
            if s == 0:
                raise InvalidDatum("d vanishes at a real place; algebra not etale")
            out.append(s > 0)
        return out

    def disc_class(self) -> int:
        """Square class of the factor's discriminant over Q."""
        if self.d is None:
            return 1
        n = resultant(self.fixed_poly, self.d)
        return square_class(n)


@dataclass(frozen=True)
class EtaleInvolution:
    factors: tuple

    @staticmethod
    def make(factors: Sequence[InvolutionFactor]) -> "EtaleInvolution":
        if not factors:
            raise ValueError("need at least one factor")
        return EtaleInvolution(tuple(factors))

    @property
    def rank(self) -> int:
        """Rank of E over Q (twice the fixed-algebra rank)."""
        return 2 * sum(f.degree for f in self.factors)

    @property
    def fixed_rank(self) -> int:
        return sum(f.degree for f in self.factors)


def etale_disc(e: EtaleInvolution) -> int:
    """disc(E) as a square class: the product of the factor discs."""
    out = Fraction(1)
    for f in e.factors:
        out *= f.disc_class()
    return square_class(out)


def rho_infinity(e: EtaleInvolution) -> int:
    """Real places of the fixed algebra that stay split (do not ramify) in E."""
    return sum(sum(f.real_split_pattern()) for f in e.factors)


def real_place_counts(e: EtaleInvolution) -> dict:
    total_real = sum(len(f.real_places()) for f in e.factors)
    rho = rho_infinity(e)
    return {"real_places": total_real, "rho": rho, "ramified": total_real - rho}


def all_split_at_real(e: EtaleInvolution) -> bool:
    """Whether the real place lies in Sigma^split(E)."""
    counts = real_place_counts(e)
    return counts["ramified"] == 0


def real_torus_type(e: EtaleInvolution) -> tuple:
    """Multiset of real torus factors: Gm (split real place), R1 (ramified
    real place, the norm-one circle), RC (complex place of the fixed algebra)."""
    out = []
    for f in e.factors:
        pattern = f.real_split_pattern()
        out.extend("Gm" if split else "R1" for split in pattern)
        out.extend(["RC"] * ((f.degree - len(pattern)) // 2))
    return tuple(sorted(out))


def u_membership(e: EtaleInvolution, x: Sequence) -> bool:
    """Exact test x sigma(x) = 1.

    Per quadratic factor, x is a pair (u, v) of polynomials meaning u + v s
    with s^2 = d: the condition is u^2 - d v^2 = 1 in F.  Per split factor, x
    is a pair (a, b) in F x F with sigma the swap: the condition is a b = 1.
    """
    if len(x) != len(e.factors):
        raise ValueError("one coordinate pair per factor")
    one = Polynomial([1])
    for factor, (u, v) in zip(e.factors, x):
        f = factor.fixed_poly
        u, v = u % f, v % f
        if factor.d is None:
            if (u * v) % f != one:
                return False
        else:
            if (u * u - factor.d * v * v) % f != one:
                return False
    return True


# ---------------------------------------------------------------------------
# Trace forms
# ---------------------------------------------------------------------------


def _trace_table(f: Polynomial) -> list[Fraction]:
    """Traces of the power basis t^0 .. t^(deg-1) of Q[t]/(f)."""
    from .numberfield import NumberFieldElement
    n = f.degree
    return [NumberFieldElement.make(f, Polynomial([0] * k + [1])).trace()
            for k in range(n)]


def _trace_of(f: Polynomial, g: Polynomial, table: list[Fraction]) -> Fraction:
    g = g % f
    return sum((g.coeff(k) * table[k] for k in range(f.degree)), Fraction(0))


def _inverse_mod(g: Polynomial, f: Polynomial) -> Polynomial:
    gcd, u, _ = poly_ext_gcd(g % f, f)
    if gcd.degree != 0:
        raise SingularAlpha(f"{g} is not invertible modulo {f}")
    return (u * (1 / gcd.lc)) % f


def trace_form_gram(e: EtaleInvolution, alpha: Sequence[Polynomial]) -> list[list[Fraction]]:
    """Gram matrix of (x, y) -> Tr(alpha x sigma(y)) on the standard basis.

    Quadratic factor on basis (t^i, s t^i): block-diagonal
    [2 Tr(alpha t^(i+j))] + [-2 Tr(alpha d t^(i+j))]; split factor on basis
    ((t^i, 0), (0, t^j)): off-diagonal blocks [Tr(alpha t^(i+j))].
    """
    if len(alpha) != len(e.factors):
        raise ValueError("one alpha per factor")
    blocks = []
    for factor, a in zip(e.factors, alpha):
        f = factor.fixed_poly
        a = a % f
        _inverse_mod(a, f)  # invertibility required
        n = f.degree
        table = _trace_table(f)
        powers = []
        acc = a
        for k in range(2 * n - 1):
            powers.append(acc)
            acc = (acc * Polynomial([0, 1])) % f
        tr = [_trace_of(f, p, table) for p in powers]
        if factor.d is None:
            block = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
            for i in range(n):
                for j in range(n):
                    block[i][n + j] = tr[i + j]
                    block[n + j][i] = tr[i + j]
        else:
            dpowers = [(p * factor.d) % f for p in powers]
            trd = [_trace_of(f, p, table) for p in dpowers]
            block = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
            for i in range(n):
                for j in range(n):
                    block[i][j] = 2 * tr[i + j]
                    block[n + i][n + j] = -2 * trd[i + j]
        blocks.append(block)
    size = sum(len(b) for b in blocks)
    gram = [[Fraction(0)] * size for _ in range(size)]
    off = 0
    for b in blocks:
        for i in range(len(b)):
            for j in range(len(b)):
                gram[off + i][off + j] = b[i][j]
        off += len(b)
    return gram


def diagonalize_symmetric(gram: list[list[Fraction]]) -> DiagonalForm:
    """Exact congruence diagonalization; raises SingularAlpha on degeneracy."""
    m = [row[:] for row in gram]
    n = len(m)
    entries = []
    for k in range(n):
        if m[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if m[i][i] != 0), None)
            if piv is not None:
                _swap_basis(m, k, piv)
            else:
                spot = None
                for i in range(k, n):
                    for j in range(i + 1, n):
                        if m[i][j] != 0:
                            spot = (i, j)
                            break
                    if spot:
                        break
                if spot is None:
                    raise SingularAlpha("degenerate trace form")
                i, j = spot
                _add_basis(m, i, j)  # e_i += e_j makes m[i][i] = 2 m[i][j]
                if i != k:
                    _swap_basis(m, k, i)
        p = m[k][k]
        entries.append(p)
        for i in range(k + 1, n):
            c = m[i][k] / p
            if c:
                for j in range(n):
                    m[i][j] -= c * m[k][j]
                for j in range(n):
                    m[j][i] -= c * m[j][k]
    return DiagonalForm(tuple(entries))


def _swap_basis(m, i, j):
    m[i], m[j] = m[j], m[i]
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_basis(m, i, j):
    for col in range(len(m)):
        m[i][col] += m[j][col]
    for row in m:
        row[i] += row[j]


def trace_form(e: EtaleInvolution, alpha: Sequence[Polynomial]) -> DiagonalForm:
    return diagonalize_symmetric(trace_form_gram(e, alpha))


def presentation_factor(f: Polynomial) -> InvolutionFactor:
    """The factor E^sigma(sqrt t) over E^sigma = Q[t]/(f); needs f(0) != 0."""
    f = f.monic()
    if f(0) == 0:
        raise ZeroPolynomial("t must be invertible: f(0) != 0")
    return InvolutionFactor.quadratic(f, Polynomial([0, 1]))


def dual_alpha(f: Polynomial) -> Polynomial:
    """alpha = 1/(2 f'(t)) in Q[t]/(f)."""
    return _inverse_mod(2 * f.derivative(), f.monic())


def raw_canonical_trace_form(f: Polynomial) -> DiagonalForm:
    """The trace form of E^sigma(sqrt t) at alpha = 1/(2 f'(t)), unadjusted."""
    factor = presentation_factor(f)
    return trace_form(EtaleInvolution.make([factor]), [dual_alpha(factor.fixed_poly)])


def _alpha_candidates(f: Polynomial):
    """Deterministic alpha search order: the dual element first, then scalings."""
    a0 = dual_alpha(f)
    scalars = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
               Fraction(1, 2), Fraction(3), Fraction(-3), Fraction(1, 3)]
    shifts = [Polynomial([0, 1]), Polynomial([1, 1]), Polynomial([-1, 1]),
              Polynomial([2, 1]), Polynomial([-2, 1]), Polynomial([3, 1]),
              Polynomial([0, 0, 1]), Polynomial([1, 0, 1]), Polynomial([1, 2])]
    yield a0
    for c in scalars:
        yield (a0 * c) % f
        yield Polynomial([c])
    for s in shifts:
        yield (a0 * s) % f
        yield s % f
    for s in shifts:
        for c in scalars:
            yield (a0 * s * c) % f
            yield (s * c) % f
    for s, s2 in combinations(shifts, 2):
        yield (a0 * s * s2) % f
        yield (s * s2) % f


def canonical_trace_form(f: Polynomial, *, ensure_trivial_clifford: bool = True
                         ) -> tuple[DiagonalForm, Polynomial]:
    """A trace form of E^sigma(sqrt t) with trivial Clifford invariant.

    Starts from alpha = 1/(2 f'(t)) and walks a fixed candidate list until the
    Clifford invariant is trivial; every candidate is a genuine q_alpha, so
    realizability is never lost.  Returns the form and the alpha used.
    """
    factor = presentation_factor(f)
    e = EtaleInvolution.make([factor])
    fm = factor.fixed_poly
    last = None
    for a in _alpha_candidates(fm):
        if a.is_zero():
            continue
        try:
            q = trace_form(e, [a])
        except SingularAlpha:
            continue
        last = (q, a)
        if not ensure_trivial_clifford:
            return q, a
        if is_trivial_clifford(invariants_of(q)):
            return q, a
    raise SingularAlpha(
        f"no trivial-Clifford trace form found for {f} in the candidate list")


def canonical_rho(f: Polynomial) -> int:
    """rho of the E^sigma(sqrt t) presentation: positive real roots of f."""
    return rho_infinity(EtaleInvolution.make([presentation_factor(f)]))


# ---------------------------------------------------------------------------
# The split Phi-algebra and the Psi map
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitPhiAlgebra:
    n: int
    sigma: tuple
    phi_basis: tuple  # frozensets in canonical (bitmask) order

    def index(self, phi: frozenset) -> int:
        return self.phi_basis.index(phi)

    def phi_sigma(self, phi: frozenset) -> frozenset:
        return frozenset(self.sigma[p] for p in phi)


def phi_algebra(n: int, sigma: Optional[Sequence[int]] = None) -> SplitPhiAlgebra:
    """All subsets phi with phi and phi sigma partitioning the 2n points."""
    if sigma is None:
        sigma = tuple((i + n) % (2 * n) for i in range(2 * n))
    else:
        sigma = tuple(sigma)
    if sorted(sigma) != list(range(2 * n)):
        raise FixedPointInvolution("sigma must permute the 2n points")
    for i, s in enumerate(sigma):
        if s == i:
            raise FixedPointInvolution(f"sigma fixes {i}")
        if sigma[s] != i:
            raise FixedPointInvolution("sigma is not an involution")
    orbits = []
    seen = set()
    for i in range(2 * n):
        if i not in seen:
            orbits.append((i, sigma[i]))
            seen.update((i, sigma[i]))
    basis = []
    for mask in range(2 ** n):
        phi = frozenset(orbit[(mask >> k) & 1] for k, orbit in enumerate(orbits))
        basis.append(phi)
    return SplitPhiAlgebra(n, sigma, tuple(basis))


def psi_apply(p: SplitPhiAlgebra, coeffs: Sequence) -> tuple:
    """Evaluate the Psi sum over unordered distinct pairs sharing one point.

    Returns the coefficient tensor T with T[rho][k] the coefficient of
    e_rho (x) e_{phi_k}.
    """
    if len(coeffs) != len(p.phi_basis):
        raise ValueError("one coefficient per basis subset")
    coeffs = [Fraction(c) for c in coeffs]
    t = [[Fraction(0)] * len(p.phi_basis) for _ in range(2 * p.n)]
    for i, j in combinations(range(len(p.phi_basis)), 2):
        common = p.phi_basis[i] & p.phi_basis[j]
        if len(common) != 1:
            continue
        (rho,) = common
        prod = coeffs[i] * coeffs[j]
        for k in (i, j, p.index(p.phi_sigma(p.phi_basis[i])),
                  p.index(p.phi_sigma(p.phi_basis[j]))):
            t[rho][k] += prod
    return tuple(tuple(row) for row in t)


def t_alpha_membership_split(p: SplitPhiAlgebra, x1: Sequence, x2: Sequence) -> bool:
    """Membership in the split torus: unitarity on both layers and Psi(x2) = x1 (x) 1."""
    x1 = [Fraction(v) for v in x1]
    x2 = [Fraction(v) for v in x2]
    if len(x1) != 2 * p.n or len(x2) != len(p.phi_basis):
        raise NotSplitData("coordinate vectors must match the split data")
    if any(v == 0 for v in x1) or any(v == 0 for v in x2):
        return False
    for i in range(2 * p.n):
        if x1[i] * x1[p.sigma[i]] != 1:
            return False
    for k, phi in enumerate(p.phi_basis):
        if x2[k] * x2[p.index(p.phi_sigma(phi))] != 1:
            return False
    t = psi_apply(p, x2)
    for rho in range(2 * p.n):
        for k in range(len(p.phi_basis)):
            if t[rho][k] != x1[rho]:
                return False
    return True


# ---------------------------------------------------------------------------
# Datum (L, E, sigma, beta)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubicEtale:
    g: Polynomial

    @staticmethod
    def make(g: Polynomial) -> "CubicEtale":
        if g.degree != 3:
            raise InvalidDatum(f"L needs a cubic polynomial, got degree {g.degree}")
        if not g.is_squarefree():
            raise InvalidDatum("L must be etale: g squarefree")
        return CubicEtale(g)

    def real_roots(self) -> list[IsolatingInterval]:
        return isolate_real_roots(self.g.monic())

    @property
    def l_type(self) -> str:
        """Archimedean type: RRR for three real roots, RC for one."""
        return "RRR" if len(self.real_roots()) == 3 else "RC"

    def disc_class(self) -> int:
        from .polynomials import discriminant
        return square_class(discriminant(self.g))


@dataclass(frozen=True)
class LStructuredFactor:
    base: InvolutionFactor
    l_embedding: Polynomial

    @staticmethod
    def make(base: InvolutionFactor, l_embedding: Polynomial, g: Polynomial
             ) -> "LStructuredFactor":
        lam = l_embedding % base.fixed_poly
        if not g.compose(lam) % base.fixed_poly == Polynomial():
            raise InvalidDatum(
                f"l_embedding {l_embedding} is not a root of g in the factor")
        return LStructuredFactor(base, lam)


@dataclass(frozen=True)
class Datum:
    l: CubicEtale
    factors: tuple  # LStructuredFactor
    beta: str = "unspecified"

    @staticmethod
    def make(l: CubicEtale, factors: Sequence[LStructuredFactor],
             beta: str = "unspecified") -> "Datum":
        if not factors:
            raise InvalidDatum("datum needs at least one factor")
        return Datum(l, tuple(factors), beta)

    def etale(self) -> EtaleInvolution:
        return EtaleInvolution.make([f.base for f in self.factors])


@dataclass(frozen=True)
class DatumReport:
    ok: bool
    failures: tuple  # (condition, witness) pairs
    notes: tuple

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "failures": [{"condition": c, "witness": str(w)} for c, w in self.failures],
                "notes": list(self.notes)}


def validate_datum(datum: Datum, probe_bound: int = 10_000) -> DatumReport:
    """Rank and discriminant invariants of a datum.

    The rank check is exact (charpoly product).  The disc comparison is exact
    at the real place; finitely it is probed at 2, at every prime dividing the
    disc quotient (which settles the quotient-square condition over Q) and at
    a small sweep of further primes.  Finite-place conclusions remain
    necessary conditions only.
    """
    failures = []
    notes = []
    g = datum.l.g.monic()
    degree_total = sum(f.base.degree for f in datum.factors)
    if degree_total != 12:
        failures.append(("rank: total fixed-algebra degree must be 12", degree_total))
    else:
        prod = Polynomial([1])
        for f in datum.factors:
            prod = prod * element_charpoly(f.base.fixed_poly, f.l_embedding)
        if prod != g ** 4:
            failures.append(("rank: product of embedding charpolys must be g^4", prod))
    # real-place disc condition: per real root of g, the ramified count parity
    # must match the sign of disc(g)
    sign_disc = 1 if datum.l.disc_class() > 0 else -1
    try:
        table = _rho_table(datum)
    except InvalidDatum as exc:
        failures.append(("real-place structure", str(exc)))
        table = None
    if table is not None:
        for row in table:
            ram = sum(1 for (_, _, split) in row["places"] if not split)
            if (-1) ** ram != sign_disc:
                failures.append(
                    ("disc at the real place: ramified count parity must match disc(L)",
                     f"root in ({row['low']}, {row['high']}] has {ram} ramified places"))
            if len(row["places"]) > 4:
                failures.append(("at most 4 real places above each real root",
                                 len(row["places"])))
    quotient = Fraction(etale_disc(datum.etale())) * datum.l.disc_class()
    probe = sorted({2, *rational_primes(quotient),
                    *(p for p in range(3, min(probe_bound, 100)) if _tiny_prime(p))})
    for p in probe:
        if not is_square_local(quotient, p):
            failures.append(("disc quotient disc(E)/disc(L) must be a local square",
                             p))
    if quotient < 0:
        failures.append(("disc quotient disc(E)/disc(L) must be a local square", REAL))
    notes.append("finite-place disc checks are necessary conditions only")
    notes.append(f"probe bound {probe_bound}")
    return DatumReport(not failures, tuple(failures), tuple(notes))


def _tiny_prime(p: int) -> bool:
    from .places import is_prime
    return is_prime(p)


def _rho_table(datum: Datum) -> list[dict]:
    """Per real root of g: the real places of the fixed algebra above it."""
    g = datum.l.g.monic()
    roots = isolate_real_roots(g)
    table = [{"low": iv.low, "high": iv.high, "places": []} for iv in roots]
    for j, f in enumerate(datum.factors):
        pattern = f.base.real_split_pattern()
        for tau, split in zip(f.base.real_places(), pattern):
            hits = []
            for k, iv in enumerate(roots):
                lam = f.l_embedding
                above = sign_at_root(lam - Polynomial([iv.low]), tau) > 0 and \
                    sign_at_root(lam - Polynomial([iv.high]), tau) <= 0
                if above:
                    hits.append(k)
            if len(hits) != 1:
                raise InvalidDatum(
                    f"real place of factor {j} matched {len(hits)} roots of g")
            table[hits[0]]["places"].append((j, tau, split))
    return table


def rho_data(datum: Datum) -> dict:
    """Per-real-root rho table and the total rho at the real place."""
    report = validate_datum(datum)
    if not report.ok:
        raise InvalidDatum("; ".join(c for c, _ in report.failures))
    table = _rho_table(datum)
    out = []
    total = 0
    for row in table:
        rho = sum(1 for (_, _, split) in row["places"] if split)
        total += rho
        out.append({"interval": (row["low"], row["high"]),
                    "rho": rho,
                    "real_places": len(row["places"]),
                    "per_factor": [(j, split) for (j, _, split) in row["places"]]})
    if not 0 <= total <= 12:
        raise InvalidDatum(f"rho total {total} out of range")
    return {"per_root": out, "rho": total, "l_type": datum.l.l_type}
