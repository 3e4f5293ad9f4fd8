"""Witt-invariant calculus for non-degenerate quadratic forms over Q.

Forms are carried as their complete classifying tuple (dimension,
discriminant square class, Hasse ramification set, real signature) rather
than as vector spaces; the weak Hasse-Minkowski principle makes the tuple a
faithful stand-in.  Diagonal forms appear only at the boundary: building
invariants and realizing a consistent tuple as an explicit diagonal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .places import (
    REAL,
    Place,
    bad_places,
    check_place,
    hilbert_symbol,
    is_prime,
    is_square_local,
    legendre,
    place_key,
    square_class,
)


class OddDimension(ValueError):
    """Clifford triviality is only defined for even-dimensional forms."""


@dataclass(frozen=True)
class BrauerClass:
    """A 2-torsion Brauer class over Q, stored by its ramification set."""

    places: frozenset

    @staticmethod
    def trivial() -> "BrauerClass":
        return BrauerClass(frozenset())

    @staticmethod
    def from_symbol(a: Union[int, Fraction], b: Union[int, Fraction]) -> "BrauerClass":
        """Class of the quaternion algebra (a, b)."""
        ram = {v for v in bad_places([Fraction(a), Fraction(b)])
               if hilbert_symbol(a, b, v) == -1}
        return BrauerClass(frozenset(ram))

    def __add__(self, other: "BrauerClass") -> "BrauerClass":
        return BrauerClass(self.places ^ other.places)

    def is_trivial(self) -> bool:
        return not self.places

    def value_at(self, v: Place) -> int:
        return -1 if v in self.places else 1

    def sorted_places(self) -> list[Place]:
        return sorted(self.places, key=place_key)

    def to_json(self) -> list:
        return list(self.sorted_places())


def brauer_from_places(places: Iterable[Place]) -> BrauerClass:
    return BrauerClass(frozenset(check_place(v) for v in places))


@dataclass(frozen=True)
class DiagonalForm:
    """q = <a_1, ..., a_m> with nonzero rational entries (empty allowed internally)."""

    entries: tuple

    @staticmethod
    def make(entries: Iterable[Union[int, Fraction]]) -> "DiagonalForm":
        es = tuple(Fraction(a) for a in entries)
        if any(a == 0 for a in es):
            raise ValueError("diagonal entries must be nonzero")
        return DiagonalForm(es)

    @staticmethod
    def parse(text: str) -> "DiagonalForm":
        parts = [p.strip() for p in text.split(",")]
        if not parts or any(not p for p in parts):
            raise ValueError(f"empty entry in {text!r}")
        return DiagonalForm.make(Fraction(p) for p in parts)

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.entries)

    @property
    def dim(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class WittInvariants:
    """(dim, disc square class, Hasse ramification, real signature)."""

    dim: int
    disc: int
    hasse: BrauerClass
    sig: tuple[int, int]

    @property
    def det(self) -> int:
        """Determinant square class, undoing the discriminant twist."""
        return disc_twist(self.disc, self.dim)

    def consistency_failures(self) -> list[str]:
        """Violations of the conditions every genuine form satisfies."""
        bad = []
        r, s = self.sig
        if r < 0 or s < 0 or r + s != self.dim:
            bad.append("signature parts must be nonnegative and sum to the dimension")
        if self.disc == 0 or square_class(self.disc) != self.disc:
            bad.append("disc must be a canonical (signed squarefree) square class")
        elif (self.disc < 0) != ((s + self.dim * (self.dim - 1) // 2) % 2 == 1):
            bad.append("sign of disc inconsistent with the real signature")
        if len(self.hasse.places) % 2:
            bad.append("hasse set has odd cardinality (violates reciprocity)")
        if s >= 0 and ((REAL in self.hasse.places) != ((s * (s - 1) // 2) % 2 == 1)):
            bad.append("hasse entry at the real place inconsistent with the signature")
        return bad

    def to_json(self) -> dict:
        return {"dim": self.dim, "disc": self.disc,
                "hasse": self.hasse.to_json(), "sig": list(self.sig)}

    def __str__(self) -> str:
        return (f"dim={self.dim} disc={self.disc} "
                f"hasse={self.hasse.sorted_places()} sig={self.sig}")


EMPTY_FORM = WittInvariants(0, 1, BrauerClass.trivial(), (0, 0))


def disc_twist(det_or_disc: int, dim: int) -> int:
    """Multiply by the class of (-1)^(dim(dim-1)/2); involutive."""
    if (dim * (dim - 1) // 2) % 2:
        return square_class(-Fraction(det_or_disc))
    return square_class(Fraction(det_or_disc))


def invariants_of(q: DiagonalForm) -> WittInvariants:
    """Exact dimension, twisted discriminant, Hasse set and signature."""
    m = q.dim
    det = Fraction(1)
    for a in q.entries:
        det *= a
    hasse = BrauerClass.trivial()
    for i in range(m):
        for j in range(i + 1, m):
            hasse = hasse + BrauerClass.from_symbol(q.entries[i], q.entries[j])
    r = sum(1 for a in q.entries if a > 0)
    disc = disc_twist(square_class(det), m) if m else 1
    return WittInvariants(m, disc, hasse, (r, m - r))


def orthogonal_sum(u: WittInvariants, v: WittInvariants) -> WittInvariants:
    """Invariants of the orthogonal sum; Hasse composes by the chain rule."""
    dim = u.dim + v.dim
    det = square_class(Fraction(u.det) * Fraction(v.det))
    hasse = u.hasse + v.hasse + BrauerClass.from_symbol(u.det, v.det)
    sig = (u.sig[0] + v.sig[0], u.sig[1] + v.sig[1])
    return WittInvariants(dim, disc_twist(det, dim), hasse, sig)


def hyperbolic_invariants(n: int) -> WittInvariants:
    """Invariants of h_2n, the sum of n hyperbolic planes."""
    h2 = invariants_of(DiagonalForm.make([1, -1]))
    out = EMPTY_FORM
    for _ in range(n):
        out = orthogonal_sum(out, h2)
    return out


def clifford_target(dim: int, disc: int) -> BrauerClass:
    """The Hasse class a trivial-Clifford form of these invariants must have."""
    if dim % 2:
        raise OddDimension("dimension must be even")
    n = dim // 2
    k = n % 4
    if k == 0:
        return BrauerClass.from_symbol(-1, disc)
    if k == 1:
        return BrauerClass.trivial()
    if k == 2:
        return BrauerClass.from_symbol(-1, -Fraction(disc))
    return BrauerClass.from_symbol(-1, -1)


def is_trivial_clifford(u: WittInvariants) -> bool:
    return u.hasse == clifford_target(u.dim, u.disc)


def equivalent(u: WittInvariants, v: WittInvariants) -> bool:
    """Isometry over Q, by the weak Hasse-Minkowski principle."""
    return (u.dim == v.dim and u.disc == v.disc
            and u.hasse == v.hasse and u.sig == v.sig)


# ---------------------------------------------------------------------------
# Isotropy and Witt decomposition
# ---------------------------------------------------------------------------


def is_isotropic_local(u: WittInvariants, v: Place) -> bool:
    """Classical dimension-case criteria over the completion at v."""
    check_place(v)
    if u.dim == 0:
        return False
    if v == REAL:
        return u.sig[0] >= 1 and u.sig[1] >= 1
    if u.dim == 1:
        return False
    if u.dim == 2:
        # binary forms: isotropic iff disc (= -det) is a local square
        return is_square_local(u.disc, v)
    eps = u.hasse.value_at(v)
    if u.dim == 3:
        return eps == hilbert_symbol(-1, -Fraction(u.det), v)
    if u.dim == 4:
        return (not is_square_local(u.det, v)) or eps == hilbert_symbol(-1, -1, v)
    return True


def is_isotropic_global(u: WittInvariants) -> bool:
    """Hasse-Minkowski: isotropy over Q as the conjunction of local tests."""
    if u.dim <= 1:
        return False
    if not (u.sig[0] >= 1 and u.sig[1] >= 1):
        return False
    if u.dim == 2:
        return u.disc == 1
    for v in _bad_place_set(u):
        if not is_isotropic_local(u, v):
            return False
    return True


def _bad_place_set(u: WittInvariants) -> list[Place]:
    places = {REAL, 2}
    places.update(_prime_support(u.disc))
    places.update(v for v in u.hasse.places if v != REAL)
    return sorted(places, key=place_key)


def _prime_support(n: int) -> list[int]:
    return [p for p in bad_places([Fraction(n)]) if p != REAL]


def peel_hyperbolic(u: WittInvariants) -> WittInvariants:
    """Invariants of q' with q = q' + h_2; requires indefinite signature data."""
    if u.dim < 2 or u.sig[0] < 1 or u.sig[1] < 1:
        raise ValueError("cannot peel a hyperbolic plane here")
    det2 = square_class(-Fraction(u.det))
    hasse2 = u.hasse + BrauerClass.from_symbol(det2, -1)
    return WittInvariants(u.dim - 2, disc_twist(det2, u.dim - 2), hasse2,
                          (u.sig[0] - 1, u.sig[1] - 1))


def witt_split(u: WittInvariants) -> tuple[WittInvariants, int]:
    """Anisotropic kernel and the number of hyperbolic planes removed."""
    kernel, rank = u, 0
    while kernel.dim >= 2 and is_isotropic_global(kernel):
        kernel = peel_hyperbolic(kernel)
        rank += 1
    return kernel, rank


# ---------------------------------------------------------------------------
# Realizing an invariant tuple as a diagonal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Infeasible:
    """Returned when no quadratic form over Q has the requested invariants."""

    reason: str


def _feasibility_failures(u: WittInvariants) -> list[str]:
    bad = u.consistency_failures()
    if bad:
        return bad
    if u.dim == 0 and (u.disc != 1 or not u.hasse.is_trivial()):
        bad.append("the empty form has disc 1 and trivial hasse")
    if u.dim == 1 and not u.hasse.is_trivial():
        bad.append("one-dimensional forms have trivial hasse")
    if u.dim == 2:
        for v in u.hasse.sorted_places():
            if is_square_local(u.disc, v):
                bad.append(f"binary form with square disc at {v} is the hyperbolic "
                           "plane there, which has trivial hasse")
    return bad


def _symbol_solution(d0: int, targets: frozenset) -> Fraction:
    """Find a with ramification set of (a, d0) equal to `targets`.

    Preconditions (already validated): targets is finite and even, and d0 is a
    nonsquare in k_v for every v in targets.
    """
    if not targets:
        return Fraction(1)
    odd_primes = sorted({p for p in _prime_support(d0) if p != 2}
                        | {v for v in targets if v not in (REAL, 2)})
    # exponent of p in a, and the quadratic-residue class needed for a's unit part
    exps: dict[int, int] = {}
    residue_class: dict[int, int] = {}
    for p in odd_primes:
        t = -1 if p in targets else 1
        if abs(d0) % p == 0:
            exps[p] = 0
            residue_class[p] = t  # (unit(a)|p) must equal t
        else:
            if legendre(d0, p) == -1:
                exps[p] = 0 if t == 1 else 1
            else:
                exps[p] = 0
                if t == -1:
                    raise AssertionError("unsatisfiable local target; validation bug")
    sign = -1 if REAL in targets else 1
    # 2-adic part: enumerate exponent and unit residue mod 8
    t2 = -1 if 2 in targets else 1
    for f2 in (0, 1):
        for u8 in (1, 3, 5, 7):
            if _symbol_2adic(f2, u8, d0) == t2:
                break
        else:
            continue
        break
    else:
        raise AssertionError("no 2-adic option; validation bug")
    fixed = Fraction(sign) * 2**f2
    for p, e in exps.items():
        fixed *= p**e
    # congruences the auxiliary factor must satisfy
    moduli, residues = [8], [u8 * pow(_mod_of(fixed / 2**f2, 8), -1, 8) % 8]
    for p in odd_primes:
        if p in residue_class:
            base = _mod_of(fixed, p)
            want = 1 if residue_class[p] == 1 else _smallest_nonresidue(p)
            residues.append(want * pow(base, -1, p) % p)
            moduli.append(p)
    m, r = _crt(moduli, residues)
    candidate = fixed if r % m == 1 % m else None
    if candidate is not None and BrauerClass.from_symbol(candidate, d0).places == targets:
        return candidate
    ell = r if r > 1 else r + m
    while True:
        if is_prime(ell) and abs(d0) % ell and ell % 2:
            a = fixed * ell
            if BrauerClass.from_symbol(a, d0).places == targets:
                return a
        ell += m


def _mod_of(x: Fraction, m: int) -> int:
    return x.numerator * pow(x.denominator % m, -1, m) % m


def _smallest_nonresidue(p: int) -> int:
    n = 2
    while legendre(n, p) != -1:
        n += 1
    return n


def _symbol_2adic(f2: int, u8: int, d0: int) -> int:
    a = Fraction(2**f2 * u8)
    return hilbert_symbol(a, d0, 2)


def _crt(moduli: list[int], residues: list[int]) -> tuple[int, int]:
    m, r = 1, 0
    for mi, ri in zip(moduli, residues):
        g = _gcd2(m, mi)
        assert (ri - r) % g == 0
        lcm = m // g * mi
        diff = (ri - r) // g * pow(m // g, -1, mi // g) % (mi // g)
        r = r + m * diff
        m = lcm
        r %= m
    return m, r


def _gcd2(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _candidate_entries():
    """Deterministic stream of signed squarefree integers: 1, -1, 2, -2, ...

    Past 50 only primes appear; the stream is long enough that the pivot
    searches below always succeed before exhausting it.
    """
    n = 1
    while n <= 50:
        if square_class(n) == n:
            yield Fraction(n)
            yield Fraction(-n)
        n += 1
    while n <= 100_000:
        if is_prime(n):
            yield Fraction(n)
            yield Fraction(-n)
        n += 1


def _realize_det(m: int, det: int, targets: frozenset, sig: tuple[int, int]) -> list[Fraction]:
    """Entries of a form with det class, Hasse set `targets` and signature sig."""
    r, s = sig
    if m == 0:
        return []
    if m == 1:
        return [Fraction(det)]
    if m == 2:
        d0 = square_class(-Fraction(det))
        for a in _candidate_entries():
            if (a > 0 and r == 0) or (a < 0 and s == 0):
                continue
            b = Fraction(det) * a
            if (a > 0) + (b > 0) != r:
                continue
            if BrauerClass.from_symbol(a, d0).places == targets:
                return [a, b]
        a = _symbol_solution(d0, targets)
        b = Fraction(det) * a
        if (a > 0) + (b > 0) != r or (a < 0 and s == 0) or (a > 0 and r == 0):
            # the symbol solution fixes local data; the sign freedom left is a = -a * square?
            raise AssertionError(f"binary realization sign mismatch det={det} {targets} {sig}")
        return [a, b]
    if m == 3:
        for a in _candidate_entries():
            if (a > 0 and r == 0) or (a < 0 and s == 0):
                continue
            sub = _peel_target(det, targets, a)
            sub_sig = (r - 1, s) if a > 0 else (r, s - 1)
            if _binary_target_ok(sub[0], sub[1], sub_sig):
                return [a] + _realize_det(2, sub[0], sub[1], sub_sig)
        raise AssertionError(f"no ternary pivot found for det={det} {targets} {sig}")
    a = Fraction(1) if r > 0 else Fraction(-1)
    sub = _peel_target(det, targets, a)
    sub_sig = (r - 1, s) if a > 0 else (r, s - 1)
    return [a] + _realize_det(m - 1, sub[0], sub[1], sub_sig)


def _peel_target(det: int, targets: frozenset, a: Fraction) -> tuple[int, frozenset]:
    """Invariant target for q' where q = <a> + q'."""
    det2 = square_class(Fraction(det) * a)
    shift = BrauerClass.from_symbol(a, det2)
    return det2, frozenset(targets ^ shift.places)


def _binary_target_ok(det2: int, targets: frozenset, sig: tuple[int, int]) -> bool:
    r, s = sig
    if r < 0 or s < 0 or r + s != 2:
        return False
    if (det2 > 0) != (s % 2 == 0):
        return False
    d0 = square_class(-Fraction(det2))
    for v in targets:
        if is_square_local(d0, v):
            return False
    if (REAL in targets) != (s == 2):
        return False
    return True


def realize_invariants(u: WittInvariants) -> Union[DiagonalForm, Infeasible]:
    """An explicit diagonal form with the given invariants, or Infeasible."""
    bad = _feasibility_failures(u)
    if bad:
        return Infeasible("; ".join(bad))
    entries = _realize_det(u.dim, u.det, frozenset(u.hasse.places), u.sig)
    q = DiagonalForm(tuple(entries))
    check = invariants_of(q)
    assert equivalent(check, u), f"realization bug: {check} != {u}"
    return q
