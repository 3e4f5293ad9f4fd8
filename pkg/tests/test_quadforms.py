import random
from fractions import Fraction

import pytest

from f4tori.places import REAL, bad_places, hilbert_symbol
from f4tori.quadforms import (
    EMPTY_FORM,
    BrauerClass,
    DiagonalForm,
    Infeasible,
    OddDimension,
    WittInvariants,
    clifford_target,
    equivalent,
    hyperbolic_invariants,
    invariants_of,
    is_isotropic_global,
    is_isotropic_local,
    is_trivial_clifford,
    orthogonal_sum,
    peel_hyperbolic,
    realize_invariants,
    witt_split,
)


def rand_form(rng, max_dim=6):
    pool = [1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 15, -15,
            Fraction(1, 2), Fraction(-3, 2), Fraction(2, 3)]
    return DiagonalForm.make([rng.choice(pool) for _ in range(rng.randint(1, max_dim))])


def hasse_by_hand(entries):
    """Independent pairwise Hilbert-symbol oracle."""
    ram = set()
    for v in bad_places(entries):
        prod = 1
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                prod *= hilbert_symbol(entries[i], entries[j], v)
        if prod == -1:
            ram.add(v)
    return ram


def trivial_clifford_tuple(rng, disc):
    """A consistent trivial-Clifford tuple with the given disc, or None."""
    dim = rng.choice([2, 4, 6, 8])
    target = clifford_target(dim, disc)
    choices = []
    for s in range(dim + 1):
        u = WittInvariants(dim, disc, target, (dim - s, s))
        if not u.consistency_failures():
            choices.append(u)
    if not choices:
        return None
    u = rng.choice(choices)
    q = realize_invariants(u)
    assert isinstance(q, DiagonalForm)
    assert is_trivial_clifford(invariants_of(q))
    return u


class TestInvariants:
    def test_one_one(self):
        u = invariants_of(DiagonalForm.make([1, 1]))
        assert u.dim == 2 and u.disc == -1
        assert u.hasse.is_trivial()
        assert u.sig == (2, 0)

    def test_hyperbolic_plane(self):
        u = invariants_of(DiagonalForm.make([1, -1]))
        assert u.dim == 2 and u.disc == 1
        assert u.hasse.is_trivial()
        assert u.sig == (1, 1)

    def test_worked_trace_form(self):
        # the quartic trace form of the sqrt(2)-algebra at alpha = t/8
        entries = [2, -2, -1, -2]
        u = invariants_of(DiagonalForm.make(entries))
        assert u.dim == 4
        assert u.disc == -2
        assert u.sig == (1, 3)
        assert set(u.hasse.sorted_places()) == hasse_by_hand(entries) == {REAL, 2}

    def test_hasse_always_even(self):
        rng = random.Random(21)
        for _ in range(200):
            u = invariants_of(rand_form(rng))
            assert len(u.hasse.places) % 2 == 0
            assert not u.consistency_failures(), u

    def test_matches_pairwise_oracle(self):
        rng = random.Random(22)
        for _ in range(50):
            q = rand_form(rng)
            assert set(invariants_of(q).hasse.sorted_places()) == hasse_by_hand(q.entries)


class TestOrthogonalSum:
    def test_concat_agrees(self):
        rng = random.Random(23)
        for _ in range(200):
            a, b = rand_form(rng, 4), rand_form(rng, 4)
            joint = invariants_of(DiagonalForm.make(a.entries + b.entries))
            split = orthogonal_sum(invariants_of(a), invariants_of(b))
            assert equivalent(joint, split)

    def test_identity(self):
        rng = random.Random(24)
        u = invariants_of(rand_form(rng))
        assert equivalent(orthogonal_sum(u, EMPTY_FORM), u)
        assert equivalent(orthogonal_sum(EMPTY_FORM, u), u)

    def test_h4(self):
        u = orthogonal_sum(invariants_of(DiagonalForm.make([1, -1])),
                           invariants_of(DiagonalForm.make([1, -1])))
        assert u.dim == 4 and u.disc == 1 and u.sig == (2, 2)
        assert equivalent(u, hyperbolic_invariants(2))
        assert equivalent(u, invariants_of(DiagonalForm.make([1, -1, 1, -1])))


class TestClifford:
    def test_h2_trivial(self):
        assert is_trivial_clifford(invariants_of(DiagonalForm.make([1, -1])))

    def test_formula_evaluation(self):
        # n = 2 case: trivial iff w(q) equals the class of (-1, -disc)
        u = invariants_of(DiagonalForm.make([1, 1, 1, 1]))
        target = BrauerClass.from_symbol(-1, -Fraction(u.disc))
        assert is_trivial_clifford(u) == (u.hasse == target)
        assert not is_trivial_clifford(u)  # w = 0 but target is (-1,-1)

    def test_depends_only_on_invariants(self):
        u = invariants_of(DiagonalForm.make([1, 1]))
        v = invariants_of(DiagonalForm.make([2, 2]))
        assert equivalent(u, v)
        assert is_trivial_clifford(u) == is_trivial_clifford(v)

    def test_hyperbolic_always_trivial(self):
        for n in range(1, 8):
            assert is_trivial_clifford(hyperbolic_invariants(n))

    def test_odd_dimension_rejected(self):
        with pytest.raises(OddDimension):
            is_trivial_clifford(invariants_of(DiagonalForm.make([1, 1, 1])))

    def test_square_disc_composition(self):
        # if disc(q1) is a global square and both parts are trivial-Clifford,
        # the orthogonal sum is trivial-Clifford
        rng = random.Random(25)
        found = 0
        for _ in range(200):
            u1 = trivial_clifford_tuple(rng, disc=1)
            u2 = trivial_clifford_tuple(rng, disc=rng.choice([1, -1, 2, -3, 5, 6]))
            if u1 is None or u2 is None:
                continue
            found += 1
            assert is_trivial_clifford(orthogonal_sum(u1, u2))
        assert found >= 50

    def test_mod4_signature_relation(self):
        # equal real hasse entry + equal parity of s forces s1 = s2 mod 4
        for s1 in range(0, 20):
            for s2 in range(0, 20):
                if (s1 - s2) % 2:
                    continue
                if (s1 * (s1 - 1) // 2) % 2 == (s2 * (s2 - 1) // 2) % 2:
                    assert (s1 - s2) % 4 == 0


class TestEquivalence:
    def test_one_one_vs_two_two(self):
        assert equivalent(invariants_of(DiagonalForm.make([1, 1])),
                          invariants_of(DiagonalForm.make([2, 2])))

    def test_signature_blocks(self):
        assert not equivalent(invariants_of(DiagonalForm.make([1, 1])),
                              invariants_of(DiagonalForm.make([1, -1])))

    def test_permutation(self):
        assert equivalent(invariants_of(DiagonalForm.make([1, 7])),
                          invariants_of(DiagonalForm.make([7, 1])))


class TestIsotropy:
    def test_spec_examples(self):
        aniso = invariants_of(DiagonalForm.make([1, 1, -7]))
        assert hilbert_symbol(-1, 7, 7) == -1  # blocks isotropy at 7
        assert not is_isotropic_local(aniso, 7)
        assert not is_isotropic_global(aniso)
        assert is_isotropic_global(invariants_of(DiagonalForm.make([1, -1])))

    def test_definite_blocked_at_real_place(self):
        rng = random.Random(26)
        for _ in range(30):
            q = DiagonalForm.make([abs(e) for e in rand_form(rng).entries])
            u = invariants_of(q)
            assert not is_isotropic_local(u, REAL)
            assert not is_isotropic_global(u)

    def test_five_variables_indefinite(self):
        u = invariants_of(DiagonalForm.make([1, 2, 3, 5, -7]))
        assert is_isotropic_global(u)

    def test_local_matches_global(self):
        rng = random.Random(27)
        for _ in range(80):
            u = invariants_of(rand_form(rng))
            by_places = (u.sig[0] >= 1 and u.sig[1] >= 1 and u.dim >= 2
                         and all(is_isotropic_local(u, v)
                                 for v in bad_places([u.disc] + [Fraction(1)])
                                 + u.hasse.sorted_places() if v != REAL))
            if u.dim >= 3:
                assert is_isotropic_global(u) == by_places


class TestWittSplit:
    def test_h4(self):
        kernel, rank = witt_split(hyperbolic_invariants(2))
        assert rank == 2 and kernel.dim == 0
        assert equivalent(kernel, EMPTY_FORM)

    def test_anisotropic_untouched(self):
        u = invariants_of(DiagonalForm.make([1, 1, -7]))
        kernel, rank = witt_split(u)
        assert rank == 0 and equivalent(kernel, u)

    def test_one_plane(self):
        u = invariants_of(DiagonalForm.make([1, 1, -1, -7]))
        kernel, rank = witt_split(u)
        assert rank == 1 and kernel.dim == 2
        assert kernel.disc != 1  # dim-2 anisotropy criterion
        assert not is_isotropic_global(kernel)

    def test_kernel_always_anisotropic(self):
        rng = random.Random(28)
        for _ in range(60):
            u = invariants_of(rand_form(rng))
            kernel, rank = witt_split(u)
            assert not is_isotropic_global(kernel)
            # peeling is inverse to adding hyperbolic planes
            back = kernel
            for _ in range(rank):
                back = orthogonal_sum(back, hyperbolic_invariants(1))
            assert equivalent(back, u)


class TestRealize:
    def test_round_trip_simple(self):
        u = invariants_of(DiagonalForm.make([1, -1]))
        q = realize_invariants(u)
        assert isinstance(q, DiagonalForm)
        assert equivalent(invariants_of(q), u)

    def test_round_trip_random(self):
        rng = random.Random(29)
        for _ in range(500):
            u = invariants_of(rand_form(rng))
            q = realize_invariants(u)
            assert isinstance(q, DiagonalForm), (u, q)
            assert equivalent(invariants_of(q), u)

    def test_odd_hasse_infeasible(self):
        u = WittInvariants(4, 1, BrauerClass(frozenset([7])), (2, 2))
        out = realize_invariants(u)
        assert isinstance(out, Infeasible)
        assert "odd" in out.reason

    def test_dim2_constraint(self):
        # hyperbolic-plane locus: disc -1 at 7 and inf with ramified hasse there
        u = WittInvariants(2, -1, BrauerClass(frozenset([7, REAL])), (1, 1))
        out = realize_invariants(u)
        assert isinstance(out, Infeasible)

    def test_empty_form(self):
        q = realize_invariants(EMPTY_FORM)
        assert isinstance(q, DiagonalForm) and q.dim == 0

    def test_large_prime_hasse_target(self):
        from f4tori.places import square_class
        u = WittInvariants(2, square_class(Fraction(-101 * 103)),
                           BrauerClass(frozenset([101, 103])), (2, 0))
        q = realize_invariants(u)
        assert isinstance(q, DiagonalForm)
        assert equivalent(invariants_of(q), u)

    def test_symbol_solution_direct(self):
        # the congruence-guided search must hit arbitrary admissible targets
        from f4tori.quadforms import _symbol_solution
        cases = [
            (-1, frozenset([REAL, 2])),
            (3, frozenset([3, 5])),
            (-30, frozenset([2, 5])),
            (7, frozenset([7, 11])),
            (-1, frozenset([2, 7, 11, REAL])),
        ]
        for d0, targets in cases:
            for v in targets:
                from f4tori.places import is_square_local
                assert not is_square_local(d0, v)
            a = _symbol_solution(d0, targets)
            assert BrauerClass.from_symbol(a, d0).places == targets, (d0, targets)


class TestPeel:
    def test_peel_then_add(self):
        rng = random.Random(30)
        for _ in range(50):
            u = invariants_of(rand_form(rng, 5))
            if u.sig[0] < 1 or u.sig[1] < 1 or u.dim < 2:
                continue
            p = peel_hyperbolic(u)
            assert equivalent(orthogonal_sum(p, hyperbolic_invariants(1)), u)


class TestSerialization:
    def test_json_shape(self):
        u = invariants_of(DiagonalForm.make([1, 1, -7]))
        js = u.to_json()
        assert set(js) == {"dim", "disc", "hasse", "sig"}
        assert js["dim"] == 3 and js["sig"] == [2, 1]

    def test_diagonal_parse(self):
        q = DiagonalForm.parse("1,1,-7")
        assert q.entries == (1, 1, -7)
        q2 = DiagonalForm.parse("1/2, -3/4")
        assert q2.entries == (Fraction(1, 2), Fraction(-3, 4))
        with pytest.raises(ValueError):
            DiagonalForm.parse("1,0,2")
