import random
from fractions import Fraction

import pytest

from f4tori.albert import (
    DEFAULT_SEED,
    REPORTED_ALBERT_SIGNATURES,
    TRIALITY_VARIANT,
    AlbertElement,
    CompositionElement,
    RealCompositionSignature,
    RealFormF4,
    TorusParameter,
    UnrecognizedSignature,
    ZeroLambda,
    albert_cross,
    albert_inner,
    albert_q,
    check_composition_axioms,
    diag_action,
    embed_l,
    embed_m,
    eta,
    generator_dets,
    generator_is_isometry,
    jordan,
    mu_l,
    mu_l_intrinsic,
    mu_m_intrinsic,
    q_comp,
    q_comp_bilinear,
    q_comp_intrinsic,
    real_form_from_signature,
    star_square,
    torus_generator,
    triality_variant_search,
)
from f4tori.octonion import Octonion, mat8_identity, mat8_mul


def rand_oct(rng):
    return Octonion.from_coords(
        [Fraction(rng.randint(-3, 3), rng.choice([1, 2])) for _ in range(8)])


def rand_albert(rng):
    return AlbertElement.make([rng.randint(-3, 3) for _ in range(3)],
                              [rand_oct(rng) for _ in range(3)])


class TestJordan:
    def test_unit_acts_trivially(self):
        rng = random.Random(10)
        e = AlbertElement.unit()
        for _ in range(30):
            x = rand_albert(rng)
            assert jordan(e, x).coords() == x.coords()

    def test_commutative(self):
        rng = random.Random(11)
        for _ in range(30):
            x, y = rand_albert(rng), rand_albert(rng)
            assert jordan(x, y).coords() == jordan(y, x).coords()

    def test_diagonal_times_offdiagonal(self):
        # xi * c = ((xi2+xi3)c1, (xi1+xi3)c2, (xi1+xi2)c3) / 2
        rng = random.Random(12)
        for _ in range(30):
            l = tuple(Fraction(rng.randint(-5, 5)) for _ in range(3))
            m = tuple(rand_oct(rng) for _ in range(3))
            got = diag_action(l, m)
            want = (m[0] * ((l[1] + l[2]) / 2),
                    m[1] * ((l[0] + l[2]) / 2),
                    m[2] * ((l[0] + l[1]) / 2))
            assert tuple(o.coords() for o in got) == tuple(o.coords() for o in want)

    def test_m_times_m_diagonal_part(self):
        # L-part of the product of two off-diagonal elements, first slot:
        # <c3, c3'> + <c2, c2'>-type entries after symmetrization
        rng = random.Random(13)
        from f4tori.octonion import oct_inner
        for _ in range(20):
            m1 = tuple(rand_oct(rng) for _ in range(3))
            m2 = tuple(rand_oct(rng) for _ in range(3))
            z = jordan(embed_m(m1), embed_m(m2))
            expect0 = Fraction(1, 2) * (oct_inner(m1[2], m2[2]) + oct_inner(m1[1], m2[1]))
            assert z.xi[0] == expect0

    def test_trace_identity(self):
        rng = random.Random(14)
        e = AlbertElement.unit()
        for _ in range(30):
            l = tuple(rng.randint(-6, 6) for _ in range(3))
            assert albert_inner(embed_l(l), e) == sum(l)

    def test_q_restricted_to_slots_is_norm(self):
        rng = random.Random(15)
        z = Octonion.zero()
        for _ in range(20):
            c = rand_oct(rng)
            assert albert_q(embed_m((c, z, z))) == c.norm()
            assert albert_q(embed_m((z, c, z))) == c.norm()


class TestCross:
    def test_symmetric(self):
        rng = random.Random(16)
        for _ in range(20):
            x, y = rand_albert(rng), rand_albert(rng)
            assert albert_cross(x, y).coords() == albert_cross(y, x).coords()

    def test_e_cross_e(self):
        # direct expansion: e o e - (3/2)e - (3/2)e - (3/2)e + (9/2)e = e
        e = AlbertElement.unit()
        assert albert_cross(e, e).coords() == e.coords()

    def test_bilinear_q_via_cross(self):
        rng = random.Random(17)
        for _ in range(30):
            m1 = tuple(rand_oct(rng) for _ in range(3))
            m2 = tuple(rand_oct(rng) for _ in range(3))
            assert q_comp_bilinear(m1, m2) == q_comp_intrinsic(m1, m2)


class TestComposition:
    def test_closed_formulas_match_projections(self):
        rng = random.Random(18)
        for _ in range(50):
            l1 = tuple(Fraction(rng.randint(-4, 4)) for _ in range(3))
            l2 = tuple(Fraction(rng.randint(-4, 4)) for _ in range(3))
            m = tuple(rand_oct(rng) for _ in range(3))
            assert mu_l(l1, l2) == mu_l_intrinsic(l1, l2)
            got = star_square(m)
            want = mu_m_intrinsic(m, m)
            assert tuple(o.coords() for o in got) == tuple(o.coords() for o in want)

    def test_q_comp_quadratic_vs_bilinear(self):
        rng = random.Random(19)
        for _ in range(20):
            m = tuple(rand_oct(rng) for _ in range(3))
            assert q_comp_bilinear(m, m) == tuple(2 * v for v in q_comp(m))

    def test_eta_unit(self):
        rng = random.Random(20)
        m = tuple(rand_oct(rng) for _ in range(3))
        assert tuple(o.coords() for o in eta((1, 1, 1), m)) == tuple(o.coords() for o in m)

    def test_star_square_with_two_zero_slots(self):
        rng = random.Random(21)
        u = rand_oct(rng)
        z = Octonion.zero()
        out = star_square((u, z, z))
        assert all(o.is_zero() for o in out)

    def test_star_square_norm_pattern(self):
        # c = (u, v, 0): q(c^*2) = (0, 0, N(u)N(v))
        rng = random.Random(22)
        u, v = rand_oct(rng), rand_oct(rng)
        z = Octonion.zero()
        assert q_comp(star_square((u, v, z))) == (0, 0, u.norm() * v.norm())

    def test_axioms_default_seed(self):
        rep = check_composition_axioms(60)
        assert rep["passed"] and rep["trials"] == 60 and rep["seed"] == DEFAULT_SEED

    def test_axioms_vacuous(self):
        rep = check_composition_axioms(0)
        assert rep["passed"] and "warning" in rep

    def test_axiom_eq4_unit_l(self):
        rng = random.Random(23)
        m = tuple(rand_oct(rng) for _ in range(3))
        lhs = eta((1, 1, 1), star_square(eta((1, 1, 1), m)))
        rhs = star_square(m)
        assert tuple(o.coords() for o in lhs) == tuple(o.coords() for o in rhs)

    def test_corruption_hook_reports_counterexample(self):
        rep = check_composition_axioms(50, _corrupt_star_square=True)
        assert not rep["passed"]
        assert rep["failed"] == "star-square"
        assert "counterexample" in rep


class TestTorusGenerators:
    def test_lambda_one_is_identity(self):
        for kind in ("r", "s"):
            triple = torus_generator(TorusParameter.make(1, kind))
            assert all(g == mat8_identity() for g in triple)

    def test_zero_lambda_rejected(self):
        with pytest.raises(ZeroLambda):
            TorusParameter.make(0, "r")

    def test_isometry_and_det_one(self):
        rng = random.Random(24)
        for _ in range(10):
            lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            for kind in ("r", "s"):
                triple = torus_generator(TorusParameter.make(lam, kind))
                assert generator_is_isometry(triple)
                assert generator_dets(triple) == (1, 1, 1)

    def test_homomorphism_in_lambda(self):
        for kind in ("r", "s"):
            a = torus_generator(TorusParameter.make(2, kind))
            b = torus_generator(TorusParameter.make(3, kind))
            ab = torus_generator(TorusParameter.make(6, kind))
            for g, h, gh in zip(a, b, ab):
                assert mat8_mul(g, h) == gh

    def test_r_and_s_commute(self):
        r = torus_generator(TorusParameter.make(2, "r"))
        s = torus_generator(TorusParameter.make(5, "s"))
        for g, h in zip(r, s):
            assert mat8_mul(g, h) == mat8_mul(h, g)

    def test_generic_fixed_space_trivial_on_m(self):
        # the element r_2 s_3 fixes nothing on any of the three octonion slots
        from f4tori.octonion import mat8_det
        r2 = torus_generator(TorusParameter.make(2, "r"))
        s3 = torus_generator(TorusParameter.make(3, "s"))
        for g, h in zip(r2, s3):
            combined = mat8_mul(g, h)
            diff = [[combined[i][j] - (1 if i == j else 0) for j in range(8)]
                    for i in range(8)]
            assert mat8_det(diff) != 0

    def test_triality_variant(self):
        found = triality_variant_search()
        assert found == [TRIALITY_VARIANT]

    def test_isometry_fifty_lambdas(self):
        rng = random.Random(26)
        seen = set()
        while len(seen) < 50:
            seen.add(Fraction(rng.randint(1, 40), rng.randint(1, 40)))
        for lam in sorted(seen):
            for kind in ("r", "s"):
                triple = torus_generator(TorusParameter.make(lam, kind))
                assert generator_is_isometry(triple)

    def test_triples_are_jordan_automorphisms(self):
        # the three slot maps assemble to an automorphism of the whole
        # 27-dimensional algebra that fixes the diagonal pointwise
        from f4tori.octonion import mat8_vec

        def apply_triple(triple, x):
            cs = [Octonion.from_coords(mat8_vec(g, c.coords()))
                  for g, c in zip(triple, x.c)]
            return AlbertElement.make(x.xi, cs)

        rng = random.Random(27)
        for lam in (2, 3, Fraction(1, 2)):
            for kind in ("r", "s"):
                triple = torus_generator(TorusParameter.make(lam, kind))
                for _ in range(4):
                    x, y = rand_albert(rng), rand_albert(rng)
                    lhs = apply_triple(triple, jordan(x, y))
                    rhs = jordan(apply_triple(triple, x), apply_triple(triple, y))
                    assert lhs.coords() == rhs.coords()


class TestRealForms:
    def test_reported_signatures(self):
        assert REPORTED_ALBERT_SIGNATURES[RealFormF4.SPLIT] == (15, 12)
        assert REPORTED_ALBERT_SIGNATURES[RealFormF4.RANK1] == (10, 17)
        assert REPORTED_ALBERT_SIGNATURES[RealFormF4.ANISOTROPIC] == (27, 0)

    def test_five_cases(self):
        rrr = RealCompositionSignature.make
        assert real_form_from_signature(rrr("RRR", [(4, 4)] * 3)) == RealFormF4.SPLIT
        assert real_form_from_signature(rrr("RRR", [(8, 0)] * 3)) == RealFormF4.ANISOTROPIC
        assert real_form_from_signature(
            rrr("RRR", [(8, 0), (0, 8), (0, 8)])) == RealFormF4.RANK1
        assert real_form_from_signature(rrr("RC", [(5, 3)])) == RealFormF4.SPLIT
        assert real_form_from_signature(rrr("RC", [(7, 1)])) == RealFormF4.RANK1
        assert real_form_from_signature(rrr("RC", [(1, 7)])) == RealFormF4.RANK1

    def test_factor_order_irrelevant(self):
        a = RealCompositionSignature.make("RRR", [(0, 8), (8, 0), (0, 8)])
        assert real_form_from_signature(a) == RealFormF4.RANK1

    def test_unrecognized(self):
        with pytest.raises(UnrecognizedSignature):
            real_form_from_signature(
                RealCompositionSignature.make("RRR", [(0, 8), (0, 8), (0, 8)]))
        with pytest.raises(UnrecognizedSignature):
            real_form_from_signature(RealCompositionSignature.make("RC", [(4, 4)]))
        with pytest.raises(UnrecognizedSignature):
            RealCompositionSignature.make("RRR", [(5, 4), (4, 4), (4, 4)])
        with pytest.raises(UnrecognizedSignature):
            RealCompositionSignature.make("RC", [(4, 4), (4, 4)])

    def test_totals(self):
        assert RealCompositionSignature.make("RRR", [(4, 4)] * 3).total() == (15, 12)
        assert RealCompositionSignature.make("RRR", [(8, 0)] * 3).total() == (27, 0)
        assert RealCompositionSignature.make("RC", [(5, 3)]).total() == (15, 12)


def test_composition_element_container():
    rng = random.Random(25)
    ce = CompositionElement.make([1, 2, 3], [rand_oct(rng) for _ in range(3)])
    assert ce.l == (1, 2, 3)
    assert len(ce.m) == 3
