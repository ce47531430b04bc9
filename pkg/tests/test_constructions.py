import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3twist.constructions import (COUNTER_B, GAP_PAIRS, check_gap_on_period, example_counter_report,
                                   extract_functionals, fm_partner_family, gap_expansion,
                                   gap_isometry, hodge_check, match_twist, match_twist_integral,
                                   random_period, verify_gap)
from k3twist.errors import InputError, SearchExhausted
from k3twist.hodge import Period
from k3twist.mukai import (K3_RANK, MukaiVector, generator_exp, generator_i, identity_isometry,
                           isometry_from_matrix, k3_dot, k3_vector, random_word)

ZERO = (0,) * K3_RANK


class TestGap:
    def test_accepts_positive_plane(self):
        g = gap_isometry(k3_vector(e1=1, e2=1), k3_vector(f1=1, f2=1))
        assert isometry_from_matrix(g.matrix) == g

    def test_rejects_isotropic(self):
        with pytest.raises(InputError, match="positive plane"):
            gap_isometry(k3_vector(e1=1), k3_vector(f1=1, f2=1))

    def test_expansion_degree_zero(self):
        b0, b1 = GAP_PAIRS[0]
        g = gap_isometry(b0, b1)
        p = Period(k3_vector(e1=1, e2=1), k3_vector(f1=1, f2=1))
        img = g.apply(MukaiVector.degree2(p.x1))
        assert img.r == -k3_dot(b0, p.x1)
        assert (img.r, img.c, img.s) == gap_expansion(b0, b1, p.x1)

    def test_orthogonal_to_b0_still_leaves(self):
        b0, b1 = GAP_PAIRS[0]
        # x is orthogonal to B0 but not to B1, so only degree 4 survives
        p = Period(k3_vector(f1=1, f2=1), k3_vector(g1=1, g2=1))
        assert k3_dot(b0, p.x1) == 0 and k3_dot(b0, p.x2) == 0
        assert check_gap_on_period(gap_isometry(b0, b1), p, b0, b1) == (True, True)

    @pytest.mark.parametrize("pair", GAP_PAIRS)
    def test_random_periods(self, pair):
        rep = verify_gap(gap_isometry(*pair), 100, 3, *pair)
        assert rep.passed and rep.passes == 100

    def test_random_period_valid(self):
        rng = random.Random(0)
        for _ in range(50):
            p = random_period(rng)
            assert p.norm > 0


class TestFunctionals:
    def test_exp(self):
        b0 = k3_vector(e1=1, a3=2)
        assert extract_functionals(generator_exp(b0)) == (b0, ZERO)

    def test_i(self):
        assert extract_functionals(generator_i()) == (ZERO, ZERO)

    def test_i_after_exp(self):
        b0 = k3_vector(e1=1, a1=1)
        b1, b2 = extract_functionals(generator_i() @ generator_exp(b0))
        assert b1 == ZERO and b2 == tuple(-x for x in b0)


class TestMatch:
    def test_exp(self):
        b0 = k3_vector(e1=1)
        m = match_twist(generator_exp(b0))
        assert m.B == b0 and m.x == m.y and m.certified

    def test_i_after_exp(self):
        b0 = k3_vector(e1=1, a1=1)
        m = match_twist(generator_i() @ generator_exp(b0))
        assert m.B == ZERO and m.x == m.y
        assert k3_dot(m.x.x1, b0) == 0 and k3_dot(m.x.x2, b0) == 0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 8))
    def test_random_words(self, seed, length):
        g = random_word(seed, length)
        m = match_twist(g)
        assert m.certified
        assert m.y.norm == m.x.norm
        assert hodge_check(g, m) == (1, 0)


class TestIntegralMatch:
    def test_exp_in_first_block(self):
        b0 = k3_vector(e1=1)
        m = match_twist_integral(generator_exp(b0))
        assert m.x.x1 == k3_vector(f1=1, f2=1)
        assert m.x.x2 == k3_vector(g1=1, g2=1)
        assert m.B == b0

    def test_identity(self):
        m = match_twist_integral(identity_isometry())
        assert m.B == ZERO and m.certified
        assert m.x.norm == 2

    def test_random_words_integral(self):
        done = 0
        for seed in range(20):
            g = random_word(seed, 4)
            try:
                m = match_twist_integral(g)
            except SearchExhausted:
                continue
            done += 1
            assert all(x.denominator == 1 for x in m.B)
            assert hodge_check(g, m) == (1, 0)
        assert done > 0


class TestPartners:
    def test_two_primes(self):
        rep = fm_partner_family(2)
        assert rep.t.gram == ((144, 0), (0, 144))
        assert [e["disc"] for e in rep.entries] == [256, 1296]
        assert [e["index"] for e in rep.entries] == [9, 4]
        assert [e["cokernel_factors"] for e in rep.entries] == [[3, 3], [2, 2]]
        assert rep.passed

    def test_one_prime(self):
        rep = fm_partner_family(1)
        assert rep.primes == (2,) and rep.passed

    def test_bounds(self):
        with pytest.raises(InputError):
            fm_partner_family(0)


class TestCounter:
    def test_report(self):
        rep = example_counter_report(z_max=200)
        assert rep.passed, rep.failures()
        assert COUNTER_B == tuple(Fraction(x, 5) for x in k3_vector(e1=1, e2=1))
