import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3twist import exactlin as xl
from k3twist.errors import InputError, NotAnIsometry
from k3twist.mukai import (MUKAI_GRAM, ZERO_C, MukaiVector, cup, dual, embed_lambda_isometry,
                           euler_pairing, exp_b, exp_class, exp_matrix, generator_exp,
                           generator_i, generator_j, identity_isometry, isometry_from_matrix,
                           k3_dot, k3_vector, minus_id, pairing, random_integral_class,
                           random_lattice_word, random_word, reflection, standard_vectors,
                           twisted_character)


def mv(r, c, s):
    return MukaiVector(r, c, s)


E1, E2 = k3_vector(e1=1), k3_vector(e2=1)
OMEGA = k3_vector(g1=1, g2=1)
COUNTER_B = tuple(Fraction(x, 5) for x in k3_vector(e1=1, e2=1))

small_frac = st.fractions(min_value=-3, max_value=3, max_denominator=6)


@st.composite
def k3_classes(draw):
    vals = draw(st.lists(small_frac, min_size=4, max_size=4))
    idx = draw(st.lists(st.integers(0, 21), min_size=4, max_size=4))
    c = [Fraction(0)] * 22
    for i, x in zip(idx, vals):
        c[i] += x
    return tuple(c)


@st.composite
def mukai_vectors(draw):
    return mv(draw(small_frac), draw(k3_classes()), draw(small_frac))


class TestPairing:
    def test_examples(self):
        assert pairing(mv(1, ZERO_C, 1), mv(1, ZERO_C, 1)) == -2
        assert pairing(mv(0, E1, 0), mv(0, E2, 0)) == 1
        assert pairing(mv(1, ZERO_C, 0), mv(0, ZERO_C, 1)) == -1

    def test_cup_examples(self):
        unit = mv(1, ZERO_C, 0)
        v = mv(3, E1, -2)
        assert cup(unit, v) == v
        assert cup(mv(0, E1, 0), mv(0, E2, 0)) == mv(0, ZERO_C, 1)

    @settings(max_examples=80, deadline=None)
    @given(k3_classes(), k3_classes())
    def test_exp_is_multiplicative(self, b0, b1):
        total = tuple(x + y for x, y in zip(b0, b1))
        assert cup(exp_class(b0), exp_class(b1)) == exp_class(total)


class TestExp:
    def test_examples(self):
        assert exp_b(E1, mv(1, ZERO_C, 0)) == mv(1, E1, 0)
        assert exp_b(COUNTER_B, mv(0, ZERO_C, 5)) == mv(0, ZERO_C, 5)
        assert exp_b(COUNTER_B, mv(5, ZERO_C, 0)) == mv(5, k3_vector(e1=1, e2=1), Fraction(1, 5))

    @settings(max_examples=100, deadline=None)
    @given(k3_classes(), mukai_vectors(), mukai_vectors())
    def test_preserves_pairing(self, b, v, w):
        assert pairing(exp_b(b, v), exp_b(b, w)) == pairing(v, w)
        assert exp_b(b, exp_b(tuple(-x for x in b), v)) == v
        assert exp_b(b, v) == cup(exp_class(b), v)

    def test_thousand_random_pairings(self):
        rng = random.Random(11)
        for _ in range(1000):
            b = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 6)) if rng.random() < 0.2 else 0
                      for _ in range(22))
            v = mv(rng.randint(-3, 3), random_integral_class(rng), rng.randint(-3, 3))
            w = mv(rng.randint(-3, 3), random_integral_class(rng), rng.randint(-3, 3))
            assert pairing(exp_b(b, v), exp_b(b, w)) == pairing(v, w)

    def test_rational_matrix_preserves_form(self):
        m = exp_matrix(COUNTER_B)
        assert xl.matmul(xl.matmul(xl.transpose(m), MUKAI_GRAM), m) == MUKAI_GRAM


class TestDualAndEuler:
    def test_dual(self):
        assert dual(mv(1, ZERO_C, 1)) == mv(1, ZERO_C, 1)
        assert dual(mv(0, E1, 0)) == mv(0, tuple(-x for x in E1), 0)

    @given(mukai_vectors())
    def test_involution(self, v):
        assert dual(dual(v)) == v

    def test_euler_oracle(self):
        sv = standard_vectors(OMEGA)
        o, pt = sv["O"], sv["k(x)"]
        assert euler_pairing(o, o) == 2
        assert euler_pairing(o, pt) == 1
        assert euler_pairing(pt, pt) == 0

    def test_standard_vectors(self):
        sv = standard_vectors(OMEGA)
        assert sv["O"] == mv(1, ZERO_C, 1)
        assert sv["k(x)"] == mv(0, ZERO_C, 1)
        assert sv["O_H"] == mv(0, OMEGA, -1)
        line = standard_vectors(OMEGA, E1)["L"]
        assert line == mv(1, E1, 1)

    @settings(max_examples=60, deadline=None)
    @given(mukai_vectors(), mukai_vectors())
    def test_euler_symmetric(self, v, w):
        assert euler_pairing(v, w) == euler_pairing(w, v)


class TestTwistedCharacter:
    def test_zero_field(self):
        v = mv(2, E1, 3)
        assert twisted_character(ZERO_C, v) == v

    def test_integral_field_is_line_twist(self):
        v = mv(2, E2, 3)
        assert twisted_character(E1, v) == cup(exp_class(E1), v)

    @settings(max_examples=60, deadline=None)
    @given(k3_classes(), k3_classes(), mukai_vectors(), mukai_vectors())
    def test_multiplicative(self, b1, b2, v, w):
        total = tuple(x + y for x, y in zip(b1, b2))
        lhs = cup(twisted_character(b1, v), twisted_character(b2, w))
        assert lhs == twisted_character(total, cup(v, w))

    @settings(max_examples=60, deadline=None)
    @given(k3_classes(), mukai_vectors(), mukai_vectors())
    def test_additive(self, b, v, w):
        assert twisted_character(b, v + w) == twisted_character(b, v) + twisted_character(b, w)


class TestIsometries:
    def test_construction(self):
        assert isometry_from_matrix(xl.identity(24)) == identity_isometry()
        assert isometry_from_matrix(exp_matrix(E1)) == generator_exp(E1)
        bad = [list(r) for r in xl.identity(24)]
        bad[23][23] = 2
        with pytest.raises(NotAnIsometry, match="not preserved"):
            isometry_from_matrix(bad)

    def test_involutions(self):
        i, j = generator_i(), generator_j()
        assert i @ i == identity_isometry()
        assert j @ j == identity_isometry()
        assert minus_id() @ minus_id() == identity_isometry()
        assert i.apply(mv(1, ZERO_C, 0)) == mv(0, ZERO_C, -1)

    def test_rejects_rational_exp(self):
        with pytest.raises(InputError):
            generator_exp(COUNTER_B)

    def test_group_law_and_commutation(self):
        rng = random.Random(3)
        j = generator_j()
        for _ in range(50):
            b0, b1 = random_integral_class(rng), random_integral_class(rng)
            total = tuple(x + y for x, y in zip(b0, b1))
            assert generator_exp(b0) @ generator_exp(b1) == generator_exp(total)
            assert generator_exp(b0) @ j == j @ generator_exp(tuple(-x for x in b0))
            h = random_lattice_word(rng, 3)
            g = embed_lambda_isometry(h)
            assert g @ generator_exp(b0) == generator_exp(h.apply(b0)) @ g

    def test_inverse(self):
        g = random_word(5, 6)
        assert g @ g.inverse() == identity_isometry()

    def test_reflection(self):
        r = reflection(k3_vector(e1=1, e2=-1))
        assert r @ r == identity_isometry("k3")
        v = k3_vector(e1=1, e2=-1)
        assert r.apply(v) == tuple(-x for x in v)

    def test_random_word(self):
        assert random_word(0, 0) == identity_isometry()
        # seed 39 happens to draw exp(e1) as its single letter
        g = random_word(39, 1)
        assert g.word == ("exp(e1)",)
        assert g == generator_exp(E1)
        assert random_word(17, 5) == random_word(17, 5)

    def test_thousand_words_verify(self):
        for seed in range(1000):
            g = random_word(seed, 3)
            isometry_from_matrix(g.matrix)

    def test_pairing_preserved_by_words(self):
        rng = random.Random(2)
        g = random_word(8, 5)
        for _ in range(20):
            v = mv(rng.randint(-3, 3), random_integral_class(rng), rng.randint(-3, 3))
            w = mv(rng.randint(-3, 3), random_integral_class(rng), rng.randint(-3, 3))
            assert pairing(g.apply(v), g.apply(w)) == pairing(v, w)
            assert k3_dot(v.c, w.c) - v.r * w.s - v.s * w.r == pairing(v, w)
