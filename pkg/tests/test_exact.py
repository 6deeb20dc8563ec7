"""Exact scalar types: normal forms, arithmetic closure, conversions."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from eprod.exact import ComplexRational, ExactTerm, IncompatibleTermError, SqrtTerm

mp.dps = 40


def test_exact_term_normal_form_pulls_two_out():
    # 2**(5/2) must normalize to 4 * 2**(1/2)
    t = ExactTerm(Fraction(1), 0, 5)
    assert t.two_half_power in (0, 1)
    assert t.to_mpf(30) == mpf(2) ** mpf("2.5")


def test_exact_term_constructors_and_predicates():
    assert ExactTerm.zero().is_zero
    assert ExactTerm.one().is_rational
    assert ExactTerm.from_rational(Fraction(3, 7)).to_mpf(30) == mpf(3) / 7
    assert ExactTerm(Fraction(-2), 1, 0).sign() == -1
    assert ExactTerm(Fraction(2), 1, 1).sign() == 1


def test_exact_term_arithmetic_against_mpmath():
    a = ExactTerm(Fraction(3, 4), 1, 1)   # 3/4 sqrt(pi) sqrt(2)
    b = ExactTerm(Fraction(-2, 5), 1, 0)  # -2/5 sqrt(pi)
    with mp.workdps(40):
        fa = mpf(3) / 4 * mp.sqrt(mp.pi) * mp.sqrt(2)
        fb = mpf(-2) / 5 * mp.sqrt(mp.pi)
        assert abs((a * b).to_mpf(40) - fa * fb) < mpf("1e-38")
        assert abs((a / b).to_mpf(40) - fa / fb) < mpf("1e-38")
        assert abs((a + a).to_mpf(40) - 2 * fa) < mpf("1e-38")
        assert abs((a - a).to_mpf(40)) == 0


def test_exact_term_addition_needs_matching_signature():
    a = ExactTerm(Fraction(1), 1, 0)
    b = ExactTerm(Fraction(1), 2, 0)
    with pytest.raises(IncompatibleTermError):
        a + b


def test_exact_term_comparisons():
    a = ExactTerm(Fraction(1), 1, 0)
    b = ExactTerm(Fraction(2), 1, 0)
    assert b > a
    assert a < b
    assert a != b
    assert ExactTerm(Fraction(1), 0, 2) == ExactTerm(Fraction(2))
    # opposite signs order regardless of the irrational parts
    assert ExactTerm(Fraction(-1), 2, 1) < ExactTerm(Fraction(1), 1, 0)
    # same sign, different irrational parts: no exact order exists
    with pytest.raises(IncompatibleTermError):
        ExactTerm(Fraction(2)) > ExactTerm(Fraction(1), 1, 0)


@given(
    st.fractions(max_denominator=50),
    st.integers(min_value=-4, max_value=4),
    st.integers(min_value=-4, max_value=4),
    st.fractions(max_denominator=50),
    st.integers(min_value=-4, max_value=4),
    st.integers(min_value=-4, max_value=4),
)
@settings(max_examples=60, deadline=None)
def test_exact_term_product_matches_float_route(n1, p1, q1, n2, p2, q2):
    a = ExactTerm(n1, p1, q1)
    b = ExactTerm(n2, p2, q2)
    with mp.workdps(40):
        want = a.to_mpf(40) * b.to_mpf(40)
        got = (a * b).to_mpf(40)
        assert abs(got - want) <= mpf("1e-35") * max(1, abs(want))


def test_sqrt_term_square_collapses():
    s = SqrtTerm(Fraction(3, 2), Fraction(5), -1)  # 3/2 sqrt(5) pi^(-1/4)
    sq = s.square()
    assert isinstance(sq, ExactTerm)
    with mp.workdps(40):
        want = (mpf(3) / 2) ** 2 * 5 / mp.sqrt(mp.pi)
        assert abs(sq.to_mpf(40) - want) < mpf("1e-37")


def test_sqrt_term_key_invariance():
    # sqrt(8) = 2 sqrt(2): same value, same identity
    assert SqrtTerm(Fraction(1), Fraction(8)) == SqrtTerm(Fraction(2), Fraction(2))
    assert hash(SqrtTerm(Fraction(1), Fraction(8))) == hash(
        SqrtTerm(Fraction(2), Fraction(2))
    )


def test_sqrt_term_addition_within_square_ratio():
    a = SqrtTerm(Fraction(1), Fraction(2))
    b = SqrtTerm(Fraction(1), Fraction(8))
    total = a + b
    with mp.workdps(40):
        assert abs(total.to_mpf(40) - 3 * mp.sqrt(2)) < mpf("1e-37")
    with pytest.raises(IncompatibleTermError):
        a + SqrtTerm(Fraction(1), Fraction(3))


def test_sqrt_term_multiplication():
    a = SqrtTerm(Fraction(2), Fraction(3), 1)
    b = SqrtTerm(Fraction(1, 2), Fraction(12), 1)
    prod = a * b
    with mp.workdps(40):
        want = (2 * mp.sqrt(3) * mp.pi ** mpf("0.25")) * (
            mpf(1) / 2 * mp.sqrt(12) * mp.pi ** mpf("0.25")
        )
        assert abs(prod.to_mpf(40) - want) < mpf("1e-36")


def test_sqrt_term_from_exact_term_round_trip():
    t = ExactTerm(Fraction(-3, 2), 2, 1)
    s = SqrtTerm.from_exact_term(t)
    assert s.to_exact_term() == t


def test_complex_rational_algebra():
    z = ComplexRational(Fraction(1, 2), Fraction(-3))
    w = ComplexRational(Fraction(2), Fraction(1))
    assert z + w == ComplexRational(Fraction(5, 2), Fraction(-2))
    assert z * w == ComplexRational(Fraction(4), Fraction(-11, 2))
    assert -z == ComplexRational(Fraction(-1, 2), Fraction(3))
    assert z.conjugate() == ComplexRational(Fraction(1, 2), Fraction(3))
    assert ComplexRational(Fraction(7)).is_real
    assert ComplexRational(Fraction(7)) == Fraction(7) == 7
    assert ComplexRational(Fraction(1), Fraction(2)) == 1 + 2j


def test_complex_rational_string_forms():
    assert str(ComplexRational(Fraction(1, 2))) == "1/2"
    assert str(ComplexRational(Fraction(0), Fraction(1))) == "i"
    assert str(ComplexRational(Fraction(0), Fraction(-1))) == "-i"
    assert str(ComplexRational(Fraction(0), Fraction(5, 2))) == "5/2i"
    assert str(ComplexRational(Fraction(2), Fraction(-3))) == "2-3i"


def test_complex_rational_mixes_with_mpmath():
    z = ComplexRational(Fraction(1), Fraction(1))
    with mp.workdps(40):
        prod = z * mpf(2)
        assert prod == mp.mpc(2, 2)
        back = mpf(2) * z
        assert back == mp.mpc(2, 2)
        assert abs(z.as_mpc(40) - mp.mpc(1, 1)) == 0
