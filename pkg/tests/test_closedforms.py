from fractions import Fraction

import pytest

from divtorsion.closedforms import (
    ClosedFormEval,
    closed_forms,
    extract_coefficients,
    initial_values,
    injectivity_probe,
    injectivity_tuple,
    mckee_coeffs,
    mckee_direct,
    recurrence_identities,
    small_c,
    verify_against_polys,
)

# closed forms at n = 7, frozen after agreeing with coefficients read off F_7
N7 = {
    "c100": "4", "c010": "44", "c001": "1972/7", "C100": "2", "C010": "22",
    "C001": "986/7", "C020": "-211/2", "C011": "-2", "C002": "-383", "C030": "-709/2",
}


def test_frozen_values_n7():
    cf = closed_forms(7).to_json()
    assert (cf["d"], cf["D"], cf["I"]) == (48, 24, 1)
    for k, v in N7.items():
        assert cf[k] == v


@pytest.mark.parametrize("n", range(2, 11))
def test_closed_forms_equal_extracted(n):
    cf = closed_forms(n)
    got = extract_coefficients(n)
    for name in ClosedFormEval.COEFFS:
        assert got[name] == getattr(cf, name), name


def test_n2_from_psi2_squared():
    # f_2 = psi_2^2 / 4 = x^3 + b2/4 x^2 + b4/2 x + b6/4
    cf = closed_forms(2)
    assert (cf.c100, cf.c010, cf.c001) == (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4))
    assert cf.C020 == cf.C011 == cf.C002 == cf.C030 == 0


def test_report_helpers():
    assert verify_against_polys(8).passed
    assert initial_values().passed
    assert recurrence_identities(20).passed


def test_small_c_vanishes_at_one():
    assert small_c(1) == (0, 0, 0)


def test_mckee_against_known_psi5():
    # psi_5 of y^2 = x^3 + a x + b has 62 a x^10 and 380 b x^9; here b4 = 2a and b6 = 4b
    t = mckee_coeffs(5).entries
    assert t[(0, 0)] == 5 and t[(1, 0)] == 31 and t[(0, 1)] == 95


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11, 13])
def test_mckee_recurrence_equals_direct(n):
    assert mckee_coeffs(n).entries == mckee_direct(n).entries


def test_mckee_rejects_even():
    with pytest.raises(ValueError):
        mckee_coeffs(4)


def test_injectivity():
    assert injectivity_tuple(6) == (12, Fraction(-15, 44), Fraction(-6, 55), Fraction(-111, 3025))
    # D(5) = D(6) yet the tuples differ
    assert injectivity_tuple(5) != injectivity_tuple(6)
    rep = injectivity_probe(120)
    assert rep.passed and rep.data["collisions"] == []
