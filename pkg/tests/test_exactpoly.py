from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from divtorsion.exactpoly import (
    SYMBOLS,
    DivisionByZero,
    MPoly,
    NotASquare,
    NotDivisible,
    RatFunc,
    bareiss_det,
    integer_normalize,
    monomial_content,
    mp_coeff,
    mp_divexact,
    mp_primitive_part,
    mp_pseudo_rem,
    mp_resultant,
    mp_sqrt_exact,
    mp_subst,
    symbols,
    sylvester_matrix,
)

x, y, a1, a3, b2, b4, b6, u, v, delta = symbols("x", "y", "a1", "a3", "b2", "b4", "b6", "u", "v", "delta")


def _mono(**kw):
    e = [0] * len(SYMBOLS)
    for k, val in kw.items():
        e[SYMBOLS.index(k)] = val
    return tuple(e)


small_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 2)),
    st.fractions(min_value=-20, max_value=20, max_denominator=6),
    max_size=5,
)


def _poly(d):
    return MPoly.from_terms({_mono(x=i, b4=j, u=k): c for (i, j, k), c in d.items()})


def _naive_mul(d1, d2):
    out = {}
    for e1, c1 in d1.items():
        for e2, c2 in d2.items():
            e = tuple(p + q for p, q in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _naive_add(d1, d2):
    out = dict(d1)
    for e, c in d2.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


@given(small_terms, small_terms)
@settings(max_examples=60, deadline=None)
def test_arithmetic_matches_dictionary_reference(d1, d2):
    p, q = _poly(d1), _poly(d2)
    assert p * q == _poly(_naive_mul(d1, d2))
    assert p + q == _poly(_naive_add(d1, d2))
    assert p - p == MPoly()


@given(small_terms)
@settings(max_examples=60, deadline=None)
def test_canonical_text_round_trip(d):
    p = _poly(d)
    assert MPoly.parse(str(p)) == p
    assert str(MPoly.parse(str(p))) == str(p)


@given(small_terms, small_terms)
@settings(max_examples=40, deadline=None)
def test_divexact_inverts_multiplication(d1, d2):
    p, q = _poly(d1), _poly(d2)
    if q.is_zero():
        return
    assert mp_divexact(p * q, q) == p


@given(small_terms)
@settings(max_examples=40, deadline=None)
def test_sqrt_of_square(d):
    p = _poly(d)
    if p.is_zero():
        return
    r = mp_sqrt_exact(p * p)
    assert r * r == p * p
    assert r == p or r == -p


def test_canonical_printing():
    assert str(MPoly()) == "0"
    assert str(3 * x ** 4 + b2 * x ** 3 - b4 * b6 * x) == "3*x^4 + b2*x^3 + -1*b4*b6*x"
    assert str(a1 * x + 2 * y + a3) == "a1*x + 2*y + a3"
    assert str(Fraction(1, 12) * b2 * b6 - x) == "1/12*b2*b6 + -1*x"


def test_strict_parse_rejects_noncanonical():
    with pytest.raises(ValueError):
        MPoly.parse("b2*x^3 + 3*x^4")
    with pytest.raises(ValueError):
        MPoly.parse("1*x")
    assert MPoly.parse("b2*x^3 + 3*x^4", strict=False) == 3 * x ** 4 + b2 * x ** 3
    assert MPoly.parse("-x", strict=False) == -x


def test_structure_queries():
    p = 3 * x ** 4 * b4 + x * b6 ** 2 + 7
    assert p.degree("x") == 4
    assert p.degree("b6") == 2
    assert p.total_degree() == 5
    assert set(p.symbols()) == {"x", "b4", "b6"}
    assert p.coeffs_in("x") == {4: 3 * b4, 1: b6 ** 2, 0: MPoly.const(7)}
    assert mp_coeff(p, {"x": 4}) == 3 * b4
    assert p.weight({"x": 1, "b4": 2, "b6": 3}) == {6, 7, 0}


def test_divexact_failure_reports_monomial():
    with pytest.raises(NotDivisible):
        mp_divexact(x ** 2 + 1, x - 1)
    with pytest.raises(DivisionByZero):
        mp_divexact(x, MPoly())
    with pytest.raises(NotASquare):
        mp_sqrt_exact(x ** 2 + 1)


def test_pseudo_remainder():
    rem, unit = mp_pseudo_rem(x ** 2 + 1, 2 * x - 2, "x")
    assert (rem, unit) == (MPoly.const(8), MPoly.const(4))
    p = delta ** 3 * u + delta * v + 1
    q = u * delta ** 2 + v
    rem, unit = mp_pseudo_rem(p, q, "delta")
    assert rem.degree("delta") < 2
    mp_divexact(unit * p - rem, q)


def test_resultant_two_routes():
    assert mp_resultant(x ** 2 + 1, x - 1, "x") == 2
    assert mp_resultant(x - a1, x - a3, "x") == a1 - a3
    p = u * x ** 3 + v * x + 1
    q = x ** 2 - u * v
    assert mp_resultant(p, q, "x", "bareiss") == mp_resultant(p, q, "x", "flint")


def test_bareiss_against_cofactor_expansion():
    m = [[MPoly.const(c) for c in row] for row in ((2, 3, 1), (4, 1, 5), (0, 6, 7))]

    def det(rows):
        if len(rows) == 1:
            return rows[0][0]
        return sum(((-1) ** j * rows[0][j] * det([r[:j] + r[j + 1:] for r in rows[1:]]) for j in range(len(rows))), MPoly())

    assert bareiss_det(m) == det(m)
    sm = sylvester_matrix(x ** 2 + b4, x + b6, "x")
    assert len(sm) == 3


def test_content_helpers():
    p = 6 * u ** 3 * v - 4 * u ** 2 * v ** 2
    q, scale = integer_normalize(p)
    assert scale == 2 and q * 2 == p
    assert monomial_content(p) == _mono(u=2, v=1)
    prim, content = mp_primitive_part((delta ** 2 + 1) * (x - delta), "x")
    assert prim * content == (delta ** 2 + 1) * (x - delta)
    assert prim.degree("x") == 1 and content.degree("x") == 0


def test_subst_rational():
    r = mp_subst(x ** 2 + b4, {"x": RatFunc(MPoly.const(1), delta), "b4": delta})
    assert r == RatFunc(delta ** 3 + 1, delta ** 2)


def test_ratfunc_normalization():
    r = RatFunc(2 * x, -4 * x * delta)
    assert r.den.leading_coefficient() > 0
    assert r == RatFunc(MPoly.const(-1), 2 * delta)
    assert str(RatFunc.parse(str(r))) == str(r)
    assert (RatFunc(x) / RatFunc(x)) == 1
    with pytest.raises(ZeroDivisionError):
        RatFunc(x, MPoly())
