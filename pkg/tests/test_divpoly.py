from fractions import Fraction

import pytest

from divtorsion.arith import D
from divtorsion.divpoly import (
    LIFT,
    PSI_DISPLAYS,
    UNLIFT,
    DivPolyTable,
    lift,
    psi,
    unlift,
    verify_lattice,
    verify_psi_identities,
    verify_structure,
)
from divtorsion.exactpoly import MPoly, mp_divexact, symbols

x, y, a1, a3, b2, b4, b6, b8 = symbols("x", "y", "a1", "a3", "b2", "b4", "b6", "b8")

# y^2 + y = x^3 - x with the point (0, 0) of infinite order
CURVE = (0, 0, 1, -1, 0)
POINT = (Fraction(0), Fraction(0))


def _b_values(a):
    A1, A2, A3, A4, A6 = map(Fraction, a)
    B2 = A1 ** 2 + 4 * A2
    B4 = 2 * A4 + A1 * A3
    B6 = A3 ** 2 + 4 * A6
    B8 = A1 ** 2 * A6 + 4 * A2 * A6 - A1 * A3 * A4 + A2 * A3 ** 2 - A4 ** 2
    return {"a1": A1, "a2": A2, "a3": A3, "a4": A4, "a6": A6, "b2": B2, "b4": B4, "b6": B6, "b8": B8}


def _add(P, Q, a):
    A1, A2, A3, A4, A6 = map(Fraction, a)
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and y1 + y2 + A1 * x2 + A3 == 0:
        return None
    if x1 == x2:
        lam = (3 * x1 ** 2 + 2 * A2 * x1 + A4 - A1 * y1) / (2 * y1 + A1 * x1 + A3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam ** 2 + A1 * lam - A2 - x1 - x2
    y3 = -(lam + A1) * x3 - nu - A3
    return (x3, y3)


def _eval_psi(n, vals, P):
    if n == 0:
        return Fraction(0)
    rep = psi(n)
    env = dict(vals, x=P[0], y=P[1])
    body = rep.body.compose({k: MPoly.const(v) for k, v in env.items()}).constant_value()
    if rep.has_psi2_factor:
        body *= 2 * P[1] + vals["a1"] * P[0] + vals["a3"]
    return body


def test_initial_values_verbatim():
    for n, want in PSI_DISPLAYS.items():
        assert str(psi(n)) == want


def test_initial_values_from_transcribed_display():
    assert psi(3).body == 3 * x ** 4 + b2 * x ** 3 + 3 * b4 * x ** 2 + 3 * b6 * x + b8
    assert psi(4).body == (
        2 * x ** 6 + b2 * x ** 5 + 5 * b4 * x ** 4 + 10 * b6 * x ** 3 + 10 * b8 * x ** 2
        + (b2 * b8 - b4 * b6) * x + (b4 * b8 - b6 ** 2)
    )


@pytest.mark.parametrize("n", range(2, 8))
def test_multiplication_formula_against_group_law(n):
    vals = _b_values(CURVE)
    nP = None
    for _ in range(n):
        nP = _add(nP, POINT, CURVE)
    p_prev, p_n, p_next = (_eval_psi(k, vals, POINT) for k in (n - 1, n, n + 1))
    assert nP[0] == POINT[0] - p_prev * p_next / p_n ** 2


def test_degrees_and_monic_forms():
    t = DivPolyTable()
    for n in range(2, 11):
        assert t.f_poly(n).degree("x") == n * n - 1
        F = t.primitive_F(n)
        assert F.degree("x") == D(n)
        assert F.coeffs_in("x")[D(n)] == 1


def test_primitive_F3():
    assert str(DivPolyTable().primitive_F(3)) == "x^4 + 1/3*b2*x^3 + b4*x^2 + b6*x + 1/12*b2*b6 + -1/12*b4^2"


def test_f_from_psi_squared_without_slice():
    # route 1: square the free-b8 psi and eliminate b8; route 2: the lifted slice
    t = DivPolyTable()
    psi2_sq = 4 * x ** 3 + b2 * x ** 2 + 2 * b4 * x + b6
    b8_val = (b2 * b6 - b4 ** 2) / 4
    for n in (3, 4, 5, 6):
        rep = t.psi(n)
        sq = rep.body ** 2 * (psi2_sq if rep.has_psi2_factor else 1)
        sq = sq.compose({"b8": b8_val}) / (n * n)
        assert sq == t.f_poly(n)


def test_lift_and_unlift_are_inverse():
    p = x ** 3 * b4 + b6 ** 2 - 7 * x
    assert unlift(lift(p)) == p
    assert set(LIFT) == set(UNLIFT)


def test_divisibility_lattice_small():
    t = DivPolyTable()
    for n in range(2, 13):
        for m in range(2, n):
            if n % m == 0:
                mp_divexact(t.f_poly(n), t.f_poly(m))
    assert verify_lattice(12, t).passed


def test_verification_reports_small():
    assert verify_structure(12).passed
    assert verify_psi_identities(12).passed


def test_cache_round_trip(tmp_path):
    path = str(tmp_path / "cache.tsv")
    t = DivPolyTable(path)
    want = {(k, n): str(getattr(t, m)(n)) for k, m in (("psi", "psi"), ("f", "f_poly"), ("F", "primitive_F")) for n in (3, 4, 6)}
    t.save()
    t2 = DivPolyTable(path)
    assert t2.cached_keys()
    assert str(t2.primitive_F(6)) == want[("F", 6)]
    assert str(t2.psi(4)) == want[("psi", 4)]
    assert t2.cache_hits >= 2
    assert t2.check_cache().passed
    lines = open(path).read().splitlines()
    assert all(len(line.split("\t")) == 3 for line in lines)


def test_corrupt_cache_is_rejected(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("F\t3\tx^4 + + 1\n")
    with pytest.raises(ValueError):
        DivPolyTable(str(path))
