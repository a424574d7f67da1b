import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from divtorsion.exactpoly import MPoly, symbols
from divtorsion.numroots import (
    BigC,
    context,
    decimal_digits,
    eval_coeffs_in,
    eval_complex,
    roots_univariate,
)

x, u, v = symbols("x", "u", "v")


def test_cube_roots_of_four():
    rs = roots_univariate(x ** 3 - 4, 256)
    ctx = context(256)
    real = [r for r in rs.roots if abs(r.im) < ctx.ldexp(1, -200)]
    assert len(real) == 1
    assert abs(real[0].to_mpc(ctx) - ctx.cbrt(4)) < ctx.ldexp(1, -240)
    assert rs.source_degree == 3 and len(rs.roots) == 3


def test_roots_agree_with_mpmath_polyroots():
    coeffs = [1, -3, 0, 2, -7, 5]
    ours = roots_univariate(coeffs, 128).roots
    with mpmath.workdps(60):
        ref = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
    ctx = context(128)
    for r in ref:
        assert min(abs(o.to_mpc(ctx) - r) for o in ours) < 1e-25


def test_residual_bound_halves_with_doubled_precision():
    p = x ** 12 - 3 * x ** 7 + 5 * x - 11
    b1 = roots_univariate(p, 128).residual_bound
    b2 = roots_univariate(p, 256).residual_bound
    assert b2 <= b1 / 2
    assert isinstance(b1, Fraction) and b1 >= 0


def test_repeated_root_is_found_twice():
    rs = roots_univariate((x - 1) ** 2 * (x + 2), 128)
    ctx = context(128)
    near_one = [r for r in rs.roots if abs(r.to_mpc(ctx) - 1) < 1e-15]
    assert len(near_one) == 2


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6), st.sampled_from([64, 128, 300]))
@settings(max_examples=30, deadline=None)
def test_bigc_json_round_trip(a, b, prec):
    z = BigC.from_value(mpmath.mpc(a, b) / 7, prec)
    back = BigC.from_json(json.loads(json.dumps(z.to_json())))
    assert back == z


def test_eval_complex_matches_direct_formula():
    p = 3 * u ** 2 * v - u + 7 * v ** 3
    ctx = context(200)
    U, V = ctx.mpc(1, 2) / 3, ctx.mpc(-2, 0.5)
    got = eval_complex(p, {"u": U, "v": V}, 200).to_mpc(ctx)
    want = 3 * U ** 2 * V - U + 7 * V ** 3
    assert abs(got - want) < ctx.ldexp(1, -190)
    with pytest.raises(ValueError):
        eval_complex(p, {"u": U}, 200)


def test_eval_coeffs_in_order():
    p = u * v ** 2 + 3 * v - u ** 2
    cs = eval_coeffs_in(p, "v", {"u": 2}, 64)
    ctx = context(64)
    assert [c.to_mpc(ctx) for c in cs] == [2, 3, -4]


def test_decimal_digits():
    assert decimal_digits(384) == 118
