"""Three explicit curve families and their projective torsion images.

* the Hesse cubics ``x^3 + y^3 + z^3 = 3*lambda*x*y*z``;
* the quartics ``E_delta: y^2 = x^4 - (delta^2 + 1/delta^2) x^2 + 1`` with
  origin ``(delta, 0)`` and projection ``(x, y) -> x``;
* Klein's family ``E_{s,t}: y^2 = x^3 - 3 P20(s,t) x + 2 P30(s,t)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .arith import D
from .curves import SingularCurve, WeierstrassCurve
from .divpoly import DivPolyTable, default_table
from .exactpoly import MPoly, RatFunc, mp_primitive_part, mp_subst, symbols
from .numroots import BigC, context, roots_univariate
from .report import Report

x, delta, s, t = symbols("x", "delta", "s", "t")


class SingularParameter(ValueError):
    """The family member at this parameter is singular."""


@dataclass(frozen=True)
class Gauss:
    """Exact Gaussian rational ``re + im*i``."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return {1: "i", -1: "-i"}.get(self.im, f"{self.im}*i")
        return f"{self.re} + {self.im}*i"

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INF"

    __str__ = lambda self: "inf"


INF = _Infinity()

ProjValue = Union[Gauss, BigC, _Infinity]


@dataclass
class TorsionXSet:
    """Projective x-values of the points of exact order n.

    ``defining_poly`` has the finite values as roots; ``infinite`` counts the
    extra projective root at infinity coming from a degree deficit.
    """

    n: int
    values: List[ProjValue]
    defining_poly: Optional[MPoly] = None
    infinite: int = 0

    def to_json(self) -> dict:
        out = []
        for v in self.values:
            if isinstance(v, BigC):
                out.append(v.to_json())
            else:
                out.append(str(v))
        return {
            "n": self.n,
            "values": out,
            "defining_poly": str(self.defining_poly) if self.defining_poly is not None else None,
            "infinite": self.infinite,
        }


def _as_fraction(v) -> Optional[Fraction]:
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return None


# --------------------------------------------------------------------------
# Hesse family


def hesse_check_parameter(lmbda) -> None:
    q = _as_fraction(lmbda)
    if q is not None:
        if q ** 3 == 1:
            raise SingularParameter(f"lambda^3 = 1 at lambda = {q}")
        return
    ctx = context(128)
    z = BigC.from_value(lmbda, 128).to_mpc(ctx)
    if abs(z ** 3 - 1) < ctx.mpf(2) ** -100:
        raise SingularParameter("lambda^3 = 1")


def hesse_projection(lmbda, point, prec: int = 128):
    """``(z^2 - 3*lambda*x*y) / (x^2 - x*y + y^2)``; equals ``-(x+y)/z`` on the curve."""
    ctx = context(prec)
    X, Y, Z = (BigC.from_value(c, prec).to_mpc(ctx) for c in point)
    L = BigC.from_value(lmbda, prec).to_mpc(ctx)
    den = X * X - X * Y + Y * Y
    if den == 0:
        return INF
    return BigC.from_value((Z * Z - 3 * L * X * Y) / den, prec)


def hesse_two_torsion(lmbda, precision_bits: int = 128) -> TorsionXSet:
    """Roots of ``x^3 + 3*lambda*x^2 - 4``."""
    hesse_check_parameter(lmbda)
    q = _as_fraction(lmbda)
    if q is not None:
        poly = x ** 3 + 3 * q * x ** 2 - 4
        roots = roots_univariate(poly, precision_bits).roots
    else:
        poly = None
        L = BigC.from_value(lmbda, precision_bits)
        ctx = context(precision_bits)
        roots = roots_univariate([1, BigC.from_value(3 * L.to_mpc(ctx), precision_bits), 0, -4],
                                 precision_bits).roots
    return TorsionXSet(2, list(roots), poly, 0)


def hesse_three_torsion(precision_bits: int = 128) -> Tuple[List[Tuple], List[ProjValue]]:
    """The nine 3-torsion points and the images of the eight nonzero ones
    under ``-(x+y)/z``.  These are the same for every lambda."""
    ctx = context(precision_bits)
    rho = ctx.expjpi(ctx.mpf(2) / 3)
    pts = []
    for r in (1, rho, rho ** 2):
        pts.append((1, -r, 0))
        pts.append((0, 1, -r))
        pts.append((-r, 0, 1))
    images = []
    for P in pts[1:]:
        X, Y, Z = (ctx.mpc(c) for c in P)
        images.append(INF if Z == 0 else BigC.from_value(-(X + Y) / Z, precision_bits))
    return pts, images


# --------------------------------------------------------------------------
# the quartic family E_delta


def edelta_check_parameter(d) -> None:
    q = _as_fraction(d)
    if q is not None:
        if q ** 4 in (0, 1):
            raise SingularParameter(f"delta^4 in {{0, 1}} at delta = {q}")
        return
    ctx = context(128)
    z = BigC.from_value(d, 128).to_mpc(ctx)
    eps = ctx.mpf(2) ** -100
    if abs(z) < eps or abs(z ** 4 - 1) < eps:
        raise SingularParameter("delta^4 in {0, 1}")


@dataclass
class EdeltaData:
    delta: object
    two_torsion: TorsionXSet
    three_torsion_quartic: RatFunc
    four_torsion: TorsionXSet


FOUR_TORSION = [Gauss(Fraction(0)), INF, Gauss(Fraction(1)), Gauss(Fraction(-1)),
                Gauss(Fraction(0), Fraction(1)), Gauss(Fraction(0), Fraction(-1))]


def edelta_data(d) -> EdeltaData:
    """Images of the 2-, 3- and 4-torsion for ``E_delta``.

    ``d`` is a rational, a complex number or ``None`` for the symbol delta.
    """
    if d is None:
        dv = RatFunc(delta)
        # symbolic delta: the values -delta, 1/delta, -1/delta are the roots of this cubic
        two = TorsionXSet(2, [], (x + delta) * (delta * x - 1) * (delta * x + 1))
        quartic = RatFunc(x ** 4) + 2 * dv * RatFunc(x ** 3) - RatFunc(2 * x) / dv - 1
        return EdeltaData(None, two, quartic, TorsionXSet(4, list(FOUR_TORSION), x ** 5 - x, 1))
    edelta_check_parameter(d)
    q = _as_fraction(d)
    if q is not None:
        vals = [Gauss(-q), Gauss(1 / q), Gauss(-1 / q)]
        two = TorsionXSet(2, vals, (x + q) * (x - 1 / q) * (x + 1 / q))
        quartic = RatFunc(x ** 4 + 2 * q * x ** 3 - (2 / q) * x - 1)
    else:
        prec = d.prec if isinstance(d, BigC) else 128
        ctx = context(prec)
        z = BigC.from_value(d, prec).to_mpc(ctx)
        vals = [BigC.from_value(v, prec) for v in (-z, 1 / z, -1 / z)]
        two = TorsionXSet(2, vals, None)
        quartic = None
    return EdeltaData(d, two, quartic, TorsionXSet(4, list(FOUR_TORSION), x ** 5 - x, 1))


@dataclass(frozen=True)
class EdeltaModel:
    """``Y^2 = X (X - 1) (X - L)`` with ``L = (delta + 1/delta)^2 / 4`` and the
    birational map from ``E_delta``."""

    curve: WeierstrassCurve
    L: RatFunc
    X_map: RatFunc
    Y_map: RatFunc


def edelta_ns() -> EdeltaModel:
    dv = RatFunc(delta)
    L = (dv + 1 / dv) ** 2 / 4
    curve = WeierstrassCurve(0, -(1 + L), 0, L, 0)
    y = MPoly.var("y")
    X_map = RatFunc((delta ** 2 + 1) * (delta * x - 1), 2 * delta * (x - delta))
    Y_map = RatFunc((delta ** 4 - 1) * y, 4 * delta * (x - delta) ** 2)
    return EdeltaModel(curve, L, X_map, Y_map)


_EDELTA_CACHE: Dict[int, Tuple[MPoly, MPoly]] = {}


def edelta_primitive(n: int, table: Optional[DivPolyTable] = None, with_content: bool = False):
    """Pull back F_n of the nonsingular model to ``E_delta``.

    The result ``F~_n(x, delta)`` has coprime integer coefficients, no factor
    depending on delta alone, and a positive grlex-leading coefficient.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n not in _EDELTA_CACHE:
        tab = table or default_table()
        model = edelta_ns()
        L = model.L
        B2 = -4 * (1 + L)
        B4 = 2 * L
        # move through the b2 = 0 slice: F_n = g(x + b2/12, b4 - b2^2/24, b6 - b2 b4/6 + b2^3/216)
        shifted = {
            "x": model.X_map + B2 / 12,
            "b4": B4 - B2 ** 2 / 24,
            "b6": -B2 * B4 / 6 + B2 ** 3 / 216,
        }
        pulled = mp_subst(tab.slice_F(n), shifted)
        prim, content = mp_primitive_part(pulled.num, "x")
        _EDELTA_CACHE[n] = (prim, content)
    prim, content = _EDELTA_CACHE[n]
    return (prim, content) if with_content else prim


def edelta_torsion(n: int, d, precision_bits: int = 256) -> TorsionXSet:
    """Numeric projective values of ``pi_delta(E_delta^*[n])`` at a parameter."""
    edelta_check_parameter(d)
    Ft = edelta_primitive(n)
    dv = BigC.from_value(d, precision_bits)
    from .numroots import eval_coeffs_in

    coeffs = eval_coeffs_in(Ft, "x", {"delta": dv}, precision_bits)
    rs = roots_univariate(coeffs, precision_bits)
    deficit = D(n) - (len(coeffs) - 1)
    return TorsionXSet(n, list(rs.roots) + [INF] * deficit, Ft, deficit)


def displayed_F3() -> MPoly:
    return 2 * x ** 3 * delta ** 2 + (x ** 4 - 1) * delta - 2 * x


def displayed_F5() -> MPoly:
    return (
        8 * x ** 5 * delta ** 6
        - 4 * x ** 6 * (x ** 4 - 1) * delta ** 5
        - 2 * x ** 3 * (x ** 8 + 6 * x ** 4 + 5) * delta ** 4
        + (x ** 12 + 5 * x ** 8 - 5 * x ** 4 - 1) * delta ** 3
        + 2 * x * (5 * x ** 8 + 6 * x ** 4 + 1) * delta ** 2
        - 4 * x ** 2 * (x ** 4 - 1) * delta
        - 8 * x ** 7
    )


# --------------------------------------------------------------------------
# Klein's family


P20 = s ** 20 + 228 * s ** 15 * t ** 5 + 494 * s ** 10 * t ** 10 - 228 * s ** 5 * t ** 15 + t ** 20
P30 = (
    s ** 30 - 522 * s ** 25 * t ** 5 - 10005 * s ** 20 * t ** 10
    - 10005 * s ** 10 * t ** 20 + 522 * s ** 5 * t ** 25 + t ** 30
)


def klein_curve(sv, tv) -> WeierstrassCurve:
    vals = {"s": Fraction(sv), "t": Fraction(tv)}
    a4 = (-3 * P20).compose({k: MPoly.const(v) for k, v in vals.items()})
    a6 = (2 * P30).compose({k: MPoly.const(v) for k, v in vals.items()})
    try:
        return WeierstrassCurve(0, 0, 0, a4, a6)
    except SingularCurve:
        raise SingularParameter(f"E_(s,t) is singular at (s, t) = ({sv}, {tv})") from None


def klein_displayed_values(sv, tv, prec: int) -> Dict[str, object]:
    """The twelve displayed x-values, with omega = exp(2 pi i / 5) and
    sqrt(5) = 2 (omega + omega^4) + 1."""
    ctx = context(prec)
    S, T = ctx.mpf(Fraction(sv).numerator) / Fraction(sv).denominator, ctx.mpf(Fraction(tv).numerator) / Fraction(tv).denominator
    w = ctx.expjpi(ctx.mpf(2) / 5)
    r5 = 2 * (w + w ** 4) + 1
    out: Dict[str, object] = {}
    out["inf+"] = -((5 + 6 / r5) * S ** 10 - 66 / r5 * S ** 5 * T ** 5 + (5 - 6 / r5) * T ** 10)
    out["inf-"] = -((5 - 6 / r5) * S ** 10 + 66 / r5 * S ** 5 * T ** 5 + (5 + 6 / r5) * T ** 10)
    for k in range(5):
        wk = w ** k
        out[f"{k}+"] = (
            (S ** 10 + 30 * S ** 5 * T ** 5 + T ** 10)
            + (12 * S ** 9 * T + 24 * S ** 4 * T ** 6) * wk
            + (24 * S ** 8 * T ** 2 - 12 * S ** 3 * T ** 7) * wk ** 2
            + (36 * S ** 7 * T ** 3 + 12 * S ** 2 * T ** 8) * wk ** 3
            + 60 * S ** 6 * T ** 4 * wk ** 4
        )
        out[f"{k}-"] = (
            (S ** 10 - 30 * S ** 5 * T ** 5 + T ** 10)
            + (24 * S ** 6 * T ** 4 - 12 * S * T ** 9) * wk
            + (12 * S ** 7 * T ** 3 + 24 * S ** 2 * T ** 8) * wk ** 2
            + (12 * S ** 8 * T ** 2 - 36 * S ** 3 * T ** 7) * wk ** 3
            + 60 * S ** 4 * T ** 6 * wk ** 4
        )
    out["sqrt5"] = r5
    out["ctx"] = ctx
    return out


def klein_cross_ratio_closed(sv, tv, prec: int):
    ctx = context(prec)
    S, T = ctx.mpf(Fraction(sv).numerator) / Fraction(sv).denominator, ctx.mpf(Fraction(tv).numerator) / Fraction(tv).denominator
    w = ctx.expjpi(ctx.mpf(2) / 5)
    r5 = 2 * (w + w ** 4) + 1
    num = (S ** 2 - S * T + (3 - r5) / 2 * T ** 2) * (S ** 2 + (3 + r5) / 2 * S * T + (3 + r5) / 2 * T ** 2)
    return num / (r5 * S * T * (S ** 2 - S * T - T ** 2))


def klein_F5(sv, tv, table: Optional[DivPolyTable] = None) -> MPoly:
    """F_5 of ``E_{s,t}`` as a univariate polynomial in x."""
    klein_curve(sv, tv)
    tab = table or default_table()
    vals = {"s": MPoly.const(Fraction(sv)), "t": MPoly.const(Fraction(tv))}
    B4 = (-6 * P20).compose(vals)
    B6 = (8 * P30).compose(vals)
    return tab.slice_F(5).compose({"b4": B4, "b6": B6})


def _cross_ratio(xi_p, xi_m, x0_p, x0_m):
    return (xi_p - x0_m) * (x0_p - xi_m) / ((xi_p - xi_m) * (x0_p - x0_m))


def klein_check(sv, tv, precision_bits: int = 384, tol_exp: int = 40,
                table: Optional[DivPolyTable] = None) -> Report:
    """Match the roots of F_5 of ``E_{s,t}`` against the twelve displayed
    values and compare the cross ratio with its closed form."""
    F5 = klein_F5(sv, tv, table)
    rep = Report(f"klein ({sv}, {tv})")
    rs = roots_univariate(F5, precision_bits)
    disp = klein_displayed_values(sv, tv, precision_bits + 32)
    ctx = disp["ctx"]
    tol = ctx.mpf(10) ** (-tol_exp)
    labels = ["inf+", "inf-"] + [f"{k}{sgn}" for k in range(5) for sgn in "+-"]
    roots = [r.to_mpc(ctx) for r in rs.roots]
    unused = list(range(len(roots)))
    matched = {}
    worst = ctx.mpf(0)
    for lab in labels:
        v = disp[lab]
        j = min(unused, key=lambda i: abs(roots[i] - v))
        worst = max(worst, abs(roots[j] - v))
        matched[lab] = roots[j]
        unused.remove(j)
    rep.add("12 roots of F_5 match the displayed values", worst < tol, f"tolerance 1e-{tol_exp}")
    closed = klein_cross_ratio_closed(sv, tv, precision_bits + 32)
    scale = max(1, abs(closed))
    from_display = _cross_ratio(disp["inf+"], disp["inf-"], disp["0+"], disp["0-"])
    from_roots = _cross_ratio(matched["inf+"], matched["inf-"], matched["0+"], matched["0-"])
    rep.add("cross ratio of displayed values equals closed form", abs(from_display - closed) < tol * scale)
    rep.add("cross ratio of F_5 roots equals closed form", abs(from_roots - closed) < tol * scale)
    rep.data["cross_ratio"] = ctx.nstr(closed.real, 30)
    rep.data["max_distance"] = float(worst)
    return rep


def klein_nonconstant(p1, p2, precision_bits: int = 384) -> bool:
    ctx = context(precision_bits)
    a = klein_cross_ratio_closed(*p1, precision_bits)
    b = klein_cross_ratio_closed(*p2, precision_bits)
    return abs(a - b) > ctx.mpf(10) ** -10
