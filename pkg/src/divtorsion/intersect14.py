"""Two quartic curves E_delta1, E_delta2 whose projective torsion images
share fourteen points.

Symbolic stage: pseudo-divide F~5(v, delta) by F~3(u, delta) in delta, which
leaves ``C1*delta + C0`` up to units; the resultant of C0 and C1 in v factors
as a signed power of two times ``u^204 (u^4 - 1)^36 P24(u)``.

Numeric stage: for a root u of P24, pick the common root v of C0(u, .) and
C1(u, .), solve F~3(u, delta) = 0 for delta1, delta2 and check that
``0, inf, +-1, +-i, +-u^(+-1), +-v^(+-1)`` all lie in both images.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .exactpoly import (
    MPoly,
    SYMBOL_INDEX,
    SYMBOLS,
    integer_normalize,
    monomial_content,
    mp_divexact,
    mp_pseudo_rem,
    mp_resultant,
    NotDivisible,
    symbols,
)
from .families import displayed_F3, displayed_F5, edelta_primitive
from .numroots import BigC, context, eval_coeffs_in, eval_complex, roots_univariate
from .report import Report

x, u, v, delta = symbols("x", "u", "v", "delta")

# the two remainder polynomials and the resultant factor, as displayed
C0_DISPLAY = (
    "u^{15}v^{10}-u^{14}v^{11}-u^{13}v^{12}+u^{16}v^{5}-u^{15}v^{6}-22u^{14}v^{7}-5u^{13}v^{8}"
    "+20u^{12}v^{9}+5u^{11}v^{10}-2u^{10}v^{11}+u^{9}v^{12}-5u^{14}v^{3}+5u^{13}v^{4}+32u^{12}v^{5}"
    "-5u^{11}v^{6}-12u^{10}v^{7}+5u^{9}v^{8}-5u^{7}v^{10}-u^{6}v^{11}+u^{13}+4u^{12}v-10u^{10}v^{3}"
    "-5u^{9}v^{4}-2u^{8}v^{5}+5u^{7}v^{6}-6u^{6}v^{7}-u^{3}v^{10}-u^{9}-5u^{6}v^{3}+8u^{4}v^{5}"
    "+u^{3}v^{6}+v^{5}"
)
C1_DISPLAY = (
    "u^{19}v^{10}-u^{18}v^{11}-u^{17}v^{12}+u^{20}v^{5}-u^{19}v^{6}-6u^{18}v^{7}-5u^{17}v^{8}"
    "+20u^{16}v^{9}+8u^{15}v^{10}-5u^{14}v^{11}-2u^{13}v^{12}-5u^{18}v^{3}+5u^{17}v^{4}+35u^{16}v^{5}"
    "+8u^{15}v^{6}-30u^{14}v^{7}-10u^{13}v^{8}-20u^{12}v^{9}-2u^{11}v^{10}+5u^{10}v^{11}-u^{9}v^{12}"
    "+u^{17}+4u^{16}v-16u^{15}v^{2}-25u^{14}v^{3}+10u^{13}v^{4}-14u^{12}v^{5}+2u^{11}v^{6}"
    "+30u^{10}v^{7}-5u^{9}v^{8}+8u^{7}v^{10}+u^{6}v^{11}+2u^{13}-4u^{12}v+25u^{10}v^{3}+5u^{9}v^{4}"
    "-10u^{8}v^{5}-8u^{7}v^{6}+6u^{6}v^{7}+u^{3}v^{10}+u^{9}+5u^{6}v^{3}-11u^{4}v^{5}-u^{3}v^{6}-v^{5}"
)
P24_COEFFS = (32, 1369, 18812, 90646, 18812, 1369, 32)
RESULTANT_SIGN = -1
RESULTANT_EXPONENTS = (48, 204, 36)

EXACT_POINTS = ("0", "inf", "1", "-1", "i", "-i")

_TERM = re.compile(r"([+-]?)(\d*)(?:u(?:\^\{(\d+)\})?)?(?:v(?:\^\{(\d+)\})?)?")


def parse_display(text: str) -> MPoly:
    """Read the compact ``u^{a}v^{b}`` notation of the displays."""
    terms: Dict[Tuple[int, ...], int] = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse display at {text[pos:pos + 20]!r}")
        sign, coeff, ue, ve = m.groups()
        body = m.group(0).lstrip("+-")
        has_u = "u" in body
        has_v = "v" in body
        c = int(coeff) if coeff else 1
        if sign == "-":
            c = -c
        e = (int(ue) if ue else (1 if has_u else 0), int(ve) if ve else (1 if has_v else 0))
        terms[e] = terms.get(e, 0) + c
        pos = m.end()
    return MPoly.from_terms({_UV(a, b): c for (a, b), c in terms.items()})


def _UV(a: int, b: int) -> Tuple[int, ...]:
    e = [0] * len(SYMBOLS)
    e[SYMBOL_INDEX["u"]] = a
    e[SYMBOL_INDEX["v"]] = b
    return tuple(e)


def P24_poly() -> MPoly:
    return sum((c * u ** (24 - 4 * i) for i, c in enumerate(P24_COEFFS)), MPoly())


class MismatchWithPaper(AssertionError):
    """A recomputed object differs from its displayed form."""


class DegenerateRoot(ArithmeticError):
    pass


class NoCommonV(ArithmeticError):
    pass


class VerificationFailed(AssertionError):
    def __init__(self, label: str, value: str):
        super().__init__(f"{label}: {value}")
        self.label = label
        self.value = value


def normalize_content(p: MPoly) -> Tuple[MPoly, Fraction, Tuple[int, ...]]:
    """Strip integer and monomial content; positive leading coefficient.

    Returns ``(q, scale, monomial)`` with ``p = scale * monomial * q``.
    """
    mono = monomial_content(p)
    m = MPoly.from_terms({mono: 1})
    q = mp_divexact(p, m)
    q, scale = integer_normalize(q)
    return q, scale, mono


@dataclass
class RemainderSystem:
    C0: MPoly
    C1: MPoly
    unit: MPoly
    scale0: MPoly
    scale1: MPoly

    def reconstruction_holds(self, F3: MPoly, F5: MPoly) -> bool:
        """``unit*F5(v) - (scale1*C1*delta + scale0*C0)`` is divisible by F3(u) in delta."""
        lhs = self.unit * F5 - (self.scale1 * self.C1 * delta + self.scale0 * self.C0)
        try:
            mp_divexact(lhs, F3)
        except NotDivisible:
            return False
        return True

    def to_json(self) -> dict:
        return {
            "C0": str(self.C0),
            "C1": str(self.C1),
            "unit": str(self.unit),
            "scale0": str(self.scale0),
            "scale1": str(self.scale1),
        }


def _F_in(poly_x_delta: MPoly, name: str) -> MPoly:
    return poly_x_delta.compose({"x": MPoly.var(name)})


def build_remainder_system(check: bool = True) -> RemainderSystem:
    F3 = edelta_primitive(3)
    F5 = edelta_primitive(5)
    if check and (F3 != displayed_F3() or F5 != displayed_F5()):
        raise MismatchWithPaper("F~3 or F~5 differs from its display")
    F3u = _F_in(F3, "u")
    F5v = _F_in(F5, "v")
    rem, unit = mp_pseudo_rem(F5v, F3u, "delta")
    parts = rem.coeffs_in("delta")
    if max(parts) > 1:
        raise ArithmeticError("remainder has degree above 1 in delta")
    R0 = parts.get(0, MPoly())
    R1 = parts.get(1, MPoly())
    C0, s0, m0 = normalize_content(R0)
    C1, s1, m1 = normalize_content(R1)
    rs = RemainderSystem(
        C0, C1, unit,
        MPoly.from_terms({m0: s0}),
        MPoly.from_terms({m1: s1}),
    )
    if check:
        if C0 != parse_display(C0_DISPLAY):
            raise MismatchWithPaper("C0 differs from its display")
        if C1 != parse_display(C1_DISPLAY):
            raise MismatchWithPaper("C1 differs from its display")
    return rs


@dataclass
class ResultantCertificate:
    full_resultant: MPoly
    cofactor_sign: int
    power_of_two: int
    u_power: int
    quartic_power: int
    P24: MPoly
    method: str = "bareiss"

    def to_json(self) -> dict:
        return {
            "sign": self.cofactor_sign,
            "power_of_two": self.power_of_two,
            "u_power": self.u_power,
            "quartic_power": self.quartic_power,
            "P24": str(self.P24),
            "method": self.method,
        }


def factor_resultant(res: MPoly, method: str = "bareiss") -> ResultantCertificate:
    mono = monomial_content(res)
    if any(k for i, k in enumerate(mono) if i != SYMBOL_INDEX["u"]):
        raise ArithmeticError("resultant has a monomial factor other than a power of u")
    upow = mono[SYMBOL_INDEX["u"]]
    rest = mp_divexact(res, u ** upow)
    q = u ** 4 - 1
    qpow = 0
    while True:
        try:
            rest = mp_divexact(rest, q)
        except NotDivisible:
            break
        qpow += 1
    prim, scale = integer_normalize(rest)
    if scale.denominator != 1:
        raise ArithmeticError("resultant has non-integer content")
    c = abs(scale.numerator)
    two = (c & -c).bit_length() - 1
    if c != 1 << two:
        raise MismatchWithPaper(f"integer content {c} is not a power of two")
    return ResultantCertificate(res, 1 if scale > 0 else -1, two, upow, qpow, prim, method)


def build_resultant_certificate(rs: RemainderSystem, method: str = "bareiss", check: bool = True) -> ResultantCertificate:
    res = mp_resultant(rs.C0, rs.C1, "v", method=method)
    cert = factor_resultant(res, method)
    if check:
        exps = (cert.power_of_two, cert.u_power, cert.quartic_power)
        if exps != RESULTANT_EXPONENTS:
            raise MismatchWithPaper(f"resultant exponents {exps} differ from {RESULTANT_EXPONENTS}")
        if cert.P24 != P24_poly():
            raise MismatchWithPaper("P24 differs from its display")
    return cert


# --------------------------------------------------------------------------
# numeric certificates


@dataclass
class IntersectionCertificate:
    u: BigC
    v: BigC
    delta1: BigC
    delta2: BigC
    points: List[object]
    residual_max: str
    precision_bits: int
    root_index: int = -1

    def to_json(self) -> dict:
        pts = [p if isinstance(p, str) else p.to_json() for p in self.points]
        return {
            "root_index": self.root_index,
            "u": self.u.to_json(),
            "v": self.v.to_json(),
            "delta1": self.delta1.to_json(),
            "delta2": self.delta2.to_json(),
            "points": pts,
            "residual_max": self.residual_max,
            "precision_bits": self.precision_bits,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> "IntersectionCertificate":
        if isinstance(obj, str):
            obj = json.loads(obj)
        pts = [p if isinstance(p, str) else BigC.from_json(p) for p in obj["points"]]
        return cls(
            u=BigC.from_json(obj["u"]),
            v=BigC.from_json(obj["v"]),
            delta1=BigC.from_json(obj["delta1"]),
            delta2=BigC.from_json(obj["delta2"]),
            points=pts,
            residual_max=obj["residual_max"],
            precision_bits=int(obj["precision_bits"]),
            root_index=int(obj.get("root_index", -1)),
        )


def tolerance(prec: int):
    """Acceptance threshold ``10^(-0.6 * decimal digits)``."""
    digits = prec * math.log10(2)
    return context(prec).mpf(10) ** (-0.6 * digits)


class _Symbolic:
    """The exact ingredients shared by every certificate."""

    _inst = None

    def __init__(self):
        self.rs = build_remainder_system()
        self.F = {n: edelta_primitive(n) for n in (3, 4, 5, 6, 10)}

    @classmethod
    def get(cls) -> "_Symbolic":
        if cls._inst is None:
            cls._inst = cls()
        return cls._inst


_P24_ROOTS: Dict[int, List[BigC]] = {}


# Stored numbers carry this many bits beyond the nominal precision: the
# degree-36 F~10 amplifies input rounding by roughly 2^55 near 1/v.
CERT_GUARD_BITS = 32


def sorted_P24_roots(prec: int) -> List[BigC]:
    """Roots of P24 sorted by (real, imag) after rounding to ``prec/2`` bits.

    The roots themselves carry ``prec + CERT_GUARD_BITS`` bits.
    """
    if prec not in _P24_ROOTS:
        rs = roots_univariate(P24_poly(), prec + CERT_GUARD_BITS)
        half = context(prec // 2)

        def key(r):
            return (half.mpf(r.re), half.mpf(r.im))

        _P24_ROOTS[prec] = sorted(rs.roots, key=key)
    return _P24_ROOTS[prec]


# (label, n, expression) for the eight points that depend on u and v
MEMBERSHIP = (
    ("u", 3, "u"), ("-u", 6, "-u"), ("1/u", 6, "1/u"), ("-1/u", 6, "-1/u"),
    ("v", 5, "v"), ("-v", 10, "-v"), ("1/v", 10, "1/v"), ("-1/v", 10, "-1/v"),
)


def _point_value(ctx, expr: str, U, V):
    base = U if "u" in expr else V
    val = 1 / base if expr.lstrip("-").startswith("1/") else base
    return -val if expr.startswith("-") else val


def _exact_point(ctx, label: str):
    return {"0": ctx.mpc(0), "1": ctx.mpc(1), "-1": ctx.mpc(-1), "i": ctx.mpc(0, 1), "-i": ctx.mpc(0, -1)}[label]


def _residuals(sym: _Symbolic, U, V, d1, d2, prec: int) -> List[Tuple[str, object]]:
    ctx = context(prec)
    U, V = U.to_mpc(ctx), V.to_mpc(ctx)
    out = []
    for lab, n, expr in MEMBERSHIP:
        pt = BigC.from_value(_point_value(ctx, expr, U, V), prec)
        for j, d in ((1, d1), (2, d2)):
            val = eval_complex(sym.F[n], {"x": pt, "delta": d}, prec)
            out.append((f"F~{n}({lab}, delta{j})", abs(val)))
    for lab in ("0", "1", "-1", "i", "-i"):
        pt = BigC.from_value(_exact_point(ctx, lab), prec)
        for j, d in ((1, d1), (2, d2)):
            val = eval_complex(sym.F[4], {"x": pt, "delta": d}, prec)
            out.append((f"F~4({lab}, delta{j})", abs(val)))
    return out


def _quadratic_roots(ctx, U):
    a = 2 * U ** 3
    b = U ** 4 - 1
    c = -2 * U
    disc = ctx.sqrt(b * b - 4 * a * c)
    return (-b + disc) / (2 * a), (-b - disc) / (2 * a)


def _sort_key(ctx_half, z):
    return (ctx_half.mpf(z.real), ctx_half.mpf(z.imag))


def build_certificate(root_index: int, precision_bits: int = 384) -> IntersectionCertificate:
    if not 0 <= root_index < 24:
        raise ValueError("root_index must be in 0..23")
    sym = _Symbolic.get()
    prec = precision_bits
    work = prec + CERT_GUARD_BITS
    ctx = context(work)
    tol = tolerance(prec)
    U = sorted_P24_roots(prec)[root_index].to_mpc(ctx)
    u4 = U ** 4
    for bad, label in ((u4, "u^4 = 0"), (u4 - 1, "u^4 = 1"), (u4 ** 2 + 14 * u4 + 1, "u^8 + 14u^4 + 1 = 0")):
        if abs(bad) < tol:
            raise DegenerateRoot(label)

    uB = BigC.from_value(U, work)
    C0v = eval_coeffs_in(sym.rs.C0, "v", {"u": uB}, work)
    vroots = roots_univariate(C0v, work).roots
    scored = []
    for r in vroots:
        c1 = eval_complex(sym.rs.C1, {"u": uB, "v": r}, work)
        scored.append((abs(c1), r))
    best_abs, best = min(scored, key=lambda t: t[0])
    if best_abs > tol:
        raise NoCommonV(f"min |C1(u, v)| = {context(64).nstr(best_abs, 5)}")
    V = best.to_mpc(ctx)

    half = context(prec // 2)
    d1, d2 = sorted(_quadratic_roots(ctx, U), key=lambda z: _sort_key(half, z))
    res = _residuals(sym, uB, best, BigC.from_value(d1, work), BigC.from_value(d2, work), work)
    rmax = max(r for _, r in res)
    if rmax > tol:
        worst = max(res, key=lambda t: t[1])
        raise VerificationFailed(worst[0], context(64).nstr(worst[1], 5))

    numeric = []
    for _, _, expr in MEMBERSHIP:
        numeric.append(BigC.from_value(_point_value(ctx, expr, U, V), work))
    cert = IntersectionCertificate(
        u=BigC.from_value(U, work),
        v=BigC.from_value(V, work),
        delta1=BigC.from_value(d1, work),
        delta2=BigC.from_value(d2, work),
        points=list(EXACT_POINTS) + numeric,
        residual_max=_upper_decimal(rmax),
        precision_bits=prec,
        root_index=root_index,
    )
    return cert


def _upper_decimal(x) -> str:
    """A short decimal string not below ``x``."""
    if x == 0:
        return "0"
    ctx = context(64)
    e = int(ctx.floor(ctx.log10(x)))
    m = ctx.ceil(x / ctx.mpf(10) ** (e - 2))
    return f"{int(m) / 100:.2f}e{e}"


def verify_certificate(cert: IntersectionCertificate) -> Report:
    """Re-check a certificate at twice its precision.

    Raises :class:`VerificationFailed` on the first failing check; returns
    a report listing every check otherwise.
    """
    sym = _Symbolic.get()
    prec = 2 * cert.precision_bits
    ctx = context(prec)
    tol = tolerance(cert.precision_bits)
    U, V = cert.u.to_mpc(ctx), cert.v.to_mpc(ctx)
    d1, d2 = cert.delta1.to_mpc(ctx), cert.delta2.to_mpc(ctx)
    rep = Report(f"certificate {cert.root_index}")

    def need(label, ok, value):
        rep.add(label, ok)
        if not ok:
            raise VerificationFailed(label, context(64).nstr(value, 5) if not isinstance(value, str) else value)

    uB, vB = BigC.from_value(U, prec), BigC.from_value(V, prec)
    p24 = abs(eval_complex(P24_poly(), {"u": uB}, prec).to_mpc(ctx))
    need("P24(u) = 0", p24 < tol, p24)
    for name, poly in (("C0", sym.rs.C0), ("C1", sym.rs.C1)):
        val = abs(eval_complex(poly, {"u": uB, "v": vB}, prec).to_mpc(ctx))
        need(f"{name}(u, v) = 0", val < tol, val)
    res = _residuals(sym, uB, vB, BigC.from_value(d1, prec), BigC.from_value(d2, prec), prec)
    worst = max(res, key=lambda t: t[1])
    need("all membership residuals", worst[1] < tol, f"{worst[0]} = {context(64).nstr(worst[1], 5)}")
    claimed = ctx.mpf(cert.residual_max)
    slack = ctx.ldexp(1, -cert.precision_bits)
    need("recomputed residual within claimed bound", worst[1] <= 2 * claimed + slack, worst[1])

    vieta_p = abs(d1 * d2 + 1 / U ** 2)
    vieta_s = abs(d1 + d2 + (U ** 4 - 1) / (2 * U ** 3))
    need("delta1 * delta2 = -1/u^2", vieta_p < tol, vieta_p)
    need("delta1 + delta2 = -(u^4 - 1)/(2u^3)", vieta_s < tol, vieta_s)
    sep = min(abs(d1 - e) for e in (d2, -d2, 1 / d2, -1 / d2))
    need("delta1 not in {+-delta2^(+-1)}", sep > tol, sep)
    for j, d in ((1, d1), (2, d2)):
        dd = min(abs(d), abs(d ** 4 - 1))
        need(f"delta{j}^4 not in {{0, 1}}", dd > tol, dd)
    two1 = [-d1, 1 / d1, -1 / d1]
    two2 = [-d2, 1 / d2, -1 / d2]
    gap = min(abs(a - b) for a in two1 for b in two2)
    need("2-torsion images differ", gap > tol, gap)

    pts = []
    for p in cert.points:
        if isinstance(p, str):
            pts.append(None if p == "inf" else _exact_point(ctx, p))
        else:
            pts.append(p.to_mpc(ctx))
    need("14 points", len(pts) == 14, str(len(pts)))
    expected = [_point_value(ctx, e, U, V) for _, _, e in MEMBERSHIP]
    drift = max(abs(a - b) for a, b in zip(pts[6:], expected))
    need("listed points match u and v", drift < tol, drift)
    finite = [p for p in pts if p is not None]
    min_sep = min(abs(a - b) for i, a in enumerate(finite) for b in finite[i + 1 :])
    need("points pairwise distinct", min_sep > ctx.mpf(2) ** (-cert.precision_bits // 8) and len(finite) == 13, min_sep)
    return rep
