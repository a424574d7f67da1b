"""The full reproduction suite behind ``divtorsion verify-all``.

Every section is a :class:`Report`; nothing time- or cache-dependent goes
into the output, so repeated runs print identical text.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional

from .arith import jordan
from .closedforms import (
    initial_values,
    injectivity_probe,
    recurrence_identities,
    verify_against_polys,
    verify_mckee,
)
from .divpoly import (
    PSI_DISPLAYS,
    DivPolyTable,
    psi,
    verify_lattice,
    verify_psi_identities,
    verify_structure,
)
from .families import (
    INF,
    displayed_F3,
    displayed_F5,
    edelta_primitive,
    edelta_torsion,
    hesse_projection,
    hesse_two_torsion,
    klein_check,
    klein_nonconstant,
)
from .numroots import BigC, context, eval_complex
from .exactpoly import MPoly
from .report import Report
from .totientlab import D_collision_scan, collision_scan, prop20_scan

KLEIN_PARAMS = ((2, 1), (3, 1), (1, 2))

D_DISPLAYS = ([5, 6], [35, 40, 42], [55, 57, 62, 66])


def verify_divpoly(n_max: int = 20, table: Optional[DivPolyTable] = None) -> Report:
    rep = Report("division polynomials")
    for n, want in PSI_DISPLAYS.items():
        rep.add(f"psi_{n} display", str(psi(n, table)) == want)
    rep.extend(verify_structure(n_max, table), "structure: ")
    rep.extend(verify_lattice(n_max, table), "lattice: ")
    rep.extend(verify_psi_identities(n_max, table), "identities: ")
    return rep


def verify_closedforms(n_max: int = 16, mckee_max: int = 21, rec_max: int = 20,
                       probe_max: int = 500, table: Optional[DivPolyTable] = None) -> Report:
    rep = Report("closed forms")
    rep.extend(verify_against_polys(n_max, table), "coefficients: ")
    rep.extend(verify_mckee(mckee_max, table), "McKee: ")
    rep.extend(initial_values(table), "initial: ")
    rep.extend(recurrence_identities(rec_max), "recurrence: ")
    rep.extend(injectivity_probe(probe_max), "injectivity: ")
    return rep


def verify_totients() -> Report:
    rep = Report("Jordan totients")
    rep.add("J_1(15) = J_1(16) = 8", jordan(1, 15) == jordan(1, 16) == 8)
    rep.add("J_2(15) = J_2(16) = 192", jordan(2, 15) == jordan(2, 16) == 192)
    rep.add("J_3(28268) = J_3(28710) = 19764446869440",
            jordan(3, 28268) == jordan(3, 28710) == 19764446869440)
    j1 = collision_scan(1, 20).pairs()
    rep.add("J_1 scan to 20 puts 15 and 16 together", any({15, 16} <= set(ns) for ns in j1))
    rep.add("J_3 scan to 30000 finds [28268, 28710]", [28268, 28710] in collision_scan(3, 30000).pairs())
    rep.add("no J_4 collision up to 10^5", collision_scan(4, 10 ** 5).pairs() == [])
    dpairs = D_collision_scan(70).pairs()
    for ns in D_DISPLAYS:
        rep.add(f"D collision {ns}", ns in dpairs)
    for part, bound in (("A", 10 ** 6), ("B", 10 ** 4), ("C", 10 ** 4)):
        p = prop20_scan(part, bound)
        rep.add(f"arithmetic part {part} to {bound}: classes {[ns for _, ns in p.classes]}", p.passed)
    return rep


def _is_root(poly, value, d, prec: int, tol_bits: int) -> bool:
    ctx = context(prec)
    val = eval_complex(poly, {"x": value, "delta": d}, prec)
    return abs(val) < ctx.ldexp(1, -tol_bits)


def verify_families(precision_bits: int = 384) -> Report:
    rep = Report("families")
    rep.add("F~3 equals its display", edelta_primitive(3) == displayed_F3())
    rep.add("F~5 equals its display", edelta_primitive(5) == displayed_F5())
    x = MPoly.var("x")
    rep.add("F~4 = x^5 - x", edelta_primitive(4) == x ** 5 - x)
    four = edelta_torsion(4, Fraction(2), 128)
    rep.add("4-torsion image has one point at infinity", four.infinite == 1 and four.values.count(INF) == 1)
    # the maps a -> -a, 1/a, -1/a send the 3-torsion image into the 6-torsion image
    prec = 256
    ctx = context(prec)
    d = BigC.from_value(2, prec)
    three = edelta_torsion(3, Fraction(2), prec)
    ok = True
    for a in three.values:
        if a is INF:
            continue
        z = a.to_mpc(ctx)
        for w in (-z, 1 / z, -1 / z):
            ok = ok and _is_root(edelta_primitive(6), BigC.from_value(w, prec), d, prec, prec // 2)
    rep.add("-a, 1/a, -1/a are 6-torsion images for every 3-torsion image a (delta = 2)", ok)
    h = hesse_two_torsion(Fraction(0), 128)
    cube = context(128).cbrt(4)
    rep.add("Hesse lambda = 0: x^3 - 4 has the real root 4^(1/3)",
            any(abs(r.to_mpc(context(128)) - cube) < context(128).ldexp(1, -100) for r in h.values))
    img = hesse_projection(Fraction(1, 3), (1, -1, 0))
    rep.add("Hesse projection sends the origin to lambda",
            img is not INF and abs(img.to_mpc(context(128)) - context(128).mpf(1) / 3) < context(128).ldexp(1, -100))
    for sv, tv in KLEIN_PARAMS:
        rep.extend(klein_check(sv, tv, precision_bits), f"Klein ({sv}, {tv}): ")
    rep.add("Klein cross ratio differs at (2, 1) and (3, 1)", klein_nonconstant((2, 1), (3, 1), precision_bits))
    return rep


def verify_intersection(precision_bits: int = 384) -> Report:
    from .intersect14 import (
        P24_poly,
        build_certificate,
        build_remainder_system,
        build_resultant_certificate,
        verify_certificate,
    )

    rep = Report("fourteen common points")
    rs = build_remainder_system(check=False)
    rep.add("remainder units 32u^15, 16u, -8", (str(rs.unit), str(rs.scale0), str(rs.scale1)) == ("32*u^15", "16*u", "-8"))
    try:
        build_remainder_system(check=True)
        rep.add("C0 and C1 equal their displays", True)
    except AssertionError as exc:
        rep.add("C0 and C1 equal their displays", False, str(exc))
    cert = build_resultant_certificate(rs, "bareiss", check=False)
    other = build_resultant_certificate(rs, "flint", check=False)
    rep.add("Bareiss and FLINT resultants agree", cert.full_resultant == other.full_resultant)
    rep.add("resultant exponents (48, 204, 36)",
            (cert.power_of_two, cert.u_power, cert.quartic_power) == (48, 204, 36))
    rep.add("P24 coefficients", cert.P24 == P24_poly())
    # the fixed 10^-100 bar applies from 384 bits up; below that, the certificate tolerance
    bar = Fraction(1, 10 ** 100) if precision_bits >= 384 else None
    for k in range(24):
        try:
            c = build_certificate(k, precision_bits)
            verify_certificate(c)
            ok = bar is None or Fraction(c.residual_max) < bar
            rep.add(f"root {k}: certificate verified, residual <= {c.residual_max}", ok)
        except (ArithmeticError, AssertionError) as exc:
            rep.add(f"root {k}", False, f"{type(exc).__name__}: {exc}")
    return rep


def verify_all(precision_bits: int = 384, table: Optional[DivPolyTable] = None) -> List[Report]:
    return [
        verify_divpoly(table=table),
        verify_closedforms(table=table),
        verify_totients(),
        verify_families(precision_bits),
        verify_intersection(precision_bits),
    ]
