"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line; the lines are collected
and repeated in the pytest terminal summary.  Run this file directly with
``python tests/test_acceptance.py`` to get only those lines.
"""

import io
import time
from contextlib import redirect_stdout
from fractions import Fraction

import pytest

from divtorsion.arith import D, jordan
from divtorsion.closedforms import (
    ClosedFormEval,
    closed_forms,
    extract_coefficients,
    injectivity_probe,
    mckee_coeffs,
    mckee_direct,
    recurrence_identities,
)
from divtorsion.divpoly import (
    PSI_DISPLAYS,
    DivPolyTable,
    verify_lattice,
    verify_psi_identities,
)
from divtorsion.exactpoly import MPoly, mp_divexact, symbols
from divtorsion.totientlab import D_collision_scan, collision_scan, prop20_scan

RESULTS = []


def record(num, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:>2}: {title}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    assert ok, line


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def test_01_initial_values():
    with Timer() as tm:
        t = DivPolyTable()
        got = {n: str(t.psi(n)) for n in range(1, 5)}
    ok = got == PSI_DISPLAYS and tm.seconds < 1
    record(1, "psi_1..psi_4 verbatim", ok, f"{tm.seconds:.2f}s")


def test_02_closed_form_coefficients():
    bad = []
    with Timer() as tm:
        for n in range(2, 17):
            cf = closed_forms(n)
            got = extract_coefficients(n)
            bad += [f"n={n} {k}" for k in ClosedFormEval.COEFFS if got[k] != getattr(cf, k)]
    record(2, "ten coefficients equal closed forms for 2 <= n <= 16", not bad and tm.seconds < 120,
           f"{len(bad)} mismatches, {tm.seconds:.1f}s")


def test_03_degrees_and_D_collisions():
    t = DivPolyTable()
    bad = []
    for n in range(2, 21):
        if t.degree_x("f", n) != n * n - 1:
            bad.append(f"deg f_{n}")
        if t.degree_x("F", n) != jordan(2, n) * (2 if n == 2 else 1) // 2:
            bad.append(f"deg F_{n}")
    with Timer() as tm:
        pairs = D_collision_scan(70).pairs()
    want = ([5, 6], [35, 40, 42], [55, 57, 62, 66])
    vals = (D(5) == D(6) == 12, D(35) == D(40) == D(42) == 576, D(55) == D(57) == D(62) == D(66) == 1440)
    ok = not bad and all(w in pairs for w in want) and all(vals) and tm.seconds < 1
    record(3, "degrees for n <= 20 and D collisions to 70", ok, f"scan {tm.seconds:.3f}s")


def test_04_divisibility_lattice():
    with Timer() as tm:
        t = DivPolyTable()
        bad = []
        for n in range(2, 21):
            for m in range(2, n):
                if n % m == 0:
                    try:
                        mp_divexact(t.slice_f(n), t.slice_f(m))
                    except ArithmeticError:
                        bad.append((m, n))
        lattice = verify_lattice(20, t)
        ident = verify_psi_identities(20, t)
    ok = not bad and lattice.passed and ident.passed and tm.seconds < 60
    record(4, "f_m | f_n for m | n <= 20, psi identities", ok, f"{tm.seconds:.1f}s")


def test_05_mckee():
    bad = [n for n in range(3, 22, 2) if mckee_coeffs(n).entries != mckee_direct(n).entries]
    record(5, "McKee tables for odd n <= 21", not bad, f"mismatch at {bad}" if bad else "")


def test_06_recurrences():
    rep = recurrence_identities(20)
    record(6, "t(n) recurrences up to 20", rep.passed, f"{len(rep.checks)} identities")


def test_07_injectivity():
    rep = injectivity_probe(500)
    record(7, "4-tuple injective for n <= 500", rep.passed)


def test_08_totients():
    with Timer() as tm:
        checks = [
            jordan(1, 15) == jordan(1, 16) == 8,
            jordan(2, 15) == jordan(2, 16) == 192,
            jordan(3, 28268) == jordan(3, 28710) == 19764446869440,
            [28268, 28710] in collision_scan(3, 30000).pairs(),
            collision_scan(4, 10 ** 5).pairs() == [],
        ]
        a = prop20_scan("A", 10 ** 6)
        checks.append([ns for _, ns in a.classes] == [[7, 8]] and a.passed)
    record(8, "totient values, J_4 scan, prime-power scan", all(checks) and tm.seconds < 30, f"{tm.seconds:.1f}s")


def test_09_symbolic_intersection():
    from divtorsion.intersect14 import (
        C0_DISPLAY,
        C1_DISPLAY,
        P24_COEFFS,
        build_remainder_system,
        build_resultant_certificate,
        parse_display,
    )

    with Timer() as tm:
        rs = build_remainder_system(check=False)
        cert = build_resultant_certificate(rs, check=False)
    ok = (
        rs.C0 == parse_display(C0_DISPLAY)
        and rs.C1 == parse_display(C1_DISPLAY)
        and (cert.power_of_two, cert.u_power, cert.quartic_power) == (48, 204, 36)
        and tuple(c for _, c in cert.P24.terms()) == P24_COEFFS
        and tm.seconds < 300
    )
    record(9, "C0, C1 displays and resultant factorization", ok, f"{tm.seconds:.1f}s")


def test_10_numeric_intersection():
    from divtorsion.intersect14 import build_certificate, verify_certificate
    from divtorsion.numroots import context

    ctx = context(768)
    bad = []
    with Timer() as tm:
        for k in range(24):
            try:
                c = build_certificate(k, 384)
                verify_certificate(c)
            except (ArithmeticError, AssertionError) as exc:
                bad.append(f"root {k}: {exc}")
                continue
            U, d1, d2 = (z.to_mpc(ctx) for z in (c.u, c.delta1, c.delta2))
            two1 = [-d1, 1 / d1, -1 / d1]
            two2 = [-d2, 1 / d2, -1 / d2]
            if not (
                len(c.points) == 14
                and Fraction(c.residual_max) < Fraction(1, 10 ** 100)
                and abs(d1 * d2 + 1 / U ** 2) < ctx.mpf(10) ** -100
                and min(abs(p - q) for p in two1 for q in two2) > ctx.mpf(10) ** -30
            ):
                bad.append(f"root {k}")
    record(10, "24 certificates at 384 bits, residual < 1e-100", not bad and tm.seconds < 120,
           f"{tm.seconds:.1f}s" + (f"; {bad[:3]}" if bad else ""))


def test_11_families():
    from divtorsion.families import (
        displayed_F3,
        displayed_F5,
        edelta_primitive,
        edelta_torsion,
        klein_check,
        klein_nonconstant,
    )

    x = MPoly.var("x")
    four = edelta_torsion(4, Fraction(2), 128)
    checks = [
        edelta_primitive(3) == displayed_F3(),
        edelta_primitive(5) == displayed_F5(),
        edelta_primitive(4) == x ** 5 - x,
        four.infinite == 1,
    ]
    for s, t in ((2, 1), (3, 1), (1, 2)):
        checks.append(klein_check(s, t, 384, tol_exp=40).passed)
    checks.append(klein_nonconstant((2, 1), (3, 1), 384))
    record(11, "F~3, F~5 displays, F~4 roots, Klein checks", all(checks))


def test_12_determinism(tmp_path, monkeypatch):
    from divtorsion.cli import main

    monkeypatch.setenv("DIVTORSION_CACHE", str(tmp_path / "cache"))

    def run(*extra):
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(["verify-all", *extra])
        return code, buf.getvalue()

    with Timer() as tm:
        c1, cold = run()
        c2, warm = run()
        c3, nocache = run("--no-cache")
    ok = c1 == c2 == c3 == 0 and cold == warm == nocache
    record(12, "verify-all byte-identical cold, warm and without cache", ok, f"{tm.seconds:.0f}s for three runs")


if __name__ == "__main__":
    import sys
    import tempfile

    class _MP:
        def setenv(self, k, v):
            import os

            os.environ[k] = v

    failed = 0
    for name, fn in sorted(globals().items()):
        if not name.startswith("test_"):
            continue
        try:
            if name == "test_12_determinism":
                import pathlib

                fn(pathlib.Path(tempfile.mkdtemp()), _MP())
            else:
                fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
