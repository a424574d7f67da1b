"""Command-line entry point.

Exit codes: 0 success, 1 mathematical mismatch, 2 usage or input error.
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from . import divpoly
from .report import Report

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

CACHE_FILE = "divpoly.tsv"


class UsageError(Exception):
    """Bad input value; the message names the offending flag."""


@dataclass
class Config:
    precision_bits: int = 384
    cache_path: Optional[str] = None
    output: str = "text"

    def table(self) -> divpoly.DivPolyTable:
        return divpoly.DivPolyTable(self.cache_path)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--prec", type=int, default=384, help="working precision in bits (>= 64)")
    p.add_argument("--cache", metavar="PATH", default=None,
                   help="polynomial cache file (default: $DIVTORSION_CACHE or ~/.cache/divtorsion)")
    p.add_argument("--no-cache", action="store_true", help="do not read or write the polynomial cache")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="divtorsion",
        description="Division polynomials, closed-form coefficients and projective torsion images.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    dp = sub.add_parser("divpoly", parents=[common], help="print psi_n, f_n or F_n")
    dp.add_argument("kind", choices=divpoly.KINDS)
    dp.add_argument("n", type=_positive)

    cf = sub.add_parser("closedform", parents=[common], help="closed-form coefficients for one n")
    cf.add_argument("n", type=_positive)

    ver = sub.add_parser("verify", help="run one verification report")
    vsub = ver.add_subparsers(dest="what", required=True)
    for name, default in (("closedforms", 16), ("lattice", 20), ("recurrences", 20), ("mckee", 21)):
        v = vsub.add_parser(name, parents=[common])
        v.add_argument("--nmax", type=_positive, default=default)

    tot = sub.add_parser("totient", help="Jordan totient collisions")
    tsub = tot.add_subparsers(dest="what", required=True)
    c = tsub.add_parser("collide", parents=[common])
    c.add_argument("--k", type=_positive, required=True)
    c.add_argument("--bound", type=_positive, required=True)
    c.add_argument("--csv", metavar="FILE", help="also write the collision classes as CSV")
    c = tsub.add_parser("dcollide", parents=[common])
    c.add_argument("--bound", type=_positive, required=True)
    c.add_argument("--csv", metavar="FILE", help="also write the collision classes as CSV")
    c = tsub.add_parser("prop20", parents=[common])
    c.add_argument("--part", choices=("A", "B", "C", "a", "b", "c"), required=True)
    c.add_argument("--bound", type=_positive, required=True)
    c.add_argument("--csv", metavar="FILE", help="also write the collision classes as CSV")

    fam = sub.add_parser("family", help="the explicit curve families")
    fsub = fam.add_subparsers(dest="what", required=True)
    e = fsub.add_parser("edelta-F", parents=[common])
    e.add_argument("--n", type=_positive, required=True)
    h = fsub.add_parser("hesse", parents=[common])
    h.add_argument("--lam", type=_rational, default=Fraction(0), help="the parameter lambda")
    k = fsub.add_parser("klein-check", parents=[common])
    k.add_argument("--s", type=_rational, required=True)
    k.add_argument("--t", type=_rational, required=True)

    it = sub.add_parser("intersect14", help="two quartic curves with 14 common torsion images")
    isub = it.add_subparsers(dest="what", required=True)
    isub.add_parser("symbolic", parents=[common])
    b = isub.add_parser("build", parents=[common])
    b.add_argument("--root", type=int, required=True, help="index 0..23 into the sorted roots of P24")
    v = isub.add_parser("verify", parents=[common])
    v.add_argument("--file", required=True)

    sub.add_parser("verify-all", parents=[common], help="the whole reproduction suite")
    return parser


def _config(args) -> Config:
    if args.prec < 64:
        raise UsageError(f"--prec must be at least 64 (got {args.prec})")
    path = None
    if not args.no_cache:
        path = args.cache or os.path.join(divpoly.default_cache_dir(), CACHE_FILE)
        folder = os.path.dirname(os.path.abspath(path))
        try:
            os.makedirs(folder, exist_ok=True)
            writable = os.access(folder, os.W_OK)
        except OSError:
            writable = False
        if not writable:
            print(f"warning: cache location {path} is not writable; caching disabled", file=sys.stderr)
            path = None
    return Config(args.prec, path, "json" if args.json else "text")


def _emit(cfg: Config, obj, text: str) -> None:
    if cfg.output == "json":
        print(json.dumps(obj, indent=1, sort_keys=True))
    else:
        print(text)


def _emit_reports(cfg: Config, reports: List[Report]) -> int:
    if cfg.output == "json":
        print(json.dumps([r.to_json() for r in reports], indent=1, sort_keys=True))
    else:
        print("\n".join(r.to_text() for r in reports))
        ok = sum(r.passed for r in reports)
        print(f"{ok}/{len(reports)} reports passed")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_MISMATCH


def _write_csv(path: Optional[str], text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# handlers


def _cmd_divpoly(args, cfg: Config) -> int:
    t = divpoly.default_table()
    if args.kind == "psi":
        out = str(t.psi(args.n))
    elif args.n < 2:
        raise UsageError(f"{args.kind}_n needs n >= 2 (got {args.n})")
    elif args.kind == "f":
        out = str(t.f_poly(args.n))
    else:
        out = str(t.primitive_F(args.n))
    _emit(cfg, {"kind": args.kind, "n": args.n, "poly": out}, out)
    return EXIT_OK


def _cmd_closedform(args, cfg: Config) -> int:
    from .closedforms import closed_forms

    if args.n < 2:
        raise UsageError(f"closedform needs n >= 2 (got {args.n})")
    data = closed_forms(args.n).to_json()
    # the record is always JSON
    print(json.dumps(data, indent=1, sort_keys=True))
    return EXIT_OK


def _cmd_verify(args, cfg: Config) -> int:
    from . import closedforms as cf

    n = args.nmax
    if args.what == "closedforms":
        reports = [cf.verify_against_polys(n)]
    elif args.what == "lattice":
        reports = [divpoly.verify_structure(n), divpoly.verify_lattice(n), divpoly.verify_psi_identities(n)]
    elif args.what == "recurrences":
        if n < 7:
            raise UsageError(f"--nmax must be at least 7 for recurrences (got {n})")
        reports = [cf.initial_values(), cf.recurrence_identities(n)]
    else:
        if n < 3:
            raise UsageError(f"--nmax must be at least 3 for mckee (got {n})")
        reports = [cf.verify_mckee(n)]
    return _emit_reports(cfg, reports)


def _cmd_totient(args, cfg: Config) -> int:
    from . import totientlab as tl

    if args.what == "collide":
        if args.bound < 2:
            raise UsageError("--bound must be at least 2")
        rep = tl.collision_scan(args.k, args.bound)
    elif args.what == "dcollide":
        if args.bound < 2:
            raise UsageError("--bound must be at least 2")
        rep = tl.D_collision_scan(args.bound)
    else:
        if args.bound < 10:
            raise UsageError("--bound must be at least 10")
        rep = tl.prop20_scan(args.part, args.bound)
    _write_csv(args.csv, rep.to_csv())
    _emit(cfg, rep.to_json(), rep.to_text())
    if args.what == "prop20" and not rep.passed:
        return EXIT_MISMATCH
    return EXIT_OK


def _cmd_family(args, cfg: Config) -> int:
    from . import families as fm

    if args.what == "edelta-F":
        if args.n < 2:
            raise UsageError(f"--n must be at least 2 (got {args.n})")
        poly = fm.edelta_primitive(args.n)
        _emit(cfg, {"n": args.n, "poly": str(poly)}, str(poly))
        return EXIT_OK
    if args.what == "hesse":
        ts = fm.hesse_two_torsion(args.lam, cfg.precision_bits)
        data = ts.to_json()
        data["lambda"] = str(args.lam)
        text = f"x^3 + 3*lambda*x^2 - 4 at lambda = {args.lam}:\n" + "\n".join(f"  {v}" for v in ts.values)
        _emit(cfg, data, text)
        return EXIT_OK
    rep = fm.klein_check(args.s, args.t, cfg.precision_bits)
    # klein-check always reports JSON
    print(json.dumps(rep.to_json(), indent=1, sort_keys=True))
    return EXIT_OK if rep.passed else EXIT_MISMATCH


def _cmd_intersect14(args, cfg: Config) -> int:
    from . import intersect14 as ix

    if args.what == "symbolic":
        rs = ix.build_remainder_system(check=False)
        res = ix.build_resultant_certificate(rs, check=False)
        try:
            ix.build_remainder_system(check=True)
            ix.build_resultant_certificate(rs, check=True)
            ok = True
        except ix.MismatchWithPaper as exc:
            print(f"mismatch: {exc}", file=sys.stderr)
            ok = False
        data = {"remainder": rs.to_json(), "resultant": res.to_json(), "matches_display": ok}
        text = "\n".join([
            f"unit: {rs.unit}",
            f"C0 (scale {rs.scale0}): {rs.C0}",
            f"C1 (scale {rs.scale1}): {rs.C1}",
            f"res_v(C0, C1) = {res.cofactor_sign} * 2^{res.power_of_two} * u^{res.u_power}"
            f" * (u^4 - 1)^{res.quartic_power} * P24",
            f"P24 = {res.P24}",
            f"matches display: {ok}",
        ])
        _emit(cfg, data, text)
        return EXIT_OK if ok else EXIT_MISMATCH
    if args.what == "build":
        if not 0 <= args.root < 24:
            raise UsageError(f"--root must be in 0..23 (got {args.root})")
        cert = ix.build_certificate(args.root, cfg.precision_bits)
        print(cert.dumps())
        return EXIT_OK
    try:
        with open(args.file, encoding="utf-8") as fh:
            cert = ix.IntersectionCertificate.from_json(json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"--file: cannot read certificate ({exc})") from None
    try:
        rep = ix.verify_certificate(cert)
    except ix.VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    return _emit_reports(cfg, [rep])


def _cmd_verify_all(args, cfg: Config) -> int:
    from .suite import verify_all

    return _emit_reports(cfg, verify_all(cfg.precision_bits))


HANDLERS = {
    "divpoly": _cmd_divpoly,
    "closedform": _cmd_closedform,
    "verify": _cmd_verify,
    "totient": _cmd_totient,
    "family": _cmd_family,
    "intersect14": _cmd_intersect14,
    "verify-all": _cmd_verify_all,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
    except UsageError as exc:
        parser.error(str(exc))
    table = cfg.table()
    divpoly.set_default_table(table)
    from .families import SingularParameter
    from .intersect14 import MismatchWithPaper

    try:
        code = HANDLERS[args.command](args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SingularParameter as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MismatchWithPaper as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    finally:
        divpoly.set_default_table(None)
    try:
        table.save()
    except OSError as exc:
        print(f"warning: could not write cache ({exc})", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
