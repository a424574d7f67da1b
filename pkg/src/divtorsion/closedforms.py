"""Closed-form degrees and leading coefficients of f_n and F_n.

Coefficients are indexed as in the expansions

    f_n = sum c_{r,s,t}(n) b2^r b4^s b6^t x^(d(n) - (r + 2s + 3t))
    F_n = sum C_{r,s,t}(n) b2^r b4^s b6^t x^(D(n) - (r + 2s + 3t))
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .arith import I_factor, jordan
from .exactpoly import MPoly, mp_coeff
from .report import Report

JORDAN_KS = (1, 2, 3, 4, 6, 8, 10, 12)

__all__ = [
    "jordan", "ClosedFormEval", "closed_forms", "verify_against_polys",
    "McKeeTable", "mckee_coeffs", "mckee_direct", "recurrence_identities",
    "injectivity_probe", "extract_coefficients", "t_sequences", "verify_mckee",
    "initial_values", "injectivity_tuple",
]


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ClosedFormEval:
    n: int
    d: int
    D: int
    I: int
    c100: Fraction
    c010: Fraction
    c001: Fraction
    C100: Fraction
    C010: Fraction
    C001: Fraction
    C020: Fraction
    C011: Fraction
    C002: Fraction
    C030: Fraction
    J: Dict[int, int] = field(default_factory=dict)

    COEFFS = ("c100", "c010", "c001", "C100", "C010", "C001", "C020", "C011", "C002", "C030")

    def to_json(self) -> dict:
        out = {"n": self.n, "d": self.d, "D": self.D, "I": self.I}
        for name in self.COEFFS:
            out[name] = _frac_str(getattr(self, name))
        out["J"] = {str(k): v for k, v in sorted(self.J.items())}
        return out


def small_c(n: int) -> Tuple[Fraction, Fraction, Fraction]:
    n2 = Fraction(n * n)
    return (
        (n2 - 1) / 12,
        (n2 - 1) * (n2 + 6) / 60,
        (n2 - 1) * (n2 * n2 + n2 + 15) / 420,
    )


def closed_forms(n: int) -> ClosedFormEval:
    if n < 2:
        raise ValueError("closed forms need n >= 2")
    J = {k: jordan(k, n) for k in JORDAN_KS}
    I = I_factor(n)
    F = Fraction
    c100, c010, c001 = small_c(n)
    p4 = F(J[4], 120) + F(J[2], 24)
    p6 = F(J[6], 840) + F(J[2], 60)
    q8 = F(J[8], 16800) + F(J[4], 600) + F(5 * J[2], 672)
    C020 = -q8 * I + p4 ** 2 * I ** 2 / 2
    C011 = (
        -(F(J[10], 92400) + F(J[6], 2800) + F(J[4], 1680) + F(J[2], 150)) * I
        + p4 * p6 * I ** 2
    )
    C002 = -(F(J[12], 1345344) + F(J[6], 7840) + F(J[2], 660)) * I + p6 ** 2 * I ** 2 / 2
    C030 = (
        (F(J[12], 2574000) + F(J[8], 42000) + F(17 * J[4], 36000) + F(5 * J[2], 2464)) * I
        - q8 * p4 * I ** 2
        + p4 ** 3 * I ** 3 / 6
    )
    return ClosedFormEval(
        n=n,
        d=n * n - 1,
        D=J[2] * I // 2,
        I=I,
        c100=c100,
        c010=c010,
        c001=c001,
        C100=F(J[2] * I, 24),
        C010=p4 * I,
        C001=p6 * I,
        C020=C020,
        C011=C011,
        C002=C002,
        C030=C030,
        J=J,
    )


# (name, r, s, t)
_C_INDEX = (
    ("C100", 1, 0, 0), ("C010", 0, 1, 0), ("C001", 0, 0, 1),
    ("C020", 0, 2, 0), ("C011", 0, 1, 1), ("C002", 0, 0, 2), ("C030", 0, 3, 0),
)
_c_INDEX = (("c100", 1, 0, 0), ("c010", 0, 1, 0), ("c001", 0, 0, 1))


def _coefficient(p: MPoly, deg: int, r: int, s: int, t: int) -> Fraction:
    k = deg - (r + 2 * s + 3 * t)
    if k < 0:
        return Fraction(0)
    c = mp_coeff(p, {"x": k, "b2": r, "b4": s, "b6": t})
    return c.constant_value() if not c.is_zero() else Fraction(0)


def extract_coefficients(n: int, table=None) -> Dict[str, Fraction]:
    """The ten coefficients read off the computed f_n and F_n.

    The b2-carrying coefficients come from the exact top x-layers of the
    lifted polynomials; the b2-free ones straight from the ``b2 = 0`` slice.
    """
    from .divpoly import default_table

    t = table or default_table()
    out: Dict[str, Fraction] = {}
    f_head = t.f_poly(n, top=3)
    d = f_head.degree("x")
    for name, r, s, tt in _c_INDEX:
        out[name] = _coefficient(f_head, d, r, s, tt)
    F_head = t.primitive_F(n, top=3)
    F_slice = t.slice_F(n)
    Dn = F_slice.degree("x")
    for name, r, s, tt in _C_INDEX:
        src = F_head if r else F_slice
        out[name] = _coefficient(src, Dn, r, s, tt)
    return out


def verify_against_polys(n_max: int, table=None) -> Report:
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    rep = Report("closed forms vs computed polynomials")
    for n in range(2, n_max + 1):
        cf = closed_forms(n)
        got = extract_coefficients(n, table)
        for name in ClosedFormEval.COEFFS:
            want = getattr(cf, name)
            rep.add(f"n={n} {name}", got[name] == want, f"{_frac_str(got[name])} vs {_frac_str(want)}")
    return rep


# --------------------------------------------------------------------------
# McKee's recurrence for odd n


@dataclass
class McKeeTable:
    n: int
    entries: Dict[Tuple[int, int], Fraction]

    @property
    def top_weight(self) -> int:
        return (self.n * self.n - 1) // 2


def mckee_coeffs(n: int) -> McKeeTable:
    """Coefficients of psi_n (b2 = 0, b8 eliminated) from McKee's recurrence.

    Seeded with c(0,0) = n; entries with a negative index are zero; filled in
    order of increasing weight 2s + 3t.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("McKee's recurrence needs odd n >= 3")
    F = Fraction
    N2 = F(n * n)
    top = (n * n - 1) // 2
    c: Dict[Tuple[int, int], Fraction] = {(0, 0): F(n)}

    def get(s, t):
        if s < 0 or t < 0:
            return F(0)
        return c.get((s, t), F(0))

    for w in range(1, top + 1):
        for t in range(w // 3 + 1):
            if (w - 3 * t) % 2:
                continue
            s = (w - 3 * t) // 2
            rhs = (
                F(1, 2) * ((N2 + 3) / 2 - w) * (N2 / 6 - 1 + w) * get(s - 1, t)
                - F(1, 4) * ((N2 + 5) / 2 - w) * ((N2 + 3) / 2 - w) * get(s, t - 1)
                + F(3, 2) * (s + 1) * N2 * get(s + 1, t - 1)
                - F(2, 3) * (t + 1) * N2 * get(s - 2, t + 1)
            )
            c[(s, t)] = rhs / (w * (w + F(1, 2)))
    return McKeeTable(n, {k: v for k, v in c.items() if v != 0})


def mckee_direct(n: int, table=None) -> McKeeTable:
    """The same coefficients read off the computed psi_n."""
    from .divpoly import default_table

    t = table or default_table()
    body = t.slice_body(n)
    top = (n * n - 1) // 2
    entries = {}
    for e, coef in body.terms():
        xs, s, tt = e[0], e[3], e[4]
        assert 2 * s + 3 * tt == top - xs
        entries[(s, tt)] = coef
    return McKeeTable(n, entries)


def verify_mckee(n_max: int, table=None) -> Report:
    rep = Report("McKee recurrence")
    for n in range(3, n_max + 1, 2):
        rec = mckee_coeffs(n)
        direct = mckee_direct(n, table)
        rep.add(f"n={n} table ({len(direct.entries)} entries)", rec.entries == direct.entries)
    return rep


# --------------------------------------------------------------------------
# recurrences for t(n)


def t_sequences() -> Dict[str, object]:
    return {
        "d": lambda n: Fraction(n * n - 1),
        "c100": lambda n: small_c(n)[0],
        "c010": lambda n: small_c(n)[1],
        "c001": lambda n: small_c(n)[2],
    }


def recurrence_identities(n_max: int) -> Report:
    """The odd and even t-recurrences for d, c100, c010, c001 up to index n_max."""
    if n_max < 7:
        raise ValueError("n_max must be at least 7")
    F = Fraction
    rep = Report("t(n) recurrences")
    for name, t in t_sequences().items():
        for m in range(5, n_max + 1):
            n = m // 2
            if m % 2:
                val = (
                    F(n ** 3 * (n + 2), 2 * n + 1) * (3 * t(n) + t(n + 2))
                    - F((n - 1) * (n + 1) ** 3, 2 * n + 1) * (t(n - 1) + 3 * t(n + 1))
                )
            else:
                if n < 3:
                    continue
                val = (
                    F((n - 1) ** 2 * (n + 2), 4) * (2 * t(n - 1) + t(n) + t(n + 2) - t(2))
                    - F((n - 2) * (n + 1) ** 2, 4) * (t(n - 2) + t(n) + 2 * t(n + 1) - t(2))
                )
            rep.add(f"{name}({m})", val == t(m), f"{_frac_str(val)}")
    return rep


def initial_values(table=None) -> Report:
    """t(n) for n <= 4 from the computed f_n (t(1) = 0 for all four)."""
    rep = Report("t(n) initial values")
    seqs = t_sequences()
    for name, t in seqs.items():
        rep.add(f"{name}(1) = 0", t(1) == 0)
    for n in range(2, 5):
        got = extract_coefficients(n, table)
        rep.add(f"d({n})", seqs["d"](n) == n * n - 1)
        for name in ("c100", "c010", "c001"):
            rep.add(f"{name}({n})", got[name] == seqs[name](n))
    return rep


# --------------------------------------------------------------------------
# injectivity


def injectivity_tuple(n: int) -> Tuple[int, Fraction, Fraction, Fraction]:
    cf = closed_forms(n)
    return (
        cf.D,
        cf.C020 / cf.C010 ** 2,
        cf.C011 / (cf.C010 * cf.C001),
        cf.C002 / cf.C001 ** 2,
    )


def injectivity_probe(n_max: int) -> Report:
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    seen: Dict[tuple, List[int]] = {}
    for n in range(2, n_max + 1):
        seen.setdefault(injectivity_tuple(n), []).append(n)
    collisions = [ns for ns in seen.values() if len(ns) > 1]
    rep = Report("injectivity probe")
    rep.add(f"tuple injective on 2..{n_max}", not collisions, f"{len(collisions)} collisions")
    rep.data["collisions"] = collisions
    return rep
