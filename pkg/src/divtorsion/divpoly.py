"""Division polynomials, their normalized squares and primitive factors.

Two representations are kept.

* :meth:`DivPolyTable.psi` runs the classical recurrences in the full ring
  ``Q[x, b2, b4, b6, b8]`` with ``b8`` left free, so small cases print exactly
  like the textbook displays.
* Everything else is computed on the ``b2 = 0`` slice ``Q[x, b4, b6]`` (where
  ``b8 = -b4^2/4``) and moved to general ``b2`` by the substitution
  ``x -> x + b2/12``, ``b4 -> b4 - b2^2/24``, ``b6 -> b6 - b2*b4/6 + b2^3/216``.
  That substitution is a ring automorphism of ``Q[x, b2, b4, b6]`` which
  preserves x-degree and leading coefficients, so divisibility, square
  roots and degrees can all be decided on the much smaller slice.
"""

from __future__ import annotations

import os
import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .arith import D, I_factor, divisors
from .exactpoly import (
    MPoly,
    NotDivisible,
    mp_divexact,
    mp_resultant,
    mp_sqrt_exact,
    symbols,
)
from .report import Report

x, y, b2, b4, b6, b8, a1, a3 = symbols("x", "y", "b2", "b4", "b6", "b8", "a1", "a3")

PSI2 = 2 * y + a1 * x + a3
PSI2_SQ = 4 * x ** 3 + b2 * x ** 2 + 2 * b4 * x + b6
B8_ELIM = (b2 * b6 - b4 ** 2) / 4

SLICE_PSI2_SQ = 4 * x ** 3 + 2 * b4 * x + b6
SLICE_B8 = -(b4 ** 2) / 4

LIFT = {
    "x": x + b2 / 12,
    "b4": b4 - b2 ** 2 / 24,
    "b6": b6 - b2 * b4 / 6 + b2 ** 3 / 216,
}
# inverse substitution, used to project a full polynomial onto the slice
# coordinates without losing information
UNLIFT = {
    "x": x - b2 / 12,
    "b4": b4 + b2 ** 2 / 24,
    "b6": b6 + b2 * b4 / 6 + b2 ** 3 / 432,
}

KINDS = ("psi", "f", "F")

# the classical initial values, in canonical form
PSI_DISPLAYS = {
    1: "1",
    2: "a1*x + 2*y + a3",
    3: "3*x^4 + b2*x^3 + 3*b4*x^2 + 3*b6*x + b8",
    4: "(a1*x + 2*y + a3)*(2*x^6 + b2*x^5 + 5*b4*x^4 + 10*b6*x^3 + 10*b8*x^2"
       " + b2*b8*x + -1*b4*b6*x + b4*b8 + -1*b6^2)",
}


def _initial_bodies(p2sq: MPoly, b2v: MPoly, b8v: MPoly) -> Dict[int, MPoly]:
    return {
        0: MPoly(),
        1: MPoly.const(1),
        2: MPoly.const(1),
        3: 3 * x ** 4 + b2v * x ** 3 + 3 * b4 * x ** 2 + 3 * b6 * x + b8v,
        4: (
            2 * x ** 6 + b2v * x ** 5 + 5 * b4 * x ** 4 + 10 * b6 * x ** 3
            + 10 * b8v * x ** 2 + (b2v * b8v - b4 * b6) * x + (b4 * b8v - b6 ** 2)
        ),
    }


def _even(k: int) -> int:
    return 1 if k % 2 == 0 else 0


def _next_body(body: Dict[int, MPoly], m: int, p2sq: MPoly) -> MPoly:
    """Body of psi_m from smaller bodies; psi_k = psi_2^[k even] * body_k."""
    n = m // 2
    if m % 2:
        a = body[n] ** 3 * body[n + 2]
        b = body[n - 1] * body[n + 1] ** 3
        # psi_2^4 sits in whichever product has the even indices
        if n % 2 == 0:
            a = a * p2sq ** 2
        else:
            b = b * p2sq ** 2
        return a - b
    a = body[n - 1] ** 2 * body[n] * body[n + 2]
    b = body[n - 2] * body[n] * body[n + 1] ** 2
    ea = 2 * _even(n - 1) + _even(n) + _even(n + 2)
    eb = _even(n - 2) + _even(n) + 2 * _even(n + 1)
    a = a * p2sq ** (ea // 2)
    b = b * p2sq ** (eb // 2)
    # psi_2^2 * body_m = psi_2^ea * a - psi_2^eb * b with ea, eb even
    return mp_divexact(a - b, p2sq)


@dataclass(frozen=True)
class PsiRep:
    """``psi_n = psi_2^[n even] * body`` with ``psi_2 = 2y + a1*x + a3``."""

    n: int
    has_psi2_factor: bool
    body: MPoly

    def __str__(self) -> str:
        if self.has_psi2_factor:
            return f"({PSI2})*({self.body})" if self.n != 2 else str(PSI2)
        return str(self.body)

    def squared(self) -> MPoly:
        """``psi_n^2`` as a polynomial in x and the b-invariants."""
        sq = self.body ** 2
        return sq * PSI2_SQ if self.has_psi2_factor else sq

    def leading_coefficient(self) -> Fraction:
        return self.body.coeffs_in("x")[self.body.degree("x")].constant_value()


def lift(g: MPoly) -> MPoly:
    """Move a slice polynomial in ``x, b4, b6`` to general ``b2``."""
    return g.compose(LIFT)


def unlift(p: MPoly) -> MPoly:
    return p.compose(UNLIFT)


def top_part(p: MPoly, keep: int) -> MPoly:
    """Terms of ``p`` whose x-degree is within ``keep`` of the top."""
    cut = p.degree("x") - keep
    return p.filter_terms(lambda e: e[0] >= cut)


def lift_top(g: MPoly, keep: int) -> MPoly:
    """Exact top ``keep + 1`` x-layers of ``lift(g)``, without the full lift."""
    cut = g.degree("x") - keep
    head = g.filter_terms(lambda e: e[0] >= cut)
    return lift(head).filter_terms(lambda e: e[0] >= cut)


def default_cache_dir() -> str:
    return os.environ.get("DIVTORSION_CACHE", os.path.join(os.path.expanduser("~"), ".cache", "divtorsion"))


class DivPolyTable:
    """Memoized psi_n, f_n and F_n.

    With a ``cache_path`` the full (lifted) polynomials are also persisted as
    ``kind<TAB>n<TAB>canonical`` lines.  Readers only ever see completed
    entries: every computation runs under one re-entrant lock.
    """

    def __init__(self, cache_path: Optional[str] = None):
        self._lock = threading.RLock()
        self._psi: Dict[int, MPoly] = {}
        self._slice_body = _initial_bodies(SLICE_PSI2_SQ, MPoly(), SLICE_B8)
        self._slice_f: Dict[int, MPoly] = {}
        self._slice_F: Dict[int, MPoly] = {}
        self._full: Dict[Tuple[str, int], MPoly] = {}
        self.cache_path = cache_path
        self.cache_hits = 0
        if cache_path and os.path.exists(cache_path):
            self._load(cache_path)

    # --- persistence -------------------------------------------------------

    def _load(self, path: str) -> None:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    kind, n, text = line.split("\t")
                    if kind not in KINDS:
                        raise ValueError(f"unknown kind {kind!r}")
                    poly = MPoly.parse(text)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad cache record ({exc})") from None
                self._full[(kind, int(n))] = poly

    def save(self) -> None:
        if not self.cache_path:
            return
        with self._lock:
            os.makedirs(os.path.dirname(os.path.abspath(self.cache_path)), exist_ok=True)
            tmp = self.cache_path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                for kind, n in sorted(self._full, key=lambda k: (KINDS.index(k[0]), k[1])):
                    fh.write(f"{kind}\t{n}\t{self._full[(kind, n)]}\n")
            os.replace(tmp, self.cache_path)

    def cached_keys(self) -> List[Tuple[str, int]]:
        return sorted(self._full, key=lambda k: (KINDS.index(k[0]), k[1]))

    def _full_entry(self, kind: str, n: int, build) -> MPoly:
        with self._lock:
            key = (kind, n)
            if key in self._full:
                self.cache_hits += 1
                return self._full[key]
            value = build()
            self._full[key] = value
            return value

    # --- psi in full form --------------------------------------------------

    def psi(self, n: int) -> PsiRep:
        if n < 1:
            raise ValueError("psi needs n >= 1")
        body = self._full_entry("psi", n, lambda: self._psi_body(n))
        return PsiRep(n, n % 2 == 0, body)

    def _psi_body(self, n: int) -> MPoly:
        with self._lock:
            if not self._psi:
                self._psi.update(_initial_bodies(PSI2_SQ, b2, b8))
            for m in range(max(self._psi) + 1, n + 1):
                self._psi[m] = _next_body(self._psi, m, PSI2_SQ)
            return self._psi[n]

    # --- slice computations ------------------------------------------------

    def slice_body(self, n: int) -> MPoly:
        with self._lock:
            for m in range(max(self._slice_body) + 1, n + 1):
                self._slice_body[m] = _next_body(self._slice_body, m, SLICE_PSI2_SQ)
            return self._slice_body[n]

    def slice_f(self, n: int) -> MPoly:
        if n < 2:
            raise ValueError("f_n needs n >= 2")
        with self._lock:
            if n not in self._slice_f:
                sq = self.slice_body(n) ** 2
                if n % 2 == 0:
                    sq = sq * SLICE_PSI2_SQ
                self._slice_f[n] = sq / (n * n)
            return self._slice_f[n]

    def slice_F(self, n: int) -> MPoly:
        if n < 2:
            raise ValueError("F_n needs n >= 2")
        with self._lock:
            if n in self._slice_F:
                return self._slice_F[n]
            q = self.slice_f(n)
            if n > 2:
                for d in divisors(n)[1:-1]:
                    Fd = self.slice_F(d)
                    q = mp_divexact(q, Fd if I_factor(d) == 2 else Fd ** 2)
                q = mp_sqrt_exact(q)
            self._slice_F[n] = q
            return q

    # --- full forms --------------------------------------------------------

    def f_poly(self, n: int, top: Optional[int] = None) -> MPoly:
        """Monic f_n in ``x, b2, b4, b6``.

        With ``top=k`` only the x-layers ``x^(d-k) .. x^d`` are returned; they
        are computed without the full lift and are not cached.
        """
        if top is not None:
            return lift_top(self.slice_f(n), top)
        return self._full_entry("f", n, lambda: lift(self.slice_f(n)))

    def primitive_F(self, n: int, top: Optional[int] = None) -> MPoly:
        if top is not None:
            return lift_top(self.slice_F(n), top)
        return self._full_entry("F", n, lambda: lift(self.slice_F(n)))

    def degree_x(self, kind: str, n: int) -> int:
        if kind == "f":
            return self.slice_f(n).degree("x")
        if kind == "F":
            return self.slice_F(n).degree("x")
        if kind == "psi":
            return self.slice_body(n).degree("x")
        raise ValueError(f"unknown kind {kind!r}")

    def check_cache(self) -> Report:
        """Recompute every cached full polynomial and compare canonical text."""
        rep = Report("cache")
        fresh = DivPolyTable()
        for kind, n in self.cached_keys():
            if kind == "psi":
                new = fresh.psi(n).body
            elif kind == "f":
                new = fresh.f_poly(n)
            else:
                new = fresh.primitive_F(n)
            rep.add(f"{kind} {n}", str(new) == str(self._full[(kind, n)]))
        return rep


_DEFAULT: Optional[DivPolyTable] = None
_DEFAULT_LOCK = threading.Lock()


def default_table() -> DivPolyTable:
    global _DEFAULT
    with _DEFAULT_LOCK:
        if _DEFAULT is None:
            _DEFAULT = DivPolyTable()
        return _DEFAULT


def set_default_table(table: Optional[DivPolyTable]) -> None:
    """Install ``table`` (e.g. one backed by an on-disk cache) as the default."""
    global _DEFAULT
    with _DEFAULT_LOCK:
        _DEFAULT = table


def psi(n: int, table: Optional[DivPolyTable] = None) -> PsiRep:
    return (table or default_table()).psi(n)


def f_poly(n: int, table: Optional[DivPolyTable] = None) -> MPoly:
    return (table or default_table()).f_poly(n)


def primitive_F(n: int, table: Optional[DivPolyTable] = None) -> MPoly:
    return (table or default_table()).primitive_F(n)


# --------------------------------------------------------------------------
# verification


def _specialize_slice(g: MPoly, vals: Tuple[Fraction, Fraction, Fraction]) -> MPoly:
    """Evaluate ``lift(g)`` at rational ``(b2, b4, b6)``, leaving x free."""
    c2, c4, c6 = vals
    return g.compose({
        "x": x + MPoly.const(c2 / 12),
        "b4": MPoly.const(c4 - c2 ** 2 / 24),
        "b6": MPoly.const(c6 - c2 * c4 / 6 + c2 ** 3 / 216),
    })


def random_specializations(count: int, seed: int = 2024) -> List[Tuple[Fraction, Fraction, Fraction]]:
    """Deterministic rational ``(b2, b4, b6)`` triples with nonzero discriminant."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        v = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
        c2, c4, c6 = v
        c8 = (c2 * c6 - c4 ** 2) / 4
        disc = -c2 ** 2 * c8 - 8 * c4 ** 3 - 27 * c6 ** 2 + 9 * c2 * c4 * c6
        if disc != 0:
            out.append(v)
    return out


def verify_lattice(n_max: int, table: Optional[DivPolyTable] = None, samples: int = 5) -> Report:
    """f_m | f_n for all m | n <= n_max, and coprimality of F_m, F_n (m != n).

    Divisibility is decided on the slice, which is equivalent because the
    lift is a ring automorphism.  Coprimality is checked by a nonzero
    resultant in x at ``samples`` rational specializations of ``(b2, b4, b6)``.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    t = table or default_table()
    rep = Report("lattice")
    specs = random_specializations(samples)
    spec_F: Dict[Tuple[int, int], MPoly] = {}
    for n in range(2, n_max + 1):
        fn = t.slice_f(n)
        for m in divisors(n)[1:]:
            try:
                mp_divexact(fn, t.slice_f(m))
                ok = True
            except NotDivisible:
                ok = False
            rep.add(f"f_{m} | f_{n}", ok)
        for m in divisors(n)[1:-1]:
            nonzero = True
            for i, v in enumerate(specs):
                for k in (m, n):
                    if (k, i) not in spec_F:
                        spec_F[(k, i)] = _specialize_slice(t.slice_F(k), v)
                r = mp_resultant(spec_F[(m, i)], spec_F[(n, i)], "x", method="flint")
                nonzero = nonzero and not r.is_zero()
            rep.add(f"res_x(F_{m}, F_{n}) != 0 at {samples} points", nonzero)
    return rep


def _psi_sq(body: Dict[int, MPoly], k: int) -> Tuple[MPoly, int]:
    """``psi_k`` as (body, power of psi_2)."""
    return body[k], _even(k) if k > 0 else 0


def verify_structure(n_max: int, table: Optional[DivPolyTable] = None) -> Report:
    """Degrees, leading coefficients, the product formula and b8 elimination."""
    t = table or default_table()
    rep = Report("structure")
    for n in range(2, n_max + 1):
        body = t.slice_body(n)
        lc = body.coeffs_in("x")[body.degree("x")].constant_value()
        want_deg = (n * n - 1) // 2 if n % 2 else (n * n - 4) // 2
        want_lc = n if n % 2 else Fraction(n, 2)
        rep.add(f"psi_{n} body degree {want_deg}, leading {want_lc}", body.degree("x") == want_deg and lc == want_lc)
        fn, Fn = t.slice_f(n), t.slice_F(n)
        rep.add(
            f"f_{n} monic of degree {n * n - 1}",
            fn.degree("x") == n * n - 1 and fn.coeffs_in("x")[n * n - 1] == 1,
        )
        rep.add(
            f"F_{n} monic of degree D({n})={D(n)}",
            Fn.degree("x") == D(n) and Fn.coeffs_in("x")[D(n)] == 1,
        )
        prod = MPoly.const(1)
        for d in divisors(n)[1:]:
            Fd = t.slice_F(d)
            prod = prod * (Fd if I_factor(d) == 2 else Fd ** 2)
        rep.add(f"f_{n} = prod F_d^(2/I(d))", prod == fn)
        rep.add(f"f_{n} free of b8", fn.degree("b8") <= 0)
    return rep


def verify_psi_identities(n_max: int, table: Optional[DivPolyTable] = None, full_upto: int = 8) -> Report:
    """Check the defining recurrences and the general identity
    ``psi_{m+n} psi_{m-n} = psi_{m+1} psi_{m-1} psi_n^2 - psi_{n+1} psi_{n-1} psi_m^2``
    on the slice, then compare the free-b8 psi_n against the lifted slice."""
    t = table or default_table()
    rep = Report("psi identities")
    t.slice_body(n_max + 1)
    body = t._slice_body
    P = SLICE_PSI2_SQ

    def prod(*idx):
        out = MPoly.const(1)
        e = 0
        for k in idx:
            out = out * body[k]
            e += _even(k) if k > 0 else 0
        return out, e

    for m in range(2, n_max + 1):
        for n in range(1, m):
            if m + n > n_max:
                continue
            lhs, el = prod(m + n, m - n)
            r1, e1 = prod(m + 1, m - 1, n, n)
            r2, e2 = prod(n + 1, n - 1, m, m)
            emin = min(el, e1, e2)
            ok = (
                lhs * P ** ((el - emin) // 2)
                == r1 * P ** ((e1 - emin) // 2) - r2 * P ** ((e2 - emin) // 2)
            )
            rep.add(f"psi_{m + n} psi_{m - n} identity", ok)
    for k in range(5, n_max + 1):
        half = k // 2
        if k % 2:
            if half < 2:
                continue
            rep.add(f"odd recurrence at psi_{k}", _next_body(body, k, P) == body[k])
        elif half >= 3:
            rep.add(f"even recurrence at psi_{k}", _next_body(body, k, P) == body[k])
    for n in range(2, min(full_upto, n_max) + 1):
        full = t.psi(n).squared().compose({"b8": B8_ELIM}) / (n * n)
        rep.add(f"free-b8 psi_{n}^2/{n * n} equals lifted slice f_{n}", full == t.f_poly(n))
    return rep
