"""Arbitrary-precision complex values and simultaneous polynomial root finding.

All numerics run in private :class:`mpmath.MPContext` instances, so nothing
here touches (or depends on) the global ``mpmath.mp`` precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Union

import mpmath

from .exactpoly import SYMBOLS, MPoly

GUARD_BITS = 24
SWEEP_CAP = 200
COARSE_CAP = 100


def context(prec: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def decimal_digits(prec: int) -> int:
    return int(prec * math.log10(2)) + 3


@dataclass(frozen=True)
class BigC:
    """Complex number with an explicit working precision (in bits).

    ``re`` and ``im`` are mpmath ``mpf`` values rounded to ``prec`` bits.
    """

    re: object
    im: object
    prec: int

    def __post_init__(self):
        if self.prec < 2:
            raise ValueError("precision must be at least 2 bits")
        for part in (self.re, self.im):
            if not mpmath.isfinite(part):
                raise ValueError("BigC parts must be finite")

    @classmethod
    def from_value(cls, value, prec: int) -> "BigC":
        ctx = context(prec)
        z = _as_mpc(ctx, value)
        return cls(ctx.mpf(z.real), ctx.mpf(z.imag), prec)

    def to_mpc(self, ctx: mpmath.MPContext):
        return ctx.mpc(self.re, self.im)

    def __abs__(self):
        return context(self.prec).hypot(self.re, self.im)

    def with_prec(self, prec: int) -> "BigC":
        return BigC.from_value(self, prec)

    def to_json(self) -> dict:
        ctx = context(self.prec)
        n = decimal_digits(self.prec)
        return {
            "re": ctx.nstr(self.re, n, strip_zeros=False, min_fixed=-1, max_fixed=-1),
            "im": ctx.nstr(self.im, n, strip_zeros=False, min_fixed=-1, max_fixed=-1),
            "prec": self.prec,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "BigC":
        prec = int(obj["prec"])
        ctx = context(prec)
        return cls(ctx.mpf(obj["re"]), ctx.mpf(obj["im"]), prec)

    def __str__(self) -> str:
        ctx = context(self.prec)
        return ctx.nstr(ctx.mpc(self.re, self.im), 20)


def _as_mpc(ctx: mpmath.MPContext, value):
    if isinstance(value, BigC):
        return ctx.mpc(value.re, value.im)
    if isinstance(value, Fraction):
        return ctx.mpc(ctx.mpf(value.numerator) / value.denominator)
    if isinstance(value, MPoly):
        v = value.constant_value()
        return ctx.mpc(ctx.mpf(v.numerator) / v.denominator)
    return ctx.mpc(value)


@dataclass
class RootSet:
    roots: List[BigC]
    residual_bound: Fraction
    source_degree: int
    sweeps: int = 0
    converged: bool = True

    def __len__(self):
        return len(self.roots)


class NonConvergence(ArithmeticError):
    """Aberth iteration hit the sweep cap.  ``best`` holds the last iterate."""

    def __init__(self, best: RootSet):
        super().__init__(f"root finding did not converge in {best.sweeps} sweeps")
        self.best = best


def _to_fraction_upper(x) -> Fraction:
    """A Fraction at least as large as the nonnegative mpf ``x``."""
    man, exp = mpmath.mpf(x).man_exp if x else (0, 0)
    if man == 0:
        return Fraction(0)
    # mpf stores man*2^exp exactly; nudge up by one ulp to stay conservative
    man = abs(int(man)) + 1
    return Fraction(man) * (Fraction(2) ** exp)


def univariate_coefficients(p: MPoly, var: Optional[str] = None) -> List[Fraction]:
    """Dense coefficient list of a univariate polynomial, highest degree first."""
    syms = p.symbols()
    if var is None:
        if len(syms) > 1:
            raise ValueError(f"polynomial is not univariate: {syms}")
        var = syms[0] if syms else "x"
    elif any(s != var for s in syms):
        raise ValueError(f"polynomial has symbols other than {var}")
    i = SYMBOLS.index(var)
    deg = p.degree(var)
    out = [Fraction(0)] * (deg + 1)
    for e, c in p.terms():
        out[deg - e[i]] = c
    return out


def _fujiwara(ctx, coeffs) -> object:
    n = len(coeffs) - 1
    lead = abs(coeffs[0])
    best = ctx.mpf(0)
    for k in range(1, n + 1):
        a = abs(coeffs[k]) / lead
        if k == n:
            a = a / 2
        if a:
            best = max(best, ctx.root(a, k))
    return 2 * best if best else ctx.mpf(1)


def _horner(coeffs, z):
    p = coeffs[0]
    dp = 0
    for a in coeffs[1:]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _magnitude(absc, az):
    m = 0
    for c in absc:
        m = m * az + c
    return m


def roots_univariate(
    p: Union[MPoly, Sequence],
    precision_bits: int,
    var: Optional[str] = None,
    sweep_cap: int = SWEEP_CAP,
) -> RootSet:
    """All complex roots of ``p`` by Aberth-Ehrlich iteration.

    ``p`` is a univariate :class:`MPoly` or a dense coefficient sequence
    (highest degree first) of rationals, numbers or :class:`BigC`.
    A 64-bit pass gets close, then at most ``sweep_cap`` sweeps run at the
    target precision.
    """
    if isinstance(p, MPoly):
        coeffs_in = univariate_coefficients(p, var)
    else:
        coeffs_in = list(p)
    work = precision_bits + GUARD_BITS
    ctx = context(work)
    coeffs = [_as_mpc(ctx, c) for c in coeffs_in]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("polynomial must be nonconstant")

    radius = _fujiwara(ctx, coeffs)
    z = [
        radius * ctx.expj(2 * ctx.pi * k / n + ctx.mpf(0.4)) * (1 + ctx.mpf(k) / (7 * n))
        for k in range(n)
    ]
    sweeps = 0
    done = False
    # a cheap 64-bit pass to get close, then the capped pass at full precision
    stages = [(64, 40, COARSE_CAP), (work, work - 4, sweep_cap)] if work > 96 else [(work, work - 4, sweep_cap)]
    for stage_prec, tol_bits, cap in stages:
        ctx.prec = stage_prec
        tol = ctx.ldexp(1, -tol_bits)
        noise = 4 * (n + 1) * ctx.ldexp(1, -stage_prec + 1)
        absc = [abs(c) for c in coeffs]
        active = [True] * n
        converged = False
        for _ in range(cap):
            sweeps += 1
            biggest = ctx.mpf(0)
            for k in range(n):
                if not active[k]:
                    continue
                zk = z[k]
                pk, dpk = _horner(coeffs, zk)
                if pk == 0:
                    active[k] = False
                    continue
                # once |p(z)| is down at the rounding-noise level, take this
                # final step and freeze the root
                noisy = abs(pk) <= noise * _magnitude(absc, abs(zk))
                ratio = pk / dpk if dpk != 0 else ctx.mpc(tol)
                s = ctx.mpc(0)
                for j in range(n):
                    if j != k:
                        diff = zk - z[j]
                        if diff != 0:
                            s += 1 / diff
                w = ratio / (1 - ratio * s)
                z[k] = zk - w
                rel = abs(w) / max(1, abs(z[k]))
                biggest = max(biggest, rel)
                if rel < tol or noisy:
                    active[k] = False
            if not any(active) or biggest < tol:
                converged = True
                break
        done = converged
    ctx.prec = work
    roots = [BigC.from_value(r, precision_bits) for r in z]
    bound = residual_bound(coeffs, roots, work)
    rs = RootSet(roots, bound, n, sweeps, done)
    if not done:
        rs.converged = False
        raise NonConvergence(rs)
    return rs


def residual_bound(coeffs, roots: Sequence[BigC], work: int) -> Fraction:
    """Upper bound on max |p(r)| over ``roots``, including Horner rounding error."""
    ctx = context(work)
    cs = [_as_mpc(ctx, c) for c in coeffs]
    n = len(cs) - 1
    u = ctx.ldexp(1, -work + 1)
    worst = ctx.mpf(0)
    for r in roots:
        z = _as_mpc(ctx, r)
        val, _ = _horner(cs, z)
        az = abs(z)
        mag = ctx.mpf(0)
        for c in cs:
            mag = mag * az + abs(c)
        err = 4 * (n + 1) * u * mag
        worst = max(worst, abs(val) + err)
    return _to_fraction_upper(worst)


def _horner_terms(ctx, terms, order, values):
    """Evaluate a sparse polynomial by nested Horner over ``order``."""
    if not order:
        total = ctx.mpc(0)
        for _, c in terms:
            total += c
        return total
    i = order[0]
    groups: Dict[int, list] = {}
    for e, c in terms:
        groups.setdefault(e[i], []).append((e, c))
    x = values[i]
    acc = ctx.mpc(0)
    prev = None
    for k in sorted(groups, reverse=True):
        if prev is not None:
            acc *= x ** (prev - k)
        acc += _horner_terms(ctx, groups[k], order[1:], values)
        prev = k
    if prev:
        acc *= x ** prev
    return acc


def eval_complex(p: MPoly, assignment: Mapping[str, object], precision_bits: int) -> BigC:
    """Evaluate ``p`` at complex values.

    Evaluation runs with extra guard bits (growing with the number of terms)
    and is rounded to ``precision_bits`` at the end.
    """
    syms = p.symbols()
    missing = [s for s in syms if s not in assignment]
    if missing:
        raise ValueError(f"no value given for {missing}")
    work = precision_bits + GUARD_BITS + max(1, len(p)).bit_length()
    ctx = context(work)
    idx = [SYMBOLS.index(s) for s in syms]
    values = {SYMBOLS.index(s): _as_mpc(ctx, assignment[s]) for s in syms}
    terms = [(e, ctx.mpf(c.numerator) / c.denominator) for e, c in p.terms()]
    val = _horner_terms(ctx, terms, idx, values)
    return BigC.from_value(val, precision_bits)


def eval_coeffs_in(p: MPoly, var: str, assignment: Mapping[str, object], precision_bits: int) -> List[BigC]:
    """Dense coefficients (highest first) of ``p`` in ``var`` after numeric substitution."""
    parts = p.coeffs_in(var)
    deg = max(parts) if parts else 0
    zero = BigC.from_value(0, precision_bits)
    out = [zero] * (deg + 1)
    for k, c in parts.items():
        out[deg - k] = eval_complex(c, assignment, precision_bits)
    return out


def close(a, b, tol, prec: int) -> bool:
    ctx = context(prec)
    return abs(_as_mpc(ctx, a) - _as_mpc(ctx, b)) <= tol


def distance(a, b, prec: int):
    ctx = context(prec)
    return abs(_as_mpc(ctx, a) - _as_mpc(ctx, b))
