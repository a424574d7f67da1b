"""Exact sparse multivariate polynomials over the rationals.

Every polynomial lives in one fixed ring ``Q[x, y, b2, ..., t]`` whose
variables are the symbols of :data:`SYMBOLS`.  Terms are kept in graded
lexicographic order with ``x`` highest.  Arithmetic is delegated to FLINT's
``fmpq_mpoly``; the algorithms layered on top of it (pseudo-division, the
Bareiss resultant, the leading-term square root, rational substitution and
the canonical text form) live here.

Canonical text form::

    3*x^4 + b2*x^3 + 3*b4*x^2 + 3*b6*x + b8

Terms are joined by ``" + "`` in grlex order.  A coefficient is written as
``p`` or ``p/q``; a coefficient of exactly 1 is elided (so -1 prints as
``-1*``).  Inside a term the symbols appear in alphabet order, except that
``x`` and ``y`` come last.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

import flint
from flint.utils.flint_exceptions import DomainError as _FlintDomainError

SYMBOLS: Tuple[str, ...] = (
    "x", "y", "b2", "b4", "b6", "b8", "a1", "a2", "a3", "a4", "a6",
    "delta", "lambda", "u", "v", "s", "t",
)
NSYM = len(SYMBOLS)
SYMBOL_INDEX: Dict[str, int] = {name: i for i, name in enumerate(SYMBOLS)}

# Print order inside a term: everything except x, y in alphabet order, then x, y.
_PRINT_ORDER = tuple(range(2, NSYM)) + (0, 1)

_CTX = flint.fmpq_mpoly_ctx.get(SYMBOLS, "deglex")
_GENS = _CTX.gens()
_ZERO_EXP = (0,) * NSYM

Rat = Fraction
Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class NotDivisible(ArithmeticError):
    """Raised by :func:`mp_divexact` when the quotient is not a polynomial."""

    def __init__(self, monomial: str):
        super().__init__(f"not exactly divisible; remainder leads with {monomial}")
        self.monomial = monomial


class NotASquare(ArithmeticError):
    """Raised by :func:`mp_sqrt_exact` when the input is not a perfect square."""


class DivisionByZero(ZeroDivisionError):
    pass


def _sym_index(sym: str) -> int:
    try:
        return SYMBOL_INDEX[sym]
    except KeyError:
        raise ValueError(f"unknown symbol {sym!r}") from None


def _to_fmpq(c: Scalar) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, int):
        return flint.fmpq(c)
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    raise TypeError(f"cannot use {type(c).__name__} as a rational coefficient")


def _to_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _exps_from_mapping(mono: Mapping[str, int]) -> Exponents:
    e = [0] * NSYM
    for sym, k in mono.items():
        if k < 0:
            raise ValueError("negative exponent")
        e[_sym_index(sym)] = k
    return tuple(e)


def format_monomial(exps: Exponents) -> str:
    parts = []
    for i in _PRINT_ORDER:
        k = exps[i]
        if k == 1:
            parts.append(SYMBOLS[i])
        elif k > 1:
            parts.append(f"{SYMBOLS[i]}^{k}")
    return "*".join(parts) if parts else "1"


def _format_coeff(c: flint.fmpq) -> str:
    p, q = int(c.p), int(c.q)
    return str(p) if q == 1 else f"{p}/{q}"


class MPoly:
    """Immutable polynomial with rational coefficients."""

    __slots__ = ("_p", "_hash")

    def __init__(self, raw: Optional[flint.fmpq_mpoly] = None):
        self._p = _CTX.from_dict({}) if raw is None else raw
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def const(cls, c: Scalar) -> "MPoly":
        c = _to_fmpq(c)
        return cls(_CTX.from_dict({_ZERO_EXP: c} if c != 0 else {}))

    @classmethod
    def var(cls, sym: str) -> "MPoly":
        return cls(_GENS[_sym_index(sym)])

    @classmethod
    def from_terms(cls, terms: Mapping) -> "MPoly":
        """Build from ``{monomial: coefficient}``.

        A monomial is either a full exponent tuple or a ``{sym: exp}`` mapping.
        """
        d = {}
        for mono, c in terms.items():
            e = _exps_from_mapping(mono) if isinstance(mono, Mapping) else tuple(mono)
            if len(e) != NSYM:
                raise ValueError("exponent vector has wrong length")
            c = _to_fmpq(c)
            if c != 0:
                d[e] = d.get(e, flint.fmpq(0)) + c
        return cls(_CTX.from_dict({e: c for e, c in d.items() if c != 0}))

    @classmethod
    def parse(cls, text: str, strict: bool = True) -> "MPoly":
        """Parse the canonical text form.

        With ``strict`` (the default) the text must be exactly the canonical
        serialization of the polynomial it denotes.  ``strict=False`` accepts
        the same term grammar in any order and merges repeated monomials.
        """
        text = text.strip()
        if text == "0":
            return cls()
        acc: Dict[Exponents, flint.fmpq] = {}
        for term in text.split(" + "):
            e, c = _parse_term(term)
            acc[e] = acc.get(e, flint.fmpq(0)) + c
        p = cls(_CTX.from_dict({e: c for e, c in acc.items() if c != 0}))
        if strict and str(p) != text:
            raise ValueError("polynomial text is not in canonical form")
        return p

    # coercion ---------------------------------------------------------------

    @staticmethod
    def _raw(other) -> flint.fmpq_mpoly:
        if isinstance(other, MPoly):
            return other._p
        return _CTX.from_dict({_ZERO_EXP: _to_fmpq(other)}) if other != 0 else _CTX.from_dict({})

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        try:
            return MPoly(self._p + MPoly._raw(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return MPoly(self._p - MPoly._raw(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return MPoly(MPoly._raw(other) - self._p)
        except TypeError:
            return NotImplemented

    def __mul__(self, other):
        if isinstance(other, MPoly):
            return MPoly(self._p * other._p)
        try:
            return MPoly(self._p * _to_fmpq(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MPoly):
            return NotImplemented
        c = _to_fmpq(other)
        if c == 0:
            raise DivisionByZero("division of a polynomial by zero")
        return MPoly(self._p / c)

    def __neg__(self):
        return MPoly(-self._p)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        return MPoly(self._p ** k)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self._p == other._p
        if isinstance(other, (int, Fraction)):
            return self._p == MPoly._raw(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._p.to_dict().items()))
        return self._hash

    def __bool__(self):
        return not self._p.is_zero()

    def __len__(self):
        return len(self._p)

    # inspection -------------------------------------------------------------

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def constant_value(self) -> Fraction:
        if not self._p.is_constant():
            raise ValueError("polynomial is not constant")
        return _to_fraction(self._p.coefficient(0)) if len(self._p) else Fraction(0)

    def terms(self) -> Iterator[Tuple[Exponents, Fraction]]:
        """Terms in grlex order, highest first."""
        for e, c in self._p.terms():
            yield tuple(map(int, e)), _to_fraction(c)

    def raw_terms(self) -> List[Tuple[Exponents, flint.fmpq]]:
        return [(tuple(map(int, e)), c) for e, c in self._p.terms()]

    def leading_term(self) -> Tuple[Exponents, Fraction]:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading term")
        return tuple(map(int, self._p.monomial(0))), _to_fraction(self._p.coefficient(0))

    def leading_coefficient(self) -> Fraction:
        return self.leading_term()[1]

    def degree(self, sym: str) -> int:
        """Degree in ``sym``; -1 for the zero polynomial."""
        if self.is_zero():
            return -1
        return int(self._p.degrees()[_sym_index(sym)])

    def total_degree(self) -> int:
        return -1 if self.is_zero() else int(self._p.total_degree())

    def symbols(self) -> Tuple[str, ...]:
        if self.is_zero():
            return ()
        return tuple(SYMBOLS[i] for i, d in enumerate(self._p.degrees()) if d > 0)

    def coeffs_in(self, sym: str) -> Dict[int, "MPoly"]:
        """Split as ``sum_k c_k * sym^k``; returns ``{k: c_k}`` for nonzero ``c_k``."""
        i = _sym_index(sym)
        groups: Dict[int, dict] = {}
        for e, c in self._p.terms():
            k = int(e[i])
            ee = e[:i] + (0,) + e[i + 1:]
            groups.setdefault(k, {})[ee] = c
        return {k: MPoly(_CTX.from_dict(g)) for k, g in groups.items()}

    def weight(self, weights: Mapping[str, int]) -> set:
        """Set of weighted degrees of the terms (unlisted symbols weigh 0)."""
        w = [0] * NSYM
        for sym, k in weights.items():
            w[_sym_index(sym)] = k
        return {int(sum(a * b for a, b in zip(e, w))) for e in self._p.monoms()}

    def filter_terms(self, keep) -> "MPoly":
        """Terms whose exponent vector satisfies ``keep``."""
        return MPoly(_CTX.from_dict({e: c for e, c in self._p.terms() if keep(e)}))

    def compose(self, values: Mapping[str, "MPoly"]) -> "MPoly":
        """Simultaneous polynomial substitution."""
        args = [
            values[s]._p if s in values else _GENS[i] for i, s in enumerate(SYMBOLS)
        ]
        return MPoly(self._p.compose(*args))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        out = []
        for e, c in self._p.terms():
            if e == _ZERO_EXP:
                out.append(_format_coeff(c))
                continue
            mono = format_monomial(e)
            if c == 1:
                out.append(mono)
            else:
                out.append(f"{_format_coeff(c)}*{mono}")
        return " + ".join(out)

    def __repr__(self) -> str:
        return f"MPoly({str(self)!r})"


_COEFF_RE = re.compile(r"^-?[0-9]+(/[0-9]+)?$")
_FACTOR_RE = re.compile(r"^([a-z][a-z0-9]*)(?:\^([0-9]+))?$")


def _parse_coeff(tok: str) -> flint.fmpq:
    if "/" in tok:
        p, q = tok.split("/")
        if int(q) <= 1 or math.gcd(int(p), int(q)) != 1:
            raise ValueError(f"non-canonical fraction {tok!r}")
        return flint.fmpq(int(p), int(q))
    return flint.fmpq(int(tok))


def _parse_term(term: str) -> Tuple[Exponents, flint.fmpq]:
    if not term:
        raise ValueError("empty term")
    if _COEFF_RE.match(term):
        c = _parse_coeff(term)
        if c == 0:
            raise ValueError("zero coefficient")
        return _ZERO_EXP, c
    pieces = term.split("*")
    c = flint.fmpq(1)
    if _COEFF_RE.match(pieces[0]):
        c = _parse_coeff(pieces[0])
        if c == 0 or c == 1:
            raise ValueError(f"coefficient {pieces[0]!r} is not allowed here")
        pieces = pieces[1:]
    elif pieces[0].startswith("-"):
        c = flint.fmpq(-1)
        pieces[0] = pieces[0][1:]
    if not pieces:
        raise ValueError(f"malformed term {term!r}")
    e = [0] * NSYM
    for piece in pieces:
        m = _FACTOR_RE.match(piece)
        if not m:
            raise ValueError(f"malformed factor {piece!r}")
        i = _sym_index(m.group(1))
        k = int(m.group(2)) if m.group(2) else 1
        if m.group(2) and k < 2:
            raise ValueError(f"exponent in {piece!r} must be at least 2")
        if e[i]:
            raise ValueError(f"repeated symbol in {term!r}")
        e[i] = k
    return tuple(e), c


def as_mpoly(value) -> MPoly:
    if isinstance(value, MPoly):
        return value
    if isinstance(value, str):
        return MPoly.var(value) if value in SYMBOL_INDEX else MPoly.parse(value, strict=False)
    return MPoly.const(value)


def symbols(*names: str) -> Tuple[MPoly, ...]:
    return tuple(MPoly.var(n) for n in names)


# --------------------------------------------------------------------------
# rational functions


class RatFunc:
    """Quotient of two polynomials in lowest terms.

    The denominator is scaled to coprime integer coefficients with a positive
    grlex-leading coefficient, and is exactly 1 for polynomial values.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, normalize: bool = True):
        num, den = as_mpoly(num), as_mpoly(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if normalize:
            if num.is_zero():
                den = MPoly.const(1)
            else:
                g = MPoly(num._p.gcd(den._p))
                if not g.is_constant():
                    num = MPoly(num._p / g._p)
                    den = MPoly(den._p / g._p)
            if den.is_constant():
                num, den = num / den.constant_value(), MPoly.const(1)
            else:
                den, scale = integer_normalize(den)
                num = num / scale
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, value) -> "RatFunc":
        return value if isinstance(value, RatFunc) else cls(value)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_mpoly(self) -> MPoly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        o = RatFunc.coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = RatFunc.coerce(other)
        return RatFunc(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        o = RatFunc.coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc.coerce(other)
        if o.is_zero():
            raise DivisionByZero("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) / self

    def __neg__(self):
        return RatFunc(-self.num, self.den, normalize=False)

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(self.den ** -k, self.num ** -k)
        return RatFunc(self.num ** k, self.den ** k, normalize=False)

    def __eq__(self, other):
        if isinstance(other, (RatFunc, MPoly, int, Fraction)):
            o = RatFunc.coerce(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def subst(self, assignment: Mapping[str, object]) -> "RatFunc":
        return mp_subst(self.num, assignment) / mp_subst(self.den, assignment)

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    @classmethod
    def parse(cls, text: str) -> "RatFunc":
        text = text.strip()
        if text.startswith("(") and ")/(" in text and text.endswith(")"):
            num, den = text[1:-1].split(")/(")
            return cls(MPoly.parse(num), MPoly.parse(den))
        return cls(MPoly.parse(text))

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"


# --------------------------------------------------------------------------
# operations


def mp_arith(p: MPoly, q, kind: str) -> MPoly:
    """``kind`` is ``add``, ``sub``, ``mul`` or ``pow``; for ``pow`` ``q`` is the exponent."""
    if kind == "add":
        return p + q
    if kind == "sub":
        return p - q
    if kind == "mul":
        return p * q
    if kind == "pow":
        return p ** q
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def mp_divexact(p: MPoly, q: MPoly) -> MPoly:
    if q.is_zero():
        raise DivisionByZero("exact division by the zero polynomial")
    try:
        return MPoly(p._p / q._p)
    except _FlintDomainError:
        _, r = divmod(p._p, q._p)
        raise NotDivisible(format_monomial(tuple(map(int, r.monomial(0))))) from None


def _rational_sqrt(c: Fraction) -> Optional[Fraction]:
    if c < 0:
        return None
    a, b = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if a * a != c.numerator or b * b != c.denominator:
        return None
    return Fraction(a, b)


def mp_sqrt_exact(p: MPoly) -> MPoly:
    """Square root with positive grlex-leading coefficient.

    Terms of the root are peeled off in grlex order: each step divides the
    leading term of the remaining residual by twice the root's leading term.
    """
    if p.is_zero():
        raise NotASquare("zero has no normalized square root")
    lead_e, lead_c = p.leading_term()
    if any(k % 2 for k in lead_e):
        raise NotASquare(f"leading monomial {format_monomial(lead_e)} is not a square")
    root_c = _rational_sqrt(lead_c)
    if root_c is None:
        raise NotASquare(f"leading coefficient {lead_c} is not a rational square")
    r0_e = tuple(k // 2 for k in lead_e)
    r0 = _CTX.from_dict({r0_e: _to_fmpq(root_c)})
    two_r0_c = _to_fmpq(2 * root_c)
    root = r0
    resid = p._p - r0 * r0
    last_e = r0_e
    while not resid.is_zero():
        e = tuple(map(int, resid.monomial(0)))
        te = tuple(a - b for a, b in zip(e, r0_e))
        if min(te) < 0 or not _grlex_less(te, last_e):
            raise NotASquare(f"residual term {format_monomial(e)} cannot be matched")
        t = _CTX.from_dict({te: resid.coefficient(0) / two_r0_c})
        resid = resid - (2 * root + t) * t
        root = root + t
        last_e = te
    return MPoly(root)


def _grlex_less(a: Exponents, b: Exponents) -> bool:
    sa, sb = sum(a), sum(b)
    return sa < sb if sa != sb else a < b


def mp_pseudo_rem(p: MPoly, q: MPoly, var: str) -> Tuple[MPoly, MPoly]:
    """Classical pseudo-remainder.  Returns ``(rem, unit)`` with
    ``unit = lc(q)^(deg p - deg q + 1)`` (or 1 when ``deg p < deg q``) and
    ``unit*p - rem`` divisible by ``q``."""
    dq = q.degree(var)
    if dq < 1:
        raise ValueError(f"divisor must have positive degree in {var}")
    dp = p.degree(var)
    if dp < dq:
        return p, MPoly.const(1)
    qc = q.coeffs_in(var)
    lc = qc[dq]
    v = MPoly.var(var)
    rem = p
    for k in range(dp, dq - 1, -1):
        ck = rem.coeffs_in(var).get(k)
        rem = lc * rem
        if ck is not None:
            rem = rem - ck * v ** (k - dq) * q
    return rem, lc ** (dp - dq + 1)


def sylvester_matrix(p: MPoly, q: MPoly, var: str) -> List[List[MPoly]]:
    m, n = p.degree(var), q.degree(var)
    pc, qc = p.coeffs_in(var), q.coeffs_in(var)
    zero = MPoly()
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + m - k] = pc.get(k, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + n - k] = qc.get(k, zero)
        rows.append(row)
    return rows


def bareiss_det(matrix: List[List[MPoly]]) -> MPoly:
    """Fraction-free determinant; every intermediate division is exact."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return MPoly.const(1)
    sign = 1
    prev = MPoly.const(1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return MPoly()
        piv = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                val = piv._p * ri[j]._p
                if not aik.is_zero() and not rk[j].is_zero():
                    val = val - aik._p * rk[j]._p
                ri[j] = MPoly(val / prev._p) if not prev == 1 else MPoly(val)
            ri[k] = MPoly()
        prev = piv
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def mp_resultant(p: MPoly, q: MPoly, var: str, method: str = "bareiss") -> MPoly:
    """Resultant in ``var`` under the Sylvester-determinant sign convention.

    ``method="bareiss"`` eliminates the Sylvester matrix fraction-free;
    ``method="flint"`` uses FLINT's own resultant.
    """
    if p.degree(var) < 1 or q.degree(var) < 1:
        raise ValueError(f"both polynomials need positive degree in {var}")
    if method == "bareiss":
        return bareiss_det(sylvester_matrix(p, q, var))
    if method == "flint":
        return MPoly(p._p.resultant(q._p, var))
    raise ValueError(f"unknown resultant method {method!r}")


def mp_coeff(p: MPoly, pattern: Mapping[str, int]) -> MPoly:
    """Coefficient of the monomial ``pattern`` in the symbols it names."""
    idx = [(_sym_index(s), k) for s, k in pattern.items()]
    out = {}
    for e, c in p._p.terms():
        if all(e[i] == k for i, k in idx):
            ee = list(e)
            for i, _ in idx:
                ee[i] = 0
            out[tuple(ee)] = c
    return MPoly(_CTX.from_dict(out))


def mp_content(p: MPoly, var: str) -> MPoly:
    """Monic gcd of the coefficients of ``p`` viewed as a polynomial in ``var``."""
    cs = list(p.coeffs_in(var).values())
    if not cs:
        return MPoly()
    g = reduce(lambda a, b: a.gcd(b), (c._p for c in cs))
    return MPoly(g)


def integer_normalize(p: MPoly) -> Tuple[MPoly, Fraction]:
    """Scale to coprime integer coefficients with positive leading coefficient.

    Returns ``(q, scale)`` with ``p = scale * q``.
    """
    if p.is_zero():
        return p, Fraction(1)
    coeffs = [c for _, c in p.terms()]
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in coeffs), 1)
    g = reduce(math.gcd, (abs(c.numerator) * (den // c.denominator) for c in coeffs))
    scale = Fraction(g, den)
    if coeffs[0] < 0:
        scale = -scale
    return p / scale, scale


def monomial_content(p: MPoly) -> Exponents:
    """Exponent vector of the largest monomial dividing every term."""
    if p.is_zero():
        return _ZERO_EXP
    ms = p._p.monoms()
    return tuple(int(min(col)) for col in zip(*ms))


def mp_primitive_part(p: MPoly, var: str) -> Tuple[MPoly, MPoly]:
    """Remove the content with respect to ``var`` and normalize to integer
    coefficients with positive leading coefficient.  Returns ``(prim, content)``
    with ``p = content * prim``."""
    g = mp_content(p, var)
    prim = mp_divexact(p, g)
    prim, scale = integer_normalize(prim)
    return prim, g * scale


def _subst_value(value) -> Tuple[MPoly, MPoly]:
    rf = RatFunc.coerce(value)
    return rf.num, rf.den


def mp_subst(p: MPoly, assignment: Mapping[str, object]) -> RatFunc:
    """Simultaneous substitution of rational functions for symbols."""
    vals = {}
    for sym, value in assignment.items():
        _sym_index(sym)
        num, den = _subst_value(value)
        if den.is_zero():
            raise DivisionByZero(f"value for {sym} has zero denominator")
        vals[sym] = (num, den)
    if not vals:
        return RatFunc(p)
    if all(den.is_constant() for _, den in vals.values()):
        poly = {s: num / den.constant_value() for s, (num, den) in vals.items()}
        return RatFunc(p.compose(poly))
    order = _substitution_order(vals)
    if order is None:
        return _subst_by_terms(p, vals)
    num = p
    den = MPoly.const(1)
    for sym in order:
        n_s, d_s = vals[sym]
        parts = num.coeffs_in(sym)
        if not parts:
            continue
        top = max(parts)
        if top == 0:
            continue
        dpow = [MPoly.const(1)]
        for _ in range(top):
            dpow.append(dpow[-1] * d_s)
        acc = parts[top]
        for k in range(top - 1, -1, -1):
            acc = acc * n_s
            if k in parts:
                acc = acc + parts[k] * dpow[top - k]
        num = acc
        den = den * dpow[top]
    return RatFunc(num, den)


def _substitution_order(vals) -> Optional[List[str]]:
    # sym r must be processed before s whenever r (a different substituted
    # symbol) occurs in the value for s.
    deps = {
        s: {r for r in set(n.symbols()) | set(d.symbols()) if r in vals and r != s}
        for s, (n, d) in vals.items()
    }
    order: List[str] = []
    done: set = set()
    while len(order) < len(vals):
        ready = [s for s in SYMBOLS if s in vals and s not in done and deps[s] <= done]
        if not ready:
            return None
        order.append(ready[0])
        done.add(ready[0])
    return order


def _subst_by_terms(p: MPoly, vals) -> RatFunc:
    syms = [s for s in SYMBOLS if s in vals]
    idx = [_sym_index(s) for s in syms]
    top = {s: p.degree(s) for s in syms}
    cache: Dict[Tuple[str, int], MPoly] = {}

    def piece(s, k):
        key = (s, k)
        if key not in cache:
            n_s, d_s = vals[s]
            cache[key] = n_s ** k * d_s ** (top[s] - k)
        return cache[key]

    groups: Dict[Tuple[int, ...], dict] = {}
    for e, c in p.raw_terms():
        key = tuple(e[i] for i in idx)
        ee = list(e)
        for i in idx:
            ee[i] = 0
        groups.setdefault(key, {})[tuple(ee)] = c
    num = MPoly()
    for key, g in groups.items():
        term = MPoly(_CTX.from_dict(g))
        for s, k in zip(syms, key):
            term = term * piece(s, k)
        num = num + term
    den = MPoly.const(1)
    for s in syms:
        den = den * vals[s][1] ** top[s]
    return RatFunc(num, den)
