"""Collision mining for Jordan's totients and the primitive degree D(n)."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from .arith import factorize, jordan


def spf_sieve(bound: int) -> List[int]:
    """Smallest prime factor of every n <= bound (linear sieve)."""
    spf = [0] * (bound + 1)
    primes: List[int] = []
    for i in range(2, bound + 1):
        if spf[i] == 0:
            spf[i] = i
            primes.append(i)
        si = spf[i]
        for p in primes:
            if p > si or p * i > bound:
                break
            spf[p * i] = p
    return spf


def primes_upto(bound: int) -> List[int]:
    if bound < 2:
        return []
    flags = bytearray([1]) * (bound + 1)
    flags[0] = flags[1] = 0
    for p in range(2, int(bound ** 0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, bound + 1, p)))
    return [i for i, f in enumerate(flags) if f]


def jordan_table(k: int, bound: int, spf: Sequence[int] = None) -> List[int]:
    """``J_k(n)`` for ``0 <= n <= bound`` (entry 0 is unused)."""
    spf = spf if spf is not None else spf_sieve(bound)
    J = [0] * (bound + 1)
    if bound >= 1:
        J[1] = 1
    for n in range(2, bound + 1):
        p = spf[n]
        m = n // p
        J[n] = J[m] * (p ** k if m % p == 0 else p ** k - 1)
    return J


Key = Union[int, str]


@dataclass
class CollisionReport:
    k: Key
    bound: int
    classes: List[Tuple[object, List[int]]] = field(default_factory=list)

    def pairs(self) -> List[List[int]]:
        return [ns for _, ns in self.classes]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "bound": self.bound,
            "classes": [{"value": _jsonable(v), "n": ns} for v, ns in self.classes],
        }

    def to_text(self) -> str:
        label = "D" if self.k == "D" else f"J_{self.k}"
        lines = [f"{label} collisions for n <= {self.bound}: {len(self.classes)} classes"]
        for v, ns in self.classes:
            lines.append(" = ".join(f"{label}({n})" for n in ns) + f" = {_jsonable(v)}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "value", "members"])
        for v, ns in self.classes:
            w.writerow([self.k, _jsonable(v), " ".join(map(str, ns))])
        return buf.getvalue()


def _jsonable(v):
    if isinstance(v, tuple):
        return [str(x) for x in v]
    return str(v)


def _classes(values: Iterable[Tuple[int, object]]) -> List[Tuple[object, List[int]]]:
    groups: Dict[object, List[int]] = {}
    for n, v in values:
        groups.setdefault(v, []).append(n)
    return sorted(((v, sorted(ns)) for v, ns in groups.items() if len(ns) > 1), key=lambda c: c[0])


def collision_scan(k: int, bound: int) -> CollisionReport:
    """All classes of n <= bound sharing a value of J_k, each re-verified by factorization."""
    if bound < 2:
        raise ValueError("bound must be at least 2")
    J = jordan_table(k, bound)
    classes = _classes((n, J[n]) for n in range(1, bound + 1))
    for v, ns in classes:
        if any(jordan(k, n) != v for n in ns):
            raise AssertionError(f"sieve and factorization disagree on {ns}")
    return CollisionReport(k, bound, classes)


def D_collision_scan(bound: int) -> CollisionReport:
    """Classes of 2 <= n <= bound sharing D(n) = J_2(n) I(n) / 2."""
    if bound < 2:
        raise ValueError("bound must be at least 2")
    J = jordan_table(2, bound)
    vals = ((n, J[n] * (2 if n == 2 else 1) // 2) for n in range(2, bound + 1))
    classes = _classes(vals)
    for v, ns in classes:
        if any(jordan(2, n) * (2 if n == 2 else 1) // 2 != v for n in ns):
            raise AssertionError(f"sieve and factorization disagree on {ns}")
    return CollisionReport("D", bound, classes)


@dataclass
class Prop20Report:
    part: str
    bound: int
    classes: List[Tuple[object, List[int]]]
    violations: List[str]
    expected: List[List[int]]
    checked: int

    @property
    def passed(self) -> bool:
        if self.violations:
            return False
        if self.part in ("A", "B"):
            return [ns for _, ns in self.classes] == self.expected
        return True

    def to_json(self) -> dict:
        return {
            "part": self.part,
            "bound": self.bound,
            "checked": self.checked,
            "classes": [{"value": _jsonable(v), "n": ns} for v, ns in self.classes],
            "violations": self.violations,
            "passed": self.passed,
        }

    def to_text(self) -> str:
        lines = [f"part {self.part}, bound {self.bound}: {self.checked} integers checked, "
                 f"{len(self.classes)} classes, {'PASS' if self.passed else 'FAIL'}"]
        for v, ns in self.classes:
            lines.append(f"  {ns} share {_jsonable(v)}")
        lines.extend(f"  violation: {msg}" for msg in self.violations)
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["part", "value", "members"])
        for v, ns in self.classes:
            w.writerow([self.part, _jsonable(v), " ".join(map(str, ns))])
        return buf.getvalue()


def _valuation(n: int, p: int) -> int:
    return factorize(n).get(p, 0)


def _part_c_violations(m: int, n: int) -> List[str]:
    fm, fn = factorize(m), factorize(n)
    out = []
    for p in (2, 3):
        if fm.get(p, 0) != fn.get(p, 0):
            out.append(f"v_{p}({m}) != v_{p}({n})")
    for p in sorted(set(fm) | set(fn)):
        if p in (2, 3) or p % 12 == 1:
            continue
        a, b = fm.get(p, 0), fn.get(p, 0)
        if a != b and {a, b} != {0, 1}:
            out.append(f"v_{p}: {a} vs {b} for ({m}, {n})")
    if len(fm) != len(fn):
        out.append(f"omega({m}) != omega({n})")
    return out


def prop20_scan(part: str, bound: int) -> Prop20Report:
    """Finite checks of the three arithmetic statements about totient collisions.

    A: prime powers with equal J_2 (expected: only 7 and 8).
    B: products of two distinct primes with equal J_2 and J_4 (expected: none).
    C: any m != n with equal J_2, J_4, J_6 must agree on v_2, v_3, omega and on
       v_p for p not 1 mod 12 up to swapping 0 and 1.
    """
    part = part.upper()
    if bound < 10:
        raise ValueError("bound must be at least 10")
    if part == "A":
        vals = []
        for p in primes_upto(bound):
            q = p
            while q <= bound:
                vals.append((q, q * q // (p * p) * (p * p - 1)))
                q *= p
        classes = _classes(vals)
        viol = [f"{ns}" for v, ns in classes if any(jordan(2, n) != v for n in ns)]
        return Prop20Report("A", bound, classes, viol, [[7, 8]] if bound >= 8 else [], len(vals))
    if part == "B":
        ps = primes_upto(bound // 2)
        vals = []
        for i, p in enumerate(ps):
            for q in ps[i + 1 :]:
                if p * q > bound:
                    break
                vals.append((p * q, ((p * p - 1) * (q * q - 1), (p ** 4 - 1) * (q ** 4 - 1))))
        classes = _classes(vals)
        viol = [f"{ns}" for v, ns in classes if any((jordan(2, n), jordan(4, n)) != v for n in ns)]
        return Prop20Report("B", bound, classes, viol, [], len(vals))
    if part == "C":
        spf = spf_sieve(bound)
        J2, J4, J6 = (jordan_table(k, bound, spf) for k in (2, 4, 6))
        classes = _classes((n, (J2[n], J4[n], J6[n])) for n in range(1, bound + 1))
        viol: List[str] = []
        for _, ns in classes:
            for i, m in enumerate(ns):
                for n in ns[i + 1 :]:
                    viol.extend(_part_c_violations(m, n))
        return Prop20Report("C", bound, classes, viol, [], bound)
    raise ValueError(f"unknown part {part!r}; expected A, B or C")
