"""Generalized Weierstrass curves and their standard quantities."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .exactpoly import RatFunc, as_mpoly


class SingularCurve(ValueError):
    """The discriminant vanishes (identically, for symbolic curves)."""


@dataclass(frozen=True)
class StandardQuantities:
    b2: RatFunc
    b4: RatFunc
    b6: RatFunc
    b8: RatFunc
    c4: RatFunc
    c6: RatFunc
    disc: RatFunc
    j: RatFunc

    def relations_hold(self) -> bool:
        return (
            4 * self.b8 == self.b2 * self.b6 - self.b4 ** 2
            and 1728 * self.disc == self.c4 ** 3 - self.c6 ** 2
            and self.j * self.disc == self.c4 ** 3
        )


def _rf(value) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    return RatFunc(as_mpoly(value))


@dataclass(frozen=True)
class WeierstrassCurve:
    """``y^2 + a1*x*y + a3*y = x^3 + a2*x^2 + a4*x + a6``.

    Coefficients may be rationals or rational functions of family
    parameters.  Construction rejects curves whose discriminant is zero
    (identically zero, in the symbolic case).
    """

    a1: RatFunc
    a2: RatFunc
    a3: RatFunc
    a4: RatFunc
    a6: RatFunc

    def __init__(self, a1=0, a2=0, a3=0, a4=0, a6=0):
        for name, value in zip(("a1", "a2", "a3", "a4", "a6"), (a1, a2, a3, a4, a6)):
            object.__setattr__(self, name, _rf(value))
        if _b_invariants(self)[-1].is_zero():
            raise SingularCurve(f"discriminant of {self.a_invariants_str()} is zero")

    @classmethod
    def from_a(cls, a: Sequence) -> "WeierstrassCurve":
        if len(a) != 5:
            raise ValueError("expected five a-invariants [a1, a2, a3, a4, a6]")
        return cls(*a)

    @property
    def a(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def a_invariants_str(self) -> str:
        return "[" + ", ".join(str(v) for v in self.a) + "]"

    def specialize(self, assignment: Mapping[str, object]) -> "WeierstrassCurve":
        return WeierstrassCurve(*(v.subst(assignment) for v in self.a))

    def to_json(self) -> dict:
        return {"a": [str(v) for v in self.a]}

    @classmethod
    def from_json(cls, obj) -> "WeierstrassCurve":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_a([RatFunc.parse(s) for s in obj["a"]])


def _b_invariants(c: WeierstrassCurve):
    a1, a2, a3, a4, a6 = c.a
    b2 = a1 ** 2 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 ** 2 + 4 * a6
    b8 = a1 ** 2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 ** 2 - a4 ** 2
    disc = -(b2 ** 2) * b8 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, disc


def standard_quantities(c: WeierstrassCurve) -> StandardQuantities:
    b2, b4, b6, b8, disc = _b_invariants(c)
    if disc.is_zero():
        raise SingularCurve("discriminant is zero")
    c4 = b2 ** 2 - 24 * b4
    c6 = -(b2 ** 3) + 36 * b2 * b4 - 216 * b6
    j = c4 ** 3 / disc
    return StandardQuantities(b2, b4, b6, b8, c4, c6, disc, j)


def torsion_image_equal(c1: WeierstrassCurve, c2: WeierstrassCurve) -> bool:
    """True iff the two curves share b2, b4 and b6.

    Equal b-invariants are equivalent to equal images of the torsion under
    the x-coordinate projection.
    """
    q1, q2 = standard_quantities(c1), standard_quantities(c2)
    return q1.b2 == q2.b2 and q1.b4 == q2.b4 and q1.b6 == q2.b6


def complete_square(c: WeierstrassCurve) -> WeierstrassCurve:
    """The model reached by ``y -> y - (a1*x + a3)/2``; it has a1 = a3 = 0."""
    a1, a2, a3, a4, a6 = c.a
    return WeierstrassCurve(
        0,
        a2 + a1 ** 2 / 4,
        0,
        a4 + a1 * a3 / 2,
        a6 + a3 ** 2 / 4,
    )
