"""Derived vs twisted verdicts, partner counts, B-lifts and Mukai-vector formulas."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Sequence

from .actions import ActionError, admissible_actions, negation_classes
from .decompose import RSL
from .k3 import class_of, model
from .lattice import in_rational_span


class VerdictKind(str, Enum):
    DERIVED = "Derived"
    TWISTED = "TwistedHalfDelta"


def tau(d: int) -> int:
    """Number of distinct prime divisors, with ``tau(1) = 1``."""
    if d < 1:
        raise ValueError("d must be positive")
    if d == 1:
        return 1
    count, p = 0, 2
    while p * p <= d:
        if d % p == 0:
            count += 1
            while d % p == 0:
                d //= p
        p += 1
    return count + (d > 1)


def is_derived(d: int, div: int) -> bool:
    return div == 2 or d % 4 == 1 or d % 8 == 0


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    d: int
    div: int
    tau: int
    partners_raw: int
    partners_mod_negation: int
    b_split: dict = field(default_factory=dict, compare=False)
    matches: dict = field(default_factory=dict, compare=False)
    warnings: tuple = ()


def _check(d: int, div: int) -> None:
    if d < 1:
        raise ActionError("d must be positive")
    if div not in (1, 2):
        raise ActionError(f"unknown divisibility {div}")
    if div == 2 and d % 4 != 3:
        raise ActionError("divisibility 2 needs d = 3 mod 4")


def surplus_warning(d: int) -> str:
    acts = admissible_actions(d, 1)
    zero = [a.a for a in acts if a.b == 0]
    one = [a.a for a in acts if a.b == 1]
    classes = len(negation_classes(acts))
    return (f"b=1 surplus at d={d}: {len(acts)} admissible actions "
            f"(b=0: {', '.join(map(str, zero))}; b=1: {', '.join(map(str, one))}) "
            f"against 2^tau(d)={2 ** tau(d)} solutions of a^2=1 mod 4d; "
            f"{classes} classes up to negation")


def div2_count_warning(d: int) -> str:
    t = tau(d)
    return (f"divisibility-2 partner count at d={d}: two conventions disagree, "
            f"2^(tau-1)={2 ** (t - 1)} (classes up to negation) vs "
            f"2^tau={2 ** t} (raw actions)")


def classify(d: int, div: int) -> Verdict:
    _check(d, div)
    acts = admissible_actions(d, div)
    classes = negation_classes(acts)
    t = tau(d)
    warnings = []
    if div == 1:
        raw = sum(1 for a in acts if a.b == 0)
        split = {
            "b0_raw": raw,
            "b1_raw": len(acts) - raw,
            "b0_classes": sum(1 for a in classes if a.b == 0),
            "b1_classes": sum(1 for a in classes if a.b == 1),
        }
        matches = {
            "raw_equals_2^tau": raw == 2 ** t,
            "classes_equal_2^tau": len(classes) == 2 ** t,
        }
        if split["b1_raw"] and d > 1:
            warnings.append(surplus_warning(d))
    else:
        raw = len(acts)
        split = {"raw": raw, "classes": len(classes)}
        # two conventions in use; both are reported and a warning flags the split
        matches = {
            "classes_equal_2^(tau-1)": len(classes) == 2 ** (t - 1),
            "raw_equals_2^tau": raw == 2 ** t,
        }
        warnings.append(div2_count_warning(d))
    kind = VerdictKind.DERIVED if is_derived(d, div) else VerdictKind.TWISTED
    return Verdict(kind, d, div, t, raw, len(classes), split, matches, tuple(warnings))


@dataclass(frozen=True)
class BLift:
    """Rational class ``cls`` lifting a ``k``-torsion Brauer class, read modulo
    integral classes and ``(1/k) * span(pic)``."""

    cls: tuple
    order: int
    pic: tuple = ()

    def __post_init__(self):
        cls = tuple(Fraction(x) for x in self.cls)
        object.__setattr__(self, "cls", cls)
        object.__setattr__(self, "pic", tuple(tuple(int(x) for x in p) for p in self.pic))
        if self.order < 1:
            raise ValueError("order must be positive")
        if any((self.order * x).denominator != 1 for x in cls):
            raise ValueError("order * cls must be integral")
        if any(len(p) != len(cls) for p in self.pic):
            raise ValueError("Picard generators have the wrong length")


def blift_is_trivial(B: BLift) -> bool:
    n = len(B.cls)
    gens = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    gens += [tuple(Fraction(x, B.order) for x in p) for p in B.pic]
    return in_rational_span(gens, B.cls)


def blift_equiv(B1: BLift, B2: BLift) -> bool:
    if B1.order != B2.order:
        raise ValueError("B-lifts have different orders")
    if set(B1.pic) != set(B2.pic):
        raise ValueError("B-lifts carry different Picard data")
    diff = tuple(x - y for x, y in zip(B1.cls, B2.cls))
    return blift_is_trivial(BLift(diff, B1.order, B1.pic))


def half_delta(order: int, pic: Sequence, model_name: str = "reduced") -> BLift:
    """The canonical ``delta/2`` lift."""
    M = model(model_name)
    return BLift(tuple(Fraction(x, 2) for x in M.delta), order, tuple(pic))


def kernel_rank(n: int, r: int) -> int:
    if n < 1 or r < 1:
        raise ValueError("n and r must be positive")
    return factorial(n) * r ** n


def twist_pair(rsl: RSL, model_name: str = "reduced") -> tuple[BLift, BLift]:
    """B-lifts on the two sides of the reflection for the triple, with order ``2r^2``.

    Divisibility 1: ``L/r + (l/r - 1/2) delta`` and ``L'/r + (l/r + 1/2) delta``.
    Divisibility 2: ``Lbar/(2r) - (l+r)/(2r) delta`` and
    ``Lbar'/(2r) - (l-r)/(2r) delta``.
    """
    M = model(model_name)
    r, s, l = rsl.as_tuple()
    k = kernel_rank(2, r)
    if rsl.div == 1:
        x_pic, y_pic = class_of("L", r, s, l, model_name), class_of("L'", r, s, l, model_name)
        x_cls = [Fraction(a, r) + (Fraction(l, r) - Fraction(1, 2)) * c
                 for a, c in zip(x_pic, M.delta)]
        y_cls = [Fraction(a, r) + (Fraction(l, r) + Fraction(1, 2)) * c
                 for a, c in zip(y_pic, M.delta)]
    else:
        x_pic = class_of("Lbar", r, s, l, model_name)
        y_pic = class_of("Lbar'", r, s, l, model_name)
        x_cls = [Fraction(a, 2 * r) - Fraction(l + r, 2 * r) * c for a, c in zip(x_pic, M.delta)]
        y_cls = [Fraction(a, 2 * r) - Fraction(l - r, 2 * r) * c for a, c in zip(y_pic, M.delta)]
    return BLift(tuple(x_cls), k, (x_pic,)), BLift(tuple(y_cls), k, (y_pic,))


@dataclass(frozen=True)
class MukaiVector:
    """``(rank, c1 as a multiple of h, s)``."""

    rank: int
    c1_h: int
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "s", Fraction(self.s))

    @property
    def integral(self) -> bool:
        return self.s.denominator == 1

    def __str__(self) -> str:
        c1 = "h" if self.c1_h == 1 else f"{self.c1_h}h"
        return f"({self.rank},{c1},{self.s})"


def twisted_mukai_vector(c1A_deg: int, KC_deg: int) -> MukaiVector:
    return MukaiVector(0, 1, Fraction(8 - 2 * (c1A_deg + KC_deg), 4))


def line_bundle_vector(deg: int, g: int) -> MukaiVector:
    if g < 0:
        raise ValueError("genus must be nonnegative")
    return MukaiVector(0, 1, Fraction(deg + 1 - g))


def pushforward_rank(deg: int, g: int) -> int:
    """Rank of the pushforward of a degree-``deg`` line bundle on a genus-``g`` curve."""
    if g < 0:
        raise ValueError("genus must be nonnegative")
    return deg + 1 - g


def pk_picard_gram(k: int) -> tuple:
    if k < 2:
        raise ValueError("k must be at least 2")
    if k % 2:
        return ((2 * k * k, 2 * k), (2 * k, 0))
    return ((k * k // 2, k // 2), (k // 2, 0))


def gram_is_even(gram: Sequence[Sequence[int]]) -> bool:
    return all(gram[i][i] % 2 == 0 for i in range(len(gram)))


U2_GRAM = ((0, 2), (2, 0))
TWO_MINUS_TWO_GRAM = ((2, 0), (0, -2))


@dataclass(frozen=True)
class BabyCase:
    """Degree-2 polarization ``e + 10f - 3 delta`` and its partner data."""

    polarization: tuple
    partner_polarization: tuple
    h_M: tuple
    h_S: tuple
    bundle_rank: int
    twist: tuple


def baby_case(model_name: str = "reduced") -> BabyCase:
    M = model(model_name)
    eta = M.vec(1, 10, -3)
    partner = M.vec(2, 5, -3)
    h_M, h_S = M.vec(1, 10, 0), M.vec(2, 5, 0)
    k = kernel_rank(2, 2)
    half = lambda h: tuple(Fraction(a, 2) - Fraction(c, 2) for a, c in zip(h, M.delta))  # noqa: E731
    twist = (BLift(half(h_M), k, (eta,)), BLift(half(h_S), k, (partner,)))
    return BabyCase(eta, partner, h_M, h_S, k, twist)


__all__ = [
    "BLift",
    "BabyCase",
    "MukaiVector",
    "TWO_MINUS_TWO_GRAM",
    "U2_GRAM",
    "Verdict",
    "VerdictKind",
    "baby_case",
    "blift_equiv",
    "blift_is_trivial",
    "classify",
    "div2_count_warning",
    "gram_is_even",
    "half_delta",
    "is_derived",
    "kernel_rank",
    "line_bundle_vector",
    "pk_picard_gram",
    "pushforward_rank",
    "surplus_warning",
    "tau",
    "twist_pair",
    "twisted_mukai_vector",
]
