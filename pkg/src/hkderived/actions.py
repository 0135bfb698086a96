"""Discriminant actions of isometries between transcendental lattices.

An action is recorded by the image of the canonical generator ``gamma``:
``gamma -> a*gamma + b*delta`` in divisibility 1 and ``gamma -> a*gamma`` in
divisibility 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional

from .discriminant import DiscElement, DiscGroup, GluedComplement, glued
from .k3 import RatIsometry, class_of, maps_onto, rho_r
from .lattice import LatticeError


class ActionError(ValueError):
    """Raised for inadmissible or incompatible actions."""


def is_admissible(d: int, div: int, a: int, b: int = 0) -> bool:
    if div == 1:
        return (a * a + b * d - 1) % (4 * d) == 0
    return (a * a - 1) % d == 0 and b == 0


@dataclass(frozen=True, order=True)
class Action:
    div: int
    d: int
    a: int
    b: int = 0

    def __post_init__(self):
        if self.div not in (1, 2) or self.d < 1:
            raise ActionError(f"bad parameters div={self.div}, d={self.d}")
        if self.div == 2 and self.b:
            raise ActionError("divisibility 2 actions carry no b component")
        object.__setattr__(self, "a", self.a % self.modulus)
        object.__setattr__(self, "b", self.b % 2)
        if not is_admissible(self.d, self.div, self.a, self.b):
            raise ActionError(f"action {self} violates the admissibility congruence")

    @property
    def modulus(self) -> int:
        return 2 * self.d if self.div == 1 else self.d

    def canonical(self) -> int:
        """Representative of ``a`` up to sign."""
        return min(self.a, self.modulus - self.a)

    def __str__(self) -> str:
        return f"({self.a},{self.b})" if self.div == 1 else str(self.a)


def identity_action(d: int, div: int) -> Action:
    return Action(div, d, 1 % (2 * d if div == 1 else d), 0)


def admissible_actions(d: int, div: int) -> list[Action]:
    """All form-compatible images of ``gamma``, sorted by ``(b, a)``."""
    if d < 1:
        raise ActionError("d must be positive")
    if div == 1:
        return [Action(1, d, a, b) for b in (0, 1) for a in range(2 * d)
                if is_admissible(d, 1, a, b)]
    if div == 2:
        if d % 4 != 3:
            raise ActionError("divisibility 2 needs d = 3 mod 4")
        return [Action(2, d, a) for a in range(d) if is_admissible(d, 2, a)]
    raise ActionError(f"unknown divisibility {div}")


# Abstract model: gamma of order 2d with q = -1/(2d), delta of order 2 with
# q = -1/2, orthogonal (divisibility 1); gamma of order d with q = -2/d
# (divisibility 2).
@lru_cache(maxsize=None)
def abstract_disc(d: int, div: int) -> DiscGroup:
    if div == 1:
        return DiscGroup((2 * d, 2), ((Fraction(-1, 2 * d), 0), (0, Fraction(1, 2))),
                         (Fraction(-1, 2 * d), Fraction(-1, 2)))
    if d == 1:
        return DiscGroup((), (), ())
    return DiscGroup((d,), ((Fraction(-2, d),),), (Fraction(-2, d),))


def full_map(act: Action) -> tuple[DiscElement, ...]:
    """Images of the abstract generators under the automorphism determined by ``act``."""
    D = abstract_disc(act.d, act.div)
    if act.div == 2:
        return (D.element((act.a,)),) if D.orders else ()
    g = D.element((act.a, act.b))
    # delta must go to the order-2 class orthogonal to the image of gamma
    # with q = -1/2 that is not a multiple of it
    cands = [t for t in D.two_torsion()
             if not t.is_zero() and t != act.d * g and D.bilinear(t, g) == 0
             and D.quadratic(t) == Fraction(3, 2)]
    if len(cands) != 1:
        raise ActionError(f"no unique image of delta for {act}")
    return g, cands[0]


def apply_map(images: tuple[DiscElement, ...], x: DiscElement) -> DiscElement:
    out = x.group.zero()
    for c, img in zip(x.coeffs, images):
        out = out + c * img
    return out


def compose(act1: Action, act2: Action) -> Action:
    """Action of ``act1 ∘ act2`` (apply ``act2`` first) on the full group."""
    if (act1.d, act1.div) != (act2.d, act2.div):
        raise ActionError("actions live on different groups")
    if act1.div == 2:
        return Action(2, act1.d, act1.a * act2.a)
    m1, m2 = full_map(act1), full_map(act2)
    img = apply_map(m1, m2[0])
    return Action(1, act1.d, img.coeffs[0], img.coeffs[1])


def negate(act: Action) -> Action:
    """Action composed with ``-id``."""
    return Action(act.div, act.d, -act.a, act.b)


def equivalent(act1: Action, act2: Action) -> bool:
    if (act1.d, act1.div) != (act2.d, act2.div):
        raise ActionError("actions live on different groups")
    return act2 in (act1, negate(act1))


def negation_classes(actions: list[Action]) -> list[Action]:
    """One representative per negation class (the one with smaller ``a``)."""
    seen: dict = {}
    for act in actions:
        key = (act.b, act.canonical())
        if key not in seen or act.a < seen[key].a:
            seen[key] = act
    return sorted(seen.values(), key=lambda x: (x.b, x.a))


def induced_action(iso: RatIsometry, src: GluedComplement, dst: GluedComplement) -> Action:
    """Exact action of ``iso: T_src -> T_dst`` via the pulled-back ``gamma`` of the target."""
    if (src.d, src.div) != (dst.d, dst.div):
        raise ActionError("source and target have different discriminant forms")
    if not maps_onto(iso, src.T, dst.T):
        raise ActionError("isometry is not integral on the source or misses the target")
    pulled = iso.inverse(dst.gamma_lift)
    x = src.disc.element_of(pulled)
    a, b = src.canonical_coords(x)
    return Action(src.div, src.d, a, b)


@dataclass(frozen=True)
class RhoWitness:
    """Bezout data ``r*n + s*m = 1`` (div 1) or ``r*n + 2s*m = 1`` (div 2)."""

    n: int
    m: int
    t: Optional[int]


def check_triple(r: int, s: int, l: int, div: int) -> int:
    """Validate a triple for the reflection formulas and return ``d``."""
    if r < 1 or s < 1:
        raise ActionError("r and s must be positive")
    if gcd(r, s) != 1:
        raise ActionError(f"gcd(r, s) = {gcd(r, s)} != 1")
    if div == 1:
        if (2 * l) % r:
            raise ActionError("r must divide 2l")
        d = r * s - l * l
    elif div == 2:
        if r % 2 == 0 or l % 2 == 0 or l % r:
            raise ActionError("r and l must be odd with r | l")
        d = 4 * r * s - l * l
    else:
        raise ActionError(f"unknown divisibility {div}")
    if d <= 0:
        raise ActionError(f"d = {d} is not positive")
    return d


def rho_witness(r: int, s: int, l: int, div: int) -> RhoWitness:
    """Canonical witness: the least ``m >= 0`` solving the Bezout relation."""
    check_triple(r, s, l, div)
    coef = s if div == 1 else 2 * s
    m = pow(coef, -1, r) if r > 1 else 0
    n = (1 - coef * m) // r
    return RhoWitness(n, m, 2 * l // r if div == 1 else None)


def predicted_rho_action(r: int, s: int, l: int, div: int,
                         witness: Optional[RhoWitness] = None) -> Action:
    """Closed-form action of the reflection in ``e - r f``.

    Divisibility 1 (``T -> T'``): ``a = -l*t*m + 2*s*m - 1`` with ``t = 2l/r``,
    ``b = t*m mod 2``. Divisibility 2 (``T̄' -> T̄``): ``a = 1 - d*m/r``.
    """
    d = check_triple(r, s, l, div)
    w = witness or rho_witness(r, s, l, div)
    if div == 1:
        if r * w.n + s * w.m != 1:
            raise ActionError("witness does not solve r*n + s*m = 1")
        t = 2 * l // r
        return Action(1, d, -l * t * w.m + 2 * s * w.m - 1, t * w.m)
    if r * w.n + 2 * s * w.m != 1:
        raise ActionError("witness does not solve r*n + 2*s*m = 1")
    return Action(2, d, 1 - d * w.m // r)


def stated_delta_coefficient(r: int, l: int) -> int:
    """The alternative coefficient ``2l/r mod 2``, kept for comparison with ``t*m mod 2``."""
    return (2 * l // r) % 2


def rho_endpoints(r: int, s: int, l: int, div: int, model_name: str = "reduced"):
    """Source and target complements for the reflection: ``T -> T'`` or ``T̄' -> T̄``."""
    check_triple(r, s, l, div)
    if div == 1:
        src, dst = class_of("L", r, s, l, model_name), class_of("L'", r, s, l, model_name)
    else:
        src, dst = class_of("Lbar'", r, s, l, model_name), class_of("Lbar", r, s, l, model_name)
    return glued(src, model_name), glued(dst, model_name)


@lru_cache(maxsize=65536)
def rho_action(r: int, s: int, l: int, div: int, model_name: str = "reduced") -> Action:
    """Exact action of the reflection in ``e - r f`` for the triple."""
    src, dst = rho_endpoints(r, s, l, div, model_name)
    try:
        return induced_action(rho_r(r, model_name), src, dst)
    except LatticeError as exc:
        raise ActionError(str(exc)) from exc


__all__ = [
    "Action",
    "ActionError",
    "RhoWitness",
    "abstract_disc",
    "admissible_actions",
    "apply_map",
    "check_triple",
    "compose",
    "equivalent",
    "full_map",
    "identity_action",
    "induced_action",
    "is_admissible",
    "negate",
    "negation_classes",
    "predicted_rho_action",
    "rho_action",
    "rho_endpoints",
    "rho_witness",
    "stated_delta_coefficient",
]
