"""Constructive (r, s, l) realizations of admissible discriminant actions."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional

from .actions import (
    Action,
    ActionError,
    admissible_actions,
    check_triple,
    compose,
    equivalent,
    is_admissible,
    negate,
    predicted_rho_action,
    rho_action,
    rho_witness,
)


class DecompositionError(ValueError):
    """No verified chain was found for an admissible target."""


@dataclass(frozen=True)
class RSL:
    r: int
    s: int
    l: int
    div: int = 1
    n: int = field(default=0, compare=False)
    m: int = field(default=0, compare=False)

    def __post_init__(self):
        try:
            check_triple(self.r, self.s, self.l, self.div)
        except ActionError as exc:
            raise DecompositionError(str(exc)) from exc
        w = rho_witness(self.r, self.s, self.l, self.div)
        object.__setattr__(self, "n", w.n)
        object.__setattr__(self, "m", w.m)

    @property
    def d(self) -> int:
        if self.div == 1:
            return self.r * self.s - self.l ** 2
        return 4 * self.r * self.s - self.l ** 2

    @property
    def t(self) -> Optional[int]:
        """``2l/r`` for divisibility 1."""
        return 2 * self.l // self.r if self.div == 1 else None

    def action(self, model_name: str = "reduced") -> Action:
        return rho_action(self.r, self.s, self.l, self.div, model_name)

    def as_tuple(self) -> tuple:
        return self.r, self.s, self.l


@dataclass(frozen=True)
class DecompositionChain:
    """Steps applied in order; ``negated`` records a final ``-id``."""

    steps: tuple
    target: Action
    verified_actions: tuple
    negated: bool = False

    def __post_init__(self):
        if not self.steps or len(self.steps) != len(self.verified_actions):
            raise DecompositionError("chain needs one verified action per step")
        got = self.composed()
        want = negate(self.target) if self.negated else self.target
        if got != want:
            raise DecompositionError(f"chain realizes {got}, not {want}")

    def composed(self) -> Action:
        out = self.verified_actions[0]
        for act in self.verified_actions[1:]:
            # action of phi_1 ∘ phi_0 is compose(action phi_0, action phi_1)
            out = compose(out, act)
        return out

    @property
    def twist_free(self) -> bool:
        """Whether every step has ``t`` odd (always true in divisibility 2)."""
        return all(st.div == 2 or st.t % 2 for st in self.steps)


def coprime_splits(d: int) -> list[tuple[int, int]]:
    """Ordered pairs ``(r, k)`` with ``r*k == d`` and ``gcd(r, k) == 1``."""
    if d < 1:
        raise ValueError("d must be positive")
    return [(r, d // r) for r in range(1, d + 1) if d % r == 0 and gcd(r, d // r) == 1]


def _try(*args) -> Optional[RSL]:
    try:
        return RSL(*args)
    except DecompositionError:
        return None


def b0_candidates(d: int) -> list[RSL]:
    """``l = r``, ``s = r + k`` for each coprime split ``d = r*k`` (``t = 2``)."""
    return [RSL(r, r + k, r) for r, k in coprime_splits(d)]


def b1_candidates(d: int) -> list[RSL]:
    """Triples with ``t = 1`` from the odd and 8 | d recipes."""
    out = []
    if d % 4 == 1:
        for u, v in coprime_splits(d):
            rsl = _try(2 * u, (u + v) // 2, u)
            if rsl is not None:
                out.append(rsl)
    elif d % 8 == 0:
        two = d & -d
        odd = d // two
        for u, v in coprime_splits(odd):
            rsl = _try(two * u, v + two // 4 * u, two // 2 * u)
            if rsl is not None:
                out.append(rsl)
    return out


def _single(target: Action, cands: Iterable[RSL]) -> Optional[DecompositionChain]:
    for rsl in cands:
        act = rsl.action()
        if act == target or act == negate(target):
            return DecompositionChain((rsl,), target, (act,), act != target)
    return None


def _pairs(target: Action, first: list[RSL], second: list[RSL]) -> Optional[DecompositionChain]:
    for x in first:
        ax = x.action()
        for y in second:
            ay = y.action()
            got = compose(ax, ay)
            if equivalent(got, target):
                return DecompositionChain((x, y), target, (ax, ay), got != target)
    return None


def decompose_div1(d: int, target: Action, twist_free: bool = False,
                   fallback_bound: Optional[int] = None) -> DecompositionChain:
    """Chain of at most two reflections realizing ``target`` up to negation.

    With ``twist_free`` only steps with ``t`` odd are allowed, which is
    possible only when ``d = 1 mod 4`` or ``8 | d``.
    """
    if target.div != 1 or target.d != d or not is_admissible(d, 1, target.a, target.b):
        raise ActionError(f"{target} is not an admissible divisibility-1 action for d={d}")
    ones = b1_candidates(d)
    if twist_free:
        chain = (_single(target, ones) if target.b else _pairs(target, ones, ones))
        if chain is not None:
            return chain
    else:
        chain = _single(target, b0_candidates(d) if target.b == 0 else ones)
        if chain is not None:
            return chain
        if target.b:
            # b = 0 corrector first, then a b = 1 step; admissible a may be even,
            # so search instead of inverting
            for y in ones:
                ay = y.action()
                for a0 in admissible_actions(d, 1):
                    if a0.b or not equivalent(compose(a0, ay), target):
                        continue
                    x = _single(a0, b0_candidates(d))
                    if x is not None:
                        ax = x.verified_actions[0]
                        got = compose(ax, ay)
                        return DecompositionChain((x.steps[0], y), target, (ax, ay),
                                                  got != target)
    bound = fallback_bound if fallback_bound is not None else 4 * d
    rsl = fallback_search(d, target, bound, odd_t=twist_free)
    if rsl is not None:
        act = rsl.action()
        return DecompositionChain((rsl,), target, (act,), act != target)
    raise DecompositionError(f"no chain found for {target} (d={d}, twist_free={twist_free})")


def decompose_div2(d: int, target: Action) -> DecompositionChain:
    """``r = gcd(a-1, d)``, ``k = gcd(a+1, d)``, ``l = r``, ``s = (k + r)/4``."""
    if d % 4 != 3:
        raise ActionError("divisibility 2 needs d = 3 mod 4")
    if target.div != 2 or target.d != d:
        raise ActionError(f"{target} is not a divisibility-2 action for d={d}")
    a = target.a
    r, k = gcd(a - 1, d), gcd(a + 1, d)
    rsl = RSL(r, (k + r) // 4, r, 2)
    act = rsl.action()
    if not equivalent(act, target):
        raise DecompositionError(f"recipe {rsl.as_tuple()} realizes {act}, not {target}")
    return DecompositionChain((rsl,), target, (act,), act != target)


def decompose(d: int, target: Action, twist_free: bool = False) -> DecompositionChain:
    if target.div == 2:
        return decompose_div2(d, target)
    return decompose_div1(d, target, twist_free=twist_free)


def fallback_search(d: int, target: Action, bound: int, odd_t: bool = False) -> Optional[RSL]:
    """First triple in ``(r, s, |l|, sign)`` order realizing ``target`` up to negation.

    ``r`` and ``s`` range over ``1..bound``, ``l`` over ``-bound..bound``.
    Candidates are screened with the closed form, then checked exactly.
    """
    if bound < 1:
        raise ValueError("bound must be positive")
    if target.d != d or not is_admissible(d, target.div, target.a, target.b):
        return None
    div = target.div
    for r in range(1, bound + 1):
        for l_abs in range(0, bound + 1):
            num = d + l_abs * l_abs
            if div == 2:
                if num % (4 * r):
                    continue
                s = num // (4 * r)
            else:
                if num % r:
                    continue
                s = num // r
            if s < 1 or s > bound:
                continue
            for l in ((l_abs, -l_abs) if l_abs else (0,)):
                rsl = _try(r, s, l, div)
                if rsl is None or (odd_t and div == 1 and rsl.t % 2 == 0):
                    continue
                if not equivalent(predicted_rho_action(r, s, l, div), target):
                    continue
                if equivalent(rsl.action(), target):
                    return rsl
    return None


__all__ = [
    "DecompositionChain",
    "DecompositionError",
    "RSL",
    "b0_candidates",
    "b1_candidates",
    "coprime_splits",
    "decompose",
    "decompose_div1",
    "decompose_div2",
    "fallback_search",
]
