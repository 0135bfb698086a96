"""Discriminant groups T*/T with their finite bilinear and quadratic forms,
and the canonical generators attached to a polarization class L with
T = L^perp.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence

from .lattice import (
    IntLattice,
    LatticeError,
    Sublattice,
    det,
    divisibility,
    freeze,
    is_primitive,
    mat_vec,
    orthogonal_complement,
    pair,
    smith_normal_form,
    xgcd,
)


def mod1(x) -> Fraction:
    """Representative of ``x`` in ``[0, 1)``."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def mod2(x) -> Fraction:
    """Representative of ``x`` in ``[0, 2)``."""
    x = Fraction(x)
    return x - 2 * ((x.numerator // x.denominator) // 2)


@dataclass(frozen=True)
class DiscElement:
    group: "DiscGroup" = field(repr=False, compare=False, hash=False)
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != len(self.group.orders):
            raise LatticeError("coefficient vector has the wrong length")
        object.__setattr__(
            self, "coeffs", tuple(int(c) % n for c, n in zip(self.coeffs, self.group.orders))
        )

    def __add__(self, other: "DiscElement") -> "DiscElement":
        return DiscElement(self.group, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DiscElement") -> "DiscElement":
        return DiscElement(self.group, tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "DiscElement":
        return DiscElement(self.group, tuple(-x for x in self.coeffs))

    def __mul__(self, k: int) -> "DiscElement":
        return DiscElement(self.group, tuple(k * x for x in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class DiscGroup:
    """Finite quadratic form ``(Z/o_1 + ... + Z/o_k, bil mod 1, quad mod 2)``.

    ``gens`` holds ambient rational lifts of the generators when the group
    comes from a sublattice; abstract groups may leave it empty.
    """

    orders: tuple
    bil: tuple
    quad: tuple
    gens: tuple = ()
    lattice: Optional[Sublattice] = field(default=None, repr=False, compare=False)
    transform: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        k = len(self.orders)
        if any(n < 2 for n in self.orders):
            raise LatticeError("orders must exceed 1")
        object.__setattr__(self, "bil", freeze([[mod1(x) for x in row] for row in self.bil]))
        object.__setattr__(self, "quad", tuple(mod2(x) for x in self.quad))
        if len(self.bil) != k or len(self.quad) != k:
            raise LatticeError("form tables do not match the number of generators")
        for i in range(k):
            if mod1(self.quad[i]) != self.bil[i][i]:
                raise LatticeError("quadratic and bilinear values disagree")

    @property
    def size(self) -> int:
        out = 1
        for n in self.orders:
            out *= n
        return out

    def element(self, coeffs: Sequence[int]) -> DiscElement:
        return DiscElement(self, tuple(coeffs))

    def zero(self) -> DiscElement:
        return self.element((0,) * len(self.orders))

    def generators(self) -> list[DiscElement]:
        k = len(self.orders)
        return [self.element([int(i == j) for j in range(k)]) for i in range(k)]

    def elements(self) -> Iterator[DiscElement]:
        for c in product(*(range(n) for n in self.orders)):
            yield self.element(c)

    def bilinear(self, x: DiscElement, y: DiscElement) -> Fraction:
        k = len(self.orders)
        return mod1(sum(x.coeffs[i] * y.coeffs[j] * self.bil[i][j]
                        for i in range(k) for j in range(k)))

    def quadratic(self, x: DiscElement) -> Fraction:
        k = len(self.orders)
        c = x.coeffs
        v = sum(c[i] * c[i] * self.quad[i] for i in range(k))
        v += sum(2 * c[i] * c[j] * self.bil[i][j] for i in range(k) for j in range(i + 1, k))
        return mod2(v)

    def order(self, x: DiscElement) -> int:
        out = 1
        for c, n in zip(x.coeffs, self.orders):
            m = n // xgcd(c, n)[0]
            out = out * m // xgcd(out, m)[0]
        return out

    def two_torsion(self) -> list[DiscElement]:
        choices = [(0, n // 2) if n % 2 == 0 else (0,) for n in self.orders]
        return [self.element(c) for c in product(*choices)]

    # the remaining methods need the ambient sublattice

    def _require_lattice(self) -> Sublattice:
        if self.lattice is None:
            raise LatticeError("abstract discriminant group has no lattice")
        return self.lattice

    def element_of(self, x: Sequence) -> DiscElement:
        """Class of a rational ambient vector with integral pairings against T."""
        T = self._require_lattice()
        p = T.pairings(x)
        if any(Fraction(v).denominator != 1 for v in p):
            raise LatticeError("vector does not define an element of the dual lattice")
        return self.element(mat_vec(self.transform, [int(v) for v in p]))

    def lift(self, x: DiscElement) -> tuple:
        """A rational ambient representative of ``x``."""
        T = self._require_lattice()
        n = T.ambient.rank
        return tuple(sum(c * g[i] for c, g in zip(x.coeffs, self.gens)) for i in range(n))


def disc_group(T: Sublattice) -> DiscGroup:
    """Discriminant group of ``T`` read off the Smith normal form of its Gram matrix."""
    G = T.gram
    if det(G) == 0:
        raise LatticeError("degenerate lattice")
    U, D, V = smith_normal_form(G)
    k = len(G)
    idx = [i for i in range(k) if D[i][i] > 1]
    orders = tuple(D[i][i] for i in idx)
    # internal coordinates of the generators: columns of V scaled by 1/D_ii
    internal = [[Fraction(V[r][i], D[i][i]) for r in range(k)] for i in idx]
    GY = [mat_vec(G, y) for y in internal]
    bil = [[sum(a * b for a, b in zip(y, gz)) for gz in GY] for y in internal]
    gens = tuple(T.to_ambient(y) for y in internal)
    transform = freeze([U[i] for i in idx])
    return DiscGroup(orders, freeze(bil), tuple(bil[i][i] for i in range(len(idx))),
                     gens, T, transform)


def quad(g: DiscElement, D: Optional[DiscGroup] = None) -> Fraction:
    """Value of the quadratic form in ``[0, 2)``."""
    return (D or g.group).quadratic(g)


def _solve_pairing(L: IntLattice, v: Sequence[int], target: int) -> tuple:
    """An integral ``x`` with ``pair(x, v) == target`` (``target`` a multiple of div(v))."""
    row = [int(c) for c in L.pairing_row(v)]
    g, coeffs = 0, [0] * len(row)
    for i, c in enumerate(row):
        g2, p, q = xgcd(g, c)
        coeffs = [p * x for x in coeffs]
        coeffs[i] += q
        g = g2
    if target % g:
        raise LatticeError("pairing value is not a multiple of the divisibility")
    return tuple(target // g * x for x in coeffs)


@dataclass(frozen=True)
class GluedComplement:
    """``T = L^perp`` together with the canonical generators of ``disc T``.

    ``gamma`` is the class ``[q]`` with ``div*L/(2d) - q`` integral; for
    divisibility 1 ``delta`` is the order-2 class orthogonal to ``gamma``.
    """

    L: tuple
    div: int
    d: int
    T: Sublattice
    disc: DiscGroup
    gamma: DiscElement
    delta: Optional[DiscElement]
    gamma_lift: tuple
    gluing_index: int

    @property
    def modulus(self) -> int:
        return 2 * self.d if self.div == 1 else self.d

    def canonical_coords(self, x: DiscElement) -> tuple:
        """``(a, b)`` with ``x = a*gamma + b*delta`` (``b`` is 0 for divisibility 2)."""
        D = self.disc
        if self.div == 1:
            a = int(-2 * self.d * D.bilinear(x, self.gamma)) % (2 * self.d)
            rest = x - a * self.gamma
            if rest.is_zero():
                return a, 0
            if rest == self.delta:
                return a, 1
        else:
            # b(a C, C) = -2a/d with d odd
            v = int(-self.d * D.bilinear(x, self.gamma)) % self.d
            a = v * pow(2, -1, self.d) % self.d if self.d > 1 else 0
            if (x - a * self.gamma).is_zero():
                return a, 0
        raise LatticeError("element is not in the span of the canonical generators")

    def element(self, a: int, b: int = 0) -> DiscElement:
        out = a * self.gamma
        if b % 2:
            if self.delta is None:
                raise LatticeError("no delta generator in divisibility 2")
            out = out + self.delta
        return out


def glue(ambient: IntLattice, L: Sequence[int]) -> GluedComplement:
    """Build ``T = L^perp``, its discriminant group and the canonical generators."""
    L = tuple(int(c) for c in L)
    if not is_primitive(ambient, L):
        raise LatticeError("L is not primitive")
    sq = pair(ambient, L, L)
    if sq <= 0 or sq % 2:
        raise LatticeError("L must have positive even square")
    div = divisibility(ambient, L)
    if div not in (1, 2):
        raise LatticeError(f"unsupported divisibility {div}")
    d = sq // 2
    T = orthogonal_complement(ambient, L)
    D = disc_group(T)
    x = _solve_pairing(ambient, L, div)
    lift = tuple(Fraction(div * c, 2 * d) - xi for c, xi in zip(L, x))
    g = D.element_of(lift)

    index = abs(det([list(b) for b in T.basis] + [list(L)]))
    if index ** 2 * abs(ambient.det) != abs(det(T.gram)) * sq:
        raise LatticeError("gluing index check failed")
    expected = 4 * d if div == 1 else d
    if D.size != expected or D.order(g) != (2 * d if div == 1 else d):
        raise LatticeError("discriminant group has unexpected structure")

    delta = None
    if div == 1:
        cands = [t for t in D.two_torsion()
                 if not t.is_zero() and D.bilinear(t, g) == 0 and t != d * g]
        if len(cands) != 1:
            raise LatticeError("could not single out the order-2 generator")
        delta = cands[0]
    return GluedComplement(L, div, d, T, D, g, delta, lift, index)


@lru_cache(maxsize=4096)
def glued(L: tuple, model_name: str = "reduced") -> GluedComplement:
    from .k3 import model
    return glue(model(model_name).lattice, L)


def gamma(dval: int, div: int, T: Sublattice, L: Sequence[int]):
    """Canonical ``gamma(1)`` (and the ``delta`` generator for divisibility 1)."""
    G = glue(T.ambient, L)
    if G.d != dval or G.div != div:
        raise LatticeError("L does not have the stated square or divisibility")
    if tuple(G.T.basis) != tuple(T.basis):
        raise LatticeError("T is not the orthogonal complement of L")
    return (G.gamma, G.delta) if div == 1 else G.gamma


def form_signature(G: GluedComplement) -> tuple:
    """Model-independent summary: orders, q(gamma), q(delta), b(gamma, delta)."""
    D = G.disc
    out = [tuple(sorted(D.orders)), D.quadratic(G.gamma)]
    if G.delta is not None:
        out += [D.quadratic(G.delta), D.bilinear(G.gamma, G.delta)]
    return tuple(out)


__all__ = [
    "DiscElement",
    "DiscGroup",
    "GluedComplement",
    "disc_group",
    "form_signature",
    "gamma",
    "glue",
    "glued",
    "mod1",
    "mod2",
    "quad",
]
