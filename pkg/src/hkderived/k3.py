"""The K3^[2] lattice U^3 + E8(-1)^2 + <-2>, its rank-3 reduced model, and
the polarization families and reflections built on the classes e, f, delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .lattice import (
    IntLattice,
    LatticeError,
    Matrix,
    Sublattice,
    freeze,
    identity,
    mat_inverse,
    mat_mul,
    mat_vec,
    pair,
    transpose,
)

FAMILIES = ("L", "L'", "Lbar", "Lbar'")
MODELS = ("reduced", "full")

U_GRAM = ((0, 1), (1, 0))

# E8 Cartan matrix (Bourbaki labelling); E8(-1) is its negative.
_E8 = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)
E8_NEG = freeze([[-x for x in row] for row in _E8])


def block_diagonal(*blocks: Sequence[Sequence[int]]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return freeze(out)


@dataclass(frozen=True)
class K3Model:
    """One coordinate model of the lattice with distinguished classes e, f, delta."""

    name: str
    lattice: IntLattice
    e: tuple
    f: tuple
    delta: tuple

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def vec(self, ce: int = 0, cf: int = 0, cd: int = 0) -> tuple:
        """The vector ``ce*e + cf*f + cd*delta``."""
        return tuple(ce * a + cf * b + cd * c for a, b, c in zip(self.e, self.f, self.delta))


@lru_cache(maxsize=None)
def model(name: str = "reduced") -> K3Model:
    """The reduced model ``U + <-2>`` (rank 3) or the full lattice (rank 23).

    The summand ``U^2 + E8(-1)^2`` dropped by the reduced model is
    unimodular, so discriminant computations agree between the two.
    """
    if name == "reduced":
        gram = block_diagonal(U_GRAM, ((-2,),))
    elif name == "full":
        gram = block_diagonal(U_GRAM, U_GRAM, U_GRAM, E8_NEG, E8_NEG, ((-2,),))
    else:
        raise ValueError(f"unknown model {name!r}; expected one of {MODELS}")
    n = len(gram)
    unit = lambda i: tuple(int(i == j) for j in range(n))  # noqa: E731
    return K3Model(name, IntLattice(gram), unit(0), unit(1), unit(n - 1))


@dataclass(frozen=True)
class K3HalfLattice:
    full: K3Model
    reduced: K3Model


def k3_half_lattice() -> K3HalfLattice:
    return K3HalfLattice(model("full"), model("reduced"))


def class_of(family: str, r: int, s: int, l: int, model_name: str = "reduced") -> tuple:
    """Polarization classes of the four (r, s, l) families.

    ``L = e + rs f - l delta``, ``L' = s e + r f - l delta``,
    ``Lbar = 2e + 2rs f + l delta``, ``Lbar' = 2s e + 2r f + l delta``.
    """
    if gcd(r, s) != 1:
        raise LatticeError(f"r={r} and s={s} are not coprime")
    M = model(model_name)
    if family == "L":
        v = M.vec(1, r * s, -l)
    elif family == "L'":
        v = M.vec(s, r, -l)
    elif family == "Lbar":
        if l % 2 == 0:
            raise LatticeError("Lbar needs l odd")
        v = M.vec(2, 2 * r * s, l)
    elif family == "Lbar'":
        if l % 2 == 0:
            raise LatticeError("Lbar' needs l odd")
        v = M.vec(2 * s, 2 * r, l)
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if pair(M.lattice, v, v) <= 0:
        raise LatticeError(f"class {family}_{{{r},{s},{l}}} has nonpositive square")
    return v


@dataclass(frozen=True)
class RatIsometry:
    """Rational isometry ``x -> M x`` of ``lattice ⊗ Q`` (column convention)."""

    lattice: IntLattice
    matrix: Matrix
    _inverse: Matrix = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        M = freeze([[Fraction(x) for x in row] for row in self.matrix])
        object.__setattr__(self, "matrix", M)
        G = self.lattice.gram
        if freeze(mat_mul(mat_mul(transpose(M), G), M)) != G:
            raise LatticeError("matrix does not preserve the form")
        # M^-1 = G^-1 M^T G for an isometry
        inv = mat_mul(mat_mul(mat_inverse(G), transpose(M)), G)
        object.__setattr__(self, "_inverse", freeze(inv))

    def __call__(self, x: Sequence) -> tuple:
        return _normalize(mat_vec(self.matrix, x))

    def inverse(self, x: Sequence) -> tuple:
        return _normalize(mat_vec(self._inverse, x))

    def compose(self, other: "RatIsometry") -> "RatIsometry":
        """``self ∘ other``."""
        return RatIsometry(self.lattice, freeze(mat_mul(self.matrix, other.matrix)))


def _normalize(v) -> tuple:
    return tuple(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in v)


def reflection(L: IntLattice, u: Sequence[int]) -> RatIsometry:
    """``x -> x - 2 (u, x) / (u, u) * u``."""
    uu = pair(L, u, u)
    if uu == 0:
        raise LatticeError("cannot reflect in an isotropic vector")
    row = L.pairing_row(u)
    n = L.rank
    M = [[Fraction(int(i == j)) - Fraction(2 * u[i] * row[j], uu) for j in range(n)]
         for i in range(n)]
    return RatIsometry(L, freeze(M))


def rho_r(r: int, model_name: str = "reduced") -> RatIsometry:
    """Reflection in ``e - r f``: swaps ``e -> r f``, ``f -> e / r``, fixes ``<e, f>^perp``."""
    if r == 0:
        raise LatticeError("r must be nonzero")
    M = model(model_name)
    return reflection(M.lattice, M.vec(1, -r, 0))


def identity_isometry(model_name: str = "reduced") -> RatIsometry:
    M = model(model_name)
    return RatIsometry(M.lattice, freeze(identity(M.rank)))


def negation(model_name: str = "reduced") -> RatIsometry:
    M = model(model_name)
    return RatIsometry(M.lattice, freeze([[-x for x in row] for row in identity(M.rank)]))


def is_integral_on(iso: RatIsometry, S: Sublattice) -> bool:
    """Whether ``iso`` maps every basis vector of ``S`` to an integral vector."""
    return all(all(Fraction(x).denominator == 1 for x in iso(b)) for b in S.basis)


def image_span(iso: RatIsometry, S: Sublattice) -> list[tuple]:
    return [iso(b) for b in S.basis]


def maps_onto(iso: RatIsometry, S: Sublattice, target: Sublattice) -> bool:
    """Whether ``iso(S) == target`` (both saturated; integral images required)."""
    if S.rank != target.rank or not is_integral_on(iso, S):
        return False
    if not all(target.contains(v) for v in image_span(iso, S)):
        return False
    # isometry preserves |det|, so an inclusion of equal covolume is equality
    from .lattice import det
    return abs(det(S.gram)) == abs(det(target.gram))


def vec_from_named(m: K3Model, coeffs: dict) -> tuple:
    return m.vec(coeffs.get("e", 0), coeffs.get("f", 0), coeffs.get("delta", 0))


__all__ = [
    "FAMILIES",
    "MODELS",
    "E8_NEG",
    "K3Model",
    "K3HalfLattice",
    "RatIsometry",
    "class_of",
    "identity_isometry",
    "image_span",
    "is_integral_on",
    "k3_half_lattice",
    "maps_onto",
    "model",
    "negation",
    "reflection",
    "rho_r",
]
