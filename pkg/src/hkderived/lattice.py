"""Exact integer/rational linear algebra for lattices given by Gram matrices.

Vectors are plain tuples (``int`` entries for lattice vectors, ``Fraction``
or ``int`` for rational ones) written in the coordinates of the ambient
lattice basis. Matrices are tuples of row tuples. Everything is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence, Union

Number = Union[int, Fraction]
LatVec = tuple  # tuple[int, ...]
RatVec = tuple  # tuple[Number, ...]
Matrix = tuple  # tuple[tuple[Number, ...], ...]


class LatticeError(ValueError):
    """Raised on invalid lattice input (degenerate form, bad vector, ...)."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A: Sequence[Sequence[Number]], B: Sequence[Sequence[Number]]) -> list[list[Number]]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A: Sequence[Sequence[Number]], v: Sequence[Number]) -> tuple:
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def transpose(A: Sequence[Sequence[Number]]) -> list[list[Number]]:
    return [list(col) for col in zip(*A)]


def freeze(A: Sequence[Sequence[Number]]) -> Matrix:
    return tuple(tuple(row) for row in A)


def det(A: Sequence[Sequence[Number]]) -> Number:
    """Exact determinant by fraction-free Gaussian elimination (Bareiss)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(row) for row in A]
    if any(isinstance(x, Fraction) for row in M for x in row):
        den = 1
        for row in M:
            for x in row:
                den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        scaled = [[int(x * den) for x in row] for row in M]
        return Fraction(det(scaled), den ** n)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def mat_inverse(A: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    """Exact inverse over the rationals (Gauss-Jordan)."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            raise LatticeError("matrix is singular")
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [row[n:] for row in M]


def smith_normal_form(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U @ M @ V == D`` with ``U``, ``V`` unimodular.

    The diagonal of ``D`` is nonnegative and each entry divides the next.
    Works for any rectangular integer matrix; arithmetic is arbitrary
    precision.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if not done:
                continue
            # divisibility condition on the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if best is None:
            break
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return freeze(U), freeze(A), freeze(V)


def integer_kernel(A: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of ``{x in Z^n : A x = 0}``; the result is always saturated."""
    n = len(A[0])
    U, D, V = smith_normal_form(A)
    rank = sum(1 for i in range(min(len(A), n)) if D[i][i] != 0)
    return [tuple(V[i][j] for i in range(n)) for j in range(rank, n)]


def hnf(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row Hermite normal form of the lattice spanned by ``rows`` (zero rows dropped)."""
    A = [list(map(int, r)) for r in rows if any(r)]
    if not A:
        return []
    n = len(A[0])
    out: list[list[int]] = []
    col = 0
    while A and col < n:
        nz = [r for r in A if r[col]]
        zero = [r for r in A if not r[col]]
        if not nz:
            col += 1
            continue
        # gcd-reduce column `col` into a single row
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (rest if r[col] else zero).append(r)
            nz = [piv] + rest
            zero = [r for r in zero if any(r)]
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        for prev in out:
            q = prev[col] // piv[col]
            prev[:] = [x - q * y for x, y in zip(prev, piv)]
        out.append(piv)
        A = [r for r in zero if any(r)]
        col += 1
    return [tuple(r) for r in out]


def in_integer_span(rows: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Whether the integer vector ``v`` lies in the Z-span of ``rows``."""
    v = list(v)
    for row in hnf(rows):
        c = next(i for i, x in enumerate(row) if x)
        q, r = divmod(v[c], row[c])
        if r:
            return False
        v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


def _common_denominator(xs) -> int:
    den = 1
    for x in xs:
        q = Fraction(x).denominator
        den = den * q // gcd(den, q)
    return den


def in_rational_span(generators: Sequence[Sequence[Number]], v: Sequence[Number]) -> bool:
    """Whether ``v`` lies in the Z-span of rational ``generators``."""
    N = _common_denominator([x for g in generators for x in g] + list(v))
    rows = [[int(x * N) for x in g] for g in generators]
    return in_integer_span(rows, [int(x * N) for x in v])


@dataclass(frozen=True)
class IntLattice:
    """Nondegenerate integral lattice given by a symmetric Gram matrix."""

    gram: Matrix
    even: bool = field(default=True, compare=False)

    def __post_init__(self):
        g = freeze([[int(x) for x in row] for row in self.gram])
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise LatticeError("Gram matrix must be symmetric")
        if det(g) == 0:
            raise LatticeError("Gram matrix is degenerate")
        if self.even and any(g[i][i] % 2 for i in range(n)):
            raise LatticeError("lattice is not even")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return det(self.gram)

    def pairing_row(self, v: Sequence[Number]) -> tuple:
        """The functional ``x -> pair(v, x)`` as a coordinate row."""
        _check_dim(self, v)
        return mat_vec(self.gram, v)


def _check_dim(L: IntLattice, *vs) -> None:
    for v in vs:
        if len(v) != L.rank:
            raise LatticeError(f"vector of length {len(v)} in lattice of rank {L.rank}")


def pair(L: IntLattice, v: Sequence[Number], w: Sequence[Number]) -> Number:
    """Exact value of the bilinear form ``v^T G w``."""
    _check_dim(L, v, w)
    return sum(x * y for x, y in zip(L.pairing_row(v), w))


def _nonzero(v) -> None:
    if not any(v):
        raise LatticeError("zero vector")


def divisibility(L: IntLattice, v: Sequence[int]) -> int:
    """Positive generator of the ideal ``(v, L)``."""
    _nonzero(v)
    g = 0
    for x in L.pairing_row(v):
        g = gcd(g, int(x))
    return g


def is_primitive(L: IntLattice, v: Sequence[int]) -> bool:
    _check_dim(L, v)
    _nonzero(v)
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1


def contains(L: IntLattice, x: Sequence[Number]) -> bool:
    """Whether a rational vector (ambient coordinates) lies in ``L``."""
    _check_dim(L, x)
    return all(Fraction(c).denominator == 1 for c in x)


@dataclass(frozen=True)
class Sublattice:
    """Saturated sublattice of ``ambient`` spanned by the rows of ``basis``.

    ``basis`` is stored in row Hermite normal form, which doubles as the
    membership witness.
    """

    ambient: IntLattice
    basis: Matrix
    gram: Matrix = field(init=False)

    def __post_init__(self):
        B = hnf(self.basis)
        if len(B) != len(self.basis):
            raise LatticeError("basis rows are linearly dependent")
        object.__setattr__(self, "basis", freeze(B))
        G = mat_mul(mat_mul(B, self.ambient.gram), transpose(B)) if B else []
        object.__setattr__(self, "gram", freeze(G))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def to_ambient(self, coords: Sequence[Number]) -> tuple:
        """Internal coordinates -> ambient coordinates."""
        if len(coords) != self.rank:
            raise LatticeError("coordinate length mismatch")
        n = self.ambient.rank
        return tuple(sum(c * b[i] for c, b in zip(coords, self.basis)) for i in range(n))

    def pairings(self, x: Sequence[Number]) -> tuple:
        """Pairings of an ambient rational vector with the basis rows."""
        row = self.ambient.pairing_row(x)
        return tuple(sum(a * b for a, b in zip(row, bv)) for bv in self.basis)

    def from_ambient(self, x: Sequence[Number]) -> tuple:
        """Ambient vector in the rational span -> internal coordinates.

        Raises ``LatticeError`` if ``x`` is not in the rational span.
        """
        y = mat_vec(mat_inverse(self.gram), self.pairings(x))
        if tuple(Fraction(c) for c in self.to_ambient(y)) != tuple(Fraction(c) for c in x):
            raise LatticeError("vector is not in the rational span of the sublattice")
        return y

    def contains(self, x: Sequence[Number]) -> bool:
        if any(Fraction(c).denominator != 1 for c in x):
            return False
        return in_integer_span(self.basis, [int(c) for c in x])


def orthogonal_complement(L: IntLattice, v: Sequence[int]) -> Sublattice:
    """The saturated sublattice ``{x : pair(x, v) = 0}`` for primitive anisotropic ``v``."""
    if not is_primitive(L, v):
        raise LatticeError("vector is not primitive")
    if pair(L, v, v) == 0:
        raise LatticeError("vector is isotropic")
    row = [int(x) for x in L.pairing_row(v)]
    return Sublattice(L, freeze(integer_kernel([row])))


def saturation_index(S: Sublattice) -> int:
    """Index of ``S`` in its saturation (``1`` for every stored sublattice)."""
    U, D, V = smith_normal_form(S.basis)
    out = 1
    for i in range(S.rank):
        out *= D[i][i]
    return out
