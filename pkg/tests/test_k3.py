from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hkderived.k3 import (
    E8_NEG,
    RatIsometry,
    class_of,
    is_integral_on,
    k3_half_lattice,
    maps_onto,
    model,
    reflection,
    rho_r,
)
from hkderived.lattice import LatticeError, Sublattice, det, divisibility, orthogonal_complement, pair


def test_full_lattice_shape():
    K = k3_half_lattice()
    full = K.full.lattice
    assert full.rank == 23 and K.reduced.rank == 3
    assert abs(full.det) == 2 and abs(det(E8_NEG)) == 1
    for M in (K.full, K.reduced):
        L = M.lattice
        assert pair(L, M.e, M.e) == pair(L, M.f, M.f) == 0
        assert pair(L, M.e, M.f) == 1
        assert pair(L, M.delta, M.delta) == -2
        assert divisibility(L, M.delta) == 2


def test_class_families():
    L = class_of("L", 2, 7, 2)
    assert pair(model().lattice, L, L) == 20
    Lb = class_of("Lbar", 1, 1, 1)
    assert pair(model().lattice, Lb, Lb) == 6
    assert class_of("L'", 2, 7, 2) == (7, 2, -2)
    assert class_of("Lbar'", 3, 2, 3) == (4, 6, 3)
    assert len(class_of("L", 2, 7, 2, "full")) == 23


@pytest.mark.parametrize("args", [
    ("L", 2, 4, 1),        # not coprime
    ("Lbar", 1, 1, 2),     # l even
    ("L", 1, 1, 1),        # zero square
    ("L", 1, 1, 3),        # negative square
    ("M", 1, 1, 0),
])
def test_class_of_rejects(args):
    with pytest.raises((LatticeError, ValueError)):
        class_of(*args)


def test_reflection_closed_form():
    rho = rho_r(3)
    M = model()
    assert rho(M.e) == (0, 3, 0)
    assert rho(M.f) == (Fraction(1, 3), 0, 0)
    assert rho(M.delta) == M.delta
    u = (1, -3, 0)
    assert reflection(M.lattice, u)(u) == (-1, 3, 0)
    assert rho_r(1)(M.e) == M.f and rho_r(1)(M.f) == M.e


def test_rho_maps_polarization_to_partner():
    assert rho_r(2)(class_of("L", 2, 7, 2)) == (7, 2, -2)


def test_rho_integrality():
    T = orthogonal_complement(model().lattice, class_of("L", 2, 7, 2))
    assert is_integral_on(rho_r(2), T)
    full = Sublattice(model().lattice, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert not is_integral_on(rho_r(2), full)
    Tb = orthogonal_complement(model().lattice, class_of("Lbar'", 3, 2, 3))
    assert is_integral_on(rho_r(3), Tb)


def test_non_isometry_rejected():
    with pytest.raises(LatticeError):
        RatIsometry(model().lattice, ((2, 0, 0), (0, 1, 0), (0, 0, 1)))
    with pytest.raises(LatticeError):
        rho_r(0)
    with pytest.raises(LatticeError):
        reflection(model().lattice, (1, 0, 0))


small = st.integers(-5, 5)


@given(st.tuples(small, small, small), st.tuples(small, small, small))
def test_reflection_involution_and_fixes_perp(u, x):
    L = model().lattice
    if pair(L, u, u) == 0:
        return
    rho = reflection(L, u)
    assert rho(rho(x)) == tuple(x)
    if pair(L, u, x) == 0:
        assert rho(x) == tuple(x)
    assert rho.compose(rho).matrix == tuple(tuple(Fraction(int(i == j)) for j in range(3))
                                            for i in range(3))


@given(st.integers(1, 9), st.integers(1, 9), st.integers(-9, 9))
def test_rho_carries_complement_onto_partner(r, s, l):
    from math import gcd
    if gcd(r, s) != 1 or (2 * l) % r or r * s - l * l <= 0:
        return
    L = model().lattice
    T = orthogonal_complement(L, class_of("L", r, s, l))
    Tp = orthogonal_complement(L, class_of("L'", r, s, l))
    assert maps_onto(rho_r(r), T, Tp)
