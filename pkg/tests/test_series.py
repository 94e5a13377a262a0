import random

import pytest

from k3gw.exact import QQ
from k3gw.qmod import G2, G4, QMod
from k3gw.series import (
    LaurentSeries,
    NonUnitLeadingCoefficient,
    OddLeadingExponent,
    QMOD_RING,
    RAT_RING,
    TruncationTooShort,
    VariableMismatch,
    double_residue,
    kernel_z1_minus_z2,
    ls_arith,
)
from k3gw.kernels import C_series, wp_z


def rs(lo, coeffs, order=None):
    return LaurentSeries(RAT_RING, "z", lo, [QQ(c) for c in coeffs], order)


def test_basic_arith():
    x = rs(-2, [1, 0, 1], 6)  # 1/z^2 + 1
    z2 = rs(2, [1])
    prod = x * z2
    assert prod[0] == 1 and prod[2] == 1
    y = rs(-1, [1], 8)
    assert (y * y)[-2] == 1
    assert ls_arith(x, x, "add")[-2] == 2
    assert ls_arith(x, QQ(3), "scalar_mul")[-2] == 3


def test_truncation_tracking():
    x = rs(-2, [1, 2, 3], 1)   # exact below z^1
    y = rs(0, [1, 1], 2)
    p = x * y
    assert p.order == min(1 + 0, 2 - 2)
    with pytest.raises(TruncationTooShort):
        p[0]


def test_variable_mismatch():
    x = rs(0, [1])
    y = LaurentSeries(RAT_RING, "w", 0, [QQ(1)])
    with pytest.raises(VariableMismatch):
        x + y


def test_sqrt_rational_example():
    # 1/z^2 (1 - 4 c z^2) with c rational stand-in
    c = QQ(1, 3)
    x = rs(-2, [1, 0, -4 * c], 4)
    s = x.sqrt()
    assert s[-1] == 1
    assert s[1] == -2 * c
    assert s[3] == -2 * c * c
    assert (s * s)[-2] == 1 and (s * s)[0] == -4 * c


def test_sqrt_wp_display():
    base = wp_z(8) - LaurentSeries.const(QMOD_RING, "z", G2 * 4)
    s = base.sqrt()
    assert s[-1] == QMod.from_rational(1)
    assert s[0] == QMod()
    assert s[1] == G2 * (-2)
    assert s[3] == G2 * G2 * (-2) + G4 * QQ(1, 2)
    # square back exactly within the window
    sq = s * s
    for e in range(-2, sq.order):
        assert sq[e] == base[e]


def test_sqrt_three_halves_leading():
    base = wp_z(8) - LaurentSeries.const(QMOD_RING, "z", G2 * 4)
    p32 = base * base.sqrt()
    assert p32[-3] == QMod.from_rational(1)
    assert p32[-1] == G2 * (-6)


def test_sqrt_errors():
    with pytest.raises(OddLeadingExponent):
        rs(-1, [1, 1], 3).sqrt()
    with pytest.raises(NonUnitLeadingCoefficient):
        rs(0, [2, 1], 3).sqrt()
    assert rs(0, [1], 5).sqrt()[0] == 1


def test_residue():
    x = rs(-1, [1, 0, 3], 3)  # 1/z + 3z
    assert x.residue() == 1
    assert rs(0, [5], 4).residue() == 0
    with pytest.raises(TruncationTooShort):
        rs(-3, [1], -2).residue()


def test_residue_linearity():
    rng = random.Random(3)
    for _ in range(10):
        x = rs(-2, [rng.randint(-5, 5) for _ in range(5)], 3)
        y = rs(-1, [rng.randint(-5, 5) for _ in range(4)], 3)
        a, b = QQ(rng.randint(1, 7)), QQ(rng.randint(1, 7))
        assert (x.scale(a) + y.scale(b)).residue() == a * x.residue() + b * y.residue()


def test_truncation_soundness():
    # recomputing at higher truncation never changes exact coefficients
    lo = wp_z(4)
    hi = wp_z(10)
    for e in range(-2, 4):
        assert lo[e] == hi[e]
    s1 = (wp_z(6) - LaurentSeries.const(QMOD_RING, "z", G2 * 4)).sqrt()
    s2 = (wp_z(12) - LaurentSeries.const(QMOD_RING, "z", G2 * 4)).sqrt()
    for e in range(-1, s1.order):
        assert s1[e] == s2[e]


def test_kernel_columns():
    ker = kernel_z1_minus_z2(6)
    col0 = ker[0]
    assert col0[-2] == QMod.from_rational(1)
    assert col0[0] == G2 * 2
    assert col0[2] == G4
    col1 = ker[1]
    assert col1[-3] == QMod.from_rational(2)


def test_double_residue_small():
    inner = LaurentSeries(QMOD_RING, "z1", -1, [QMod.from_rational(1)], 2)
    ring = kernel_z1_minus_z2(2).ring
    outer = LaurentSeries(ring, "z2", -1, [inner], 2)
    assert double_residue(outer) == QMod.from_rational(1)
    zero = LaurentSeries(ring, "z2", 0, [inner], 2)
    assert double_residue(zero) == QMod()


def _c_via_bivariate(k, l):
    """Generic-route double residue of the full two-variable integrand."""
    from k3gw.exact import double_factorial_odd
    from k3gw.series import series_ring

    order = 2 * (k + l) + 6
    base1 = wp_z(order, var="z1") - LaurentSeries.const(QMOD_RING, "z1", G2 * 4)
    base2 = wp_z(order, var="z2") - LaurentSeries.const(QMOD_RING, "z2", G2 * 4)
    x1 = (base1 ** k) * base1.sqrt()
    x2 = (base2 ** l) * base2.sqrt()
    ring1 = series_ring("z1", QMOD_RING)
    ker = kernel_z1_minus_z2(order)
    x2_lift = x2.map_coefficients(
        lambda c: LaurentSeries.const(QMOD_RING, "z1", c), ring1
    )
    prod = x2_lift * ker
    inner = prod.residue()
    res = (x1 * inner).residue()
    pref = QQ(-1) ** (k + l - 1) / (
        double_factorial_odd(2 * k + 1) * double_factorial_odd(2 * l + 1)
    )
    return res * pref


def test_double_residue_matches_kernel_route():
    for k, l in ((0, 0), (1, 0), (0, 1), (1, 1), (2, 1)):
        assert _c_via_bivariate(k, l) == C_series(k, l)


def test_c_symmetry_via_double_residue():
    for k in range(5):
        for l in range(5 - k):
            assert _c_via_bivariate(k, l) == _c_via_bivariate(l, k)
