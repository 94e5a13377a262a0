from k3gw.exact import QQ, double_factorial_odd, eval_monomials, interpolate_values
from k3gw.qmod import G2, G4, G6, QMod, d_q
from k3gw.kernels import (
    A_series,
    B_series,
    C_series,
    p0_coefficient,
    reconstruct_A,
    reconstruct_B,
    reconstruct_C,
    residue_vs_p0_check,
    wp_fourier,
    wp_z,
)


def test_wp_z_window():
    w = wp_z(5)
    assert w[-2] == QMod.from_rational(1)
    assert w[-1] == QMod() and w[0] == QMod() and w[1] == QMod()
    assert w[2] == G4
    assert w[4] == G6 * QQ(1, 12)


def test_closed_forms():
    assert A_series(0) == QMod.from_rational(1)
    assert A_series(1) == G2 * 2
    assert A_series(2) == G2 * G2 * 2 + G4 * QQ(1, 6)
    assert B_series(0) == G2 * G2 * (-2) + G4 * QQ(5, 6)
    assert B_series(1) == G2 ** 3 * QQ(-8, 3) + G2 * G4 * QQ(4, 3) - G6 * QQ(7, 360)
    assert not C_series(0, 0)
    assert C_series(1, 0) == B_series(0)
    assert C_series(1, 1) == G2 ** 3 * QQ(-16, 3) + G2 * G4 * QQ(10, 3) - G6 * QQ(7, 72)
    assert B_series(0) == d_q(G2)


def test_weights():
    for k in range(7):
        assert A_series(k).is_homogeneous(2 * k)
        assert B_series(k).is_homogeneous(2 * k + 4)
    for k in range(5):
        for l in range(5 - k):
            c = C_series(k, l)
            assert not c or c.is_homogeneous(2 * k + 2 * l + 2)


def test_derivation_relations():
    for k in range(1, 7):
        assert A_series(k).d_dG2() == A_series(k - 1) * 2
    assert B_series(0).d_dG2() == A_series(1) * (-2)
    for k in range(1, 6):
        assert B_series(k).d_dG2() == B_series(k - 1) * 2 - A_series(k + 1) * 2
    for k in range(0, 6):
        for l in range(0, 6 - k):
            want = QMod()
            if k:
                want = want + C_series(k - 1, l) * 2
            if l:
                want = want + C_series(k, l - 1) * 2
            want = want - A_series(k) * A_series(l) * 2
            if k == l == 0:
                want = want + 2
            assert C_series(k, l).d_dG2() == want


def test_c_symmetry():
    for k in range(9):
        for l in range(9 - k):
            assert C_series(k, l) == C_series(l, k)


def test_fourier_displays():
    f = wp_fourier(2, 6)
    q0 = f[0]
    # (1/4)(p+1)^2/(p-1)^2 in 1/p: 1/4 + 1/pinv-expansion: 1 + 4u + 8u^2 ...
    assert q0[0] == QQ(1, 4)
    assert q0[1] == QQ(1)
    assert q0[2] == QQ(2)
    q1 = f[1]
    assert q1[-1] == QQ(1)   # p^1
    assert q1[0] == QQ(-6)
    assert q1[1] == QQ(1)    # p^-1


def test_p0_branch():
    assert p0_coefficient(0, 0)[0] == QQ(1)


def test_residue_vs_p0():
    for k in range(5):
        assert residue_vs_p0_check(k)


def test_mode_coefficients_polynomial():
    # 2^{2k+1} [s^{2k+1}]_{p^0 q^n} is polynomial of degree 2n in k
    for n in range(3):
        pts = list(range(2 * n + 3))
        vals = [QQ(2) ** (2 * k + 1) * p0_coefficient(k, n)[n] / 2 for k in pts]
        monos = [(e,) for e in range(2 * n + 1)]
        coeffs = interpolate_values(
            [(k,) for k in pts[: 2 * n + 1]], vals[: 2 * n + 1], monos
        )
        for extra in range(2 * n + 1, len(pts)):
            assert eval_monomials((pts[extra],), monos, coeffs) == vals[extra]


def test_partial_polynomiality_of_A():
    # (-4)^k (2k+1)!! [A_k]_{q^n} for k = n..n+2n+2 fits degree 2n and
    # predicts the next index
    for n in range(4):
        ks = list(range(n, n + 2 * n + 4))
        vals = [
            QQ(-4) ** k * double_factorial_odd(2 * k + 1) * A_series(k).qexpand(n)[n]
            for k in ks
        ]
        monos = [(e,) for e in range(2 * n + 1)]
        coeffs = interpolate_values(
            [(k,) for k in ks[: 2 * n + 1]], vals[: 2 * n + 1], monos
        )
        for i in range(2 * n + 1, len(ks)):
            assert eval_monomials((ks[i],), monos, coeffs) == vals[i]


def test_reconstructions_match_residue_route():
    arec = reconstruct_A(6)
    assert all(arec[k] == A_series(k) for k in range(7))
    brec = reconstruct_B(4)
    assert all(brec[k] == B_series(k) for k in range(5))
    crec = reconstruct_C(6)
    for k in range(7):
        for l in range(7 - k):
            assert crec[(k, l)] == C_series(k, l)


def test_reconstruct_A1_forced():
    # weight-2 modular forms vanish, so the antiderivative is forced
    assert reconstruct_A(1)[1] == G2 * 2
