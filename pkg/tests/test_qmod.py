import random

from k3gw.exact import QQ, bernoulli
from k3gw.qmod import (
    G2,
    G4,
    G6,
    QMod,
    commutator_wt_check,
    d_q,
    delta_series,
    delta_logderiv,
    delta_unit_inverse,
    eisenstein_qexp,
    eisenstein_reduce,
    modular_basis,
    qmod_basis,
    sigma,
)


def test_gen_expansions_match_divisor_sums():
    # sigma_1: 1, 3, 4 computed by brute-force divisor enumeration
    def sig(n, k):
        return sum(d ** k for d in range(1, n + 1) if n % d == 0)

    assert G2.qexpand(3).coeffs == [QQ(-1, 24), QQ(1), QQ(3), QQ(4)]
    assert G4.qexpand(2).coeffs == [QQ(1, 240), QQ(1), QQ(9)]
    for k in (2, 4, 6):
        exp = eisenstein_qexp(k, 8)
        assert exp[0] == -bernoulli(k) / (2 * k)
        for n in range(1, 9):
            assert exp[n] == sig(n, k - 1)
    assert QMod.from_rational(1).qexpand(4).coeffs == [QQ(1)] + [QQ(0)] * 4


def test_arithmetic_examples():
    assert G2 * G2 == QMod({(2, 0, 0): QQ(1)})
    a1 = G2 * 2
    assert a1 * a1 == QMod({(2, 0, 0): QQ(4)})
    b0 = G2 * G2 * (-2) + G4 * QQ(5, 6)
    sq = b0 * b0
    assert sq == QMod(
        {(4, 0, 0): QQ(4), (2, 1, 0): QQ(-10, 3), (0, 2, 0): QQ(25, 36)}
    )
    assert (G2 + G4) - G4 == G2
    assert G2 ** 0 == QMod.from_rational(1)


def test_d_dG2():
    assert (G2 * G2).d_dG2() == G2 * 2
    a2 = G2 * G2 * 2 + G4 * QQ(1, 6)
    assert a2.d_dG2() == G2 * 4
    assert G4.d_dG2() == QMod()


def test_dq_generators():
    assert d_q(G2) == G2 * G2 * (-2) + G4 * QQ(5, 6)
    assert d_q(G4) == G2 * G4 * (-8) + G6 * QQ(7, 10)
    assert d_q(QMod.from_rational(1)) == QMod()


def test_dq_matches_analytic_derivative():
    rng = random.Random(7)
    for _ in range(10):
        x = QMod.from_rational(QQ(rng.randint(1, 5)))
        for _ in range(rng.randint(1, 3)):
            x = x * rng.choice([G2, G4, G6])
        for N in (3, 8, 12):
            assert d_q(x).qexpand(N).coeffs == x.qexpand(N + 1).q_ddq().coeffs[: N + 1]


def test_leibniz():
    rng = random.Random(11)
    for _ in range(8):
        gens = [G2, G4, G6]
        x = rng.choice(gens) * QQ(rng.randint(1, 4)) + rng.choice(gens)
        y = rng.choice(gens) * rng.choice(gens)
        assert d_q(x * y) == d_q(x) * y + x * d_q(y)
        assert (x * y).d_dG2() == x.d_dG2() * y + x * y.d_dG2()


def test_commutator():
    assert commutator_wt_check(G2)
    assert commutator_wt_check(QMod.from_rational(1))
    assert commutator_wt_check(G4 * G6)
    assert commutator_wt_check(G2 * G2 * G6)


def test_eisenstein_reduce():
    assert eisenstein_reduce(4) == G4
    assert eisenstein_reduce(6) == G6
    assert eisenstein_reduce(8) == G4 * G4 * 120
    assert eisenstein_reduce(10) == G4 * G6 * QQ(5040, 11)
    for k in range(4, 26, 2):
        assert eisenstein_reduce(k).qexpand(20) == eisenstein_qexp(k, 20)


def test_delta():
    d = delta_series(3)
    assert d.coeffs == [QQ(1), QQ(-24), QQ(252), QQ(-1472)]
    # oracle: expand prod (1-q^n)^24 literally
    N = 8
    poly = [QQ(1)] + [QQ(0)] * N
    for n in range(1, N + 1):
        for _ in range(24):
            nxt = poly[:]
            for i in range(N + 1 - n):
                nxt[i + n] -= poly[i]
            poly = nxt
    assert delta_series(N).coeffs == poly
    inv = delta_unit_inverse(2)
    assert inv.coeffs[0] == 1 and inv.coeffs[1] == 24


def test_delta_logderiv():
    # D_q(Delta)/Delta agrees with -24 G2 to order 10
    N = 10
    dser = delta_series(N + 1)
    qdq = dser.q_ddq()
    # D_q(q * dser) / (q * dser) = 1 + q dser'/dser
    lhs = (qdq * dser.inverse()).truncate(N)
    rhs = delta_logderiv().qexpand(N)
    assert all(lhs[n] + (1 if n == 0 else 0) == rhs[n] for n in range(N + 1))


def test_modular_basis():
    assert [str(m) for m in modular_basis(0)] == ["1"]
    assert modular_basis(2) == []
    assert [str(m) for m in modular_basis(12)] == ["G4^3", "G6^2"]
    # classical dimensions of level-one modular forms
    for w in range(0, 42, 2):
        dim = w // 12 + (0 if w % 12 == 2 else 1)
        assert len(modular_basis(w)) == dim, w


def test_weight_checks():
    assert (G2 * G4).is_homogeneous(6)
    assert not (G2 + G4).is_homogeneous()
    assert (G6 * G6).weight() == 12
    assert qmod_basis(4) == [(2, 0, 0), (0, 1, 0)]


def test_serialization_order():
    a2 = G2 * G2 * 2 + G4 * QQ(1, 6)
    assert str(a2) == "2*G2^2 + 1/6*G4"
    assert a2.serialize() == [(2, 0, 0, "2"), (0, 1, 0, "1/6")]
    assert str(QMod()) == "0"


def test_sigma_helper():
    assert sigma(6, 1) == 12
    assert sigma(4, 3) == 1 + 8 + 64
