"""The acceptance checks, runnable from the CLI and from the test suite.

Each criterion is a function returning a CheckResult; ``run("quick")`` is a
fast symbolic identity suite, ``run("full")`` executes every criterion at
full range.  All comparisons are exact.
"""

import itertools
import random
import time

from .exact import QQ, QQ0, double_factorial_odd
from .qmod import G2, G4, G6, QMod, d_q, delta_unit_inverse
from . import kernels
from .engine import (
    Engine,
    F,
    ONE,
    PT,
    W,
    av,
    bv,
    canonical_key,
    hae_apply,
    maulik_closed_form,
    remove_tau_one_explicit,
    remove_tau_one_general,
    splitting_check,
)
from . import polyfit
from . import virasoro


class CheckResult:
    def __init__(self, name, ok, detail="", seconds=0.0):
        self.name = name
        self.ok = ok
        self.detail = detail
        self.seconds = seconds

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        extra = " - %s" % self.detail if (self.detail and not self.ok) else ""
        return "%s  %-38s (%.1fs)%s" % (status, self.name, self.seconds, extra)

    def as_dict(self):
        return {
            "name": self.name,
            "ok": self.ok,
            "detail": self.detail,
            "seconds": round(self.seconds, 2),
        }


def _check(name, fn):
    t0 = time.time()
    try:
        detail = fn()
        ok = True
        detail = detail or ""
    except AssertionError as exc:
        ok = False
        detail = str(exc) or "assertion failed"
    return CheckResult(name, ok, detail, time.time() - t0)


def _paper_kernels():
    a0 = QMod.from_rational(1)
    a1 = G2 * 2
    a2 = G2 * G2 * 2 + G4 * QQ(1, 6)
    b0 = G2 * G2 * (-2) + G4 * QQ(5, 6)
    b1 = G2 ** 3 * QQ(-8, 3) + G2 * G4 * QQ(4, 3) - G6 * QQ(7, 360)
    c11 = G2 ** 3 * QQ(-16, 3) + G2 * G4 * QQ(10, 3) - G6 * QQ(7, 72)
    return a0, a1, a2, b0, b1, c11


def criterion_1_kernels(engine):
    """Closed-form kernels match their displayed quasi-modular forms."""
    a0, a1, a2, b0, b1, c11 = _paper_kernels()
    assert kernels.A_series(0) == a0, "A_0"
    assert kernels.A_series(1) == a1, "A_1"
    assert kernels.A_series(2) == a2, "A_2"
    assert kernels.B_series(0) == b0, "B_0"
    assert kernels.B_series(1) == b1, "B_1"
    assert not kernels.C_series(0, 0), "C_00"
    assert kernels.C_series(1, 0) == b0, "C_10"
    assert kernels.C_series(1, 1) == c11, "C_11"
    assert kernels.B_series(0) == d_q(G2), "B_0 = D_q G2"


def criterion_2_point_counts(engine, nmax=4, slices=range(-1, 5)):
    """Point-class brackets against the discriminant series, full pipeline."""
    b0n = QMod.from_rational(1)
    for n in range(nmax + 1):
        val = engine.evaluate([(0, PT)] * n)
        for m in slices:
            exp = b0n.qexpand(m + 1)
            inv = delta_unit_inverse(max(m + 1, 1))
            want = sum(exp[i] * inv[m + 1 - i] for i in range(m + 2))
            assert val.coefficient(m) == want, "n=%d m=%d" % (n, m)
        b0n = b0n * d_q(G2)


GENUS29 = QQ(-13094491, 333598540006510406597452234752000000)


def criterion_3_genus29(engine):
    """The headline genus-29 invariant, exactly."""
    got = engine.invariant(
        [(8, ONE), (5, ONE), (10, ONE), (4, PT), (3, PT)], 3
    )
    assert got == GENUS29, "got %s" % got


def criterion_4_removal_identities(engine, kmax=8, k14max=6, lmax=4):
    """The one- and two-insertion removal formulas as exact series identities."""
    a1, a2 = av(1), bv(1)
    for k in list(range(0, kmax + 1)):
        lhs = engine.evaluate([(k, ONE)])
        rhs = engine.evaluate([(k - 3, PT)]) + engine.evaluate([(k - 1, F)]).scale(
            QQ(2 * (k - 2))
        )
        assert lhs == rhs, "single removal k=%d" % k
    for k in list(range(0, k14max + 1)):
        for l in range(0, lmax + 1):
            lhs = engine.evaluate([(k, ONE), (l, PT)])
            rhs = (
                engine.evaluate([(k - 3, PT), (l, PT)])
                + engine.evaluate([(k - 2, PT), (l - 1, PT)])
                + engine.evaluate([(k - 1, F), (l, PT)]).scale(QQ(2 * k + 2 * l))
                - engine.evaluate([(k - 1, a1), (l + 1, a2)])
            )
            assert lhs == rhs, "pair removal k=%d l=%d" % (k, l)


def criterion_5_rigid_curve(engine, kmaxidx=6, rmax=3, smax=2):
    """The rigid rational curve oracle at the q^-1 slice."""
    beta = {W: QQ(1), F: QQ(-1)}
    kchoices = list(
        itertools.chain.from_iterable(
            itertools.combinations_with_replacement(range(2, kmaxidx + 1), r)
            for r in range(rmax + 1)
        )
    )
    lchoices = list(
        itertools.chain.from_iterable(
            itertools.combinations_with_replacement(range(0, kmaxidx + 1), s)
            for s in range(smax + 1)
        )
    )
    for ks in kchoices:
        for ls in lchoices:
            ins = [(k, ONE) for k in ks] + [(l, beta) for l in ls]
            val = engine.evaluate(ins).coefficient(-1)
            for k in ks:
                val *= QQ(-4) ** (k - 1) * double_factorial_odd(2 * k - 1)
            for l in ls:
                val *= QQ(-4) ** l * double_factorial_odd(2 * l + 1)
            want = maulik_closed_form(list(ks), list(ls))
            assert val == want, "ks=%s ls=%s: %s != %s" % (ks, ls, val, want)


def criterion_6_tables(engine, quick=False):
    """Published polynomial tables, coefficient-exactly."""
    failed = []
    for tid, (spec, _exp) in sorted(polyfit.TABLES.items()):
        if quick and spec.m > 1:
            continue
        rep = polyfit.verify_table(engine, tid)
        if not rep["match"]:
            failed.append(tid)
    assert not failed, "mismatched tables: %s" % failed
    # boundary behaviour: the out-of-range l=0 value differs from P(k,0) by 8
    fitted = polyfit.fit_polynomial(engine, polyfit.TABLES["pp_l0@2"][0])
    full = polyfit.TABLES["pp@2"][1]
    sub = {}
    for (ek, el), r in full.terms.items():
        if el == 0:
            sub[(ek,)] = sub.get((ek,), QQ0) + r
    pk0 = polyfit.PolyQ(("k",), sub)
    diff = fitted - pk0
    assert diff == polyfit.PolyQ.constant(("k",), 8), "boundary gap %s" % diff


def criterion_7_virasoro(engine, ks=(2, 3, 4, 5, 6)):
    """The w-coefficient table from full-rank, zero-residual systems."""
    for k in ks:
        got = virasoro.solve_w(engine, k)
        assert got == virasoro.W_TABLE[k], "k=%d: %s" % (k, got)


def criterion_8_reconstruction(engine, amax=8, bmax=6, csum=8):
    """Characterization-based reconstruction equals the residue route."""
    arec = kernels.reconstruct_A(amax)
    assert all(arec[k] == kernels.A_series(k) for k in range(amax + 1)), "A"
    brec = kernels.reconstruct_B(bmax)
    assert all(brec[k] == kernels.B_series(k) for k in range(bmax + 1)), "B"
    crec = kernels.reconstruct_C(csum)
    for k in range(csum + 1):
        for l in range(csum + 1 - k):
            assert crec[(k, l)] == kernels.C_series(k, l), "C %d,%d" % (k, l)


def criterion_9_fourier(engine, kmax=6, nmax=4):
    """Fourier-mode agreement and mode-coefficient polynomiality."""
    for k in range(kmax + 1):
        assert kernels.residue_vs_p0_check(k), "k=%d" % k
    from .exact import interpolate_values, eval_monomials

    for n in range(nmax + 1):
        pts = list(range(2 * n + 2))
        vals = [
            QQ(2) ** (2 * k + 1) * kernels.p0_coefficient(k, n)[n] / 2 for k in pts
        ]
        monos = [(e,) for e in range(2 * n + 1)]
        coeffs = interpolate_values(
            [(k,) for k in pts[: 2 * n + 1]], vals[: 2 * n + 1], monos
        )
        pred = eval_monomials((pts[-1],), monos, coeffs)
        assert pred == vals[-1], "degree-2n fit fails out of sample at n=%d" % n


def _random_stationary(rng, size):
    pool = [F, PT]
    ins = []
    pairs = rng.sample(range(1, 5), 2)
    for _ in range(size):
        c = rng.choice(pool + [("pair", p) for p in pairs])
        k = rng.randint(0, 4)
        if isinstance(c, tuple):
            ins.append((k, av(c[1])))
            ins.append((rng.randint(0, 4), bv(c[1])))
        else:
            ins.append((k, c))
    return tuple(sorted(ins))


def criterion_10_properties(engine, count=20, seed=20260810):
    """Weight law, canonical invariance, anomaly-equation consistency,
    removal-path equality, kernel relations, commutation relation."""
    rng = random.Random(seed)
    # anomaly-equation consistency on random stationary brackets
    for i in range(count):
        tup = _random_stationary(rng, rng.randint(1, 3))
        if len(tup) > 5:
            tup = tup[:5]
        lhs = engine._eval(tup).ddg2()
        rhs = engine.eval_expr(hae_apply(tup))
        assert lhs == rhs, "anomaly consistency %s" % (tup,)
    # explicit vs general removal on single-unit brackets
    done = 0
    while done < count:
        rest = _random_stationary(rng, rng.randint(0, 2))
        k = rng.randint(2, 6)
        tup = tuple(sorted(rest + ((k, ONE),)))
        v1 = engine.eval_expr(remove_tau_one_explicit(tup))
        v2 = engine.eval_expr(remove_tau_one_general(tup))
        assert v1 == v2, "removal paths differ on %s" % (tup,)
        done += 1
    # canonical invariance: relabeling hyperbolic pairs and insertion order
    for i in range(count):
        ks = [rng.randint(0, 4) for _ in range(4)]
        b1 = [(ks[0], av(1)), (ks[1], bv(1)), (ks[2], PT), (ks[3], F)]
        b2 = [(ks[2], PT), (ks[0], av(7)), (ks[3], F), (ks[1], bv(7))]
        assert engine.evaluate(b1) == engine.evaluate(b2), "relabeling %s" % ks
        assert canonical_key(tuple(sorted(b1))) == canonical_key(tuple(sorted(b2)))
    # string/divisor/dilaton against direct stationary evaluation
    for ins in ([(1, PT)], [(2, F), (1, PT)], [(2, av(1)), (2, bv(1))]):
        base = engine.evaluate(ins)
        tau0F = engine.evaluate(ins + [(0, F)])
        assert tau0F == _cup_terms(engine, ins, F), "divisor tau0(F)"
        g = sum(k + _deg(c) - 1 for k, c in ins)
        dil = engine.evaluate(ins + [(1, ONE)])
        assert dil == base.scale(QQ(2 * g - 1 + len(ins))), "dilaton"
    # splitting of normalized correlators
    assert splitting_check(engine, [(2, PT), (3, F)], [])
    assert splitting_check(engine, [(1, PT)], [(2, av(1)), (2, bv(1))])
    assert splitting_check(engine, [(2, PT), (1, F)], [(1, av(2)), (3, bv(2))])
    # kernel derivation relations and symmetry
    for k in range(1, 9):
        assert kernels.A_series(k).d_dG2() == kernels.A_series(k - 1) * 2, "dA"
    for k in range(0, 7):
        prev = kernels.B_series(k - 1) if k else QMod()
        want = prev * 2 - kernels.A_series(k + 1) * 2
        assert kernels.B_series(k).d_dG2() == want, "dB %d" % k
    for k in range(0, 9):
        for l in range(0, 9 - k):
            want = QMod()
            if k:
                want = want + kernels.C_series(k - 1, l) * 2
            if l:
                want = want + kernels.C_series(k, l - 1) * 2
            want = want - kernels.A_series(k) * kernels.A_series(l) * 2
            if k == 0 and l == 0:
                want = want + 2
            assert kernels.C_series(k, l).d_dG2() == want, "dC %d,%d" % (k, l)
            assert kernels.C_series(k, l) == kernels.C_series(l, k), "C symm"
    # commutation relation on a random corpus
    from .qmod import commutator_wt_check

    gens = [G2, G4, G6]
    for i in range(count):
        x = QMod.from_rational(1)
        for _ in range(rng.randint(1, 3)):
            x = x * rng.choice(gens)
        x = x * QQ(rng.randint(1, 9), rng.randint(1, 9))
        assert commutator_wt_check(x), "commutator %s" % x


def _deg(c):
    from .engine import DEG

    return DEG[c]


def _cup_terms(engine, ins, d):
    from .engine import cup_with_divisor, pair, W as _W

    out = engine.evaluate(ins).scale(pair(d, _W))
    if pair(d, F):
        out = out + engine.evaluate(ins).dq().scale(pair(d, F))
    for i, (k, c) in enumerate(ins):
        coeff, cls = cup_with_divisor(c, d)
        if coeff:
            rest = list(ins)
            rest[i] = (k - 1, cls)
            out = out + engine.evaluate(rest).scale(coeff)
    return out


FULL = [
    ("1 closed-form kernels", criterion_1_kernels),
    ("2 point-class counts", criterion_2_point_counts),
    ("3 genus-29 headline", criterion_3_genus29),
    ("4 removal identities", criterion_4_removal_identities),
    ("5 rigid-curve oracle", criterion_5_rigid_curve),
    ("6 polynomial tables", criterion_6_tables),
    ("7 virasoro coefficients", criterion_7_virasoro),
    ("8 reconstruction", criterion_8_reconstruction),
    ("9 fourier modes", criterion_9_fourier),
    ("10 property suites", criterion_10_properties),
]

QUICK = [
    ("1 closed-form kernels", criterion_1_kernels),
    ("2 point-class counts (n<=2)", lambda e: criterion_2_point_counts(e, nmax=2, slices=range(-1, 3))),
    ("4 removal identities (small)", lambda e: criterion_4_removal_identities(e, kmax=5, k14max=4, lmax=2)),
    ("5 rigid-curve oracle (small)", lambda e: criterion_5_rigid_curve(e, kmaxidx=4, rmax=2, smax=1)),
    ("8 reconstruction (small)", lambda e: criterion_8_reconstruction(e, amax=4, bmax=3, csum=5)),
    ("9 fourier modes (small)", lambda e: criterion_9_fourier(e, kmax=3, nmax=2)),
    ("10 properties (small)", lambda e: criterion_10_properties(e, count=5)),
]


def run(level="quick", engine=None):
    engine = engine or Engine()
    checks = FULL if level == "full" else QUICK
    return [_check(name, lambda fn=fn: fn(engine)) for name, fn in checks]
