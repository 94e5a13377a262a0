"""Weierstrass wp expansions and the residue kernels A_k, B_k, C_{kl}.

The z-expansion of wp has quasi-modular coefficients; the fractional powers
(wp - 4G2)^(k + 1/2) are formal Laurent series whose residues produce, after
the double-factorial normalizations, the three families of quasi-modular
forms that evaluate the stationary theory:

    A_k = (-1)^k /(2k+1)!!            Res_z (wp - 4G2)^(k+1/2)
    B_k = (-1)^k /(2k+3)!!            Res_z (wp - 4G2)^(k+3/2) (wp + 2G2)
    C_kl = (-1)^(k+l-1)/((2k+1)!!(2l+1)!!)
           Res_z1 Res_z2 (wp(z1)-4G2)^(k+1/2) (wp(z2)-4G2)^(l+1/2) (wp(z1-z2)+2G2)

A_k is homogeneous of weight 2k, B_k of weight 2k+4, C_kl of weight 2k+2l+2.

The module also provides the Fourier-side expansion wp(p, q) in the region
|p| > 1, whose p^0-modes give the same residues up to O(q^(k+1)), and the
reconstruction algorithms that recover A, B, C from their derivation rules
and the partial polynomiality of their Fourier coefficients alone.
"""

import math

from .exact import (
    QQ,
    QQ0,
    QQ1,
    InconsistentSystem,
    SingularMatrix,
    double_factorial_odd,
    eval_monomials,
    interpolate_values,
    monomials_total_degree,
    solve_linear,
)
from .qmod import G2, QExpansion, QMod, eisenstein_reduce, modular_basis, sigma
from .series import LaurentSeries, QMOD_RING, RAT_RING, series_ring


class InsufficientInterpolationData(RuntimeError):
    pass


def wp_z(order, var="z"):
    """Laurent expansion of wp(z) = 1/z^2 + 2 sum_{k>=4 even} G_k z^(k-2)/(k-2)!.

    Higher Eisenstein series are reduced into Q[G4, G6]; odd-weight G_k vanish.
    Exact below ``order``.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    width = order + 2
    data = [QMod() for _ in range(width)]
    data[0] = QMod.from_rational(1)
    j = 4
    while j - 2 < order:
        data[j - 2 + 2] = eisenstein_reduce(j) * QQ(2, math.factorial(j - 2))
        j += 2
    return LaurentSeries(QMOD_RING, var, -2, data, order)


def _kernel_column(m, order, var="z1"):
    """z1-coefficient series of z2^m in wp(z1 - z2) + 2G2, region |z2| < |z1|."""
    lo = -(m + 2)
    width = order - lo
    data = [QMod() for _ in range(width)]
    data[0] = QMod.from_rational(m + 1)
    if m == 0:
        data[-lo] = data[-lo] + G2 * 2
    j = 4
    while j - 2 - m < order:
        if j - 2 >= m:
            coef = eisenstein_reduce(j) * (
                QQ(2 * math.comb(j - 2, m), math.factorial(j - 2)) * (QQ(-1) ** m)
            )
            data[j - 2 - m - lo] = data[j - 2 - m - lo] + coef
        j += 2
    return LaurentSeries(QMOD_RING, var, lo, data, order)


def _residue_pair(x, y):
    """[z^-1](x*y) by direct contraction; both windows must cover the pairing."""
    tot = QMod()
    for e, c in x.items():
        f = y[-1 - e]
        if f:
            tot = tot + c * f
    return tot


class KernelCache:
    """Memoized A_k, B_k, C_kl with a shared cache of (wp-4G2)^(j+1/2) powers.

    The j-th power is kept exact on the window [-(2j+1), 2(smax-j)+6), which
    is what residues against poles of order up to 2(smax-j)+2 require, with
    two guard terms.
    """

    def __init__(self):
        self._A = {}
        self._B = {}
        self._C = {}
        self._smax = -1
        self._pows = []

    def _ensure(self, s):
        if s <= self._smax:
            return
        smax = max(s, 4, 2 * self._smax)
        nbase = 2 * smax + 8
        base = wp_z(nbase) - LaurentSeries.const(QMOD_RING, "z", G2 * 4)
        pows = [base.sqrt().truncate(2 * smax + 6)]
        for j in range(1, smax + 2):
            top = 2 * (smax - j) + 6
            pows.append((pows[-1] * base).truncate(top))
        self._pows = pows
        self._base = base
        self._smax = smax

    def A(self, k):
        if k < 0:
            raise ValueError("k must be >= 0")
        out = self._A.get(k)
        if out is None:
            self._ensure(k)
            res = self._pows[k].residue()
            out = res * (QQ(-1) ** k / double_factorial_odd(2 * k + 1))
            assert out.is_homogeneous(2 * k)
            self._A[k] = out
        return out

    def B(self, k):
        if k < 0:
            raise ValueError("k must be >= 0")
        out = self._B.get(k)
        if out is None:
            self._ensure(k)
            wp2 = self._base + LaurentSeries.const(QMOD_RING, "z", G2 * 6)
            res = _residue_pair(self._pows[k + 1], wp2)
            out = res * (QQ(-1) ** k / double_factorial_odd(2 * k + 3))
            assert out.is_homogeneous(2 * k + 4)
            self._B[k] = out
        return out

    def C(self, k, l):
        if k < 0 or l < 0:
            raise ValueError("indices must be >= 0")
        out = self._C.get((k, l))
        if out is None:
            self._ensure(k + l)
            x1 = self._pows[k]
            x2 = self._pows[l]
            col_order = 2 * k + 2
            res = QMod()
            for m in range(0, 2 * l + 1):
                c2 = x2[-1 - m]
                if not c2:
                    continue
                col = _kernel_column(m, col_order)
                inner = _residue_pair(x1, col)
                if inner:
                    res = res + c2 * inner
            pref = QQ(-1) ** (k + l - 1) / (
                double_factorial_odd(2 * k + 1) * double_factorial_odd(2 * l + 1)
            )
            out = res * pref
            assert not out or out.is_homogeneous(2 * k + 2 * l + 2)
            self._C[(k, l)] = out
        return out


KERNELS = KernelCache()


def A_series(k):
    return KERNELS.A(k)


def B_series(k):
    return KERNELS.B(k)


def C_series(k, l):
    return KERNELS.C(k, l)


# ---------------------------------------------------------------------------
# Fourier side: wp(p, q) in the region |p| > 1
# ---------------------------------------------------------------------------

PINV_RING = series_ring("pinv", RAT_RING)


def wp_fourier(Nq, Np):
    """wp(p,q) - 4 G2(q) as a q-series over Laurent expansions in 1/p.

    The q^0 part is (1/4)(p+1)^2/(p-1)^2 expanded in the region |p| > 1; the
    q^d coefficient is sum_{k|d} k (p^k + p^-k) - 6 sigma_1(d).  Coefficients
    are series in the variable pinv = 1/p, exact below pinv^Np.
    """
    if Nq < 1 or Np < 1:
        raise ValueError("Nq and Np must be >= 1")
    one_minus = LaurentSeries(RAT_RING, "pinv", 0, [QQ1, QQ(-1)], Np)
    one_plus = LaurentSeries(RAT_RING, "pinv", 0, [QQ1, QQ1], Np)
    q0 = (one_plus * one_plus) * (one_minus * one_minus).inverse()
    q0 = q0.scale_rational(QQ(1, 4))
    cols = [q0]
    for d in range(1, Nq + 1):
        data = {}
        for k in range(1, d + 1):
            if d % k == 0:
                data[k] = data.get(k, QQ0) + k
                data[-k] = data.get(-k, QQ0) + k
        data[0] = data.get(0, QQ0) - 6 * sigma(d, 1)
        lo = -d  # pinv exponent -d  <->  p^d
        width = Np - lo
        coeffs = [QQ0] * width
        for e, v in data.items():
            coeffs[-e - lo] = v  # p^e = pinv^-e
        cols.append(LaurentSeries(RAT_RING, "pinv", lo, coeffs, Np))
    return LaurentSeries(PINV_RING, "q", 0, cols, Nq + 1)


def _fourier_sqrt(Nq, Np):
    """sqrt(wp(p,q) - 4G2) with the branch (1/2)(p+1)/(p-1), region |p| > 1."""
    f = wp_fourier(Nq, Np)
    f0 = f[0]
    g = f.scale(f0.inverse())
    s = g.sqrt()
    one_minus = LaurentSeries(RAT_RING, "pinv", 0, [QQ1, QQ(-1)], Np)
    one_plus = LaurentSeries(RAT_RING, "pinv", 0, [QQ1, QQ1], Np)
    s0 = (one_plus * one_minus.inverse()).scale_rational(QQ(1, 2))
    return s.scale(s0)


def p0_coefficient(k, Nq):
    """q-expansion of 2 [ sqrt(wp(p,q) - 4G2)^(2k+1) ]_{p^0}.

    The square-root branch and the |p| > 1 expansion region are fixed so that
    the k = 0, q^0 value is +1, matching Res (wp - 4G2)^(1/2) = 1.
    """
    if k < 0 or Nq < 0:
        raise ValueError("need k, Nq >= 0")
    Nq1 = max(Nq, 1)
    s = _fourier_sqrt(Nq1, Nq1 + 2)
    power = s ** (2 * k + 1)
    out = []
    for n in range(Nq + 1):
        out.append(2 * power[n][0])
    return QExpansion(out)


def residue_vs_p0_check(k):
    """Res_z(wp-4G2)^(k+1/2) agrees with 2[...]_{p^0} through q^k, exactly."""
    res = A_series(k) * (QQ(-1) ** k * double_factorial_odd(2 * k + 1))
    lhs = res.qexpand(k)
    rhs = p0_coefficient(k, k)
    return all(lhs[n] == rhs[n] for n in range(k + 1))


# ---------------------------------------------------------------------------
# Reconstruction from derivation rules + partial polynomiality
# ---------------------------------------------------------------------------


def g2_antiderivative(x):
    """Termwise antiderivative in the G2 exponent (integration constant 0)."""
    out = {}
    for (a, b, c), r in x.terms.items():
        out[(a + 1, b, c)] = r / (a + 1)
    return QMod(out)


def _interp_1d(samples, degree, extra=None):
    """Exact degree-``degree`` interpolation; optional extra consistency point."""
    pts, vals = zip(*samples)
    if len(pts) != degree + 1:
        raise InsufficientInterpolationData(
            "need %d samples, got %d" % (degree + 1, len(pts))
        )
    monos = [(e,) for e in range(degree + 1)]
    try:
        coeffs = interpolate_values([(p,) for p in pts], list(vals), monos)
    except (SingularMatrix, InconsistentSystem) as exc:
        raise InsufficientInterpolationData(str(exc))
    if extra is not None:
        xp, xv = extra
        if eval_monomials((xp,), monos, coeffs) != xv:
            raise InsufficientInterpolationData(
                "consistency sample at %d does not match" % xp
            )
    return monos, coeffs


def _solve_modular_ambiguity(weight, base, targets):
    """Find m in Mod_weight with [base + m]_{q^n} = targets[n] for all n."""
    basis = modular_basis(weight)
    nmax = len(targets) - 1
    base_exp = base.qexpand(nmax)
    cols = [mb.qexpand(nmax) for mb in basis]
    rows = [[col[n] for col in cols] for n in range(nmax + 1)]
    rhs = [targets[n] - base_exp[n] for n in range(nmax + 1)]
    try:
        sol = solve_linear(rows, rhs)
    except (SingularMatrix, InconsistentSystem) as exc:
        raise InsufficientInterpolationData(
            "modular ambiguity at weight %d: %s" % (weight, exc)
        )
    out = base
    for mb, c in zip(basis, sol):
        if c:
            out = out + mb * c
    return out


def reconstruct_A(kmax):
    """Rebuild A_0..A_kmax from the characterization, not from residues.

    Induction: A_0 = 1; d/dG2 A_k = 2 A_{k-1} fixes A_k up to a weight-2k
    modular form, which is pinned by the Fourier coefficients q^n for
    n <= 2k/12.  Those are predicted by the degree-2n polynomial p_n(k)
    interpolated from the already-built lower indices.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    out = [QMod.from_rational(1)]
    for k in range(1, kmax + 1):
        base = g2_antiderivative(out[k - 1]) * 2
        nmax = (2 * k) // 12
        targets = []
        for n in range(nmax + 1):
            if 3 * n > k - 1:
                raise InsufficientInterpolationData("k=%d n=%d" % (k, n))
            samples = []
            for kp in range(n, 3 * n + 1):
                val = (QQ(-4) ** kp * double_factorial_odd(2 * kp + 1)) * out[
                    kp
                ].qexpand(n)[n]
                samples.append((kp, val))
            extra = None
            if 3 * n + 1 <= k - 1:
                kp = 3 * n + 1
                extra = (
                    kp,
                    (QQ(-4) ** kp * double_factorial_odd(2 * kp + 1))
                    * out[kp].qexpand(n)[n],
                )
            monos, coeffs = _interp_1d(samples, 2 * n, extra)
            pnk = eval_monomials((k,), monos, coeffs)
            targets.append(pnk / (QQ(-4) ** k * double_factorial_odd(2 * k + 1)))
        ak = _solve_modular_ambiguity(2 * k, base, targets)
        assert ak.is_homogeneous(2 * k)
        out.append(ak)
    return out


def reconstruct_B(kmax, a_rec=None):
    """Rebuild B_0..B_kmax from d/dG2 B_k = 2 B_{k-1} - 2 A_{k+1} and the
    normalized Fourier polynomiality [B_k]_{q^n} = k!/((2k+1)!(-2)^k) q_n(k)."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    if a_rec is None:
        a_rec = reconstruct_A(kmax + 1)
    out = []
    for k in range(kmax + 1):
        prev = out[k - 1] if k >= 1 else QMod()
        base = g2_antiderivative(prev * 2 - a_rec[k + 1] * 2)
        nmax = (2 * k + 4) // 12
        targets = [QQ0]  # q_0 has degree -2, i.e. vanishes
        for n in range(1, nmax + 1):
            lo = max(n - 1, 0)
            if lo + 2 * n - 2 > k - 1:
                raise InsufficientInterpolationData("k=%d n=%d" % (k, n))
            norm = lambda kp: QQ(math.factorial(kp)) / (
                math.factorial(2 * kp + 1) * QQ(-2) ** kp
            )
            samples = [
                (kp, out[kp].qexpand(n)[n] / norm(kp))
                for kp in range(lo, lo + 2 * n - 1)
            ]
            extra = None
            kp = lo + 2 * n - 1
            if kp <= k - 1:
                extra = (kp, out[kp].qexpand(n)[n] / norm(kp))
            monos, coeffs = _interp_1d(samples, 2 * n - 2, extra)
            targets.append(eval_monomials((k,), monos, coeffs) * norm(k))
        bk = _solve_modular_ambiguity(2 * k + 4, base, targets)
        assert bk.is_homogeneous(2 * k + 4)
        out.append(bk)
    return out


def reconstruct_C(smax):
    """Rebuild the table C_kl for k + l <= smax from the derivation rule,
    the boundary C_i0 = B_{i-1}, and bivariate Fourier polynomiality."""
    if smax < 2:
        raise ValueError("smax must be >= 2")
    a_rec = reconstruct_A(max(smax, 2))
    b_rec = reconstruct_B(max(smax - 1, 0), a_rec=a_rec)
    table = {(0, 0): QMod()}
    for i in range(1, smax + 1):
        table[(i, 0)] = b_rec[i - 1]
        table[(0, i)] = b_rec[i - 1]

    def cnorm(kp, lp):
        return (
            QQ(-4) ** (kp - 1)
            * double_factorial_odd(2 * kp - 1)
            * QQ(-4) ** (lp - 1)
            * double_factorial_odd(2 * lp - 1)
        )

    for s in range(2, smax + 1):
        for k in range(s - 1, 0, -1):
            l = s - k
            if k < l:
                break
            deriv = (
                table[(k - 1, l)] * 2
                + table[(k, l - 1)] * 2
                - a_rec[k] * a_rec[l] * 2
            )
            base = g2_antiderivative(deriv)
            w = 2 * k + 2 * l + 2
            nmax = w // 12
            targets = [QQ0]
            for n in range(1, nmax + 1):
                a0 = max(1, n - 1)
                deg = 2 * n - 2
                monos = monomials_total_degree(2, deg)
                pts, vals = [], []
                for i in range(deg + 1):
                    for j in range(deg + 1 - i):
                        kp, lp = a0 + i, a0 + j
                        if kp + lp >= s:
                            raise InsufficientInterpolationData(
                                "sample (%d,%d) not yet built" % (kp, lp)
                            )
                        pts.append((kp, lp))
                        vals.append(table[(kp, lp)].qexpand(n)[n] * cnorm(kp, lp))
                try:
                    coeffs = interpolate_values(pts, vals, monos)
                except (SingularMatrix, InconsistentSystem) as exc:
                    raise InsufficientInterpolationData(str(exc))
                xp = (a0 + deg + 1, a0)
                if xp[0] + xp[1] < s:
                    want = table[xp].qexpand(n)[n] * cnorm(*xp)
                    if eval_monomials(xp, monos, coeffs) != want:
                        raise InsufficientInterpolationData(
                            "consistency sample %s mismatch" % (xp,)
                        )
                targets.append(eval_monomials((k, l), monos, coeffs) / cnorm(k, l))
            ckl = _solve_modular_ambiguity(w, base, targets)
            assert not ckl or ckl.is_homogeneous(w)
            table[(k, l)] = ckl
            table[(l, k)] = ckl
    return table
