"""The graded ring of quasi-modular forms QMod = Q[G2, G4, G6].

Elements are sparse polynomials in the Eisenstein series G2, G4, G6 with exact
rational coefficients.  G_k has weight k, so the monomial G2^a G4^b G6^c has
weight 2a + 4b + 6c.  The module provides the two natural derivations d/dG2
and D_q = q d/dq, q-expansion against the divisor-sum definition of the G_k,
reduction of higher Eisenstein series into Q[G4, G6], and the discriminant.
"""

import math

from .exact import QQ, QQ0, QQ1, bernoulli, solve_linear


class NonHomogeneousInput(ValueError):
    pass


def sigma(n, k):
    """Divisor power sum sigma_k(n)."""
    out = 0
    for d in range(1, int(math.isqrt(n)) + 1):
        if n % d == 0:
            out += d ** k
            e = n // d
            if e != d:
                out += e ** k
    return out


class QExpansion:
    """A q-expansion truncated at order N: exact coefficients of q^0..q^N."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = [QQ(c) for c in coeffs]

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __getitem__(self, n):
        if n < 0:
            return QQ0
        if n > self.order:
            raise IndexError("coefficient q^%d beyond truncation order %d" % (n, self.order))
        return self.coeffs[n]

    def truncate(self, N):
        return QExpansion(self.coeffs[: N + 1])

    def __eq__(self, other):
        return isinstance(other, QExpansion) and self.coeffs == other.coeffs

    def __add__(self, other):
        N = min(self.order, other.order)
        return QExpansion([self.coeffs[i] + other.coeffs[i] for i in range(N + 1)])

    def __sub__(self, other):
        N = min(self.order, other.order)
        return QExpansion([self.coeffs[i] - other.coeffs[i] for i in range(N + 1)])

    def __neg__(self):
        return QExpansion([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            N = min(self.order, other.order)
            out = [QQ0] * (N + 1)
            for i, a in enumerate(self.coeffs[: N + 1]):
                if not a:
                    continue
                for j in range(N + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
            return QExpansion(out)
        return QExpansion([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def q_ddq(self):
        """Apply q d/dq (drops nothing: the constant term just becomes 0)."""
        return QExpansion([n * c for n, c in enumerate(self.coeffs)])

    def inverse(self):
        """Multiplicative inverse; requires an invertible constant term."""
        if not self.coeffs[0]:
            raise ZeroDivisionError("constant term vanishes")
        N = self.order
        inv0 = 1 / self.coeffs[0]
        out = [inv0] + [QQ0] * N
        for n in range(1, N + 1):
            acc = QQ0
            for i in range(1, n + 1):
                if i <= N and self.coeffs[i]:
                    acc += self.coeffs[i] * out[n - i]
            out[n] = -inv0 * acc
        return QExpansion(out)

    def __repr__(self):
        return "QExpansion(%s)" % (self.coeffs,)


class QMod:
    """Sparse element of Q[G2, G4, G6]; keys are exponent triples (a, b, c)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    @classmethod
    def from_rational(cls, r):
        r = QQ(r)
        return cls({(0, 0, 0): r}) if r else cls()

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, QMod):
            return self.terms == other.terms
        return self.terms == QMod.from_rational(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, QMod):
            other = QMod.from_rational(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            if w is None:
                out[k] = v
            else:
                w = w + v
                if w:
                    out[k] = w
                else:
                    del out[k]
        return QMod(out)

    __radd__ = __add__

    def __neg__(self):
        return QMod({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, QMod):
            other = QMod.from_rational(other)
        return self + (-other)

    def __rsub__(self, other):
        return QMod.from_rational(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, QMod):
            r = QQ(other)
            if not r:
                return QMod()
            return QMod({k: v * r for k, v in self.terms.items()})
        out = {}
        for (a1, b1, c1), r1 in self.terms.items():
            for (a2, b2, c2), r2 in other.terms.items():
                key = (a1 + a2, b1 + b2, c1 + c2)
                v = out.get(key)
                if v is None:
                    out[key] = r1 * r2
                else:
                    v = v + r1 * r2
                    if v:
                        out[key] = v
                    else:
                        del out[key]
        return QMod(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = QMod.from_rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def is_homogeneous(self, w=None):
        """True if all monomials share one weight (w, when given)."""
        weights = {2 * a + 4 * b + 6 * c for (a, b, c) in self.terms}
        if not weights:
            return True
        if len(weights) > 1:
            return False
        return w is None or weights == {w}

    def weight(self):
        """Weight of a nonzero homogeneous element."""
        weights = {2 * a + 4 * b + 6 * c for (a, b, c) in self.terms}
        if len(weights) != 1:
            raise NonHomogeneousInput("weights present: %s" % sorted(weights))
        return weights.pop()

    def d_dG2(self):
        """Formal partial derivative with respect to G2."""
        out = {}
        for (a, b, c), r in self.terms.items():
            if a:
                out[(a - 1, b, c)] = r * a
        return QMod(out)

    def qexpand(self, N):
        """Exact q-expansion to order N from the divisor sums of G2, G4, G6."""
        out = QExpansion([QQ0] * (N + 1))
        for (a, b, c), r in self.terms.items():
            term = QExpansion([r] + [QQ0] * N)
            for gw, e in ((2, a), (4, b), (6, c)):
                if e:
                    term = term * _gen_power(gw, e, N)
            out = out + term
        return out

    def monomials(self):
        """Monomial items in the canonical order (descending lex in (a,b,c))."""
        return sorted(self.terms.items(), reverse=True)

    def serialize(self):
        """Canonical record list [(a, b, c, "num/den"), ...] for JSON output."""
        return [(a, b, c, str(r)) for (a, b, c), r in self.monomials()]

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b, c), r in self.monomials():
            mono = "*".join(
                g if e == 1 else "%s^%d" % (g, e)
                for g, e in (("G2", a), ("G4", b), ("G6", c))
                if e
            )
            if not mono:
                body = str(abs(r))
            elif abs(r) == 1:
                body = mono
            else:
                body = "%s*%s" % (abs(r), mono)
            if not parts:
                parts.append(body if r > 0 else "-" + body)
            else:
                parts.append(("+ " if r > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return "QMod(%s)" % self


G2 = QMod({(1, 0, 0): QQ1})
G4 = QMod({(0, 1, 0): QQ1})
G6 = QMod({(0, 0, 1): QQ1})
ONE_QM = QMod.from_rational(1)
ZERO_QM = QMod()


def eisenstein_qexp(k, N):
    """q-expansion of G_k = -B_k/(2k) + sum_n sigma_{k-1}(n) q^n to order N."""
    coeffs = [-bernoulli(k) / (2 * k)]
    coeffs.extend(QQ(sigma(n, k - 1)) for n in range(1, N + 1))
    return QExpansion(coeffs)


_GEN_CACHE = {}


def _gen_power(gw, e, N):
    # cached generator powers; grown monotonically in precision
    key = (gw, e)
    cached = _GEN_CACHE.get(key)
    if cached is not None and cached.order >= N:
        return cached.truncate(N)
    base = eisenstein_qexp(gw, N)
    out = base
    for _ in range(e - 1):
        out = out * base
    _GEN_CACHE[key] = out
    return out


def qmod_basis(w):
    """All monomial triples (a, b, c) of weight w, descending lex order."""
    out = []
    for a in range(w // 2, -1, -1):
        rem = w - 2 * a
        for b in range(rem // 4, -1, -1):
            rem2 = rem - 4 * b
            if rem2 % 6 == 0:
                out.append((a, b, rem2 // 6))
    return out


def modular_basis(w):
    """Monomial basis G4^b G6^c of the weight-w modular forms (no G2)."""
    if w < 0 or w % 2:
        return []
    out = []
    for b in range(w // 4, -1, -1):
        rem = w - 4 * b
        if rem % 6 == 0:
            out.append(QMod({(0, b, rem // 6): QQ1}))
    return out


_DQ_IMAGES = None


def _dq_generator_images():
    """Solve for D_q G2, D_q G4, D_q G6 against their q-expansions.

    D_q raises weight by 2, so D_q G_k lies in the weight-(k+2) graded piece;
    the coefficients are pinned by an exact linear solve on q-coefficients.
    """
    global _DQ_IMAGES
    if _DQ_IMAGES is not None:
        return _DQ_IMAGES
    images = {}
    for gw in (2, 4, 6):
        basis = qmod_basis(gw + 2)
        N = len(basis) + 2
        target = eisenstein_qexp(gw, N).q_ddq()
        cols = [QMod({t: QQ1}).qexpand(N) for t in basis]
        rows = [[col[n] for col in cols] for n in range(N + 1)]
        sol = solve_linear(rows, [target[n] for n in range(N + 1)])
        images[gw] = QMod({t: c for t, c in zip(basis, sol) if c})
    # cross-pin: D_q G2 must be the weight-4 form -2 G2^2 + 5/6 G4
    assert images[2] == QMod({(2, 0, 0): QQ(-2), (0, 1, 0): QQ(5, 6)})
    _DQ_IMAGES = images
    return images


def d_q(x):
    """The derivation D_q = q d/dq on QMod (raises weight by 2)."""
    img = _dq_generator_images()
    out = QMod()
    for (a, b, c), r in x.terms.items():
        if a:
            out = out + img[2] * QMod({(a - 1, b, c): r * a})
        if b:
            out = out + img[4] * QMod({(a, b - 1, c): r * b})
        if c:
            out = out + img[6] * QMod({(a, b, c - 1): r * c})
    return out


def commutator_wt_check(x):
    """Check [d/dG2, D_q] x = -2 wt(x) x for homogeneous x (self-test)."""
    if not x:
        return True
    if not x.is_homogeneous():
        raise NonHomogeneousInput("mixed weights")
    w = x.weight()
    lhs = d_q(x).d_dG2() - d_q(x.d_dG2())
    return lhs == x * QQ(-2 * w)


_EIS_CACHE = {}


def eisenstein_reduce(k):
    """The weight-k element of Q[G4, G6] with the divisor-sum q-expansion.

    Defined for even k >= 4; solved exactly against the monomial basis using
    one more q-coefficient than the dimension (the extra row double-checks).
    """
    if k % 2 or k < 4:
        raise ValueError("need even k >= 4")
    if k in _EIS_CACHE:
        return _EIS_CACHE[k]
    basis = modular_basis(k)
    N = len(basis)
    target = eisenstein_qexp(k, N)
    cols = [m.qexpand(N) for m in basis]
    rows = [[col[n] for col in cols] for n in range(N + 1)]
    sol = solve_linear(rows, [target[n] for n in range(N + 1)])
    out = QMod()
    for m, c in zip(basis, sol):
        out = out + m * c
    _EIS_CACHE[k] = out
    return out


_DELTA_UNIT = None


def delta_series(N):
    """Delta/q = prod (1-q^n)^24 to order N (unit constant term).

    Uses Euler's pentagonal expansion of prod(1-q^n) and three squarings of
    its cube.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    global _DELTA_UNIT
    if _DELTA_UNIT is not None and _DELTA_UNIT.order >= N:
        return _DELTA_UNIT.truncate(N)
    coeffs = [QQ0] * (N + 1)
    coeffs[0] = QQ1
    m = 1
    while True:
        p1 = m * (3 * m - 1) // 2
        p2 = m * (3 * m + 1) // 2
        if p1 > N and p2 > N:
            break
        s = QQ(-1) ** m
        if p1 <= N:
            coeffs[p1] += s
        if p2 <= N:
            coeffs[p2] += s
        m += 1
    euler = QExpansion(coeffs)
    out = euler * euler * euler
    for _ in range(3):
        out = out * out
    _DELTA_UNIT = out
    return out


def delta_unit_inverse(N):
    """(Delta/q)^{-1} to order N; division by Delta is a shift plus this."""
    return delta_series(N).inverse()


def delta_logderiv():
    """D_q(Delta)/Delta as a quasi-modular form: -24 G2."""
    return G2 * QQ(-24)
