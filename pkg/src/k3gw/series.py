"""Truncated Laurent series over a generic exact coefficient ring.

A series stores exact coefficients for exponents lo..order-1 of one formal
variable; exponents below lo are exactly zero and exponents >= order are
unknown.  ``order`` may be ``INF`` for exact (polynomial) data.  Arithmetic
propagates truncation: a product is exact below min(N1 + lo2, N2 + lo1).

Coefficients may be rationals, quasi-modular forms, or again Laurent series
(giving the bivariate expansions used for the two-variable residue kernels).
"""

import math

from .exact import QQ, QQ1, binom_half
from .qmod import QMod, eisenstein_reduce, G2

INF = math.inf


class VariableMismatch(ValueError):
    pass


class OddLeadingExponent(ValueError):
    pass


class NonUnitLeadingCoefficient(ValueError):
    pass


class TruncationTooShort(ValueError):
    pass


class Ring:
    """Coefficient-ring descriptor: just the two constants the series need."""

    __slots__ = ("zero", "one", "name")

    def __init__(self, zero, one, name):
        self.zero = zero
        self.one = one
        self.name = name

    def __repr__(self):
        return "Ring(%s)" % self.name


RAT_RING = Ring(QQ(0), QQ(1), "Q")
QMOD_RING = Ring(QMod(), QMod.from_rational(1), "QMod")


def series_ring(var, inner):
    """Ring of Laurent series in ``var`` over ``inner`` (for nesting)."""
    zero = LaurentSeries(inner, var, 0, [], INF)
    one = LaurentSeries(inner, var, 0, [inner.one], INF)
    return Ring(zero, one, "%s[[%s]]" % (inner.name, var))


class LaurentSeries:
    __slots__ = ("ring", "var", "lo", "coeffs", "order")

    def __init__(self, ring, var, lo, coeffs, order=None):
        self.ring = ring
        self.var = var
        coeffs = list(coeffs)
        if order is None:
            order = lo + len(coeffs)
        # normalize: strip leading zeros, clamp to the exact window
        if order is not INF and len(coeffs) > order - lo:
            coeffs = coeffs[: max(0, order - lo)]
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            lo += 1
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if not coeffs:
            lo = order
        self.lo = lo
        self.coeffs = coeffs
        self.order = order

    @classmethod
    def const(cls, ring, var, value, order=INF):
        return cls(ring, var, 0, [value], order)

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        """Equality of the stored coefficient data (truncations may differ)."""
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.var != other.var:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.lo == other.lo and self.coeffs == other.coeffs

    def __getitem__(self, e):
        """Exact coefficient of exponent e; raises past the truncation."""
        if e >= self.order:
            raise TruncationTooShort(
                "%s^%d requested, exact below %s" % (self.var, e, self.order)
            )
        if e < self.lo or e >= self.lo + len(self.coeffs):
            return self.ring.zero
        return self.coeffs[e - self.lo]

    def items(self):
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.lo + i, c

    def _check(self, other):
        if self.var != other.var:
            raise VariableMismatch("%s vs %s" % (self.var, other.var))

    def __add__(self, other):
        self._check(other)
        order = min(self.order, other.order)
        if self.is_zero():
            return other.truncate(order)
        if other.is_zero():
            return self.truncate(order)
        lo = min(self.lo, other.lo)
        if order is INF:
            hi = max(self.lo + len(self.coeffs), other.lo + len(other.coeffs))
        else:
            hi = order
        out = [self[e] + other[e] for e in range(lo, hi)]
        return LaurentSeries(self.ring, self.var, lo, out, order)

    def __neg__(self):
        return LaurentSeries(
            self.ring, self.var, self.lo, [-c for c in self.coeffs], self.order
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries) and other.var == self.var:
            return self._mul_series(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, scalar):
        """Multiply every coefficient by a scalar from (or acting on) the ring."""
        if not scalar:
            return LaurentSeries(self.ring, self.var, 0, [], self.order)
        return LaurentSeries(
            self.ring, self.var, self.lo, [c * scalar for c in self.coeffs], self.order
        )

    def _mul_series(self, other):
        if self.is_zero() or other.is_zero():
            order = min(
                self.order + other.lo if self.order is not INF else INF,
                other.order + self.lo if other.order is not INF else INF,
            )
            return LaurentSeries(self.ring, self.var, 0, [], order)
        if self.order is INF:
            order = INF if other.order is INF else other.order + self.lo
        elif other.order is INF:
            order = self.order + other.lo
        else:
            order = min(self.order + other.lo, other.order + self.lo)
        lo = self.lo + other.lo
        if order is INF:
            hi = self.lo + len(self.coeffs) + other.lo + len(other.coeffs) - 1
        else:
            hi = order
        n = hi - lo
        out = [self.ring.zero] * n
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k >= n:
                    break
                if b:
                    out[k] = out[k] + a * b
        return LaurentSeries(self.ring, self.var, lo, out, order)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = LaurentSeries.const(self.ring, self.var, self.ring.one)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def shift(self, k):
        """Multiply by var^k."""
        return LaurentSeries(
            self.ring,
            self.var,
            self.lo + k,
            self.coeffs,
            INF if self.order is INF else self.order + k,
        )

    def truncate(self, order):
        if order >= self.order:
            return self
        return LaurentSeries(self.ring, self.var, self.lo, self.coeffs, order)

    def map_coefficients(self, fn, ring):
        return LaurentSeries(
            ring, self.var, self.lo, [fn(c) for c in self.coeffs], self.order
        )

    def residue(self):
        """Coefficient of the -1 power (requires it inside the exact window)."""
        if self.order <= -1:
            raise TruncationTooShort("z^-1 outside the exact window")
        return self[-1]

    def sqrt(self):
        """Formal square root for even lowest exponent and unit leading term.

        Writes x = z^lo (1 + u) and expands (1+u)^(1/2) binomially; the result
        is exact below order - lo/2.
        """
        if self.is_zero():
            raise NonUnitLeadingCoefficient("zero series")
        if self.order is INF:
            raise ValueError("sqrt needs a finite truncation order")
        if self.lo % 2:
            raise OddLeadingExponent("lowest exponent %d is odd" % self.lo)
        if self.coeffs[0] != self.ring.one:
            raise NonUnitLeadingCoefficient("leading coefficient %r" % (self.coeffs[0],))
        one = LaurentSeries.const(self.ring, self.var, self.ring.one)
        u = self.shift(-self.lo) - one
        rel = self.order - self.lo
        out = one.truncate(rel)
        upow = one.truncate(rel)
        j = 1
        while True:
            upow = upow * u
            if upow.is_zero() or upow.lo >= rel:
                break
            out = out + upow.scale_rational(binom_half(j))
            j += 1
        return out.shift(self.lo // 2)

    def scale_rational(self, r):
        """Scalar multiple by an exact rational (works for any ring)."""
        if not r:
            return LaurentSeries(self.ring, self.var, 0, [], self.order)
        return LaurentSeries(
            self.ring, self.var, self.lo, [c * r for c in self.coeffs], self.order
        )

    def inverse(self):
        """Multiplicative inverse when the leading coefficient is invertible.

        Only used over rational coefficients (the field case); the generic
        rings here never need division.
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero series")
        if self.order is INF:
            raise ValueError("inverse needs a finite truncation order")
        c0 = self.coeffs[0]
        try:
            c0inv = 1 / c0
        except TypeError:
            raise NonUnitLeadingCoefficient("cannot invert %r" % (c0,))
        # x = c0 z^lo (1 + u); 1/x = (1/c0) z^{-lo} sum (-u)^j
        one = LaurentSeries.const(self.ring, self.var, self.ring.one)
        u = self.shift(-self.lo).scale(c0inv) - one
        rel = self.order - self.lo
        out = one.truncate(rel)
        upow = one.truncate(rel)
        while True:
            upow = upow * (-u)
            if upow.is_zero() or upow.lo >= rel:
                break
            out = out + upow
        return out.scale(c0inv).shift(-self.lo)

    def __str__(self):
        if self.is_zero():
            return "O(%s^%s)" % (self.var, self.order)
        parts = []
        for e, c in self.items():
            parts.append("(%s)*%s^%d" % (c, self.var, e))
        return " + ".join(parts) + " + O(%s^%s)" % (self.var, self.order)

    def __repr__(self):
        return "LaurentSeries(%s)" % self


def ls_arith(x, y, op):
    """Spec-level arithmetic dispatcher on Laurent series."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "scalar_mul":
        return x.scale(y)
    raise ValueError("unknown op %r" % op)


def ls_sqrt(x):
    return x.sqrt()


def residue(x):
    return x.residue()


def kernel_z1_minus_z2(order, var_outer="z1", var_inner="z2"):
    """Expansion of wp(z1 - z2) + 2 G2 in the region |z2| < |z1|.

    Returned as a series in the inner variable z2 whose coefficients are
    Laurent series in z1 over QMod; both variables exact below ``order``.
    The double pole gives sum_n (n+1) z2^n / z1^{n+2}; the regular part of wp
    is expanded binomially.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    inner_ring = series_ring(var_outer, QMOD_RING)
    cols = []
    for m in range(order):
        # polar part
        lo = -(m + 2)
        width = order - lo
        data = [QMod() for _ in range(width)]
        data[0] = QMod.from_rational(m + 1)
        # + 2 G2 contribution sits in the z2^0 column at z1^0
        if m == 0:
            data[0 - lo] = G2 * 2
        # regular part: 2 sum_{j>=4 even} G_j (z1 - z2)^{j-2} / (j-2)!
        j = 4
        while j - 2 - m < order:
            if j - 2 >= m:
                gj = eisenstein_reduce(j)
                coef = (
                    gj
                    * QQ(2 * math.comb(j - 2, m), math.factorial(j - 2))
                    * (QQ(-1) ** m)
                )
                data[j - 2 - m - lo] = data[j - 2 - m - lo] + coef
            j += 2
        cols.append(LaurentSeries(QMOD_RING, var_outer, lo, data, order))
    return LaurentSeries(inner_ring, var_inner, 0, cols, order)


def double_residue(x):
    """Res_{z1} Res_{z2}: the z2^{-1} coefficient, then its z1^{-1} coefficient."""
    inner = x.residue()
    if isinstance(inner, LaurentSeries):
        return inner.residue()
    # inner residue fell outside the stored window but is exactly zero
    return inner
