"""Exact rational arithmetic helpers: rationals, Bernoulli numbers, linear solves.

All arithmetic in this package is exact.  The rational type is gmpy2.mpq when
available (much faster), with fractions.Fraction as a drop-in fallback.
"""

import math

try:
    from gmpy2 import mpq as _mpq

    def QQ(a, b=1):
        return _mpq(a, b)

    Rational = type(_mpq(0))
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _Fraction

    def QQ(a, b=1):
        return _Fraction(a, b)

    Rational = _Fraction

QQ0 = QQ(0)
QQ1 = QQ(1)


def rat_from_str(s):
    """Parse "a/b" or "a" into an exact rational."""
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return QQ(int(num), int(den))
    return QQ(int(s))


class SingularMatrix(ValueError):
    pass


class InconsistentSystem(ValueError):
    pass


def bernoulli(k):
    """k-th Bernoulli number (B_1 = -1/2 convention), exact."""
    if k < 0:
        raise ValueError("negative index")
    cache = _BERNOULLI
    while len(cache) <= k:
        m = len(cache)
        # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
        acc = QQ0
        for j in range(m):
            acc += math.comb(m + 1, j) * cache[j]
        cache.append(-acc / (m + 1))
    return cache[k]


_BERNOULLI = [QQ1]


def double_factorial_odd(n):
    """(n)!! for odd n >= -1; the product n(n-2)...3*1, with (-1)!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def binom_half(j):
    """Binomial coefficient (1/2 choose j), exact rational."""
    num = QQ1
    for i in range(j):
        num *= QQ(1, 2) - i
    return num / math.factorial(j)


def solve_linear(rows, rhs):
    """Solve a (possibly overdetermined) exact linear system.

    ``rows`` is a list of m coefficient lists of length n, ``rhs`` the m right
    hand sides.  Requires full column rank and exact consistency; raises
    SingularMatrix / InconsistentSystem otherwise.  Returns the n solutions.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    aug = [[QQ(x) for x in row] + [QQ(rhs[i])] for i, row in enumerate(rows)]
    piv_rows = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if aug[i][col]:
                piv = i
                break
        if piv is None:
            raise SingularMatrix("column %d has no pivot" % col)
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_rows.append(col)
        r += 1
    for i in range(r, m):
        if aug[i][n]:
            raise InconsistentSystem("residual %s in row %d" % (aug[i][n], i))
    sol = [QQ0] * n
    for i, col in enumerate(piv_rows):
        sol[col] = aug[i][n]
    return sol


def interpolate_values(points, values, monomials):
    """Exact polynomial interpolation over a fixed monomial basis.

    ``points`` are exponent-evaluation tuples, ``monomials`` exponent tuples;
    returns the coefficient list (same order as ``monomials``).
    """
    rows = []
    for pt in points:
        row = []
        for mono in monomials:
            v = QQ1
            for x, e in zip(pt, mono):
                v *= QQ(x) ** e
            row.append(v)
        rows.append(row)
    return solve_linear(rows, values)


def eval_monomials(point, monomials, coeffs):
    out = QQ0
    for mono, c in zip(monomials, coeffs):
        v = c
        for x, e in zip(point, mono):
            v *= QQ(x) ** e
        out += v
    return out


def monomials_total_degree(nvars, degree):
    """Exponent tuples in ``nvars`` variables of total degree <= degree.

    Ordered by total degree, then reverse-lexicographically (leading variable
    first), which keeps printed polynomials in the conventional order.
    """
    out = []
    for d in range(degree + 1):
        out.extend(_compositions(nvars, d))
    return out


def _compositions(nvars, d):
    if nvars == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in _compositions(nvars - 1, d - first):
            out.append((first,) + rest)
    return out
