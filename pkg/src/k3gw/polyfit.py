"""Normalized double-bracket invariants and exact polynomial interpolation.

For a primitive class of square 2m, the invariants with unit, curve-class,
orthogonal-divisor and point insertions become polynomials in the descendent
indices once each index clears an explicit lower bound, after rescaling by
the double-factorial normalization

    one:   (-4)^(k-1) (2k-1)!!        beta (and F):  (-4)^l (2l+1)!!
    delta: (-4)^(m-1) (2m-1)!!        point:         (-4)^n (2n+1)!!

The conjectured total degree is beta^2 + 2 - 2u - t + r.  This module fits
those polynomials exactly on a lattice cube inside the valid range, checks
extra out-of-sample points, and ships a registry of published tables for
coefficient-exact verification.
"""

import itertools

from .exact import (
    QQ,
    QQ0,
    QQ1,
    InconsistentSystem,
    SingularMatrix,
    double_factorial_odd,
    monomials_total_degree,
    solve_linear,
)
from .engine import F, ONE, PT, W, av, bv


class KindClassificationFailed(ValueError):
    pass


class NotPolynomial(RuntimeError):
    """Out-of-sample or overdetermination mismatch; carries a witness point."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SingularSystem(RuntimeError):
    pass


class PolyQ:
    """Multivariate polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        self.terms = dict(terms or {})

    @classmethod
    def constant(cls, variables, r):
        r = QQ(r)
        z = (0,) * len(variables)
        return cls(variables, {z: r} if r else {})

    @classmethod
    def variable(cls, variables, name):
        e = [0] * len(variables)
        e[list(variables).index(name)] = 1
        return cls(variables, {tuple(e): QQ1})

    def _coerce(self, other):
        if isinstance(other, PolyQ):
            if other.vars != self.vars:
                raise ValueError("variable mismatch")
            return other
        return PolyQ.constant(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, r in other.terms.items():
            v = out.get(e, QQ0) + r
            if v:
                out[e] = v
            elif e in out:
                del out[e]
        return PolyQ(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyQ(self.vars, {e: -r for e, r in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, PolyQ):
            r = QQ(other)
            return PolyQ(
                self.vars, {e: c * r for e, c in self.terms.items()} if r else {}
            )
        other = self._coerce(other)
        out = {}
        for e1, r1 in self.terms.items():
            for e2, r2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, QQ0) + r1 * r2
                if v:
                    out[e] = v
                elif e in out:
                    del out[e]
        return PolyQ(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = PolyQ.constant(self.vars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, PolyQ)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def degree(self):
        """Total degree: the degree of p(t, ..., t)."""
        return max((sum(e) for e in self.terms), default=0)

    def eval(self, point):
        out = QQ0
        for e, r in self.terms.items():
            v = r
            for x, p in zip(point, e):
                v *= QQ(x) ** p
            out += v
        return out

    def _ordered(self):
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-x for x in kv[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, r in self._ordered():
            mono = "*".join(
                v if p == 1 else "%s^%d" % (v, p)
                for v, p in zip(self.vars, e)
                if p
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

    def serialize(self):
        return [[list(e), str(r)] for e, r in self._ordered()]

    def __repr__(self):
        return "PolyQ(%s)" % self


KIND_ONE = "one"
KIND_BETA = "beta"
KIND_F = "F"
KIND_DELTA = "delta"
KIND_PT = "pt"


class Ins:
    """One insertion of a family: a kind, an index (int or variable name),
    and for delta-kind the concrete orthogonal class."""

    __slots__ = ("kind", "index", "cls")

    def __init__(self, kind, index, cls=None):
        if kind not in (KIND_ONE, KIND_BETA, KIND_F, KIND_DELTA, KIND_PT):
            raise KindClassificationFailed("unknown kind %r" % (kind,))
        if kind == KIND_DELTA and cls is None:
            raise KindClassificationFailed("delta insertion needs a class")
        self.kind = kind
        self.index = index
        self.cls = cls

    def engine_class(self, m):
        if self.kind == KIND_ONE:
            return ONE
        if self.kind == KIND_PT:
            return PT
        if self.kind == KIND_F:
            return F
        if self.kind == KIND_DELTA:
            return self.cls
        # the curve class W + mF of the slice being extracted
        if m == 0:
            return {W: QQ1}
        return {W: QQ1, F: QQ(m)}


class FamilySpec:
    """A bracket family with some indices varying over the polynomial range."""

    def __init__(self, name, insertions, beta_sq_half):
        self.name = name
        self.insertions = list(insertions)
        self.m = beta_sq_half
        self.variables = []
        for ins in self.insertions:
            if isinstance(ins.index, str) and ins.index not in self.variables:
                self.variables.append(ins.index)
        if not self.variables:
            raise ValueError("family has no varying index")

    def counts(self):
        r = sum(1 for i in self.insertions if i.kind == KIND_ONE)
        s = sum(1 for i in self.insertions if i.kind in (KIND_BETA, KIND_F))
        t = sum(1 for i in self.insertions if i.kind == KIND_DELTA)
        u = sum(1 for i in self.insertions if i.kind == KIND_PT)
        return r, s, t, u

    def degree_bound(self):
        r, s, t, u = self.counts()
        return max(2 * self.m + 2 - 2 * u - t + r, 0)

    def lower_bound(self, ins):
        """Smallest admissible index (range bound, rounded up, and the
        normalization's positivity requirement)."""
        _r, _s, t, u = self.counts()
        two_gap = 2 * u + t  # 2*(u + t/2)
        if ins.kind == KIND_ONE:
            b = _ceil_half(2 * (self.m + 3) - two_gap)
            return max(b, 1)
        b = _ceil_half(2 * (self.m + 1) - two_gap)
        if ins.kind == KIND_DELTA:
            return max(b, 1)
        return max(b, 0)

    def indices_at(self, point):
        """Concrete descendent indices for one sample point."""
        env = dict(zip(self.variables, point))
        return [
            env[i.index] if isinstance(i.index, str) else i.index
            for i in self.insertions
        ]


def _ceil_half(n2):
    # ceil(n2 / 2) for an integer n2
    return -((-n2) // 2)


def normalization_factor(kind, k):
    if kind == KIND_ONE:
        if k < 1:
            raise KindClassificationFailed("unit insertion needs k >= 1")
        return QQ(-4) ** (k - 1) * double_factorial_odd(2 * k - 1)
    if kind in (KIND_BETA, KIND_F):
        return QQ(-4) ** k * double_factorial_odd(2 * k + 1)
    if kind == KIND_DELTA:
        if k < 1:
            raise KindClassificationFailed("delta insertion needs index >= 1")
        return QQ(-4) ** (k - 1) * double_factorial_odd(2 * k - 1)
    if kind == KIND_PT:
        return QQ(-4) ** k * double_factorial_odd(2 * k + 1)
    raise KindClassificationFailed("unknown kind %r" % (kind,))


def classify_class(cls, m):
    """Map an engine class (or combination) to its normalization kind."""
    if isinstance(cls, dict):
        want = {W: QQ1} if m == 0 else {W: QQ1, F: QQ(m)}
        if {c: QQ(r) for c, r in cls.items() if r} == want:
            return KIND_BETA
        raise KindClassificationFailed("class %r fits no kind" % (cls,))
    if cls == ONE:
        return KIND_ONE
    if cls == PT:
        return KIND_PT
    if cls == F:
        return KIND_F
    if cls == W:
        if m == 0:
            return KIND_BETA  # the curve class itself at this slice
        raise KindClassificationFailed("bare W is not beta at slice %d" % m)
    if isinstance(cls, int) and cls >= 4:
        return KIND_DELTA
    raise KindClassificationFailed("class %r fits no kind" % (cls,))


def normalized_bracket(engine, insertions, m):
    """Normalized invariant <<...>> at the slice beta^2/2 = m.

    ``insertions`` are (k, class) pairs; classes are classified into the four
    normalization kinds, the curve class is expanded as W + mF, and the
    engine value's q^m coefficient is rescaled.
    """
    ins = []
    scale = QQ1
    for k, cls in insertions:
        kind = classify_class(cls, m)
        scale *= normalization_factor(kind, k)
        ins.append((k, Ins(kind, k, cls if kind == KIND_DELTA else None).engine_class(m)))
    return engine.evaluate(ins).coefficient(m) * scale


def _family_value(engine, spec, point):
    ks = spec.indices_at(point)
    val = engine.evaluate(
        [(k, ins.engine_class(spec.m)) for k, ins in zip(ks, spec.insertions)]
    ).coefficient(spec.m)
    for k, ins in zip(ks, spec.insertions):
        val *= normalization_factor(ins.kind, k)
    return val


def fit_polynomial(engine, spec, degree_bound=None):
    """Exact fit of the normalized family over its polynomial range.

    Samples the smallest lattice cube of side (degree+1) at the range's lower
    corner, solves for all monomials of total degree <= degree, and demands
    exact agreement on the whole (overdetermined) cube plus three diagonal
    out-of-sample points.  Raises NotPolynomial with a witness on mismatch.
    """
    if degree_bound is None:
        degree_bound = spec.degree_bound()
    nv = len(spec.variables)
    lows = {}
    for ins in spec.insertions:
        if isinstance(ins.index, str):
            b = spec.lower_bound(ins)
            lows[ins.index] = max(lows.get(ins.index, 0), b)
    base = [lows[v] for v in spec.variables]
    side = degree_bound + 1
    axes = [range(b, b + side) for b in base]
    grid = [tuple(p) for p in itertools.product(*axes)]
    extras = [tuple(b + side + j for b in base) for j in range(3)]
    values = {}
    for pt in grid + extras:
        values[pt] = _family_value(engine, spec, pt)
    monos = monomials_total_degree(nv, degree_bound)
    rows = []
    rhs = []
    for pt in grid:
        rows.append([_mono_eval(pt, e) for e in monos])
        rhs.append(values[pt])
    try:
        sol = solve_linear(rows, rhs)
    except SingularMatrix as exc:
        raise SingularSystem(str(exc))
    except InconsistentSystem as exc:
        raise NotPolynomial("cube samples are not polynomial: %s" % exc)
    poly = PolyQ(spec.variables, {e: c for e, c in zip(monos, sol) if c})
    for pt in extras:
        if poly.eval(pt) != values[pt]:
            raise NotPolynomial(
                "out-of-sample point %s mismatches the fit" % (pt,), witness=pt
            )
    return poly


def _mono_eval(pt, e):
    v = QQ1
    for x, p in zip(pt, e):
        v *= QQ(x) ** p
    return v


# ---------------------------------------------------------------------------
# Registry of published polynomial tables
# ---------------------------------------------------------------------------


def _pp(m):
    return FamilySpec(
        "pp@%d" % m, [Ins(KIND_PT, "k"), Ins(KIND_PT, "l")], m
    )


def _alpha(m):
    return FamilySpec(
        "alpha@%d" % m,
        [Ins(KIND_DELTA, "k", av(1)), Ins(KIND_DELTA, "l", bv(1))],
        m,
    )


def _pF(m):
    return FamilySpec(
        "pF@%d" % m, [Ins(KIND_PT, "k"), Ins(KIND_F, "l")], m
    )


def _one3(m):
    return FamilySpec(
        "one3@%d" % m,
        [Ins(KIND_ONE, "k1"), Ins(KIND_ONE, "k2"), Ins(KIND_ONE, "k3")],
        m,
    )


def _one2(m):
    return FamilySpec(
        "one2@%d" % m, [Ins(KIND_ONE, "k"), Ins(KIND_ONE, "l")], m
    )


def _one2_fixed(l_fixed):
    return FamilySpec(
        "one2_l%d@0" % l_fixed,
        [Ins(KIND_ONE, "k"), Ins(KIND_ONE, l_fixed)],
        0,
    )


def _pp_boundary():
    return FamilySpec(
        "pp_l0@2", [Ins(KIND_PT, "k"), Ins(KIND_PT, 0)], 2
    )


def _expected_polynomials():
    kl = ("k", "l")
    k, l = (PolyQ.variable(kl, v) for v in kl)
    one = PolyQ.constant(kl, 1)

    k3v = ("k1", "k2", "k3")
    k1, k2, k3 = (PolyQ.variable(k3v, v) for v in k3v)
    s = k1 + k2 + k3

    kv = ("k",)
    kk = PolyQ.variable(kv, "k")
    onek = PolyQ.constant(kv, 1)

    tables = {}
    tables["pp@1"] = (_pp(1), one * 1)
    tables["pp@2"] = (_pp(2), 8 * k**2 + 8 * l**2 - 12 * k - 12 * l + 20 * one)
    tables["pp@3"] = (
        _pp(3),
        QQ(64, 3) * k**4
        + 64 * k**2 * l**2
        + QQ(64, 3) * l**4
        - QQ(512, 3) * k**3
        - 96 * k**2 * l
        - 96 * k * l**2
        - QQ(512, 3) * l**3
        + QQ(1712, 3) * k**2
        + 144 * k * l
        + QQ(1712, 3) * l**2
        - QQ(1024, 3) * k
        - QQ(1024, 3) * l
        - 64 * one,
    )
    tables["alpha@0"] = (_alpha(0), one * QQ(-1, 4))
    tables["alpha@1"] = (
        _alpha(1),
        -2 * k**2 - 2 * k * l - 2 * l**2 + 7 * k + 7 * l - QQ(29, 2) * one,
    )
    tables["alpha@2"] = (
        _alpha(2),
        -QQ(16, 3) * k**4
        - QQ(32, 3) * k**3 * l
        - QQ(64, 3) * k**2 * l**2
        - QQ(32, 3) * k * l**3
        - QQ(16, 3) * l**4
        + 64 * k**3
        + QQ(368, 3) * k**2 * l
        + QQ(368, 3) * k * l**2
        + 64 * l**3
        - QQ(1016, 3) * k**2
        - 432 * k * l
        - QQ(1016, 3) * l**2
        + 678 * k
        + 678 * l
        - 606 * one,
    )
    tables["pF@0"] = (_pF(0), one * 1)
    tables["pF@1"] = (
        _pF(1),
        8 * k**2 + 16 * l**2 - 12 * k - 24 * l + 6 * one,
    )
    tables["pF@2"] = (
        _pF(2),
        QQ(64, 3) * k**4
        + 128 * k**2 * l**2
        + 64 * l**4
        - QQ(512, 3) * k**3
        - 192 * k**2 * l
        - 192 * k * l**2
        - 512 * l**3
        + QQ(1376, 3) * k**2
        + 288 * k * l
        + 1344 * l**2
        - QQ(520, 3) * k
        - 472 * l
        - 512 * one,
    )
    one3_1 = PolyQ.constant(k3v, 1)
    tables["one3@-1"] = (
        _one3(-1),
        4 * (s - 4 * one3_1) * (2 * s - 7 * one3_1) * (s - 3 * one3_1),
    )
    tables["one3@0"] = (
        _one3(0),
        32
        * (s - 4 * one3_1)
        * (2 * s - 7 * one3_1)
        * (
            2 * k1**3 + 2 * k1**2 * k2 + 2 * k1 * k2**2 + 2 * k2**3
            + 2 * k1**2 * k3 + 2 * k2**2 * k3 + 2 * k1 * k3**2
            + 2 * k2 * k3**2 + 2 * k3**3
            - 9 * k1**2 - 6 * k1 * k2 - 9 * k2**2 - 6 * k1 * k3
            - 6 * k2 * k3 - 9 * k3**2
            + 17 * k1 + 17 * k2 + 17 * k3 - 21 * one3_1
        ),
    )
    tables["one3@1"] = (
        _one3(1),
        16
        * (s - 4 * one3_1)
        * (2 * s - 7 * one3_1)
        * (
            16 * k1**5 + 16 * k1**4 * k2 + 64 * k1**3 * k2**2
            + 64 * k1**2 * k2**3 + 16 * k1 * k2**4 + 16 * k2**5
            + 16 * k1**4 * k3 + 64 * k1**2 * k2**2 * k3 + 16 * k2**4 * k3
            + 64 * k1**3 * k3**2 + 64 * k1**2 * k2 * k3**2
            + 64 * k1 * k2**2 * k3**2 + 64 * k2**3 * k3**2
            + 64 * k1**2 * k3**3 + 64 * k2**2 * k3**3
            + 16 * k1 * k3**4 + 16 * k2 * k3**4 + 16 * k3**5
            - 176 * k1**4 - 224 * k1**3 * k2 - 384 * k1**2 * k2**2
            - 224 * k1 * k2**3 - 176 * k2**4 - 224 * k1**3 * k3
            - 192 * k1**2 * k2 * k3 - 192 * k1 * k2**2 * k3
            - 224 * k2**3 * k3 - 384 * k1**2 * k3**2
            - 192 * k1 * k2 * k3**2 - 384 * k2**2 * k3**2
            - 224 * k1 * k3**3 - 224 * k2 * k3**3 - 176 * k3**4
            + 792 * k1**3 + 744 * k1**2 * k2 + 744 * k1 * k2**2
            + 792 * k2**3 + 744 * k1**2 * k3 + 432 * k1 * k2 * k3
            + 744 * k2**2 * k3 + 744 * k1 * k3**2 + 744 * k2 * k3**2
            + 792 * k3**3
            - 1402 * k1**2 - 980 * k1 * k2 - 1402 * k2**2
            - 980 * k1 * k3 - 980 * k2 * k3 - 1402 * k3**2
            + 1221 * k1 + 1221 * k2 + 1221 * k3 - 873 * one3_1
        ),
    )
    tables["one2@-1"] = (
        _one2(-1),
        2 * (k + l - 3 * one) * (2 * k + 2 * l - 5 * one),
    )
    p_kl = 16 * (k + l - 3 * one) * (
        4 * k**3 + 4 * k**2 * l + 4 * k * l**2 + 4 * l**3
        - 16 * k**2 - 12 * k * l - 16 * l**2
        + 29 * k + 29 * l - 29 * one
    )
    tables["one2@0"] = (_one2(0), p_kl)
    tables["one2@1"] = (
        _one2(1),
        8 * (k + l - 3 * one) * (
            32 * k**5 + 32 * k**4 * l + 128 * k**3 * l**2
            + 128 * k**2 * l**3 + 32 * k * l**4 + 32 * l**5
            - 336 * k**4 - 448 * k**3 * l - 704 * k**2 * l**2
            - 448 * k * l**3 - 336 * l**4
            + 1392 * k**3 + 1328 * k**2 * l + 1328 * k * l**2 + 1392 * l**3
            - 2236 * k**2 - 1624 * k * l - 2236 * l**2
            + 1780 * k + 1780 * l - 1049 * one
        ),
    )
    tables["one2_l1@0"] = (
        _one2_fixed(1),
        32 * (kk**2 - 2 * kk + 3 * onek) * (2 * kk - 3 * onek) * (kk - onek),
    )
    tables["one2_l2@0"] = (
        _one2_fixed(2),
        16 * (2 * kk**3 - 5 * kk**2 + 12 * kk - 6 * onek) * (2 * kk - onek),
    )
    tables["one2_l3@0"] = (
        _one2_fixed(3),
        16 * (4 * kk**3 - 4 * kk**2 + 29 * kk + 22 * onek) * kk,
    )
    tables["pp_l0@2"] = (
        _pp_boundary(),
        8 * kk**2 - 12 * kk + 28 * onek,
    )
    return tables


TABLES = _expected_polynomials()

# the full-range polynomial P(k, l) at slice 0, for the boundary comparison
P_ONE2_AT0 = TABLES["one2@0"][1]


def verify_table(engine, table_id):
    """Refit one registered family and compare coefficient-exactly."""
    spec, expected = TABLES[table_id]
    report = {
        "table": table_id,
        "family": spec.name,
        "beta_sq_half": spec.m,
        "degree_bound": spec.degree_bound(),
        "variables": list(spec.variables),
    }
    try:
        fitted = fit_polynomial(engine, spec)
    except NotPolynomial as exc:
        report["match"] = False
        report["error"] = str(exc)
        return report
    report["fitted"] = str(fitted)
    report["expected"] = str(expected)
    report["fitted_terms"] = fitted.serialize()
    report["match"] = fitted == expected
    return report
