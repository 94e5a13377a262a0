"""Formal descendent brackets on an elliptic K3 and their exact evaluation.

A bracket is a multiset of descendent insertions tau_k(gamma) with gamma in a
fixed 24-class basis of H^*(S): the unit, the point class, the hyperbolic
section/fiber pair (W, F), and ten hyperbolic pairs (e_i, f_i) spanning the
orthogonal complement V of {W, F} in H^2.  The value of a bracket is the
generating series over the primitive classes W + dF,

    <...> = sum_{d >= -1} q^d <...>_{W + dF},

which is quasi-modular of known weight after multiplying by the discriminant:
the engine represents it as an exact numerator in QMod over an implicit Delta.

Evaluation pipeline: resolve negative descendent indices, expand composite
classes, apply the divisor/string/dilaton equations, trade W-insertions for
fiber classes and a fresh hyperbolic pair (a D_q appears for each factor of
the symbolic degree d), remove remaining tau_k(1) insertions through the
holomorphic-anomaly recursion, and evaluate the resulting stationary brackets
by a Wick sum of the residue kernels A_k, B_k, C_kl.  Everything is memoized
on a canonical key that only records the pairing data the invariant can
depend on.
"""

import itertools
import os
from ast import literal_eval

from .exact import QQ, QQ0, QQ1, double_factorial_odd, rat_from_str
from .qmod import G2, NonHomogeneousInput, QMod, d_q, delta_unit_inverse
from . import kernels

# ---------------------------------------------------------------------------
# The cohomology basis
# ---------------------------------------------------------------------------

ONE, PT, W, F = 0, 1, 2, 3
NUM_PAIRS = 10


def av(i):
    """First member e_i of the i-th hyperbolic pair in V (1-based)."""
    return 2 + 2 * i


def bv(i):
    """Second member f_i of the i-th hyperbolic pair in V (1-based)."""
    return 3 + 2 * i


NCLASSES = 4 + 2 * NUM_PAIRS

DEG = [0, 2, 1, 1] + [1] * (2 * NUM_PAIRS)
WT = [-1, 1, 1, -1] + [0] * (2 * NUM_PAIRS)

# every basis class pairs with exactly one dual partner
DUAL = [PT, ONE, F, W] + [0] * (2 * NUM_PAIRS)
for _i in range(1, NUM_PAIRS + 1):
    DUAL[av(_i)] = bv(_i)
    DUAL[bv(_i)] = av(_i)


def pair(c1, c2):
    """Intersection pairing of two basis classes."""
    return QQ1 if DUAL[c1] == c2 else QQ0


def integral(c):
    """Integral over S of a basis class (picks out the point class)."""
    return QQ1 if c == PT else QQ0


def cup_with_divisor(c, d):
    """Cup product of a basis class with a degree-1 class, as (coeff, class)."""
    if c == ONE:
        return (QQ1, d)
    if DEG[c] == 1:
        return (pair(c, d), PT)
    return (QQ0, PT)


def genus_of(tup):
    return sum(k + DEG[c] - 1 for k, c in tup)


def weight_formula(tup):
    """Numerator weight of the bracket series: sum (2k + 2 deg + wt - 1)."""
    return sum(2 * k + 2 * DEG[c] + WT[c] - 1 for k, c in tup)


class EngineError(RuntimeError):
    pass


class RankBudgetExceeded(EngineError):
    pass


class PreconditionViolated(EngineError):
    pass


class NotApplicable(EngineError):
    pass


class WeightLawViolation(EngineError):
    pass


def fresh_pair(tup):
    """Smallest hyperbolic pair of V not touched by the bracket's classes."""
    used = {c for _, c in tup if c >= 4}
    for i in range(1, NUM_PAIRS + 1):
        if av(i) not in used and bv(i) not in used:
            return av(i), bv(i)
    raise RankBudgetExceeded(
        "all %d hyperbolic pairs of V are in use; the recursion needs a fresh "
        "pair orthogonal to every degree-2 insertion class" % NUM_PAIRS
    )


def canonical_key(tup):
    """Canonical form of the pairing data a bracket value can depend on.

    Records the multiset of (k, class) for the distinguished classes and, for
    the V-part, the multiset of dual-pair signatures: which descendent levels
    sit on the two sides of each hyperbolic pair (sides unordered, pairs
    unlabeled).  Brackets equal up to insertion order and isometries of V get
    the same key.
    """
    nonv = []
    groups = {}
    for k, c in tup:
        if c < 4:
            nonv.append((k, c))
        else:
            idx, side = divmod(c - 4, 2)
            groups.setdefault(idx, ([], []))[side].append(k)
    sigs = []
    for ka, kb in groups.values():
        sig = tuple(sorted((tuple(sorted(ka)), tuple(sorted(kb)))))
        sigs.append(sig)
    return (tuple(sorted(nonv)), tuple(sorted(sigs)))


# ---------------------------------------------------------------------------
# Series values: exact numerators over an implicit Delta
# ---------------------------------------------------------------------------


class SeriesValue:
    """A bracket value: quasi-modular numerator divided by the discriminant."""

    __slots__ = ("num",)

    def __init__(self, num):
        self.num = num

    @classmethod
    def zero(cls):
        return cls(QMod())

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        return isinstance(other, SeriesValue) and self.num == other.num

    def __add__(self, other):
        return SeriesValue(self.num + other.num)

    def __sub__(self, other):
        return SeriesValue(self.num - other.num)

    def __neg__(self):
        return SeriesValue(-self.num)

    def scale(self, r):
        return SeriesValue(self.num * r)

    def weight(self):
        """Weight of the numerator (None for the zero value)."""
        if not self.num:
            return None
        return self.num.weight()

    def dq(self):
        """D_q of the value; the Delta shift contributes +24 G2 times it."""
        return SeriesValue(d_q(self.num) + G2 * 24 * self.num)

    def ddg2(self):
        """d/dG2 of the value (Delta is modular, so only the numerator moves)."""
        return SeriesValue(self.num.d_dG2())

    def coefficient(self, m):
        """q^m coefficient of numerator/Delta; defined for m >= -1."""
        if m < -1:
            raise ValueError("the series starts at q^-1")
        N = m + 1
        num = self.num.qexpand(N)
        inv = delta_unit_inverse(max(N, 1))
        out = QQ0
        for i in range(N + 1):
            out += num[i] * inv[N - i]
        return out

    def __repr__(self):
        return "SeriesValue((%s)/Delta)" % (self.num,)


def coefficient_at(value, m):
    return value.coefficient(m)


# ---------------------------------------------------------------------------
# Rewriting rules (bracket -> BracketExpression)
#
# A BracketExpression is a list of (coeff, m, bracket) triples standing for
# sum coeff * D_q^m <bracket>.
# ---------------------------------------------------------------------------


def _combine(expr):
    acc = {}
    for coeff, m, tup in expr:
        key = (m, tup)
        cur = acc.get(key)
        cur = coeff if cur is None else cur + coeff
        if cur:
            acc[key] = cur
        elif key in acc:
            del acc[key]
    return [(c, m, t) for (m, t), c in sorted(acc.items(), key=lambda kv: kv[0])]


def _without(tup, *positions):
    drop = set(positions)
    return tuple(ins for i, ins in enumerate(tup) if i not in drop)


def _with_added(tup, *insertions):
    return tuple(sorted(tup + tuple(insertions)))


def _replaced(tup, pos, insertion):
    return tuple(sorted(_without(tup, pos) + (insertion,)))


def apply_string_divisor_dilaton(tup):
    """One application of the divisor, string or dilaton equation.

    Scans for the first insertion tau_0(D in H^2), tau_0(1) or tau_1(1) and
    rewrites it.  At the series level the divisor pairing beta.D splits into
    a constant (D.W) plus (D.F) times the slice degree, the latter realized
    as one D_q decoration.
    """
    for pos, (k, c) in enumerate(tup):
        if k == 0 and DEG[c] == 1:
            return _divisor(tup, pos)
        if k == 0 and c == ONE:
            return _string(tup, pos)
        if k == 1 and c == ONE:
            return _dilaton(tup, pos)
    raise NotApplicable("no divisor/string/dilaton insertion present")


def _divisor(tup, pos):
    d = tup[pos][1]
    rest = _without(tup, pos)
    out = []
    cw = pair(d, W)
    cf = pair(d, F)
    if cw:
        out.append((cw, 0, rest))
    if cf:
        out.append((cf, 1, rest))
    for i, (k, c) in enumerate(rest):
        coeff, cls = cup_with_divisor(c, d)
        if coeff:
            out.append((coeff, 0, _replaced(rest, i, (k - 1, cls))))
    for i, j in itertools.combinations(range(len(rest)), 2):
        ki, ci = rest[i]
        kj, cj = rest[j]
        if ki == 0 and kj == 0:
            w = _triple_integral(ci, cj, d)
            if w:
                out.append((w, 0, _without(rest, i, j)))
    return out


def _triple_integral(c1, c2, d):
    # integral of c1 c2 d with d of degree 1: one factor must be the unit
    if c1 == ONE and DEG[c2] == 1:
        return pair(c2, d)
    if c2 == ONE and DEG[c1] == 1:
        return pair(c1, d)
    return QQ0


def _string(tup, pos):
    rest = _without(tup, pos)
    out = []
    for i, (k, c) in enumerate(rest):
        out.append((QQ1, 0, _replaced(rest, i, (k - 1, c))))
    for i, j in itertools.combinations(range(len(rest)), 2):
        ki, ci = rest[i]
        kj, cj = rest[j]
        if ki == 0 and kj == 0:
            w = pair(ci, cj)
            if w:
                out.append((w, 0, _without(rest, i, j)))
    return out


def _dilaton(tup, pos):
    rest = _without(tup, pos)
    return [(QQ(2 * genus_of(rest) - 1 + len(rest)), 0, rest)]


def hae_apply(tup):
    """Right-hand side of the holomorphic anomaly equation for d/dG2.

    Four groups of terms: append tau_0(1) tau_0(F); push classes down the
    fibration (W -> 1, pt -> F) at level k+1; trade fiber-paired classes for
    F with weight 20; and the diagonal correction on pairs of H^2 classes,
    where (W, W) inserts the V-diagonal over the ten hyperbolic pairs.
    """
    out = [(QQ(2), 0, _with_added(tup, (0, ONE), (0, F)))]
    for i, (k, c) in enumerate(tup):
        if c == W:
            out.append((QQ(-2), 0, _replaced(tup, i, (k + 1, ONE))))
        elif c == PT:
            out.append((QQ(-2), 0, _replaced(tup, i, (k + 1, F))))
        if c == W:  # the only class pairing with F
            out.append((QQ(20), 0, _replaced(tup, i, (k, F))))
    n = len(tup)
    for i, j in itertools.combinations(range(n), 2):
        ki, ci = tup[i]
        kj, cj = tup[j]
        if ci == W and cj == W:
            for a in range(1, NUM_PAIRS + 1):
                for c1, c2 in ((av(a), bv(a)), (bv(a), av(a))):
                    out.append(
                        (QQ(-2), 0, _double_replace(tup, i, (ki, c1), j, (kj, c2)))
                    )
        elif ci == W and cj >= 4:
            out.append((QQ(2), 0, _double_replace(tup, i, (ki, cj), j, (kj, F))))
        elif cj == W and ci >= 4:
            out.append((QQ(2), 0, _double_replace(tup, i, (ki, F), j, (kj, ci))))
        elif ci >= 4 and cj >= 4:
            w = pair(ci, cj)
            if w:
                out.append(
                    (QQ(-2) * w, 0, _double_replace(tup, i, (ki, F), j, (kj, F)))
                )
    return _combine(out)


def _double_replace(tup, i, ins_i, j, ins_j):
    items = list(tup)
    items[i] = ins_i
    items[j] = ins_j
    return tuple(sorted(items))


def remove_W(tup):
    """Trade all W and F insertion classes for the fresh-pair substitution.

    Every W becomes (d F + a1) and every F becomes (F + a2) for one fresh
    hyperbolic pair (a1, a2); the symbolic degree d acts as D_q on the full
    series.  Expands multilinearly into D_q-decorated W-free brackets.
    """
    if not any(c == W for _, c in tup):
        raise NotApplicable("no W insertion")
    a1, a2 = fresh_pair(tup)
    options = []
    for k, c in tup:
        if c == W:
            options.append((((k, F), 1), ((k, a1), 0)))
        elif c == F:
            options.append((((k, F), 0), ((k, a2), 0)))
        else:
            options.append((((k, c), 0),))
    out = []
    for combo in itertools.product(*options):
        m = sum(d for _, d in combo)
        bracket = tuple(sorted(ins for ins, _ in combo))
        out.append((QQ1, m, bracket))
    return _combine(out)


def remove_tau_one_explicit(tup):
    """Closed six-term rewriting of a single tau_k(1), k >= 2.

    Valid when every other insertion class is F, the point class, or a
    V-class orthogonal to a fresh hyperbolic pair; the companion tau_0(1)
    produced in the point-class term is reduced by the string equation on
    the next pipeline pass.
    """
    pos = None
    best = -1
    for i, (k, c) in enumerate(tup):
        if c == ONE:
            if k < 2 or pos is not None:
                raise PreconditionViolated("need exactly one tau_k(1) with k >= 2")
            pos = i
            best = k
        elif c == W:
            raise PreconditionViolated("W insertion present")
    if pos is None:
        raise PreconditionViolated("no tau_k(1) insertion")
    k = best
    rest = _without(tup, pos)
    a1, a2 = fresh_pair(tup)
    n = len(rest)
    npt = sum(1 for _, c in rest if c == PT)
    coeff = QQ(2 * k - 4 - n + npt + 2 * sum(ki + DEG[ci] for ki, ci in rest))
    out = [
        (coeff, 0, _with_added(rest, (k - 1, F))),
        (QQ1, 0, _with_added(rest, (k - 2, PT), (0, ONE))),
    ]
    for i, (ki, ci) in enumerate(rest):
        if ci == PT:
            out.append(
                (QQ(-1), 0, _with_added(_without(rest, i), (k - 1, a1), (ki + 1, a2)))
            )
        elif ci >= 4:
            out.append(
                (QQ1, 0, _with_added(_without(rest, i), (ki, F), (k - 1, ci)))
            )
    for i, j in itertools.permutations(range(n), 2):
        ki, ci = rest[i]
        kj, cj = rest[j]
        if ci >= 4 and cj >= 4:
            w = pair(ci, cj)
            if w:
                out.append(
                    (
                        -w,
                        0,
                        _with_added(
                            _without(rest, i, j), (k - 1, a1), (ki, a2), (kj, F)
                        ),
                    )
                )
    return _combine(out)


def remove_tau_one_general(tup):
    """Anomaly-equation recursion removing one tau_k(1) insertion.

    Replace the chosen tau_k(1) (largest k) by tau_{k-1}(W) to get Y.  The
    anomaly equation applied to Y contains -2 times the original bracket;
    every other term has strictly fewer unit insertions.  Equating with the
    second computation of d/dG2<Y> (trade W away first, then push d/dG2
    through the D_q decorations with the commutation rule and expand inner
    d/dG2's by the anomaly equation again) isolates the original bracket.
    """
    pos = None
    best = -1
    for i, (k, c) in enumerate(tup):
        if c == ONE and k >= 2 and k > best:
            pos = i
            best = k
        elif c == W:
            raise PreconditionViolated("remove W insertions first")
    if pos is None:
        raise PreconditionViolated("no tau_k(1) with k >= 2")
    y = _replaced(tup, pos, (best - 1, W))
    path1 = hae_apply(y)
    # drop the -2 <tup> term produced by pushing the W down the fibration
    path1 = _combine(path1 + [(QQ(2), 0, tuple(sorted(tup)))])
    assert all(t != tuple(sorted(tup)) for _, _, t in path1), "solve term survived"
    path2 = []
    for coeff, m, xm in remove_W(y):
        for c2, m2, t2 in _ddg2_dq_expr(m, xm):
            path2.append((coeff * c2, m2, t2))
    # -2 X = path2 - path1  =>  X = (path1 - path2) / 2
    expr = [(c * QQ(1, 2), m, t) for c, m, t in path1]
    expr += [(-c * QQ(1, 2), m, t) for c, m, t in path2]
    return _combine(expr)


def _ddg2_dq_expr(m, tup):
    """Expression for d/dG2 (D_q^m <tup>) via the commutation relation.

    [d/dG2, D_q] acts as -2(w - 12) on a series whose numerator has weight w;
    the innermost d/dG2 is expanded by the anomaly equation.
    """
    if m == 0:
        return hae_apply(tup)
    w = weight_formula(tup) + 2 * (m - 1)
    out = [(c, mm + 1, t) for c, mm, t in _ddg2_dq_expr(m - 1, tup)]
    out.append((QQ(-2) * (w - 12), m - 1, tup))
    return out


# ---------------------------------------------------------------------------
# The engine
# ---------------------------------------------------------------------------


class Engine:
    """Memoized evaluator for descendent bracket series.

    Values are exact SeriesValue numerators; the memo is keyed on canonical
    pairing data only, so label choices of hyperbolic pairs never leak into
    results.  An optional line-oriented cache file persists the memo.
    """

    def __init__(self, cache_path=None):
        self._memo = {}
        self._by_tuple = {}
        self.pairs_allocated = set()
        self.cache_path = cache_path
        if cache_path and os.path.exists(cache_path):
            self.load_cache(cache_path)

    # -- public API --------------------------------------------------------

    def evaluate(self, insertions):
        """Evaluate a bracket given as (k, class) pairs.

        A class is a basis index or a {basis index: rational} combination;
        combinations are expanded multilinearly (each must be homogeneous in
        cohomological degree).
        """
        self.pairs_allocated = set()
        terms = self._expand(insertions)
        out = SeriesValue.zero()
        for coeff, tup in terms:
            out = out + self._eval(tup).scale(coeff)
        return out

    def eval_expr(self, expr):
        out = SeriesValue.zero()
        for coeff, m, tup in _combine(expr):
            val = self._eval(tup)
            for _ in range(m):
                val = val.dq()
            out = out + val.scale(coeff)
        return out

    def invariant(self, insertions, m):
        """The q^m slice: the invariant in the class of square 2m."""
        return self.evaluate(insertions).coefficient(m)

    def rank_used(self):
        """Hyperbolic-pair count consumed by the last top-level evaluation."""
        return len(self.pairs_allocated)

    # -- internals ----------------------------------------------------------

    def _expand(self, insertions):
        choices = []
        for k, spec in insertions:
            if isinstance(spec, int):
                choices.append([(QQ1, (int(k), spec))])
                continue
            items = [(c, QQ(r)) for c, r in sorted(spec.items()) if r]
            if not items:
                return []
            degs = {DEG[c] for c, _ in items}
            if len(degs) != 1:
                raise PreconditionViolated(
                    "class combination mixes cohomological degrees: %r" % (spec,)
                )
            choices.append([(r, (int(k), c)) for c, r in items])
        out = []
        for combo in itertools.product(*choices):
            coeff = QQ1
            for r, _ in combo:
                coeff *= r
            out.append((coeff, tuple(sorted(ins for _, ins in combo))))
        return out

    def _eval(self, tup):
        cached = self._by_tuple.get(tup)
        if cached is not None:
            return cached
        val = self._eval_uncached(tup)
        self._by_tuple[tup] = val
        return val

    def _eval_uncached(self, tup):
        # negative descendent indices: tau_k(c) = [k == -2] * integral(c)
        for i, (k, c) in enumerate(tup):
            if k < 0:
                if k == -2 and integral(c):
                    return self._eval(_without(tup, i))
                return SeriesValue.zero()
        if genus_of(tup) < 0:
            return SeriesValue.zero()
        key = canonical_key(tup)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        val = self._compute(tup)
        self._check_weight(tup, val)
        self._memo[key] = val
        return val

    def _compute(self, tup):
        for k, c in tup:
            if (k == 0 and DEG[c] == 1) or (c == ONE and k <= 1):
                return self.eval_expr(apply_string_divisor_dilaton(tup))
        if any(c == W for _, c in tup):
            expr = remove_W(tup)
            self._note_pair(tup)
            return self.eval_expr(expr)
        ones = [k for k, c in tup if c == ONE]
        if ones:
            if len(ones) == 1:
                expr = remove_tau_one_explicit(tup)
            else:
                expr = remove_tau_one_general(tup)
            self._note_pair(tup)
            return self.eval_expr(expr)
        return self.stationary_eval(tup)

    def _note_pair(self, tup):
        a1, _ = fresh_pair(tup)
        self.pairs_allocated.add(a1)

    def stationary_eval(self, tup):
        """Wick evaluation of a stationary bracket.

        Fiber insertions contribute A_k, point insertions B_k; V-insertions
        must pair up across their hyperbolic duals, each pair contributing
        C_{k,l}.  Unmatched V-insertions kill the term.
        """
        num = QMod.from_rational(1)
        groups = {}
        for k, c in tup:
            if c == F:
                num = num * kernels.A_series(k)
            elif c == PT:
                num = num * kernels.B_series(k)
            elif c >= 4:
                idx, side = divmod(c - 4, 2)
                groups.setdefault(idx, ([], []))[side].append(k)
            else:
                raise PreconditionViolated(
                    "stationary evaluation got class %d" % c
                )
        for ka, kb in groups.values():
            if len(ka) != len(kb):
                return SeriesValue.zero()
            acc = QMod()
            for perm in itertools.permutations(kb):
                term = QMod.from_rational(1)
                for x, y in zip(ka, perm):
                    term = term * kernels.C_series(x, y)
                acc = acc + term
            num = num * acc
            if not num:
                return SeriesValue.zero()
        return SeriesValue(num)

    def _check_weight(self, tup, val):
        if not val.num:
            return
        w = weight_formula(tup)
        if not val.num.is_homogeneous(w):
            raise WeightLawViolation(
                "bracket %r: numerator weight law predicts %d, got %s"
                % (tup, w, val.num)
            )

    # -- persistent cache ----------------------------------------------------

    CACHE_HEADER = "k3gw-cache-v1"

    def load_cache(self, path):
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != self.CACHE_HEADER:
                return
            for line in fh:
                line = line.rstrip("\n")
                if not line:
                    continue
                key_s, _w, num_s = line.split("\t")
                key = literal_eval(key_s)
                self._memo[key] = SeriesValue(_qmod_from_str(num_s))

    def save_cache(self, path=None):
        path = path or self.cache_path
        if not path:
            return
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(self.CACHE_HEADER + "\n")
            for key in sorted(self._memo, key=repr):
                val = self._memo[key]
                w = val.weight()
                fh.write(
                    "%r\t%s\t%s\n"
                    % (key, "-" if w is None else w, _qmod_to_str(val.num))
                )
        os.replace(tmp, path)


def _qmod_to_str(x):
    return ";".join(
        "%d,%d,%d:%s" % (a, b, c, r) for (a, b, c), r in x.monomials()
    ) or "0"


def _qmod_from_str(s):
    if s == "0":
        return QMod()
    terms = {}
    for part in s.split(";"):
        mono, r = part.split(":")
        a, b, c = (int(x) for x in mono.split(","))
        terms[(a, b, c)] = rat_from_str(r)
    return QMod(terms)


# ---------------------------------------------------------------------------
# Oracles and checks
# ---------------------------------------------------------------------------


def maulik_closed_form(ks, ls):
    """Normalized invariants of a rigid rational curve (square -2).

    For unit insertions tau_{k_i}(1), k_i >= 2, and curve-class insertions
    tau_{l_i}(beta), the normalized bracket equals
    (beta.beta)^s prod_{p=1..r} (2g + p + s - 3) with g = sum k + sum l - r.
    """
    r, s = len(ks), len(ls)
    if any(k < 2 for k in ks) or any(l < 0 for l in ls):
        raise ValueError("need k_i >= 2 and l_i >= 0")
    g = sum(ks) + sum(ls) - r
    out = QQ(-2) ** s
    for p in range(1, r + 1):
        out *= 2 * g + p + s - 3
    return out


def splitting_check(engine, fp_insertions, v_insertions):
    """Exact factorization of normalized correlators.

    For insertions of F and the point class together with V-classes, the
    Delta-normalized correlator splits as the product over the F/point
    singletons times the V-block.
    """
    for _, c in fp_insertions:
        if c not in (F, PT):
            raise PreconditionViolated("first group must be F or point classes")
    for _, c in v_insertions:
        if not (isinstance(c, int) and c >= 4):
            raise PreconditionViolated("second group must be V-classes")
    lhs = engine.evaluate(list(fp_insertions) + list(v_insertions)).num
    rhs = engine.evaluate(v_insertions).num if v_insertions else QMod.from_rational(1)
    for ins in fp_insertions:
        rhs = rhs * engine.evaluate([ins]).num
    return lhs == rhs
