"""A conjectural Virasoro-type constraint for the reduced K3 theory.

For k >= 2 and insertions with classes F or the point class, a five-term
linear combination of bracket series vanishes identically, with one family
of unknown rational coefficients w_{k,m} multiplying the descendent pair
tau_m(p) tau_{k-2-m}(F).  This module assembles the constraint over many
(insertion set, slice) instances as an exact linear system in the w_{k,m},
solves it, and checks full column rank and exactly vanishing residuals.

Two conventions here are pinned by data rather than taken from the usual
Hodge-grading prescription, because only they reproduce the reference
coefficient table with a full-rank, zero-residual system (every nearby
variant is either inconsistent or rank-deficient, which can be checked by
flipping them):

* the anti-holomorphic pair carries b-values (3/2, 1/2), i.e. the (0,2)
  side enters the quadratic sum like a (1,1) class;
* the w-term uses only the point-first orientation tau_m(p) tau_{k-2-m}(F);
  including the mirrored orientation makes w_{k,m} and w_{k,k-2-m}
  multiply identical brackets, so no table could be determined uniquely.

The intersection-pairing scale of the (2,0)+(0,2) classes is a free choice;
the inverse-pairing weights compensate, which a rescaling test confirms via
the ``sigma_scale`` parameter.
"""

from .exact import (
    QQ,
    QQ0,
    QQ1,
    InconsistentSystem,
    SingularMatrix,
    solve_linear,
)
from .engine import F, ONE, PT, W, av, bv


class QOutOfRange(ValueError):
    pass


class UnderdeterminedSystem(RuntimeError):
    pass


def pochhammer_coeff(alpha, p, q):
    """Coefficient of x^q in (x + alpha)(x + alpha + 1)...(x + alpha + p)."""
    if p < 0:
        raise ValueError("p must be >= 0")
    if q < 0 or q > p + 1:
        raise QOutOfRange("q=%d outside 0..%d" % (q, p + 1))
    coeffs = [QQ1]
    for j in range(p + 1):
        a = QQ(alpha) + j
        nxt = [QQ0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c * a
            nxt[i + 1] += c
        coeffs = nxt
    return coeffs[q]


def basis_with_b_values(sigma_scale=1):
    """The 24-class basis with b-values and inverse-pairing dual list.

    Returns (classes, b, dual_pairs): classes maps names to engine classes,
    b maps names to rationals, and dual_pairs lists ordered pairs
    (name_a, name_b, g_weight) with g the inverse intersection pairing.
    """
    classes = {"one": ONE, "pt": PT, "W": W, "F": F}
    b = {"one": QQ(-1, 2), "pt": QQ(3, 2), "W": QQ(1, 2), "F": QQ(1, 2)}
    for i in range(1, 10):
        classes["e%d" % i] = av(i)
        classes["f%d" % i] = bv(i)
        b["e%d" % i] = QQ(1, 2)
        b["f%d" % i] = QQ(1, 2)
    classes["sigma"] = {av(10): QQ1}
    classes["sigmabar"] = {bv(10): QQ(sigma_scale)}
    b["sigma"] = QQ(3, 2)
    b["sigmabar"] = QQ(1, 2)
    ginv = QQ(1) / sigma_scale
    pairs = [("one", "pt", QQ1), ("pt", "one", QQ1), ("W", "F", QQ1), ("F", "W", QQ1)]
    for i in range(1, 10):
        pairs.append(("e%d" % i, "f%d" % i, QQ1))
        pairs.append(("f%d" % i, "e%d" % i, QQ1))
    pairs.append(("sigma", "sigmabar", ginv))
    pairs.append(("sigmabar", "sigma", ginv))
    return classes, b, pairs


def build_constraint(engine, k, insertions, slice_m, sigma_scale=1):
    """One affine constraint: constant + sum_m coeff_m w_{k,m} = 0.

    ``insertions`` is a list of (k_i, "F" or "pt").  The five terms: the
    tau_{k+1}(1) removal term, the fiber term, the single-insertion shifts,
    the quadratic inverse-pairing sum, and the w-columns; all are evaluated
    as bracket series and sliced at q^slice_m.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    classes, bvals, pairs = basis_with_b_values(sigma_scale)
    fixed = [(ki, classes[name]) for ki, name in insertions]
    half = pochhammer_coeff(QQ(1, 2), k, 0)

    def sl(ins):
        return engine.evaluate(ins).coefficient(slice_m)

    const = -half * sl(fixed + [(k + 1, ONE)])
    const += -(2 * k + 2) * half * sl(fixed + [(k, F)])
    for j, (kj, name) in enumerate(insertions):
        rest = [f for i, f in enumerate(fixed) if i != j]
        coeff = pochhammer_coeff(bvals[name] + kj, k, 0)
        const += coeff * sl(rest + [(k + kj, classes[name])])
    for m in range(k):
        sign = QQ(-1) ** (m + 1) / 2
        for name_a, name_b, g in pairs:
            coeff = sign * g * pochhammer_coeff(-bvals[name_a] - m, k, 0)
            if coeff:
                const += coeff * sl(
                    fixed + [(m, classes[name_a]), (k - 1 - m, classes[name_b])]
                )
    wcoeffs = {
        m: sl(fixed + [(m, PT), (k - 2 - m, F)]) for m in range(k - 1)
    }
    return const, wcoeffs


def constraint_instances(k):
    """Deterministic schedule of (insertions, slice) instances.

    The empty insertion set is sliced deep enough that the split-bracket
    columns B_m A_{k-2-m} are separated (they need q-coefficients up to
    about k-1); single insertions add overdetermination.
    """
    out = []
    for m in range(-1, max(3, k)):
        out.append(([], m))
    for j in range(k + 1):
        for m in range(-1, max(3, k - 1)):
            out.append(([(j, "pt")], m))
            out.append(([(j, "F")], m))
    return out


def solve_w(engine, k, sigma_scale=1, instances=None):
    """Solve for w_{k,0..k-2} from the assembled exact linear system.

    The system must have full column rank (else UnderdeterminedSystem) and
    exactly vanishing residuals on every extra instance (else
    InconsistentSystem, which would falsify the constraint ansatz).
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if instances is None:
        instances = constraint_instances(k)
    rows = []
    rhs = []
    for ins, m in instances:
        const, wc = build_constraint(engine, k, ins, m, sigma_scale)
        rows.append([wc[j] for j in range(k - 1)])
        rhs.append(-const)
    try:
        sol = solve_linear(rows, rhs)
    except SingularMatrix as exc:
        raise UnderdeterminedSystem(str(exc))
    return {m: sol[m] for m in range(k - 1)}


# the reference w_{k,m} table the solver must reproduce
W_TABLE = {
    2: {0: QQ(-3, 4)},
    3: {0: QQ(3), 1: QQ(-27, 4)},
    4: {0: QQ(195, 16), 1: QQ(45, 16), 2: QQ(-645, 16)},
    5: {0: QQ(1935, 32), 1: QQ(945, 64), 2: QQ(0), 3: QQ(-16785, 64)},
    6: {
        0: QQ(22995, 64),
        1: QQ(315, 4),
        2: QQ(1575, 64),
        3: QQ(-315, 8),
        4: QQ(-123165, 64),
    },
}


def verify_w_table(engine, ks=(2, 3, 4, 5, 6)):
    """Re-solve each k and compare to the reference table; returns a report."""
    report = {"match": True, "k": {}}
    for k in ks:
        entry = {}
        try:
            got = solve_w(engine, k)
            entry["w"] = {str(m): str(v) for m, v in got.items()}
            entry["match"] = got == W_TABLE[k]
        except (UnderdeterminedSystem, InconsistentSystem) as exc:
            entry["error"] = "%s: %s" % (type(exc).__name__, exc)
            entry["match"] = False
        report["k"][str(k)] = entry
        report["match"] = report["match"] and entry["match"]
    return report
