"""Normalized q-difference operators on the quantum K-theory of T*P^(n-1)
at a cyclic group of order k.

The raw pushforward series of quasimap.resolved_series is dressed by the
gluing normalization (the trivial-insertion series, inverted), producing
operators whose trivial value is the identity.  On top of that sit the
Kaehler shift connection, its k-fold z-shifted product (the p-curvature at
a k-th root of unity), the cyclic power operators with their orbit
determinant unit, and the verifiers that compare them degree by degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclotomic import EisensteinElem, divisors, w_valuation
from .symbolic import (
    FactoredRatFunc,
    LaurentPoly,
    SeriesOperator,
    lp_project,
    lp_to_text,
    series_inverse,
    series_zshift,
)
from .quasimap import (
    InsertionSpec,
    equator_class,
    equator_unit_scalar,
    make_registry,
    restriction_matrix,
    resolved_series_multi,
)

INF = float("inf")


@dataclass
class NormalizedOp:
    """Operator series with the gluing normalization divided out."""

    op: SeriesOperator
    tag: str                 # kahler-shift | cyclic-power | adams | pcurvature
    spec: object
    component: int           # CRT component m | k of the coefficient ring
    p2_twist: str

    @property
    def reg(self):
        return self.op.reg


# ---------------------------------------------------------------------------
# constant-frame plumbing
# ---------------------------------------------------------------------------


def _mat_mul(a, b, reg):
    n = len(a)
    zero = FactoredRatFunc.zero(reg)
    out = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = zero
            for l in range(n):
                x, y = a[i][l], b[l][j]
                if _is_zero(x) or _is_zero(y):
                    continue
                acc = acc + x * y
            out[i][j] = acc
    return out


def _is_zero(x):
    return x.is_zero() if hasattr(x, "is_zero") else False


def _conjugate_series(op, left, right):
    """coeff[d] -> left * coeff[d] * right for a constant pair of matrices."""
    out = op.copy()
    for d in range(op.order + 1):
        out.coeff[d] = _mat_mul(_mat_mul(left, op.coeff[d], op.reg),
                                right, op.reg)
    return out


def _diagonal_part(op):
    out = SeriesOperator(op.reg, op.size, op.order)
    for d in range(op.order + 1):
        for i in range(op.size):
            out.coeff[d][i][i] = op.coeff[d][i][i]
    return out


def _frf_matrix(m):
    return [[x if isinstance(x, FactoredRatFunc) else
             FactoredRatFunc.from_poly(x) for x in row] for row in m]


# ---------------------------------------------------------------------------
# dressed operator pipeline
# ---------------------------------------------------------------------------


def _dressed_bundle(spec, families, D, component, p2_twist="qd", jobs=1):
    """Normalized operators for several insertion families over one CRT
    component, sharing the sector measure and the gluing series.

    The pipeline: raw series in the stable basis, conjugated to the
    fixed-point frame (where the classical term is diagonal), composed
    with the inverse of the trivial-insertion series, row-rescaled so
    that the trivial insertion itself normalizes to the identity, and
    conjugated back.
    """
    reg = make_registry(spec, component)
    fams = list(families) + [()]
    raw = resolved_series_multi(spec, fams, D, reg, p2_twist, jobs)
    R, Rinv = restriction_matrix(spec, reg)
    Rf = _frf_matrix(R)
    Rinvf = _frf_matrix(Rinv)
    fixed = [_conjugate_series(s, Rf, Rinvf) for s in raw]
    glue_inv = series_inverse(fixed[-1])
    col_scale = _diagonal_part(glue_inv)
    row_scale = series_inverse(col_scale)
    outs = []
    for bare in fixed[:-1]:
        dressed = (row_scale @ (glue_inv @ bare)) @ col_scale
        outs.append(_conjugate_series(dressed, Rinvf, Rf))
    return reg, outs


def normalized_operator(spec, insertions, D, component=None, p2_twist="qd",
                        jobs=1, tag="custom"):
    """Ratio of the dressed insertion series against the dressed trivial
    series; the trivial insertion yields the identity through order D."""
    if D < 0:
        raise ValueError("D >= 0")
    m = spec.k if component is None else component
    reg, ops = _dressed_bundle(spec, [tuple(insertions)], D, m, p2_twist,
                               jobs)
    return NormalizedOp(ops[0], tag, spec, m, p2_twist)


def _x_power_insertion(reg, t):
    return (InsertionSpec(reg.var("x", t), "p1"),)


def kahler_shift(spec, power, D, component=None, p2_twist="qd", jobs=1):
    """Connection operator of the power-th tensor power of O(1): the
    input-marking insertion x^power, normalized."""
    if power < 0:
        raise ValueError("power >= 0")
    m = spec.k if component is None else component
    reg = make_registry(spec, m)
    return normalized_operator(spec, _x_power_insertion(reg, power), D,
                               m, p2_twist, jobs, tag="kahler-shift")


def iterated_shift_product(op, k):
    """prod_{j=k-1..0} (z -> q^j z)-shift of op, the k-step holonomy of a
    connection operator."""
    out = series_zshift(op.op, k - 1)
    for j in range(k - 2, -1, -1):
        out = out @ series_zshift(op.op, j)
    return out


def p_curvature(spec, D, p2_twist="qd", jobs=1):
    """k-step holonomy of the Kaehler shift connection at a k-th root of
    unity: the product of z-shifted copies of kahler_shift(1), computed in
    every CRT component and reported in the top one (where q is a
    primitive k-th root)."""
    if D < 0:
        raise ValueError("D >= 0")
    per_component = {}
    for m in divisors(spec.k):
        shift = kahler_shift(spec, 1, D, m, p2_twist, jobs)
        per_component[m] = iterated_shift_product(shift, spec.k)
    top = per_component[spec.k]
    out = NormalizedOp(top, "pcurvature", spec, spec.k, p2_twist)
    out.components = per_component
    return out


# ---------------------------------------------------------------------------
# cyclic power operators
# ---------------------------------------------------------------------------


def adams_insertion(tau, spec, reg=None):
    """Monomial-wise cyclic-orbit insertion with the orbit determinant
    unit divided out, extended additively.

    Each x^t is sent through the orbit product prod_j (q^j x)^t and then
    renormalized by the t-th power of the unit q^(k(k-1)/2), which makes
    the assignment additive in tau and lands it on the plain k-th-power
    substitution x -> x^k.  The unit itself is the flagged discrepancy
    between the orbit product and the k-th power on monomials; dividing
    it out is what the main-theorem comparison selects.
    """
    if reg is None:
        reg = tau.reg
    ring = reg.ring
    k = spec.k
    unit_exp = (k * (k - 1) // 2) % k
    xi = reg.index("x")
    out = reg.zero()
    for e, c in tau.terms.items():
        t = e[xi]
        rest = list(e)
        rest[xi] = 0
        if "L" in reg.names and rest[reg.index("L")]:
            raise ValueError("insertion must be free of the output symbol")
        orbit = equator_class(reg.var("x", t), spec, out_var="x")
        scale = reg.mono(ring.q_power((-unit_exp * t) % k) * c, {})
        carrier = LaurentPoly(reg, {tuple(rest): reg.scalar(1)})
        out = out + scale * carrier * orbit
    return out


def quantum_cyclic_power(spec, tau, D, component=None, p2_twist="qd",
                         jobs=1):
    """Normalized operator of the unit-renormalized cyclic-orbit insertion
    of tau, over any CRT component (q need not be specialized)."""
    m = spec.k if component is None else component
    reg = make_registry(spec, m)
    t = tau if tau.reg == reg else lp_project(tau, reg)
    ins = (InsertionSpec(adams_insertion(t, spec, reg), "p1"),)
    return normalized_operator(spec, ins, D, m, p2_twist, jobs,
                               tag="cyclic-power")


def quantum_adams(spec, tau, D, p2_twist="qd", jobs=1):
    """Cyclic power operator in the top component, where q is a primitive
    k-th root of unity."""
    op = quantum_cyclic_power(spec, tau, D, spec.k, p2_twist, jobs)
    op.tag = "adams"
    return op


# ---------------------------------------------------------------------------
# verifiers
# ---------------------------------------------------------------------------


def _entry_text(f):
    num = lp_to_text(f.unit * f.num)
    if not f.den:
        return num
    return "(%s) / (%s)" % (num, lp_to_text(f.den_poly()))


def _compare_series(left, right, name, checks, max_witnesses=1):
    """Degree-by-degree exact comparison, one check record per degree."""
    order = min(left.order, right.order)
    ok_all = True
    for d in range(order + 1):
        bad = None
        for i in range(left.size):
            for j in range(left.size):
                if not left.coeff[d][i][j] == right.coeff[d][i][j]:
                    bad = {"degree": d, "entry": [i + 1, j + 1],
                           "left": _entry_text(left.coeff[d][i][j]),
                           "right": _entry_text(right.coeff[d][i][j])}
                    break
            if bad:
                break
        checks.append({"name": "%s[d=%d]" % (name, d),
                       "status": "pass" if bad is None else "fail",
                       "witness": bad})
        ok_all = ok_all and bad is None
    return ok_all


def verify_main_theorem(spec, D, p2_twist="qd", jobs=1):
    """Exact comparison of the cyclic power operators against the shift
    holonomy, in every CRT component and then at the k-th root of unity.

    Per component m | k: (a) the cyclic power of x equals the k-step
    iterated z-shift product of the Kaehler shift; alongside it, the raw
    orbit insertion of x equals the unit multiple of the same operator.
    At m = k the identical comparison is the statement that the Adams
    operator of x is the p-curvature.
    """
    checks = []
    ok = True
    for m in sorted(divisors(spec.k)):
        reg = make_registry(spec, m)
        x = reg.var("x")
        fams = [
            _x_power_insertion(reg, 1),
            (InsertionSpec(adams_insertion(x, spec, reg), "p1"),),
            (InsertionSpec(x, "equator"),),
        ]
        reg, (shift, cyclic, orbit_raw) = _dressed_bundle(
            spec, fams, D, m, p2_twist, jobs)
        holonomy = series_zshift(shift, spec.k - 1)
        for j in range(spec.k - 2, -1, -1):
            holonomy = holonomy @ series_zshift(shift, j)
        part = "adams-vs-pcurvature[m=%d]" % m if m == spec.k \
            else "cyclic-power-vs-shift-holonomy[m=%d]" % m
        ok &= _compare_series(cyclic, holonomy, part, checks)
        unit = equator_unit_scalar(spec, reg)
        ok &= _compare_series(orbit_raw,
                              cyclic.scale(reg.const(unit)),
                              "orbit-determinant-unit[m=%d]" % m, checks)
    return {"pass": bool(ok), "checks": checks,
            "parameters": {"n": spec.n, "k": spec.k, "D": D,
                           "p2_twist": p2_twist}}


def verify_properties(spec, D, p2_twist="qd", jobs=1):
    """The operator-level properties of the cyclic power construction:
    (i) additivity at the root of unity on tau_1 = 1-x, tau_2 = x;
    (ii) the q=1 component, where the orbit insertion of tau iterates the
    single-point insertion k times; (iii) covariant constancy: the Adams
    operator of x commutes with the Kaehler shift up to the z-shift.
    """
    checks = []
    ok = True
    k = spec.k

    # (i) + (iii) live at the root of unity
    reg = make_registry(spec, k)
    x = reg.var("x")
    fams = [
        (InsertionSpec(adams_insertion(reg.one() - x, spec, reg), "p1"),),
        (InsertionSpec(adams_insertion(x, spec, reg), "p1"),),
        _x_power_insertion(reg, 1),
    ]
    reg, (ad_one_minus, ad_x, shift) = _dressed_bundle(
        spec, fams, D, k, p2_twist, jobs)
    ident = SeriesOperator.identity(reg, spec.n, D)
    ok &= _compare_series(ad_one_minus + ad_x, ident,
                          "additivity[tau=1-x,x]", checks)
    ok &= _compare_series(series_zshift(ad_x, 1) @ shift, shift @ ad_x,
                          "kahler-constancy", checks)

    # (ii) the q = 1 component
    reg1 = make_registry(spec, 1)
    tau = reg1.one() - reg1.var("x")
    fams1 = [
        (InsertionSpec(tau, "equator"),),
        (InsertionSpec(tau, "p1"),),
    ]
    reg1, (orbit_op, point_op) = _dressed_bundle(
        spec, fams1, D, 1, p2_twist, jobs)
    power = point_op
    for _ in range(k - 1):
        power = power @ point_op
    ok &= _compare_series(orbit_op, power, "iteration-at-q1[tau=1-x]",
                          checks)
    return {"pass": bool(ok), "checks": checks,
            "parameters": {"n": spec.n, "k": spec.k, "D": D,
                           "p2_twist": p2_twist}}


# ---------------------------------------------------------------------------
# cohomological limit: valuations at q -> 1 along a = 1 + w*abar
# ---------------------------------------------------------------------------


def _binom_row(exp, w, p):
    """(1 + w*v)^exp as {v-exponent: Eisenstein coefficient}, exp >= 0."""
    row = {}
    coeff = EisensteinElem(p, [1])
    binom = 1
    for s in range(exp + 1):
        row[s] = coeff * binom
        coeff = coeff * w
        binom = binom * (exp - s) // (s + 1)
    return row


def _poly_w_expansion(poly, reg, p):
    """Formal degeneration of every torus parameter: a_i -> 1 + w*abar_i
    and hbar = h^2 -> 1 + w*hbar_bar, returning a dict
    {(hbar_bar-exp, abar-exps): Eisenstein element}.

    Negative exponents are cleared first by a global monomial of
    valuation zero, so the expansion is finite and the minimum valuation
    is unchanged.  Odd powers of h have no integral degeneration and are
    rejected.
    """
    n = sum(1 for nm in reg.names if nm.startswith("a_"))
    a_idx = [reg.index("a_%d" % (i + 1)) for i in range(n)]
    h_idx = reg.index("h")
    other = [i for i in range(len(reg.names))
             if i != h_idx and i not in a_idx]
    shifts = [0] * (n + 1)
    for e in poly.terms:
        if e[h_idx] % 2:
            raise ValueError("entries must be even in h (integral in hbar)")
        shifts[0] = max(shifts[0], -(e[h_idx] // 2))
        for t, idx in enumerate(a_idx):
            shifts[t + 1] = max(shifts[t + 1], -e[idx])
    w = EisensteinElem(p, [0, 1])
    out = {}
    for e, c in poly.terms.items():
        if any(e[i] for i in other):
            raise ValueError("expansion expects entries in a and h only")
        base = EisensteinElem.from_cyc(c)
        exps = [e[h_idx] // 2 + shifts[0]] \
            + [e[idx] + shifts[t + 1] for t, idx in enumerate(a_idx)]
        acc = {(): base}
        for exp in exps:
            row = _binom_row(exp, w, p)
            nxt = {}
            for key, val in acc.items():
                for s, cf in row.items():
                    kk = key + (s,)
                    add = val * cf
                    nxt[kk] = nxt[kk] + add if kk in nxt else add
            acc = nxt
        for key, val in acc.items():
            out[key] = out[key] + val if key in out else val
    return out


def _poly_w_valuation(poly, reg, p):
    if poly.is_zero():
        return INF
    exp = _poly_w_expansion(poly, reg, p)
    vals = [w_valuation(v) for v in exp.values() if v]
    return min(vals) if vals else INF


def entry_w_valuation(f, reg, p):
    """(zeta-1)-adic valuation of a rational entry after a -> 1 + w*abar,
    with abar and h kept formal: distinct monomials cannot cancel, so the
    valuation is the minimum over expansion coefficients, minus the
    denominator contribution."""
    if f.is_zero():
        return INF
    val = _poly_w_valuation(f.unit * f.num, reg, p)
    for b, mult in f.den.values():
        dv = _poly_w_valuation(b.to_poly(reg), reg, p)
        if dv is INF:
            raise ZeroDivisionError("denominator factor vanished")
        val -= mult * dv
    return val


def cohomological_expand(spec, p, D, p2_twist="qd", jobs=1):
    """Valuation report for the deviation of the p-curvature from the
    identity under q -> 1 along the Eisenstein direction.

    Substitutes a_i = 1 + w*abar_i (w = zeta - 1) into every entry of
    (p-curvature - Id) and reports the exact w-adic valuation; the claim
    is that every valuation is at least p.
    """
    if spec.k != p:
        raise ValueError("the cyclic order must equal p")
    if p < 2 or any(p % t == 0 for t in range(2, int(p ** 0.5) + 1)):
        raise ValueError("p must be prime")
    shift = kahler_shift(spec, 1, D, p, p2_twist, jobs)
    curv = iterated_shift_product(shift, p)
    reg = curv.reg
    ident = SeriesOperator.identity(reg, spec.n, D)
    dev = curv - ident
    table = []
    minimum = INF
    for d in range(D + 1):
        row = []
        for i in range(spec.n):
            cells = []
            for j in range(spec.n):
                v = entry_w_valuation(dev.coeff[d][i][j], reg, p)
                cells.append(v)
                if v < minimum:
                    minimum = v
            row.append(cells)
        table.append(row)
    return {"pass": bool(minimum >= p), "minimum": minimum,
            "valuations": table,
            "parameters": {"n": spec.n, "p": p, "D": D,
                           "p2_twist": p2_twist}}
