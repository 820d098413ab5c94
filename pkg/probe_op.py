"""Test the opposite-chamber envelope at p2.

Blocks: P_m[d][r][c] = chi(QM_d, Ohat * fop_r(p2 var) * L^m * f_c(L)),
including the honest d=0 block (triangular, not decreed).  Operator:
Op_m = inv(P_0) @ P_m or P_m @ inv(P_0).  Checks per CRT component:
  CLS: (inv(P_0) @ P_m)[z^0] == classical_matrix  (decree-consistency)
  F2 : Op_2 == zshift(Op_1,1) @ Op_1
  THM: Op_eq == sc * zshift(Op_1,k-1) @ ... @ Op_1
"""
import sys
import time

sys.path.insert(0, "/root/pkg/src")

from qadams.quasimap import (TargetSpec, InsertionSpec, make_registry,
                             classical_matrix, dual_weight_multiset,
                             equator_class, equator_unit_scalar, ohat_twist,
                             ovir_weight, project_series, stable_envelope)
from qadams.symbolic import (FactoredRatFunc, SeriesOperator, chi_projective,
                             lp_substitute, series_inverse, series_zshift)
from probe_dict import divisors, eq_series, const_diag


def op_envelope(i, spec, reg):
    x = reg.var("x")
    out = reg.one()
    for j in range(1, i):
        out = out * (reg.var("a_%d" % j) - reg.var("h", 2) * x)
    for j in range(i + 1, spec.n + 1):
        out = out * (reg.var("a_%d" % j) - x)
    return out


def block(spec, d, reg, power, eq_tau, p2tw):
    n = spec.n
    ring = reg.ring
    weights = dual_weight_multiset(spec, d, reg)
    base = ohat_twist(spec, d, reg) * ovir_weight(spec, d, reg)
    if power:
        base = base * reg.mono(1, {"L": power})
    if eq_tau is not None:
        base = base * equator_class(eq_tau, spec)
    rep2 = (reg.mono(ring.q_power(d % spec.k), {"L": 1}) if p2tw == "qd"
            else reg.var("L"))
    out = []
    for r in range(1, n + 1):
        fr = lp_substitute(op_envelope(r, spec, reg), "x", rep2)
        row = []
        for c in range(1, n + 1):
            fc = lp_substitute(stable_envelope(c, spec, reg), "x",
                               reg.var("L"))
            row.append(chi_projective(weights, base * fr * fc))
        out.append(row)
    return out


def build(spec, D, reg, power, eq_tau, p2tw):
    """Decreed z^0 block (classical matrix), opposite-envelope pairing
    blocks at d >= 1."""
    op = SeriesOperator(reg, spec.n, D)
    ins = []
    if power:
        ins.append(InsertionSpec(reg.mono(1, {"x": power}), "p1"))
    if eq_tau is not None:
        ins.append(InsertionSpec(eq_tau, "equator"))
    op.coeff[0] = classical_matrix(spec, ins, reg)
    for d in range(1, D + 1):
        op.coeff[d] = block(spec, d, reg, power, eq_tau, p2tw)
    return op


def run(n, k, D, p2tw, side):
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    t0 = time.time()
    P = {m: build(spec, D, reg, m, None, p2tw) for m in (0, 1, 2)}
    Peq = build(spec, D, reg, 0, reg.var("x"), p2tw)
    inv0 = series_inverse(P[0])
    if side == "right":
        Op = {m: P[m] @ inv0 for m in (1, 2)}
        Aeq = Peq @ inv0
    else:
        Op = {m: inv0 @ P[m] for m in (1, 2)}
        Aeq = inv0 @ Peq
    n_ = spec.n
    cls1 = classical_matrix(spec, [InsertionSpec(reg.var("x"), "p1")], reg)
    c_ok = all((Op[1].coeff[0][i][j] == cls1[i][j])
               for i in range(n_) for j in range(n_))
    print("n=%d k=%d D=%d twist=%s side=%s  built %.1fs  CLS(z0==R^-1 diag R): %s"
          % (n, k, D, p2tw, side, time.time() - t0, c_ok))

    lhs = Op[2]
    rhs = series_zshift(Op[1], 1) @ Op[1]
    per = [(m, eq_series(project_series(lhs, m), project_series(rhs, m),
                         n_, D)) for m in divisors(k)]
    print("   F2 : %s  (%.1fs)" % (per, time.time() - t0))

    pc = Op[1]
    for j in range(1, k):
        pc = series_zshift(Op[1], j) @ pc
    sc = equator_unit_scalar(spec, reg)
    scd = const_diag(reg, n_, D,
                     [FactoredRatFunc.from_poly(reg.mono(sc, {}))] * n_)
    pc = scd @ pc
    per = [(m, eq_series(project_series(Aeq, m), project_series(pc, m),
                         n_, D)) for m in divisors(k)]
    print("   THM: %s  (%.1fs)" % (per, time.time() - t0))


if __name__ == "__main__":
    for side in ("right", "left"):
        for tw in ("qd", "none"):
            run(2, 2, 2, tw, side)
