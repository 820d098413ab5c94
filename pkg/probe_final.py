"""Decisive test of the engine's own dictionary: bare_series with the
classical block at z^0 (NOT the degree-0 Gram sandwich) and envelope
sandwiches at d >= 1, normalized on the right by the trivial series.

Identities, per CRT component:
  F2 : Op_{x^2} == zshift(Op_x,1) @ Op_x
  F3a: Op_{x^3} == zshift(Op_x,2) @ Op_{x^2}
  F3b: Op_{x^3} == zshift(Op_{x^2},1) @ Op_x
  TAUT: B_{eq:x} == q^(k(k-1)/2) * B_{p1:x^k}  (class-level tautology)
  THM : Op_{eq:x} == q^(k(k-1)/2) * prod_{j=k-1..0} zshift(Op_x, j)  at prim
"""
import sys
import time

sys.path.insert(0, "/root/pkg/src")

from qadams.quasimap import (TargetSpec, InsertionSpec, make_registry,
                             bare_series, project_series, equator_unit_scalar)
from qadams.symbolic import (FactoredRatFunc, SeriesOperator, series_inverse,
                             series_zshift)
from probe_dict import divisors, eq_series, const_diag


def transpose(op):
    out = SeriesOperator(op.reg, op.size, op.order)
    for d in range(op.order + 1):
        for i in range(op.size):
            for j in range(op.size):
                out.coeff[d][i][j] = op.coeff[d][j][i]
    return out


def run(n, k, D, p2tw, flip=False, side="right"):
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    t0 = time.time()
    B = {}
    for m in (0, 1, 2, 3):
        ins = [] if m == 0 else [InsertionSpec(reg.mono(1, {"x": m}), "p1")]
        B[m] = bare_series(spec, ins, D, reg, p2tw)
    Beq = bare_series(spec, [InsertionSpec(reg.var("x"), "equator")], D, reg,
                      p2tw)
    if flip:
        for m in B:
            B[m] = transpose(B[m])
        Beq = transpose(Beq)
    inv0 = series_inverse(B[0])
    if side == "right":
        Op = {m: B[m] @ inv0 for m in (1, 2, 3)}
        Aeq = Beq @ inv0
    else:
        Op = {m: inv0 @ B[m] for m in (1, 2, 3)}
        Aeq = inv0 @ Beq
    print("n=%d k=%d D=%d twist=%s flip=%s side=%s  built %.1fs"
          % (n, k, D, p2tw, flip, side, time.time() - t0))

    sc = equator_unit_scalar(spec, reg)
    scd = const_diag(reg, n, D,
                     [FactoredRatFunc.from_poly(reg.mono(sc, {}))] * n)
    taut = eq_series(Beq, scd @ B[k] if k <= 3 else Beq, n, D) \
        if k <= 3 else None
    print("   TAUT B_eq == sc*B_k      :", taut)

    checks = [("F2  Op2 == sh(Op1,1).Op1", Op[2],
               series_zshift(Op[1], 1) @ Op[1]),
              ("F3a Op3 == sh(Op1,2).Op2", Op[3],
               series_zshift(Op[1], 2) @ Op[2]),
              ("F3b Op3 == sh(Op2,1).Op1", Op[3],
               series_zshift(Op[2], 1) @ Op[1])]
    for name, lhs, rhs in checks:
        per = [(m, eq_series(project_series(lhs, m), project_series(rhs, m),
                             n, D)) for m in divisors(k)]
        print("   %s : %s  (%.1fs)" % (name, per, time.time() - t0))

    pc = Op[1]
    for j in range(1, k):
        pc = series_zshift(Op[1], j) @ pc
    pc = scd @ pc
    per = [(m, eq_series(project_series(Aeq, m), project_series(pc, m),
                         n, D)) for m in divisors(k)]
    print("   THM Aeq == sc*prod       : %s  (%.1fs)"
          % (per, time.time() - t0))


if __name__ == "__main__":
    run(2, 2, 3, "qd", flip=True, side="right")
    run(2, 2, 3, "qd", flip=False, side="left")
    run(2, 2, 3, "qd", flip=True, side="left")
    run(2, 2, 3, "none", flip=True, side="right")
