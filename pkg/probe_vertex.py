"""Probe: does B_0(z) . CL_k equal B[x^k at p1](z) degree-by-degree,
in every CRT component of Z[q]/(q^k-1)?

B_0   = trivial-insertion vertex series (p2 untwisted)
CL_k  = classical multiplication by the k-th power of the tautological
        class (degree-zero block of the x^k p1-insertion)
B[x^k]= vertex series with x^k inserted at p1
"""
import sys
import time

sys.path.insert(0, "/root/pkg/src")

from qadams.quasimap import (TargetSpec, InsertionSpec, make_registry,
                             bare_series, classical_matrix, project_series)
from qadams.symbolic import SeriesOperator


def divisors(k):
    return [m for m in range(1, k + 1) if k % m == 0]


def run(n, k, D, p2_twist="none"):
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    xk = reg.mono(reg.ring.one(), {"x": k})
    ins = (InsertionSpec(xk, "p1"),)
    t0 = time.time()
    B0 = bare_series(spec, (), D, reg, p2_twist=p2_twist)
    Bk = bare_series(spec, ins, D, reg, p2_twist=p2_twist)
    CL = SeriesOperator(reg, n, D)
    CL.coeff[0] = classical_matrix(spec, ins, reg)
    LHS = B0 @ CL
    built = time.time() - t0
    verdicts = []
    for m in divisors(k):
        lhs_m = project_series(LHS, m)
        rhs_m = project_series(Bk, m)
        ok_all = True
        per_deg = []
        for d in range(D + 1):
            ok = all(lhs_m.coeff[d][i][j] == rhs_m.coeff[d][i][j]
                     for i in range(n) for j in range(n))
            per_deg.append(ok)
            ok_all = ok_all and ok
        verdicts.append((m, ok_all, per_deg))
    print("n=%d k=%d D=%d twist=%s  (build %.1fs)" % (n, k, D, p2_twist, built))
    for m, ok, per in verdicts:
        print("   component m=%d: %s  per-degree %s"
              % (m, "PASS" if ok else "FAIL", per))
    return verdicts


if __name__ == "__main__":
    run(2, 2, 2)
    run(2, 2, 3)
    run(2, 3, 2)
