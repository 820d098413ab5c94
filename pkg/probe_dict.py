"""Arbitrate the operator dictionary, in the fixed-point interpolant frame.

Basis class b_alpha := prod_{beta != alpha} (a_beta - x); restriction to
fixed point gamma vanishes unless gamma = alpha, so the degree-0 Gram is
diagonal with a known factored value whose reciprocal can be assembled
directly.  The battery identities are conjugation-invariant, so testing in
this frame is equivalent to the normalized idempotent frame.

Objects:
  g    = Gram series  g[d]_{ab} = chi(QM_d, Ohat * b_b(L) * b_a(L))
  e    = same with x^k inserted (position-free)
  CL_m = diag(a_alpha^m)
Battery:
  I2: adams == T_k in every CRT component, adams in {invg@e, e@invg},
      T_k = J@CL_k@inv(J), J in {g, invg}
  I3: zshift(adams,1)@T_1 == T_1@adams in the primitive component
"""
import sys
import time

sys.path.insert(0, "/root/pkg/src")

from qadams.quasimap import (TargetSpec, make_registry, ohat_twist,
                             ovir_weight, dual_weight_multiset,
                             project_series)
from qadams.symbolic import (SeriesOperator, FactoredRatFunc, LaurentPoly,
                             chi_projective, lp_substitute, series_inverse,
                             series_zshift)


def interpolant(alpha, spec, reg):
    out = reg.one()
    for beta in range(1, spec.n + 1):
        if beta != alpha:
            out = out * (reg.var("a_%d" % beta) - reg.var("x"))
    return out


def sandwich_matrix(spec, d, reg, power=0, p2_twist="none"):
    """chi of Ohat * b_col(L) * L^power * b_row(L or q^d L)."""
    n = spec.n
    ring = reg.ring
    weights = dual_weight_multiset(spec, d, reg)
    base = ohat_twist(spec, d, reg) * ovir_weight(spec, d, reg)
    if power:
        base = base * reg.mono(ring.one(), {"L": power})
    if p2_twist == "qd":
        rep2 = reg.mono(ring.q_power(d % spec.k), {"L": 1})
    else:
        rep2 = reg.var("L")
    out = []
    for r in range(1, n + 1):
        br = lp_substitute(interpolant(r, spec, reg), "x", rep2)
        row = []
        for c in range(1, n + 1):
            bc = lp_substitute(interpolant(c, spec, reg), "x", reg.var("L"))
            row.append(chi_projective(weights, base * bc * br))
        out.append(row)
    return out


def diag_value_inverse(alpha, spec, reg):
    """1 / (Ohat_0(a_alpha) * b_alpha(a_alpha)^2 / e_alpha) as a factored
    rational function, assembled from its known factorization."""
    n = spec.n
    # Ohat_0 = h^(1-n) (1 - h^2)  ->  inverse h^(n-1) / (1 - h^2)
    out = FactoredRatFunc(reg, reg.mono(1, {"h": n - 1}), reg.one(), {})
    eh = [0] * len(reg.names)
    eh[reg.index("h")] = 2
    out = out.with_denominator_factor(tuple(eh), 1)
    # b_alpha(a_alpha)^2 = prod_{b != alpha} (a_b - a_alpha)^2,
    # each factor a_b (1 - a_alpha / a_b)
    for b in range(1, n + 1):
        if b == alpha:
            continue
        e = [0] * len(reg.names)
        e[reg.index("a_%d" % alpha)] = 1
        e[reg.index("a_%d" % b)] = -1
        out = out.with_denominator_factor(tuple(e), 1, 2)
        unit = {("a_%d" % b): -2}
        out = out * FactoredRatFunc(reg, reg.mono(1, unit), reg.one(), {})
    # e_alpha = prod_{b != alpha} (1 - a_b / a_alpha)  (numerator factor)
    num = reg.one()
    for b in range(1, n + 1):
        if b == alpha:
            continue
        num = num * (reg.one() - reg.mono(1, {"a_%d" % b: 1,
                                              "a_%d" % alpha: -1}))
    return out * FactoredRatFunc.from_poly(num)


def const_diag(reg, n, order, entries):
    op = SeriesOperator(reg, n, order)
    for i in range(n):
        op.coeff[0][i][i] = entries[i]
    return op


def divisors(k):
    return [m for m in range(1, k + 1) if k % m == 0]


def eq_series(a, b, n, D):
    return [all(a.coeff[d][i][j] == b.coeff[d][i][j]
                for i in range(n) for j in range(n)) for d in range(D + 1)]


def run(n, k, D, p2_twist="none"):
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    ring = reg.ring
    t0 = time.time()
    gb = [sandwich_matrix(spec, d, reg, 0, p2_twist) for d in range(D + 1)]
    eb = [sandwich_matrix(spec, d, reg, k, p2_twist) for d in range(D + 1)]
    g = SeriesOperator(reg, n, D, gb)
    e = SeriesOperator(reg, n, D, eb)
    dinv = [diag_value_inverse(a, spec, reg) for a in range(1, n + 1)]
    Dinv = const_diag(reg, n, D, dinv)
    gp = Dinv @ g
    id_ok = all(gp.coeff[0][i][j] == (FactoredRatFunc.one(reg) if i == j
                                      else FactoredRatFunc.zero(reg))
                for i in range(n) for j in range(n))
    print("n=%d k=%d D=%d twist=%s  Dinv@g[0]==Id: %s  (%.1fs)"
          % (n, k, D, p2_twist, id_ok, time.time() - t0))
    invg = series_inverse(gp) @ Dinv
    CLk = const_diag(reg, n, D, [
        FactoredRatFunc.from_poly(reg.mono(ring.one(), {"a_%d" % a: k}))
        for a in range(1, n + 1)])
    CL1 = const_diag(reg, n, D, [
        FactoredRatFunc.from_poly(reg.var("a_%d" % a))
        for a in range(1, n + 1)])

    for name, lhs, rhs in [("e == g@CLk", e, g @ CLk),
                           ("e == CLk@g", e, CLk @ g)]:
        res = []
        for m in divisors(k):
            res.append((m, eq_series(project_series(lhs, m),
                                     project_series(rhs, m), n, D)))
        print("   %-12s %s" % (name, res))

    A_L = invg @ e
    A_R = e @ invg
    for jn, (J, Jinv) in {"J=g": (g, invg), "J=invg": (invg, g)}.items():
        Tk = J @ CLk @ Jinv
        T1 = series_zshift(J, 1) @ CL1 @ Jinv
        for an, A in {"A=invg@e": A_L, "A=e@invg": A_R}.items():
            verdict = []
            for m in divisors(k):
                r = eq_series(project_series(A, m), project_series(Tk, m),
                              n, D)
                verdict.append((m, all(r)))
            lhs3 = series_zshift(A, 1) @ T1
            rhs3 = T1 @ A
            r3 = eq_series(project_series(lhs3, k), project_series(rhs3, k),
                           n, D)
            print("   %-7s %-9s I2=%s I3(prim)=%s (%.1fs)"
                  % (jn, an, verdict, r3, time.time() - t0))


if __name__ == "__main__":
    run(2, 2, 2)
