"""Third battery: raised sandwiches with honest iterated-product curvature.

Frame: fixed-point interpolants b_alpha (degree-0 Gram diagonal, cheap
inversion).  Dictionary candidates:

  OP[m] := S[x^m] @ inv(S[0])   (right raise)   or
           inv(S[0]) @ S[x^m]   (left raise)
  M     := OP[1], optionally block-twisted by q^d (zshift by 1)
  curv  := M(zq^{k-1}) ... M(zq) M(z)
  adams := OP[k]  (equator insertion of x = q^sigma x^k is a scalar away)

Battery per CRT component:
  V1 flatness:  OP2' == zshift(M,1) @ M   where OP2' = OP[2], twisted like M
  V2 theorem:   curv == OP[k]   /   curv == q^sigma OP[k]
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
from probe_dict import (interpolant, sandwich_matrix, diag_value_inverse,
                        const_diag, divisors, eq_series)


def build(spec, reg, D, power, p2tw):
    blocks = [sandwich_matrix(spec, d, reg, power, p2tw)
              for d in range(D + 1)]
    return SeriesOperator(reg, spec.n, D, blocks)


def scal(reg, op, frf):
    out = op.copy()
    for d in range(op.order + 1):
        for i in range(op.size):
            for j in range(op.size):
                out.coeff[d][i][j] = frf * out.coeff[d][i][j]
    return out


def run(n, k, D, p2tw, raise_side, block_twist):
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    ring = reg.ring
    t0 = time.time()
    S = {m: build(spec, reg, D, m, p2tw) for m in (0, 1, 2, k)}
    dinv = [diag_value_inverse(a, spec, reg) for a in range(1, n + 1)]
    Dinv = const_diag(reg, n, D, dinv)
    gp = Dinv @ S[0]
    inv0 = series_inverse(gp) @ Dinv
    if raise_side == "R":
        OP = {m: S[m] @ inv0 for m in (1, 2, k)}
    else:
        OP = {m: inv0 @ S[m] for m in (1, 2, k)}
    M1 = series_zshift(OP[1], 1) if block_twist else OP[1]
    M2 = series_zshift(OP[2], 2) if block_twist else OP[2]
    Mk = series_zshift(OP[k], k) if block_twist else OP[k]
    curv = M1
    for j in range(1, k):
        curv = series_zshift(M1, j) @ curv
    tag = "n=%d k=%d D=%d p2=%-4s raise=%s tw=%d" % (
        n, k, D, p2tw, raise_side, block_twist)
    flat = []
    lhs = series_zshift(M1, 1) @ M1
    for m in divisors(k):
        flat.append((m, eq_series(project_series(M2, m),
                                  project_series(lhs, m), n, D)))
    sig = (k * (k - 1) // 2) % k
    qsig = FactoredRatFunc.from_poly(
        LaurentPoly(reg, {(0,) * len(reg.names): ring.q_power(sig)}))
    thm_plain, thm_sig = [], []
    Mk_sig = scal(reg, Mk, qsig)
    for m in divisors(k):
        thm_plain.append((m, eq_series(project_series(curv, m),
                                       project_series(Mk, m), n, D)))
        thm_sig.append((m, eq_series(project_series(curv, m),
                                     project_series(Mk_sig, m), n, D)))
    print("%s  V1flat=%s" % (tag, flat))
    print("%s  V2thm =%s  V2thm*q^s=%s  (%.1fs)"
          % (" " * len(tag), thm_plain, thm_sig, time.time() - t0))


if __name__ == "__main__":
    for p2tw in ("none", "qd"):
        for rs in ("R", "L"):
            for bt in (0, 1):
                run(2, 2, 2, p2tw, rs, bt)
