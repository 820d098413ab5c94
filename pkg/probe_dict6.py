"""Sixth battery: double-sided raising.

OP[m] := zshift(inv0, sl) @ S[m] @ zshift(inv0, sr) @ D
with D the degree-0 diagonal of S[0] (so the classical block is right),
sl, sr drawn from {0, 1, m mod k}, connection twist t in {0, 1}.
Checks: V1 flatness, V2 iterated-product theorem, per component.
"""
import sys
import time

sys.path.insert(0, "/root/pkg/src")

from qadams.quasimap import (TargetSpec, make_registry, project_series)
from qadams.symbolic import (SeriesOperator, series_inverse, series_zshift)
from probe_dict import (diag_value_inverse, const_diag, divisors, eq_series)
from probe_dict5 import sandwich


def build_all(n, k, D, p2tw, form):
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    S = {m: SeriesOperator(reg, n, D,
                           [sandwich(spec, d, reg, m, p2tw, form)
                            for d in range(D + 1)])
         for m in (0, 1, 2, k)}
    dinv = [diag_value_inverse(a, spec, reg) for a in range(1, n + 1)]
    Dinv = const_diag(reg, n, D, dinv)
    inv0 = series_inverse(Dinv @ S[0]) @ Dinv
    # D itself: invert the inverse entries (all unit-reciprocal friendly)
    dvals = [dinv[i].reciprocal() for i in range(n)]
    Dop = const_diag(reg, n, D, dvals)
    return spec, reg, S, inv0, Dop


def mk_op(S, inv0, Dop, m, k, sl, sr):
    left = series_zshift(inv0, sl % k) if sl % k else inv0
    right = series_zshift(inv0, sr % k) if sr % k else inv0
    return left @ S[m] @ right @ Dop


def run(n, k, D, p2tw, form):
    spec, reg, S, inv0, Dop = build_all(n, k, D, p2tw, form)
    results = []
    for slmode in ("0", "1", "m"):
        for srmode in ("0", "1", "m"):
            def sh(mode, m):
                return 0 if mode == "0" else (1 if mode == "1" else m)
            OP = {m: mk_op(S, inv0, Dop, m, k,
                           sh(slmode, m), sh(srmode, m))
                  for m in (1, 2, k)}
            for t in (0, 1):
                M1 = series_zshift(OP[1], t) if t else OP[1]
                M2 = (series_zshift(OP[2], 2 * t % k)
                      if (2 * t % k) else OP[2])
                Mk = OP[k]
                curv = M1
                for j in range(1, k):
                    curv = series_zshift(M1, j) @ curv
                lhs = series_zshift(M1, 1) @ M1
                flat, thm = [], []
                for m in divisors(k):
                    flat.append(eq_series(project_series(M2, m),
                                          project_series(lhs, m), n, D))
                    thm.append(eq_series(project_series(curv, m),
                                         project_series(Mk, m), n, D))
                fd = min(sum(1 for v in f if v) for f in flat)
                td = min(sum(1 for v in t_ if v) for t_ in thm)
                tag = "sl=%s sr=%s t=%d" % (slmode, srmode, t)
                results.append((fd, td, tag, flat, thm))
    results.sort(reverse=True)
    for fd, td, tag, flat, thm in results[:6]:
        print("  %s flat=%s thm=%s" % (tag, flat, thm))


if __name__ == "__main__":
    t0 = time.time()
    print("p2=qd form=inv n=2 k=2 D=2")
    run(2, 2, 2, "qd", "inv")
    print("p2=none form=inv n=2 k=2 D=2")
    run(2, 2, 2, "none", "inv")
    print("elapsed %.0fs" % (time.time() - t0))
