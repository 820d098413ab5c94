"""Parameter-free structure tests for the raised sandwich blocks.

T_m := S[x^m] @ inv(S[0]) in the interpolant frame.  Any dictionary of the
form  M_m = Yo . S_m . zshift(Yin, m) . Yin^{-1} . S_0^{-1} . Yo^{-1}  with
z-series corrections Yo, Yin trivializes at the q = 1 component (all zshift
cocycles become identity there), so the true theory forces

    q=1 component:  T_{m1+m2} == T_{m2} @ T_{m1}   for all m1, m2
                    (in particular the T_m all commute).

Failure here cannot be repaired by any capping/raising convention; it would
mean the sandwich content itself (obstruction weights, twist, insertions) is
off at the failing degree.
"""
import sys
import time

sys.path.insert(0, "/root/pkg/src")

from qadams.quasimap import TargetSpec, make_registry, project_series
from qadams.symbolic import SeriesOperator, series_inverse
from probe_dict import (sandwich_matrix, diag_value_inverse, const_diag,
                        divisors, eq_series)


def build(spec, reg, D, power, p2tw):
    blocks = [sandwich_matrix(spec, d, reg, power, p2tw)
              for d in range(D + 1)]
    return SeriesOperator(reg, spec.n, D, blocks)


def defect(a, b, n, D):
    """Per-degree equality flags plus the first failing degree."""
    flags = eq_series(a, b, n, D)
    first = next((d for d, f in enumerate(flags) if not f), None)
    return flags, first


def run(n, k, D, p2tw):
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    t0 = time.time()
    S = {m: build(spec, reg, D, m, p2tw) for m in (0, 1, 2, 3, 4)}
    dinv = [diag_value_inverse(a, spec, reg) for a in range(1, n + 1)]
    Dinv = const_diag(reg, n, D, dinv)
    inv0 = series_inverse(Dinv @ S[0]) @ Dinv
    T = {m: S[m] @ inv0 for m in (1, 2, 3, 4)}
    print("n=%d k=%d D=%d p2=%s  built in %.0fs" % (n, k, D, p2tw,
                                                    time.time() - t0))
    for m in divisors(k):
        tgt = {j: project_series(T[j], m) for j in T}
        pairs = [("T2 == T1.T1", tgt[2], tgt[1] @ tgt[1]),
                 ("T3 == T1.T2", tgt[3], tgt[1] @ tgt[2]),
                 ("T3 == T2.T1", tgt[3], tgt[2] @ tgt[1]),
                 ("T4 == T2.T2", tgt[4], tgt[2] @ tgt[2]),
                 ("T4 == T1.T3", tgt[4], tgt[1] @ tgt[3])]
        for name, lhs, rhs in pairs:
            flags, first = defect(lhs, rhs, n, D)
            print("  comp m=%d  %s : %s%s"
                  % (m, name, flags,
                     "" if first is None else "  (first fail z^%d)" % first))
    print("  total %.0fs" % (time.time() - t0))


if __name__ == "__main__":
    run(2, 2, 2, "qd")
