"""Oracle the degree blocks against the closed hypergeometric vertex.

Engine side: Vraw_alpha[d] = chi(QM_d, Ohat * b_alpha(L at output)).
Closed form (valid in the primitive component for d < k):

  H_alpha[d] = prod_i (h^2 a_i/a_alpha ; q)_d / (q a_i/a_alpha ; q)_d

A global z-dressing mismatch keeps Vraw[d] / (Vraw[0] H[d]) independent of
alpha; a genuine block defect makes it alpha-dependent.  All tests are
cross-multiplied and projected to the primitive CRT component.
"""
import sys
import time

sys.path.insert(0, "/root/pkg/src")

from qadams.quasimap import (TargetSpec, make_registry, ohat_twist,
                             ovir_weight, dual_weight_multiset, project_frf,
                             component_registry)
from qadams.symbolic import (FactoredRatFunc, chi_projective, lp_substitute)
from probe_dict import interpolant


def vertex_entry(spec, d, reg, alpha, p2tw):
    ring = reg.ring
    weights = dual_weight_multiset(spec, d, reg)
    base = ohat_twist(spec, d, reg) * ovir_weight(spec, d, reg)
    rep = (reg.mono(ring.q_power(d % spec.k), {"L": 1}) if p2tw == "qd"
           else reg.var("L"))
    cls = base * lp_substitute(interpolant(alpha, spec, reg), "x", rep)
    return chi_projective(weights, cls)


def hyper_entry(spec, d, reg, alpha):
    out = FactoredRatFunc.one(reg)
    num = reg.one()
    for i in range(1, spec.n + 1):
        for j in range(d):
            num = num * (reg.one() - reg.mono(
                reg.ring.q_power(j % spec.k),
                {"h": 2, "a_%d" % i: 1, "a_%d" % alpha: -1}))
    out = out * FactoredRatFunc.from_poly(num)
    zero_e = tuple([0] * len(reg.names))
    for i in range(1, spec.n + 1):
        for j in range(1, d + 1):
            if i == alpha:
                out = out.with_denominator_factor(
                    zero_e, reg.ring.q_power(j % spec.k))
            else:
                e = [0] * len(reg.names)
                e[reg.index("a_%d" % i)] = 1
                e[reg.index("a_%d" % alpha)] = -1
                out = out.with_denominator_factor(
                    tuple(e), reg.ring.q_power(j % spec.k))
    return out


def prim_eq(target, x, y):
    return project_frf(x, target) == project_frf(y, target)


def run(n, k, D, p2tw):
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    V, H = {}, {}
    for alpha in range(1, n + 1):
        for d in range(D + 1):
            V[(alpha, d)] = vertex_entry(spec, d, reg, alpha, p2tw)
            H[(alpha, d)] = hyper_entry(spec, d, reg, alpha)
    prim = component_registry(reg, k)
    print("n=%d k=%d p2=%s" % (n, k, p2tw))
    for d in range(1, D + 1):
        ok = True
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                lhs = V[(a, d)] * V[(b, 0)] * H[(b, d)]
                rhs = V[(b, d)] * V[(a, 0)] * H[(a, d)]
                ok = ok and prim_eq(prim, lhs, rhs)
        print("  d=%d ratio alpha-independent: %s" % (d, ok))
        if not ok:
            continue
        found = []
        for name, mono in [
                ("1", {}), ("h^d", {"h": d}), ("h^-d", {"h": -d}),
                ("h^2d", {"h": 2 * d}), ("h^-2d", {"h": -2 * d}),
                ("h^nd", {"h": n * d}), ("h^-nd", {"h": -n * d})]:
            for sgn in (1, -1):
                for qq in range(k):
                    s = FactoredRatFunc.from_poly(
                        reg.mono(sgn * reg.ring.q_power(qq), dict(mono)))
                    if all(prim_eq(prim, V[(a, d)],
                                   s * H[(a, d)] * V[(a, 0)])
                           for a in range(1, n + 1)):
                        found.append("%s%s*q^%d"
                                     % ("-" if sgn < 0 else "", name, qq))
        print("    d=%d dressings: %s" % (d, found or "none in set"))


if __name__ == "__main__":
    t0 = time.time()
    run(2, 3, 2, "none")
    run(2, 3, 2, "qd")
    print("elapsed %.0fs" % (time.time() - t0))
