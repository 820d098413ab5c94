"""Compare two pushforward functionals on degree-d sandwich classes:

  GLOBAL: chi_projective over the full dual weight multiset (engine route)
  DISPLAY: sum over residue strata of [chi over the stratum's own weights]
           times [inverse Euler factor built from ABSOLUTE isotypic weights,
           i.e. (1 - a_i q^(l-m))^(-n_m) with no tautological twist]

Both projected to the primitive component.  If they differ, the display
route is a genuinely different functional and the d>=1 blocks built on
GLOBAL are not the structure constants computed by the strata algorithm.
"""
from fractions import Fraction

from qadams.cyclotomic import CycRing
from qadams.symbolic import FactoredRatFunc, chi_projective
from qadams.quasimap import (TargetSpec, InsertionSpec, make_registry,
                             assemble_class, dual_weight_multiset, strata,
                             component_registry, project_frf)


def display_sum(spec, d, cls, reg):
    n, k = spec.n, spec.k
    ring = reg.ring
    weights = dual_weight_multiset(spec, d, reg)
    by_residue = {}
    for idx, w in enumerate(weights):
        j = idx % (d + 1)
        by_residue.setdefault(j % k, []).append(w)
    total = FactoredRatFunc.zero(reg)
    for s in strata(spec, d):
        if s.mult <= 0:
            continue
        own = by_residue.get(s.ell, [])
        term = chi_projective(own, cls)
        for t in strata(spec, d):
            if t.ell == s.ell or t.mult <= 0:
                continue
            for i in range(1, n + 1):
                e = [0] * len(reg.names)
                e[reg.index("a_%d" % i)] = 1
                term = term.with_denominator_factor(
                    tuple(e), ring.q_power((s.ell - t.ell) % k), t.mult)
        total = total + term
    return total


def main():
    for (n, k) in [(2, 2), (2, 3)]:
        spec = TargetSpec(n=n, k=k)
        reg = make_registry(spec)
        prim = component_registry(reg, k)
        ins = [InsertionSpec(reg.var("x"), "p1")]
        for d in (1, 2):
            for (r, c) in [(1, 1), (1, 2), (2, 1), (2, 2)]:
                cls = assemble_class(spec, d, ins, r, c, reg, p2_twist="qd")
                g = project_frf(chi_projective(
                    dual_weight_multiset(spec, d, reg), cls), prim)
                s = project_frf(display_sum(spec, d, cls, reg), prim)
                tag = "SAME" if g == s else "DIFF"
                print("n=%d k=%d d=%d entry(%d,%d): %s" % (n, k, d, r, c, tag))
                if tag == "DIFF":
                    print("   global :", g)
                    print("   display:", s)


if __name__ == "__main__":
    main()
