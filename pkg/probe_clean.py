"""Blocks with a sector-clean output-side envelope.

Degree-d block entry (r, c) = sum over target fixed points g of
  f_r(q^d a_g) * [fixed-sector chi over the g-sector weights of the class
                  with f_c at the base point and the equator orbit, the
                  other sectors folded in as denominator directions].

The output-side argument is the image point's value with the degree
linearization, constant across the sector; only the base-point and
equator insertions see the tautological class.
"""
import itertools

from qadams.symbolic import (FactoredRatFunc, SeriesOperator,
                             series_inverse, series_zshift, lp_substitute)
from qadams.quasimap import (TargetSpec, InsertionSpec, make_registry,
                             stable_envelope, classical_matrix,
                             dual_weight_multiset, ohat_twist, ovir_weight,
                             equator_class, _insertion_parts,
                             _chi_refined_frf, project_series)


def clean_block(spec, d, insertions, reg, p2_twist):
    n, k = spec.n, spec.k
    ring = reg.ring
    weights = dual_weight_multiset(spec, d, reg)
    by_sector = {}
    for idx, w in enumerate(weights):
        g = idx // (d + 1) + 1
        by_sector.setdefault(g, []).append(w)
    p1, eq, p2 = _insertion_parts(insertions, reg)
    ov = ovir_weight(spec, d, reg) * ohat_twist(spec, d, reg)
    out = [[FactoredRatFunc.zero(reg) for _ in range(n)] for _ in range(n)]
    twist = ring.q_power(d % k) if p2_twist == "qd" else ring.elem([1])
    for r in range(1, n + 1):
        for c in range(1, n + 1):
            tot = FactoredRatFunc.zero(reg)
            for g in range(1, n + 1):
                ag = reg.mono(1, {"a_%d" % g: 1})
                agt = reg.mono(twist, {"a_%d" % g: 1})
                outval = lp_substitute(stable_envelope(r, spec, reg),
                                       "x", agt)
                outval = outval * lp_substitute(p2, "L", agt)
                cls = ov * lp_substitute(
                    stable_envelope(c, spec, reg), "x", reg.var("L"))
                cls = cls * lp_substitute(p1, "L", reg.var("L"))
                for j in range(k):
                    cls = cls * lp_substitute(
                        eq, "L", reg.mono(ring.q_power(j % k), {}) *
                        reg.var("L"))
                own = by_sector[g]
                others = [w for gg, ws in by_sector.items() if gg != g
                          for w in ws]
                term = _chi_refined_frf(own, cls * outval, others, reg)
                tot = tot + term
            out[r - 1][c - 1] = tot
    return out


def build(spec, insertions, D, reg, p2_twist):
    op = SeriesOperator(reg, spec.n, D)
    op.coeff[0] = classical_matrix(spec, insertions, reg)
    for d in range(1, D + 1):
        op.coeff[d] = clean_block(spec, d, insertions, reg, p2_twist)
    return op


def eq_series(a, b, n, D, kk):
    outs = []
    for m in [kk]:
        pa = project_series(a, m)
        pb = project_series(b, m)
        res = [all(pa.coeff[d][i][j] == pb.coeff[d][i][j]
                   for i in range(n) for j in range(n))
               for d in range(D + 1)]
        outs.append((m, res))
    return outs


def main():
    n, k, D = 2, 2, 3
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    for p2tw in ("qd", "none"):
        B = {}
        for m in range(0, 4):
            ins = [] if m == 0 else [InsertionSpec(reg.mono(1, {"x": m}),
                                                   "p1")]
            B[m] = build(spec, ins, D, reg, p2tw)
        inv0 = series_inverse(B[0])
        Op = {m: B[m] @ inv0 for m in (1, 2, 3)}
        f2 = eq_series(Op[2], series_zshift(Op[1], 1) @ Op[1], n, D, k)
        f3 = eq_series(Op[3],
                       series_zshift(Op[1], 2) @ series_zshift(Op[1], 1)
                       @ Op[1], n, D, k)
        print("p2=%s F2: %s F3: %s" % (p2tw, f2, f3))


if __name__ == "__main__":
    main()
