"""Full flatness/theorem battery with display-route blocks.

Degree-d block (d >= 1) for entry (r, c):
  sum over residue strata of [chi over the stratum's own dual weights of
  the assembled class with envelope r at the shifted point and c at the
  base point] / [absolute-weight Euler: prod_{m != ell, i} one minus
  a_i q^(ell - m), multiplicity floor((d-m)/k)+1].

z0 block: either the envelope-frame multiplication matrix or the plain
fixed-value diagonal; both tried.
"""
from fractions import Fraction
import itertools

from qadams.cyclotomic import CycRing
from qadams.symbolic import (FactoredRatFunc, chi_projective, SeriesOperator,
                             series_inverse, series_zshift)
from qadams.quasimap import (TargetSpec, InsertionSpec, make_registry,
                             assemble_class, dual_weight_multiset, strata,
                             classical_matrix, component_registry,
                             project_series)


def display_block(spec, d, insertions, reg, p2_twist):
    n, k = spec.n, spec.k
    ring = reg.ring
    weights = dual_weight_multiset(spec, d, reg)
    by_residue = {}
    for idx, w in enumerate(weights):
        j = idx % (d + 1)
        by_residue.setdefault(j % k, []).append(w)
    out = [[FactoredRatFunc.zero(reg) for _ in range(n)] for _ in range(n)]
    strat = [s for s in strata(spec, d) if s.mult > 0]
    for r in range(1, n + 1):
        for c in range(1, n + 1):
            tot = FactoredRatFunc.zero(reg)
            for s in strat:
                own = by_residue.get(s.ell, [])
                cls = assemble_class(spec, d, insertions, r, c, reg,
                                     p2_twist=p2_twist)
                term = chi_projective(own, cls)
                for t in strat:
                    if t.ell == s.ell:
                        continue
                    for i in range(1, n + 1):
                        e = [0] * len(reg.names)
                        e[reg.index("a_%d" % i)] = 1
                        term = term.with_denominator_factor(
                            tuple(e), ring.q_power((s.ell - t.ell) % k),
                            t.mult)
                tot = tot + term
            out[r - 1][c - 1] = tot
    return out


def diag_classical(spec, insertions, reg):
    # plain fixed-value diagonal: product of insertion values at a_alpha
    from qadams.quasimap import _insertion_parts, lp_substitute
    n, k = spec.n, spec.k
    p1, eq, p2 = _insertion_parts(insertions, reg)
    out = [[FactoredRatFunc.zero(reg) for _ in range(n)] for _ in range(n)]
    for al in range(1, n + 1):
        aa = reg.mono(1, {"a_%d" % al: 1})
        val = reg.one()
        val = val * lp_substitute(p1, "L", aa)
        val = val * lp_substitute(p2, "L", aa)
        for j in range(k):
            val = val * lp_substitute(eq, "L",
                                      reg.mono(reg.ring.q_power(j % k), {})
                                      * aa)
        out[al - 1][al - 1] = FactoredRatFunc.from_poly(val)
    return out


def build_series(spec, insertions, D, reg, p2_twist, z0mode):
    n = spec.n
    op = SeriesOperator(reg, n, D)
    if z0mode == "env":
        c0 = classical_matrix(spec, insertions, reg)
    else:
        c0 = diag_classical(spec, insertions, reg)
    op.coeff[0] = c0
    for d in range(1, D + 1):
        op.coeff[d] = display_block(spec, d, insertions, reg, p2_twist)
    return op


def eq_series(a, b, n, D, reg, kk):
    outs = []
    for m in sorted(set(divs(kk))):
        pa = project_series(a, m)
        pb = project_series(b, m)
        res = []
        for d in range(D + 1):
            ok = all(pa.coeff[d][i][j] == pb.coeff[d][i][j]
                     for i in range(n) for j in range(n))
            res.append(ok)
        outs.append((m, res))
    return outs


def divs(k):
    return [m for m in range(1, k + 1) if k % m == 0]


def main():
    n, k, D = 2, 2, 3
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    x = reg.var("x")
    for z0mode, p2tw, side in itertools.product(
            ("env", "diag"), ("qd", "none"), ("right", "left")):
        B = {}
        for m in range(0, k + 2):
            ins = [] if m == 0 else [InsertionSpec(reg.mono(1, {"x": m}),
                                                   "p1")]
            B[m] = build_series(spec, ins, D, reg, p2tw, z0mode)
        try:
            inv0 = series_inverse(B[0])
        except ZeroDivisionError as e:
            print(z0mode, p2tw, side, "z0 not invertible:", e)
            continue
        def norm(m):
            return (B[m] @ inv0) if side == "right" else (inv0 @ B[m])
        Op = {m: norm(m) for m in (1, 2, 3)}
        f2 = eq_series(Op[2], series_zshift(Op[1], 1) @ Op[1], n, D, reg, k)
        f3 = eq_series(Op[3],
                       series_zshift(Op[1], 2) @ series_zshift(Op[1], 1)
                       @ Op[1], n, D, reg, k)
        print(z0mode, p2tw, side, "F2:", f2, "F3:", f3)


if __name__ == "__main__":
    main()
