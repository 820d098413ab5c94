"""Flatness battery with the q-sign of the tautological weights flipped:
weights a_i q^(+j) (sections carry q^(-j)), p2 linearization q^(+d),
all other monomials verbatim.  Global honest pushforward, envelope-frame
classical z0 block, right normalization.
"""
import itertools

from qadams.symbolic import (FactoredRatFunc, chi_projective, SeriesOperator,
                             series_inverse, series_zshift)
import qadams.quasimap as Q
from qadams.quasimap import (TargetSpec, InsertionSpec, make_registry,
                             assemble_class, strata, classical_matrix,
                             project_series)


def weights_signed(spec, d, reg, sign):
    out = []
    ring = reg.ring
    for i in range(1, spec.n + 1):
        for j in range(0, d + 1):
            out.append(reg.mono(ring.q_power((sign * j) % spec.k),
                                {"a_%d" % i: 1}))
    return out


def bare_block(spec, d, insertions, reg, p2_twist, sign):
    n = spec.n
    ws = weights_signed(spec, d, reg, sign)
    out = [[None] * n for _ in range(n)]
    for r in range(1, n + 1):
        for c in range(1, n + 1):
            cls = assemble_class(spec, d, insertions, r, c, reg,
                                 p2_twist=p2_twist)
            out[r - 1][c - 1] = chi_projective(ws, cls)
    return out


def build(spec, insertions, D, reg, p2_twist, sign):
    op = SeriesOperator(reg, spec.n, D)
    op.coeff[0] = classical_matrix(spec, insertions, reg)
    for d in range(1, D + 1):
        op.coeff[d] = bare_block(spec, d, insertions, reg, p2_twist, sign)
    return op


def eq_series(a, b, n, D, kk):
    outs = []
    for m in [mm for mm in range(1, kk + 1) if kk % mm == 0]:
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
    for sign, p2tw in itertools.product((+1, -1), ("qd", "none")):
        B = {}
        for m in range(0, 4):
            ins = [] if m == 0 else [InsertionSpec(reg.mono(1, {"x": m}),
                                                   "p1")]
            B[m] = build(spec, ins, D, reg, p2tw, sign)
        inv0 = series_inverse(B[0])
        Op = {m: B[m] @ inv0 for m in (1, 2, 3)}
        f2 = eq_series(Op[2], series_zshift(Op[1], 1) @ Op[1], n, D, k)
        f3 = eq_series(Op[3],
                       series_zshift(Op[1], 2) @ series_zshift(Op[1], 1)
                       @ Op[1], n, D, k)
        print("sign=%+d p2=%s F2: %s F3: %s" % (sign, p2tw, f2, f3))


if __name__ == "__main__":
    main()
