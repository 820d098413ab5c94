"""Can a z-series conjugation W(z) Op(z) W(z)^-1 repair the z^1 cocycle?

Defect(m1,m2) := T_{m1+m2} - C_{m2} T_{m1} - q^{m1} T_{m2} C_{m1}
Conjugation contributes (1 - q^{m1}) a_b^{m1} (a_a^{m2} - a_b^{m2}) W[ab]
on entry (a, b) (fixed frame).  Solve W from (1,1), verify on all pairs,
and check the diagonal defect vanishes.
"""
from fractions import Fraction
import itertools

from probe_grid import block, classical, mul, sub, N, K, Q, A


def tofixed(M, R, Rinv):
    return mul(mul(R, M), Rinv)


def main():
    # build R (envelope value matrix) to move env-frame classicals to the
    # fixed frame where D_m is diagonal
    from probe_grid import envelope
    R = [[envelope(c + 1, A[g]) for c in range(N)] for g in range(N)]
    Mx = [R[i][:] + [Fraction(1) if j == i else Fraction(0)
                     for j in range(N)] for i in range(N)]
    for col in range(N):
        piv = next(r for r in range(col, N) if Mx[r][col] != 0)
        Mx[col], Mx[piv] = Mx[piv], Mx[col]
        pv = Mx[col][col]
        Mx[col] = [x / pv for x in Mx[col]]
        for r in range(N):
            if r != col and Mx[r][col] != 0:
                f = Mx[r][col]
                Mx[r] = [x - f * y for x, y in zip(Mx[r], Mx[col])]
    Rinv = [row[N:] for row in Mx]

    for p1mode, p2mode, meas in itertools.product(
            ("L", "clean", "qclean"), ("L", "qdL", "clean", "qclean"),
            ("honest", "display")):
        K1 = {m: block(1, m, p1mode, p2mode, meas) for m in range(5)}
        C = {m: classical(m) for m in range(5)}
        T = {m: sub(K1[m], mul(C[m], K1[0])) for m in range(5)}
        # move to fixed frame
        Tf = {m: tofixed(T[m], R, Rinv) for m in T}
        D = {m: [[A[i]**m if i == j else Fraction(0) for j in range(N)]
                 for i in range(N)] for m in range(5)}
        def defect(m1, m2):
            rhs = [[mul(D[m2], Tf[m1])[i][j]
                    + (Q**m1) * mul(Tf[m2], D[m1])[i][j]
                    for j in range(N)] for i in range(N)]
            return sub(Tf[m1 + m2], rhs)
        d11 = defect(1, 1)
        diag_ok = all(d11[i][i] == 0 for i in range(N))
        W = [[Fraction(0)] * N for _ in range(N)]
        solvable = diag_ok
        if diag_ok:
            for a in range(N):
                for b in range(N):
                    if a == b:
                        continue
                    den = (1 - Q) * A[b] * (A[a] - A[b])
                    W[a][b] = d11[a][b] / den
            ok = True
            for m1 in (1, 2, 3):
                for m2 in (1, 2, 3):
                    if m1 + m2 > 4:
                        continue
                    dd = defect(m1, m2)
                    for a in range(N):
                        for b in range(N):
                            pred = ((1 - Q**m1) * A[b]**m1
                                    * (A[a]**m2 - A[b]**m2) * W[a][b])
                            if dd[a][b] != pred:
                                ok = False
            solvable = ok
        print("p1=%-7s p2=%-7s meas=%-7s conj-solvable: %s"
              % (p1mode, p2mode, meas,
                 "YES" if solvable else ("no-diag" if not diag_ok
                                         else "inconsistent")))


if __name__ == "__main__":
    main()
