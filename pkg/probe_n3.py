"""Conjugation-solvability of the z^1 cocycle at n=3, k=2, q=-1.

Blocks: clean input-side argument (a_g at the base point), output side
and measure varied.  Solve W from the (1,1) defect entrywise, then
verify all pairs (m1,m2) with m1+m2 <= 5.
"""
from fractions import Fraction
import itertools

Q = Fraction(-1)
A = [Fraction(2), Fraction(3), Fraction(5)]
H = Fraction(7)
N, K = 3, 2


def envelope(i, x):
    v = Fraction(1)
    for j in range(1, N + 1):
        if j < i:
            v *= (A[j - 1] - x)
        elif j > i:
            v *= (A[j - 1] - H * H * x)
    return v


def ovir_val(d):
    hb = H * H
    v = (1 - hb)
    for i in range(N):
        for j in range(1, d):
            v *= (1 - hb / A[i] * Q**j)
    for i in range(N):
        v *= A[i]**d
    v *= H**(N * (d - 1) + 1)
    v /= Q**(N * d * (d - 1) // 2)
    v /= Q**((N * d * d) % K)
    return v


def block(d, m, p2mode, meas):
    pts = [(g, j) for g in range(N) for j in range(d + 1)]
    w_of = {(g, j): A[g] * Q**(-j % K) for (g, j) in pts}
    ov = ovir_val(d)
    out = [[Fraction(0)] * N for _ in range(N)]
    for r in range(1, N + 1):
        for c in range(1, N + 1):
            tot = Fraction(0)
            for (g, j) in pts:
                w = w_of[(g, j)]
                x1 = A[g]
                if p2mode == "L":
                    x2 = w
                elif p2mode == "qdL":
                    x2 = Q**d * w
                elif p2mode == "clean":
                    x2 = A[g]
                else:
                    x2 = Q**d * A[g]
                val = ov * envelope(c, x1) * (x1**m) * envelope(r, x2)
                den = Fraction(1)
                for (g2, j2) in pts:
                    if (g2, j2) == (g, j):
                        continue
                    if meas == "honest":
                        den *= (1 - w_of[(g2, j2)] / w)
                    else:
                        den *= (1 - A[g2] * Q**(j - j2))
                tot += val / den
            out[r - 1][c - 1] = tot
    return out


def matinv(R):
    M = [R[i][:] + [Fraction(1) if j == i else Fraction(0)
                    for j in range(N)] for i in range(N)]
    for col in range(N):
        piv = next(r for r in range(col, N) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(N):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[N:] for row in M]


def mul(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(N)) for j in range(N)]
            for i in range(N)]


def sub(a, b):
    return [[a[i][j] - b[i][j] for j in range(N)] for i in range(N)]


def main():
    R = [[envelope(c + 1, A[g]) for c in range(N)] for g in range(N)]
    Rinv = matinv(R)
    D = {m: [[A[i]**m if i == j else Fraction(0) for j in range(N)]
             for i in range(N)] for m in range(6)}
    for p2mode, meas in itertools.product(("L", "qdL", "clean", "qclean"),
                                          ("honest", "display")):
        K1 = {m: block(1, m, p2mode, meas) for m in range(6)}
        C = {m: mul(mul(Rinv, D[m]), R) for m in range(6)}
        T = {m: sub(K1[m], mul(C[m], K1[0])) for m in range(6)}
        Tf = {m: mul(mul(R, T[m]), Rinv) for m in T}
        def defect(m1, m2):
            rhs = [[mul(D[m2], Tf[m1])[i][j]
                    + (Q**m1) * mul(Tf[m2], D[m1])[i][j]
                    for j in range(N)] for i in range(N)]
            return sub(Tf[m1 + m2], rhs)
        d11 = defect(1, 1)
        diag_ok = all(d11[i][i] == 0 for i in range(N))
        verdict = "no-diag"
        if diag_ok:
            W = [[Fraction(0)] * N for _ in range(N)]
            for a in range(N):
                for b in range(N):
                    if a != b:
                        W[a][b] = d11[a][b] / ((1 - Q) * A[b]
                                               * (A[a] - A[b]))
            ok = True
            for m1 in (1, 2, 3):
                for m2 in (1, 2, 3):
                    if m1 + m2 > 5:
                        continue
                    dd = defect(m1, m2)
                    for a in range(N):
                        for b in range(N):
                            pred = ((1 - Q**m1) * A[b]**m1
                                    * (A[a]**m2 - A[b]**m2) * W[a][b])
                            if dd[a][b] != pred:
                                ok = False
            verdict = "YES" if ok else "inconsistent"
        print("n=3 p2=%-7s meas=%-7s conj-solvable: %s"
              % (p2mode, meas, verdict))


if __name__ == "__main__":
    main()
