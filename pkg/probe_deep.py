"""Deep numeric test of the conjugation-dressed clean construction.

n=2, k=2, q=-1 exact, a=(2,3), h=5, degrees 0..3.

1. Blocks for insertion x^m at the base point (clean argument a_g) and
   trivial insertion, honest measure, output side argument q^d a_g.
   Repeated weights handled by epsilon regularization: weight i gets a
   factor (1+e)^(r_i), every fixed-point term is expanded as a truncated
   Laurent series in e, and the e^0 coefficient of the total is taken
   (negative parts must cancel; checked).
2. Right-normalize: Op_m = K_m K_0^{-1} (fixed frame).
3. Solve W (z-series conjugation, zero diagonal) from the (1,1) cocycle
   degree by degree; verify the full (m1,m2) grid, the diagonal defects,
   and the k-fold iterate identity (the main-theorem surplus).
"""
from fractions import Fraction

Q = Fraction(-1)
A = [Fraction(2), Fraction(3)]
H = Fraction(5)
N, K, D = 2, 2, 3
WIN = 12


class Eps:
    """Truncated Laurent series in e over Fraction: val + coeffs."""
    def __init__(self, val, coeffs):
        self.val = val
        self.coeffs = coeffs[:WIN]

    @staticmethod
    def const(c):
        return Eps(0, [Fraction(c)] + [Fraction(0)] * (WIN - 1))

    @staticmethod
    def one_plus_pow(r):
        # (1+e)^r as series, r any integer
        out = [Fraction(0)] * WIN
        c = Fraction(1)
        for s in range(WIN):
            out[s] = c
            c = c * Fraction(r - s, s + 1)
        return Eps(0, out)

    def __add__(self, o):
        v = min(self.val, o.val)
        ln = WIN
        a = [Fraction(0)] * ln
        for i, c in enumerate(self.coeffs):
            if self.val - v + i < ln:
                a[self.val - v + i] += c
        for i, c in enumerate(o.coeffs):
            if o.val - v + i < ln:
                a[o.val - v + i] += c
        return Eps(v, a)

    def __mul__(self, o):
        out = [Fraction(0)] * WIN
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            for j, d in enumerate(o.coeffs):
                if i + j >= WIN:
                    break
                out[i + j] += c * d
        return Eps(self.val + o.val, out)

    def inv(self):
        v = next(i for i, c in enumerate(self.coeffs) if c != 0)
        lead = self.coeffs[v]
        rest = self.coeffs[v:] + [Fraction(0)] * v
        out = [Fraction(0)] * WIN
        out[0] = 1 / lead
        for s in range(1, WIN):
            acc = Fraction(0)
            for t in range(1, s + 1):
                if t < len(rest):
                    acc += rest[t] * out[s - t]
            out[s] = -acc / lead
        return Eps(-(self.val + v), out)

    def at_zero(self):
        if self.val > 0:
            return Fraction(0)
        idx = -self.val
        for i in range(idx):
            if i < len(self.coeffs) and self.coeffs[i] != 0:
                raise ArithmeticError("uncancelled negative part")
        return self.coeffs[idx] if idx < len(self.coeffs) else Fraction(0)


def envelope(i, x):
    v = Fraction(1)
    for j in range(1, N + 1):
        if j < i:
            v *= (A[j - 1] - x)
        elif j > i:
            v *= (A[j - 1] - H * H * x)
    return v


def envelope_eps(i, x):
    v = Eps.const(1)
    for j in range(1, N + 1):
        if j < i:
            v = v * (Eps.const(A[j - 1]) + Eps.const(-1) * x)
        elif j > i:
            v = v * (Eps.const(A[j - 1]) + Eps.const(-H * H) * x)
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


def block(d, insval):
    """insval(g) -> Fraction value of the base-point insertion in sector g.
    Output-side envelope argument: q^d a_g (clean).  Equator handled by
    insval too (it is a clean per-sector scalar either way)."""
    if d == 0:
        # X itself: fixed points g, measure = T*X tangent at g
        out = [[Fraction(0)] * N for _ in range(N)]
        hb = H * H
        for r in range(1, N + 1):
            for c in range(1, N + 1):
                tot = Fraction(0)
                for g in range(N):
                    den = Fraction(1)
                    for g2 in range(N):
                        if g2 == g:
                            continue
                        den *= (1 - A[g2] / A[g]) * (1 - hb * A[g] / A[g2])
                    den *= (1 - hb)
                    val = (H**(1) * (1 - hb) * envelope(c, A[g])
                           * insval(g) * envelope(r, A[g]))
                    # d=0 ohat twist: hbar^{(n(0-1)+1)/2} = h^{1-n}; keep
                    # uniform with d>=1 branch which uses H**(N(d-1)+1)
                    val = val / H**N
                    tot += val / den
                out[r - 1][c - 1] = tot
        return out
    pts = [(g, j) for g in range(N) for j in range(d + 1)]
    rid = {p: t for t, p in enumerate(pts)}
    ov = ovir_val(d)
    out = [[Fraction(0)] * N for _ in range(N)]
    for r in range(1, N + 1):
        for c in range(1, N + 1):
            tot = Eps.const(0)
            for (g, j) in pts:
                w = A[g] * Q**(-j % K)
                weps = Eps.const(w) * Eps.one_plus_pow(rid[(g, j)])
                x2 = Q**d * A[g]
                val = Eps.const(ov * envelope(c, A[g]) * insval(g)
                                * envelope(r, x2))
                den = Eps.const(1)
                for (g2, j2) in pts:
                    if (g2, j2) == (g, j):
                        continue
                    w2 = A[g2] * Q**(-j2 % K)
                    ratio = (Eps.const(w2) * Eps.one_plus_pow(rid[(g2, j2)])
                             * weps.inv())
                    den = den * (Eps.const(1) + Eps.const(-1) * ratio)
                tot = tot + val * den.inv()
            out[r - 1][c - 1] = tot.at_zero()
    return out


def mul(a, b):
    return [[sum(a[i][t] * b[t][j] for t in range(N)) for j in range(N)]
            for i in range(N)]


def sub(a, b):
    return [[a[i][j] - b[i][j] for j in range(N)] for i in range(N)]


def sadd(a, b):
    return [[a[i][j] + b[i][j] for j in range(N)] for i in range(N)]


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


def series_mul(a, b):
    return [reduce_sum([mul(a[i], b[d - i]) for i in range(d + 1)])
            for d in range(D + 1)]


def reduce_sum(ms):
    out = ms[0]
    for m in ms[1:]:
        out = sadd(out, m)
    return out


def series_inv(a):
    a0i = matinv(a[0])
    out = [a0i]
    for d in range(1, D + 1):
        acc = [[Fraction(0)] * N for _ in range(N)]
        for i in range(1, d + 1):
            acc = sadd(acc, mul(a[i], out[d - i]))
        out.append([[-sum(a0i[i][t] * acc[t][j] for t in range(N))
                     for j in range(N)] for i in range(N)])
        out[d] = mul(a0i, [[-acc[i][j] for j in range(N)]
                           for i in range(N)])
    return out


def zshift(a, j):
    return [[[Q**(j * d) * a[d][r][c] for c in range(N)] for r in range(N)]
            for d in range(D + 1)]


def conj(W, Winv, a):
    return series_mul(series_mul(W, a), Winv)


def main():
    R = [[envelope(c + 1, A[g]) for c in range(N)] for g in range(N)]
    Rinv = matinv(R)

    def norm_series(insval):
        Kser = [block(d, insval) for d in range(1, D + 1)]
        fixed = [mul(mul(R, Ks), Rinv) for Ks in Kser]
        z0 = [[insval(i) if i == j else Fraction(0) for j in range(N)]
              for i in range(N)]
        return [z0] + fixed

    B = {m: norm_series(lambda g, m=m: A[g]**m) for m in range(0, 5)}
    inv0 = series_inv(B[0])
    Op = {m: series_mul(B[m], inv0) for m in range(0, 5)}
    print("z0 of Op1 diag:", [Op[1][0][i][i] for i in range(N)],
          "offdiag:", Op[1][0][0][1], Op[1][0][1][0])

    # solve W degree by degree from the (1,1) cocycle:
    # M_2(z) = M_1(qz) M_1(z), with M_m = W Op_m W^{-1}
    W = [[[Fraction(1) if i == j else Fraction(0) for j in range(N)]
          for i in range(N)]]
    for d in range(1, D + 1):
        W.append([[Fraction(0)] * N for _ in range(N)])
    solve_pairs = [(1, 1), (1, 2), (2, 1)]
    for dd in range(1, D + 1):
        # defect at degree dd with current W (unknown W[dd] set to 0)
        def defects(Wcur):
            Winv = series_inv(Wcur)
            Mc = {m: conj(Wcur, Winv, Op[m]) for m in range(1, 5)}
            out = {}
            for (m1, m2) in solve_pairs:
                rhs = series_mul(zshift(Mc[m2], m1), Mc[m1])
                out[(m1, m2)] = sub(Mc[m1 + m2][dd], rhs[dd])
            return out
        dfct = defects(W)
        # contribution of W[dd]: on entry (a,b):
        # (D_2-part) ... derive: adding W[dd] changes M_m[dd] by
        # W[dd] D_m - D_m W[dd] (entry: (a_b^m - a_a^m) Wdd[ab]);
        # the rhs changes by q^{dd?}: M1(qz)[dd]-change q^dd*(...)D_1 +
        # D_1-part... compute numerically by finite difference instead:
        coefmat = {}
        for a in range(N):
            for b in range(N):
                if a == b:
                    continue
                W2 = [[r[:] for r in w] for w in W]
                W2[dd][a][b] += 1
                dfb = defects(W2)
                coefmat[(a, b)] = {p: sub(dfb[p], dfct[p])
                                   for p in solve_pairs}
        # solve: dfct + sum_ab x_ab * coefmat[(a,b)] = 0  -> linear solve
        unk = [(a, b) for a in range(N) for b in range(N) if a != b]
        rows = []
        rhsv = []
        for p in solve_pairs:
            for i in range(N):
                for j in range(N):
                    rows.append([coefmat[u][p][i][j] for u in unk])
                    rhsv.append(-dfct[p][i][j])
        # least-squares-free exact solve: pick independent rows
        import itertools
        if all(x == 0 for r in rows for x in r):
            ok = all(v == 0 for v in rhsv)
            print("deg %d: W invisible (gauge slack); defect already zero: %s"
                  % (dd, ok))
            if not ok:
                print("  OBSTRUCTED at deg", dd)
                return
            continue
        sol = None
        for comb in itertools.combinations(range(len(rows)), len(unk)):
            Mx = [rows[t][:] + [rhsv[t]] for t in comb]
            ok = True
            for col in range(len(unk)):
                piv = next((r for r in range(col, len(unk))
                            if Mx[r][col] != 0), None)
                if piv is None:
                    ok = False
                    break
                Mx[col], Mx[piv] = Mx[piv], Mx[col]
                pv = Mx[col][col]
                Mx[col] = [x / pv for x in Mx[col]]
                for r in range(len(unk)):
                    if r != col and Mx[r][col] != 0:
                        f = Mx[r][col]
                        Mx[r] = [x - f * y for x, y in zip(Mx[r], Mx[col])]
            if ok:
                sol = [Mx[t][len(unk)] for t in range(len(unk))]
                break
        if sol is None:
            print("deg %d: no independent system" % dd)
            for r, v in zip(rows, rhsv):
                if any(x != 0 for x in r) or v != 0:
                    print("   ", r, "|", v)
            return
        for t, (a, b) in enumerate(unk):
            W[dd][a][b] = sol[t]
        # check ALL solve-pair entries satisfied (overdetermined)
        rs = defects(W)
        allz = all(rs[p][i][j] == 0 for p in solve_pairs
                   for i in range(N) for j in range(N))
        print("deg %d solved; solve-pair residuals zero: %s" % (dd, allz))

    Winv = series_inv(W)
    M = {m: conj(W, Winv, Op[m]) for m in range(1, 5)}
    # full verification grid
    for m1 in (1, 2, 3):
        for m2 in (1, 2, 3):
            if m1 + m2 > 4:
                continue
            lhs = M[m1 + m2]
            rhs = series_mul(zshift(M[m2], m1), M[m1])
            ok = [all(lhs[d][i][j] == rhs[d][i][j]
                      for i in range(N) for j in range(N))
                  for d in range(D + 1)]
            print("cocycle (%d,%d): %s" % (m1, m2, ok))
    # main-theorem shape: k-fold iterate of M_1 vs M_k (k = 2)
    lhs = M[2]
    rhs = series_mul(zshift(M[1], 1), M[1])
    print("W solved:", W)
    # closed-form candidate: W = Delta * B0^{-1},
    # Delta[i] = scalar-series inverse of (B0^{-1})[i][i]
    Binv0 = series_inv(B[0])
    from fractions import Fraction as F
    Dd = []
    for i in range(N):
        s = [Binv0[d][i][i] for d in range(D + 1)]
        inv = [F(1) / s[0]]
        for d in range(1, D + 1):
            acc = F(0)
            for e in range(1, d + 1):
                acc += s[e] * inv[d - e]
            inv.append(-acc / s[0])
        Dd.append(inv)
    Wc = [[[sum(Dd[i][e] * Binv0[d - e][i][j] for e in range(d + 1))
            for j in range(N)] for i in range(N)] for d in range(D + 1)]
    same = all(Wc[d][i][j] == W[d][i][j]
               for d in (0, 1, 3) for i in range(N) for j in range(N))
    print("W == Delta*B0inv on deg 0,1,3:", same)
    print("Wc deg1:", Wc[1])
    print("Wc deg2:", Wc[2])
    print("Wc deg3:", Wc[3])
    # if not equal, also try Birkhoff triangular split diagnostics
    if not same:
        # difference
        for d in (1, 3):
            print("diff deg", d,
                  [[W[d][i][j] - Wc[d][i][j] for j in range(N)]
                   for i in range(N)])
    # full grid with the CLOSED-FORM W regardless
    Winvc = series_inv(Wc)
    Mc = {m: conj(Wc, Winvc, Op[m]) for m in range(1, 5)}
    for m1 in (1, 2, 3):
        for m2 in (1, 2, 3):
            if m1 + m2 > 4:
                continue
            lhs = Mc[m1 + m2]
            rhs = series_mul(zshift(Mc[m2], m1), Mc[m1])
            ok = [all(lhs[d][i][j] == rhs[d][i][j]
                      for i in range(N) for j in range(N))
                  for d in range(D + 1)]
            print("closed-form cocycle (%d,%d): %s" % (m1, m2, ok))


if __name__ == "__main__":
    main()
