"""Fourth battery: add the equivariant-orientation bits that are invisible
at degree <= 1 and at a_i = 1.

  o:  obstruction product uses (1 - h^2 q^j a_i^o), o in {-1, +1}
  w:  twist monomial uses prod a_i^(w*d), w in {+1, -1}
  side, s:  raise by inv(S0) on left/right, with raise shift s
  t:  connection block twist q^(t*d)
  p2tw: output envelope argument L vs q^d L

Checks: V1 flatness, V2 theorem (plain), per CRT component, (n,k,D)=(2,2,2).
Only prints combos that reach z^1 in all components; flags full passes.
"""
import sys
import time

sys.path.insert(0, "/root/pkg/src")

from qadams.quasimap import (TargetSpec, make_registry,
                             dual_weight_multiset, project_series)
from qadams.symbolic import (SeriesOperator, chi_projective, lp_substitute,
                             series_inverse, series_zshift)
from probe_dict import (interpolant, diag_value_inverse, const_diag,
                        divisors, eq_series)


def ovir(spec, d, reg, o):
    ring = reg.ring
    out = reg.one() - reg.var("h", 2)
    for i in range(1, spec.n + 1):
        for j in range(1, d):
            term = reg.mono(ring.q_power(j % spec.k),
                            {"h": 2, "a_%d" % i: o})
            out = out * (reg.one() - term)
    return out


def ohat(spec, d, reg, w):
    n, k = spec.n, spec.k
    exps = {"a_%d" % i: w * d for i in range(1, n + 1)}
    exps["h"] = n * (d - 1) + 1
    qexp = (-(n * d * (d - 1)) // 2) % k
    return reg.mono(reg.ring.q_power(qexp), exps)


def sandwich(spec, d, reg, power, p2tw, o, w):
    n = spec.n
    ring = reg.ring
    weights = dual_weight_multiset(spec, d, reg)
    base = ohat(spec, d, reg, w) * ovir(spec, d, reg, o)
    if power:
        base = base * reg.mono(ring.one(), {"L": power})
    rep2 = (reg.mono(ring.q_power(d % spec.k), {"L": 1}) if p2tw == "qd"
            else reg.var("L"))
    rows = []
    for r in range(1, n + 1):
        br = lp_substitute(interpolant(r, spec, reg), "x", rep2)
        row = []
        for c in range(1, n + 1):
            bc = lp_substitute(interpolant(c, spec, reg), "x", reg.var("L"))
            row.append(chi_projective(weights, base * bc * br))
        rows.append(row)
    return rows


def run(n, k, D, combo):
    o, w, side, s, t, p2tw = combo
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    S = {m: SeriesOperator(reg, n, D,
                           [sandwich(spec, d, reg, m, p2tw, o, w)
                            for d in range(D + 1)])
         for m in (0, 1, 2, k)}
    dinv = [diag_value_inverse(a, spec, reg) for a in range(1, n + 1)]
    Dinv = const_diag(reg, n, D, dinv)
    S0s = series_zshift(S[0], s) if s else S[0]
    gp = Dinv @ S0s
    if not all(gp.coeff[0][i][j].is_zero() for i in range(n)
               for j in range(n) if i != j):
        return None
    inv0 = series_inverse(gp) @ Dinv
    if side == "R":
        OP = {m: S[m] @ inv0 for m in (1, 2, k)}
    else:
        OP = {m: inv0 @ S[m] for m in (1, 2, k)}
    M1 = series_zshift(OP[1], t) if t else OP[1]
    M2 = series_zshift(OP[2], 2 * t % k) if (2 * t % k) else OP[2]
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
    return flat, thm


def depth(res):
    d = 0
    while d < len(res[0]) and all(r[d] for r in res):
        d += 1
    return d


if __name__ == "__main__":
    n, k, D = 2, 2, 2
    t0 = time.time()
    best = []
    for o in (-1, 1):
        for w in (1, -1):
            for side in ("L", "R"):
                for s in (0, 1):
                    for t in (0, 1):
                        for p2tw in ("none", "qd"):
                            combo = (o, w, side, s, t, p2tw)
                            out = run(n, k, D, combo)
                            if out is None:
                                continue
                            flat, thm = out
                            df, dt = depth(flat), depth(thm)
                            if df >= 2 and dt >= 2:
                                print("o=%+d w=%+d %s s=%d t=%d p2=%-4s  "
                                      "flat-depth=%d thm-depth=%d %s"
                                      % (o, w, side, s, t, p2tw, df, dt,
                                         "FULL" if df == D + 1 and
                                         dt == D + 1 else ""))
                                best.append(combo)
    print("elapsed %.0fs, %d combos reach z^1" % (time.time() - t0,
                                                  len(best)))
