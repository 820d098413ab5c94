"""Fifth battery: obstruction-weight form.

The degree-d obstruction product collapses at a_i = 1 to (1-hbar q^j)^2
for n = 2 under several distinct forms:
  inv:   prod_i (1 - h^2 q^j / a_i)            [current engine]
  plus:  prod_i (1 - h^2 q^j a_i)
  ratio: prod_{alpha != beta} (1 - h^2 q^j a_alpha / a_beta)
Only the a-dependence at d >= 2 distinguishes them.  Battery: flatness and
iterated-product theorem, left raise, s=0, t in {0,1}, p2 in {none,qd}.
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


def ovir_form(spec, d, reg, form):
    ring = reg.ring
    out = reg.one() - reg.var("h", 2)
    if form == "ratio":
        for al in range(1, spec.n + 1):
            for be in range(1, spec.n + 1):
                if al == be:
                    continue
                for j in range(1, d):
                    term = reg.mono(ring.q_power(j % spec.k),
                                    {"h": 2, "a_%d" % al: 1,
                                     "a_%d" % be: -1})
                    out = out * (reg.one() - term)
        return out
    o = -1 if form == "inv" else 1
    for i in range(1, spec.n + 1):
        for j in range(1, d):
            term = reg.mono(ring.q_power(j % spec.k), {"h": 2, "a_%d" % i: o})
            out = out * (reg.one() - term)
    return out


def ohat(spec, d, reg):
    n, k = spec.n, spec.k
    exps = {"a_%d" % i: d for i in range(1, n + 1)}
    exps["h"] = n * (d - 1) + 1
    qexp = (-(n * d * (d - 1)) // 2) % k
    return reg.mono(reg.ring.q_power(qexp), exps)


def sandwich(spec, d, reg, power, p2tw, form):
    n = spec.n
    ring = reg.ring
    weights = dual_weight_multiset(spec, d, reg)
    base = ohat(spec, d, reg) * ovir_form(spec, d, reg, form)
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


def run(n, k, D, form, t, p2tw):
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    S = {m: SeriesOperator(reg, n, D,
                           [sandwich(spec, d, reg, m, p2tw, form)
                            for d in range(D + 1)])
         for m in (0, 1, 2, k)}
    dinv = [diag_value_inverse(a, spec, reg) for a in range(1, n + 1)]
    Dinv = const_diag(reg, n, D, dinv)
    inv0 = series_inverse(Dinv @ S[0]) @ Dinv
    OP = {m: inv0 @ S[m] for m in (1, 2, k)}
    M1 = series_zshift(OP[1], t) if t else OP[1]
    M2 = series_zshift(OP[2], 2 * t % k) if (2 * t % k) else OP[2]
    Mk = series_zshift(OP[k], k * t % k) if (k * t % k) else OP[k]
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
    print("form=%-5s t=%d p2=%-4s  flat=%s thm=%s"
          % (form, t, p2tw, flat, thm))


if __name__ == "__main__":
    t0 = time.time()
    for form in ("ratio", "plus", "inv"):
        for t in (1, 0):
            for p2tw in ("qd", "none"):
                run(2, 2, 2, form, t, p2tw)
    print("elapsed %.0fs" % (time.time() - t0))
