"""Sector-scalar cocycle test, computed per CRT component.

P_m[gamma](z) := sum_d z^d * (gamma-sector stratum chi of Ohat * Ovir * L^m)
Delta_m[gamma] := P_m[gamma] / P_0[gamma]   (scalar z-series per sector)

Conjecture under test: Delta is the diagonal of the shift operator in the
fundamental-solution frame, so

    Delta_{m1+m2}(z) == Delta_{m2}(z q^{m1}) * Delta_{m1}(z)

holds per sector in every component, and the k-step telescope at q^k = 1
reproduces the pure-power orbit insertion:

    prod_{j=0}^{k-1} Delta_1(z q^j) == Delta_k.

The sector split uses honest torus localization along the a-weights, so it
is valid componentwise; each component is computed in its own registry.
Also checks sum over sectors == global pushforward per component.
"""
import sys
import time

sys.path.insert(0, "/root/pkg/src")

from qadams.quasimap import (TargetSpec, make_registry, ohat_twist,
                             ovir_weight, dual_weight_multiset)
from qadams.symbolic import (SeriesOperator, chi_projective, series_inverse,
                             series_zshift)
from qadams.quasimap import _chi_refined_frf


def divisors(k):
    return [m for m in range(1, k + 1) if k % m == 0]


def sector_chi(spec, d, cls, gamma, reg):
    own, others = [], []
    for i in range(1, spec.n + 1):
        for j in range(d + 1):
            w = reg.mono(reg.ring.q_power((-j) % spec.k), {"a_%d" % i: 1})
            (own if i == gamma else others).append(w)
    return _chi_refined_frf(own, cls, others, reg)


def sector_series(spec, D, power, reg):
    out = [SeriesOperator(reg, 1, D) for _ in range(spec.n)]
    ok = True
    for d in range(D + 1):
        cls = ohat_twist(spec, d, reg) * ovir_weight(spec, d, reg)
        cls = cls * reg.mono(1, {"L": power})
        for g in range(1, spec.n + 1):
            out[g - 1].coeff[d][0][0] = sector_chi(spec, d, cls, g, reg)
        total = out[0].coeff[d][0][0]
        for g in range(2, spec.n + 1):
            total = total + out[g - 1].coeff[d][0][0]
        glob = chi_projective(dual_weight_multiset(spec, d, reg), cls)
        if not (total == glob):
            ok = False
            print("    !! sector sum mismatch at d=%d power=%d" % (d, power))
    return out, ok


def eq_scalar(a, b, D):
    return [a.coeff[d][0][0] == b.coeff[d][0][0] for d in range(D + 1)]


def run(n, k, D):
    spec = TargetSpec(n=n, k=k)
    for m in divisors(k):
        reg = make_registry(spec, m)
        t0 = time.time()
        P, sums_ok = {}, True
        for power in range(0, k + 3):
            P[power], ok = sector_series(spec, D, power, reg)
            sums_ok = sums_ok and ok
        inv0 = [series_inverse(P[0][g]) for g in range(n)]
        Delta = {p: [P[p][g] @ inv0[g] for g in range(n)] for p in P if p > 0}
        print("n=%d k=%d D=%d comp=%d  built in %.0fs  sector sums %s"
              % (n, k, D, m, time.time() - t0, "ok" if sums_ok else "BAD"))
        checks = [("D2 == D1(zq).D1", 2, 1, 1),
                  ("D3 == D1(zq^2).D2", 3, 1, 2),
                  ("D3 == D2(zq).D1", 3, 2, 1),
                  ("D4 == D2(zq^2).D2", 4, 2, 2),
                  ("D4 == D1(zq^3).D3", 4, 1, 3)]
        for name, tot, outer, inner in checks:
            if tot not in Delta:
                continue
            for g in range(n):
                lhs = Delta[tot][g]
                rhs = series_zshift(Delta[outer][g], inner) @ Delta[inner][g]
                print("    sector %d  %-18s : %s"
                      % (g + 1, name, eq_scalar(lhs, rhs, D)))
        for g in range(n):
            tele = Delta[1][g]
            for j in range(1, k):
                tele = series_zshift(Delta[1][g], j) @ tele
            print("    sector %d  telescope == D%d  : %s"
                  % (g + 1, k, eq_scalar(tele, Delta[k][g], D)))


if __name__ == "__main__":
    run(2, 2, 3)
