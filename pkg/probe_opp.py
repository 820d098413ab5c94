import time
from qadams.quasimap import (TargetSpec, InsertionSpec, make_registry,
                             ohat_twist, ovir_weight, equator_class, _insertion_parts,
                             dual_weight_multiset, stable_envelope, restriction_matrix)
from qadams.symbolic import (SeriesOperator, series_inverse, series_zshift,
                             chi_projective, lp_substitute, FactoredRatFunc)

t0 = time.time()
spec = TargetSpec(2, 2)
reg = make_registry(spec)
n, D = spec.n, 2
ring = reg.ring

def stable_envelope_opp(i, spec, reg):
    out = reg.one()
    hh = reg.var('h', 2)
    for j in range(1, i):
        out = out * (reg.var('a_%d' % j) - hh * reg.var('x'))
    for j in range(i + 1, spec.n + 1):
        out = out * (reg.var('a_%d' % j) - reg.var('x'))
    return out

def restriction_matrix_opp(spec, reg):
    n = spec.n
    envs = [stable_envelope_opp(i, spec, reg) for i in range(1, n + 1)]
    R = [[lp_substitute(envs[i], 'x', reg.var('a_%d' % (alpha + 1)))
          for i in range(n)] for alpha in range(n)]
    def diag_inv(i):
        unit_exps = {'a_%d' % j: -1 for j in range(1, n + 1) if j != i}
        out = FactoredRatFunc(reg, reg.mono(1, unit_exps), reg.one(), {})
        for j in range(1, i):
            e = [0] * len(reg.names)
            e[reg.index('h')] = 2
            e[reg.index('a_%d' % i)] = 1
            e[reg.index('a_%d' % j)] = -1
            out = out.with_denominator_factor(tuple(e), 1)
        for j in range(i + 1, n + 1):
            e = [0] * len(reg.names)
            e[reg.index('a_%d' % i)] = 1
            e[reg.index('a_%d' % j)] = -1
            out = out.with_denominator_factor(tuple(e), 1)
        return out
    dinv = [diag_inv(i) for i in range(1, n + 1)]
    zero = FactoredRatFunc.zero(reg)
    Rinv = [[zero for _ in range(n)] for _ in range(n)]
    for j in range(n - 1, -1, -1):
        Rinv[j][j] = dinv[j]
        for i in range(j - 1, -1, -1):
            acc = zero
            for l in range(i + 1, j + 1):
                if R[i][l].is_zero() or Rinv[l][j].is_zero():
                    continue
                acc = acc + R[i][l] * Rinv[l][j]
            Rinv[i][j] = -(dinv[i] * acc)
    return R, Rinv

def euler_inv(alpha):
    # e_alpha = prod_{b != alpha} (1 - a_b/a_alpha) as FRF NUMERATOR, times h/(1-h^2)
    out = FactoredRatFunc(reg, reg.var('h'), reg.one(), {})
    e = [0] * len(reg.names)
    e[reg.index('h')] = 2
    out = out.with_denominator_factor(tuple(e), 1)
    num = reg.one()
    for b in range(1, n + 1):
        if b != alpha:
            num = num * (reg.one() - reg.mono(1, {'a_%d' % b: 1, 'a_%d' % alpha: -1}))
    return out * num

def gram_inverse():
    _, RinvP = restriction_matrix(spec, reg)
    _, RinvM = restriction_matrix_opp(spec, reg)
    winv = [euler_inv(alpha) for alpha in range(1, n + 1)]
    zero = FactoredRatFunc.zero(reg)
    out = [[zero for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = zero
            for l in range(n):
                if RinvP[i][l].is_zero() or RinvM[j][l].is_zero():
                    continue
                acc = acc + RinvP[i][l] * (winv[l] * RinvM[j][l])
            out[i][j] = acc
    return out

def assemble2(d, insertions, row, col, tw):
    p1, eq, p2 = _insertion_parts(insertions, reg)
    p1 = p1 * stable_envelope(col, spec, reg)
    p2 = p2 * stable_envelope_opp(row, spec, reg)
    cls = ohat_twist(spec, d, reg) * ovir_weight(spec, d, reg)
    cls = cls * lp_substitute(p1, 'x', reg.var('L'))
    cls = cls * equator_class(eq, spec)
    rep = reg.mono(ring.q_power(d % spec.k), {'L': 1}) if tw == 'qd' else reg.var('L')
    cls = cls * lp_substitute(p2, 'x', rep)
    return cls

def taut_series(ins, tw):
    op = SeriesOperator(reg, n, D)
    for d in range(D + 1):
        weights = dual_weight_multiset(spec, d, reg)
        op.coeff[d] = [[chi_projective(weights, assemble2(d, ins, r, c, tw))
                        for c in range(1, n + 1)] for r in range(1, n + 1)]
    return op

Ginv = gram_inverse()
x = reg.var('x')
for tw in ('qd', 'none'):
    B0 = taut_series([], tw)
    # check Ginv @ B0.coeff[0] == Id
    ok = True
    for i in range(n):
        for j in range(n):
            acc = FactoredRatFunc.zero(reg)
            for l in range(n):
                acc = acc + Ginv[i][l] * B0.coeff[0][l][j]
            want = FactoredRatFunc(reg, reg.one(), reg.one(), {}) if i == j else FactoredRatFunc.zero(reg)
            if not (acc == want):
                ok = False
    print('tw=%-4s Ginv@G0==Id: %s  %.1fs' % (tw, ok, time.time() - t0))
    if not ok:
        continue
    Gc = SeriesOperator(reg, n, D)
    Gc.coeff[0] = Ginv
    B0inv = series_inverse(Gc @ B0) @ Gc
    Mx = taut_series([InsertionSpec(x, 'p1')], tw) @ B0inv
    Mx2 = taut_series([InsertionSpec(reg.var('x', 2), 'p1')], tw) @ B0inv
    prod = series_zshift(Mx, 1) @ Mx
    per_d = [all(Mx2.coeff[d][i][j] == prod.coeff[d][i][j] for i in range(n) for j in range(n)) for d in range(D + 1)]
    nz = [d for d in range(1, D + 1) if any(not Mx.coeff[d][i][j].is_zero() for i in range(n) for j in range(n))]
    print('tw=%-4s flatness per degree: %s  z-support of Mx: %s  %.1fs' % (tw, per_d, nz, time.time() - t0))
