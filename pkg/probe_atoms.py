"""Atom decomposition of normalized z^d blocks.

For insertion x^m at the base point, the degree-d block of the normalized
operator is a combination sum_w w^m P_w over the 2n eigenvalue atoms
w in {a_g q^(-j)}.  The shift-cocycle identity for all exponent pairs
forces entry (a, b) to be supported on w = a_a and w = q^d a_b only.
Solve for P_w from m = 0..(2n-1) numerically at random a-values per
component and report the foreign-atom magnitudes.
"""
from fractions import Fraction
import itertools

from qadams.cyclotomic import CycRing
from qadams.symbolic import (chi_projective, SeriesOperator, series_inverse)
from qadams.quasimap import (TargetSpec, InsertionSpec, make_registry,
                             assemble_class, dual_weight_multiset,
                             classical_matrix, bare_series, project_series)


def frf_value(f, assign, qval):
    def ev(p):
        tot = 0
        for exps, c in p.terms.items():
            if isinstance(c, tuple):
                c = c[1]
            if hasattr(c, "coeffs"):
                cs = c.coeffs
            else:
                cs = c
            val = sum(Fraction(ci) * qval**i for i, ci in enumerate(cs))
            for name, e in zip(f.reg.names, exps):
                if e:
                    val *= assign[name]**e
            tot += val
        return tot
    num = ev(f.num) * ev(f.unit)
    den = 1
    for (exps, coeff), (b, mult) in f.den.items():
        c = coeff[1] if isinstance(coeff, tuple) else coeff
        cs = c.coeffs if hasattr(c, "coeffs") else c
        cval = sum(Fraction(ci) * qval**i for i, ci in enumerate(cs))
        mon = 1
        for name, e in zip(f.reg.names, exps):
            if e:
                mon *= assign[name]**e
        den *= (1 - cval * mon)**mult
    return num / den


def main():
    n, k, D = 2, 2, 2
    spec = TargetSpec(n=n, k=k)
    reg = make_registry(spec)
    assign = {"a_1": Fraction(2), "a_2": Fraction(3), "h": Fraction(5),
              "L": 0, "x": 0}
    for p2tw in ("qd", "none"):
        B = {}
        for m in range(0, 2 * n):
            ins = [] if m == 0 else [InsertionSpec(reg.mono(1, {"x": m}),
                                                   "p1")]
            B[m] = bare_series(spec, ins, D, reg, p2_twist=p2tw)
        inv0 = series_inverse(B[0])
        Op = {m: B[m] @ inv0 for m in range(2 * n)}
        for qval in (Fraction(-1),):
            # atoms: a_g * qval^(-j) for g in 1..n, j in 0..1 (k = 2)
            atoms = []
            for g in (1, 2):
                for j in (0, 1):
                    atoms.append(("a%d q%d" % (g, j),
                                  assign["a_%d" % g] * qval**j))
            for d in (1, 2):
                print("p2=%s q=%+d d=%d" % (p2tw, qval, d))
                # values V[m][a][b]
                V = [[[frf_value(Op[m].coeff[d][a][b], assign, qval)
                       for b in range(n)] for a in range(n)]
                     for m in range(2 * n)]
                # solve Vandermonde sum_w w^m Pw = V[m] entrywise
                import fractions
                for a in range(n):
                    for b in range(n):
                        # 4x4 solve
                        mat = [[atoms[t][1]**m for t in range(4)]
                               for m in range(4)]
                        rhs = [V[m][a][b] for m in range(4)]
                        # gaussian elimination over Fraction
                        import copy
                        Mx = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
                        for col in range(4):
                            piv = next(r for r in range(col, 4)
                                       if Mx[r][col] != 0)
                            Mx[col], Mx[piv] = Mx[piv], Mx[col]
                            pv = Mx[col][col]
                            Mx[col] = [x / pv for x in Mx[col]]
                            for r in range(4):
                                if r != col and Mx[r][col] != 0:
                                    f = Mx[r][col]
                                    Mx[r] = [x - f * y for x, y
                                             in zip(Mx[r], Mx[col])]
                        sol = [Mx[r][4] for r in range(4)]
                        allowed = {("a%d q0" % (a + 1)),
                                   ("a%d q%d" % (b + 1, d % k))}
                        tags = []
                        for t in range(4):
                            nm = atoms[t][0]
                            if sol[t] != 0:
                                mark = "OK " if nm in allowed else "BAD"
                                tags.append("%s %s=%s" % (mark, nm, sol[t]))
                        print("  (%d,%d): %s" % (a + 1, b + 1,
                                                 "; ".join(tags) or "zero"))


if __name__ == "__main__":
    main()
