"""Print the first-order flatness defect of the engine dictionary.

E_m := K_{m,1} - C_m K_{0,1}   (z^1 block of Op_m, right-normalized)
Defect := E_2 - q E_1 C_1 - C_1 E_1   per CRT component.

Also prints E_1, E_2, C_1 for inspection, numerically specialized at
a_1=2, a_2=3, h=5 to expose rank / zero structure.
"""
import sys
from fractions import Fraction

sys.path.insert(0, "/root/pkg/src")

from qadams.quasimap import (TargetSpec, InsertionSpec, make_registry,
                             bare_matrix, classical_matrix, project_frf,
                             component_registry)
from qadams.symbolic import FactoredRatFunc


def num_eval(f, assign, qval):
    """Evaluate a projected FRF at numeric variable assignments."""
    def mono_val(exps, coeff):
        v = coeff_val(coeff)
        for name, e in zip(f.reg.names, exps):
            v *= Fraction(assign[name]) ** e
        return v

    def coeff_val(c):
        # CycRing element in a degree-1 component: constant + c1*q;
        # denominator keys store (ring, coefficient-tuple) instead
        if isinstance(c, tuple):
            c = c[1]
            cs = list(c)
        else:
            cs = list(c.coeffs)
        v = Fraction(0)
        for i, ci in enumerate(cs):
            v += Fraction(ci) * qval ** i
        return v

    def poly_val(p):
        return sum((mono_val(e, c) for e, c in p.terms.items()), Fraction(0))

    v = poly_val(f.unit) * poly_val(f.num)
    for (exps, coeff), (_, mult) in f.den.items():
        base = Fraction(1) - mono_val(exps, coeff)
        v /= base ** mult
    return v


def mat_mul(A, B):
    n = len(A)
    return [[sum((A[i][l] * B[l][j] for l in range(n)),
                 Fraction(0)) for j in range(n)] for i in range(n)]


def mat_sub(A, B):
    n = len(A)
    return [[A[i][j] - B[i][j] for j in range(n)] for i in range(n)]


def run(n, k, m):
    spec = TargetSpec(n=n, k=k)
    full = make_registry(spec)
    reg = component_registry(full, m)
    assign = {"a_1": 2, "a_2": 3, "a_3": 7, "h": 5, "L": 0, "x": 0}
    qval = Fraction(1) if m == 1 else Fraction(-1)  # k=2 only

    def block(mat):
        return [[num_eval(project_frf(x, reg) if x.reg is full else x,
                          assign, qval)
                 for x in row] for row in mat]

    def pblock(name, M):
        print("  %s = %s" % (name, [[str(x) for x in row] for row in M]))

    ins = {p: [InsertionSpec(full.mono(1, {"x": p}), "p1")] for p in (1, 2)}
    ins[0] = []
    K = {p: block(bare_matrix(spec, 1, ins[p], full, "qd")) for p in (0, 1, 2)}
    C = {p: block(classical_matrix(spec, ins[p], full)) for p in (0, 1, 2)}
    E = {p: mat_sub(K[p], mat_mul(C[p], K[0])) for p in (1, 2)}
    qE1C1 = [[qval * x for x in row] for row in mat_mul(E[1], C[1])]
    defect = mat_sub(mat_sub(E[2], qE1C1), mat_mul(C[1], E[1]))
    print("n=%d k=%d comp=%d  (a=2,3 h=5, q=%s)" % (n, k, m, qval))
    pblock("C1", C[1])
    pblock("K0", K[0])
    pblock("E1", E[1])
    pblock("E2", E[2])
    pblock("defect", defect)


if __name__ == "__main__":
    run(2, 2, 1)
    run(2, 2, 2)
