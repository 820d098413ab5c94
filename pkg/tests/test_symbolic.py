import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qadams.cyclotomic import CycRing
from qadams.symbolic import (
    Binomial,
    ExactDivisionError,
    FactoredRatFunc,
    LaurentPoly,
    SeriesOperator,
    VarRegistry,
    chi_oracle_refined,
    chi_projective,
    complete_homogeneous,
    lp_evaluate,
    lp_exact_div,
    lp_from_text,
    lp_substitute,
    lp_to_text,
    series_inverse,
    series_zshift,
)

RQ = VarRegistry(("x", "y"))          # Fraction scalars
R2 = CycRing(2)                        # full ring at k=2
R3C = CycRing(3, 3)                    # component field at k=3


def frac_reg(*names):
    return VarRegistry(tuple(names))


# -- Laurent arithmetic ------------------------------------------------------


@st.composite
def rand_poly(draw, reg=RQ):
    n = draw(st.integers(min_value=0, max_value=4))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(min_value=-3, max_value=3))
                  for _ in reg.names)
        c = Fraction(draw(st.integers(min_value=-9, max_value=9)),
                     draw(st.integers(min_value=1, max_value=5)))
        terms[e] = terms.get(e, Fraction(0)) + c
    return LaurentPoly(reg, terms)


@given(rand_poly(), rand_poly())
@settings(max_examples=60, deadline=None)
def test_arith_matches_evaluation(p1, p2):
    pt = {"x": Fraction(3, 2), "y": Fraction(-5, 3)}
    assert lp_evaluate(p1 + p2, pt) == lp_evaluate(p1, pt) + lp_evaluate(p2, pt)
    assert lp_evaluate(p1 * p2, pt) == lp_evaluate(p1, pt) * lp_evaluate(p2, pt)


def test_substitute_examples():
    # tautological-class shift: L -> q^{-1} L over the full k=3 ring
    r = CycRing(3)
    reg = VarRegistry(("L",), r)
    p = reg.one() - reg.var("L")
    shifted = lp_substitute(p, "L", reg.mono(r.q_power(-1 % 3), {"L": 1}))
    assert shifted == reg.one() - reg.mono(r.q_power(2), {"L": 1})

    const = reg.const(r.q_power(1))
    assert lp_substitute(const, "L", reg.var("L", 2)) == const

    reg2 = frac_reg("x", "q", "a_2")
    p2 = (reg2.one() - reg2.var("x")) * \
        (reg2.one() - reg2.var("q") * reg2.var("x"))
    got = lp_substitute(p2, "x", reg2.var("a_2"))
    want = (reg2.one() - reg2.var("a_2")) * \
        (reg2.one() - reg2.var("q") * reg2.var("a_2"))
    assert got == want


def brute_h(m, weights):
    """Independent h_m: sum over all degree-m monomial multisets."""
    if m == 0:
        return weights[0].reg.one()
    total = weights[0].reg.zero()
    for combo in itertools.combinations_with_replacement(range(len(weights)), m):
        term = weights[0].reg.one()
        for i in combo:
            term = term * weights[i]
        total = total + term
    return total


def test_complete_homogeneous_examples():
    reg = frac_reg("a_1", "a_2")
    a1, a2 = reg.var("a_1"), reg.var("a_2")
    assert complete_homogeneous(0, [a1, a2]) == reg.one()
    assert complete_homogeneous(1, [a1, a2]) == a1 + a2
    assert complete_homogeneous(2, [a1, a2]) == a1 ** 2 + a1 * a2 + a2 ** 2

    ones = [reg.one()] * 4
    assert complete_homogeneous(2, ones) == reg.const(10)


def test_complete_homogeneous_against_brute_force():
    reg = frac_reg("a_1", "a_2", "a_3")
    ws = [reg.var("a_1"), reg.var("a_2"), reg.var("a_3"), reg.const(2)]
    for m in range(6):
        assert complete_homogeneous(m, ws) == brute_h(m, ws)


def test_generating_identity():
    reg = frac_reg("a_1", "a_2", "t")
    ws = [reg.var("a_1"), reg.var("a_2")]
    t = reg.var("t")
    M = 8
    series = reg.zero()
    for m in range(M + 1):
        series = series + complete_homogeneous(m, ws) * t ** m
    prod = series
    for w in ws:
        prod = prod * (reg.one() - w * t)
    truncated = {e: c for e, c in prod.terms.items()
                 if e[reg.index("t")] <= M}
    assert LaurentPoly(reg, truncated) == reg.one()


# -- chi pushforward ---------------------------------------------------------


def test_chi_projective_examples():
    reg = frac_reg("L", "a_1", "a_2")
    L = reg.var("L")
    ones = [reg.one(), reg.one()]
    assert chi_projective(ones, L ** 2) == reg.const(3)
    assert chi_projective(ones, L.mono_inv()) == reg.zero()
    assert chi_projective(ones, L ** -2) == reg.const(-1)
    ws = [reg.var("a_1"), reg.var("a_2")]
    assert chi_projective(ws, reg.one()) == reg.one()
    assert chi_projective(ws, L) == reg.var("a_1") + reg.var("a_2")


def test_chi_binomial_rule():
    # chi of O(m) on projective (N-1)-space with trivial weights
    import math
    for N in range(1, 6):
        reg = frac_reg("L")
        ones = [reg.one()] * N
        for m in range(5):
            got = chi_projective(ones, reg.var("L", m))
            assert got == reg.const(math.comb(N - 1 + m, m))


def test_chi_oracle_examples():
    reg = frac_reg("L", "a_1", "a_2")
    L = reg.var("L")
    ones = [reg.one(), reg.one()]
    assert chi_oracle_refined(ones, L ** 2) == reg.const(3)
    ws = [reg.var("a_1"), reg.var("a_2")]
    assert chi_oracle_refined(ws, L) == reg.var("a_1") + reg.var("a_2")


def test_chi_oracle_with_root_of_unity_weights():
    for ring in (CycRing(2), CycRing(2, 2)):
        reg = VarRegistry(("L",), ring)
        ws = [reg.one(), reg.const(ring.q_power(1))]
        got = chi_oracle_refined(ws, reg.one())
        assert got == reg.one()


@given(st.data())
@settings(max_examples=25, deadline=None)
def test_chi_agreement(data):
    reg = frac_reg("L", "a_1", "a_2")
    nw = data.draw(st.integers(min_value=1, max_value=4))
    ws = []
    for _ in range(nw):
        c = Fraction(data.draw(st.integers(min_value=1, max_value=4)))
        e1 = data.draw(st.integers(min_value=-1, max_value=1))
        e2 = data.draw(st.integers(min_value=-1, max_value=1))
        ws.append(reg.mono(c, {"a_1": e1, "a_2": e2}))
    cls = reg.zero()
    for _ in range(data.draw(st.integers(min_value=1, max_value=3))):
        m = data.draw(st.integers(min_value=-4, max_value=4))
        c = data.draw(st.integers(min_value=-5, max_value=5))
        cls = cls + reg.mono(c, {"L": m})
    assert chi_projective(ws, cls) == chi_oracle_refined(ws, cls)


# -- exact division and factored functions -----------------------------------


def test_exact_division():
    reg = frac_reg("x", "a")
    x, a = reg.var("x"), reg.var("a")
    assert lp_exact_div(x ** 2 - a ** 2, x - a) == x + a
    assert lp_exact_div(x ** 2 - a ** 2, x + a) == x - a
    # Laurent content on both sides
    num = x ** -1 - x
    den = reg.one() - x
    assert lp_exact_div(num, den) == x ** -1 * (reg.one() + x)
    with pytest.raises(ExactDivisionError):
        lp_exact_div(x ** 2 + a, x - a)


def test_frf_cancel_and_equality():
    reg = frac_reg("L")
    L = reg.var("L")
    f = FactoredRatFunc.from_poly(reg.one() - L ** 2)
    f = f.with_denominator_factor((1,), 1)  # divide by (1 - L)
    g = f.cancel()
    assert not g.den
    assert g.unit * g.num == reg.one() + L
    assert f == FactoredRatFunc.from_poly(reg.one() + L)


def test_frf_add_mul():
    reg = frac_reg("L")
    L = reg.var("L")
    one_minus = FactoredRatFunc.from_poly(reg.one()).with_denominator_factor(
        (1,), 1)
    # 1/(1-L) + 1/(1-L) = 2/(1-L)
    s = one_minus + one_minus
    two = FactoredRatFunc.from_poly(reg.const(2)).with_denominator_factor(
        (1,), 1)
    assert s == two
    # (1-L) * 1/(1-L) = 1
    p = one_minus * (reg.one() - L)
    assert p == FactoredRatFunc.one(reg)


def test_frf_reciprocal():
    reg = frac_reg("L", "a")
    L, a = reg.var("L"), reg.var("a")
    f = FactoredRatFunc.from_poly(a * L ** 2)
    assert (f.reciprocal() * f) == FactoredRatFunc.one(reg)
    g = FactoredRatFunc.from_poly(reg.one() - a * L)
    assert (g.reciprocal() * g) == FactoredRatFunc.one(reg)
    h = FactoredRatFunc.from_poly(reg.one() + L + L ** 2)
    with pytest.raises(ExactDivisionError):
        h.reciprocal()


def test_frf_equality_via_cross_multiplication():
    reg = frac_reg("L")
    L = reg.var("L")
    # (1-L^2)/(1-L) == (1+L) without cancelling first
    f = FactoredRatFunc.from_poly(reg.one() - L ** 2)
    f = f.with_denominator_factor((1,), 1)
    g = FactoredRatFunc.from_poly(reg.one() + L)
    assert f == g
    assert not (f == g * L)


# -- series operators --------------------------------------------------------


def rand_series(reg, size, order, seed, constant_identity=True):
    import random
    rng = random.Random(seed)
    a = SeriesOperator.identity(reg, size, order) if constant_identity \
        else SeriesOperator(reg, size, order)
    for d in range(1, order + 1):
        for i in range(size):
            for j in range(size):
                p = reg.zero()
                for _ in range(rng.randint(0, 2)):
                    e = tuple(rng.randint(-1, 1) for _ in reg.names)
                    p = p + LaurentPoly(reg, {e: Fraction(rng.randint(-4, 4))})
                a.coeff[d][i][j] = FactoredRatFunc.from_poly(p)
    return a


def test_series_inverse_neumann():
    reg = frac_reg("x")
    for seed in (1, 2, 3):
        a = rand_series(reg, 2, 3, seed)
        assert (a @ series_inverse(a)).is_identity()
        assert (series_inverse(a) @ a).is_identity()


def test_series_inverse_diagonal():
    reg = frac_reg("x")
    a = SeriesOperator(reg, 2, 2)
    x = reg.var("x")
    a.coeff[0][0][0] = FactoredRatFunc.from_poly(x)
    a.coeff[0][1][1] = FactoredRatFunc.from_poly(reg.one() - x)
    a.coeff[1][0][1] = FactoredRatFunc.from_poly(reg.const(3))
    inv = series_inverse(a)
    assert (a @ inv).is_identity()
    assert (inv @ a).is_identity()


def test_series_inverse_rejects_singular():
    reg = frac_reg("x")
    a = SeriesOperator(reg, 2, 1)
    a.coeff[0][0][1] = FactoredRatFunc.one(reg)
    a.coeff[0][1][0] = FactoredRatFunc.one(reg)
    with pytest.raises(ZeroDivisionError):
        series_inverse(a)


def test_series_zshift():
    ring = CycRing(3)
    reg = VarRegistry(("L",), ring)
    a = rand_series_cyc(reg, 2, 3)
    assert series_zshift(a, 0) == a
    assert series_zshift(a, 3) == a  # q^k = 1
    assert series_zshift(series_zshift(a, 1), 2) == series_zshift(a, 3)
    b = series_zshift(a, 1)
    q = ring.q_power(1)
    assert b.coeff[1][0][0] == a.coeff[1][0][0] * q
    assert b.coeff[2][1][1] == a.coeff[2][1][1] * (q * q)


def rand_series_cyc(reg, size, order):
    import random
    rng = random.Random(7)
    a = SeriesOperator.identity(reg, size, order)
    ring = reg.ring
    for d in range(1, order + 1):
        for i in range(size):
            for j in range(size):
                coeffs = [rng.randint(-3, 3) for _ in range(ring.k)]
                p = reg.mono(ring.elem(coeffs), {"L": rng.randint(-1, 1)})
                a.coeff[d][i][j] = FactoredRatFunc.from_poly(p)
    return a


def test_zshift_at_minus_one():
    ring = CycRing(2)
    reg = VarRegistry(("L",), ring)
    a = SeriesOperator.identity(reg, 1, 1)
    m = FactoredRatFunc.from_poly(reg.const(ring.from_int(5)))
    a.coeff[1][0][0] = m
    b = series_zshift(a, 1)
    # q = -1 in the nontrivial component at k=2
    from qadams.cyclotomic import crt_split
    (e, c), = b.coeff[1][0][0].num.terms.items()
    parts = crt_split(c)
    assert parts[2] == CycRing(2, 2).from_int(-5)


# -- text form ---------------------------------------------------------------


def test_text_round_trip_fraction():
    reg = frac_reg("a_1", "h", "x")
    samples = [
        reg.zero(),
        reg.one(),
        reg.var("a_1") - reg.var("x") * 2,
        reg.mono(Fraction(3, 2), {"h": -2, "a_1": 1}),
        (reg.one() - reg.var("x")) * (reg.one() + reg.var("h")),
    ]
    for p in samples:
        assert lp_from_text(reg, lp_to_text(p)) == p


def test_text_round_trip_cyc():
    ring = CycRing(3)
    reg = VarRegistry(("L", "a_1"), ring)
    samples = [
        reg.one() - reg.mono(ring.q_power(2), {"L": 1}),
        reg.mono(ring.elem([1, -1, 2]), {"a_1": -1}),
        reg.const(ring.elem([0, 1])),
    ]
    for p in samples:
        assert lp_from_text(reg, lp_to_text(p)) == p


def test_text_deterministic_ordering():
    reg = frac_reg("b", "a")
    p = reg.var("a") + reg.var("b")
    # lexicographic by variable name: a before b
    assert lp_to_text(p) == "a + b"
