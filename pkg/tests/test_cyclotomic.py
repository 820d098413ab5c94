import cmath
from fractions import Fraction
from math import inf

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qadams.cyclotomic import (
    CycRing,
    EisensteinElem,
    crt_join,
    crt_split,
    cyc_from_text,
    cyc_inv,
    cyc_to_text,
    cyclotomic_poly,
    divisors,
    eisenstein_modulus,
    poly_mul,
    poly_trim,
    w_valuation,
)


def test_cyclotomic_small():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)


def test_cyclotomic_product_identity():
    for k in range(1, 31):
        prod = [1]
        for d in divisors(k):
            prod = poly_mul(prod, list(cyclotomic_poly(d)))
        expected = [-1] + [0] * (k - 1) + [1]
        assert poly_trim(prod) == expected


def numeric(x):
    return x.substitute_root()


def test_component_arithmetic():
    r3 = CycRing(3, 3)
    q = r3.q_power(1)
    assert q * r3.q_power(2) == r3.one()
    prod = (r3.one() - q) * (r3.one() - q * q)
    assert prod == r3.from_int(3)
    # independent witness at the complex root
    z = cmath.exp(2j * cmath.pi / 3)
    assert abs((1 - z) * (1 - z ** 2) - 3) < 1e-12
    assert abs(numeric(prod) - 3) < 1e-12


def test_full_mode_zero_divisors():
    r2 = CycRing(2)
    q = r2.q_power(1)
    assert ((r2.one() + q) * (r2.one() - q)).is_zero()


def test_full_mode_integer_closure():
    r6 = CycRing(6)
    x = r6.elem([1, -2, 0, 5])
    y = r6.elem([3, 0, 0, 0, 1, 7])
    for e in (x + y, x * y, -x):
        assert all(c.denominator == 1 for c in e.coeffs)


def test_inverse_examples():
    r3 = CycRing(3, 3)
    q = r3.q_power(1)
    inv = cyc_inv(r3.one() - q)
    assert inv == (r3.one() - q * q) / 3
    assert inv * (r3.one() - q) == r3.one()

    r2 = CycRing(2, 2)
    assert cyc_inv(r2.one() - r2.q_power(1)) == r2.elem([Fraction(1, 2)])

    for k in (2, 3, 5, 8):
        rk = CycRing(k, k)
        for j in range(1, k):
            assert cyc_inv(rk.q_power(j)) == rk.q_power(k - j)


def test_inverse_rejected_in_full_mode():
    r4 = CycRing(4)
    with pytest.raises(ZeroDivisionError, match="CRT components"):
        (r4.one() + r4.q_power(1)).inv()


def test_crt_examples():
    r2 = CycRing(2)
    parts = crt_split(r2.one() + r2.q_power(1))
    assert parts[1] == CycRing(2, 1).from_int(2)
    assert parts[2].is_zero()

    r3 = CycRing(3)
    parts = crt_split(r3.q_power(1))
    assert parts[1] == CycRing(3, 1).one()
    assert parts[3] == CycRing(3, 3).q_power(1)

    for k in (2, 3, 4, 6):
        rk = CycRing(k)
        assert all(p == CycRing(k, m).one()
                   for m, p in crt_split(rk.one()).items())


@st.composite
def full_elem(draw, kmax=12):
    k = draw(st.integers(min_value=1, max_value=kmax))
    coeffs = draw(st.lists(st.integers(min_value=-9, max_value=9),
                           min_size=k, max_size=k))
    return CycRing(k).elem(coeffs)


@given(full_elem())
@settings(max_examples=60, deadline=None)
def test_crt_round_trip(x):
    assert crt_join(crt_split(x), x.ring.k) == x


@given(st.integers(min_value=1, max_value=10), st.data())
@settings(max_examples=40, deadline=None)
def test_crt_is_multiplicative(k, data):
    ring = CycRing(k)
    mk = st.lists(st.integers(min_value=-5, max_value=5),
                  min_size=k, max_size=k)
    x = ring.elem(data.draw(mk))
    y = ring.elem(data.draw(mk))
    sx, sy, sxy = crt_split(x), crt_split(y), crt_split(x * y)
    for m in divisors(k):
        assert sx[m] * sy[m] == sxy[m]


def test_eisenstein_modulus_shape():
    for p in (2, 3, 5, 7):
        mod = eisenstein_modulus(p)
        assert mod[0] == p and mod[-1] == 1 and len(mod) == p
        assert all(c % p == 0 for c in mod[:-1])


def test_valuation_of_p_is_p_minus_one():
    # norm identity: prod over nontrivial roots of (zeta^j - 1) equals p,
    # checked inside the ring, so v(p) = (p-1) * v(zeta - 1)
    for p in (3, 5, 7):
        rp = CycRing(p, p)
        prod = rp.one()
        for j in range(1, p):
            prod = prod * (rp.q_power(j) - rp.one())
        assert prod == rp.from_int(p) * rp.from_int((-1) ** (p - 1))
        assert w_valuation(EisensteinElem(p, [p])) == p - 1


def test_valuation_basics():
    for p in (2, 3, 5):
        assert w_valuation(EisensteinElem(p, [0, 1])) == 1
        assert w_valuation(EisensteinElem(p, [1])) == 0
        assert w_valuation(EisensteinElem(p, [])) == inf
    # p in the denominator pushes the valuation negative
    assert w_valuation(EisensteinElem(3, [Fraction(1, 3)])) == -2


@st.composite
def eis_elem(draw):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    coeffs = draw(st.lists(st.integers(min_value=-6, max_value=6),
                           min_size=1, max_size=p - 1 if p > 2 else 1))
    return EisensteinElem(p, coeffs)


@given(st.data())
@settings(max_examples=50, deadline=None)
def test_valuation_additive(data):
    x = data.draw(eis_elem())
    y = EisensteinElem(x.p, data.draw(
        st.lists(st.integers(min_value=-6, max_value=6),
                 min_size=1, max_size=max(x.p - 1, 1))))
    if not x or not y:
        return
    assert w_valuation(x * y) == w_valuation(x) + w_valuation(y)


def test_from_cyc_round():
    r3 = CycRing(3, 3)
    w = EisensteinElem.from_cyc(r3.q_power(1) - r3.one())
    assert w == EisensteinElem(3, [0, 1])
    three = EisensteinElem.from_cyc(
        (r3.q_power(1) - 1) * (r3.q_power(2) - 1))
    assert w_valuation(three) == 2


def test_text_round_trip():
    r3 = CycRing(3)
    samples = [
        r3.zero(),
        r3.one(),
        -r3.one(),
        r3.elem([1, -2, 1]),
        r3.elem([Fraction(3, 2), 0, -1]),
        r3.q_power(2),
    ]
    for x in samples:
        assert cyc_from_text(r3, cyc_to_text(x)) == x
    assert cyc_to_text(r3.elem([1, -2, 1])) == "1 - 2*q + q^2"
    assert cyc_to_text(r3.elem([0, 0, -1])) == "-q^2"
    assert cyc_to_text(r3.elem([Fraction(3, 2)])) == "3/2"
