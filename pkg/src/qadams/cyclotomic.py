"""Exact arithmetic in Z[q]/(q^k - 1) and its cyclotomic components.

The loop parameter q of order k lives in the full quotient ring
Z[q]/(q^k - 1), which has zero divisors.  All division is routed through
the Chinese-remainder decomposition into the component fields
Q[q]/Phi_m(q) for m | k; the component at m = k is the specialization of
q to a primitive k-th root of unity.  A separate Eisenstein presentation
Q[w]/(Phi_p(1 + w)), with w standing for (root of unity) - 1, supports
the (zeta - 1)-adic valuation used by the cohomological limit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import inf

# ---------------------------------------------------------------------------
# dense univariate polynomial helpers (ascending coefficient lists)
# ---------------------------------------------------------------------------


def poly_trim(p):
    """Drop trailing zeros; the zero polynomial is the empty list."""
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_add(p, q):
    n = max(len(p), len(q))
    return poly_trim([
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
        for i in range(n)
    ])


def poly_scale(p, c):
    return poly_trim([c * x for x in p])


def poly_mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly_trim(out)


def poly_divmod(p, d):
    """Quotient and remainder of p by d over the rationals."""
    d = poly_trim(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in p]
    r = poly_trim(r)
    quot = [Fraction(0)] * max(len(r) - len(d) + 1, 0)
    lead = Fraction(d[-1])
    while len(r) >= len(d):
        c = r[-1] / lead
        shift = len(r) - len(d)
        quot[shift] = c
        for i in range(len(d)):
            r[shift + i] -= c * d[i]
        r = poly_trim(r)
    return poly_trim(quot), r


def poly_mod(p, d):
    return poly_divmod(p, d)[1]


def _xmonomial(n):
    return [0] * n + [1]


@lru_cache(maxsize=None)
def cyclotomic_poly(m):
    """The m-th cyclotomic polynomial as an ascending integer tuple.

    Computed by exact division of q^m - 1 by the product of Phi_d over
    proper divisors d of m.

    >>> cyclotomic_poly(1)
    (-1, 1)
    >>> cyclotomic_poly(2)
    (1, 1)
    >>> cyclotomic_poly(6)
    (1, -1, 1)
    """
    if m < 1:
        raise ValueError("m must be positive")
    num = [-1] + [0] * (m - 1) + [1]
    den = [1]
    for d in range(1, m):
        if m % d == 0:
            den = poly_mul(den, list(cyclotomic_poly(d)))
    quot, rem = poly_divmod(num, den)
    assert not rem, "cyclotomic division must be exact"
    return tuple(int(c) for c in quot)


def divisors(k):
    return [d for d in range(1, k + 1) if k % d == 0]


# ---------------------------------------------------------------------------
# the quotient rings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CycRing:
    """Either Z[q]/(q^k - 1) ('full') or the field Q[q]/Phi_m(q) for m | k."""

    k: int
    m: int | None = None  # None selects full mode

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.m is not None and (self.m < 1 or self.k % self.m != 0):
            raise ValueError("component index must divide k")

    @property
    def mode(self):
        return "full" if self.m is None else "component"

    @property
    def modulus(self):
        if self.m is None:
            return tuple([-1] + [0] * (self.k - 1) + [1])
        return cyclotomic_poly(self.m)

    @property
    def degree(self):
        return len(self.modulus) - 1

    def component(self, m):
        return CycRing(self.k, m)

    # -- element constructors ------------------------------------------------

    def elem(self, coeffs):
        mod = list(self.modulus)
        red = poly_mod([Fraction(c) for c in coeffs], mod)
        vec = [Fraction(0)] * self.degree
        for i, c in enumerate(red):
            vec[i] = c
        return CycElem(self, tuple(vec))

    def zero(self):
        return self.elem([])

    def one(self):
        return self.elem([1])

    def from_int(self, n):
        return self.elem([n])

    def q_power(self, j):
        """The class of q^j, with negative j meaning q^{k-(-j mod k)}."""
        return self.elem(_xmonomial(j % self.k))


class CycElem:
    """Residue class modulo the ring modulus, stored as the unique reduced
    coefficient vector of length deg(modulus)."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = coeffs

    def _check(self, other):
        if not isinstance(other, CycElem):
            if isinstance(other, (int, Fraction)):
                return self.ring.from_int(other) if isinstance(other, int) \
                    else self.ring.elem([other])
            return NotImplemented
        if other.ring != self.ring:
            raise ValueError("ring mismatch: %r vs %r" % (self.ring, other.ring))
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ring.elem(poly_add(list(self.coeffs), list(other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return self.ring.elem([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ring.elem(poly_mul(list(self.coeffs), list(other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._check(other)
        if not isinstance(other, CycElem):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __bool__(self):
        return any(c != 0 for c in self.coeffs)

    def is_zero(self):
        return not self

    def inv(self):
        """Multiplicative inverse, component mode only.

        The full ring has zero divisors, so inversion there is refused
        with a pointer at the component decomposition.
        """
        if self.ring.mode == "full":
            raise ZeroDivisionError(
                "no division in the full quotient ring; use CRT components")
        if not self:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid over Q[q] against the (irreducible) modulus
        mod = [Fraction(c) for c in self.ring.modulus]
        a, b = list(self.coeffs), mod
        s0, s1 = [Fraction(1)], []
        a = poly_trim(a)
        while b:
            quot, rem = poly_divmod(a, b)
            a, b = b, rem
            s0, s1 = s1, poly_add(s0, poly_scale(poly_mul(quot, s1), -1))
        # a is now gcd (a nonzero constant, modulus being irreducible)
        assert len(a) == 1
        return self.ring.elem(poly_scale(s0, Fraction(1) / a[0]))

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def substitute_root(self):
        """Numeric value at q = exp(2*pi*i*m/k) (full mode: m = k).

        Test helper only; the library itself never leaves exact arithmetic.
        """
        import cmath
        m = self.ring.m if self.ring.m is not None else self.ring.k
        z = cmath.exp(2j * cmath.pi / m) if m > 1 else 1.0
        return sum(complex(c) * z ** i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        return "CycElem(%s)" % cyc_to_text(self)


def cyc_arith(op, x, y=None):
    """Dispatch basic ring operations by name: add, mul, neg."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError("unknown operation %r" % (op,))


def cyc_inv(x):
    return x.inv()


# ---------------------------------------------------------------------------
# CRT decomposition of the full ring
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _crt_idempotents(k):
    """For each m | k the element e_m in Q[q]/(q^k - 1) that is 1 in the
    m-component and 0 elsewhere."""
    full = CycRing(k)
    mod = list(full.modulus)
    out = {}
    for m in divisors(k):
        phi = [Fraction(c) for c in cyclotomic_poly(m)]
        cof, rem = poly_divmod(mod, phi)
        assert not rem
        # invert the cofactor mod Phi_m by extended Euclid
        a, b = poly_mod(cof, phi), phi
        s0, s1 = [Fraction(1)], []
        while b:
            quot, r = poly_divmod(a, b)
            a, b = b, r
            s0, s1 = s1, poly_add(s0, poly_scale(poly_mul(quot, s1), -1))
        assert len(a) == 1
        u = poly_scale(s0, Fraction(1) / a[0])
        out[m] = full.elem(poly_mul(u, cof))
    return out


def crt_split(x):
    """Send a full-mode element to its tuple of component reductions."""
    if x.ring.mode != "full":
        raise ValueError("crt_split expects a full-mode element")
    k = x.ring.k
    return {
        m: CycRing(k, m).elem(x.coeffs)
        for m in divisors(k)
    }


def crt_join(parts, k=None):
    """Inverse of crt_split; reconstructs the full-mode element."""
    if k is None:
        k = next(iter(parts.values())).ring.k
    idem = _crt_idempotents(k)
    full = CycRing(k)
    total = full.zero()
    for m, xm in parts.items():
        if xm.ring != CycRing(k, m):
            raise ValueError("component at m=%d carries the wrong ring" % m)
        total = total + full.elem(xm.coeffs) * idem[m]
    return total


# ---------------------------------------------------------------------------
# Eisenstein presentation at w = zeta - 1 and the w-adic valuation
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def eisenstein_modulus(p):
    """Phi_p(1 + w) as an ascending integer tuple: Eisenstein at p."""
    phi = list(cyclotomic_poly(p))
    shifted = []
    for i, c in enumerate(phi):
        term = [c]
        for _ in range(i):
            term = poly_mul(term, [1, 1])
        shifted = poly_add(shifted, term)
    out = tuple(int(c) for c in shifted)
    assert out[0] == p and out[-1] == 1
    return out


class EisensteinElem:
    """Element of Q[w]/(Phi_p(1 + w)) with w standing for zeta - 1."""

    __slots__ = ("p", "digits")

    def __init__(self, p, digits):
        self.p = p
        mod = list(eisenstein_modulus(p))
        red = poly_mod([Fraction(c) for c in digits], mod)
        vec = [Fraction(0)] * (p - 1)
        for i, c in enumerate(red):
            vec[i] = c
        self.digits = tuple(vec)

    @classmethod
    def from_cyc(cls, x):
        """Rewrite a Q[q]/Phi_p(q) element in the variable w = q - 1."""
        ring = x.ring
        if ring.mode != "component":
            raise ValueError("expected a component-mode element")
        p = ring.m
        acc = []
        for i, c in enumerate(x.coeffs):
            term = [c]
            for _ in range(i):
                term = poly_mul(term, [1, 1])  # q = 1 + w
            acc = poly_add(acc, term)
        return cls(p, acc)

    def __add__(self, other):
        if isinstance(other, int):
            other = EisensteinElem(self.p, [other])
        if self.p != other.p:
            raise ValueError("mixed primes")
        return EisensteinElem(self.p, poly_add(list(self.digits),
                                               list(other.digits)))

    def __neg__(self):
        return EisensteinElem(self.p, [-c for c in self.digits])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            other = EisensteinElem(self.p, [other])
        if self.p != other.p:
            raise ValueError("mixed primes")
        return EisensteinElem(self.p, poly_mul(list(self.digits),
                                               list(other.digits)))

    def __eq__(self, other):
        return (isinstance(other, EisensteinElem)
                and self.p == other.p and self.digits == other.digits)

    def __hash__(self):
        return hash((self.p, self.digits))

    def __bool__(self):
        return any(c != 0 for c in self.digits)

    def __repr__(self):
        return "EisensteinElem(p=%d, %r)" % (self.p, list(self.digits))


def w_valuation(x, depth=64):
    """(zeta - 1)-adic valuation of an Eisenstein element.

    Works in the w-adic completion: digits are carried through the
    identity p = -(higher terms of Phi_p(1 + w)) rather than reduced
    back modulo the minimal polynomial, which is what makes e.g.
    v(p) = p - 1 visible.  `depth` bounds the carry propagation; any
    exact nonzero input of valuation < depth terminates well before it.
    """
    if not x:
        return inf
    p = x.p
    # clear p from denominators first so every digit is p-integral
    shift = 0
    for c in x.digits:
        d = c.denominator
        t = 0
        while d % p == 0:
            d //= p
            t += 1
        shift = max(shift, t)
    work = [c * p ** shift for c in x.digits]
    offset = -shift * (p - 1)  # v(p) = p - 1 per cleared power
    mod = eisenstein_modulus(p)
    val = 0
    for _ in range(depth):
        while work and work[0] == 0:
            work.pop(0)
            val += 1
        if not work:
            # every digit was consumed or truncated away
            return depth + offset
        c0 = work[0]
        num = c0.numerator
        if num % p != 0:
            return val + offset
        # c0 is divisible by p: rewrite p as its w-expansion and carry
        u = c0 / p
        work[0] = Fraction(0)
        for i in range(1, p):
            while len(work) <= i:
                work.append(Fraction(0))
            work[i] -= u * mod[i]
        del work[depth + p:]
    return depth + offset


# ---------------------------------------------------------------------------
# canonical text form
# ---------------------------------------------------------------------------


def _fmt_coeff(c):
    if c.denominator == 1:
        return str(c.numerator)
    return "%d/%d" % (c.numerator, c.denominator)


def poly_to_text(coeffs, var="q"):
    """Ascending-power rendering, e.g. '1 - 2*q + q^2'."""
    terms = []
    for i, c in enumerate(coeffs):
        c = Fraction(c)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = var if i == 1 else "%s^%d" % (var, i)
        else:
            body = "%s*%s" % (_fmt_coeff(mag), var)
            if i > 1:
                body += "^%d" % i
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += " %s %s" % (sign, body)
    return out


_TERM_RE = re.compile(
    r"^(?P<coeff>\d+(?:/\d+)?)?(?:(?<=\d)\*)?(?P<var>[A-Za-z_][A-Za-z_0-9]*)?"
    r"(?:\^(?P<exp>\d+))?$")


def poly_from_text(text, var="q"):
    """Parse the canonical text form back to an ascending Fraction list."""
    s = text.strip()
    if s == "0":
        return []
    s = s.replace("-", "+-")
    chunks = [c.strip() for c in s.split("+") if c.strip()]
    coeffs = {}
    for chunk in chunks:
        neg = chunk.startswith("-")
        if neg:
            chunk = chunk[1:].strip()
        m = _TERM_RE.match(chunk.replace(" ", ""))
        if not m or (m.group("coeff") is None and m.group("var") is None):
            raise ValueError("cannot parse term %r" % chunk)
        if m.group("var") not in (None, var):
            raise ValueError("unexpected variable %r" % m.group("var"))
        c = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
        if m.group("exp") is not None:
            e = int(m.group("exp"))
        else:
            e = 1 if m.group("var") else 0
        coeffs[e] = coeffs.get(e, Fraction(0)) + (-c if neg else c)
    n = max(coeffs) + 1
    return poly_trim([coeffs.get(i, Fraction(0)) for i in range(n)])


def cyc_to_text(x):
    return poly_to_text(x.coeffs)


def cyc_from_text(ring, text):
    return ring.elem(poly_from_text(text))
