"""Multivariate Laurent polynomials, factored rational functions and
truncated operator series over exact scalars.

Scalars are either Fraction (with q, if needed, as an ordinary variable)
or CycElem from a fixed quotient ring.  Division never goes through a
general multivariate gcd: denominators are kept as multisets of binomial
factors (1 - monomial), and cancellation is a sequence of exact-division
probes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import CycElem, CycRing


class ExactDivisionError(ArithmeticError):
    pass


class NormalizationError(ArithmeticError):
    """An identity that must hold symbolically failed to normalize."""


# ---------------------------------------------------------------------------
# scalar helpers: Fraction or CycElem, chosen per registry
# ---------------------------------------------------------------------------


def _is_zero(c):
    if isinstance(c, CycElem):
        return c.is_zero()
    return c == 0


def _coeff_inv(c):
    """Invert a scalar; in the full quotient ring only unit monomials
    (plus or minus a power of q) can be inverted."""
    if isinstance(c, Fraction):
        return Fraction(1) / c
    if isinstance(c, int):
        return Fraction(1, c)
    if not isinstance(c, CycElem):
        raise TypeError("cannot invert %r" % (c,))
    if c.ring.mode == "component":
        return c.inv()
    nz = [(i, v) for i, v in enumerate(c.coeffs) if v != 0]
    if len(nz) == 1 and abs(nz[0][1]) == 1:
        j, v = nz[0]
        k = c.ring.k
        return c.ring.q_power((-j) % k) * c.ring.from_int(1 if v > 0 else -1)
    raise ZeroDivisionError(
        "not a unit in the full quotient ring; use CRT components")


# ---------------------------------------------------------------------------
# variable registry and Laurent polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VarRegistry:
    """Ordered variable names plus the scalar domain.

    ring=None means Fraction scalars; otherwise scalars live in the given
    CycRing.  The quantum parameter hbar never appears by name: h is a
    genuine variable and hbar = h^2, which keeps half-integer powers of
    hbar representable.
    """

    names: tuple
    ring: object = None  # CycRing or None

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        if "hbar" in self.names:
            raise ValueError("use h with hbar = h^2")

    def index(self, name):
        return self.names.index(name)

    def scalar(self, c):
        if self.ring is None:
            return Fraction(c) if not isinstance(c, Fraction) else c
        if isinstance(c, CycElem):
            if c.ring != self.ring:
                raise ValueError("scalar from the wrong ring")
            return c
        return self.ring.elem([c])

    def zero(self):
        return LaurentPoly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.scalar(c)
        if _is_zero(c):
            return LaurentPoly(self, {})
        return LaurentPoly(self, {(0,) * len(self.names): c})

    def var(self, name, power=1):
        return self.mono(1, {name: power})

    def mono(self, coeff, exps):
        """coeff * prod(var^e); exps is a name->exponent mapping."""
        coeff = self.scalar(coeff)
        if _is_zero(coeff):
            return LaurentPoly(self, {})
        vec = [0] * len(self.names)
        for name, e in exps.items():
            vec[self.index(name)] = e
        return LaurentPoly(self, {tuple(vec): coeff})

    def extend(self, *extra):
        return VarRegistry(self.names + tuple(extra), self.ring)


class LaurentPoly:
    """Map from integer exponent tuples to nonzero scalar coefficients."""

    __slots__ = ("reg", "terms")

    def __init__(self, reg, terms):
        self.reg = reg
        self.terms = {e: c for e, c in terms.items() if not _is_zero(c)}

    def is_zero(self):
        return not self.terms

    def is_one(self):
        if len(self.terms) != 1:
            return False
        e, c = next(iter(self.terms.items()))
        return all(x == 0 for x in e) and c == self.reg.scalar(1)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            if other.reg != self.reg:
                raise ValueError("registry mismatch")
            return other
        if isinstance(other, (int, Fraction, CycElem)):
            return self.reg.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            out[e] = c if s is None else s + c
        return LaurentPoly(self.reg, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.reg, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                out[e] = c if s is None else s + c
        return LaurentPoly(self.reg, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            inv = self.mono_inv()
            return inv ** (-n)
        out = self.reg.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def mono_inv(self):
        """Inverse of a single-term polynomial."""
        if len(self.terms) != 1:
            raise ExactDivisionError("only monomials invert directly")
        (e, c), = self.terms.items()
        return LaurentPoly(self.reg,
                           {tuple(-x for x in e): _coeff_inv(c)})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.reg, frozenset(self.terms.items())))

    def coefficient_of(self, name, power):
        """Collect the coefficient of name^power as a polynomial in the
        remaining variables (exponent of name forced to zero)."""
        i = self.reg.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i] == power:
                e2 = e[:i] + (0,) + e[i + 1:]
                s = out.get(e2)
                out[e2] = c if s is None else s + c
        return LaurentPoly(self.reg, out)

    def degrees_of(self, name):
        i = self.reg.index(name)
        return sorted({e[i] for e in self.terms})

    def __repr__(self):
        return "LaurentPoly(%s)" % lp_to_text(self)


def lp_substitute(p, name, replacement):
    """Substitute a single-term Laurent polynomial for a variable.

    Homomorphic; negative powers of the variable require the replacement
    monomial to be invertible.
    """
    reg = p.reg
    i = reg.index(name)
    if isinstance(replacement, (int, Fraction, CycElem)):
        replacement = reg.const(replacement)
    if replacement.reg != reg:
        raise ValueError("replacement lives in the wrong registry")
    if len(replacement.terms) != 1:
        raise ValueError("replacement must be a single term")
    powers = {}

    def rep_power(e):
        cached = powers.get(e)
        if cached is None:
            cached = replacement ** e if e >= 0 \
                else replacement.mono_inv() ** (-e)
            powers[e] = cached
        return cached

    out = reg.zero()
    for e, c in p.terms.items():
        rest = LaurentPoly(reg, {e[:i] + (0,) + e[i + 1:]: c})
        out = out + rest * rep_power(e[i])
    return out


def lp_project(p, target):
    """Re-express p in a different registry carrying (at least) every
    variable that actually occurs in p."""
    src = p.reg.names
    missing = []
    for j, name in enumerate(src):
        if name not in target.names:
            if any(e[j] != 0 for e in p.terms):
                raise ValueError("variable %s cannot be dropped" % name)
            missing.append(j)
    out = {}
    for e, c in p.terms.items():
        vec = [0] * len(target.names)
        for j, name in enumerate(src):
            if name in target.names:
                vec[target.index(name)] = e[j]
        if isinstance(c, CycElem) and target.ring is None:
            raise ValueError("cannot project ring scalars to Fraction")
        key = tuple(vec)
        s = out.get(key)
        out[key] = c if s is None else s + c
    return LaurentPoly(target, out)


def lp_evaluate(p, values):
    """Evaluate at scalar values (test helper; Fraction registries)."""
    total = p.reg.scalar(0)
    for e, c in p.terms.items():
        term = c
        for j, name in enumerate(p.reg.names):
            if e[j] == 0:
                continue
            v = values[name]
            term = term * (v ** e[j] if e[j] > 0 else
                           Fraction(1) / (v ** (-e[j])))
        total = total + term
    return total


# ---------------------------------------------------------------------------
# exact multivariate division
# ---------------------------------------------------------------------------


def _strip_content(p):
    """Factor out the per-variable minimum exponent; returns (shift, poly)
    with every variable's minimum exponent zero."""
    if not p.terms:
        return (0,) * len(p.reg.names), p
    nvars = len(p.reg.names)
    mins = [min(e[j] for e in p.terms) for j in range(nvars)]
    if all(m == 0 for m in mins):
        return tuple(mins), p
    shifted = {tuple(x - m for x, m in zip(e, mins)): c
               for e, c in p.terms.items()}
    return tuple(mins), LaurentPoly(p.reg, shifted)


def lp_exact_div(num, den):
    """Exact quotient num/den of Laurent polynomials.

    Monomial content is stripped first, then ordinary top-down division
    runs under lex order; any leftover remainder raises.  Correct over
    the full quotient ring as long as the divisor's leading coefficient
    is a unit, which holds for all binomial factors used here.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return num
    if num.reg != den.reg:
        raise ValueError("registry mismatch")
    sn, num = _strip_content(num)
    sd, den = _strip_content(den)
    lead_d = max(den.terms)
    inv_lc = _coeff_inv(den.terms[lead_d])
    rem = dict(num.terms)
    quot = {}
    while rem:
        lead_r = max(rem)
        diff = tuple(a - b for a, b in zip(lead_r, lead_d))
        if any(x < 0 for x in diff):
            raise ExactDivisionError("no exact quotient")
        c = rem[lead_r] * inv_lc
        quot[diff] = c
        for e, dc in den.terms.items():
            key = tuple(a + b for a, b in zip(diff, e))
            s = rem.get(key, None)
            v = (0 if s is None else s) - c * dc
            if _is_zero(v):
                rem.pop(key, None)
            else:
                rem[key] = v
    shift = tuple(a - b for a, b in zip(sn, sd))
    return LaurentPoly(num.reg,
                       {tuple(a + b for a, b in zip(e, shift)): c
                        for e, c in quot.items()})


# ---------------------------------------------------------------------------
# symmetric-function pushforwards
# ---------------------------------------------------------------------------


def complete_homogeneous(m, weights):
    """h_m of a multiset of single-term Laurent polynomials.

    Row recursion h_m(w_1..w_j) = h_m(w_1..w_{j-1}) + w_j*h_{m-1}(w_1..w_j).
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    weights = list(weights)
    if not weights:
        raise ValueError("empty weight multiset")
    reg = weights[0].reg
    row = [reg.one()] + [reg.zero()] * m  # h_* of the empty prefix: h_0 = 1
    for w in weights:
        if len(w.terms) != 1:
            raise ValueError("weights must be monomials")
        for d in range(1, m + 1):
            row[d] = row[d] + w * row[d - 1]
    return row[m]


def chi_projective(dual_weights, cls, var="L"):
    """Euler characteristic pushforward from the projective space of a
    direct sum of weight lines, applied power-by-power in the tautological
    variable.

    For N weights: power m >= 0 contributes h_m(dual weights), the window
    1-N <= m <= -1 contributes zero, and m <= -N contributes the dual
    value (-1)^(N-1) * (prod w_i^{-1}) * h_{-m-N}(inverse weights).  The
    negative tail is pinned against the refined fixed-point oracle.
    """
    weights = list(dual_weights)
    if not weights:
        raise ValueError("empty weight multiset")
    n = len(weights)
    reg = cls.reg
    inv_weights = [w.mono_inv() for w in weights]
    inv_prod = reg.one()
    for w in inv_weights:
        inv_prod = inv_prod * w
    sign = reg.const((-1) ** (n - 1))
    out = reg.zero()
    for m in cls.degrees_of(var):
        coeff = cls.coefficient_of(var, m)
        if coeff.is_zero():
            continue
        if m >= 0:
            out = out + coeff * complete_homogeneous(m, weights)
        elif m >= 1 - n:
            continue
        else:
            out = out + coeff * sign * inv_prod * \
                complete_homogeneous(-m - n, inv_weights)
    return FactoredRatFunc.from_poly(out)


def chi_oracle_refined(dual_weights, cls, var="L"):
    """Independent check of chi_projective by the isolated-fixed-point sum.

    Each weight w_i is refined to w_i * u^i for a fresh symbol u, the sum
    over fixed points is normalized over the common Vandermonde
    denominator (assembled term-by-term from its Leibniz expansion), the
    quotient is extracted by one exact division, and u is set back to 1.
    A failed division means a genuine bug, not bad input.
    """
    weights = list(dual_weights)
    if not weights:
        raise ValueError("empty weight multiset")
    n = len(weights)
    base = cls.reg
    fresh = "u"
    while fresh in base.names:
        fresh += "u"
    ext = base.extend(fresh)
    cls_e = lp_project(cls, ext)
    refined = [lp_project(w, ext) * ext.var(fresh, i + 1)
               for i, w in enumerate(weights)]

    def vandermonde(ws):
        # Leibniz expansion of det(ws[i]^j): n! monomials, heavy collision
        nn = len(ws)
        pw = []
        for w in ws:
            col = [ext.one()]
            for _ in range(1, nn):
                col.append(col[-1] * w)
            pw.append(col)
        out = ext.zero()
        for perm, sgn in _permutations_signed(nn):
            term = ext.const(sgn)
            for i, p in enumerate(perm):
                term = term * pw[i][p]
            out = out + term
        return out

    total = ext.zero()
    vand = vandermonde(refined)
    for i in range(n):
        others = refined[:i] + refined[i + 1:]
        cofactor = vandermonde(others) if others else ext.one()
        value = lp_substitute(cls_e, var, refined[i])
        term = value * refined[i] ** (n - 1) * cofactor
        # 1/prod_{j != i}(w_i - w_j) = (-1)^(n-1-i) * cofactor / vand
        if (n - 1 - i) % 2 == 1:
            term = -term
        total = total + term
    try:
        quot = lp_exact_div(total, vand)
    except ExactDivisionError as exc:
        raise NormalizationError(
            "fixed-point sum did not normalize to a character") from exc
    at_one = lp_substitute(quot, fresh, ext.one())
    return FactoredRatFunc.from_poly(lp_project(at_one, base))


def _permutations_signed(n):
    """(permutation of range(n), sign) pairs by adjacent-insertion."""
    perms = [((), 1)]
    for m in range(n):
        nxt = []
        for perm, sgn in perms:
            for pos in range(m + 1):
                s = sgn if (m - pos) % 2 == 0 else -sgn
                nxt.append((perm[:pos] + (m,) + perm[pos:], s))
        perms = nxt
    return perms


# ---------------------------------------------------------------------------
# factored rational functions
# ---------------------------------------------------------------------------


class Binomial:
    """Normal form of a factor (1 - coeff * monomial).

    The exponent vector is normalized lex-positive (first nonzero entry
    positive) by the unit rewrite 1 - c*m = (-c*m) * (1 - c^{-1} m^{-1});
    the discarded unit is returned alongside.  A zero exponent vector is
    allowed: that is a scalar factor 1 - c, kept formal because c may be
    a zero divisor in the full quotient ring.
    """

    __slots__ = ("exps", "coeff")

    def __init__(self, exps, coeff):
        self.exps = tuple(exps)
        self.coeff = coeff

    @classmethod
    def normalized(cls, reg, exps, coeff):
        """Returns (binomial, unit LaurentPoly) with factor = unit * binomial."""
        exps = tuple(exps)
        coeff = reg.scalar(coeff)
        if _is_zero(coeff):
            raise ValueError("binomial with zero coefficient is just 1")
        first = next((x for x in exps if x != 0), 0)
        if first >= 0:
            return cls(exps, coeff), reg.one()
        inv = _coeff_inv(coeff)
        flipped = tuple(-x for x in exps)
        unit = LaurentPoly(reg, {exps: -coeff})
        return cls(flipped, inv), unit

    def key(self):
        c = self.coeff
        ckey = (c.ring, c.coeffs) if isinstance(c, CycElem) else c
        return (self.exps, ckey)

    def to_poly(self, reg):
        one = (0,) * len(reg.names)
        terms = {one: reg.scalar(1)}
        if self.exps == one:
            terms[one] = terms[one] - self.coeff
            return LaurentPoly(reg, terms)
        terms[self.exps] = -self.coeff
        return LaurentPoly(reg, terms)

    def __repr__(self):
        return "Binomial(exps=%r, coeff=%r)" % (self.exps, self.coeff)


class FactoredRatFunc:
    """unit * numerator / prod(binomial^multiplicity)."""

    __slots__ = ("reg", "unit", "num", "den")

    def __init__(self, reg, unit, num, den):
        self.reg = reg
        self.unit = unit           # single-term LaurentPoly
        self.num = num             # LaurentPoly
        self.den = dict(den)       # key -> (Binomial, multiplicity)

    @classmethod
    def from_poly(cls, p):
        return cls(p.reg, p.reg.one(), p, {})

    @classmethod
    def zero(cls, reg):
        return cls.from_poly(reg.zero())

    @classmethod
    def one(cls, reg):
        return cls.from_poly(reg.one())

    def with_denominator_factor(self, exps, coeff, mult=1):
        """Divide by (1 - coeff*x^exps)^mult, normalizing the factor."""
        b, unit = Binomial.normalized(self.reg, exps, coeff)
        den = dict(self.den)
        k = b.key()
        old = den.get(k)
        den[k] = (b, mult + (old[1] if old else 0))
        new_unit = self.unit
        if not unit.is_one():
            new_unit = new_unit * (unit.mono_inv() ** mult)
        return FactoredRatFunc(self.reg, new_unit, self.num, den)

    def is_zero(self):
        return self.num.is_zero() or self.unit.is_zero()

    def den_poly(self):
        out = self.reg.one()
        for b, m in self.den.values():
            out = out * b.to_poly(self.reg) ** m
        return out

    def as_poly(self):
        """Collapse to a LaurentPoly; requires an empty denominator after
        cancellation."""
        f = self.cancel()
        if f.den:
            raise ExactDivisionError("denominator did not clear")
        return f.unit * f.num

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycElem, LaurentPoly)):
            other = FactoredRatFunc.from_poly(
                self.reg.const(other) if not isinstance(other, LaurentPoly)
                else other)
        if other.reg != self.reg:
            raise ValueError("registry mismatch")
        den = dict(self.den)
        for k, (b, m) in other.den.items():
            old = den.get(k)
            den[k] = (b, m + (old[1] if old else 0))
        return FactoredRatFunc(self.reg, self.unit * other.unit,
                               self.num * other.num, den)

    __rmul__ = __mul__

    def __neg__(self):
        return FactoredRatFunc(self.reg, self.unit, -self.num, self.den)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycElem, LaurentPoly)):
            other = FactoredRatFunc.from_poly(
                self.reg.const(other) if not isinstance(other, LaurentPoly)
                else other)
        if other.reg != self.reg:
            raise ValueError("registry mismatch")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        den = {}
        for k, (b, m) in self.den.items():
            den[k] = (b, m)
        for k, (b, m) in other.den.items():
            old = den.get(k)
            den[k] = (b, max(m, old[1]) if old else m)
        a = self.unit * self.num
        bnum = other.unit * other.num
        for k, (b, m) in den.items():
            ma = m - (self.den[k][1] if k in self.den else 0)
            mb = m - (other.den[k][1] if k in other.den else 0)
            pb = b.to_poly(self.reg)
            if ma:
                a = a * pb ** ma
            if mb:
                bnum = bnum * pb ** mb
        return FactoredRatFunc(self.reg, self.reg.one(), a + bnum, den)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycElem, LaurentPoly)):
            other = FactoredRatFunc.from_poly(
                self.reg.const(other) if not isinstance(other, LaurentPoly)
                else other)
        return self + (-other)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CycElem, LaurentPoly)):
            other = FactoredRatFunc.from_poly(
                self.reg.const(other) if not isinstance(other, LaurentPoly)
                else other)
        if not isinstance(other, FactoredRatFunc):
            return NotImplemented
        left = self.unit * self.num * other.den_poly()
        right = other.unit * other.num * self.den_poly()
        return left == right

    def __hash__(self):
        raise TypeError("unhashable; compare with ==")

    def cancel(self):
        """Clear every denominator factor that divides the numerator
        exactly; scalar factors clear whenever the scalar is invertible."""
        num = self.num
        unit = self.unit
        den = {}
        for k, (b, m) in self.den.items():
            poly = b.to_poly(self.reg)
            if all(x == 0 for x in b.exps):
                # scalar factor 1 - c
                try:
                    c = _coeff_inv(self.reg.scalar(1) - b.coeff)
                    num = num * self.reg.const(c) ** m
                    continue
                except (ZeroDivisionError, ExactDivisionError):
                    den[k] = (b, m)
                    continue
            while m > 0:
                try:
                    num = lp_exact_div(num, poly)
                    m -= 1
                except ExactDivisionError:
                    break
            if m > 0:
                den[k] = (b, m)
        # fold the unit's content into a clean monomial
        return FactoredRatFunc(self.reg, unit, num, den)

    def reciprocal(self):
        """1/self; the numerator must be a monomial or a binomial."""
        f = self
        terms = dict(f.num.terms)
        if not terms:
            raise ZeroDivisionError("reciprocal of zero")
        new_num = self.reg.one()
        for b, m in f.den.values():
            new_num = new_num * b.to_poly(self.reg) ** m
        unit = f.unit.mono_inv()
        if len(terms) == 1:
            (e, c), = terms.items()
            unit = unit * LaurentPoly(self.reg,
                                      {tuple(-x for x in e): _coeff_inv(c)})
            return FactoredRatFunc(self.reg, unit, new_num, {})
        if len(terms) == 2:
            items = sorted(terms.items())
            (e0, c0), (e1, c1) = items
            # num = c0 x^e0 (1 - (-c1/c0) x^(e1-e0))
            unit = unit * LaurentPoly(
                self.reg, {tuple(-x for x in e0): _coeff_inv(c0)})
            rel = tuple(a - b for a, b in zip(e1, e0))
            coeff = -(c1 * _coeff_inv(c0))
            b, u = Binomial.normalized(self.reg, rel, coeff)
            out = FactoredRatFunc(self.reg, unit, new_num, {})
            out = out.with_denominator_factor(b.exps, b.coeff)
            if not u.is_one():
                out = FactoredRatFunc(out.reg, out.unit * u.mono_inv(),
                                      out.num, out.den)
            return out
        raise ExactDivisionError(
            "reciprocal needs a monomial or binomial numerator")

    def substitute(self, name, replacement):
        num = lp_substitute(self.num, name, replacement)
        unit = lp_substitute(self.unit, name, replacement)
        out = FactoredRatFunc(self.reg, unit, num, {})
        for b, m in self.den.values():
            p = lp_substitute(b.to_poly(self.reg), name, replacement)
            one = self.reg.one()
            diff = one - p
            if diff.is_zero():
                raise ZeroDivisionError("substitution kills a denominator")
            if len(diff.terms) != 1:
                raise ValueError("substitution breaks binomial shape")
            (e, c), = diff.terms.items()
            bb, u = Binomial.normalized(self.reg, e, c)
            out = out.with_denominator_factor(bb.exps, bb.coeff, m)
            if not u.is_one():
                out = FactoredRatFunc(out.reg, out.unit * u.mono_inv() ** m,
                                      out.num, out.den)
        return out

    def __repr__(self):
        return "FactoredRatFunc(%s)" % frf_to_text(self)


# ---------------------------------------------------------------------------
# truncated operator series in the Novikov variable
# ---------------------------------------------------------------------------


class SeriesOperator:
    """Square-matrix series sum_d z^d coeff[d], truncated at order D."""

    __slots__ = ("reg", "size", "order", "coeff")

    def __init__(self, reg, size, order, coeff=None):
        self.reg = reg
        self.size = size
        self.order = order
        if coeff is None:
            coeff = [
                [[FactoredRatFunc.zero(reg) for _ in range(size)]
                 for _ in range(size)]
                for _ in range(order + 1)
            ]
        self.coeff = coeff

    @classmethod
    def identity(cls, reg, size, order):
        out = cls(reg, size, order)
        for i in range(size):
            out.coeff[0][i][i] = FactoredRatFunc.one(reg)
        return out

    def copy(self):
        return SeriesOperator(
            self.reg, self.size, self.order,
            [[[self.coeff[d][i][j] for j in range(self.size)]
              for i in range(self.size)] for d in range(self.order + 1)])

    def __matmul__(self, other):
        if (other.reg, other.size) != (self.reg, self.size):
            raise ValueError("operator shape mismatch")
        order = min(self.order, other.order)
        out = SeriesOperator(self.reg, self.size, order)
        for d in range(order + 1):
            for e in range(d + 1):
                a, b = self.coeff[e], other.coeff[d - e]
                for i in range(self.size):
                    for j in range(self.size):
                        acc = out.coeff[d][i][j]
                        for l in range(self.size):
                            if a[i][l].is_zero() or b[l][j].is_zero():
                                continue
                            acc = acc + a[i][l] * b[l][j]
                        out.coeff[d][i][j] = acc
        return out

    def __add__(self, other):
        if (other.reg, other.size) != (self.reg, self.size):
            raise ValueError("operator shape mismatch")
        order = min(self.order, other.order)
        out = SeriesOperator(self.reg, self.size, order)
        for d in range(order + 1):
            for i in range(self.size):
                for j in range(self.size):
                    out.coeff[d][i][j] = \
                        self.coeff[d][i][j] + other.coeff[d][i][j]
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        out = self.copy()
        for d in range(self.order + 1):
            for i in range(self.size):
                for j in range(self.size):
                    out.coeff[d][i][j] = out.coeff[d][i][j] * c
        return out

    def map_entries(self, fn):
        out = self.copy()
        for d in range(self.order + 1):
            for i in range(self.size):
                for j in range(self.size):
                    out.coeff[d][i][j] = fn(out.coeff[d][i][j])
        return out

    def __eq__(self, other):
        if not isinstance(other, SeriesOperator):
            return NotImplemented
        if (other.reg, other.size) != (self.reg, self.size):
            return False
        order = min(self.order, other.order)
        for d in range(order + 1):
            for i in range(self.size):
                for j in range(self.size):
                    if not self.coeff[d][i][j] == other.coeff[d][i][j]:
                        return False
        return True

    def __hash__(self):
        raise TypeError("unhashable")

    def is_identity(self):
        return self == SeriesOperator.identity(self.reg, self.size,
                                               self.order)


def _constant_is_identity(a):
    n = a.size
    for i in range(n):
        for j in range(n):
            want = FactoredRatFunc.one(a.reg) if i == j \
                else FactoredRatFunc.zero(a.reg)
            if not a.coeff[0][i][j] == want:
                return False
    return True


def _constant_is_diagonal(a):
    n = a.size
    for i in range(n):
        for j in range(n):
            if i != j and not a.coeff[0][i][j].is_zero():
                return False
    return True


def series_inverse(a):
    """Inverse of a SeriesOperator through its truncation order.

    Identity constant term runs the geometric-series recursion; an
    invertible diagonal constant term is peeled off first.  Anything else
    is refused: the callers only ever need these two cases.
    """
    n, order, reg = a.size, a.order, a.reg
    if _constant_is_identity(a):
        out = SeriesOperator.identity(reg, n, order)
        # B[d] = -sum_{e=1..d} A[e] B[d-e]
        for d in range(1, order + 1):
            for i in range(n):
                for j in range(n):
                    acc = FactoredRatFunc.zero(reg)
                    for e in range(1, d + 1):
                        for l in range(n):
                            t1 = a.coeff[e][i][l]
                            t2 = out.coeff[d - e][l][j]
                            if t1.is_zero() or t2.is_zero():
                                continue
                            acc = acc + t1 * t2
                    out.coeff[d][i][j] = -acc
        return out
    if _constant_is_diagonal(a):
        for i in range(n):
            if a.coeff[0][i][i].is_zero():
                raise ZeroDivisionError("singular constant term")
        dinv = [a.coeff[0][i][i].reciprocal() for i in range(n)]
        b = a.copy()
        for d in range(order + 1):
            for i in range(n):
                for j in range(n):
                    b.coeff[d][i][j] = dinv[i] * a.coeff[d][i][j]
        binv = series_inverse(b)
        for d in range(order + 1):
            for i in range(n):
                for j in range(n):
                    binv.coeff[d][i][j] = binv.coeff[d][i][j] * dinv[j]
        return binv
    raise ZeroDivisionError(
        "singular constant term: need identity or diagonal")


def series_zshift(a, j):
    """Twist coeff[d] by q^(j*d).

    With CycElem scalars q is the ring generator; with Fraction scalars q
    must be a registry variable.
    """
    out = a.copy()
    for d in range(a.order + 1):
        if d == 0:
            continue
        if a.reg.ring is None:
            factor = a.reg.var("q", j * d)
        else:
            factor = a.reg.const(a.reg.ring.q_power((j * d) % a.reg.ring.k))
        for i in range(a.size):
            for l in range(a.size):
                out.coeff[d][i][l] = out.coeff[d][i][l] * factor
    return out


# ---------------------------------------------------------------------------
# canonical text form
# ---------------------------------------------------------------------------


def _scalar_text(c):
    if isinstance(c, CycElem):
        from .cyclotomic import cyc_to_text
        return cyc_to_text(c)
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        return "%d/%d" % (c.numerator, c.denominator)
    return str(c)


def lp_to_text(p):
    """Deterministic rendering: monomials ordered lexicographically by
    (variable name, exponent); ascending powers within a variable."""
    if p.is_zero():
        return "0"
    perm = sorted(range(len(p.reg.names)), key=lambda i: p.reg.names[i])

    def term_key(ec):
        # lexicographic by (variable name, exponent), zero exponents absent
        return tuple((p.reg.names[i], ec[0][i]) for i in perm if ec[0][i])

    items = sorted(p.terms.items(), key=term_key)
    chunks = []
    for e, c in items:
        stext = _scalar_text(c)
        neg = stext.startswith("-") and "+" not in stext \
            and stext.count("-") == 1
        if neg:
            stext = stext[1:]
        wrapped = "(%s)" % stext if re.search(r"[+\-]", stext[1:]) or \
            (isinstance(c, CycElem) and len(stext.split()) > 1) else stext
        vars_part = []
        for i in perm:
            x = e[i]
            if x == 0:
                continue
            name = p.reg.names[i]
            vars_part.append(name if x == 1 else "%s^%d" % (name, x))
        if not vars_part:
            body = wrapped
        elif wrapped == "1":
            body = "*".join(vars_part)
        else:
            body = wrapped + "*" + "*".join(vars_part)
        chunks.append(("-" if neg else "+", body))
    sign, body = chunks[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in chunks[1:]:
        out += " %s %s" % (sign, body)
    return out


_ATOM = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z_][\w]*)"
                   r"(?:\^(?P<exp>-?\d+))?|(?P<open>\()|(?P<close>\)))")


def lp_from_text(reg, text):
    """Parse the canonical rendering back; inverse of lp_to_text."""
    total = reg.zero()
    for sgn, chunk in _split_terms(text):
        term = reg.one() if sgn > 0 else reg.const(-1)
        for factor in _split_factors(chunk):
            factor = factor.strip()
            if factor.startswith("("):
                inner = factor[1:-1]
                if reg.ring is None:
                    raise ValueError("parenthesized scalars need a ring")
                from .cyclotomic import cyc_from_text
                term = term * reg.const(cyc_from_text(reg.ring, inner))
                continue
            m = re.fullmatch(r"([A-Za-z_][\w]*)(?:\^(-?\d+))?", factor)
            if m:
                name, exp = m.group(1), m.group(2)
                if name == "q" and reg.ring is not None:
                    term = term * reg.const(
                        reg.ring.q_power(int(exp) if exp else 1))
                else:
                    term = term * reg.var(name, int(exp) if exp else 1)
                continue
            m = re.fullmatch(r"(-?\d+)(?:/(\d+))?", factor)
            if m:
                c = Fraction(int(m.group(1)),
                             int(m.group(2)) if m.group(2) else 1)
                term = term * reg.const(c)
                continue
            raise ValueError("cannot parse factor %r" % factor)
        total = total + term
    return total


def _split_terms(text):
    text = text.strip()
    if text == "0":
        return []
    out = []
    depth = 0
    cur = []
    sign = 1
    i = 0
    if text.startswith("-"):
        sign = -1
        i = 1
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and i > 0 and text[i - 1] == " " \
                and i + 1 < len(text) and text[i + 1] == " ":
            out.append((sign, "".join(cur).strip()))
            cur = []
            sign = 1 if ch == "+" else -1
            i += 2
            continue
        cur.append(ch)
        i += 1
    out.append((sign, "".join(cur).strip()))
    return out


def _split_factors(chunk):
    out = []
    depth = 0
    cur = []
    for ch in chunk:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


def frf_to_text(f):
    parts = []
    if not f.unit.is_one():
        parts.append("[%s]" % lp_to_text(f.unit))
    parts.append(lp_to_text(f.num))
    text = " * ".join(parts)
    if f.den:
        dens = []
        for b, m in sorted(f.den.values(), key=lambda bm: bm[0].exps):
            base = "(%s)" % lp_to_text(b.to_poly(f.reg))
            dens.append(base if m == 1 else base + "^%d" % m)
        text += " / " + "".join(dens)
    return text
