"""Sparse exact multivariate polynomials and factored rational functions.

Coefficients are ExactScalars, variables are plain strings ("y1", "x2",
"h" for the loop parameter).  Rational functions keep their denominators
as a multiset of polynomial factors (the localization pattern: products of
linear forms), with cancellation by exact division.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import ExactScalar, as_scalar

HBAR = "h"


def _mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


def _mono_divides(m1, m2):
    """m1 | m2 as monomials."""
    d2 = dict(m2)
    return all(d2.get(v, 0) >= e for v, e in m1)


def _mono_div(m2, m1):
    d = dict(m2)
    for v, e in m1:
        d[v] -= e
    return tuple(sorted((v, e) for v, e in d.items() if e))


def _mono_key(m):
    # graded lexicographic: total degree first, then the sparse exponent
    # tuple listed by descending variable name (equivalent to dense lex)
    return (sum(e for _, e in m), tuple(sorted(m, reverse=True)))


class Polynomial:
    """Immutable sparse polynomial; mapping monomial -> ExactScalar."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = as_scalar(c)
                if c:
                    clean[m] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    @staticmethod
    def constant(c):
        c = as_scalar(c)
        return Polynomial({(): c} if c else {})

    @staticmethod
    def variable(name, exp=1):
        return Polynomial({((name, exp),): as_scalar(1)})

    @staticmethod
    def linear(coeffs, const=0):
        """sum coeffs[v] * v + const."""
        terms = {((v, 1),): as_scalar(c) for v, c in coeffs.items() if as_scalar(c)}
        c = as_scalar(const)
        if c:
            terms[()] = c
        return Polynomial(terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        other = as_poly(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items(), key=lambda t: t[0])))

    def __add__(self, other):
        other = as_poly(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, as_scalar(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Polynomial(terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-as_poly(other))

    def __rsub__(self, other):
        return as_poly(other) + (-self)

    def __mul__(self, other):
        other = as_poly(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = terms.get(m, as_scalar(0)) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return Polynomial(terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Polynomial.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def leading(self):
        m = max(self.terms, key=_mono_key)
        return m, self.terms[m]

    def divide_exact(self, divisor):
        """Exact division; raises ArithmeticError when it does not divide."""
        divisor = as_poly(divisor)
        if not divisor:
            raise ZeroDivisionError("division by zero polynomial")
        dm, dc = divisor.leading()
        if not dc.is_rational:
            raise ArithmeticError("leading coefficient %s is not rational" % dc)
        inv = Fraction(1) / dc.rational
        rem = self
        quot_terms = {}
        while rem:
            m, c = rem.leading()
            if not _mono_divides(dm, m):
                raise ArithmeticError("%r does not divide %r" % (divisor, self))
            qm = _mono_div(m, dm)
            qc = c * inv
            quot_terms[qm] = quot_terms.get(qm, as_scalar(0)) + qc
            rem = rem - Polynomial({qm: qc}) * divisor
        return Polynomial(quot_terms)

    def substitute(self, mapping):
        """Replace variables by polynomials; unmapped variables stay."""
        out = Polynomial({})
        for m, c in self.terms.items():
            piece = Polynomial.constant(c)
            for v, e in m:
                base = mapping.get(v)
                if base is None:
                    base = Polynomial.variable(v)
                else:
                    base = as_poly(base)
                piece = piece * base ** e
            out = out + piece
        return out

    def swap_vars(self, a, b):
        def rename(m):
            return tuple(sorted((b if v == a else (a if v == b else v), e)
                                for v, e in m))
        return Polynomial({rename(m): c for m, c in self.terms.items()})

    def evaluate(self, point):
        total = as_scalar(0)
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                if v not in point:
                    raise KeyError("no value for %r" % v)
                base = as_scalar(point[v])
                for _ in range(e):
                    val = val * base
            total = total + val
        return total

    def weighted_degree(self, weight=lambda v: 2):
        """Max weighted total degree; None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(weight(v) * e for v, e in m) for m in self.terms)

    def is_homogeneous(self, weight=lambda v: 2):
        degs = {sum(weight(v) * e for v, e in m) for m in self.terms}
        return len(degs) <= 1

    def variables(self):
        out = set()
        for m in self.terms:
            out.update(v for v, _ in m)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=_mono_key, reverse=True):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else "%s^%d" % (v, e) for v, e in m)
            cs = str(c)
            if mono:
                bits.append(mono if cs == "1" else ("-" + mono if cs == "-1"
                                                    else "%s*%s" % (cs, mono)))
            else:
                bits.append(cs)
        out = bits[0]
        for b in bits[1:]:
            out += b if b.startswith("-") else "+" + b
        return out


def as_poly(x):
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction, ExactScalar, str)):
        return Polynomial.constant(as_scalar(x))
    raise TypeError("cannot interpret %r as Polynomial" % (x,))


ZERO_POLY = Polynomial({})
ONE_POLY = Polynomial.constant(1)


def _factor_key(p):
    return tuple(sorted(p.terms.items(), key=lambda t: t[0]))


class RationalFunction:
    """numerator / product of polynomial factors, factors kept separate."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        object.__setattr__(self, "num", as_poly(num))
        factors = {}
        if den:
            for f, e in (den.items() if isinstance(den, dict) else den):
                f = as_poly(f)
                if not f:
                    raise ZeroDivisionError("zero denominator factor")
                if e:
                    key = _factor_key(f)
                    if key in factors:
                        factors[key] = (f, factors[key][1] + e)
                    else:
                        factors[key] = (f, e)
        object.__setattr__(self, "den", {k: v for k, v in factors.items() if v[1]})
        self._reduce()

    def __setattr__(self, *a):
        raise AttributeError("RationalFunction is immutable")

    def _reduce(self):
        num = self.num
        den = dict(self.den)
        if not num:
            object.__setattr__(self, "den", {})
            return
        changed = True
        while changed:
            changed = False
            for key, (f, e) in list(den.items()):
                while e > 0:
                    try:
                        num = num.divide_exact(f)
                    except ArithmeticError:
                        break
                    e -= 1
                    changed = True
                if e:
                    den[key] = (f, e)
                else:
                    del den[key]
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @staticmethod
    def of(x):
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction(as_poly(x))

    def den_poly(self):
        p = ONE_POLY
        for f, e in self.den.values():
            p = p * f ** e
        return p

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = RationalFunction.of(other)
        return (self.num * other.den_poly()) == (other.num * self.den_poly())

    def __hash__(self):
        raise TypeError("unhashable")

    def __mul__(self, other):
        other = RationalFunction.of(other)
        den = [(f, e) for f, e in self.den.values()]
        den += [(f, e) for f, e in other.den.values()]
        return RationalFunction(self.num * other.num, den)

    __rmul__ = __mul__

    def __neg__(self):
        return RationalFunction(-self.num, list(self.den.values()))

    def __add__(self, other):
        other = RationalFunction.of(other)
        all_factors = {}
        for key, (f, e) in self.den.items():
            all_factors[key] = (f, max(e, other.den.get(key, (f, 0))[1]))
        for key, (f, e) in other.den.items():
            if key not in all_factors:
                all_factors[key] = (f, e)
        num1, num2 = self.num, other.num
        for key, (f, e) in all_factors.items():
            e1 = self.den.get(key, (f, 0))[1]
            e2 = other.den.get(key, (f, 0))[1]
            num1 = num1 * f ** (e - e1)
            num2 = num2 * f ** (e - e2)
        return RationalFunction(num1 + num2, list(all_factors.values()))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-RationalFunction.of(other))

    def __rsub__(self, other):
        return RationalFunction.of(other) + (-self)

    def inverse(self):
        """Only defined when the numerator is itself a monomial-free product
        we can move to the denominator; here we require a single factor or a
        rational constant times factors."""
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        num = ONE_POLY
        den = [(self.num, 1)]
        for f, e in self.den.values():
            num = num * f ** e
        return RationalFunction(num, den)

    def substitute(self, mapping):
        return RationalFunction(self.num.substitute(mapping),
                                [(f.substitute(mapping), e)
                                 for f, e in self.den.values()])

    def evaluate(self, point):
        d = as_scalar(1)
        for f, e in self.den.values():
            val = f.evaluate(point)
            for _ in range(e):
                d = d * val
        if not d:
            raise ZeroDivisionError("denominator vanishes at %r" % (point,))
        return self.num.evaluate(point) / d

    def __repr__(self):
        if not self.den:
            return repr(self.num)
        den = "*".join("(%r)^%d" % (f, e) if e > 1 else "(%r)" % (f,)
                       for f, e in self.den.values())
        return "(%r)/[%s]" % (self.num, den)
