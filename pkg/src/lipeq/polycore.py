"""Exact sparse integer polynomials.

A :class:`SparsePoly` is an immutable map ``exponent -> coefficient`` with
no zero coefficients stored.  Everything in this module is exact: integer
coefficients, rational evaluation points, no floating point.

Heavier routines (pseudo-remainders, gcd, Sturm chains) convert to dense
coefficient lists, highest degree first, and convert back at the end.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from types import MappingProxyType
from typing import Iterable, Mapping, Union

from .errors import (
    DivideByZero,
    InputError,
    NotDivisible,
    RootCountNotOne,
    UnsupportedIndex,
    ZeroPolynomial,
)

Rational = Union[int, Fraction]

MAX_CYCLOTOMIC_INDEX = 10_000


class SparsePoly:
    """Integer polynomial in one variable, stored sparsely."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            if e < 0:
                raise InputError(f"negative exponent {e}")
            acc[e] = acc.get(e, 0) + int(c)
        ordered = sorted(((e, c) for e, c in acc.items() if c), reverse=True)
        self._terms = MappingProxyType(dict(ordered))
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def const(cls, c: int) -> "SparsePoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, e: int, c: int = 1) -> "SparsePoly":
        return cls({e: c})

    @classmethod
    def from_dense(cls, coeffs: list[int]) -> "SparsePoly":
        """Build from a dense list, highest degree first."""
        n = len(coeffs) - 1
        return cls((n - i, c) for i, c in enumerate(coeffs))

    @classmethod
    def parse(cls, text: str) -> "SparsePoly":
        return parse_poly(text)

    # basic accessors ----------------------------------------------------

    @property
    def terms(self) -> Mapping[int, int]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return next(iter(self._terms), -1)

    @property
    def lc(self) -> int:
        return self._terms[self.degree] if self._terms else 0

    def coeff(self, e: int) -> int:
        return self._terms.get(e, 0)

    def to_dense(self) -> list[int]:
        d = self.degree
        out = [0] * (d + 1)
        for e, c in self._terms.items():
            out[d - e] = c
        return out

    def content(self) -> int:
        g = 0
        for c in self._terms.values():
            g = gcd(g, c)
        return g

    def primitive(self) -> "SparsePoly":
        """Primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        return SparsePoly({e: c // g for e, c in self._terms.items()})

    def derivative(self) -> "SparsePoly":
        return SparsePoly({e - 1: e * c for e, c in self._terms.items() if e})

    def __call__(self, x: Rational) -> Rational:
        if isinstance(x, Fraction) and x.denominator != 1:
            return Fraction(_hom_eval(self.to_dense(), x.numerator, x.denominator),
                            x.denominator ** max(self.degree, 0))
        x = int(x)
        return sum(c * x ** e for e, c in self._terms.items())

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return poly_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = SparsePoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"SparsePoly('{self}')"


def _coerce(x):
    if isinstance(x, SparsePoly):
        return x
    if isinstance(x, int):
        return SparsePoly.const(x)
    return NotImplemented


ZERO = SparsePoly()
ONE = SparsePoly.const(1)
X = SparsePoly.monomial(1)


# text form ----------------------------------------------------------------

_TERM = re.compile(r"([+-])?(\d+)?(\*?x(?:\^(\d+))?)?")


def parse_poly(text: str) -> SparsePoly:
    """Parse the canonical text form, e.g. ``"x^8+x^7+x-1"`` or ``"2x^2+x-1"``."""
    s = text.replace(" ", "")
    if not s:
        raise InputError("empty polynomial")
    terms: list[tuple[int, int]] = []
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot parse polynomial {text!r} at offset {pos}")
        sign, digits, xpart, exp = m.groups()
        if pos > 0 and sign is None:
            raise InputError(f"missing operator in {text!r} at offset {pos}")
        if digits is None and xpart is None:
            raise InputError(f"dangling sign in {text!r}")
        if xpart is not None and xpart.startswith("*") and digits is None:
            raise InputError(f"'*' without coefficient in {text!r}")
        c = int(digits) if digits is not None else 1
        if sign == "-":
            c = -c
        e = 0 if xpart is None else (int(exp) if exp is not None else 1)
        terms.append((e, c))
        pos = m.end()
    return SparsePoly(terms)


def format_poly(f: SparsePoly) -> str:
    if f.is_zero():
        return "0"
    out = []
    for e, c in f.terms.items():
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            var = "x" if e == 1 else f"x^{e}"
            body = var if a == 1 else f"{a}{var}"
        out.append(sign + body)
    s = "".join(out)
    return s[1:] if s[0] == "+" else s


# ring operations -----------------------------------------------------------

def poly_add(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    terms = dict(f.terms)
    for e, c in g.terms.items():
        terms[e] = terms.get(e, 0) + c
    return SparsePoly(terms)


def poly_mul(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    terms: dict[int, int] = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = e1 + e2
            terms[e] = terms.get(e, 0) + c1 * c2
    return SparsePoly(terms)


def poly_exact_div(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """Return ``q`` with ``f == g * q`` in Z[x]; raise if no such ``q`` exists."""
    if g.is_zero():
        raise DivideByZero("division by the zero polynomial")
    q, r = _divmod_dense(f.to_dense(), g.to_dense())
    if any(r):
        raise NotDivisible(f"{g} does not divide {f}")
    return SparsePoly.from_dense(q)


def divides(g: SparsePoly, f: SparsePoly) -> bool:
    try:
        poly_exact_div(f, g)
    except NotDivisible:
        return False
    return True


def reciprocal(f: SparsePoly) -> SparsePoly:
    """``x^deg(f) * f(1/x)``."""
    if f.is_zero():
        raise ZeroPolynomial("reciprocal of the zero polynomial")
    d = f.degree
    return SparsePoly({d - e: c for e, c in f.terms.items()})


# dense helpers (highest degree first) ---------------------------------------

def _strip(p: list[int]) -> list[int]:
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return p[i:]


def _divmod_dense(f: list[int], g: list[int]):
    """Long division in Z[x]; raises NotDivisible on a non-integral quotient step."""
    f, g = _strip(list(f)), _strip(list(g))
    if len(f) < len(g):
        return [], f
    lc = g[0]
    r = list(f)
    q = []
    for i in range(len(f) - len(g) + 1):
        c = r[i]
        if c % lc:
            raise NotDivisible("non-integral quotient coefficient")
        c //= lc
        q.append(c)
        if c:
            for j, gj in enumerate(g):
                r[i + j] -= c * gj
    return q, _strip(r[len(f) - len(g) + 1:])


def _prem(f: list[int], g: list[int]) -> tuple[list[int], int]:
    """Pseudo-remainder of ``f`` by ``g`` and the multiplier ``lc(g)^k`` used."""
    lc = g[0]
    n = len(f) - len(g) + 1
    r = list(f)
    for i in range(n):
        c = r[i]
        for j in range(i, len(r)):
            r[j] *= lc
        for j, gj in enumerate(g):
            r[i + j] -= c * gj
    return _strip(r[n:]), lc ** n


def _prim_dense(p: list[int]) -> list[int]:
    g = 0
    for c in p:
        g = gcd(g, c)
    if g == 0:
        return p
    if p[0] < 0:
        g = -g
    return [c // g for c in p]


def _hom_eval(p: list[int], n: int, d: int) -> int:
    """``d^deg * p(n/d)`` for a dense list ``p``; has the sign of ``p(n/d)`` when d > 0."""
    if not p:
        return 0
    acc = p[0]
    dk = 1
    for c in p[1:]:
        dk *= d
        acc = acc * n + c * dk
    return acc


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


# gcd, square-free part -----------------------------------------------------

def poly_gcd(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """Primitive gcd with positive leading coefficient (primitive PRS over Z)."""
    if f.is_zero() and g.is_zero():
        raise ZeroPolynomial("gcd(0, 0) is undefined")
    a, b = _prim_dense(f.to_dense()), _prim_dense(g.to_dense())
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return ONE
        r, _ = _prem(a, b)
        a, b = b, _prim_dense(r)
    return SparsePoly.from_dense(_prim_dense(a))


def squarefree_part(f: SparsePoly) -> SparsePoly:
    if f.is_zero():
        raise ZeroPolynomial("square-free part of the zero polynomial")
    if f.degree == 0:
        return f
    return poly_exact_div(f, poly_gcd(f, f.derivative()))


# intervals, Sturm counting, bisection --------------------------------------

def _to_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class SignedInterval:
    """Open interval ``(lo, hi)`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = _to_fraction(self.lo), _to_fraction(self.hi)
        if not lo < hi:
            raise InputError(f"empty interval ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo < _to_fraction(x) < self.hi

    def disjoint(self, other: "SignedInterval") -> bool:
        return self.hi <= other.lo or other.hi <= self.lo

    def to_dict(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi)}

    @classmethod
    def from_dict(cls, d: dict) -> "SignedInterval":
        return cls(Fraction(d["lo"]), Fraction(d["hi"]))


UNIT_INTERVAL = SignedInterval(Fraction(0), Fraction(1))


def _open_core(f: SparsePoly, iv: SignedInterval) -> list[int]:
    """Square-free part of ``f`` with any roots at the endpoints divided out."""
    p = squarefree_part(f).to_dense()
    for x in (iv.lo, iv.hi):
        if _hom_eval(p, x.numerator, x.denominator) == 0:
            p, _ = _divmod_dense(p, [x.denominator, -x.numerator])
    return p


def sturm_sequence(p: list[int]) -> list[list[int]]:
    """Sturm chain of a square-free dense polynomial, scaled by positive constants."""
    deriv = [c * (len(p) - 1 - i) for i, c in enumerate(p[:-1])]
    seq = [_prim_dense(p), _prim_dense(deriv)]
    while len(seq[-1]) > 1:
        r, mult = _prem(seq[-2], seq[-1])
        if not r:
            break
        r = [-c for c in r] if mult > 0 else r
        g = 0
        for c in r:
            g = gcd(g, c)
        seq.append([c // g for c in r])
    return seq


def _variations(seq: list[list[int]], x: Fraction) -> int:
    n, d = x.numerator, x.denominator
    signs = [s for s in (_sign(_hom_eval(p, n, d)) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(f: SparsePoly, iv: SignedInterval = UNIT_INTERVAL) -> int:
    """Number of distinct real roots of ``f`` in the open interval ``iv``."""
    if f.is_zero():
        raise ZeroPolynomial("cannot count roots of the zero polynomial")
    p = _open_core(f, iv)
    if len(p) <= 1:
        return 0
    seq = sturm_sequence(p)
    return _variations(seq, iv.lo) - _variations(seq, iv.hi)


def bisect_root(f: SparsePoly, iv: SignedInterval = UNIT_INTERVAL,
                tol=Fraction(1, 10**12)) -> SignedInterval:
    """Shrink ``iv`` around the single root of ``f`` inside it to width <= ``tol``."""
    tol = _to_fraction(tol)
    if tol <= 0:
        raise InputError("tolerance must be positive")
    n = sturm_count(f, iv)
    if n != 1:
        raise RootCountNotOne(f"{f} has {n} roots in ({iv.lo}, {iv.hi})")
    p = _open_core(f, iv)
    lo, hi = iv.lo, iv.hi
    s_lo = _sign(_hom_eval(p, lo.numerator, lo.denominator))
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = _sign(_hom_eval(p, mid.numerator, mid.denominator))
        if s == 0:
            half = min(tol, hi - lo) / 4
            return SignedInterval(mid - half, mid + half)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return SignedInterval(lo, hi)


# cyclotomic polynomials ----------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic(n: int) -> SparsePoly:
    """The n-th cyclotomic polynomial, by dividing x^n - 1 by Phi_d for proper divisors d."""
    if n < 1:
        raise InputError("cyclotomic index must be >= 1")
    if n > MAX_CYCLOTOMIC_INDEX:
        raise UnsupportedIndex(f"cyclotomic index {n} exceeds {MAX_CYCLOTOMIC_INDEX}")
    p = SparsePoly({n: 1, 0: -1})
    for d in range(1, n):
        if n % d == 0:
            p = poly_exact_div(p, cyclotomic(d))
    return p


def cyclotomic_divides(n: int, f: SparsePoly) -> bool:
    phi = cyclotomic(n)
    # Phi_n | x^n - 1, so reduce exponents mod n first.
    folded: dict[int, int] = {}
    for e, c in f.terms.items():
        folded[e % n] = folded.get(e % n, 0) + c
    return divides(phi, SparsePoly(folded))
