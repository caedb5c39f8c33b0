"""Irreducibility results for trinomials x^a + e*x^b + d and quadrinomials
x^a + e1*x^b + e2*x^c + e3.

Every exceptional factorization is checked by exact multiplication or
division before it is reported; theorem-level claims that a cofactor is
irreducible are recorded as flags, not re-derived.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .errors import BadOrdering, DegenerateInput, ExceptionalContractViolated, NotDivisible
from .polycore import (
    ONE,
    SparsePoly,
    cyclotomic_divides,
    poly_exact_div,
    poly_gcd,
    reciprocal,
)


def _check_sign(s: int, name: str) -> int:
    if s not in (1, -1):
        raise DegenerateInput(f"{name} must be +1 or -1, got {s}")
    return s


def trinomial(a: int, b: int, eps: int, delta: int) -> SparsePoly:
    return SparsePoly({a: 1, b: eps, 0: delta})


def quadrinomial(a: int, b: int, c: int, e1: int = 1, e2: int = 1, e3: int = -1) -> SparsePoly:
    return SparsePoly({a: 1, b: e1, c: e2, 0: e3})


# trinomials ----------------------------------------------------------------

@dataclass(frozen=True)
class TrinomialReport:
    a: int
    b: int
    eps: int
    delta: int
    # parameters of the form actually analyzed (equal to the input unless the
    # reciprocal transform was needed to reach a >= 2b)
    analyzed: tuple[int, int, int, int]
    ell: int
    a1: int
    b1: int
    exceptional: bool
    cyclo_factor: Optional[SparsePoly] = None
    cofactor: Optional[SparsePoly] = None
    reciprocal_applied: bool = False
    cofactor_irreducible: bool = True

    @property
    def verdict(self) -> str:
        return "Exceptional" if self.exceptional else "Irreducible"

    @property
    def polynomial(self) -> SparsePoly:
        return trinomial(self.a, self.b, self.eps, self.delta)

    def to_dict(self) -> dict:
        return {
            "input": {"a": self.a, "b": self.b, "eps": self.eps, "delta": self.delta},
            "polynomial": str(self.polynomial),
            "analyzed": dict(zip(("a", "b", "eps", "delta"), self.analyzed)),
            "ell": self.ell,
            "a1": self.a1,
            "b1": self.b1,
            "verdict": self.verdict,
            "cyclo_factor": str(self.cyclo_factor) if self.cyclo_factor is not None else None,
            "cofactor": str(self.cofactor) if self.cofactor is not None else None,
            "cofactor_irreducible": self.cofactor_irreducible,
            "reciprocal_applied": self.reciprocal_applied,
        }


def ljunggren_exceptional(a1: int, b1: int, eps: int, delta: int) -> bool:
    """Exceptional condition for x^a + eps*x^b + delta with a >= 2b."""
    if (a1 + b1) % 3:
        return False
    return ((a1 % 2 == 1 and b1 % 2 == 1 and eps == 1)
            or (a1 % 2 == 0 and delta == 1)
            or (b1 % 2 == 0 and eps == delta))


def trinomial_analyze(a: int, b: int, eps: int = 1, delta: int = -1) -> TrinomialReport:
    """Classify ``x^a + eps*x^b + delta``.

    For ``b < a < 2b`` the reciprocal ``delta * x^a * g(1/x)``, which is
    ``x^a + eps*delta*x^(a-b) + delta``, is analyzed instead and the factor
    is mapped back.
    """
    _check_sign(eps, "eps")
    _check_sign(delta, "delta")
    if a == b:
        raise DegenerateInput("trinomial needs a != b")
    if a <= 0 or b <= 0:
        raise DegenerateInput("exponents must be positive")
    if a < b:
        raise DegenerateInput(f"expected leading exponent first, got a={a} < b={b}")

    flipped = a < 2 * b
    ta, tb, te, td = (a, a - b, eps * delta, delta) if flipped else (a, b, eps, delta)
    ell = gcd(ta, tb)
    a1, b1 = ta // ell, tb // ell
    base = dict(a=a, b=b, eps=eps, delta=delta, analyzed=(ta, tb, te, td),
                ell=ell, a1=a1, b1=b1, reciprocal_applied=flipped)
    if not ljunggren_exceptional(a1, b1, te, td):
        return TrinomialReport(exceptional=False, **base)

    cyclo = SparsePoly({2 * ell: 1, ell: te ** b1 * td ** a1, 0: 1})
    g = trinomial(a, b, eps, delta)
    try:
        # the cyclotomic-type factor is palindromic, so it divides g and its
        # reciprocal alike; dividing g directly is the mapped-back factorization
        cof = poly_exact_div(g, cyclo)
    except NotDivisible:
        raise ExceptionalContractViolated(
            f"{cyclo} does not divide {g} although the exceptional condition holds")
    return TrinomialReport(exceptional=True, cyclo_factor=cyclo, cofactor=cof, **base)


# quadrinomials: criterion ------------------------------------------------------

@dataclass(frozen=True)
class FJCriterion:
    a: int
    b: int
    c: int
    k: int
    m: int
    a_: int
    b_: int
    c_: int
    abar: int
    bbar: int
    cbar: int
    res_a: int
    res_b: int
    res_c: int

    @property
    def irreducible(self) -> bool:
        return bool(self.res_a and self.res_b and self.res_c)

    def to_dict(self) -> dict:
        return {
            "a": self.a, "b": self.b, "c": self.c,
            "k": self.k, "m": self.m,
            "a_prime": self.a_, "b_prime": self.b_, "c_prime": self.c_,
            "a_bar": self.abar, "b_bar": self.bbar, "c_bar": self.cbar,
            "residues": [self.res_a, self.res_b, self.res_c],
            "irreducible": self.irreducible,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FJCriterion":
        return quadrinomial_irreducible(d["a"], d["b"], d["c"])


def quadrinomial_irreducible(a: int, b: int, c: int) -> FJCriterion:
    """Irreducibility criterion for ``x^a + x^b + x^c - 1`` (a, b, c distinct)."""
    if min(a, b, c) <= 0:
        raise DegenerateInput("exponents must be positive")
    if len({a, b, c}) < 3:
        raise DegenerateInput(f"exponents must be distinct, got {(a, b, c)}")
    a, b, c = sorted((a, b, c), reverse=True)
    g = gcd(gcd(a, b), c)
    k = 0
    while g % 2 == 0:
        g //= 2
        k += 1
    a_, b_, c_ = a >> k, b >> k, c >> k
    abar = gcd(a_, abs(b_ - c_))
    bbar = gcd(b_, abs(a_ - c_))
    cbar = gcd(c_, abs(a_ - b_))
    return FJCriterion(a, b, c, k, g, a_, b_, c_, abar, bbar, cbar,
                       a_ % (2 * abar), b_ % (2 * bbar), c_ % (2 * cbar))


# quadrinomials: decomposition ---------------------------------------------------

def _f(pairs) -> SparsePoly:
    return SparsePoly(pairs)


def exceptional_factors(form: str, r: int) -> list[SparsePoly]:
    """The three displayed factors of an exceptional quadrinomial form."""
    sq = _f({2 * r: 1, 0: 1})
    if form == "Form8r7r1":
        return [sq, _f({3 * r: 1, 2 * r: 1, 0: -1}), _f({3 * r: 1, r: -1, 0: 1})]
    if form == "Form8r7r1Neg":
        return [sq, _f({3 * r: 1, 2 * r: -1, 0: 1}), _f({3 * r: 1, r: -1, 0: -1})]
    if form == "Form8r4r2r":
        return [sq, _f({3 * r: 1, 2 * r: 1, 0: -1}), _f({3 * r: 1, 2 * r: -1, 0: 1})]
    if form == "Form8r6r4r":
        return [sq, _f({3 * r: 1, r: -1, 0: -1}), _f({3 * r: 1, r: -1, 0: 1})]
    raise ValueError(f"unknown exceptional form {form!r}")


# (exponent multipliers of r, sign tuple)
EXCEPTIONAL_FORMS = {
    "Form8r7r1": ((8, 7, 1), (1, 1, -1)),
    "Form8r7r1Neg": ((8, 7, 1), (-1, -1, -1)),
    "Form8r4r2r": ((8, 4, 2), (1, 1, -1)),
    "Form8r6r4r": ((8, 6, 4), (-1, -1, -1)),
}


def match_exceptional(a: int, b: int, c: int, signs: tuple[int, int, int]) -> Optional[tuple[str, int]]:
    if a % 8:
        return None
    r = a // 8
    for name, (mult, sg) in EXCEPTIONAL_FORMS.items():
        if (a, b, c) == tuple(m * r for m in mult) and tuple(signs) == sg:
            return name, r
    return None


@dataclass(frozen=True)
class QuadReport:
    a: int
    b: int
    c: int
    signs: tuple[int, int, int]
    A: SparsePoly
    B: SparsePoly
    exceptional_form: Optional[str]
    r: Optional[int]
    factors: tuple[SparsePoly, ...]
    B_irreducible: bool

    @property
    def polynomial(self) -> SparsePoly:
        return quadrinomial(self.a, self.b, self.c, *self.signs)

    def to_dict(self) -> dict:
        return {
            "input": {"a": self.a, "b": self.b, "c": self.c, "signs": list(self.signs)},
            "polynomial": str(self.polynomial),
            "A": str(self.A),
            "B": str(self.B),
            "exceptional_form": self.exceptional_form,
            "r": self.r,
            "factors": [str(f) for f in self.factors],
            "B_irreducible": self.B_irreducible,
        }


def quadrinomial_decompose(a: int, b: int, c: int, e1: int = 1, e2: int = 1, e3: int = -1) -> QuadReport:
    if not a > b > c > 0:
        raise BadOrdering(f"need a > b > c > 0, got {(a, b, c)}")
    signs = (_check_sign(e1, "e1"), _check_sign(e2, "e2"), _check_sign(e3, "e3"))
    f = quadrinomial(a, b, c, *signs)
    A = poly_gcd(f, reciprocal(f))
    B = poly_exact_div(f, A)
    hit = match_exceptional(a, b, c, signs)
    if hit is None:
        return QuadReport(a, b, c, signs, A, B, None, None, (A, B), True)
    form, r = hit
    factors = exceptional_factors(form, r)
    prod = ONE
    for p in factors:
        prod = prod * p
    if prod != f:
        raise ExceptionalContractViolated(f"{form} factors do not multiply to {f}")
    return QuadReport(a, b, c, signs, A, B, form, r, tuple(factors), False)


# roots of unity ----------------------------------------------------------------

@dataclass(frozen=True)
class UnitRootLocalization:
    t: int
    a1: int
    b1: int
    c1: int
    t1: int
    t2: int
    t3: int
    candidate_orders: frozenset
    confirmed_orders: frozenset

    def to_dict(self) -> dict:
        return {
            "t": self.t, "a1": self.a1, "b1": self.b1, "c1": self.c1,
            "t1": self.t1, "t2": self.t2, "t3": self.t3,
            "candidate_orders": sorted(self.candidate_orders),
            "confirmed_orders": sorted(self.confirmed_orders),
        }


def _divisors(n: int) -> set[int]:
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.update((d, n // d))
        d += 1
    return out


def unit_root_candidates(a: int, b: int, c: int, e1: int = 1, e2: int = 1, e3: int = -1) -> UnitRootLocalization:
    """Orders of the roots of unity that can be zeros of the quadrinomial, and those that are."""
    if not a > b > c > 0:
        raise BadOrdering(f"need a > b > c > 0, got {(a, b, c)}")
    t = gcd(gcd(a, b), c)
    a1, b1, c1 = a // t, b // t, c // t
    t1 = gcd(a1, abs(b1 - c1))
    t2 = gcd(b1, abs(a1 - c1))
    t3 = gcd(c1, abs(a1 - b1))
    cands = set()
    for ti in (t1, t2, t3):
        cands |= _divisors(2 * t * ti)
    f = quadrinomial(a, b, c, e1, e2, e3)
    confirmed = {n for n in cands if cyclotomic_divides(n, f)}
    return UnitRootLocalization(t, a1, b1, c1, t1, t2, t3, frozenset(cands), frozenset(confirmed))
