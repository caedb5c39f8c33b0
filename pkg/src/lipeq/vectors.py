"""Contraction vectors: lambda-power exponent multisets and exact rational ratios."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Optional

from .errors import InputError
from .polycore import (
    SignedInterval,
    SparsePoly,
    UNIT_INTERVAL,
    bisect_root,
    poly_gcd,
    sturm_count,
)

log = logging.getLogger(__name__)

DEFAULT_TOL = Fraction(1, 10**12)


@dataclass(frozen=True)
class PowerVector:
    """Ratios ``(lam^a_1, ..., lam^a_m)`` for a symbolic ``0 < lam < 1``; stored sorted ascending."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(sorted(int(e) for e in self.exponents))
        if len(exps) < 2:
            raise InputError("a contraction vector needs at least 2 entries")
        if exps[0] <= 0:
            raise InputError("exponents must be positive integers")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def of(cls, *exps: int) -> "PowerVector":
        return cls(exps)

    @classmethod
    def parse(cls, text: str) -> "PowerVector":
        try:
            return cls(tuple(int(t) for t in text.split(",") if t.strip()))
        except ValueError as exc:
            raise InputError(f"bad exponent list {text!r}: {exc}") from None

    def __len__(self):
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __str__(self):
        return ",".join(map(str, self.exponents))

    def reduced(self) -> "PowerVector":
        """Divide every exponent by their common gcd (explicit opt-in only)."""
        g = reduce(gcd, self.exponents)
        return PowerVector(tuple(e // g for e in self.exponents))


@dataclass(frozen=True)
class RatioVector:
    ratios: tuple[Fraction, ...]

    def __post_init__(self):
        rs = tuple(Fraction(r) for r in self.ratios)
        if len(rs) < 2:
            raise InputError("a contraction vector needs at least 2 entries")
        for r in rs:
            if not 0 < r < 1:
                raise InputError(f"ratio {r} is not in (0, 1)")
        object.__setattr__(self, "ratios", rs)
        if sum(rs) >= 1:
            log.warning("ratios %s sum to >= 1; no dust-like realization on the line", self)

    @classmethod
    def parse(cls, text: str) -> "RatioVector":
        try:
            return cls(tuple(Fraction(t.strip()) for t in text.split(",") if t.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad ratio list {text!r}: {exc}") from None

    def __len__(self):
        return len(self.ratios)

    def __str__(self):
        return ",".join(map(str, self.ratios))

    def is_permutation_of(self, other: "RatioVector") -> bool:
        return sorted(self.ratios) == sorted(other.ratios)


# dimension ---------------------------------------------------------------------

def char_poly(v: PowerVector | Iterable[int]) -> SparsePoly:
    """``sum x^a_i - 1``; its root in (0, 1) is ``lam^s``."""
    terms: dict[int, int] = {0: -1}
    for e in v:
        terms[e] = terms.get(e, 0) + 1
    return SparsePoly(terms)


@dataclass(frozen=True)
class DimensionInfo:
    char_poly: SparsePoly
    root_interval: SignedInterval
    approx: Fraction

    def to_dict(self, tol: Optional[Fraction] = None) -> dict:
        d = {
            "char_poly": str(self.char_poly),
            "root_interval": self.root_interval.to_dict(),
            "approx": f"{float(self.approx):.15g}",
            "approx_exact": str(self.approx),
        }
        if tol is not None:
            d["tol"] = str(tol)
        return d


def dimension(v: PowerVector, tol=DEFAULT_TOL) -> DimensionInfo:
    f = char_poly(v)
    iv = bisect_root(f, UNIT_INTERVAL, tol)
    return DimensionInfo(f, iv, iv.midpoint)


def same_dimension(v: PowerVector, w: PowerVector) -> bool:
    """Exact test that the two characteristic polynomials share their root in (0, 1)."""
    g = poly_gcd(char_poly(v), char_poly(w))
    if g.degree < 1:
        return False
    return sturm_count(g, UNIT_INTERVAL) >= 1


def separating_intervals(v: PowerVector, w: PowerVector) -> tuple[SignedInterval, SignedInterval]:
    """Disjoint root intervals for two vectors of different dimension."""
    fv, fw = char_poly(v), char_poly(w)
    tol = Fraction(1, 2**8)
    while True:
        iv, iw = bisect_root(fv, UNIT_INTERVAL, tol), bisect_root(fw, UNIT_INTERVAL, tol)
        if iv.disjoint(iw):
            return iv, iw
        tol /= 16


# homogeneity -------------------------------------------------------------------

def is_homogeneous(v: PowerVector) -> Optional[tuple[int, int]]:
    if len(set(v.exponents)) == 1:
        return v.exponents[0], len(v)
    return None


def _iroot(m: int, q: int) -> int:
    """Largest k with k**q <= m."""
    lo, hi = 1, 1 << (m.bit_length() // q + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** q <= m:
            lo = mid
        else:
            hi = mid - 1
    return lo


def perfect_power_exponents(m: int) -> list[tuple[int, int]]:
    """All ``(q, k)`` with ``k**q == m`` and ``k >= 2``, ascending in q."""
    if m < 2:
        raise InputError("m must be >= 2")
    out = []
    for q in range(1, m.bit_length() + 1):
        k = _iroot(m, q)
        if k >= 2 and k ** q == m:
            out.append((q, k))
    return out


# rank ----------------------------------------------------------------------------

def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_exponent_rows(v: RatioVector) -> tuple[list[int], list[list[int]]]:
    """Primes involved and one exponent row per ratio (numerator minus denominator)."""
    facts = []
    for r in v.ratios:
        f = dict(_factor(r.numerator))
        for p, e in _factor(r.denominator).items():
            f[p] = f.get(p, 0) - e
        facts.append(f)
    primes = sorted({p for f in facts for p in f})
    return primes, [[f.get(p, 0) for p in primes] for f in facts]


def integer_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    m = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = max((len(r) for r in m), default=0)
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][col]:
                c = m[i][col]
                m[i] = [p[col] * x - c * y for x, y in zip(m[i], p)]
        rank += 1
    return rank


def rank(v: RatioVector) -> int:
    """Rank of the multiplicative group generated by the ratios."""
    return integer_rank(prime_exponent_rows(v)[1])


def power_vector_rank(v: PowerVector) -> int:
    """Every entry is a power of one lambda, so the generated group has rank 1."""
    return 1
