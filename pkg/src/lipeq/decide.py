"""Rule engine deciding Lipschitz equivalence of two contraction vectors.

Rules run in a fixed order and the first one that applies wins:

    R0  identical multisets
    R1  different Hausdorff dimension            -> NotEquivalent
    R2  one side homogeneous                     -> decided exactly
    R3  two entries on both sides                -> decided exactly
    R4  rational ratios of full rank (ratio mode) -> decided exactly
    R5  three entries against two                -> several exclusions and one classification
    R6  bounded chain search                     -> Equivalent or Unknown

Every Equivalent verdict carrying a structural certificate is re-verified
before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Optional, Union

from .derivation import (
    DEFAULT_BUDGET,
    CertificateChain,
    ExpMultiset,
    HomogeneousCertificate,
    Link,
    SearchBudget,
    WeightedPartition,
    equivalence_chain,
    partition_for_homogeneous,
)
from .errors import CertificateError, InputError
from .irreducibility import FJCriterion, quadrinomial_irreducible
from .polycore import SignedInterval, parse_poly, sturm_count
from .vectors import (
    PowerVector,
    RatioVector,
    char_poly,
    is_homogeneous,
    perfect_power_exponents,
    rank,
    same_dimension,
    separating_intervals,
)

EQUIVALENT = "Equivalent"
NOT_EQUIVALENT = "NotEquivalent"
UNKNOWN = "Unknown"
OUTCOMES = (EQUIVALENT, NOT_EQUIVALENT, UNKNOWN)

# (a, {b, c}, {d, e}) with a = b + c, gcd 1, that are equivalent
THREE_TWO_EQUIVALENT = {
    (4, frozenset({1, 3}), frozenset({1, 2})),
    (8, frozenset({1, 7}), frozenset({1, 5})),
    (8, frozenset({1, 7}), frozenset({2, 3})),
}


@dataclass(frozen=True)
class TheoremInstance:
    name: str
    parameters: dict = field(default_factory=dict)

    kind = "theorem"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "name": self.name, "parameters": self.parameters}

    @classmethod
    def from_dict(cls, d: dict) -> "TheoremInstance":
        return cls(d["name"], dict(d.get("parameters", {})))


@dataclass(frozen=True)
class PermutationCertificate:
    vectors: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]

    kind = "permutation"

    def verify(self) -> bool:
        a, b = self.vectors
        return sorted(a) == sorted(b)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "vectors": [[str(x) for x in v] for v in self.vectors]}

    @classmethod
    def from_dict(cls, d: dict) -> "PermutationCertificate":
        a, b = (tuple(Fraction(x) for x in v) for v in d["vectors"])
        return cls((a, b))


Certificate = Union[CertificateChain, HomogeneousCertificate, PermutationCertificate, TheoremInstance]


def certificate_from_dict(d: dict) -> Certificate:
    if not isinstance(d, dict):
        raise InputError("certificate must be a JSON object")
    kind = d.get("kind")
    try:
        if kind == "chain":
            return CertificateChain.from_dict(d)
        if kind == "homogeneous":
            return HomogeneousCertificate.from_dict(d)
        if kind == "permutation":
            return PermutationCertificate.from_dict(d)
        if kind == "theorem":
            return TheoremInstance.from_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed {kind} certificate: {exc}") from None
    raise InputError(f"unknown certificate kind {kind!r}")


def verify_certificate(cert: Certificate) -> bool:
    """Structural re-check; theorem citations are not structurally checkable."""
    if isinstance(cert, TheoremInstance):
        return False
    try:
        return bool(cert.verify())
    except (InputError, ValueError, TypeError, IndexError):
        return False


# witnesses ---------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    kind: str  # DimensionMismatch | IrreducibleQuadrinomial | MaxExponent | TheoremInstance
    data: dict

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.data}

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        d = dict(d)
        return cls(d.pop("kind"), d)


def check_witness(wit: Witness) -> bool:
    """Re-check a witness from its own data (theorem citations pass through)."""
    d = wit.data
    if wit.kind == "DimensionMismatch":
        ivs = [SignedInterval.from_dict(x) for x in d["intervals"]]
        polys = [parse_poly(p) for p in d["char_polys"]]
        return (all(sturm_count(p, iv) == 1 for p, iv in zip(polys, ivs))
                and ivs[0].disjoint(ivs[1]))
    if wit.kind == "IrreducibleQuadrinomial":
        return FJCriterion.from_dict(d).irreducible
    if wit.kind == "MaxExponent":
        return max(d["three"]) < max(d["two"])
    return wit.kind == "TheoremInstance"


# verdicts ------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    outcome: str
    rule: str
    certificate: Optional[Certificate] = None
    witness: Optional[Witness] = None
    inputs: dict = field(default_factory=dict)
    budget: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "rule": self.rule,
            "certificate": self.certificate.to_dict() if self.certificate is not None else None,
            "witness": self.witness.to_dict() if self.witness is not None else None,
            "inputs": self.inputs,
            "budget": self.budget,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Verdict":
        cert = d.get("certificate")
        wit = d.get("witness")
        return cls(
            d["outcome"], d["rule"],
            certificate_from_dict(cert) if cert is not None else None,
            Witness.from_dict(wit) if wit is not None else None,
            dict(d.get("inputs") or {}),
            d.get("budget"),
        )


def _power(x) -> PowerVector:
    if isinstance(x, PowerVector):
        return x
    if isinstance(x, ExpMultiset):
        return PowerVector(x.entries)
    return PowerVector(tuple(x))


def _scale_partition(p: WeightedPartition, g: int) -> WeightedPartition:
    return WeightedPartition(tuple(b * g for b in p.base), p.words, tuple(x * g for x in p.weights))


def scale_chain(chain: CertificateChain, g: int) -> CertificateChain:
    """The same chain with every exponent multiplied by ``g`` (lambda -> lambda^(1/g))."""
    return CertificateChain(
        tuple(ExpMultiset(tuple(e * g for e in v.entries)) for v in chain.vectors),
        tuple(Link(_scale_partition(l.left, g), _scale_partition(l.right, g)) for l in chain.links),
    )


def _reduced_chain(v: PowerVector, w: PowerVector, budget: SearchBudget) -> Optional[CertificateChain]:
    g = reduce(gcd, v.exponents + w.exponents)
    rv = ExpMultiset(tuple(e // g for e in v.exponents))
    rw = ExpMultiset(tuple(e // g for e in w.exponents))
    chain = equivalence_chain(rv, rw, budget)
    return scale_chain(chain, g) if chain is not None else None


def _equivalent_by_theorem(v, w, rule, name, params, budget) -> Verdict:
    chain = _reduced_chain(v, w, budget)
    cert = chain if chain is not None else TheoremInstance(name, params)
    return Verdict(EQUIVALENT, rule, certificate=cert)


def _not_equivalent(rule: str, name: str, params: dict) -> Verdict:
    return Verdict(NOT_EQUIVALENT, rule, witness=Witness("TheoremInstance", {"name": name, "parameters": params}))


def _homogeneous_rule(v: PowerVector, w: PowerVector) -> Optional[Verdict]:
    for hom, other, flipped in ((v, w, False), (w, v, True)):
        h = is_homogeneous(hom)
        if h is None:
            continue
        a, m = h
        tried = []
        for q, k in perfect_power_exponents(m):
            tried.append([q, k])
            if any((q * b) % a for b in other.exponents):
                continue
            ps = [q * b // a for b in other.exponents]
            if sum(Fraction(1, k ** p) for p in ps) != 1:
                continue
            hom_part = partition_for_homogeneous(k, [q] * m)
            other_part = partition_for_homogeneous(k, ps)
            parts = (other_part, hom_part) if flipped else (hom_part, other_part)
            cert = HomogeneousCertificate(
                k, q, Fraction(a, q),
                (ExpMultiset(v.exponents), ExpMultiset(w.exponents)), parts)
            return Verdict(EQUIVALENT, "R2", certificate=cert)
        return _not_equivalent("R2", "homogeneous", {
            "homogeneous_side": "beta" if flipped else "alpha",
            "a": a, "m": m, "other": list(other.exponents), "tried": tried})
    return None


def _two_branch_rule(v: PowerVector, w: PowerVector, budget: SearchBudget) -> Verdict:
    sv, sw = set(v.exponents), set(w.exponents)
    for x, y in ((sv, sw), (sw, sv)):
        t = min(x)
        if x == {5 * t, t} and y == {3 * t, 2 * t}:
            return _equivalent_by_theorem(v, w, "R3", "two-branch", {"t": t}, budget)
    return _not_equivalent("R3", "two-branch", {"alpha": list(v.exponents), "beta": list(w.exponents)})


def _three_two_rule(v: PowerVector, w: PowerVector, budget: SearchBudget) -> Optional[Verdict]:
    three, two = (v, w) if len(v) == 3 else (w, v)
    a, b, c = sorted(three.exponents, reverse=True)
    d, e = sorted(two.exponents, reverse=True)
    if a < d:
        return Verdict(NOT_EQUIVALENT, "R5", witness=Witness(
            "MaxExponent", {"three": [a, b, c], "two": [d, e]}))
    if len({a, b, c}) < 3:
        # collected characteristic polynomial is not a quadrinomial
        return None
    fj = quadrinomial_irreducible(a, b, c)
    if fj.irreducible:
        return Verdict(NOT_EQUIVALENT, "R5", witness=Witness("IrreducibleQuadrinomial", fj.to_dict()))
    if a == b + c and gcd(gcd(a, b), c) == 1:
        params = {"a": a, "b": b, "c": c, "d": d, "e": e}
        if (a, frozenset({b, c}), frozenset({d, e})) in THREE_TWO_EQUIVALENT:
            return _equivalent_by_theorem(v, w, "R5", "three-two classification", params, budget)
        return _not_equivalent("R5", "three-two classification", params)
    return None


def _check(verdict: Verdict, v, w) -> Verdict:
    if verdict.outcome != EQUIVALENT:
        return verdict
    cert = verdict.certificate
    if cert is None:
        raise CertificateError("Equivalent verdict without certificate")
    if isinstance(cert, TheoremInstance):
        return verdict
    if not verify_certificate(cert):
        raise CertificateError(f"certificate for rule {verdict.rule} failed re-verification")
    if isinstance(cert, PermutationCertificate):
        ok = cert.vectors == (v, w)
    else:
        ok = (cert.source, cert.target) == (ExpMultiset(v), ExpMultiset(w))
    if not ok:
        raise CertificateError("certificate endpoints do not match the queried vectors")
    return verdict


def decide(v, w, budget: SearchBudget = DEFAULT_BUDGET) -> Verdict:
    v, w = _power(v), _power(w)
    verdict = _decide(v, w, budget)
    verdict = _check(verdict, v.exponents, w.exponents)
    return Verdict(verdict.outcome, verdict.rule, verdict.certificate, verdict.witness,
                   {"mode": "power", "alpha": list(v.exponents), "beta": list(w.exponents)},
                   budget.to_dict())


def _decide(v: PowerVector, w: PowerVector, budget: SearchBudget) -> Verdict:
    if v.exponents == w.exponents:
        m = ExpMultiset(v.exponents)
        return Verdict(EQUIVALENT, "R0", certificate=CertificateChain((m,), ()))

    if not same_dimension(v, w):
        iv, iw = separating_intervals(v, w)
        return Verdict(NOT_EQUIVALENT, "R1", witness=Witness("DimensionMismatch", {
            "char_polys": [str(char_poly(v)), str(char_poly(w))],
            "intervals": [iv.to_dict(), iw.to_dict()]}))

    verdict = _homogeneous_rule(v, w)
    if verdict is not None:
        return verdict

    if len(v) == 2 and len(w) == 2:
        return _two_branch_rule(v, w, budget)

    if sorted((len(v), len(w))) == [2, 3]:
        verdict = _three_two_rule(v, w, budget)
        if verdict is not None:
            return verdict

    chain = equivalence_chain(ExpMultiset(v.exponents), ExpMultiset(w.exponents), budget)
    if chain is not None:
        return Verdict(EQUIVALENT, "R6", certificate=chain)
    return Verdict(UNKNOWN, "R6")


def decide_ratio(v, w) -> Verdict:
    """Ratio mode: only the full-rank permutation theorem is available."""
    v = v if isinstance(v, RatioVector) else RatioVector(tuple(v))
    w = w if isinstance(w, RatioVector) else RatioVector(tuple(w))
    inputs = {"mode": "ratio", "alpha": [str(x) for x in v.ratios], "beta": [str(x) for x in w.ratios]}
    if v.is_permutation_of(w):
        verdict = Verdict(EQUIVALENT, "R0", certificate=PermutationCertificate((v.ratios, w.ratios)))
        verdict = _check(verdict, v.ratios, w.ratios)
    elif len(v) == len(w) and (rank(v) == len(v) or rank(w) == len(w)):
        verdict = _not_equivalent("R4", "rank", {
            "m": len(v), "rank_alpha": rank(v), "rank_beta": rank(w)})
    else:
        verdict = Verdict(UNKNOWN, "R4")
    return Verdict(verdict.outcome, verdict.rule, verdict.certificate, verdict.witness, inputs, None)
