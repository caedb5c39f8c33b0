import json
from itertools import combinations_with_replacement
from math import gcd

import pytest

from lipeq.decide import (
    EQUIVALENT, NOT_EQUIVALENT, UNKNOWN, Verdict, certificate_from_dict, check_witness,
    Witness, decide, decide_ratio, verify_certificate,
)
from lipeq.derivation import CertificateChain, ExpMultiset, SearchBudget
from lipeq.errors import InputError
from lipeq.irreducibility import quadrinomial_irreducible
from lipeq.vectors import PowerVector, same_dimension


def _sweep():
    for a in range(3, 13):
        for b in range(1, a):
            c = a - b
            if b < c or gcd(gcd(a, b), c) != 1:
                continue
            for d in range(2, 11):
                for e in range(1, d):
                    yield (a, b, c), (d, e)


SWEEP = list(_sweep())


def test_examples():
    v = decide((4, 3, 1), (2, 1))
    assert v.outcome == EQUIVALENT and v.rule in ("R5", "R6")
    assert verify_certificate(v.certificate)
    v = decide((5, 3, 1), (3, 1))
    assert v.outcome == NOT_EQUIVALENT
    assert v.witness.kind in ("IrreducibleQuadrinomial", "DimensionMismatch")
    v = decide((1, 1, 1), (2, 1))
    assert v.outcome == NOT_EQUIVALENT and v.rule in ("R1", "R2")
    v = decide((2, 2, 2, 2), (1, 2, 2))
    assert (v.outcome, v.rule) == (EQUIVALENT, "R2")
    assert (v.certificate.k, v.certificate.q) == (2, 2)
    v = decide((8, 4, 2), (3, 2))
    assert (v.outcome, v.rule) == (EQUIVALENT, "R6")
    assert v.certificate.vectors[1] == ExpMultiset.of(5, 1)


def test_equal_inputs():
    v = decide((3, 2), (2, 3))
    assert (v.outcome, v.rule) == (EQUIVALENT, "R0")
    assert verify_certificate(v.certificate)


def test_two_branch():
    assert decide((10, 2), (6, 4)).outcome == EQUIVALENT
    v = decide((5, 1), (3, 2))
    assert (v.outcome, v.rule) == (EQUIVALENT, "R3")
    assert verify_certificate(v.certificate)


def test_irreducible_quadrinomial_witness_rechecks():
    wit = Witness("IrreducibleQuadrinomial", quadrinomial_irreducible(5, 3, 1).to_dict())
    assert check_witness(wit)
    wit = Witness("IrreducibleQuadrinomial", quadrinomial_irreducible(8, 7, 1).to_dict())
    assert not check_witness(wit)


def test_witnesses_recheck():
    for (a, b, c), (d, e) in SWEEP[:200]:
        v = decide((a, b, c), (d, e))
        if v.witness is not None:
            assert check_witness(v.witness)


def test_ratio_examples():
    assert decide_ratio(("1/2", "1/3"), ("1/3", "1/2")).outcome == EQUIVALENT
    v = decide_ratio(("1/2", "1/3"), ("1/2", "1/5"))
    assert (v.outcome, v.rule) == (NOT_EQUIVALENT, "R4")
    assert decide_ratio(("1/2", "1/4"), ("1/2", "1/8")).outcome == UNKNOWN


def test_certificate_mutation_detected():
    v = decide((8, 4, 2), (3, 2))
    d = v.certificate.to_dict()
    d["links"][1]["left"]["weights"][0] += 1
    assert not verify_certificate(CertificateChain.from_dict(d))
    trivial = CertificateChain((ExpMultiset.of(3, 2),), ())
    assert verify_certificate(trivial)


def test_certificate_from_dict_rejects_garbage():
    with pytest.raises(InputError):
        certificate_from_dict({"kind": "nope"})
    with pytest.raises(InputError):
        certificate_from_dict([1, 2])


def test_sweep_order_independence_r1_and_round_trip():
    for v, w in SWEEP:
        fwd, back = decide(v, w), decide(w, v)
        assert {fwd.outcome, back.outcome} != {EQUIVALENT, NOT_EQUIVALENT}
        for verdict in (fwd, back):
            if verdict.outcome == EQUIVALENT:
                assert same_dimension(PowerVector(v), PowerVector(w))
                assert verify_certificate(verdict.certificate)
            text = json.dumps(verdict.to_dict())
            assert Verdict.from_dict(json.loads(text)) == verdict


def test_budget_recorded():
    b = SearchBudget(max_weight=10, max_size=8, max_chain=1)
    v = decide((8, 4, 2), (3, 2), b)
    assert v.budget == b.to_dict()
    assert v.outcome == UNKNOWN


def test_mixed_lengths_search():
    sizes = list(combinations_with_replacement(range(1, 5), 3))
    for v in sizes:
        verdict = decide(v, (2, 1))
        if verdict.outcome == EQUIVALENT:
            assert verify_certificate(verdict.certificate)
