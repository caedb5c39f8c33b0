from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from lipeq.derivation import (
    CertificateChain, ExpMultiset, Partition, SearchBudget, WeightedPartition, collapse,
    common_refinement, cut_partition, cuts_within, equivalence_chain, expand, kraft_sum,
    partition_for_homogeneous, verify_partition,
)
from lipeq.errors import KraftViolation, PatternAbsent, ValueAbsent
from lipeq.vectors import PowerVector, same_dimension

M = ExpMultiset.of

bases = st.lists(st.integers(1, 8), min_size=2, max_size=4).map(lambda xs: ExpMultiset(tuple(xs)))


def test_expand_examples():
    assert expand(M(2, 1), 2, M(2, 1)) == M(4, 3, 1)
    assert expand(M(8, 7, 1), 1, M(8, 7, 1)) == M(9, 8, 8, 7, 2)
    assert expand(M(3, 2), 3, M(3, 2)) == M(6, 5, 2)
    with pytest.raises(ValueAbsent):
        expand(M(3, 2), 4, M(3, 2))


def test_collapse_examples():
    assert collapse(M(4, 3, 1), 2, M(2, 1)) == M(2, 1)
    step = collapse(M(9, 8, 8, 7, 2), 6, M(3, 2))
    assert step == M(6, 8, 7, 2)
    assert collapse(step, 5, M(3, 2)) == M(6, 5, 2)
    with pytest.raises(PatternAbsent):
        collapse(M(2, 1), 1, M(2, 1))


def test_cuts_within_examples():
    cuts = cuts_within(M(2, 1), SearchBudget(max_weight=4, max_size=4))
    assert {M(2, 1), M(4, 3, 1), M(2, 3, 2)} <= cuts
    assert M(9, 8, 8, 7, 2) in cuts_within(M(3, 2), SearchBudget(max_weight=9, max_size=6))
    assert cuts_within(M(3, 2), SearchBudget(max_weight=3, max_size=2)) == {M(3, 2)}


def test_cuts_verify():
    base = M(3, 2)
    for cut in cuts_within(base, SearchBudget(max_weight=12, max_size=8)):
        p = cut_partition(base.entries, cut)
        assert verify_partition(p)
        assert sorted(p.weights) == list(cut.entries)


def test_common_refinement_examples():
    assert common_refinement(M(5, 1), M(3, 2)).multiset == M(2, 5, 6)
    assert common_refinement(M(8, 7, 1), M(3, 2)).multiset == M(2, 7, 8, 8, 9)
    assert common_refinement(M(1, 1, 1), M(1, 2)) is None
    ref = common_refinement(M(8, 4, 2), M(5, 1))
    assert ref.multiset == M(4, 6, 6, 8, 8, 10, 12)
    assert verify_partition(ref.left) and verify_partition(ref.right)
    assert sorted(ref.left.weights) == sorted(ref.right.weights) == list(ref.multiset.entries)


def test_equivalence_chain_examples():
    chain = equivalence_chain(M(8, 4, 2), M(3, 2))
    assert chain.vectors == (M(2, 4, 8), M(1, 5), M(2, 3))
    assert [l.refinement for l in chain.links] == [M(4, 6, 6, 8, 8, 10, 12), M(2, 5, 6)]
    assert chain.verify()
    chain = equivalence_chain(M(4, 3, 1), M(2, 1))
    assert len(chain.links) == 1 and chain.links[0].refinement == M(1, 3, 4)
    chain = equivalence_chain(M(3, 2), M(3, 2))
    assert chain.links == () and chain.verify()


def test_chain_round_trip_and_mutation():
    chain = equivalence_chain(M(8, 4, 2), M(3, 2))
    d = chain.to_dict()
    assert CertificateChain.from_dict(d) == chain
    d["links"][0]["right"]["weights"][0] += 1
    bad = CertificateChain.from_dict(d)
    assert not bad.verify()


def test_partition_for_homogeneous_examples():
    p = partition_for_homogeneous(2, [1, 2, 2])
    assert verify_partition(p) and sorted(p.lengths()) == [1, 2, 2]
    assert set(partition_for_homogeneous(2, [1, 1]).words) == {(1,), (2,)}
    p = partition_for_homogeneous(3, [1, 1, 2, 2, 2])
    assert len(p.words) == 5 and verify_partition(p)
    with pytest.raises(KraftViolation):
        partition_for_homogeneous(3, [1, 1] + [2] * 10)


def test_verify_partition_examples():
    p = WeightedPartition.build((2, 1), [(1,), (2, 1), (2, 2)])
    assert sorted(p.weights) == [2, 2, 3] and verify_partition(p)
    assert not verify_partition(Partition(2, ((1,), (2,), (2, 1))))
    assert not verify_partition(Partition(2, ((1,),)))


@given(bases, st.data())
def test_expand_preserves_dimension_and_collapse_inverts(base, data):
    state = base
    for _ in range(data.draw(st.integers(0, 3))):
        state = expand(state, data.draw(st.sampled_from(state.entries)), base)
    value = data.draw(st.sampled_from(state.entries))
    after = expand(state, value, base)
    assert same_dimension(PowerVector(state.entries), PowerVector(after.entries))
    assert collapse(after, value, base) == state
    assert verify_partition(cut_partition(base.entries, after))


@given(st.integers(2, 5), st.data())
def test_partition_for_homogeneous_properties(m, data):
    lengths = [1] * m
    for _ in range(data.draw(st.integers(0, 6))):
        i = data.draw(st.integers(0, len(lengths) - 1))
        t = lengths.pop(i)
        lengths.extend([t + 1] * m)
    assume(len(lengths) <= 40)
    p = partition_for_homogeneous(m, data.draw(st.permutations(lengths)))
    assert kraft_sum(p.lengths(), m) == Fraction(1)
    assert verify_partition(p)
    assert sorted(p.lengths()) == sorted(lengths)
    for a in p.words:
        for b in p.words:
            assert a == b or a != b[:len(a)]
