"""Derivation calculus on exponent multisets.

A contraction vector ``(lam^b_1, ..., lam^b_m)`` is a tree: the root has
children of weight ``b_1..b_m``, each child again has ``m`` children, and
so on, weights adding along paths.  A cut of the tree (a complete
prefix-free word list) gives a derived vector, namely the multiset of leaf
weights.

Counting argument used throughout: a multiset ``M`` is a cut of the tree
with base ``B`` iff ``P_M(z) - 1 = (P_B(z) - 1) * N(z)`` where ``N`` has
non-negative coefficients (``N`` counts expanded nodes per weight).  ``N``
is recovered one weight at a time in increasing order, which is how both
:func:`cut_partition` and the refinement search walk the tree.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .errors import InputError, KraftViolation, PatternAbsent, ValueAbsent
from .vectors import PowerVector, same_dimension


# multisets ---------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class ExpMultiset:
    """Sorted (ascending) multiset of positive integers."""

    entries: tuple[int, ...]

    def __post_init__(self):
        es = tuple(sorted(int(e) for e in self.entries))
        if not es:
            raise InputError("empty multiset")
        if es[0] <= 0:
            raise InputError("multiset entries must be positive")
        object.__setattr__(self, "entries", es)

    @classmethod
    def of(cls, *entries: int) -> "ExpMultiset":
        return cls(entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return "{" + ",".join(map(str, self.entries)) + "}"

    def counts(self) -> Counter:
        return Counter(self.entries)


MultisetLike = Union[ExpMultiset, PowerVector, Iterable[int]]


def as_multiset(x: MultisetLike) -> ExpMultiset:
    if isinstance(x, ExpMultiset):
        return x
    if isinstance(x, PowerVector):
        return ExpMultiset(x.exponents)
    return ExpMultiset(tuple(x))


@dataclass(frozen=True)
class SearchBudget:
    max_weight: int = 24
    max_size: int = 64
    max_chain: int = 3

    def __post_init__(self):
        if min(self.max_weight, self.max_size, self.max_chain) <= 0:
            raise InputError("budget caps must be positive")

    def to_dict(self) -> dict:
        return {"max_weight": self.max_weight, "max_size": self.max_size, "max_chain": self.max_chain}


DEFAULT_BUDGET = SearchBudget()


# moves ---------------------------------------------------------------------------

def expand(state: MultisetLike, value: int, base: MultisetLike) -> ExpMultiset:
    """Replace one copy of ``value`` by its children ``value + b``."""
    st, bs = list(as_multiset(state)), as_multiset(base)
    if value not in st:
        raise ValueAbsent(f"{value} not in {as_multiset(state)}")
    st.remove(value)
    st.extend(value + b for b in bs)
    return ExpMultiset(tuple(st))


def collapse(state: MultisetLike, value: int, base: MultisetLike) -> ExpMultiset:
    """Inverse of :func:`expand`: merge the children ``value + b`` back into ``value``."""
    st = as_multiset(state)
    have = st.counts()
    need = Counter(value + b for b in as_multiset(base))
    if any(have[k] < n for k, n in need.items()):
        raise PatternAbsent(f"children of {value} under base {as_multiset(base)} not all in {st}")
    rest = list((have - need).elements())
    rest.append(value)
    return ExpMultiset(tuple(rest))


# partitions ------------------------------------------------------------------------

Word = tuple[int, ...]


def word_to_str(word: Word, base_size: int) -> str:
    if base_size <= 9:
        return "".join(map(str, word))
    return ".".join(map(str, word))


def word_from_str(s: str, base_size: int) -> Word:
    if not s:
        return ()
    if base_size <= 9 and "." not in s:
        return tuple(int(ch) for ch in s)
    return tuple(int(t) for t in s.split("."))


@dataclass(frozen=True)
class Partition:
    """Word list over the alphabet ``1..base_size``."""

    base_size: int
    words: tuple[Word, ...]

    def lengths(self) -> list[int]:
        return sorted(len(w) for w in self.words)

    def to_dict(self) -> dict:
        return {"base_size": self.base_size,
                "words": [word_to_str(w, self.base_size) for w in self.words]}

    @classmethod
    def from_dict(cls, d: dict) -> "Partition":
        m = int(d["base_size"])
        return cls(m, tuple(word_from_str(s, m) for s in d["words"]))


@dataclass(frozen=True)
class WeightedPartition:
    """Word list over a base vector; letter ``i`` carries weight ``base[i-1]``.

    ``base`` keeps the letter order, so it is not necessarily sorted.
    ``weights`` is the claimed multiset of word weights, sorted ascending.
    """

    base: tuple[int, ...]
    words: tuple[Word, ...]
    weights: tuple[int, ...]

    @classmethod
    def build(cls, base: Sequence[int], words: Iterable[Word]) -> "WeightedPartition":
        base = tuple(base)
        words = tuple(sorted(tuple(w) for w in words))
        return cls(base, words, tuple(sorted(word_weight(base, w) for w in words)))

    def to_dict(self) -> dict:
        m = len(self.base)
        return {"base": list(self.base),
                "words": [word_to_str(w, m) for w in self.words],
                "weights": list(self.weights)}

    @classmethod
    def from_dict(cls, d: dict) -> "WeightedPartition":
        base = tuple(int(b) for b in d["base"])
        return cls(base, tuple(word_from_str(s, len(base)) for s in d["words"]),
                   tuple(int(x) for x in d["weights"]))


def word_weight(base: Sequence[int], word: Word) -> int:
    return sum(base[i - 1] for i in word)


def _complete(words: list[Word], m: int) -> bool:
    # A word set is a complete prefix-free code iff it is {empty word}, or it
    # splits by first letter into m non-empty parts that are each complete.
    if not words:
        return False
    if any(not w for w in words):
        return len(words) == 1
    groups: dict[int, list[Word]] = {}
    for w in words:
        groups.setdefault(w[0], []).append(w[1:])
    if set(groups) != set(range(1, m + 1)):
        return False
    return all(_complete(g, m) for g in groups.values())


def is_complete_prefix_code(words: Sequence[Word], m: int) -> bool:
    if m < 1 or len(set(words)) != len(words):
        return False
    if any(not 1 <= ch <= m for w in words for ch in w):
        return False
    return _complete(list(words), m)


def kraft_sum(lengths: Iterable[int], m: int) -> Fraction:
    return sum((Fraction(1, m ** n) for n in lengths), Fraction(0))


def verify_partition(p: Union[WeightedPartition, Partition]) -> bool:
    """Structural check, recomputing everything from the words."""
    if isinstance(p, Partition):
        return is_complete_prefix_code(p.words, p.base_size)
    if len(p.base) < 2 or any(b <= 0 for b in p.base):
        return False
    if not is_complete_prefix_code(p.words, len(p.base)):
        return False
    return sorted(word_weight(p.base, w) for w in p.words) == sorted(p.weights)


def cut_partition(base: Sequence[int], cut: MultisetLike) -> WeightedPartition:
    """Word list realizing ``cut`` as a cut of the tree over ``base``.

    Raises PatternAbsent when ``cut`` is not a cut of that tree.
    """
    base = tuple(base)
    need = as_multiset(cut).counts()
    top = max(need)
    pending: dict[int, list[Word]] = {}
    for i, b in enumerate(base, 1):
        pending.setdefault(b, []).append((i,))
    leaves: list[Word] = []
    for u in range(1, top + 1):
        nodes = sorted(pending.pop(u, []))
        k = need.get(u, 0)
        if k > len(nodes):
            raise PatternAbsent(f"{as_multiset(cut)} is not a cut over base {base}")
        leaves.extend(nodes[:k])
        for node in nodes[k:]:
            for i, b in enumerate(base, 1):
                pending.setdefault(u + b, []).append(node + (i,))
    if pending:
        raise PatternAbsent(f"{as_multiset(cut)} is not a cut over base {base}")
    return WeightedPartition.build(base, leaves)


def is_cut(base: Sequence[int], cut: MultisetLike) -> bool:
    try:
        cut_partition(base, cut)
    except PatternAbsent:
        return False
    return True


def cuts_within(base: MultisetLike, budget: SearchBudget = DEFAULT_BUDGET) -> frozenset:
    """Every multiset reachable from ``base`` by expand moves inside the budget."""
    b = as_multiset(base)
    if len(b) < 2:
        raise InputError("base needs at least 2 entries")
    top, grow = max(b), len(b) - 1
    seen = {b}
    frontier = [b]
    while frontier:
        nxt = []
        for st in frontier:
            if len(st) + grow > budget.max_size:
                continue
            for value in sorted(set(st)):
                if value + top > budget.max_weight:
                    break
                new = expand(st, value, b)
                if new not in seen:
                    seen.add(new)
                    nxt.append(new)
        frontier = nxt
    return frozenset(seen)


# common refinement ---------------------------------------------------------------

class Refinement(NamedTuple):
    multiset: ExpMultiset
    left: WeightedPartition
    right: WeightedPartition


def _search_level(bv: tuple[int, ...], bw: tuple[int, ...], W: int, max_size: int) -> Optional[list[int]]:
    """Lexicographically least common cut with every entry <= W, or None.

    Walks weights upward keeping, for each tree, the number of still-open
    nodes per weight.  At weight u both trees must agree on how many open
    nodes become leaves; the rest are expanded.  Trying the largest leaf
    count first yields the lexicographically least sorted multiset.
    """
    mv, mw = max(bv), max(bw)
    lv, lw = len(bv), len(bw)
    pv = [0] * (W + 1)
    pw = [0] * (W + 1)
    for b in bv:
        pv[b] += 1
    for b in bw:
        pw[b] += 1
    leaves: list[int] = []
    failed: set = set()

    def rec(u: int, open_v: int, open_w: int) -> bool:
        if open_v == 0 and open_w == 0:
            return True
        if open_v == 0 or open_w == 0:
            return False
        while pv[u] == 0 and pw[u] == 0:
            u += 1
        nleaves = len(leaves)
        if nleaves + max(open_v, open_w) > max_size:
            return False
        key = (u, nleaves, tuple(pv[u:]), tuple(pw[u:]))
        if key in failed:
            return False
        av, aw = pv[u], pw[u]
        can_v = u + mv <= W
        can_w = u + mw <= W
        for m in range(min(av, aw), -1, -1):
            nv, nw = av - m, aw - m
            if (nv and not can_v) or (nw and not can_w):
                continue
            ov = open_v - av + nv * lv
            ow = open_w - aw + nw * lw
            if nleaves + m + max(ov, ow) > max_size:
                continue
            pv[u] = pw[u] = 0
            if nv:
                for b in bv:
                    pv[u + b] += nv
            if nw:
                for b in bw:
                    pw[u + b] += nw
            leaves.extend([u] * m)
            if rec(u + 1, ov, ow):
                return True
            del leaves[nleaves:]
            if nv:
                for b in bv:
                    pv[u + b] -= nv
            if nw:
                for b in bw:
                    pw[u + b] -= nw
            pv[u], pw[u] = av, aw
        failed.add(key)
        return False

    return list(leaves) if rec(1, lv, lw) else None


def common_refinement(v: MultisetLike, w: MultisetLike,
                      budget: SearchBudget = DEFAULT_BUDGET) -> Optional[Refinement]:
    """A multiset that is a cut of both trees, with the two witnessing word lists.

    Iterative deepening on the largest entry; among refinements with the
    smallest possible largest entry, the lexicographically least is returned.
    """
    v, w = as_multiset(v), as_multiset(w)
    bv, bw = v.entries, w.entries
    if v != w and not same_dimension(PowerVector(bv), PowerVector(bw)):
        return None
    for W in range(max(bv[-1], bw[-1]), budget.max_weight + 1):
        found = _search_level(bv, bw, W, budget.max_size)
        if found is not None:
            m = ExpMultiset(tuple(found))
            return Refinement(m, cut_partition(bv, m), cut_partition(bw, m))
    return None


# chains ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Link:
    left: WeightedPartition
    right: WeightedPartition

    @property
    def refinement(self) -> ExpMultiset:
        return ExpMultiset(self.left.weights)

    def to_dict(self) -> dict:
        return {"refinement": list(self.left.weights),
                "left": self.left.to_dict(), "right": self.right.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "Link":
        return cls(WeightedPartition.from_dict(d["left"]), WeightedPartition.from_dict(d["right"]))


@dataclass(frozen=True)
class CertificateChain:
    vectors: tuple[ExpMultiset, ...]
    links: tuple[Link, ...]

    kind = "chain"

    @property
    def source(self) -> ExpMultiset:
        return self.vectors[0]

    @property
    def target(self) -> ExpMultiset:
        return self.vectors[-1]

    def verify(self) -> bool:
        if not self.vectors or len(self.links) != len(self.vectors) - 1:
            return False
        for i, link in enumerate(self.links):
            if sorted(link.left.base) != list(self.vectors[i].entries):
                return False
            if sorted(link.right.base) != list(self.vectors[i + 1].entries):
                return False
            if not (verify_partition(link.left) and verify_partition(link.right)):
                return False
            if sorted(link.left.weights) != sorted(link.right.weights):
                return False
        return True

    def to_dict(self) -> dict:
        return {"kind": self.kind,
                "vectors": [list(v.entries) for v in self.vectors],
                "links": [l.to_dict() for l in self.links]}

    @classmethod
    def from_dict(cls, d: dict) -> "CertificateChain":
        return cls(tuple(ExpMultiset(tuple(v)) for v in d["vectors"]),
                   tuple(Link.from_dict(l) for l in d["links"]))


def chain_candidates(v: ExpMultiset, w: ExpMultiset) -> list[ExpMultiset]:
    """Intermediate vectors worth trying: small multisets sharing the root of ``v``."""
    top = max(v.entries[-1], w.entries[-1])
    size = max(len(v), len(w))
    pv = PowerVector(v.entries)
    out = []

    def gen(prefix: list[int], start: int, k: int):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for e in range(start, top + 1):
            prefix.append(e)
            yield from gen(prefix, e, k)
            prefix.pop()

    for k in range(2, size + 1):
        for t in gen([], 1, k):
            c = ExpMultiset(t)
            if c in (v, w):
                continue
            if same_dimension(pv, PowerVector(t)):
                out.append(c)
    return out


def equivalence_chain(v: MultisetLike, w: MultisetLike,
                      budget: SearchBudget = DEFAULT_BUDGET) -> Optional[CertificateChain]:
    """Shortest chain v = v0 ~ v1 ~ ... ~ vk = w of pairwise common refinements.

    Breadth-first over intermediate vectors (at most ``budget.max_chain`` of
    them); ties go to the earliest candidate in (size, lexicographic) order.
    """
    v, w = as_multiset(v), as_multiset(w)
    if v == w:
        return CertificateChain((v,), ())
    if not same_dimension(PowerVector(v.entries), PowerVector(w.entries)):
        return None

    cache: dict = {}

    def link(a: ExpMultiset, b: ExpMultiset) -> Optional[Link]:
        key = (a, b)
        if key not in cache:
            r = common_refinement(a, b, budget)
            cache[key] = None if r is None else Link(r.left, r.right)
        return cache[key]

    def build(path: list[ExpMultiset]) -> CertificateChain:
        links = tuple(link(a, b) for a, b in zip(path, path[1:]))
        chain = CertificateChain(tuple(path), links)
        assert chain.verify(), "refinement search produced an invalid link"
        return chain

    if link(v, w) is not None:
        return build([v, w])
    cands = chain_candidates(v, w)
    frontier = [[v]]
    visited = {v}
    for _ in range(budget.max_chain):
        nxt = []
        for path in frontier:
            for c in cands:
                if c in visited or link(path[-1], c) is None:
                    continue
                visited.add(c)
                nxt.append(path + [c])
        for path in nxt:
            if link(path[-1], w) is not None:
                return build(path + [w])
        frontier = nxt
    return None


# homogeneous partitions -------------------------------------------------------------

def partition_for_homogeneous(m: int, targets: Iterable[int]) -> Partition:
    """Complete prefix-free word list over ``1..m`` with the given length multiset.

    Induction on the longest length: the ``#long`` words of maximal length
    ``L`` are the ``m`` one-letter extensions of ``#long / m`` words of
    length ``L - 1``, which are built recursively together with the rest.
    """
    if m < 2:
        raise InputError("alphabet size must be >= 2")
    ts = sorted(int(t) for t in targets)
    if not ts or ts[0] <= 0:
        raise InputError("target lengths must be positive")
    if kraft_sum(ts, m) != 1:
        raise KraftViolation(f"sum of {m}^-a over {ts} is {kraft_sum(ts, m)}, not 1")
    return Partition(m, tuple(sorted(_homogeneous_words(m, ts))))


def _homogeneous_words(m: int, ts: list[int]) -> list[Word]:
    top = ts[-1]
    if top == 1:
        return [(i,) for i in range(1, m + 1)]
    short = [t for t in ts if t < top]
    n_long = len(ts) - len(short)
    r = m ** (top - 1) - sum(m ** (top - 1 - t) for t in short)
    assert n_long == m * r
    words = sorted(_homogeneous_words(m, short + [top - 1] * r))
    mids = [wd for wd in words if len(wd) == top - 1]
    grow = set(mids[len(mids) - r:])
    out = [wd for wd in words if wd not in grow]
    out.extend(wd + (i,) for wd in sorted(grow) for i in range(1, m + 1))
    return out


@dataclass(frozen=True)
class HomogeneousCertificate:
    """Both vectors as cuts of one k-ary tree whose letters weigh ``scale`` (in lambda-exponent units)."""

    k: int
    q: int
    scale: Fraction
    vectors: tuple[ExpMultiset, ExpMultiset]
    partitions: tuple[Partition, Partition]

    kind = "homogeneous"

    @property
    def source(self) -> ExpMultiset:
        return self.vectors[0]

    @property
    def target(self) -> ExpMultiset:
        return self.vectors[1]

    def verify(self) -> bool:
        if self.k < 2 or self.scale <= 0:
            return False
        for vec, p in zip(self.vectors, self.partitions):
            if p.base_size != self.k or not verify_partition(p):
                return False
            if sorted(len(wd) * self.scale for wd in p.words) != list(vec.entries):
                return False
        return True

    def to_dict(self) -> dict:
        return {"kind": self.kind, "k": self.k, "q": self.q, "scale": str(self.scale),
                "vectors": [list(v.entries) for v in self.vectors],
                "partitions": [p.to_dict() for p in self.partitions]}

    @classmethod
    def from_dict(cls, d: dict) -> "HomogeneousCertificate":
        vs = tuple(ExpMultiset(tuple(v)) for v in d["vectors"])
        ps = tuple(Partition.from_dict(p) for p in d["partitions"])
        if len(vs) != 2 or len(ps) != 2:
            raise InputError("homogeneous certificate needs two vectors and two partitions")
        return cls(int(d["k"]), int(d["q"]), Fraction(d["scale"]), vs, ps)
