"""
Finitely generated subloops of the free Steiner loop.

A generating tuple Y is reducible when some entry y_i can be shortened by
multiplying it with an element of the subloop generated by the other entries.
Irreducible tuples are exactly the free isometric ones, which is what makes
membership a plain tree recursion and lets nielsen_reduce terminate on weight.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

from steiner.config import get_settings
from steiner.errors import PreconditionError, ResourceLimitError
from steiner.words import IDENTITY, SWord, _cmp, leaf, mult, render, substitute, word_key

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParseEmpty:
    """Parse of the identity."""


@dataclass(frozen=True)
class LeafRef:
    index: int


@dataclass(frozen=True)
class Node:
    left: "ParseTree"
    right: "ParseTree"


ParseTree = Union[ParseEmpty, LeafRef, Node]

EMPTY_PARSE = ParseEmpty()


@dataclass(frozen=True)
class GenTuple:
    entries: tuple[SWord, ...]

    @classmethod
    def of(cls, *words: SWord) -> "GenTuple":
        return cls(tuple(words))

    @property
    def weight(self) -> int:
        return sum(entry.length for entry in self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, item):
        return self.entries[item]

    def render(self) -> str:
        return "{" + ", ".join(render(entry) for entry in self.entries) + "}"


GenTupleLike = Union[GenTuple, Sequence[SWord]]


@dataclass(frozen=True)
class ReductionStep:
    """Entry i of the tuple is replaced by after = before · reducer_word."""
    i: int
    reducer_parse: ParseTree
    reducer_word: SWord
    before: SWord
    after: SWord


@dataclass(frozen=True)
class NielsenResult:
    """
    reduced generates the same subloop as the input. forward[k] expresses
    reduced[k] over the input entries, backward[j] expresses input entry j
    over the reduced entries. dropped lists input indices that collapsed to e.
    """
    reduced: GenTuple
    steps: tuple[ReductionStep, ...]
    dropped: tuple[int, ...]
    forward: tuple[ParseTree, ...]
    backward: tuple[ParseTree, ...]


def _entries(tuple_like: GenTupleLike) -> tuple[SWord, ...]:
    if isinstance(tuple_like, GenTuple):
        return tuple_like.entries
    return tuple(tuple_like)


def evaluate(tree: ParseTree, entries: GenTupleLike) -> SWord:
    entries = _entries(entries)
    if isinstance(tree, ParseEmpty):
        return IDENTITY
    if isinstance(tree, LeafRef):
        return entries[tree.index]
    return mult(evaluate(tree.left, entries), evaluate(tree.right, entries))


def weighted_length(tree: ParseTree, entries: GenTupleLike) -> int:
    entries = _entries(entries)
    if isinstance(tree, ParseEmpty):
        return 0
    if isinstance(tree, LeafRef):
        return entries[tree.index].length
    return weighted_length(tree.left, entries) + weighted_length(tree.right, entries)


def substitute_parse(tree: ParseTree, mapping: Sequence[ParseTree]) -> ParseTree:
    """Replace every LeafRef(j) by mapping[j]."""
    if isinstance(tree, ParseEmpty):
        return tree
    if isinstance(tree, LeafRef):
        return mapping[tree.index]
    return Node(substitute_parse(tree.left, mapping), substitute_parse(tree.right, mapping))


def _replace_leaf(tree: ParseTree, index: int, replacement: ParseTree) -> ParseTree:
    if isinstance(tree, ParseEmpty):
        return tree
    if isinstance(tree, LeafRef):
        return replacement if tree.index == index else tree
    return Node(_replace_leaf(tree.left, index, replacement), _replace_leaf(tree.right, index, replacement))


def _drop_index(tree: ParseTree, index: int) -> ParseTree:
    if isinstance(tree, ParseEmpty):
        return tree
    if isinstance(tree, LeafRef):
        return LeafRef(tree.index - 1) if tree.index > index else tree
    return Node(_drop_index(tree.left, index), _drop_index(tree.right, index))


def render_parse(tree: ParseTree) -> str:
    if isinstance(tree, ParseEmpty):
        return "e"
    if isinstance(tree, LeafRef):
        return f"y{tree.index + 1}"
    return f"({render_parse(tree.left)} {render_parse(tree.right)})"


def closure(tuple_like: GenTupleLike, max_len: int, limit: Optional[int] = None) -> set[SWord]:
    """
    Fixpoint of pairwise products starting from the entries and e, keeping
    only words of length <= max_len.
    """
    if max_len < 0:
        raise PreconditionError("max_len must be non-negative")
    limit = limit or get_settings().max_closure_size
    elements = {IDENTITY}
    elements.update(entry for entry in _entries(tuple_like) if entry.length <= max_len)
    frontier = list(elements)
    while frontier:
        known = list(elements)
        fresh = []
        for a in frontier:
            for b in known:
                product = mult(a, b)
                if product.length <= max_len and product not in elements:
                    elements.add(product)
                    fresh.append(product)
                    if len(elements) > limit:
                        raise ResourceLimitError("closure size", limit)
        frontier = fresh
    return elements


def _parse(word: SWord, lookup: dict[SWord, int]) -> Optional[ParseTree]:
    if word.is_identity:
        return EMPTY_PARSE
    index = lookup.get(word)
    if index is not None:
        return LeafRef(index)
    if not word.is_pair:
        return None
    left = _parse(word.first, lookup)
    if left is None:
        return None
    right = _parse(word.second, lookup)
    if right is None:
        return None
    return Node(left, right)


def _lookup(entries: Sequence[SWord]) -> dict[SWord, int]:
    lookup = {}
    for index, entry in enumerate(entries):
        lookup.setdefault(entry, index)
    return lookup


def membership(word: SWord, tuple_like: GenTupleLike) -> Optional[ParseTree]:
    """
    Parse of word over an irreducible tuple, or None when word is not in
    the generated subloop.
    """
    entries = _entries(tuple_like)
    if not is_irreducible(entries):
        raise PreconditionError("membership needs an irreducible tuple; run nielsen_reduce first")
    return _parse(word, _lookup(entries))


def _candidates(y: SWord, reduced: Sequence[SWord]) -> list[tuple[SWord, SWord, ParseTree]]:
    """(after, reducer, parse over reduced) for every way to shorten y by S(reduced)."""
    lookup = _lookup(reduced)
    parse = _parse(y, lookup)
    if parse is not None:
        return [(IDENTITY, y, parse)]
    found = []
    if y.is_pair:
        for factor in (y.first, y.second):
            parse = _parse(factor, lookup)
            if parse is not None:
                found.append((y.other_factor(factor), factor, parse))
    for index, entry in enumerate(reduced):
        if entry.has_factor(y):
            rest = entry.other_factor(y)
            if rest.length < y.length:
                found.append((rest, entry, LeafRef(index)))
    return found


def find_reduction(tuple_like: GenTupleLike) -> Optional[ReductionStep]:
    """
    First length-reducing step for the tuple, or None when it is irreducible.

    Tie-break: smallest entry index, then shortest result, then the least
    reducer. The reducer parse refers to indices of the given tuple.
    """
    entries = _entries(tuple_like)
    if not entries:
        raise PreconditionError("find_reduction needs a nonempty tuple")
    if any(entry.is_identity for entry in entries):
        raise PreconditionError("find_reduction needs entries different from e")
    for i, y in enumerate(entries):
        positions = [k for k in range(len(entries)) if k != i]
        others = nielsen_reduce(tuple(entries[k] for k in positions))
        found = _candidates(y, others.reduced.entries)
        if not found:
            continue
        after, reducer, parse = min(found, key=lambda c: (c[0].length, word_key(c[1])))
        lifted = substitute_parse(substitute_parse(parse, others.forward),
                                  [LeafRef(k) for k in positions])
        logger.debug("Entry %d: %s -> %s by %s", i, render(y), render(after), render(reducer))
        return ReductionStep(i=i, reducer_parse=lifted, reducer_word=reducer, before=y, after=after)
    return None


def is_irreducible(tuple_like: GenTupleLike) -> bool:
    entries = _entries(tuple_like)
    return not entries or find_reduction(entries) is None


def nielsen_reduce(tuple_like: GenTupleLike) -> NielsenResult:
    """
    Iterate find_reduction until the tuple is irreducible. Entries equal to
    e, initially or after a step, are dropped.
    """
    return _nielsen_reduce(_entries(tuple_like))


@lru_cache(maxsize=8192)
def _nielsen_reduce(entries: tuple[SWord, ...]) -> NielsenResult:
    current: list[SWord] = []
    origin: list[int] = []
    forward: list[ParseTree] = []
    backward: list[ParseTree] = []
    dropped: list[int] = []
    for k, entry in enumerate(entries):
        if entry.is_identity:
            dropped.append(k)
            backward.append(EMPTY_PARSE)
            continue
        backward.append(LeafRef(len(current)))
        current.append(entry)
        origin.append(k)
        forward.append(LeafRef(k))

    steps = []
    while current:
        step = find_reduction(current)
        if step is None:
            break
        steps.append(step)
        i, reducer = step.i, step.reducer_parse
        forward[i] = Node(forward[i], substitute_parse(reducer, forward))
        if step.after.is_identity:
            backward = [_drop_index(_replace_leaf(tree, i, reducer), i) for tree in backward]
            dropped.append(origin.pop(i))
            current.pop(i)
            forward.pop(i)
        else:
            replacement = Node(LeafRef(i), reducer)
            backward = [_replace_leaf(tree, i, replacement) for tree in backward]
            current[i] = step.after

    return NielsenResult(reduced=GenTuple(tuple(current)), steps=tuple(steps),
                         dropped=tuple(sorted(dropped)), forward=tuple(forward), backward=tuple(backward))


def is_free_isometric_upto(tuple_like: GenTupleLike, bound: int, limit: Optional[int] = None) -> bool:
    """
    Check that every reduced parse tree t over the tuple with weighted length
    <= bound evaluates to a word of length exactly ||t||, and that distinct
    trees give distinct words. Reduced parse trees are the S-words over the
    abstract alphabet {y_1, ..., y_m}.
    """
    entries = _entries(tuple_like)
    if any(entry.is_identity for entry in entries):
        return False
    limit = limit or get_settings().max_elements
    weights = [entry.length for entry in entries]
    by_weight: dict[int, list[SWord]] = {}
    images: set[SWord] = set()
    memo: dict = {}
    count = 0
    for total in range(1, bound + 1):
        level = [leaf(j) for j, weight in enumerate(weights) if weight == total]
        for first_weight in range(1, total):
            for first in by_weight.get(first_weight, ()):
                for second in by_weight.get(total - first_weight, ()):
                    if _cmp(first, second) > 0 and not first.has_factor(second):
                        level.append(SWord(first, second))
        for tree in level:
            count += 1
            if count > limit:
                raise ResourceLimitError("parse trees", limit)
            image = substitute(tree, entries, memo)
            if image.length != total or image in images:
                logger.debug("Parse %s breaks isometry: |%s| vs %d", tree, render(image), total)
                return False
            images.add(image)
        by_weight[total] = level
    return True
