"""
Growth oracles independent of the automorphism representation: Coxeter
groups solved by braid moves, and free products of finite groups counted
through alternating normal forms.
"""

import logging
from collections import deque
from typing import Optional, Sequence

from steiner.config import get_settings
from steiner.errors import PreconditionError, ResourceLimitError

logger = logging.getLogger(__name__)

Word = tuple[int, ...]


class CoxeterGroup:
    """
    W = <s_0, ..., s_{r-1} | (s_i s_j)^m(i, j) = 1>. Matrix entries of None
    (or 0) stand for infinity. An element is stored as the set of its
    reduced words, all connected by braid moves; the least one is its name.
    """

    def __init__(self, matrix: Sequence[Sequence[Optional[int]]], names: Optional[Sequence[str]] = None,
                 max_elements: Optional[int] = None):
        self.rank = len(matrix)
        for i, row in enumerate(matrix):
            if len(row) != self.rank:
                raise PreconditionError("Coxeter matrix must be square")
            for j, entry in enumerate(row):
                if entry != matrix[j][i]:
                    raise PreconditionError("Coxeter matrix must be symmetric")
                if i == j and entry != 1:
                    raise PreconditionError("Coxeter matrix diagonal must be 1")
                if i != j and entry not in (None, 0) and entry < 2:
                    raise PreconditionError(f"m({i}, {j}) must be at least 2")
        self.matrix = [list(row) for row in matrix]
        self.names = list(names) if names else [f"s{i + 1}" for i in range(self.rank)]
        self.max_elements = max_elements or get_settings().max_elements
        self._moves = self._braid_moves()
        self._classes: dict[Word, frozenset[Word]] = {(): frozenset({()})}

    def _braid_moves(self) -> list[tuple[Word, Word]]:
        moves = []
        for s in range(self.rank):
            for t in range(self.rank):
                m = self.matrix[s][t]
                if s != t and m:
                    moves.append((tuple(s if k % 2 == 0 else t for k in range(m)),
                                  tuple(t if k % 2 == 0 else s for k in range(m))))
        return moves

    def _braid_class(self, word: Word) -> frozenset[Word]:
        seen = {word}
        queue = deque([word])
        while queue:
            current = queue.popleft()
            for left, right in self._moves:
                m = len(left)
                for p in range(len(current) - m + 1):
                    if current[p:p + m] == left:
                        moved = current[:p] + right + current[p + m:]
                        if moved not in seen:
                            seen.add(moved)
                            queue.append(moved)
        return frozenset(seen)

    def reduced_words(self, name: Word) -> frozenset[Word]:
        if name not in self._classes:
            self._classes[name] = self._braid_class(name)
        return self._classes[name]

    def multiply(self, name: Word, s: int) -> Word:
        """Name of g·s for g given by its name (least reduced word)."""
        words = self.reduced_words(name)
        for word in sorted(words):
            if word and word[-1] == s:
                # deletion: s is a right descent, so g·s drops the last letter
                return self._name(word[:-1])
        return self._name(name + (s,))

    def _name(self, reduced: Word) -> Word:
        words = self._braid_class(reduced)
        name = min(words)
        self._classes[name] = words
        return name

    def normal_form(self, word: Sequence[int]) -> Word:
        name: Word = ()
        for s in word:
            name = self.multiply(name, s)
        return name

    def spheres(self, depth: int) -> list[int]:
        sizes = [1]
        current = [()]
        total = 1
        for d in range(1, depth + 1):
            members: dict[Word, Word] = {}
            names: list[Word] = []
            for name in current:
                descents = {word[-1] for word in self.reduced_words(name) if word}
                for s in range(self.rank):
                    if s in descents:
                        continue
                    seed = name + (s,)
                    if seed in members:
                        continue
                    words = self._braid_class(seed)
                    new_name = min(words)
                    self._classes[new_name] = words
                    for word in words:
                        members[word] = new_name
                    names.append(new_name)
            total += len(names)
            if total > self.max_elements:
                raise ResourceLimitError("Coxeter elements", self.max_elements)
            logger.debug("Coxeter sphere %d: %d elements", d, len(names))
            sizes.append(len(names))
            current = names
        return sizes


def free_product_spheres(factor_spheres: Sequence[Sequence[int]], depth: int) -> list[int]:
    """
    Sphere sizes of a free product of finite groups, each given by its own
    sphere sizes, counting alternating normal forms of nontrivial syllables.
    """
    ending = [[0] * len(factor_spheres) for _ in range(depth + 1)]
    sizes = [1]
    for total in range(1, depth + 1):
        for k, spheres in enumerate(factor_spheres):
            count = spheres[total] if total < len(spheres) else 0
            for length in range(1, min(total, len(spheres) - 1) + 1):
                if length == total:
                    continue
                before = sum(ending[total - length][j] for j in range(len(factor_spheres)) if j != k)
                count += spheres[length] * before
            ending[total][k] = count
        sizes.append(sum(ending[total]))
    return sizes
