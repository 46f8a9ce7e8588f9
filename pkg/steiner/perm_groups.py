"""
Permutation groups on {0, ..., degree-1} backed by sympy's Schreier-Sims
implementation, plus a naive closure used to cross-check group orders.

Products follow sympy: p*q applies p first, then q.
"""

import logging
from collections import deque
from typing import Iterable, Optional, Sequence, Union

from sympy.combinatorics import Permutation, PermutationGroup

from steiner.config import get_settings
from steiner.errors import ResourceLimitError
from steiner.resource import Resource

logger = logging.getLogger(__name__)

PermLike = Union[Permutation, Sequence[int]]


def as_permutation(perm: PermLike, degree: int) -> Permutation:
    if isinstance(perm, Permutation):
        return perm if perm.size == degree else Permutation(perm.array_form, size=degree)
    return Permutation(list(perm), size=degree)


class PermGroup(Resource):

    def __init__(self, degree: int, generators: Iterable[PermLike] = (), max_order: Optional[int] = None):
        self.degree = degree
        self.generators = [as_permutation(g, degree) for g in generators]
        self._group = PermutationGroup(self.generators or [Permutation(degree - 1)])
        max_order = max_order or get_settings().max_group_order
        if self._group.order() > max_order:
            raise ResourceLimitError("group order", max_order)

    @classmethod
    def from_sympy(cls, group: PermutationGroup, max_order: Optional[int] = None) -> "PermGroup":
        return cls(group.degree, group.generators, max_order)

    @property
    def order(self) -> int:
        return int(self._group.order())

    @property
    def base(self) -> list[int]:
        return list(self._group.base)

    @property
    def basic_orbit_sizes(self) -> list[int]:
        return [len(orbit) for orbit in self._group.basic_orbits]

    def contains(self, perm: PermLike) -> bool:
        return bool(self._group.contains(as_permutation(perm, self.degree)))

    def stabilizer(self, point: int) -> "PermGroup":
        return PermGroup.from_sympy(self._group.stabilizer(point))

    def orbit(self, point: int) -> set[int]:
        return set(self._group.orbit(point))

    def restrict(self, points: Sequence[int]) -> "PermGroup":
        """Action on the invariant subset points, relabelled 0..len(points)-1."""
        position = {point: k for k, point in enumerate(points)}
        generators = [[position[g(point)] for point in points] for g in self.generators]
        return PermGroup(len(points), generators)

    def __eq__(self, other):
        if not isinstance(other, PermGroup) or other.degree != self.degree:
            return False
        if other.order != self.order:
            return False
        return all(self.contains(g) for g in other.generators) and all(other.contains(g) for g in self.generators)

    def __hash__(self):
        return hash((self.degree, self.order))


def naive_closure(generators: Sequence[PermLike], degree: int, limit: Optional[int] = None) -> set[tuple[int, ...]]:
    """All products of the generators, by breadth-first closure of array forms."""
    limit = limit or get_settings().max_elements
    gens = [tuple(as_permutation(g, degree).array_form) for g in generators]
    identity = tuple(range(degree))
    seen = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in gens:
            product = tuple(g[i] for i in current)
            if product not in seen:
                seen.add(product)
                if len(seen) > limit:
                    raise ResourceLimitError("closure elements", limit)
                queue.append(product)
    return seen
