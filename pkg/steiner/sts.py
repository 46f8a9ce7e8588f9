"""
Finite Steiner triple systems and the loops built from them.

Points are labelled 1..m. Loop elements are table indices: the quasigroup
and interior loops use index p-1 for point p, the exterior loop uses index 0
for the adjoined identity e and index p for point p.
"""

import io
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from steiner.config import get_settings
from steiner.errors import PreconditionError, ResourceLimitError, STSFormatError, STSValidationError
from steiner.perm_groups import PermGroup
from steiner.resource import Resource

logger = logging.getLogger(__name__)

Block = tuple[int, int, int]


class STS(Resource):

    def __init__(self, blocks: Iterable[Iterable[int]], order: Optional[int] = None):
        self.blocks: list[Block] = [tuple(sorted(block)) for block in blocks]
        points = {point for block in self.blocks for point in block}
        self.order = order or max(points, default=0)
        self._thirds: dict[tuple[int, int], int] = {}
        for a, b, c in self.blocks:
            for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
                self._thirds[(x, y)] = self._thirds[(y, x)] = z

    @property
    def points(self) -> range:
        return range(1, self.order + 1)

    @property
    def block_set(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(block) for block in self.blocks)

    def third_point(self, x: int, y: int) -> int:
        return self._thirds[(x, y)]

    def render(self) -> str:
        return "\n".join(" ".join(str(p) for p in block) for block in sorted(self.blocks))

    def __eq__(self, other):
        return isinstance(other, STS) and self.order == other.order and self.block_set == other.block_set

    def __hash__(self):
        return hash((self.order, self.block_set))


@dataclass
class ValidationReport:
    valid: bool
    order: int
    message: str
    pair: Optional[tuple[int, int]] = None


def parse_sts(text: str) -> STS:
    blocks = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        fields = content.split()
        if len(fields) != 3 or not all(f.isdigit() and int(f) > 0 for f in fields):
            raise STSFormatError(line_number, line)
        blocks.append(tuple(int(f) for f in fields))
    return STS(blocks)


def validate_sts(sts: STS) -> ValidationReport:
    """Checks in order: repeated points, labels 1..m, repeated pairs, m mod 6, pair coverage."""
    m = sts.order
    for block in sts.blocks:
        if len(set(block)) != 3:
            return ValidationReport(False, m, f"block {block} repeats a point")
    labels = {point for block in sts.blocks for point in block}
    if labels != set(sts.points):
        return ValidationReport(False, m, f"points must be labelled 1..{m}")
    seen = set()
    for block in sts.blocks:
        for pair in combinations(block, 2):
            if pair in seen:
                return ValidationReport(False, m, f"pair {{{pair[0]}, {pair[1]}}} occurs in more than one block", pair)
            seen.add(pair)
    if m % 6 not in (1, 3):
        return ValidationReport(False, m, f"order {m} violates m = 1, 3 (mod 6)")
    for pair in combinations(sts.points, 2):
        if pair not in seen:
            return ValidationReport(False, m, f"pair {{{pair[0]}, {pair[1]}}} is not covered", pair)
    return ValidationReport(True, m, f"valid STS({m})")


def load_sts(text: str) -> STS:
    sts = parse_sts(text)
    report = validate_sts(sts)
    if not report.valid:
        raise STSValidationError(report)
    return sts


def projective_sts(dimension: int = 3) -> STS:
    """Points and lines of PG(dimension, 2): blocks {x, y, x xor y}."""
    m = 2 ** (dimension + 1) - 1
    blocks = {tuple(sorted((x, y, x ^ y))) for x, y in combinations(range(1, m + 1), 2)}
    return STS(sorted(blocks), m)


def projective_sts15() -> STS:
    return projective_sts(3)


class LoopKind(Enum):
    QUASIGROUP = "quasigroup"
    EXTERIOR = "exterior"
    INTERIOR = "interior"


class FiniteLoop(Resource):

    def __init__(self, kind: LoopKind, table: np.ndarray, points: Sequence[Optional[int]],
                 identity: Optional[int] = None, base: Optional[int] = None):
        self.kind = kind
        self.table = np.asarray(table, dtype=np.int64)
        self.points = list(points)
        self.identity = identity
        self.base = base

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def labels(self) -> list[str]:
        return ["e" if point is None else str(point) for point in self.points]

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def translation(self, x: int) -> list[int]:
        """Right translation y -> y·x."""
        return [int(v) for v in self.table[:, x]]

    def index_of(self, point: int) -> int:
        return self.points.index(point)


def _check_points(sts: STS):
    max_points = get_settings().max_points
    if sts.order > max_points:
        raise ResourceLimitError("points", max_points)


def to_quasigroup(sts: STS) -> FiniteLoop:
    _check_points(sts)
    m = sts.order
    table = np.empty((m, m), dtype=np.int64)
    for x in range(m):
        table[x, x] = x
        for y in range(m):
            if x != y:
                table[x, y] = sts.third_point(x + 1, y + 1) - 1
    return FiniteLoop(LoopKind.QUASIGROUP, table, list(sts.points))


def to_exterior(sts: STS) -> FiniteLoop:
    _check_points(sts)
    m = sts.order
    table = np.zeros((m + 1, m + 1), dtype=np.int64)
    table[0, :] = table[:, 0] = np.arange(m + 1)
    for x in range(1, m + 1):
        for y in range(1, m + 1):
            if x != y:
                table[x, y] = sts.third_point(x, y)
    return FiniteLoop(LoopKind.EXTERIOR, table, [None, *sts.points], identity=0)


def to_interior(sts: STS, a: int) -> FiniteLoop:
    """x·y = (ax)(ay) in the quasigroup, with identity a."""
    if a not in sts.points:
        raise PreconditionError(f"base point {a} is not a point of STS({sts.order})")
    q = to_quasigroup(sts).table
    left = q[a - 1]
    table = q[left[:, None], left[None, :]]
    return FiniteLoop(LoopKind.INTERIOR, table, list(sts.points), identity=a - 1, base=a)


def sts_from_loop(loop: FiniteLoop) -> STS:
    t = loop.table
    blocks = set()
    if loop.kind == LoopKind.QUASIGROUP:
        for x, y in combinations(range(loop.order), 2):
            blocks.add(frozenset((x, y, int(t[x, y]))))
    elif loop.kind == LoopKind.EXTERIOR:
        for x, y in combinations(range(1, loop.order), 2):
            blocks.add(frozenset((x, y, int(t[x, y]))))
    else:
        a = loop.identity
        squares = t[np.arange(loop.order), np.arange(loop.order)]
        for x in range(loop.order):
            if x != a:
                blocks.add(frozenset((a, x, int(squares[x]))))
        for x, y in combinations(range(loop.order), 2):
            if a not in (x, y):
                blocks.add(frozenset((x, y, int(t[squares[x], squares[y]]))))
    return STS(sorted(tuple(sorted(loop.points[i] for i in block)) for block in blocks))


def identity_checks(loop: FiniteLoop) -> dict[str, bool]:
    """Exhaustive check of the identities defining the loop's kind."""
    t = loop.table
    idx = np.arange(loop.order)
    columns = np.broadcast_to(idx, t.shape)
    rows = columns.T
    squares = t[idx, idx]
    checks = {"commutative": bool((t == t.T).all())}
    if loop.kind != LoopKind.INTERIOR:
        checks["x(xy) = y"] = bool((t[idx[:, None], t] == columns).all())
    if loop.kind == LoopKind.QUASIGROUP:
        checks["x·x = x"] = bool((squares == idx).all())
        return checks
    e = loop.identity
    checks["identity"] = bool((t[e] == idx).all() and (t[:, e] == idx).all())
    if loop.kind == LoopKind.EXTERIOR:
        checks["x·x = e"] = bool((squares == e).all())
        return checks
    checks["x^3 = 1"] = bool((t[squares, idx] == e).all())
    p = t[squares[:, None], squares[None, :]]
    checks["(x^2 y^2)^2 y^2 = x"] = bool((t[t[p, p], squares[None, :]] == rows).all())
    return checks


def export_table(loop: FiniteLoop, delimiter: str = ",") -> str:
    header = f"kind={loop.kind.value} order={loop.order}"
    if loop.base is not None:
        header += f" base={loop.base}"
    labels = np.array(loop.labels)
    buffer = io.StringIO()
    np.savetxt(buffer, labels[loop.table], fmt="%s", delimiter=delimiter, header=header)
    return buffer.getvalue()


def _search_order(n: int, related: Callable[[int, int], Iterable[int]], start: Sequence[int] = ()) -> list[int]:
    """Points ordered so that products of placed points come right after them."""
    order = list(start)
    placed = set(order)
    while len(order) < n:
        nxt = min(set(range(n)) - placed)
        order.append(nxt)
        placed.add(nxt)
        grew = True
        while grew:
            grew = False
            for x, y in combinations(list(order), 2):
                for z in related(x, y):
                    if z not in placed:
                        order.append(z)
                        placed.add(z)
                        grew = True
    return order


def _backtrack(n: int, order: list[int], consistent: Callable[[dict, int], bool],
               fixed: Optional[dict[int, int]] = None, max_nodes: Optional[int] = None) -> list[list[int]]:
    max_nodes = max_nodes or get_settings().max_search_nodes
    found = []
    nodes = 0
    assignment = dict(fixed or {})

    def extend(position: int):
        nonlocal nodes
        if position == len(order):
            found.append([assignment[x] for x in range(n)])
            return
        point = order[position]
        used = set(assignment.values())
        candidates = [assignment[point]] if point in assignment else [c for c in range(n) if c not in used]
        preset = point in assignment
        for image in candidates:
            nodes += 1
            if nodes > max_nodes:
                raise ResourceLimitError("search nodes", max_nodes)
            assignment[point] = image
            if consistent(assignment, point):
                extend(position + 1)
            if not preset:
                del assignment[point]

    extend(0)
    logger.debug("Backtracking over %d points visited %d nodes, found %d maps", n, nodes, len(found))
    return found


def _sts_automorphisms(sts: STS) -> list[list[int]]:
    blocks = sts.block_set
    m = sts.order

    def related(x, y):
        return [sts.third_point(x + 1, y + 1) - 1]

    order = _search_order(m, related)
    position = {point: k for k, point in enumerate(order)}
    earlier_pairs = {point: [] for point in range(m)}
    for a, b, c in sts.blocks:
        triple = sorted((a - 1, b - 1, c - 1), key=position.get)
        earlier_pairs[triple[2]].append((triple[0], triple[1]))

    def consistent(assignment, point):
        image = assignment[point]
        return all(frozenset((assignment[x] + 1, assignment[y] + 1, image + 1)) in blocks
                   for x, y in earlier_pairs[point])

    return _backtrack(m, order, consistent)


def _loop_automorphisms(loop: FiniteLoop) -> list[list[int]]:
    t = loop.table
    n = loop.order
    start = [loop.identity] if loop.identity is not None else []
    order = _search_order(n, lambda x, y: (int(t[x, y]), int(t[y, x])), start)
    position = {point: k for k, point in enumerate(order)}
    constraints = {point: [] for point in range(n)}
    for x in range(n):
        for y in range(n):
            z = int(t[x, y])
            last = max((x, y, z), key=position.get)
            constraints[last].append((x, y, z))

    def consistent(assignment, point):
        return all(t[assignment[x], assignment[y]] == assignment[z] for x, y, z in constraints[point])

    fixed = {loop.identity: loop.identity} if loop.identity is not None else None
    return _backtrack(n, order, consistent, fixed)


def _group_from(maps: list[list[int]], degree: int) -> PermGroup:
    generators: list[Permutation] = []
    group = PermutationGroup([Permutation(degree - 1)])
    for array in maps:
        perm = Permutation(array, size=degree)
        if not group.contains(perm):
            generators.append(perm)
            group = PermutationGroup(generators)
    result = PermGroup(degree, generators)
    result.enumerated = len(maps)
    return result


def automorphism_group(structure: Union[STS, FiniteLoop]) -> PermGroup:
    """
    All automorphisms by backtracking, returned as a PermGroup. The number of
    maps found by the search is kept on the result as `enumerated`.
    """
    if isinstance(structure, STS):
        _check_points(structure)
        return _group_from(_sts_automorphisms(structure), structure.order)
    return _group_from(_loop_automorphisms(structure), structure.order)


def point_action(group: PermGroup, loop: FiniteLoop) -> PermGroup:
    """Action of loop automorphisms on the STS points, relabelled p -> p-1."""
    m = sum(point is not None for point in loop.points)
    return group.restrict([loop.index_of(point) for point in range(1, m + 1)])


def _translations(loop: FiniteLoop) -> list[Permutation]:
    return [Permutation(loop.translation(x), size=loop.order) for x in range(loop.order)]


def mult_group(loop: FiniteLoop, max_order: Optional[int] = None) -> PermGroup:
    """Group generated by the right translations of the loop."""
    return PermGroup(loop.order, _translations(loop), max_order)


def inner_mapping_group(loop: FiniteLoop, max_order: Optional[int] = None) -> PermGroup:
    if loop.identity is None:
        raise PreconditionError("the inner mapping group needs a loop with identity")
    return mult_group(loop, max_order).stabilizer(loop.identity)


@dataclass
class SDecompositionReport:
    group_order: int
    inner_order: int
    translations: int
    involutions: bool
    trivial_intersection: bool
    unique_factorization: bool
    closure: bool
    reproduces_table: bool
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.involutions and self.trivial_intersection and self.unique_factorization
                and self.closure and self.reproduces_table)


def s_decomposition_check(loop: FiniteLoop, max_order: Optional[int] = None) -> SDecompositionReport:
    """
    Check G = B0·H for G = Mult(loop), H the stabilizer of e and B0 the right
    translations. Permutations compose as functions: f∘g is sympy's g*f.
    """
    if loop.identity is None:
        raise PreconditionError("s_decomposition_check needs a loop with identity")
    e = loop.identity
    n = loop.order
    group = mult_group(loop, max_order)
    inner = group.stabilizer(e)
    translations = _translations(loop)
    failures = []

    involutions = all((r * r).is_Identity for r in translations)
    if not involutions:
        failures.append("some translation is not an involution")

    trivial_intersection = all(inner.contains(r) == (b == e) for b, r in enumerate(translations))
    if not trivial_intersection:
        failures.append("a translation other than R_e lies in H")

    distinct = all(not inner.contains(translations[j] * ~translations[i]) for i, j in combinations(range(n), 2))
    unique_factorization = distinct and group.order == n * inner.order
    if not unique_factorization:
        failures.append(f"|G| = {group.order} but |B0|·|H| = {n}·{inner.order}")

    closure = True
    reproduces = True
    for b1 in range(n):
        for b2 in range(n):
            b3 = translations[loop.mul(b1, b2)]
            for g in (translations[b2] * translations[b1], translations[b1] * translations[b2]):
                if not inner.contains(g * ~b3):
                    closure = False
                    failures.append(f"R_{b1}R_{b2} is not in R_{loop.mul(b1, b2)}H")
            star = (translations[b2] * translations[b1])(e)
            if star != loop.mul(b1, b2) or (translations[b2] * translations[star])(e) != b1:
                reproduces = False
    if not reproduces:
        failures.append("the induced product on B0 differs from the loop table")

    return SDecompositionReport(group.order, inner.order, n, involutions, trivial_intersection,
                                unique_factorization, closure, reproduces, failures)


def corrupt_table(loop: FiniteLoop, x: int, y1: int, y2: int) -> FiniteLoop:
    """Copy of loop with table[y1][x] and table[y2][x] swapped."""
    table = loop.table.copy()
    table[[y1, y2], x] = table[[y2, y1], x]
    return FiniteLoop(loop.kind, table, loop.points, loop.identity, loop.base)


@dataclass
class T4Report:
    base: int
    interior_order: int
    stabilizer_order: int
    equal: bool

    def render(self) -> str:
        verdict = "EQUAL" if self.equal else "DIFFERENT"
        if self.interior_order == self.stabilizer_order:
            return f"|Aut(IS)| = |Stab| = {self.interior_order}: {verdict}"
        return f"|Aut(IS)| = {self.interior_order}, |Stab| = {self.stabilizer_order}: {verdict}"


def t4_finite_check(sts: STS, a: int) -> T4Report:
    """Compare Aut(interior loop at a) with Stab_{Aut(exterior loop)}(a) on the points."""
    interior = to_interior(sts, a)
    exterior = to_exterior(sts)
    interior_group = point_action(automorphism_group(interior), interior)
    stabilizer = point_action(automorphism_group(exterior).stabilizer(exterior.index_of(a)), exterior)
    report = T4Report(a, interior_group.order, stabilizer.order, interior_group == stabilizer)
    logger.info("Finite stabilizer check at %d: %s", a, report.render())
    return report
