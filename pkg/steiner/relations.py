"""
Relations in the automorphism group of the free Steiner loop on x1, x2, x3.

The group is generated by phi = e1(x2) and the transpositions (12), (13).
This module evaluates words in those letters, checks the known identities,
runs breadth-first searches of Cayley graphs with sphere counts and
relator detection, and compares the growth with the Coxeter group and the
free product S3 * C2 that the two open conjectures predict.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence, Union

from steiner.automorphisms import (ElementaryAut, Endomorphism, compose, permutation, reduction_trace)
from steiner.config import get_settings
from steiner.coxeter import CoxeterGroup, free_product_spheres
from steiner.errors import DecompositionError, PreconditionError, ResourceLimitError
from steiner.subloop import evaluate
from steiner.words import leaf, mult

logger = logging.getLogger(__name__)

RANK = 3


class GroupLetter(Enum):
    PHI = "phi"
    S12 = "(12)"
    S13 = "(13)"
    TAU = "tau"
    XI = "xi"


class Conjecture(Enum):
    COXETER = "1"
    FREE_PRODUCT = "2"


x1, x2, x3 = leaf(0), leaf(1), leaf(2)

PERMUTATIONS = {
    "1": permutation([0, 1, 2]),
    "(12)": permutation([1, 0, 2]),
    "(13)": permutation([2, 1, 0]),
    "(23)": permutation([0, 2, 1]),
    "(123)": permutation([1, 2, 0]),
    "(132)": permutation([2, 0, 1]),
}

LETTER_AUTOMORPHISMS = {
    GroupLetter.PHI: ElementaryAut(0, x2).to_endomorphism(RANK),
    GroupLetter.S12: PERMUTATIONS["(12)"],
    GroupLetter.S13: PERMUTATIONS["(13)"],
    GroupLetter.TAU: PERMUTATIONS["(12)"],
    GroupLetter.XI: ElementaryAut(0, x3).to_endomorphism(RANK),
}

COXETER_MATRIX = [[1, 3, 4],
                  [3, 1, 3],
                  [4, 3, 1]]
COXETER_LETTERS = (GroupLetter.PHI, GroupLetter.S12, GroupLetter.S13)

Factor = Union[GroupLetter, Endomorphism, ElementaryAut, str]


def _automorphism(factor: Factor) -> Endomorphism:
    if isinstance(factor, GroupLetter):
        return LETTER_AUTOMORPHISMS[factor]
    if isinstance(factor, ElementaryAut):
        return factor.to_endomorphism(RANK)
    if isinstance(factor, str):
        return PERMUTATIONS[factor]
    if factor.size != RANK:
        raise PreconditionError(f"Relations are computed over {RANK} generators")
    return factor


def eval_word(letters: Sequence[Factor]) -> Endomorphism:
    result = Endomorphism.identity(RANK)
    for letter in letters:
        result = compose(result, _automorphism(letter))
    return result


def _factor_name(factor: Factor) -> str:
    if isinstance(factor, GroupLetter):
        return factor.value
    if isinstance(factor, ElementaryAut):
        return factor.render()
    if isinstance(factor, str):
        return factor
    return factor.render()


def render_word(letters: Sequence[Factor]) -> str:
    return " ".join(_factor_name(letter) for letter in letters) if letters else "1"


@dataclass
class RelationCheck:
    name: str
    left: list
    right: list
    holds: bool = False


@dataclass
class KnownRelationsReport:
    checks: list[RelationCheck] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(check.holds for check in self.checks)

    @property
    def failures(self) -> list[RelationCheck]:
        return [check for check in self.checks if not check.holds]


def e(i: int, j: int) -> ElementaryAut:
    """e_i(x_j) with 1-based indices."""
    return ElementaryAut(i - 1, leaf(j - 1))


PHI, S12, S13, TAU, XI = (GroupLetter.PHI, GroupLetter.S12, GroupLetter.S13, GroupLetter.TAU, GroupLetter.XI)

E1_X2X3 = ElementaryAut(0, mult(x2, x3))

E1_X2X3_EXPANSION = [e(1, 3), e(3, 1), e(1, 3), e(2, 1), e(1, 2), e(1, 3), e(3, 1), e(1, 3), e(1, 2),
                     e(1, 3), e(3, 1), e(1, 3), e(1, 2), e(2, 1), e(1, 3), e(3, 1), e(1, 3)]

ELEMENTARY_BRAID_LEFT = [e(1, 2), e(2, 1), e(1, 2), e(2, 3), e(3, 2), e(2, 3), e(1, 2), e(2, 1), e(1, 2)]
ELEMENTARY_BRAID_RIGHT = [e(2, 3), e(3, 2), e(2, 3), e(1, 2), e(2, 1), e(1, 2), e(2, 3), e(3, 2), e(2, 3)]


def known_relations() -> list[RelationCheck]:
    checks = [
        RelationCheck("(phi (12))^3 = 1", [PHI, S12] * 3, []),
        RelationCheck("(phi (13))^4 = 1", [PHI, S13] * 4, []),
        RelationCheck("((12)(13))^3 = 1", [S12, S13] * 3, []),
        RelationCheck("(12)(13)(12) = (13)(12)(13)", [S12, S13, S12], [S13, S12, S13]),
    ]
    for i in range(1, RANK + 1):
        for j in range(1, RANK + 1):
            if i != j:
                checks.append(RelationCheck(f"(e{i}(x{j}) e{j}(x{i}))^3 = 1", [e(i, j), e(j, i)] * 3, []))
    for i, j in ((1, 2), (1, 3), (2, 3)):
        checks.append(RelationCheck(f"({i}{j}) = e{i}(x{j}) e{j}(x{i}) e{i}(x{j})",
                                    [f"({i}{j})"], [e(i, j), e(j, i), e(i, j)]))
    checks.extend([
        RelationCheck("e1(x2 x3) = (13) phi (123) phi (132) phi (13)",
                      [E1_X2X3], ["(13)", PHI, "(123)", PHI, "(132)", PHI, "(13)"]),
        RelationCheck("e1(x2 x3) = elementary expansion", [E1_X2X3], E1_X2X3_EXPANSION),
        RelationCheck("elementary braid relation", ELEMENTARY_BRAID_LEFT, ELEMENTARY_BRAID_RIGHT),
        RelationCheck("xi^2 = 1", [XI, XI], []),
        RelationCheck("phi^2 = 1", [PHI, PHI], []),
        RelationCheck("tau^2 = 1", [TAU, TAU], []),
        RelationCheck("(tau phi)^3 = 1", [TAU, PHI] * 3, []),
        RelationCheck("xi = (23) phi (23)", [XI], ["(23)", PHI, "(23)"]),
        RelationCheck("e1(x2 x3) = tau xi phi tau phi xi tau", [E1_X2X3], [TAU, XI, PHI, TAU, PHI, XI, TAU]),
    ])
    return checks


def verify_known_relations() -> KnownRelationsReport:
    report = KnownRelationsReport()
    for check in known_relations():
        check.holds = eval_word(check.left) == eval_word(check.right)
        if not check.holds:
            logger.warning("Known relation failed: %s", check.name)
        report.checks.append(check)
    return report


@dataclass
class SphereProfile:
    sizes: list[int] = field(default_factory=lambda: [1])

    @property
    def balls(self) -> list[int]:
        totals, running = [], 0
        for size in self.sizes:
            running += size
            totals.append(running)
        return totals


@dataclass
class RelationReport:
    depth: int = 0
    element_count: int = 1
    relators: list[tuple[str, ...]] = field(default_factory=list)
    relators_by_depth: dict[int, list[tuple[str, ...]]] = field(default_factory=dict)


def letter_generators(letters: Sequence[GroupLetter]) -> dict[str, Endomorphism]:
    return {letter.value: LETTER_AUTOMORPHISMS[letter] for letter in letters}


def free_family() -> dict[str, Endomorphism]:
    """e1(x2), e1(x3), e1(x2·x3): no relations hold between them."""
    family = [ElementaryAut(0, x2), ElementaryAut(0, x3), E1_X2X3]
    return {letter.render(): letter.to_endomorphism(RANK) for letter in family}


def _cyclic_reduce(word: Sequence[str]) -> tuple[str, ...]:
    stack: list[str] = []
    for letter in word:
        if stack and stack[-1] == letter:
            stack.pop()
        else:
            stack.append(letter)
    while len(stack) > 1 and stack[0] == stack[-1]:
        stack = stack[1:-1]
    return tuple(stack)


def _canonical_relator(word: tuple[str, ...]) -> tuple[str, ...]:
    # every letter is an involution, so the inverse of a relator is its reverse
    variants = []
    for candidate in (word, tuple(reversed(word))):
        for shift in range(len(candidate)):
            variants.append(candidate[shift:] + candidate[:shift])
    return min(variants)


def _expand(frontier: Sequence[Endomorphism], generators: Mapping[str, Endomorphism],
            threads: int) -> list[list[Endomorphism]]:
    def step(element: Endomorphism) -> list[Endomorphism]:
        return [compose(element, generator) for generator in generators.values()]

    if threads <= 1 or len(frontier) < 2:
        return [step(element) for element in frontier]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        # map keeps frontier order, so the merge below is deterministic
        return list(executor.map(step, frontier))


def cayley_bfs(generators: Mapping[str, Endomorphism], depth: int,
               max_image_len: Optional[int] = None, max_elements: Optional[int] = None,
               threads: Optional[int] = None) -> tuple[SphereProfile, RelationReport]:
    """
    Breadth-first enumeration of the subgroup generated by the given
    automorphisms, identifying elements by their image tuples. Every edge
    reaching an element that is already known closes a cycle; its cyclically
    reduced label, when nonempty, is reported as a relator.
    """
    settings = get_settings()
    max_image_len = max_image_len or settings.max_image_len
    max_elements = max_elements or settings.max_elements
    threads = threads or settings.threads
    names = list(generators)
    identity = Endomorphism.identity(RANK)
    words: dict[Endomorphism, tuple[str, ...]] = {identity: ()}
    frontier = [identity]
    profile = SphereProfile()
    report = RelationReport()
    found: set[tuple[str, ...]] = set()
    for d in range(1, depth + 1):
        next_frontier = []
        fresh_relators = []
        for element, products in zip(frontier, _expand(frontier, generators, threads)):
            for name, product in zip(names, products):
                if product not in words:
                    if max(image.length for image in product.images) > max_image_len:
                        raise ResourceLimitError("image length", max_image_len)
                    words[product] = words[element] + (name,)
                    next_frontier.append(product)
                    if len(words) > max_elements:
                        raise ResourceLimitError("group elements", max_elements)
                    continue
                cycle = _cyclic_reduce(words[element] + (name,) + tuple(reversed(words[product])))
                if cycle:
                    relator = _canonical_relator(cycle)
                    if relator not in found:
                        found.add(relator)
                        fresh_relators.append(relator)
        profile.sizes.append(len(next_frontier))
        report.relators_by_depth[d] = fresh_relators
        report.relators.extend(fresh_relators)
        logger.debug("Depth %d: %d new elements, %d new relators", d, len(next_frontier), len(fresh_relators))
        frontier = next_frontier
    report.depth = depth
    report.element_count = len(words)
    return profile, report


def relator_factors(relator: Sequence[str], generators: Mapping[str, Endomorphism]) -> list[Endomorphism]:
    return [generators[name] for name in relator]


def coxeter_bfs(matrix: Sequence[Sequence[Optional[int]]], depth: int,
                max_elements: Optional[int] = None) -> SphereProfile:
    return SphereProfile(CoxeterGroup(matrix, max_elements=max_elements).spheres(depth))


def s3_c2_spheres(depth: int) -> SphereProfile:
    """Spheres of <phi, tau | phi^2, tau^2, (tau phi)^3> * <xi | xi^2>."""
    s3 = CoxeterGroup([[1, 3], [3, 1]]).spheres(3)
    return SphereProfile(free_product_spheres([s3, [1, 1]], depth))


@dataclass
class ConjectureRow:
    depth: int
    cayley_count: int
    oracle_count: int
    new_relators: list[tuple[str, ...]]


@dataclass
class ConjectureReport:
    target: Conjecture
    depth: int
    rows: list[ConjectureRow] = field(default_factory=list)

    @property
    def first_divergence(self) -> Optional[int]:
        for row in self.rows:
            if row.cayley_count != row.oracle_count:
                return row.depth
        return None

    @property
    def matches(self) -> bool:
        return self.first_divergence is None


def conjecture_scan(target: Conjecture, depth: int, **caps) -> ConjectureReport:
    if target is Conjecture.COXETER:
        generators = letter_generators(COXETER_LETTERS)
        oracle = coxeter_bfs(COXETER_MATRIX, depth)
    else:
        generators = letter_generators((PHI, TAU, XI))
        oracle = s3_c2_spheres(depth)
    profile, relations = cayley_bfs(generators, depth, **caps)
    report = ConjectureReport(target=target, depth=depth)
    for d in range(depth + 1):
        report.rows.append(ConjectureRow(depth=d, cayley_count=profile.sizes[d], oracle_count=oracle.sizes[d],
                                         new_relators=relations.relators_by_depth.get(d, [])))
    divergence = report.first_divergence
    if divergence is not None:
        logger.warning("Conjecture %s: spheres diverge at depth %d", target.value, divergence)
    return report


REPLAY_PERMUTATIONS = ("(13)", "(23)", "(123)", "(132)")


@dataclass
class ReplayReport:
    max_blocks: int
    words_checked: int = 0
    identities: list[tuple[str, ...]] = field(default_factory=list)


def alternating_search(max_blocks: int, max_image_len: Optional[int] = None) -> ReplayReport:
    """
    Search words phi s1 phi s2 ... phi sn (n <= max_blocks) for the identity,
    with si in S3 other than 1 and (12), and no (13) directly after (13).
    """
    max_image_len = max_image_len or get_settings().max_image_len
    report = ReplayReport(max_blocks=max_blocks)
    phi = LETTER_AUTOMORPHISMS[PHI]
    stack = [(Endomorphism.identity(RANK), ())]
    while stack:
        element, word = stack.pop()
        if len(word) // 2 >= max_blocks:
            continue
        last = word[-1] if word else None
        for sigma in reversed(REPLAY_PERMUTATIONS):
            if sigma == "(13)" and last == "(13)":
                continue
            product = compose(compose(element, phi), PERMUTATIONS[sigma])
            if max(image.length for image in product.images) > max_image_len:
                raise ResourceLimitError("image length", max_image_len)
            extended = word + ("phi", sigma)
            report.words_checked += 1
            if product.is_identity:
                report.identities.append(extended)
            stack.append((product, extended))
    return report


def _shortest_words(letters: Sequence[GroupLetter], elements_of: Sequence[Endomorphism]) -> dict:
    words = {Endomorphism.identity(RANK): []}
    queue = [Endomorphism.identity(RANK)]
    while queue and len(words) < len(elements_of) + 1:
        next_queue = []
        for element in queue:
            for letter in letters:
                product = compose(element, LETTER_AUTOMORPHISMS[letter])
                if product not in words:
                    words[product] = words[element] + [letter]
                    next_queue.append(product)
        queue = next_queue
    return words


def _free_reduce(letters: list) -> list:
    stack: list = []
    for letter in letters:
        if stack and stack[-1] == letter:
            stack.pop()
        else:
            stack.append(letter)
    return stack


def _conjugate_into(target: ElementaryAut, bases: Sequence[list], conjugators: Mapping) -> list:
    wanted = target.to_endomorphism(RANK)
    for base in bases:
        for word in conjugators.values():
            candidate = list(reversed(word)) + base + word
            if eval_word(candidate) == wanted:
                return candidate
    raise DecompositionError(f"No conjugate of the base letters gives {target.render()}")


def _express(f: Endomorphism, letters: Sequence[GroupLetter], bases: Sequence[list]) -> list[GroupLetter]:
    steps, final = reduction_trace(f)
    generators = [leaf(k) for k in range(RANK)]
    perm_words = _shortest_words([letter for letter in letters if letter not in (PHI, XI)],
                                 list(PERMUTATIONS.values()))
    result: list[GroupLetter] = []
    for step in steps:
        elementary = ElementaryAut(step.i, evaluate(step.reducer_parse, generators))
        result.extend(_conjugate_into(elementary, bases, perm_words))
    final_perm = Endomorphism(final)
    if final_perm not in perm_words:
        raise DecompositionError(f"Permutation {final_perm.render()} is not generated by {letters}")
    result.extend(perm_words[final_perm])
    result = _free_reduce(result)
    if eval_word(result) != f:
        raise DecompositionError(f"Word {render_word(result)} does not evaluate to {f.render()}")
    return result


def s3_phi_word(f: Endomorphism) -> list[GroupLetter]:
    """
    Express an automorphism of S(x1, x2, x3) in phi, (12), (13). Every
    reduction step uses a reducer v, w or v·w of the other two images, i.e.
    a conjugate of phi or of e1(x2·x3) = (13) phi (123) phi (132) phi (13).
    """
    if f.size != RANK:
        raise PreconditionError(f"s3_phi_word works over {RANK} generators")
    perm_words = _shortest_words([S12, S13], list(PERMUTATIONS.values()))
    e1_x2x3 = (perm_words[PERMUTATIONS["(13)"]] + [PHI] + perm_words[PERMUTATIONS["(123)"]] + [PHI]
               + perm_words[PERMUTATIONS["(132)"]] + [PHI] + perm_words[PERMUTATIONS["(13)"]])
    return _express(f, COXETER_LETTERS, [[PHI], e1_x2x3])


def q_word(f: Endomorphism) -> list[GroupLetter]:
    """Express an automorphism fixing x3 in phi, tau, xi."""
    if f.size != RANK or f.images[2] != x3:
        raise PreconditionError("q_word needs an automorphism of S(x1, x2, x3) fixing x3")
    return _express(f, (PHI, TAU, XI), [[PHI], [XI], [TAU, XI, PHI, TAU, PHI, XI, TAU]])
