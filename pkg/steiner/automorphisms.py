"""
Endomorphisms of S(X) given by generator images, elementary automorphisms
e_i(v): x_i -> x_i·v, and the constructive tame decomposition.

Composition is a right action: compose(f, g) applies f first, so
compose(f, g).images[i] = apply(g, f.images[i]). Sequences of letters are
always read leftmost-first.
"""

import logging
import re
from enum import Enum
from typing import Iterable, Optional, Sequence

from steiner.errors import (AlphabetMismatchError, DecompositionError, NotAnAutomorphismError,
                            PreconditionError, SteinerError, WordSyntaxError)
from steiner.subloop import ReductionStep, evaluate, find_reduction
from steiner.words import Alphabet, SWord, default_alphabet, leaf, mult, parse, render, substitute

logger = logging.getLogger(__name__)

ELEMENTARY_PATTERN = re.compile(r"\s*e(\d+)\((.*)\)\s*$")


def _check_support(word: SWord, size: int):
    if word.support >> size:
        raise AlphabetMismatchError(size, word.support.bit_length())


class Endomorphism:

    def __init__(self, images: Sequence[SWord], alphabet: Optional[Alphabet] = None):
        self.images = tuple(images)
        self.alphabet = alphabet or default_alphabet(len(self.images))
        if self.alphabet.size != len(self.images):
            raise AlphabetMismatchError(self.alphabet.size, len(self.images))
        for image in self.images:
            _check_support(image, self.size)

    @classmethod
    def identity(cls, n: int) -> "Endomorphism":
        return cls([leaf(i) for i in range(n)])

    @classmethod
    def parse(cls, texts: Sequence[str], alphabet: Optional[Alphabet] = None) -> "Endomorphism":
        alphabet = alphabet or default_alphabet(len(texts))
        return cls([parse(text, alphabet) for text in texts], alphabet)

    @property
    def size(self) -> int:
        return len(self.images)

    @property
    def weight(self) -> int:
        return sum(image.length for image in self.images)

    @property
    def is_identity(self) -> bool:
        return all(image.is_leaf and image.generator == i for i, image in enumerate(self.images))

    def render(self) -> str:
        return "(" + ", ".join(render(image, self.alphabet) for image in self.images) + ")"

    def __eq__(self, other):
        return isinstance(other, Endomorphism) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Endomorphism{self.render()}"


class ElementaryAut:
    """e_i(v) with i a 0-based generator index and v a word avoiding x_i."""

    def __init__(self, i: int, v: SWord):
        if v.is_identity:
            raise PreconditionError("e_i(v) needs v != e")
        if v.uses_generator(i):
            raise PreconditionError(f"e_{i + 1}({render(v)}) must not use x{i + 1}")
        self.i = i
        self.v = v

    @classmethod
    def parse(cls, text: str, alphabet: Optional[Alphabet] = None) -> "ElementaryAut":
        match = ELEMENTARY_PATTERN.match(text)
        if match is None:
            raise WordSyntaxError("Expected e<i>(<word>)", 0)
        return cls(int(match.group(1)) - 1, parse(match.group(2), alphabet))

    def to_endomorphism(self, n: int) -> Endomorphism:
        if self.i >= n:
            raise AlphabetMismatchError(n, self.i + 1)
        images = [leaf(j) for j in range(n)]
        images[self.i] = mult(images[self.i], self.v)
        return Endomorphism(images)

    def render(self, alphabet: Optional[Alphabet] = None) -> str:
        return f"e{self.i + 1}({render(self.v, alphabet)})"

    def __eq__(self, other):
        return isinstance(other, ElementaryAut) and self.i == other.i and self.v == other.v

    def __hash__(self):
        return hash((self.i, self.v))

    def __repr__(self):
        return self.render()


class TameWord:
    """Product of elementary automorphisms, leftmost applied first."""

    def __init__(self, letters: Iterable[ElementaryAut]):
        self.letters = tuple(letters)

    def evaluate(self, n: int) -> Endomorphism:
        result = Endomorphism.identity(n)
        for letter in self.letters:
            result = compose(result, letter.to_endomorphism(n))
        return result

    def inverse(self) -> "TameWord":
        return TameWord(reversed(self.letters))

    def render(self, alphabet: Optional[Alphabet] = None) -> str:
        return " ".join(letter.render(alphabet) for letter in self.letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, TameWord) and self.letters == other.letters

    def __repr__(self):
        return f"TameWord({self.render()})"


class L2Case(Enum):
    SPLIT_PRESERVED = "split_preserved"
    COLLAPSED_TO_GENERATOR = "collapsed_to_generator"


def apply(f: Endomorphism, word: SWord) -> SWord:
    _check_support(word, f.size)
    return substitute(word, f.images)


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    if f.size != g.size:
        raise AlphabetMismatchError(f.size, g.size)
    memo: dict = {}
    return Endomorphism([substitute(image, g.images, memo) for image in f.images], f.alphabet)


def permutation(targets: Sequence[int]) -> Endomorphism:
    """Automorphism x_k -> x_{targets[k]} (0-based)."""
    return Endomorphism([leaf(t) for t in targets])


def reduction_trace(f: Endomorphism) -> tuple[list[ReductionStep], list[SWord]]:
    images = list(f.images)
    steps = []
    while True:
        if any(image.is_identity for image in images):
            raise NotAnAutomorphismError("an image reduces to e")
        step = find_reduction(images)
        if step is None:
            break
        steps.append(step)
        images[step.i] = step.after
    if sorted(image.generator for image in images if image.is_leaf) != list(range(f.size)):
        raise NotAnAutomorphismError(
            "irreducible images " + ", ".join(render(image) for image in images) + " are not the generators")
    return steps, images


def is_automorphism(f: Endomorphism) -> bool:
    try:
        reduction_trace(f)
    except NotAnAutomorphismError as e:
        logger.debug("%s: %s", f.render(), e)
        return False
    return True


def decompose_permutation(images: Sequence[SWord]) -> list[ElementaryAut]:
    """Transpositions (k j) written as e_k(x_j) e_j(x_k) e_k(x_j), leftmost first."""
    current = list(images)
    letters = []
    for k in range(len(current)):
        target = leaf(k)
        if current[k] == target:
            continue
        j = current.index(target)
        current[k], current[j] = current[j], current[k]
        letters.extend([ElementaryAut(k, leaf(j)), ElementaryAut(j, leaf(k)), ElementaryAut(k, leaf(j))])
    return letters


def tame_decompose(f: Endomorphism) -> TameWord:
    """
    Write f as a product of elementary automorphisms.

    Each reduction step shortens image i by v, with v given as a parse over
    the other images. Pulling v back through the current automorphism means
    evaluating the same parse on the generators, which yields e_i(w) with
    f = e_i(w) f'. The terminal permutation is split into transpositions.
    """
    steps, final = reduction_trace(f)
    generators = [leaf(k) for k in range(f.size)]
    letters = [ElementaryAut(step.i, evaluate(step.reducer_parse, generators)) for step in steps]
    letters.extend(decompose_permutation(final))
    word = TameWord(letters)
    if word.evaluate(f.size) != f:
        raise DecompositionError(f"Recomposition of {word.render()} differs from {f.render()}")
    logger.debug("Decomposed %s into %d letters", f.render(), len(word))
    return word


def invert(f: Endomorphism) -> Endomorphism:
    return tame_decompose(f).inverse().evaluate(f.size)


def lemma_l2_classify(u: SWord, e: ElementaryAut) -> L2Case:
    """
    For u = (u1 u2): either the images of u1 and u2 pair without cancellation,
    or u^e = x_i with {u1, u2} = {x_i, v}.
    """
    if not u.is_pair:
        raise PreconditionError("lemma_l2_classify needs a pair word")
    n = max(u.support.bit_length(), e.v.support.bit_length(), e.i + 1)
    f = e.to_endomorphism(n)
    first, second = apply(f, u.first), apply(f, u.second)
    image = mult(first, second)
    x_i = leaf(e.i)
    collapsed = image == x_i and {u.first, u.second} == {x_i, e.v}
    split = image.length == first.length + second.length
    if collapsed == split:
        raise SteinerError(f"Dichotomy violated for u={render(u)}, {e.render()}")
    return L2Case.COLLAPSED_TO_GENERATOR if collapsed else L2Case.SPLIT_PRESERVED
