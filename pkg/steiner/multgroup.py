"""
The multiplication group of S(X): a free product of order-2 groups C_v, one
for each right translation R_v: w -> w·v with v != e.

Elements are reduced letter sequences; equality is equality of reduced words.
"""

import logging
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from steiner.errors import PreconditionError, WordSyntaxError
from steiner.words import IDENTITY, Alphabet, SWord, _cmp, mult, parse, render

logger = logging.getLogger(__name__)

LETTER_PATTERN = re.compile(r"\s*R\[(.*)\]\s*$")


@dataclass(frozen=True)
class TranslationLetter:
    v: SWord

    def __post_init__(self):
        if self.v.is_identity:
            raise PreconditionError("R_e is the identity and is not a letter")

    def render(self, alphabet: Optional[Alphabet] = None) -> str:
        return f"R[{render(self.v, alphabet)}]"


@dataclass(frozen=True)
class MultElement:
    letters: tuple[TranslationLetter, ...] = ()

    @classmethod
    def of(cls, *words: SWord) -> "MultElement":
        return reduce_word(TranslationLetter(word) for word in words)

    def __mul__(self, other: "MultElement") -> "MultElement":
        return reduce_word(self.letters + other.letters)

    def inverse(self) -> "MultElement":
        return MultElement(tuple(reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    def render(self, alphabet: Optional[Alphabet] = None) -> str:
        if not self.letters:
            return "1"
        return "*".join(letter.render(alphabet) for letter in self.letters)


IDENTITY_ELEMENT = MultElement()


@dataclass(frozen=True)
class StabGenerator:
    """R_v R_w R_{v·w}; its action fixes e."""
    v: SWord
    w: SWord

    @property
    def is_degenerate(self) -> bool:
        return self.v.is_identity or self.v == self.w

    def element(self) -> MultElement:
        words = [word for word in (self.v, self.w, mult(self.v, self.w)) if not word.is_identity]
        return reduce_word(TranslationLetter(word) for word in words)

    def render(self, alphabet: Optional[Alphabet] = None) -> str:
        return f"s({render(self.v, alphabet)}, {render(self.w, alphabet)})"


def reduce_word(letters: Iterable[TranslationLetter]) -> MultElement:
    stack: list[TranslationLetter] = []
    for letter in letters:
        if stack and stack[-1] == letter:
            stack.pop()
        else:
            stack.append(letter)
    return MultElement(tuple(stack))


def parse_element(text: str, alphabet: Optional[Alphabet] = None) -> MultElement:
    """Parse "R[x1]*R[(x2 x1)]"; "1" or an empty string is the identity."""
    text = text.strip()
    if text in ("", "1"):
        return IDENTITY_ELEMENT
    letters = []
    position = 0
    for chunk in _split_letters(text):
        match = LETTER_PATTERN.match(chunk)
        if match is None:
            raise WordSyntaxError("Expected R[<word>]", position)
        letters.append(TranslationLetter(parse(match.group(1), alphabet)))
        position += len(chunk) + 1
    return reduce_word(letters)


def _split_letters(text: str) -> list[str]:
    chunks, depth, start = [], 0, 0
    for index, char in enumerate(text):
        if char == "[":
            depth += 1
        elif char == "]":
            depth -= 1
        elif char == "*" and depth == 0:
            chunks.append(text[start:index])
            start = index + 1
    chunks.append(text[start:])
    return chunks


def act(g: MultElement, word: SWord) -> SWord:
    for letter in g.letters:
        word = mult(word, letter.v)
    return word


def is_identity(g: MultElement) -> bool:
    return not reduce_word(g.letters).letters


def stab_factor(g: MultElement) -> tuple[MultElement, Optional[TranslationLetter]]:
    """g = h · R_rep with rep = act(g, e) and h fixing e; rep is None when g fixes e."""
    image = act(g, IDENTITY)
    if image.is_identity:
        return g, None
    rep = TranslationLetter(image)
    return reduce_word(g.letters + (rep,)), rep


def _canonical(v: SWord, w: SWord) -> tuple[StabGenerator, int]:
    # s(v, w)^-1 = s(v·w, w); keep the orientation with the smaller coset word
    vw = mult(v, w)
    if _cmp(v, vw) > 0:
        return StabGenerator(vw, w), -1
    return StabGenerator(v, w), 1


def schreier_rewrite(h: MultElement) -> list[tuple[StabGenerator, int]]:
    """
    Rewrite h (fixing e) as a product of generators R_v R_w R_{v·w}, scanning
    the letters with the running coset word v = act(prefix, e).
    """
    if not act(h, IDENTITY).is_identity:
        raise PreconditionError("schreier_rewrite needs an element fixing e")
    result = []
    degenerate = 0
    coset = IDENTITY
    for letter in h.letters:
        generator = StabGenerator(coset, letter.v)
        if generator.is_degenerate:
            degenerate += 1
        else:
            result.append(_canonical(coset, letter.v))
        coset = mult(coset, letter.v)
    logger.debug("Schreier rewrite: %d generators, %d degenerate dropped", len(result), degenerate)
    return result


def product(generators: Sequence[tuple[StabGenerator, int]]) -> MultElement:
    letters: list[TranslationLetter] = []
    for generator, exponent in generators:
        element = generator.element()
        letters.extend(element.letters if exponent > 0 else element.inverse().letters)
    return reduce_word(letters)
