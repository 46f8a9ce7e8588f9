"""
S-words: canonical elements of the free Steiner loop S(X).

An S-word is the identity, a generator leaf, or a pair (first second) with
first strictly greater than second and second not an immediate factor of
first. Words are immutable and compared structurally; the multiplication
`mult` always returns a canonical word, so equality of loop elements is
equality of words.
"""

import logging
import re
import sys
from dataclasses import dataclass, field
from enum import Enum
from functools import cmp_to_key
from typing import Iterator, Optional, Sequence, Union

from steiner.config import get_settings
from steiner.errors import (InvalidWordError, PreconditionError, ResourceLimitError,
                            UnknownGeneratorError, WordSyntaxError)

logger = logging.getLogger(__name__)

IDENT_PATTERN = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
RESERVED_NAMES = ("e", "0")


class Order(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class SWord:
    """
    Immutable word with cached length, generator support (bitmask) and digest.
    Build words with `leaf`, `pair` or `mult`; `IDENTITY` is the empty word.
    """

    __slots__ = ("first", "second", "generator", "length", "support", "_digest")

    def __init__(self, first: Optional["SWord"] = None, second: Optional["SWord"] = None,
                 generator: int = -1):
        object.__setattr__(self, "first", first)
        object.__setattr__(self, "second", second)
        object.__setattr__(self, "generator", generator)
        if first is not None:
            object.__setattr__(self, "length", first.length + second.length)
            object.__setattr__(self, "support", first.support | second.support)
            object.__setattr__(self, "_digest", hash((first._digest, second._digest)))
        elif generator >= 0:
            object.__setattr__(self, "length", 1)
            object.__setattr__(self, "support", 1 << generator)
            object.__setattr__(self, "_digest", hash(("leaf", generator)))
        else:
            object.__setattr__(self, "length", 0)
            object.__setattr__(self, "support", 0)
            object.__setattr__(self, "_digest", hash("identity"))

    def __setattr__(self, key, value):
        raise AttributeError("SWord is immutable")

    @property
    def is_identity(self) -> bool:
        return self.length == 0

    @property
    def is_leaf(self) -> bool:
        return self.length == 1

    @property
    def is_pair(self) -> bool:
        return self.first is not None

    def has_factor(self, other: "SWord") -> bool:
        return self.first is not None and (self.first == other or self.second == other)

    def other_factor(self, factor: "SWord") -> "SWord":
        return self.second if self.first == factor else self.first

    def uses_generator(self, index: int) -> bool:
        return bool(self.support >> index & 1)

    def __hash__(self):
        return self._digest

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, SWord):
            return NotImplemented
        if self._digest != other._digest or self.length != other.length:
            return False
        return _cmp(self, other) == 0

    def __lt__(self, other: "SWord") -> bool:
        return _cmp(self, other) < 0

    def __repr__(self):
        return f"SWord({render(self)})"

    def __str__(self):
        return render(self)


IDENTITY = SWord()

RawWord = Union[None, int, tuple]


class Alphabet:
    """Ordered generator names; position in the sequence is the base order."""

    def __init__(self, names: Sequence[str]):
        if not names:
            raise PreconditionError("An alphabet needs at least one generator")
        for name in names:
            if name in RESERVED_NAMES or not IDENT_PATTERN.fullmatch(name):
                raise PreconditionError(f"Invalid generator name: {name!r}")
        if len(set(names)) != len(names):
            raise PreconditionError("Generator names must be distinct")
        self.names = tuple(names)
        self._index = {name: i for i, name in enumerate(self.names)}

    @classmethod
    def from_size(cls, n: int) -> "Alphabet":
        return cls([f"x{i + 1}" for i in range(n)])

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError as e:
            raise UnknownGeneratorError(name) from e

    def generators(self) -> list[SWord]:
        return [leaf(i) for i in range(self.size)]

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Alphabet({', '.join(self.names)})"


_DEFAULT_ALPHABETS: dict[int, Alphabet] = {}


def default_alphabet(n: int) -> Alphabet:
    if n not in _DEFAULT_ALPHABETS:
        _DEFAULT_ALPHABETS[n] = Alphabet.from_size(n)
    return _DEFAULT_ALPHABETS[n]


def leaf(index: int) -> SWord:
    if index < 0:
        raise PreconditionError(f"Generator index must be non-negative, got {index}")
    return SWord(generator=index)


def _cmp(v: SWord, w: SWord) -> int:
    if v is w:
        return 0
    if v.length != w.length:
        return -1 if v.length < w.length else 1
    if v.length == 0:
        return 0
    if v.length == 1:
        return (v.generator > w.generator) - (v.generator < w.generator)
    result = _cmp(v.first, w.first)
    if result:
        return result
    return _cmp(v.second, w.second)


def compare(v: SWord, w: SWord) -> Order:
    result = _cmp(v, w)
    if result < 0:
        return Order.LESS
    if result > 0:
        return Order.GREATER
    return Order.EQUAL


word_key = cmp_to_key(_cmp)


def pair(first: SWord, second: SWord) -> SWord:
    """Checked Pair constructor: raises InvalidWordError unless (first second) is an S-word."""
    if first.is_identity or second.is_identity:
        raise InvalidWordError("The identity cannot be a factor")
    if _cmp(first, second) <= 0:
        raise InvalidWordError(f"First factor {render(first)} must be greater than {render(second)}")
    if first.has_factor(second):
        raise InvalidWordError(f"{render(second)} is an immediate factor of {render(first)}")
    return SWord(first, second)


def mult(v: SWord, w: SWord) -> SWord:
    if v.length == 0:
        return w
    if w.length == 0:
        return v
    order = _cmp(v, w)
    if order == 0:
        return IDENTITY
    big, small = (v, w) if order > 0 else (w, v)
    if big.first is not None:
        # only the greater operand can carry the other as an immediate factor
        if big.first == small:
            return big.second
        if big.second == small:
            return big.first
    return SWord(big, small)


def mult_all(words: Sequence[SWord]) -> SWord:
    """Left fold with mult: ((w0 w1) w2) ..."""
    result = IDENTITY
    for word in words:
        result = mult(result, word)
    return result


def render(word: SWord, alphabet: Optional[Alphabet] = None) -> str:
    if word.length == 0:
        return "e"
    if word.length == 1:
        if alphabet is None:
            return f"x{word.generator + 1}"
        return alphabet.names[word.generator]
    return f"({render(word.first, alphabet)} {render(word.second, alphabet)})"


class _Parser:

    def __init__(self, text: str, alphabet: Alphabet):
        self.text = text
        self.alphabet = alphabet
        self.pos = 0

    def skip_ws(self) -> bool:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.pos > start

    def parse(self) -> RawWord:
        self.skip_ws()
        tree = self.word()
        self.skip_ws()
        if self.pos != len(self.text):
            raise WordSyntaxError("Unexpected trailing input", self.pos)
        return tree

    def word(self) -> RawWord:
        if self.pos >= len(self.text):
            raise WordSyntaxError("Unexpected end of input", self.pos)
        char = self.text[self.pos]
        if char == "(":
            self.pos += 1
            self.skip_ws()
            left = self.word()
            if not self.skip_ws():
                raise WordSyntaxError("Expected whitespace between factors", self.pos)
            right = self.word()
            self.skip_ws()
            if self.pos >= len(self.text) or self.text[self.pos] != ")":
                raise WordSyntaxError("Expected ')'", self.pos)
            self.pos += 1
            return (left, right)
        if char == "0":
            self.pos += 1
            return None
        match = IDENT_PATTERN.match(self.text, self.pos)
        if match is None:
            raise WordSyntaxError(f"Unexpected character {char!r}", self.pos)
        self.pos = match.end()
        name = match.group(0)
        if name == "e":
            return None
        return self.alphabet.index(name)


def parse_raw(text: str, alphabet: Optional[Alphabet] = None) -> RawWord:
    """Parse the word grammar into a raw tree: None for e, int for a leaf, tuple for a pair."""
    return _Parser(text, alphabet or default_alphabet(get_settings().generators)).parse()


def normalize(raw: RawWord) -> SWord:
    if raw is None:
        return IDENTITY
    if isinstance(raw, int):
        return leaf(raw)
    return mult(normalize(raw[0]), normalize(raw[1]))


def parse(text: str, alphabet: Optional[Alphabet] = None) -> SWord:
    try:
        return normalize(parse_raw(text, alphabet))
    except RecursionError as e:
        raise ResourceLimitError("word depth", sys.getrecursionlimit()) from e


def _as_sword(raw: RawWord) -> Optional[SWord]:
    """Structural conversion without normalization; None when some subtree is invalid."""
    if raw is None:
        return IDENTITY
    if isinstance(raw, int):
        return leaf(raw) if raw >= 0 else None
    first, second = _as_sword(raw[0]), _as_sword(raw[1])
    if first is None or second is None:
        return None
    try:
        return pair(first, second)
    except InvalidWordError:
        return None


def validate(candidate: RawWord) -> bool:
    return _as_sword(candidate) is not None


def enumerate_swords(alphabet_size: int, max_len: int, limit: Optional[int] = None) -> Iterator[SWord]:
    """
    Yield every S-word of length <= max_len exactly once, in increasing order.
    """
    if max_len < 0:
        raise PreconditionError("max_len must be non-negative")
    limit = limit or get_settings().max_elements
    by_length: dict[int, list[SWord]] = {0: [IDENTITY], 1: [leaf(i) for i in range(alphabet_size)]}
    count = 0
    for length in range(max_len + 1):
        if length >= 2:
            words = []
            for first_len in range((length + 1) // 2, length):
                for first in by_length[first_len]:
                    for second in by_length[length - first_len]:
                        if _cmp(first, second) > 0 and not first.has_factor(second):
                            words.append(SWord(first, second))
            words.sort(key=word_key)
            by_length[length] = words
        for word in by_length[length]:
            count += 1
            if count > limit:
                raise ResourceLimitError("enumerated words", limit)
            yield word


def associator_witness(x: SWord, y: SWord, alphabet_size: int,
                       max_len: Optional[int] = None) -> tuple[SWord, SWord, SWord]:
    """
    Find z with (x·y)·z != x·(y·z). Returns (z, (x·y)·z, x·(y·z)).

    Candidates z = y·x_j are tried first for every generator x_j that is
    neither y nor an immediate factor of y; if none separates the two
    products, words are scanned in increasing order.
    """
    if x == y:
        raise PreconditionError("associator_witness needs distinct elements")
    if x.is_identity or y.is_identity:
        raise PreconditionError("associator_witness needs non-identity elements")
    if alphabet_size <= 2:
        raise PreconditionError("associator_witness needs more than two generators")
    xy = mult(x, y)
    for j in range(alphabet_size):
        generator = leaf(j)
        if generator == y or y.has_factor(generator):
            continue
        z = mult(y, generator)
        left, right = mult(xy, z), mult(x, mult(y, z))
        if left != right:
            return z, left, right
    logger.debug("Generator recipe failed for (%s, %s); scanning", render(x), render(y))
    max_len = max_len or max(x.length + y.length + 2, 4)
    for z in enumerate_swords(alphabet_size, max_len):
        left, right = mult(xy, z), mult(x, mult(y, z))
        if left != right:
            return z, left, right
    raise ResourceLimitError("witness word length", max_len)


@dataclass
class NucleusScanReport:
    """Result of eliminating every nonempty word up to max_len from the nucleus."""
    alphabet_size: int
    max_len: int
    candidates: int = 0
    eliminated: int = 0
    witnesses: list[tuple[SWord, SWord, SWord]] = field(default_factory=list)
    failures: list[SWord] = field(default_factory=list)

    @property
    def all_eliminated(self) -> bool:
        return self.candidates == self.eliminated and not self.failures


def nucleus_scan(alphabet_size: int, max_len: int) -> NucleusScanReport:
    """
    For every word u != e with |u| <= max_len find (x, y) with
    (u·x)·y != u·(x·y); a word with no such pair would lie in the nucleus.
    """
    if alphabet_size <= 2:
        raise PreconditionError("The nucleus scan needs more than two generators")
    report = NucleusScanReport(alphabet_size=alphabet_size, max_len=max_len)
    for u in enumerate_swords(alphabet_size, max_len):
        if u.is_identity:
            continue
        report.candidates += 1
        x = leaf(1) if u == leaf(0) else leaf(0)
        z, left, right = associator_witness(u, x, alphabet_size)
        if left == right:
            report.failures.append(u)
            continue
        report.eliminated += 1
        report.witnesses.append((u, x, z))
    logger.info("Nucleus scan: %d of %d candidates eliminated", report.eliminated, report.candidates)
    return report


def substitute(word: SWord, images: Sequence[SWord], memo: Optional[dict] = None) -> SWord:
    """Replace leaf x_i by images[i] and fold bottom-up with mult (the homomorphic extension)."""
    if memo is None:
        memo = {}
    if word.length == 0:
        return word
    if word.length == 1:
        return images[word.generator]
    cached = memo.get(word)
    if cached is not None:
        return cached
    result = mult(substitute(word.first, images, memo), substitute(word.second, images, memo))
    memo[word] = result
    return result
