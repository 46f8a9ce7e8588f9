"""
Unit tests for the multiplication group of the free Steiner loop.
"""
import random

import pytest

from steiner.errors import PreconditionError, WordSyntaxError
from steiner.multgroup import (IDENTITY_ELEMENT, MultElement, StabGenerator, TranslationLetter, act, is_identity,
                               parse_element, product, reduce_word, schreier_rewrite, stab_factor)
from steiner.words import IDENTITY, enumerate_swords, leaf, mult

x1, x2, x3 = leaf(0), leaf(1), leaf(2)
x21 = mult(x2, x1)
Ra, Rb, Rba = TranslationLetter(x1), TranslationLetter(x2), TranslationLetter(x21)


class TestReduceWord:

    def test_involution(self):
        assert reduce_word([Ra, Ra]) == IDENTITY_ELEMENT

    def test_nested_cancellation(self):
        assert reduce_word([Ra, Rb, Rb, Ra]) == IDENTITY_ELEMENT

    def test_already_reduced(self):
        assert reduce_word([Ra, Rb, Ra]).letters == (Ra, Rb, Ra)

    def test_identity_letter_rejected(self):
        with pytest.raises(PreconditionError):
            TranslationLetter(IDENTITY)

    def test_inverse(self):
        g = MultElement.of(x1, x2, x3)
        assert is_identity(g * g.inverse())


class TestParseElement:

    def test_round_trip(self):
        g = parse_element("R[x1]*R[(x1 x2)]")
        assert g.letters == (Ra, Rba)
        assert g.render() == "R[x1]*R[(x2 x1)]"

    def test_identity(self):
        assert parse_element("1") == IDENTITY_ELEMENT
        assert IDENTITY_ELEMENT.render() == "1"

    def test_bad_letter(self):
        with pytest.raises(WordSyntaxError):
            parse_element("R[x1]*S[x2]")


class TestAct:

    def test_folds_left_to_right(self):
        assert act(MultElement((Ra, Rb)), IDENTITY) == x21

    def test_stabilizer_element(self):
        assert act(MultElement((Ra, Rb, Rba)), IDENTITY) == IDENTITY

    def test_identity_element(self):
        assert act(IDENTITY_ELEMENT, x3) == x3


class TestStabFactor:

    def test_two_letters(self):
        h, rep = stab_factor(MultElement((Ra, Rb)))
        assert h.letters == (Ra, Rb, Rba)
        assert rep == Rba

    def test_single_letter(self):
        h, rep = stab_factor(MultElement((Ra,)))
        assert h == IDENTITY_ELEMENT
        assert rep == Ra

    def test_identity(self):
        assert stab_factor(IDENTITY_ELEMENT) == (IDENTITY_ELEMENT, None)


class TestSchreierRewrite:

    def test_single_generator(self):
        assert schreier_rewrite(MultElement((Ra, Rb, Rba))) == [(StabGenerator(x1, x2), 1)]

    def test_identity(self):
        assert schreier_rewrite(IDENTITY_ELEMENT) == []

    def test_two_generators(self):
        first, second = StabGenerator(x1, x2), StabGenerator(x1, x3)
        h = first.element() * second.element()
        assert schreier_rewrite(h) == [(first, 1), (second, 1)]

    def test_inverse_orientation(self):
        h = StabGenerator(x1, x2).element().inverse()
        assert schreier_rewrite(h) == [(StabGenerator(x1, x2), -1)]

    def test_needs_stabilizer_element(self):
        with pytest.raises(PreconditionError):
            schreier_rewrite(MultElement((Ra,)))

    def test_degenerate_generators(self):
        assert StabGenerator(IDENTITY, x1).is_degenerate
        assert StabGenerator(x1, x1).is_degenerate
        assert StabGenerator(x1, x1).element() == IDENTITY_ELEMENT


class TestRandomElements:

    def setup_method(self):
        self.rng = random.Random(1729)
        self.letters = [TranslationLetter(w) for w in enumerate_swords(3, 2) if not w.is_identity]

    def random_element(self, size: int) -> MultElement:
        return reduce_word(self.rng.choice(self.letters) for _ in range(size))

    def test_rewrite_round_trip(self):
        for _ in range(200):
            h, _ = stab_factor(self.random_element(self.rng.randint(0, 8)))
            assert product(schreier_rewrite(h)) == h


class TestFreeProduct:

    def setup_method(self):
        self.short = [w for w in enumerate_swords(3, 2) if not w.is_identity]
        self.letters = [TranslationLetter(w) for w in self.short]
        self.test_words = list(enumerate_swords(3, 4))

    def reduced_words(self, max_len: int):
        stack = [()]
        while stack:
            letters = stack.pop()
            if letters:
                yield letters
            if len(letters) < max_len:
                stack.extend(letters + (letter,) for letter in self.letters
                              if not letters or letters[-1] != letter)

    def test_letters_are_involutions(self):
        for v in self.short:
            for w in enumerate_swords(3, 3):
                assert act(MultElement((TranslationLetter(v), TranslationLetter(v))), w) == w

    def test_nonidentity_elements_move_some_word(self):
        count = 0
        for letters in self.reduced_words(6):
            g = MultElement(letters)
            assert not is_identity(g)
            assert any(act(g, w) != w for w in self.test_words), g.render()
            count += 1
        size = len(self.letters)
        assert count == sum(size * (size - 1) ** (k - 1) for k in range(1, 7))

    def test_stab_generators_are_free(self):
        generators, seen = [], set()
        for v in self.short:
            for w in self.short:
                g = StabGenerator(v, w)
                if g.is_degenerate or g.element().inverse() in seen:
                    continue
                seen.add(g.element())
                generators.append(g)
        symbols = [(g, e) for g in generators for e in (1, -1)]
        words = [()]
        frontier = [()]
        for _ in range(3):
            frontier = [word + (symbol,) for word in frontier for symbol in symbols
                        if not word or word[-1] != (symbol[0], -symbol[1])]
            words.extend(frontier)
        elements = {product(word) for word in words}
        assert len(elements) == len(words)
