"""
Unit tests for canonical S-words: order, multiplication, parsing and enumeration.
"""
import logging
from itertools import product

import pytest

from steiner.errors import InvalidWordError, PreconditionError, UnknownGeneratorError, WordSyntaxError, \
    ResourceLimitError
from steiner.words import (IDENTITY, Alphabet, Order, compare, enumerate_swords, leaf, mult, mult_all,
                           nucleus_scan, pair, parse, parse_raw, normalize, render, validate, associator_witness,
                           substitute)

x1, x2, x3 = leaf(0), leaf(1), leaf(2)


class TestCompare:

    def test_generator_order(self):
        assert compare(x2, x1) == Order.GREATER
        assert compare(x1, x2) == Order.LESS
        assert compare(x1, x1) == Order.EQUAL

    def test_longer_word_is_greater(self):
        assert compare(mult(x2, x1), x3) == Order.GREATER

    def test_pairs_compare_lexicographically(self):
        assert compare(mult(x3, x1), mult(x2, x1)) == Order.GREATER
        assert compare(mult(x3, x1), mult(x3, x2)) == Order.LESS

    def test_identity_is_smallest(self):
        assert compare(IDENTITY, x1) == Order.LESS
        assert compare(IDENTITY, IDENTITY) == Order.EQUAL


class TestMult:

    def test_square_is_identity(self):
        assert mult(x1, x1) == IDENTITY

    def test_identity_absorbs(self):
        assert mult(IDENTITY, x2) == x2
        assert mult(x2, IDENTITY) == x2

    def test_cancels_immediate_factor(self):
        assert mult(mult(x2, x1), x1) == x2
        assert mult(x1, mult(x2, x1)) == x2

    def test_cancels_pair_factor(self):
        x21 = mult(x2, x1)
        assert mult(mult(x3, x21), x21) == x3

    def test_canonical_pairing(self):
        word = mult(x1, x2)
        assert word.first == x2
        assert word.second == x1
        assert render(word) == "(x2 x1)"

    def test_loop_axioms_exhaustive(self):
        words = list(enumerate_swords(3, 5))
        for v, w in product(words, repeat=2):
            vw = mult(v, w)
            assert vw == mult(w, v)
            assert mult(v, vw) == w
            assert validate(parse_raw(render(vw)))

    def test_involution_exhaustive(self):
        for v in enumerate_swords(3, 6):
            assert mult(v, v) == IDENTITY
            assert mult(v, IDENTITY) == v

    def test_mult_all_folds_left(self):
        assert mult_all([x1, x2, x1]) == x2
        assert mult_all([]) == IDENTITY


class TestValidate:

    def test_valid_pair(self):
        assert validate((1, 0))

    def test_second_factor_repeats_first_factor(self):
        assert not validate(((1, 0), 0))

    def test_shorter_factor_first(self):
        assert not validate((0, (2, 1)))

    def test_checked_constructor(self):
        with pytest.raises(InvalidWordError):
            pair(x1, x2)
        with pytest.raises(InvalidWordError):
            pair(mult(x2, x1), x1)
        assert pair(x2, x1) == mult(x2, x1)


class TestParse:

    def test_deep_nesting_raises_depth_cap(self):
        text = "x1"
        for i in range(5000):
            text = f"({text} x{2 + i % 2})"
        with pytest.raises(ResourceLimitError) as error:
            parse(text)
        assert error.value.cap == "word depth"

    def test_normalizes_input(self):
        assert parse("(x1 (x1 x2))") == x2
        assert parse("(x1 x1)") == IDENTITY
        assert parse("e") == IDENTITY

    def test_render_round_trip(self):
        text = render(parse("(x1 x2)"))
        assert text == "(x2 x1)"
        assert render(parse(text)) == text

    def test_raw_tree_keeps_input_shape(self):
        raw = parse_raw("(x1 x2)")
        assert raw == (0, 1)
        assert not validate(raw)
        assert normalize(raw) == mult(x2, x1)

    def test_syntax_error_reports_position(self):
        with pytest.raises(WordSyntaxError) as error:
            parse("(x1")
        assert error.value.position >= 3

    def test_unknown_generator(self):
        with pytest.raises(UnknownGeneratorError):
            parse("(x1 x9)")

    def test_custom_alphabet(self):
        alphabet = Alphabet(["a", "b", "c"])
        word = parse("(a (b c))", alphabet)
        assert render(word, alphabet) == "((c b) a)"

    def test_reserved_names(self):
        with pytest.raises(PreconditionError):
            Alphabet(["e", "x"])


class TestEnumerate:

    def test_counts(self):
        assert len(list(enumerate_swords(3, 1))) == 4
        assert len(list(enumerate_swords(3, 2))) == 7

    def test_two_generators_stop_at_length_two(self):
        assert list(enumerate_swords(2, 3)) == [IDENTITY, x1, x2, mult(x2, x1)]

    def test_increasing_order(self):
        words = list(enumerate_swords(3, 4))
        for v, w in zip(words, words[1:]):
            assert compare(v, w) == Order.LESS

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            list(enumerate_swords(3, 5, limit=10))


class TestAssociator:

    def test_witness_for_generators(self):
        z, left, right = associator_witness(x1, x2, 3)
        assert left != right
        assert left == mult(mult(x1, x2), z)
        assert right == mult(x1, mult(x2, z))

    def test_witness_when_y_is_a_pair(self):
        z, left, right = associator_witness(x1, mult(x2, x1), 3)
        assert left != right
        assert left == mult(mult(x1, mult(x2, x1)), z)

    def test_scan_when_generator_recipe_fails(self, caplog):
        y = mult(x3, x2)
        with caplog.at_level(logging.DEBUG, logger="steiner.words"):
            z, left, right = associator_witness(x1, y, 3)
        assert "scanning" in caplog.text
        assert z == x2
        assert left != right
        assert right == mult(x1, mult(y, z))

    def test_every_pair_has_a_witness(self):
        words = [w for w in enumerate_swords(3, 3) if not w.is_identity]
        for v, w in product(words, repeat=2):
            if v != w:
                _, left, right = associator_witness(v, w, 3)
                assert left != right

    def test_needs_three_generators(self):
        with pytest.raises(PreconditionError):
            associator_witness(x1, x2, 2)

    def test_nucleus_scan_counts_from_enumerator(self):
        report = nucleus_scan(3, 3)
        assert report.candidates == 9
        assert report.all_eliminated

    def test_nucleus_scan_length_four(self):
        report = nucleus_scan(3, 4)
        assert report.candidates == len(list(enumerate_swords(3, 4))) - 1
        assert report.all_eliminated

    def test_nucleus_scan_rejects_two_generators(self):
        with pytest.raises(PreconditionError):
            nucleus_scan(2, 3)


class TestSubstitute:

    def test_homomorphic_extension(self):
        word = parse("((x2 x1) x3)")
        assert substitute(word, [x2, x1, x3]) == parse("((x1 x2) x3)")
        assert substitute(word, [x1, x1, x3]) == x3
