"""
Unit tests for relations between automorphisms of S(x1, x2, x3).
"""
from functools import reduce

import pytest

from steiner.automorphisms import ElementaryAut, Endomorphism, TameWord, compose
from steiner.errors import PreconditionError, ResourceLimitError
from steiner.relations import (COXETER_LETTERS, COXETER_MATRIX, PERMUTATIONS, Conjecture, GroupLetter,
                               alternating_search, cayley_bfs, conjecture_scan, coxeter_bfs, e, eval_word,
                               free_family, letter_generators, q_word, relator_factors, render_word, s3_c2_spheres,
                               s3_phi_word, verify_known_relations)
from steiner.words import leaf, mult

x1, x2, x3 = leaf(0), leaf(1), leaf(2)


class TestPermutations:

    def test_cycle_convention(self):
        assert PERMUTATIONS["(123)"].images == (x2, x3, x1)
        assert PERMUTATIONS["(132)"].images == (x3, x1, x2)

    def test_render_word(self):
        assert render_word([GroupLetter.PHI, "(12)", e(1, 3)]) == "phi (12) e1(x3)"
        assert render_word([]) == "1"


class TestKnownRelations:

    def test_all_pass(self):
        report = verify_known_relations()
        assert report.all_pass
        assert report.failures == []

    def test_transposition_as_elementary_word(self):
        assert eval_word(["(12)"]) == eval_word([e(1, 2), e(2, 1), e(1, 2)])

    def test_phi_is_not_central(self):
        assert eval_word([GroupLetter.PHI, "(13)"]) != eval_word(["(13)", GroupLetter.PHI])


class TestCayleyBfs:

    def test_free_family_has_no_relations(self):
        profile, report = cayley_bfs(free_family(), 8)
        assert profile.sizes == [1] + [3 * 2 ** (d - 1) for d in range(1, 9)]
        assert report.relators == []

    def test_coxeter_letters_find_short_relators(self):
        _, report = cayley_bfs(letter_generators(COXETER_LETTERS), 3)
        assert ("(12)", "phi") * 3 in report.relators
        assert ("(12)", "(13)") * 3 in report.relators

    def test_relators_evaluate_to_identity(self):
        generators = letter_generators(COXETER_LETTERS)
        _, report = cayley_bfs(generators, 5)
        assert report.relators
        for relator in report.relators:
            assert reduce(compose, relator_factors(relator, generators)).is_identity

    @pytest.mark.parametrize("subset", [(GroupLetter.PHI, GroupLetter.S12), (GroupLetter.PHI, GroupLetter.S13),
                                        (GroupLetter.S12, GroupLetter.S13)])
    def test_spheres_grow_with_generator_set(self, subset):
        smaller, _ = cayley_bfs(letter_generators(subset), 6)
        larger, _ = cayley_bfs(letter_generators(COXETER_LETTERS), 6)
        assert all(small <= large for small, large in zip(smaller.sizes, larger.sizes))

    def test_free_family_spheres_grow_with_generator_set(self):
        family = free_family()
        smaller, _ = cayley_bfs(dict(list(family.items())[:2]), 6)
        larger, _ = cayley_bfs(family, 6)
        assert smaller.sizes == [1, 2, 2, 2, 2, 2, 2]
        assert all(small <= large for small, large in zip(smaller.sizes, larger.sizes))

    def test_threads_do_not_change_result(self):
        generators = letter_generators(COXETER_LETTERS)
        single = cayley_bfs(generators, 4, threads=1)
        parallel = cayley_bfs(generators, 4, threads=4)
        assert single[0].sizes == parallel[0].sizes
        assert single[1].relators == parallel[1].relators

    def test_balls(self):
        profile, _ = cayley_bfs(free_family(), 2)
        assert profile.balls == [1, 4, 10]

    def test_element_cap(self):
        with pytest.raises(ResourceLimitError):
            cayley_bfs(free_family(), 6, max_elements=50)


class TestConjectures:

    def test_coxeter_growth(self):
        report = conjecture_scan(Conjecture.COXETER, 8)
        assert report.matches
        assert report.first_divergence is None
        assert [row.depth for row in report.rows] == list(range(9))

    def test_free_product_growth_diverges(self):
        report = conjecture_scan(Conjecture.FREE_PRODUCT, 8)
        assert report.first_divergence == 4
        assert [row.cayley_count for row in report.rows[:4]] == [1, 3, 6, 11]
        assert report.rows[4].cayley_count == 19
        assert report.rows[4].oracle_count == 20
        assert ("tau", "xi") * 4 in report.rows[4].new_relators

    def test_xi_commutes_with_its_tau_conjugate(self):
        tau_xi = eval_word([GroupLetter.TAU, GroupLetter.XI])
        assert not reduce(compose, [tau_xi] * 2).is_identity
        assert reduce(compose, [tau_xi] * 4).is_identity

    def test_coxeter_oracle(self):
        assert coxeter_bfs(COXETER_MATRIX, 2).sizes == [1, 3, 6]
        assert coxeter_bfs([[1, 2, 2], [2, 1, 2], [2, 2, 1]], 3).sizes == [1, 3, 3, 1]

    def test_free_product_oracle(self):
        assert s3_c2_spheres(3).sizes == [1, 3, 6, 11]


class TestAlternatingSearch:

    def test_two_blocks(self):
        report = alternating_search(2)
        assert report.words_checked == 19
        assert report.identities == []


class TestExpress:

    def test_e1_x2x3(self):
        f = ElementaryAut(0, mult(x2, x3)).to_endomorphism(3)
        word = s3_phi_word(f)
        assert eval_word(word) == f
        assert set(word) <= {GroupLetter.PHI, GroupLetter.S12, GroupLetter.S13}

    def test_tame_word(self):
        f = TameWord([e(1, 2), e(2, 3), e(3, 1), ElementaryAut(1, mult(x3, x1))]).evaluate(3)
        assert eval_word(s3_phi_word(f)) == f

    def test_stabilizer_word(self):
        f = TameWord([e(1, 2), e(2, 3), e(1, 3), e(2, 1)]).evaluate(3)
        assert f.images[2] == x3
        word = q_word(f)
        assert eval_word(word) == f
        assert set(word) <= {GroupLetter.PHI, GroupLetter.TAU, GroupLetter.XI}

    def test_stabilizer_word_needs_fixed_x3(self):
        with pytest.raises(PreconditionError):
            q_word(Endomorphism([x1, x3, x2]))
