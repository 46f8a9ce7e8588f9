"""
Unit tests for the Coxeter and free product growth oracles.
"""
import pytest

from steiner.coxeter import CoxeterGroup, free_product_spheres
from steiner.errors import PreconditionError, ResourceLimitError

S3 = [[1, 3], [3, 1]]
RANK_THREE = [[1, 3, 4], [3, 1, 3], [4, 3, 1]]


class TestCoxeterGroup:

    def test_symmetric_group(self):
        assert CoxeterGroup(S3).spheres(3) == [1, 2, 2, 1]

    def test_finite_group_spheres_end(self):
        assert CoxeterGroup(S3).spheres(5) == [1, 2, 2, 1, 0, 0]

    def test_commuting_involutions(self):
        matrix = [[1, 2, 2], [2, 1, 2], [2, 2, 1]]
        assert CoxeterGroup(matrix).spheres(4) == [1, 3, 3, 1, 0]

    def test_no_short_relations(self):
        assert CoxeterGroup(RANK_THREE).spheres(2) == [1, 3, 6]

    def test_infinite_entry(self):
        assert CoxeterGroup([[1, None], [None, 1]]).spheres(4) == [1, 2, 2, 2, 2]

    def test_normal_form(self):
        group = CoxeterGroup(S3)
        assert group.normal_form([0, 1, 0]) == group.normal_form([1, 0, 1])
        assert group.normal_form([0, 0]) == ()
        assert group.normal_form([0, 1, 0, 1, 0, 1]) == ()

    def test_braid_class(self):
        group = CoxeterGroup(S3)
        assert group.reduced_words((0, 1, 0)) == frozenset({(0, 1, 0), (1, 0, 1)})

    def test_invalid_matrix(self):
        with pytest.raises(PreconditionError):
            CoxeterGroup([[1, 3], [2, 1]])
        with pytest.raises(PreconditionError):
            CoxeterGroup([[2, 3], [3, 1]])
        with pytest.raises(PreconditionError):
            CoxeterGroup([[1, 1], [1, 1]])

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            CoxeterGroup(RANK_THREE, max_elements=20).spheres(6)


class TestFreeProductSpheres:

    def test_infinite_dihedral(self):
        assert free_product_spheres([[1, 1], [1, 1]], 4) == [1, 2, 2, 2, 2]

    def test_symmetric_group_and_involution(self):
        assert free_product_spheres([[1, 2, 2, 1], [1, 1]], 3) == [1, 3, 6, 11]

    def test_single_factor(self):
        assert free_product_spheres([[1, 2, 2, 1]], 4) == [1, 2, 2, 1, 0]
