"""
Tests for narrow cuts, the chain they form and the layer structure.
"""
from fractions import Fraction

import pytest

from stpath.models.solution import LpSolution
from stpath.services.cut_service import (
    build_layers, check_layers, check_submodular_identity, find_narrow_cuts, intersection_bound
)
from stpath.services.errors import InputError
from stpath.services.subtour_service import SubtourService
from tests.fixtures import FRACTIONAL_SIDES, FRACTIONAL_SIZES, edges

F = Fraction


class TestFindNarrowCuts:
    """Test cases for find_narrow_cuts."""

    def test_chain_of_fractional_solution(self, fractional_xstar):
        """Test all six narrow cuts are found in chain order."""
        chain = find_narrow_cuts(fractional_xstar)

        assert [cut.side for cut in chain] == FRACTIONAL_SIDES
        assert list(chain.sizes) == FRACTIONAL_SIZES

    def test_cut_edges(self, fractional_xstar):
        """Test cut edge sets are the crossing support edges."""
        chain = find_narrow_cuts(fractional_xstar)

        assert chain[0].edges == edges('01', '03')
        assert chain[2].edges == edges('03', '13', '25', '27', '24')
        assert chain[5].edges == edges('27', '67')

    def test_chain_is_nested(self, fractional_xstar):
        """Test sides are strictly increasing and never contain t."""
        chain = find_narrow_cuts(fractional_xstar)
        for smaller, larger in zip(chain.cuts, chain.cuts[1:]):
            assert smaller.side < larger.side
        assert all(fractional_xstar.t not in cut.side for cut in chain)

    def test_integral_path_has_a_cut_per_edge(self, collinear_instance):
        """Test an integral path gives n - 1 cuts of size 1."""
        xstar = SubtourService().solve_subtour_lp(collinear_instance)
        chain = find_narrow_cuts(xstar)

        assert len(chain) == collinear_instance.n - 1
        assert set(chain.sizes) == {F(1)}

    def test_cuts_containing(self, fractional_xstar):
        """Test the chain indices containing an edge."""
        chain = find_narrow_cuts(fractional_xstar)

        assert chain.cuts_containing((0, 3)) == (0, 1, 2)
        assert chain.cuts_containing((2, 7)) == (2, 3, 4, 5)
        assert chain.cuts_containing((3, 4)) == ()


class TestBuildLayers:
    """Test cases for build_layers and check_layers."""

    def test_layer_weights(self, fractional_layers):
        """Test zetas follow the distinct sizes 5/3 and 1."""
        assert fractional_layers.k == 2
        assert fractional_layers.zetas == (F(1, 3), F(2, 3))
        assert fractional_layers.thresholds == (F(5, 3), F(1))

    def test_families(self, fractional_layers):
        """Test Q_1 holds every cut and Q_2 only those of size 1."""
        assert fractional_layers.families == ((0, 1, 2, 3, 4, 5), (0, 5))

    def test_layer_edges(self, fractional_layers):
        """Test L_i holds the edges lying in exactly one cut of Q_i."""
        assert fractional_layers.layer_edges[0] == edges('01', '12', '24', '45', '56', '67')
        assert fractional_layers.layer_edges[1] == edges('01', '03', '27', '67')

    def test_level_sets(self, fractional_layers):
        """Test the slabs between consecutive cuts."""
        assert fractional_layers.level_sets[1] == (frozenset({0}), frozenset(range(1, 7)), frozenset({7}))
        assert frozenset({3, 4}) in fractional_layers.level_sets[0]

    def test_check_layers_passes(self, fractional_xstar, fractional_layers):
        """Test the layer invariants hold."""
        assert check_layers(fractional_xstar, fractional_layers) is fractional_layers

    def test_single_layer_for_integral_path(self):
        """Test a single size gives one layer of weight 1."""
        xstar = LpSolution(n=3, s=0, t=1, x={(0, 2): F(1), (1, 2): F(1)})
        layers = build_layers(find_narrow_cuts(xstar))

        assert layers.zetas == (F(1),)
        assert layers.families == ((0, 1),)


class TestCutIdentities:
    """Test cases for intersection bounds and the submodular identity."""

    def test_intersection_bound_values(self, fractional_xstar, fractional_layers):
        """Test x*(Q1 & Q2) against (x*(Q1) + x*(Q2))/2 - 1."""
        chain = fractional_layers.chain

        assert intersection_bound(fractional_xstar, chain[1], chain[2]) == (F(2, 3), F(2, 3))
        assert intersection_bound(fractional_xstar, chain[0], chain[1]) == (F(1, 3), F(1, 3))

    def test_intersection_bound_every_pair(self, fractional_xstar, fractional_layers):
        """Test the bound holds for every pair of nested narrow cuts."""
        chain = fractional_layers.chain
        for a in range(len(chain)):
            for b in range(a + 1, len(chain)):
                lhs, rhs = intersection_bound(fractional_xstar, chain[a], chain[b])
                assert lhs <= rhs

    def test_intersection_bound_same_cut(self, fractional_xstar, fractional_layers):
        """Test one cut against itself raises InputError."""
        with pytest.raises(InputError):
            intersection_bound(fractional_xstar, fractional_layers.chain[0], fractional_layers.chain[0])

    @pytest.mark.parametrize('a,b', [
        ({0, 1, 3}, {0, 1, 2}),
        ({2, 5}, {4, 5, 6}),
        ({0}, {1, 2, 3, 4}),
    ])
    def test_submodular_identity(self, fractional_xstar, a, b):
        """Test the cut identity holds exactly for arbitrary sets."""
        assert check_submodular_identity(fractional_xstar, a, b).holds
