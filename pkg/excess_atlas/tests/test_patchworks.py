"""Tests for patchworks, multicores and cores."""

from fractions import Fraction

from django.test import SimpleTestCase, override_settings

from excess_atlas.exceptions import CapExceeded
from excess_atlas.graph_gf import (
    mgpos_series,
    multicore_series,
    pairs,
    sgpos_series,
    tree_series,
    unicycle_series,
)
from excess_atlas.oracle import enum_graphs, enum_multigraphs
from excess_atlas.patchworks import (
    PatchworkPolynomial,
    connected_patchworks,
    core_series,
    edge_cover_polynomial,
    enumerate_patchworks_no_isolated,
    isolated_patchworks,
    listed_cover_polynomial,
    mindeg3_multigraphs,
    multicore_bounds_check,
    patchwork_factorization_check,
    sgpos_lemma_series,
    sgpos_via_patchworks,
)
from excess_atlas.series import ps_exp

from utils.testing import SeriesAssertionsMixin


class PatchworkTestCase(SimpleTestCase):
    """Test the enumeration of patchworks."""

    def test_empty_star(self):
        """Test P_0* = 1."""
        self.assertEqual(
            enumerate_patchworks_no_isolated(0), PatchworkPolynomial.one(),
        )

    def test_isolated_parts(self):
        """Test the first terms of e^{uz/2 + uz^2/4}."""
        isolated = isolated_patchworks(2)
        self.assertEqual(isolated.coefficient(1, 1), Fraction(1, 2))
        self.assertEqual(isolated.coefficient(2, 1), Fraction(1, 4))
        self.assertEqual(isolated.coefficient(2, 2), Fraction(1, 8))

    def test_excess_one(self):
        """Test the patchworks of excess 1 on one and three vertices."""
        star = enumerate_patchworks_no_isolated(1)
        self.assertEqual(star.coefficient(1, 2), Fraction(1, 8))
        self.assertEqual(star.coefficient(3, 2), Fraction(1, 8))
        self.assertEqual(star.z_degree, 3)

    def test_factorization(self):
        """Test P_ell = P_0 P_ell* against full enumeration."""
        for ell in (0, 1):
            self.assertTrue(patchwork_factorization_check(ell, 4))

    def test_vertex_bound(self):
        """Test that no patchwork of excess ell needs 4ell vertices."""
        for ell in range(1, 4):
            self.assertEqual(
                enumerate_patchworks_no_isolated(ell),
                enumerate_patchworks_no_isolated(ell, 4 * ell + 2),
            )
            self.assertLessEqual(
                enumerate_patchworks_no_isolated(ell).z_degree, 3 * ell,
            )

    def test_components_have_two_parts(self):
        """Test that connected patchworks use at least two parts."""
        for k in range(1, 4):
            for n, degree in connected_patchworks(k).terms:
                self.assertLessEqual(n, k + 2)
                self.assertGreaterEqual(degree, 2)

    def test_edge_covers(self):
        """Test the inclusion-exclusion cover count against listing."""
        self.assertEqual(edge_cover_polynomial(2), (0, 1))
        self.assertEqual(edge_cover_polynomial(3), (0, 0, 3, 1))
        for t in range(6):
            self.assertEqual(
                edge_cover_polynomial(t), listed_cover_polynomial(t),
            )

    @override_settings(EXCESS_ATLAS_MAX_PATCHWORK_EXCESS=1)
    def test_patchwork_cap(self):
        """Test that complete enumeration respects its cap."""
        with self.assertRaises(CapExceeded):
            enumerate_patchworks_no_isolated(2)
        # truncated enumeration is not capped
        enumerate_patchworks_no_isolated(2, 3)


class MulticoreTestCase(SeriesAssertionsMixin, SimpleTestCase):
    """Test multigraphs of minimum degree 2 and 3."""

    def test_multicores_against_oracle(self):
        """Test MCore_k against weighted multigraph counts."""
        totals = enum_multigraphs(4, 5, ('mindeg2',))
        for n in range(1, 5):
            for m in range(n, 6):
                self.assertEqual(
                    totals.weight(n, m, 'mindeg2'),
                    multicore_series(m - n, 4)[n],
                )

    def test_mgpos_against_oracle(self):
        """Test mg>0_1 against weighted multigraph counts."""
        totals = enum_multigraphs(4, 5, ('positive_excess',))
        majorant = mgpos_series(1, 4)
        for n in range(1, 5):
            self.assertEqual(
                totals.weight(n, n + 1, 'positive_excess'), majorant[n],
            )

    def test_multicore_composition(self):
        """Test MCore_k(T) = e^MV mg>0_k for k <= 3."""
        multi, _ = unicycle_series(10)
        for k in range(4):
            self.assertSeriesEqual(
                multicore_series(k, 10).compose(tree_series(10)),
                ps_exp(multi) * mgpos_series(k, 10),
            )

    def test_mindeg3_bounds(self):
        """Test that min-degree-3 multigraphs have n <= 2k and m <= 3k."""
        for k in (1, 2):
            self.assertEqual(multicore_bounds_check(k), [])

    def test_mindeg3_of_excess_one(self):
        """Test the three shapes of excess 1."""
        shapes = mindeg3_multigraphs(1)
        excess_one = [s for s in shapes if s.multigraph.excess == 1]
        self.assertEqual(
            sorted((s.multigraph.n, s.multigraph.m) for s in excess_one),
            [(1, 2), (2, 3), (2, 3)],
        )


class CoreTestCase(SeriesAssertionsMixin, SimpleTestCase):
    """Test cores and sg>0 through patchworks."""

    def test_cores_against_oracle(self):
        """Test n! [z^n] Core_k against brute force for n <= 6."""
        cores = core_series(6, pairs(6) - 6)
        for n in range(1, 7):
            table = enum_graphs(n, ('mindeg2',))
            for m in range(n, pairs(n) + 1):
                self.assertEqual(
                    table.count('mindeg2', m), cores.count(n, m - n),
                )

    def test_core_composition(self):
        """Test Core_k(T) = e^V sg>0_k for k <= 3 up to z^12."""
        for k in range(4):
            sgpos_via_patchworks(k, 12)

    def test_slices_sum_to_sgpos(self):
        """Test that the patchwork slices add up to sg>0_k."""
        sgpos = sgpos_series(3, 12)
        for k in range(4):
            self.assertSeriesEqual(sgpos_lemma_series(k, 12), sgpos[k])
