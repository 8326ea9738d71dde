"""Tests for the S-sequence bounds."""

from fractions import Fraction

from django.test import SimpleTestCase, override_settings

from excess_atlas.bounds import (
    appendix_bound_checks,
    capped_ways,
    check_pair_sums,
    check_s_q0k,
    pair_sum,
    q_sums,
    s_value,
)
from excess_atlas.exceptions import CapExceeded


class SSequenceTestCase(SimpleTestCase):
    """Test S_{q,d,k} and the sums built from it."""

    def test_capped_ways(self):
        """Test the composition table on small cases."""
        ways = capped_ways(1, 2, 2)
        self.assertEqual(list(ways[1]), [1, 1, 0])
        self.assertEqual(list(ways[2]), [1, 2, 1])
        ways = capped_ways(2, 2, 2)
        # (0,2), (1,1), (2,0)
        self.assertEqual(ways[2][2], 3 + 1 + 3)

    def test_single_part(self):
        """Test that one part gives S_{1,0,k} = 1."""
        for k in range(6):
            self.assertEqual(s_value(1, 0, k), 1)

    def test_small_values(self):
        """Test S_{2,0,2} and a capped value."""
        self.assertEqual(s_value(2, 0, 2), Fraction(7, 3))
        # parts capped at 1: only (1, 1)
        self.assertEqual(s_value(2, 1, 2), Fraction(1, 3))

    def test_invalid_index(self):
        """Test that q < 1 and d > k are refused."""
        with self.assertRaises(ValueError):
            s_value(0, 0, 3)
        with self.assertRaises(ValueError):
            s_value(2, 4, 3)

    def test_pair_sums(self):
        """Test k^d sum_r (2(k-r)-1)!!(2r-1)!!/(2k-1)!! by hand."""
        self.assertEqual(pair_sum(0, 3), Fraction(12, 5))
        self.assertEqual(pair_sum(1, 2), Fraction(2, 3))
        self.assertEqual(pair_sum(0, 2), s_value(2, 0, 2))

    def test_q_sums_start(self):
        """Test that sums over q start at k = d + 5."""
        self.assertEqual(q_sums(0, 4), [])
        self.assertEqual(len(q_sums(1, 10)), 5)


class BoundCheckTestCase(SimpleTestCase):
    """Test the numeric bound checks."""

    def test_s_q0k(self):
        """Test S_{q,0,k} <= 3q from k = 1."""
        check = check_s_q0k(40)
        self.assertTrue(check.ok)
        self.assertEqual(check.witness['holds_from_k'], 1)
        self.assertLessEqual(check.witness['max_ratio'], 3)

    def test_pair_sums_bounded(self):
        """Test that the pair sums stay bounded."""
        check = check_pair_sums(80)
        self.assertTrue(check.ok, check.witness)

    def test_report(self):
        """Test that every check passes on a small range."""
        report = appendix_bound_checks(60, q_sum_k_max=40)
        self.assertTrue(report.ok, report.failures)
        self.assertEqual(len(list(report)), 4)

    @override_settings(EXCESS_ATLAS_APPENDIX_MAX_K=50)
    def test_cap(self):
        """Test that the range is capped."""
        with self.assertRaises(CapExceeded):
            appendix_bound_checks(60)
