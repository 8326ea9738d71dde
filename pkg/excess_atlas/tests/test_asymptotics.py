"""Tests for the saddle-point asymptotics."""

import math
from fractions import Fraction
from unittest import mock

from django.test import SimpleTestCase

from excess_atlas.asymptotics import (
    LogMagnitude,
    asymptotic_ratio,
    c1_fit,
    constant_term_identity,
    dominant_term_log,
    eval_A_B,
    exact_csg_log,
    exponential_term_identity,
    half_edge_kernel_value,
    hessian,
    hessian_numeric,
    log_odd_double_factorial,
    solve_saddle,
    stirling_ratio,
    term_magnitudes,
    tree_function,
)
from excess_atlas.exceptions import SaddleDomainError
from excess_atlas.graph_gf import csg_count, sgpos_series

import numpy as np


class LogMagnitudeTestCase(SimpleTestCase):
    """Test numbers stored as logs."""

    def test_huge_integer(self):
        """Test that 10^400 converts without overflow."""
        value = LogMagnitude.from_value(10 ** 400)
        self.assertEqual(value.sign, 1)
        self.assertAlmostEqual(value.log10, 400)

    def test_tiny_fraction(self):
        """Test a negative fraction far below float range."""
        value = LogMagnitude.from_value(Fraction(-1, 10 ** 350))
        self.assertEqual(value.sign, -1)
        self.assertAlmostEqual(value.log10, -350)

    def test_ratio_and_order(self):
        """Test ratios, products and ordering."""
        big = LogMagnitude.from_value(3 * 10 ** 500)
        small = LogMagnitude.from_value(10 ** 500)
        self.assertAlmostEqual(big.ratio_to(small), 3)
        self.assertAlmostEqual((big / small).log_abs, math.log(3))
        self.assertAlmostEqual((small * small).log10, 1000)
        self.assertLess(small, big)
        self.assertLess(LogMagnitude.from_value(-5), small)

    def test_zero(self):
        """Test that zero has sign 0 and cannot divide."""
        zero = LogMagnitude.from_value(0)
        self.assertEqual(zero.sign, 0)
        self.assertEqual(zero.ratio_to(LogMagnitude.from_value(2)), 0.0)
        with self.assertRaises(ZeroDivisionError):
            LogMagnitude.from_value(2).ratio_to(zero)


class ElementaryFunctionsTestCase(SimpleTestCase):
    """Test the tree function and the kernel."""

    def test_tree_function(self):
        """Test that T(z) = z e^T(z) and T(1/e) = 1."""
        tree = tree_function(0.2)
        self.assertAlmostEqual(tree, 0.2 * math.exp(tree), places=12)
        self.assertEqual(tree_function(math.exp(-1)), 1.0)
        self.assertLess(tree_function(math.exp(-1) - 1e-9), 1)

    def test_tree_function_domain(self):
        """Test that z beyond 1/e is refused."""
        with self.assertRaises(SaddleDomainError):
            tree_function(0.5)

    def test_kernel_near_zero(self):
        """Test that the Taylor branch meets the closed form."""
        self.assertAlmostEqual(half_edge_kernel_value(0), 1)
        self.assertAlmostEqual(
            half_edge_kernel_value(0.999e-3),
            half_edge_kernel_value(1.001e-3),
            places=5,
        )

    def test_log_odd_double_factorial(self):
        """Test log (2k-1)!! against exact values."""
        self.assertAlmostEqual(log_odd_double_factorial(5), math.log(945))
        self.assertAlmostEqual(log_odd_double_factorial(0), 0)


class SaddlePointTestCase(SimpleTestCase):
    """Test the saddle point and its Hessian."""

    def test_ratio_one(self):
        """Test lambda at k = n."""
        saddle = solve_saddle(1)
        self.assertAlmostEqual(saddle.lam, 3.830, places=2)
        self.assertLess(saddle.residual, 1e-12)
        self.assertAlmostEqual(
            saddle.tzeta, saddle.lam / math.expm1(saddle.lam),
        )

    def test_conditions(self):
        """Test both saddle conditions by finite differences."""
        for ratio in np.geomspace(0.05, 10, 50):
            saddle = solve_saddle(ratio)
            first, second = saddle.residuals
            self.assertLess(abs(first) * ratio, 1e-8, ratio)
            self.assertLess(abs(second) / 2, 1e-8, ratio)

    def test_newton_failure_is_logged(self):
        """Test that the bracketed root is kept when Newton fails."""
        failure = RuntimeError('no convergence')
        target = 'excess_atlas.asymptotics.newton'
        with mock.patch(target, side_effect=failure):
            with self.assertLogs('excess_atlas.asymptotics', 'DEBUG') as logs:
                saddle = solve_saddle(1)
        self.assertIsInstance(saddle.lam, float)
        self.assertLess(saddle.residual, 1e-12)
        self.assertTrue(
            any('newton polish skipped' in line for line in logs.output),
        )

    def test_lambda_increases(self):
        """Test that lambda grows with k/n."""
        lams = [solve_saddle(ratio).lam for ratio in (0.05, 0.5, 2, 10)]
        self.assertEqual(lams, sorted(lams))

    def test_invalid_ratio(self):
        """Test that k/n <= 0 is refused."""
        for ratio in (0, -1):
            with self.assertRaises(SaddleDomainError):
                solve_saddle(ratio)

    def test_hessian(self):
        """Test the closed-form Hessian against finite differences."""
        for ratio in (0.2, 1, 3):
            saddle = solve_saddle(ratio)
            closed = hessian(saddle, 1 / ratio)
            np.testing.assert_allclose(
                hessian_numeric(saddle), closed, rtol=1e-4,
            )
            self.assertGreater(np.linalg.det(closed), 0)

    def test_a_and_b(self):
        """Test that A and B are positive and B > 1."""
        a, b = eval_A_B(solve_saddle(1))
        self.assertGreater(a, 0)
        self.assertGreater(b, 1)


class DominantTermTestCase(SimpleTestCase):
    """Test D_{n,k} and its comparison with exact counts."""

    cells = [(20, 20), (40, 20), (50, 5), (100, 300)]

    def test_exponential_term_identity(self):
        """Test the exponential part of the simplification."""
        for n, k in self.cells:
            lhs, rhs = exponential_term_identity(n, k)
            self.assertAlmostEqual(lhs, rhs, delta=1e-8 * abs(rhs))

    def test_constant_term_identity(self):
        """Test the constant part of the simplification."""
        for n, k in self.cells:
            lhs, rhs = constant_term_identity(n, k)
            self.assertAlmostEqual(lhs, rhs, delta=1e-8 * abs(rhs))

    def test_stirling_ratio(self):
        """Test that the Stirling factor tends to 1."""
        self.assertAlmostEqual(stirling_ratio(1000, 1000), 1, places=3)

    def test_large_cell_is_finite(self):
        """Test that D_{1000,1000} is evaluated in logs."""
        value = dominant_term_log(1000, 1000)
        self.assertEqual(value.sign, 1)
        self.assertTrue(math.isfinite(value.log_abs))
        self.assertGreater(value.log10, 1000)

    def test_invalid_cell(self):
        """Test that k < 1 is refused."""
        with self.assertRaises(SaddleDomainError):
            dominant_term_log(10, 0)

    def test_exact_log(self):
        """Test the exact count as a LogMagnitude."""
        self.assertAlmostEqual(
            exact_csg_log(5, -1).log_abs, math.log(125),
        )

    def test_convergence(self):
        """Test that CSG_{n,n}/D_{n,n} rises to 1 at a steady 1/n rate."""
        ratios = [asymptotic_ratio(n, n) for n in (20, 40, 80, 160)]
        self.assertEqual(ratios, sorted(ratios))
        self.assertLess(ratios[-1], 1)
        # r(n) - 1 is about -9.07/n
        self.assertAlmostEqual(ratios[1], 0.786, places=2)
        scaled = [n * (1 - r) for n, r in zip((80, 160), ratios[2:])]
        self.assertLess(abs(scaled[1] - scaled[0]), 0.25 * scaled[0])


class FirstCorrectionTestCase(SimpleTestCase):
    """Test the fit of c1."""

    def test_fit(self):
        """Test the estimate and its samples at k = n."""
        estimate = c1_fit(1, [20, 40, 60])
        self.assertEqual([n for n, _ in estimate.samples], [20, 40, 60])
        self.assertTrue(math.isfinite(estimate.value))
        self.assertGreaterEqual(estimate.spread, 0)

    def test_bases_agree(self):
        """Test that c1 at k = n does not depend on the sizes used."""
        low = c1_fit(1, [40, 80, 160]).value
        high = c1_fit(1, [60, 120, 240]).value
        self.assertLessEqual(abs(low - high), 0.1 * abs(high))
        self.assertAlmostEqual(high, -9.07, delta=0.05)

    def test_needs_three_sizes(self):
        """Test that two sizes are not enough."""
        with self.assertRaises(ValueError):
            c1_fit(1, [20, 40])

    def test_needs_integral_excess(self):
        """Test that k = ratio n must be an integer."""
        with self.assertRaises(ValueError):
            c1_fit(Fraction(1, 3), [20, 40, 60])


class TermMagnitudesTestCase(SimpleTestCase):
    """Test the term diagnostics."""

    def setUp(self):
        self.table = term_magnitudes(10, 3)

    def test_compositions_add_up(self):
        """Test that the composition rows sum to CSG_{n,k}."""
        total = sum(row.value for row in self.table.compositions)
        self.assertEqual(total, csg_count(10, 3))

    def test_rows(self):
        """Test the (q, r) cells and the leading row."""
        cells = [(row.q, row.r) for row in self.table.compositions]
        self.assertEqual(cells, [(1, 0), (2, 1), (3, 2)])
        self.assertEqual(self.table.compositions[0].relative, 1.0)
        self.assertTrue(all(row.kept for row in self.table.compositions))

    def test_slices_add_up(self):
        """Test that the slices sum to n! [z^n] sg>0_k."""
        total = sum(piece.value for piece in self.table.slices)
        expected = sgpos_series(3, 10)[3][10] * math.factorial(10)
        self.assertEqual(total, expected)
        self.assertEqual([s.ell for s in self.table.slices], [0, 1, 2, 3])

    def test_kept_rows(self):
        """Test that only small q and r are kept."""
        table = term_magnitudes(12, 6)
        for row in table.compositions:
            self.assertEqual(row.kept, row.q <= 4 and row.r <= 3)

    def test_invalid_cell(self):
        """Test that k < 1 is refused."""
        with self.assertRaises(ValueError):
            term_magnitudes(10, 0)
