"""Tests for the management commands."""

import json
from fractions import Fraction

from django.test import SimpleTestCase

from excess_atlas.commands import (
    NEGATIVE_RANGE,
    CommandRequest,
    parse_int_list,
    parse_ratio,
)

import numpy as np

from utils.rendering import format_value, render_text
from utils.testing import call_atlas_command


class ParsingTestCase(SimpleTestCase):
    """Test option parsing shared by the commands."""

    def test_int_lists(self):
        """Test single values, ranges and lists."""
        self.assertEqual(parse_int_list('5'), [5])
        self.assertEqual(parse_int_list('1..4'), [1, 2, 3, 4])
        self.assertEqual(parse_int_list('-1..1'), [-1, 0, 1])
        self.assertEqual(parse_int_list('80,20,40'), [20, 40, 80])

    def test_invalid_int_lists(self):
        """Test that malformed or empty ranges are refused."""
        for value in ('a', '3..1', '1..', ','):
            with self.assertRaises(ValueError):
                parse_int_list(value)

    def test_negative_range_values(self):
        """Test which arguments are read as values rather than options."""
        for value in ('-1', '-1..3', '-2,0,4', '-0.5'):
            self.assertTrue(NEGATIVE_RANGE.match(value), value)
        for value in ('--k', '-k', '-1..'):
            self.assertIsNone(NEGATIVE_RANGE.match(value), value)

    def test_ratio(self):
        """Test fractions, decimals and nonpositive ratios."""
        self.assertEqual(parse_ratio('1/2'), Fraction(1, 2))
        self.assertEqual(parse_ratio('0.25'), Fraction(1, 4))
        for value in ('0', '-1', 'x', '1/0'):
            with self.assertRaises(ValueError):
                parse_ratio(value)

    def test_request_validation(self):
        """Test that bad formats and orders are refused."""
        with self.assertRaises(ValueError):
            CommandRequest('count', output_format='xml')
        with self.assertRaises(ValueError):
            CommandRequest('series', order=0)


class RenderingTestCase(SimpleTestCase):
    """Test the output formats."""

    def test_format_value(self):
        """Test exact values as strings."""
        self.assertEqual(format_value(10 ** 30), '1' + '0' * 30)
        self.assertEqual(format_value(Fraction(-1, 24)), '-1/24')
        self.assertEqual(format_value(Fraction(4, 2)), '2')
        self.assertEqual(format_value(None), '')

    def test_numpy_floats(self):
        """Test that numpy scalars render like Python floats."""
        self.assertEqual(format_value(np.float64(3.5)), '3.5')
        self.assertEqual(
            render_text(['x'], [[np.float64(0.25)]]), 'x\n0.25\n',
        )

    def test_text_columns(self):
        """Test that text columns are aligned."""
        self.assertEqual(
            render_text(['n', 'count'], [[1, 1], [10, 125]]),
            'n   count\n1   1\n10  125\n',
        )


class CountCommandTestCase(SimpleTestCase):
    """Test `manage.py count`."""

    def test_trees(self):
        """Test the bare count of trees on 5 vertices."""
        result = call_atlas_command('count', '--n', '5', '--k', '-1')
        self.assertEqual(result.returncode, 0)
        self.assertEqual(result.stdout, '125\n')

    def test_small_counts(self):
        """Test K4 and the unicycles on 4 vertices."""
        self.assertEqual(
            call_atlas_command('count', '--n', '4', '--k', '2').stdout, '1\n',
        )
        self.assertEqual(
            call_atlas_command('count', '--n', '4', '--k', '0').stdout,
            '15\n',
        )

    def test_all_methods(self):
        """Test that every method agrees on 5 vertices."""
        result = call_atlas_command(
            'count', '--n', '5', '--k', '0', '--all-methods',
        )
        self.assertEqual(result.returncode, 0)
        self.assertEqual(
            result.lines, ['gf: 222', 'recurrence: 222', 'oracle: 222'],
        )

    def test_all_methods_skip_oracle(self):
        """Test that large n leaves the oracle out."""
        result = call_atlas_command(
            'count', '--n', '12', '--k', '1', '--all-methods',
        )
        self.assertEqual(result.returncode, 0)
        self.assertEqual(
            [line.split(':')[0] for line in result.lines],
            ['gf', 'recurrence'],
        )

    def test_oracle_limit(self):
        """Test that the oracle refuses n = 8 by default."""
        result = call_atlas_command(
            'count', '--n', '8', '--k', '0', '--method', 'oracle',
        )
        self.assertEqual(result.returncode, 2)
        self.assertEqual(result.stdout, '')

    def test_invalid_n(self):
        """Test that n < 1 is a usage error."""
        result = call_atlas_command('count', '--n', '0', '--k', '0')
        self.assertEqual(result.returncode, 2)

    def test_json(self):
        """Test the JSON document of a count."""
        result = call_atlas_command(
            'count', '--n', '6', '--k', '1', '--format', 'json',
        )
        document = json.loads(result.stdout)
        self.assertEqual(document['schema_version'], 1)
        self.assertEqual(document['params']['subcommand'], 'count')
        self.assertEqual(document['rows'][0]['method'], 'recurrence')

    def test_oracle_threads(self):
        """Test that the oracle is deterministic across thread counts."""
        outputs = {
            call_atlas_command(
                'count', '--n', '6', '--k', '2', '--method', 'oracle',
                '--threads', threads,
            ).stdout
            for threads in ('1', '2')
        }
        self.assertEqual(
            outputs,
            {call_atlas_command('count', '--n', '6', '--k', '2').stdout},
        )


class SeriesCommandTestCase(SimpleTestCase):
    """Test `manage.py series`."""

    def test_trees(self):
        """Test n^(n-1) rooted trees as CSV."""
        result = call_atlas_command(
            'series', '--family', 'tree', '--order', '5', '--format', 'csv',
        )
        self.assertEqual(
            result.stdout,
            'n,coefficient\n0,0\n1,1\n2,2\n3,9\n4,64\n5,625\n',
        )

    def test_default_order(self):
        """Test that the order defaults to 64."""
        result = call_atlas_command('series', '--family', 'unicycle')
        self.assertEqual(result.returncode, 0)
        # header plus n = 0..64
        self.assertEqual(len(result.lines), 66)

    def test_graded_family(self):
        """Test the connected graphs of excess 1."""
        result = call_atlas_command(
            'series', '--family', 'csg', '--k', '1', '--order', '5',
            '--format', 'csv',
        )
        self.assertEqual(result.lines[-1], '5,205')

    def test_needs_excess(self):
        """Test that graded families need --k."""
        result = call_atlas_command('series', '--family', 'sgpos')
        self.assertEqual(result.returncode, 2)

    def test_order_cap(self):
        """Test that the order is capped."""
        result = call_atlas_command(
            'series', '--family', 'tree', '--order', '65',
        )
        self.assertEqual(result.returncode, 2)


class AsymptoticCommandTestCase(SimpleTestCase):
    """Test `manage.py asymptotic`."""

    def _fields(self, result):
        return dict(line.split(': ', 1) for line in result.lines)

    def test_with_ratio(self):
        """Test the ratio to the exact count at k = n = 40."""
        result = call_atlas_command(
            'asymptotic', '--n', '40', '--k', '40', '--with-ratio',
        )
        self.assertEqual(result.returncode, 0)
        fields = self._fields(result)
        self.assertAlmostEqual(float(fields['lambda']), 3.830, places=2)
        # r(n) - 1 is about -9.07/n at k = n
        self.assertAlmostEqual(float(fields['ratio']), 0.786, places=2)

    def test_large_cell(self):
        """Test that n = k = 1000 is evaluated without the exact count."""
        result = call_atlas_command('asymptotic', '--n', '1000', '--k', '1000')
        self.assertEqual(result.returncode, 0)
        fields = self._fields(result)
        self.assertNotIn('ratio', fields)
        self.assertGreater(float(fields['log10_D']), 1000)

    def test_plain_floats(self):
        """Test that CSV cells are plain numbers."""
        result = call_atlas_command(
            'asymptotic', '--n', '40', '--k', '40', '--with-ratio',
            '--format', 'csv',
        )
        header, row = result.lines
        self.assertEqual(header.split(',')[2], 'lambda')
        self.assertAlmostEqual(float(row.split(',')[2]), 3.830, places=2)
        for cell in row.split(','):
            float(cell)

    def test_nonpositive_excess(self):
        """Test that k = 0 is a usage error."""
        result = call_atlas_command('asymptotic', '--n', '10', '--k', '0')
        self.assertEqual(result.returncode, 2)


class TableCommandTestCase(SimpleTestCase):
    """Test `manage.py table`."""

    def test_csg(self):
        """Test the grid of connected counts."""
        result = call_atlas_command(
            'table', '--kind', 'csg', '--n', '1..7', '--k=-1..3',
            '--format', 'csv',
        )
        self.assertEqual(result.returncode, 0)
        self.assertEqual(len(result.lines), 8)
        self.assertEqual(result.lines[0], 'n,k=-1,k=0,k=1,k=2,k=3')
        self.assertEqual(result.lines[5], '5,125,222,205,120,45')

    def test_negative_range(self):
        """Test a negative range passed as its own argument."""
        result = call_atlas_command(
            'table', '--kind', 'csg', '--n', '1..7', '--k', '-1..3',
            '--format', 'csv',
        )
        self.assertEqual(result.returncode, 0, result.message)
        self.assertEqual(len(result.lines), 8)
        self.assertEqual(result.lines[5], '5,125,222,205,120,45')

    def test_ratio_column(self):
        """Test that the asymptotic column holds plain numbers."""
        result = call_atlas_command(
            'table', '--kind', 'ratio', '--n', '20,40', '--ratio', '1',
            '--format', 'csv',
        )
        self.assertNotIn('np.', result.stdout)

    def test_deterministic(self):
        """Test that repeated runs give identical bytes."""
        args = ('table', '--kind', 'sgpos', '--n', '1..8', '--k', '0..2')
        self.assertEqual(
            call_atlas_command(*args, '--threads', '1').stdout,
            call_atlas_command(*args, '--threads', '2').stdout,
        )

    def test_wright(self):
        """Test Q_1 in long format."""
        result = call_atlas_command(
            'table', '--kind', 'wright', '--k', '1', '--format', 'csv',
        )
        self.assertEqual(result.lines[-2:], ['1,4,1/4', '1,5,-1/24'])

    def test_patchwork(self):
        """Test the patchworks of excess 1."""
        result = call_atlas_command(
            'table', '--kind', 'patchwork', '--ell', '1', '--format', 'csv',
        )
        self.assertIn('1,1,2,1/8', result.lines)
        self.assertIn('1,3,2,3/4', result.lines)

    def test_ratio(self):
        """Test the ratio table as JSON."""
        result = call_atlas_command(
            'table', '--kind', 'ratio', '--n', '20,40', '--ratio', '1',
            '--format', 'json',
        )
        document = json.loads(result.stdout)
        self.assertEqual(document['schema_version'], 1)
        self.assertEqual(document['params']['kind'], 'ratio')
        self.assertEqual([row['k'] for row in document['rows']], ['20', '40'])

    def test_missing_range(self):
        """Test that a kind without its ranges is a usage error."""
        result = call_atlas_command('table', '--kind', 'csg', '--n', '5')
        self.assertEqual(result.returncode, 2)

    def test_non_integral_excess(self):
        """Test that k = ratio n must be an integer."""
        result = call_atlas_command(
            'table', '--kind', 'ratio', '--n', '5', '--ratio', '1/2',
        )
        self.assertEqual(result.returncode, 2)


class VerifyCommandTestCase(SimpleTestCase):
    """Test `manage.py verify`."""

    def test_series_suite(self):
        """Test that the series suite passes."""
        result = call_atlas_command('verify', '--suite', 'series')
        self.assertEqual(result.returncode, 0, result.stdout)
        self.assertIn('round-trip exp/log: OK', result.lines)

    def test_csv_rows(self):
        """Test one CSV row per check."""
        result = call_atlas_command(
            'verify', '--suite', 'series', '--format', 'csv',
        )
        self.assertEqual(result.lines[0], 'suite,check,status,detail')
        self.assertEqual(len(result.lines), 7)
