"""Utilities for testing."""

import io
import math

from django.core.management import call_command
from django.core.management.base import CommandError


class CommandResult(object):
    """The captured outcome of one management command."""

    def __init__(self, returncode, stdout, message=''):
        self.returncode = returncode
        self.stdout = stdout
        self.message = message

    @property
    def lines(self):
        """stdout split into lines."""
        return self.stdout.splitlines()


def call_atlas_command(name, *args, **options):
    """
    Run a management command, capturing stdout and the exit code.

    Usage:
    result = call_atlas_command('count', '--n', '5', '--k', '-1')
    self.assertEqual(result.returncode, 0)
    self.assertEqual(result.stdout, '125\n')
    """
    out = io.StringIO()
    try:
        call_command(name, *args, stdout=out, **options)
    except CommandError as e:
        return CommandResult(e.returncode, out.getvalue(), str(e))
    return CommandResult(0, out.getvalue())


class SeriesAssertionsMixin(object):
    """Exact assertions on TruncatedSeries."""

    def assertSeriesEqual(self, actual, expected, msg=None):
        """Check that two series agree coefficient by coefficient."""
        self.assertEqual(actual.order, expected.order, msg)
        for n, (a, b) in enumerate(zip(actual.coeffs, expected.coeffs)):
            self.assertEqual(a, b, msg or f'[z^{n}] differs')

    def assertEgfCounts(self, series, counts, msg=None):
        """Check n! [z^n] of `series` against a list of counts."""
        actual = [
            series[n] * math.factorial(n) for n in range(len(counts))
        ]
        self.assertEqual(actual, list(counts), msg)
