"""Print the coefficients n! [z^n] of one generating function."""

import math

from django.conf import settings

from excess_atlas.commands import AtlasCommand
from excess_atlas.graph_gf import (
    connected_series,
    mgpos_series,
    multicore_series,
    sgpos_series,
    tree_series,
    unicycle_series,
    unrooted_tree_series,
)
from excess_atlas.limits import check_cap
from excess_atlas.patchworks import core_series

# families that need --k
GRADED_FAMILIES = ('csg', 'sgpos', 'core', 'mcore', 'mgpos')
FAMILIES = ('tree', 'unrooted', 'unicycle', 'multiunicycle') + GRADED_FAMILIES


def family_series(family, k, order):
    """The truncated series of `family` (of excess k when graded)."""
    if family == 'tree':
        return tree_series(order)
    elif family == 'unrooted':
        return unrooted_tree_series(order)
    elif family == 'unicycle':
        return unicycle_series(order)[1]
    elif family == 'multiunicycle':
        return unicycle_series(order)[0]
    elif family == 'csg':
        return connected_series(order, max(k, -1))[k]
    elif family == 'sgpos':
        return sgpos_series(k, order)[k]
    elif family == 'core':
        check_cap('EXCESS_ATLAS_MAX_PATCHWORK_EXCESS', k)
        return core_series(order, k)[k]
    elif family == 'mcore':
        return multicore_series(k, order)
    elif family == 'mgpos':
        return mgpos_series(k, order)
    else:
        raise ValueError(f'Invalid family: {family}')


class Command(AtlasCommand):
    """Print a generating function as exact EGF coefficients."""

    help = 'Print n! [z^n] of a generating function for n up to --order.'

    def add_command_arguments(self, parser):
        """Add --family and --k."""
        parser.add_argument('--family', choices=FAMILIES, required=True)
        parser.add_argument('--k', type=int, default=None)

    def get_params(self, options):
        """Check that graded families get a valid excess."""
        family = options['family']
        k = options['k']
        if family in GRADED_FAMILIES:
            if k is None:
                raise ValueError(f'--family {family} needs --k')
            lowest = -1 if family == 'csg' else 0
            if k < lowest:
                raise ValueError(f'{family} needs k >= {lowest}, got {k}')
            check_cap('EXCESS_ATLAS_MAX_K', k)
        order = options['order'] or settings.EXCESS_ATLAS_DEFAULT_ORDER
        check_cap('EXCESS_ATLAS_SERIES_ORDER', order)
        return {'family': family, 'k': k, 'order': order}

    def compute(self, request):
        """n! [z^n] for n = 0..order."""
        params = request.params
        series = family_series(params['family'], params['k'], params['order'])
        rows = [
            [n, c * math.factorial(n)] for n, c in enumerate(series.coeffs)
        ]
        return ['n', 'coefficient'], rows
