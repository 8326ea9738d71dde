"""Print CSG_{n,k}, the number of connected graphs of excess k."""

from excess_atlas.commands import AtlasCommand
from excess_atlas.exceptions import IdentityViolation
from excess_atlas.graph_gf import connected_series, csg_count
from excess_atlas.limits import check_oracle_n, oracle_max_n
from excess_atlas.oracle import enum_graphs

METHODS = ('gf', 'recurrence', 'oracle')


def count_by_method(n, k, method, workers=None):
    """CSG_{n,k} computed by one method."""
    if method == 'recurrence':
        return csg_count(n, k)
    elif method == 'gf':
        if k < -1:
            return 0
        return connected_series(n, k).count(n, k)
    elif method == 'oracle':
        check_oracle_n(n)
        table = enum_graphs(n, ('connected',), workers=workers)
        return table.count('connected', n + k)
    else:
        raise ValueError(f'Invalid method: {method}')


class Command(AtlasCommand):
    """Count connected labeled graphs with n vertices and n + k edges."""

    help = 'Count connected graphs with n vertices and excess k.'

    def add_command_arguments(self, parser):
        """Add --n, --k, --method and --all-methods."""
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--k', type=int, required=True)
        parser.add_argument('--method', choices=METHODS, default='recurrence')
        parser.add_argument('--all-methods', action='store_true')

    def get_params(self, options):
        """Check n and the oracle limit before counting."""
        n = options['n']
        if n < 1:
            raise ValueError(f'Invalid vertex count: {n}')
        if options['all_methods']:
            methods = ['gf', 'recurrence']
            if n <= oracle_max_n():
                methods.append('oracle')
        else:
            methods = [options['method']]
            if methods == ['oracle'] and n > oracle_max_n():
                raise ValueError(
                    f'The oracle handles n <= {oracle_max_n()}, got {n}',
                )
        return {'n': n, 'k': options['k'], 'methods': methods}

    def compute(self, request):
        """Count by every requested method and insist they agree."""
        n = request.params['n']
        k = request.params['k']
        rows = [
            [method, n, k, count_by_method(n, k, method, request.threads)]
            for method in request.params['methods']
        ]
        values = {row[-1] for row in rows}
        if len(values) > 1:
            raise IdentityViolation(
                'counting methods disagree',
                {row[0]: row[-1] for row in rows},
            )
        return ['method', 'n', 'k', 'count'], rows

    def render_text(self, request, columns, rows):
        """The bare count, or one `method: count` line per method."""
        if len(rows) == 1:
            return f'{rows[0][-1]}\n'
        return ''.join(f'{row[0]}: {row[-1]}\n' for row in rows)
