"""Print the saddle point and D_{n,k}, optionally against the exact count."""

from excess_atlas.asymptotics import (
    dominant_term_log,
    exact_csg_log,
    solve_saddle,
)
from excess_atlas.commands import AtlasCommand
from excess_atlas.limits import check_cap

from utils.rendering import format_value


class Command(AtlasCommand):
    """The dominant asymptotic term of CSG_{n,k} for k/n fixed."""

    help = 'Evaluate the dominant asymptotic term D_{n,k}.'

    def add_command_arguments(self, parser):
        """Add --n, --k and --with-ratio."""
        parser.add_argument('--n', type=int, required=True)
        parser.add_argument('--k', type=int, required=True)
        parser.add_argument('--with-ratio', action='store_true')

    def get_params(self, options):
        """Only the positive-ratio regime k >= 1 is supported."""
        n = options['n']
        k = options['k']
        if n < 1:
            raise ValueError(f'Invalid vertex count: {n}')
        if k < 1:
            raise ValueError(
                f'Asymptotics cover k/n > 0 only (k >= 1), got k={k}',
            )
        if options['with_ratio']:
            check_cap('EXCESS_ATLAS_MAX_N', n)
        return {'n': n, 'k': k, 'with_ratio': options['with_ratio']}

    def compute(self, request):
        """One record with the saddle point and log10 D_{n,k}."""
        n = request.params['n']
        k = request.params['k']
        saddle = solve_saddle(k / n)
        dominant = dominant_term_log(n, k)
        record = [
            ('n', n),
            ('k', k),
            ('lambda', saddle.lam),
            ('zeta', saddle.zeta),
            ('T_zeta', saddle.tzeta),
            ('log10_D', dominant.log10),
        ]
        if request.params['with_ratio']:
            exact = exact_csg_log(n, k)
            record.extend([
                ('exact_log10', exact.log10),
                ('ratio', exact.ratio_to(dominant)),
            ])
        columns = [name for name, _ in record]
        return columns, [[value for _, value in record]]

    def render_text(self, request, columns, rows):
        """One `name: value` line per field."""
        return ''.join(
            f'{name}: {format_value(value)}\n'
            for name, value in zip(columns, rows[0])
        )
