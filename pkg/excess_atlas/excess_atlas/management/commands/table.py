"""Emit one of the tables in TABLE_KINDS."""

from excess_atlas import tables
from excess_atlas.commands import AtlasCommand, parse_int_list, parse_ratio


class Command(AtlasCommand):
    """Deterministic tables of counts, ratios and polynomials."""

    help = 'Emit a table. Ranges look like 1..7, 20,40,80 or -1..3.'

    def add_command_arguments(self, parser):
        """Add --kind and the range options."""
        parser.add_argument(
            '--kind', choices=tables.TABLE_KINDS, required=True,
        )
        parser.add_argument('--n', default=None)
        parser.add_argument('--k', default=None)
        parser.add_argument('--ell', default=None)
        parser.add_argument('--ratio', default=None)

    def get_params(self, options):
        """Parse every range up front."""
        params = {'kind': options['kind']}
        for name in ('n', 'k', 'ell'):
            value = options[name]
            params[name] = None if value is None else parse_int_list(value)
        ratio = options['ratio']
        params['ratio'] = None if ratio is None else parse_ratio(ratio)
        if params['n'] is not None and params['n'][0] < 1:
            raise ValueError(f'Invalid vertex count: {params["n"][0]}')
        return params

    def compute(self, request):
        """Dispatch to the table of the requested kind."""
        table = getattr(tables, f'{request.params["kind"]}_table')(request)
        return table.columns, table.rows
