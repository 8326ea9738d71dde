"""
Shared plumbing of the management commands.

A command turns its options into a CommandRequest, validates it, and only
then computes. Errors map onto exit codes: 2 for usage errors and exceeded
caps, 1 for identities or checks that fail.
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction

from django.core.management.base import BaseCommand, CommandError

from utils.rendering import OUTPUT_FORMATS, render

from .exceptions import AtlasError, IdentityViolation

logger = logging.getLogger(__name__)

USAGE_ERROR = 2
CHECK_FAILED = 1

# argparse reads "-1..3" as an option unless it looks like a negative number
NEGATIVE_RANGE = re.compile(
    r'^-\d+(\.\.-?\d+)?(,-?\d+(\.\.-?\d+)?)*$'
    r'|^-\d*\.\d+$',
)


def parse_int_list(value):
    """
    Parse '5', '1..7', '-1..3' or '20,40,80' into a sorted list of ints.

    Negative ranges may be passed as `--k -1..3` or `--k=-1..3`.
    """
    values = set()
    for part in str(value).split(','):
        part = part.strip()
        if not part:
            continue
        low, sep, high = part.partition('..')
        try:
            if sep:
                low, high = int(low), int(high)
                if low > high:
                    raise ValueError
                values.update(range(low, high + 1))
            else:
                values.add(int(part))
        except ValueError:
            raise ValueError(f'Invalid integer range: {value}')
    if not values:
        raise ValueError(f'Empty integer range: {value}')
    return sorted(values)


def parse_ratio(value):
    """Parse '1', '1/2' or '0.25' into a positive Fraction."""
    try:
        ratio = Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f'Invalid ratio: {value}')
    if ratio <= 0:
        raise ValueError(f'The ratio k/n must be positive, got {value}')
    return ratio


@dataclass(frozen=True)
class CommandRequest(object):
    """A validated invocation of one subcommand."""

    subcommand: str
    params: dict = field(default_factory=dict)
    output_format: str = 'text'
    order: int = None
    threads: int = None

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f'Invalid output format: {self.output_format}')
        if self.order is not None and self.order < 1:
            raise ValueError(f'--order must be positive, got {self.order}')
        if self.threads is not None and self.threads < 1:
            raise ValueError(f'--threads must be positive, got {self.threads}')

    def json_params(self):
        """The parameters echoed in JSON output."""
        params = {'subcommand': self.subcommand}
        params.update(self.params)
        if self.order is not None:
            params['order'] = self.order
        return params


class AtlasCommand(BaseCommand):
    """
    Base class of every Excess Atlas command.

    Subclasses define `add_command_arguments`, `get_params` (which parses and
    validates) and `compute` (which returns (columns, rows)). `render_text`
    may be overridden for a friendlier text format.
    """

    def create_parser(self, prog_name, subcommand, **kwargs):
        """Let range options take values such as -1..3."""
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser._negative_number_matcher = NEGATIVE_RANGE
        return parser

    def add_arguments(self, parser):
        """Add the shared options, then the command's own."""
        parser.add_argument(
            '--format', dest='output_format', choices=OUTPUT_FORMATS,
            default='text',
        )
        parser.add_argument('--threads', type=int, default=None)
        parser.add_argument('--order', type=int, default=None)
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        """Add the arguments specific to this command."""

    def get_params(self, options):
        """Parse and validate the command's own options into a dict."""
        return {}

    def compute(self, request):
        """Return (columns, rows) for a validated request."""
        raise NotImplementedError

    def render_text(self, request, columns, rows):
        """Render the text format."""
        return render('text', columns, rows, request.json_params())

    def build_request(self, options):
        """Validate every option before any computation starts."""
        try:
            return CommandRequest(
                subcommand=self.name,
                params=self.get_params(options),
                output_format=options['output_format'],
                order=options.get('order'),
                threads=options.get('threads'),
            )
        except ValueError as e:
            raise CommandError(str(e), returncode=USAGE_ERROR)

    def handle(self, *args, **options):
        """Validate, compute, and write the result to stdout."""
        request = self.build_request(options)
        logger.debug('%s: %r', self.name, request)
        try:
            columns, rows = self.compute(request)
        except IdentityViolation as e:
            raise CommandError(str(e), returncode=CHECK_FAILED)
        except (AtlasError, ValueError) as e:
            raise CommandError(str(e), returncode=USAGE_ERROR)

        if request.output_format == 'text':
            output = self.render_text(request, columns, rows)
        else:
            output = render(
                request.output_format, columns, rows, request.json_params(),
            )
        self.stdout.write(output, ending='')
        self.after_output(request, rows)

    def after_output(self, request, rows):
        """Hook run after the output is written."""

    @property
    def name(self):
        """The subcommand name, taken from the module name."""
        return self.__module__.rsplit('.', 1)[-1]
