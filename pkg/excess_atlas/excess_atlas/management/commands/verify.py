"""Run the verification suites and report every check."""

from django.core.management.base import CommandError

from excess_atlas import verification
from excess_atlas.commands import CHECK_FAILED, AtlasCommand

SUITE_CHOICES = verification.SUITES + ('all',)


class Command(AtlasCommand):
    """Exit 0 iff every check of the chosen suites holds."""

    help = 'Run verification suites; exits 1 with witnesses on any failure.'

    def add_command_arguments(self, parser):
        """Add --suite."""
        parser.add_argument('--suite', choices=SUITE_CHOICES, default='all')

    def get_params(self, options):
        """Expand `all` into every suite."""
        suite = options['suite']
        suites = verification.SUITES if suite == 'all' else (suite,)
        return {'suite': suite, 'suites': list(suites)}

    def compute(self, request):
        """Run the suites in order."""
        rows = []
        for suite in request.params['suites']:
            for result in getattr(verification, f'suite_{suite}')():
                rows.append([
                    suite,
                    result.name,
                    'OK' if result.ok else 'FAILED',
                    '' if result.ok else str(result.detail),
                ])
        return ['suite', 'check', 'status', 'detail'], rows

    def render_text(self, request, columns, rows):
        """One report line per check."""
        return ''.join(
            verification.format_result(
                verification.CheckResult(name, status == 'OK', detail),
            ) + '\n'
            for _, name, status, detail in rows
        )

    def after_output(self, request, rows):
        """Fail once the whole report is written."""
        failed = [row[1] for row in rows if row[2] != 'OK']
        if failed:
            raise CommandError(
                f'{len(failed)} checks failed: {", ".join(failed)}',
                returncode=CHECK_FAILED,
            )
