"""
Django command to sweep the trace difference over a parameter grid.
"""
from django.core.management.base import CommandError

from core.commands import (
    USAGE_EXIT,
    NumericsCommand,
    choice,
    parse_ladder,
)
from core.serializers import (
    FORMATS,
    SweepConfigSerializer,
    SweepRowSerializer,
    render_json,
    write_csv,
)
from core.sweep import COLUMNS, run_sweep


class Command(NumericsCommand):
    """Evaluate every (kappa, t, L) point and write one row per point.

    Rows are sorted by (kappa, t, L) so the output does not depend on
    the number of worker processes.
    """
    help = 'Trace differences and bound margins over a parameter grid.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_option(parser, '--L', parse_ladder, help='Box sides.')
        self.add_option(parser, '--t', parse_ladder, help='Times.')
        self.add_option(parser, '--kappa', parse_ladder, default=(1.0,),
                        help='Stiffnesses.')
        self.add_option(parser, '--d', int, default=1,
                        help='Spatial dimension, 1 to 3.')
        self.add_grid_options(parser)
        self.add_option(parser, '--constant', float, default=1.0,
                        help='Constant C of the bound.')
        self.add_option(parser, '--noise-factor', float,
                        default=self.numerics('NOISE_FLOOR_FACTOR'),
                        help='Noise floor in units of the error bar.')
        self.add_option(parser, '--format', choice(*FORMATS), default='csv',
                        help='csv or json.')
        self.add_option(parser, '--output', str,
                        help='Output file; stdout if unset.')
        self.add_option(parser, '--jobs', int, default=self.numerics('JOBS'),
                        help='Worker processes.')

    def perform(self, options):
        self.require(options, 'L', 't')
        serializer = SweepConfigSerializer(data={
            'L_values': options['L'],
            't_values': options['t'],
            'kappa_values': options['kappa'],
            'd': options['d'],
            'tol': options['tol'],
            'n': options['n'],
            'output': options['output'],
            'fmt': options['format'],
            'jobs': options['jobs'],
        })
        if not serializer.is_valid():
            raise CommandError(f'Invalid sweep: {dict(serializer.errors)}',
                               returncode=USAGE_EXIT)
        config = serializer.save()
        rows = SweepRowSerializer(
            run_sweep(config, options['constant'], options['noise_factor']),
            many=True).data

        if config.output is None:
            self.write(self.stdout, config.fmt, rows)
            return
        with open(config.output, 'w', encoding='utf-8', newline='') as handle:
            self.write(handle, config.fmt, rows)
        self.stderr.write(self.style.SUCCESS(
            f'Wrote {len(rows)} rows to {config.output}.'))

    def write(self, stream, fmt, rows):
        if fmt == 'json':
            stream.write(render_json(rows) + '\n')
        else:
            write_csv(stream, COLUMNS, rows)
