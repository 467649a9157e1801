"""
Django command to sweep L and fit the Gaussian decay of the trace difference.
"""
from bounds import theorem
from core.commands import NumericsCommand, choice, parse_ladder
from core.exceptions import BelowNoiseFloorError, CheckFailedError
from core.models import SweepConfig, TheoremBoundInput
from core.serializers import (
    DecayFitSerializer,
    SweepRowSerializer,
    render_json,
    write_csv,
)
from core.sweep import COLUMNS, run_sweep


class Command(NumericsCommand):
    """Write the sweep as CSV and the fit summary to stderr.

    The constant of the bound is the smallest one covering every point
    above the noise floor.
    """
    help = 'Fit -ln(delta) against (L^2/4) tanh(kappa t/2) along a ladder.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_point_options(parser, box=False)
        self.add_option(parser, '--L', parse_ladder,
                        help="Box sides: 'a:b:step', 'geom:a:b:n' or list.")
        self.add_grid_options(parser)
        self.add_option(parser, '--abscissa', choice(*theorem.ABSCISSAE),
                        default='gaussian', help='gaussian or linear.')
        self.add_option(parser, '--noise-factor', float,
                        default=self.numerics('NOISE_FLOOR_FACTOR'),
                        help='Noise floor in units of the error bar.')
        self.add_option(parser, '--jobs', int, default=self.numerics('JOBS'),
                        help='Worker processes.')
        self.add_option(parser, '--output', str,
                        help='CSV file; stdout if unset.')

    def perform(self, options):
        self.require(options, 't', 'L')
        kappa, t, d = options['kappa'], options['t'], options['d']
        config = SweepConfig(L_values=options['L'], t_values=(t,),
                             kappa_values=(kappa,), d=d, tol=options['tol'],
                             n=options['n'], jobs=options['jobs'])
        rows = run_sweep(config, noise_factor=options['noise_factor'])

        above = [row for row in rows if row['margin'] is not None]
        if not above:
            raise BelowNoiseFloorError('Every point is below the noise floor.')
        constant = theorem.fit_constant(
            [TheoremBoundInput(t=t, L=row['L'], kappa=kappa, d=d)
             for row in above],
            [row['delta'] for row in above])
        for row in rows:
            row['rhs'] *= constant
            if row['margin'] is not None:
                row['margin'] *= constant
        self.write_rows(SweepRowSerializer(rows, many=True).data,
                        options['output'])

        fit = theorem.fit_decay(
            [row['L'] for row in rows], [row['delta'] for row in rows],
            kappa, t, d,
            [options['noise_factor'] * row['err'] for row in rows],
            options['abscissa'])
        summary = dict(DecayFitSerializer(fit).data, constant=constant)
        self.stderr.write(render_json(summary))
        if options['abscissa'] == 'gaussian' and not fit.beats_theorem:
            raise CheckFailedError(
                f'Fitted rate {fit.fitted_rate:.6g} is below kappa/32 = '
                f'{fit.theorem_rate:.6g}.',
                point=(('kappa', kappa), ('t', t)),
            )

    def write_rows(self, rows, output):
        if output is None:
            write_csv(self.stdout, COLUMNS, rows)
            return
        with open(output, 'w', encoding='utf-8', newline='') as handle:
            write_csv(handle, COLUMNS, rows)
        self.stderr.write(self.style.SUCCESS(f'Wrote {len(rows)} rows to '
                                             f'{output}.'))
