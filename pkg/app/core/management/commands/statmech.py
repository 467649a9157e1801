"""
Django command for the grand-canonical ideal gas in a trap.
"""
from core.commands import NumericsCommand, parse_ladder
from core.models import (
    DirichletOscillatorSpec,
    EnsembleParams,
    OscillatorParams,
)
from core.serializers import (
    FiniteSizeSerializer,
    NumberSeriesSerializer,
    render_json,
)
from statmech import ensemble


class Command(NumericsCommand):
    """Partition function and average particle number.

    Without --L the gas fills the whole space. --scan adds the
    finite-size fits along a ladder of box sides.
    """
    help = 'Partition function Phi(beta) and average particle number.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_option(parser, '--beta', float, help='Inverse temperature.')
        self.add_option(parser, '--z', float, help='Fugacity.')
        self.add_option(parser, '--kappa', float, default=1.0,
                        help='Oscillator stiffness.')
        self.add_option(parser, '--d', int, default=1,
                        help='Spatial dimension, 1 to 3.')
        self.add_option(parser, '--L', float, help='Box side; whole space '
                                                   'if unset.')
        self.add_option(parser, '--scan', parse_ladder,
                        help='Box sides of a finite-size scan.')
        self.add_option(parser, '--n', int,
                        default=self.numerics('GRID_POINTS'),
                        help='Interior grid points of the solver.')
        self.add_option(parser, '--noise-factor', float,
                        default=self.numerics('NOISE_FLOOR_FACTOR'),
                        help='Noise floor in units of the error bar.')
        self.add_switch(parser, '--json', 'Print JSON.')

    def perform(self, options):
        self.require(options, 'beta', 'z')
        ens = EnsembleParams(options['beta'], options['z'])
        kappa, d, L = options['kappa'], options['d'], options['L']
        disc = self.disc(options)
        if L is None:
            phi = ensemble.partition_infinite(ens.beta,
                                              OscillatorParams(kappa, d))
        else:
            phi = ensemble.partition_finite(
                ens.beta, DirichletOscillatorSpec.create(L, kappa), d,
                disc=disc).value
        number = ensemble.avg_number(ens, kappa, d, L, disc=disc)
        result = {'phi': phi,
                  'number': NumberSeriesSerializer(number).data}
        if options['scan'] is not None:
            scan = ensemble.finite_size_scan(ens, kappa, options['scan'], d,
                                             options['noise_factor'], disc)
            result['scan'] = FiniteSizeSerializer(scan).data

        if options['json']:
            self.stdout.write(render_json(result))
            return
        flat = {'phi': phi}
        for section in ('number', 'scan'):
            for key, value in result.get(section, {}).items():
                flat[f'{section}_{key}'] = value
        self.emit(flat, False)
