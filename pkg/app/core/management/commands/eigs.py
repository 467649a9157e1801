"""
Django command to compute the lowest Dirichlet-oscillator eigenvalues.
"""
from core.commands import NumericsCommand
from core.serializers import SpectrumSerializer
from spectrum import solver


class Command(NumericsCommand):
    """Print Richardson-extrapolated eigenvalues with error estimates."""
    help = 'Lowest eigenvalues of the oscillator in a Dirichlet interval.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_option(parser, '--L', float, help='Box side.')
        self.add_option(parser, '--kappa', float, default=1.0,
                        help='Oscillator stiffness.')
        self.add_option(parser, '--n', int,
                        default=self.numerics('GRID_POINTS'),
                        help='Interior grid points.')
        self.add_option(parser, '--count', int, default=10,
                        help='Number of eigenvalues.')
        self.add_switch(parser, '--json', 'Print JSON.')

    def perform(self, options):
        self.require(options, 'L')
        spectrum = solver.box_oscillator_eigs(
            self.spec(options), self.disc(options), options['count'])
        data = SpectrumSerializer(spectrum).data
        if options['json']:
            self.emit(data, True)
            return
        for k, (value, error) in enumerate(zip(data['values'],
                                               data['errors']), 1):
            self.stdout.write(f'{k} {value:.12g} +- {error:.2e}')
        if not spectrum.converged:
            self.stderr.write(self.style.ERROR(
                'Not converged; increase --n.'))
