"""
Django command to split a trace difference into its two parts.
"""
from core.commands import NumericsCommand
from core.serializers import DifferenceSerializer
from traces import traces


class Command(NumericsCommand):
    """Print delta = Tr_inf - Tr_L with its interior and exterior parts."""
    help = 'Trace difference and its (y, z) decomposition.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_point_options(parser)
        self.add_grid_options(parser)
        self.add_option(parser, '--noise-factor', float,
                        default=self.numerics('NOISE_FLOOR_FACTOR'),
                        help='Noise floor in units of the error bar.')
        self.add_switch(parser, '--json', 'Print JSON.')

    def perform(self, options):
        self.require(options, 't', 'L')
        diff = traces.trace_difference(
            options['t'], self.spec(options), options['d'], options['tol'],
            self.disc(options), options['noise_factor'])
        self.emit(DifferenceSerializer(diff).data, options['json'])
        if diff.below_noise_floor:
            self.stderr.write(self.style.ERROR(
                'delta is below the noise floor.'))
