"""
Django command to compute a semigroup trace.
"""
from core.commands import NumericsCommand
from core.models import OscillatorParams
from core.serializers import TraceReportSerializer
from traces import traces


class Command(NumericsCommand):
    """Whole-space trace in closed form or box trace with error budget."""
    help = 'Trace of exp(-tH) in the whole space or a Dirichlet box.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_point_options(parser)
        self.add_grid_options(parser)
        self.add_switch(parser, '--infinite', 'Whole-space trace.')
        self.add_switch(parser, '--json', 'Print JSON.')

    def perform(self, options):
        self.require(options, 't')
        if options['infinite']:
            p = OscillatorParams(options['kappa'], options['d'])
            value = traces.trace_infinite(options['t'], p)
            if options['json']:
                self.emit({'value': value}, True)
            else:
                self.stdout.write(format(value, '.12g'))
            return

        self.require(options, 'L')
        report = traces.trace_finite(options['t'], self.spec(options),
                                     options['d'], options['tol'],
                                     self.disc(options))
        self.emit(TraceReportSerializer(report).data, options['json'])
