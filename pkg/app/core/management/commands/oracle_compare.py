"""
Django command to compare the solver trace with the dense oracle.
"""
from core.commands import NumericsCommand
from core.exceptions import CheckFailedError, DomainError
from oracle import dense
from traces import traces


class Command(NumericsCommand):
    """Box trace from the tridiagonal solver against full diagonalization.

    In two dimensions the solver's tensorized trace is compared with the
    extrapolated Kronecker-sum model.
    """
    help = 'Cross-check the box trace against a dense reference model.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_point_options(parser)
        self.add_grid_options(parser)
        self.add_option(parser, '--oracle-n', int, default=511,
                        help='Grid size of the one-dimensional oracle.')
        self.add_option(parser, '--rtol', float, default=1e-4,
                        help='Relative agreement required.')
        self.add_switch(parser, '--json', 'Print JSON.')

    def perform(self, options):
        self.require(options, 't', 'L')
        t, d = options['t'], options['d']
        spec = self.spec(options)
        if d == 1:
            oracle = dense.oracle_trace_extrapolated(t, spec,
                                                     options['oracle_n'])
        elif d == 2:
            oracle = dense.oracle_trace_2d_extrapolated(spec.box.L,
                                                        spec.kappa, t)
        else:
            raise DomainError('The dense oracle covers d = 1 and d = 2.')
        solver = traces.trace_finite(t, spec, d, options['tol'],
                                     self.disc(options))
        relative = abs(oracle.value - solver.value) / abs(solver.value)
        self.emit({
            'oracle': oracle.value,
            'oracle_error': oracle.error,
            'solver': solver.value,
            'solver_error': solver.error,
            'relative_difference': relative,
            'agrees': relative <= options['rtol'],
        }, options['json'])
        if relative > options['rtol']:
            raise CheckFailedError(
                f'Oracle and solver differ by {relative:.3e} relative.',
                point=(('L', spec.box.L), ('kappa', spec.kappa), ('t', t)),
            )
