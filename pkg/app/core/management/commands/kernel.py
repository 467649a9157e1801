"""
Django command to evaluate one semigroup kernel at a point.
"""
from core.commands import NumericsCommand, choice, parse_floats
from core.exceptions import DomainError
from core.models import BoxGeometry, OscillatorParams, WidenFactor
from kernels import kernels

KINDS = ('heat', 'mehler', 'box', 'spectral')


class Command(NumericsCommand):
    """Evaluate the heat, Mehler, box or spectral-sum kernel."""
    help = 'Evaluate a kernel G(x, y; t) at one pair of points.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_option(parser, '--kind', choice(*KINDS), default='mehler',
                        help='One of: ' + ', '.join(KINDS) + '.')
        self.add_option(parser, '--x', parse_floats,
                        help='Coordinates of x, comma separated.')
        self.add_option(parser, '--y', parse_floats,
                        help='Coordinates of y, comma separated.')
        self.add_point_options(parser)
        self.add_option(parser, '--gamma', float, default=1.0,
                        help='Widening factor of the Mehler kernel.')
        self.add_option(parser, '--m-max', int,
                        default=self.numerics('IMAGE_CUTOFF'),
                        help='Image cutoff of the box kernel; auto if unset.')
        self.add_option(parser, '--order', int, default=60,
                        help='Highest Hermite order of the spectral sum.')
        self.add_switch(parser, '--json', 'Print JSON.')

    def perform(self, options):
        self.require(options, 'x', 'y', 't')
        x, y, d = options['x'], options['y'], options['d']
        if len(x) != d or len(y) != d:
            raise DomainError(f'x and y need {d} coordinates each.')
        kind = options['kind']
        result = {'kind': kind}
        if kind == 'heat':
            result['value'] = kernels.heat_kernel(x, y, options['t'], d)
        elif kind == 'mehler':
            p = OscillatorParams(options['kappa'], d)
            result['value'] = kernels.mehler_kernel(
                x, y, options['t'], p, WidenFactor(options['gamma']))
        elif kind == 'box':
            self.require(options, 'L')
            value = kernels.dirichlet_box_kernel(
                x, y, options['t'], BoxGeometry(options['L']), d,
                options['m_max'])
            result.update(value=value.value, tail_bound=value.tail_bound,
                          m_max=int(value.m_max))
        else:
            p = OscillatorParams(options['kappa'], d)
            value = kernels.mehler_via_spectral_sum(
                x, y, options['t'], p, options['order'])
            result.update(value=value.value, tail_bound=value.tail_bound,
                          order=value.order)
        self.emit(result, options['json'])
