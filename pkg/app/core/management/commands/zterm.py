"""
Django command to evaluate the exterior term of the trace difference.
"""
from bounds import theorem
from core.commands import NumericsCommand
from core.exceptions import DomainError
from oracle import dense
from traces import traces


class Command(NumericsCommand):
    """Exterior term in closed form, its Gaussian bound and a quadrature."""
    help = 'Exterior (z) term of the trace difference.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_point_options(parser)
        self.add_switch(parser, '--quadrature',
                        'Also integrate the exterior diagonal (d = 1).')
        self.add_switch(parser, '--json', 'Print JSON.')

    def perform(self, options):
        self.require(options, 't', 'L')
        t, d = options['t'], options['d']
        spec = self.spec(options)
        result = {
            'z': traces.z_term(t, spec, d),
            'bound': theorem.exterior_bound(t, spec, d),
        }
        if options['quadrature']:
            if d != 1:
                raise DomainError('The quadrature is one-dimensional.')
            result['quadrature'] = dense.quadrature_z_term(
                spec.box.L, spec.kappa, t)
        self.emit(result, options['json'])
