"""
Django command to check one trace difference against the Gaussian bound.
"""
from bounds import theorem
from core.commands import NumericsCommand
from core.exceptions import CheckFailedError
from core.models import TheoremBoundInput
from core.serializers import TheoremCheckSerializer


class Command(NumericsCommand):
    """Compare delta with the Gaussian-decay bound.

    The bound is C P Tr G(t) exp(-kappa (L^2/4) tanh(kappa t/2) / 32),
    with Tr G(t) the whole-space trace and P the prefactor
    (1 + sqrt(kappa)) (1 + kappa)^d (1 + t)^(3(d + 1/2)).
    """
    help = 'Check the Gaussian-decay bound at one point.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_point_options(parser)
        self.add_grid_options(parser)
        self.add_option(parser, '--constant', float, default=1.0,
                        help='Constant C of the bound.')
        self.add_option(parser, '--l-floor', float,
                        default=self.numerics('L_FLOOR'),
                        help='Smallest admissible L sqrt(kappa).')
        self.add_option(parser, '--noise-factor', float,
                        default=self.numerics('NOISE_FLOOR_FACTOR'),
                        help='Noise floor in units of the error bar.')
        self.add_switch(parser, '--json', 'Print JSON.')

    def perform(self, options):
        self.require(options, 't', 'L')
        inp = TheoremBoundInput(t=options['t'], L=options['L'],
                                kappa=options['kappa'], d=options['d'],
                                constant=options['constant'])
        check = theorem.check_theorem(inp, options['tol'], self.disc(options),
                                      options['l_floor'],
                                      options['noise_factor'])
        self.emit(TheoremCheckSerializer(check).data, options['json'])
        if not check.holds:
            raise CheckFailedError(
                f'delta={check.delta:.6g} exceeds the bound '
                f'{check.rhs:.6g} at L={inp.L}.',
                point=(('L', inp.L), ('kappa', inp.kappa), ('t', inp.t)),
            )
        self.stderr.write(self.style.SUCCESS('Bound holds.'))
