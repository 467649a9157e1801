"""
Django command to run the identity and kernel-estimate suites.
"""
from bounds import estimates
from core.commands import NumericsCommand
from core.exceptions import CheckFailedError
from core.serializers import EstimateOutcomeSerializer, render_json
from kernels import identities


class Command(NumericsCommand):
    """Check every identity and inequality on random arguments."""
    help = 'Run the hyperbolic identity suite and the kernel estimates.'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        self.add_option(parser, '--points', int, default=100,
                        help='Random points per check.')
        self.add_option(parser, '--seed', int, default=0,
                        help='Random seed.')
        self.add_option(parser, '--d', int, default=1,
                        help='Dimension of the kernel estimates.')
        self.add_switch(parser, '--estimates',
                        'Also check the pointwise kernel estimates.')
        self.add_switch(parser, '--json', 'Print JSON.')

    def perform(self, options):
        outcomes = identities.run_identity_suite(options['points'],
                                                 options['seed'])
        if options['estimates']:
            outcomes += estimates.check_kernel_estimates(
                options['points'], options['seed'], options['d'])
        data = EstimateOutcomeSerializer(outcomes, many=True).data

        if options['json']:
            self.stdout.write(render_json(data))
        else:
            for outcome in outcomes:
                style = (self.style.SUCCESS if outcome.holds
                         else self.style.ERROR)
                status = 'ok' if outcome.holds else 'FAILED'
                self.stdout.write(style(
                    f'{outcome.name}: {status} '
                    f'(worst ratio {outcome.worst_ratio:.6g})'))

        failed = [outcome for outcome in outcomes if not outcome.holds]
        if failed:
            raise CheckFailedError(
                'Failed: ' + ', '.join(outcome.name for outcome in failed),
                point=failed[0].worst_point,
            )
