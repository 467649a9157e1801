"""
Test the numerical management commands.
"""
import argparse
import json
import math
import os
import tempfile
from io import StringIO
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.commands import parse_ladder
from core.models import (
    DecayFitReport,
    EstimateOutcome,
    OscillatorParams,
    TraceReport,
)
from core.sweep import COLUMNS
from kernels import kernels


def run_command(name, **options):
    """Run a command and return what it wrote to stdout and stderr."""
    out, err = StringIO(), StringIO()
    call_command(name, stdout=out, stderr=err, **options)
    return out.getvalue(), err.getvalue()


def create_fit_report(rate):
    """Create and return a decay fit report with the given rate."""
    return DecayFitReport(fitted_rate=rate, theorem_rate=1.0 / 32.0,
                          intercept=0.0, residual_rms=0.0, points_used=7,
                          expected_rate=1.0, mean_ordinate=1.0)


def create_config(text):
    """Create a config file and return its path."""
    handle = tempfile.NamedTemporaryFile('w', suffix='.cfg', delete=False,
                                         encoding='utf-8')
    with handle:
        handle.write(text)
    return handle.name


class ParseLadderTests(SimpleTestCase):
    """Test parsing of value ladders."""

    def test_arithmetic_ladder_includes_both_ends(self):
        """Test 2:5:0.5 gives seven values from 2 to 5."""
        self.assertEqual(parse_ladder('2:5:0.5'),
                         (2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0))

    def test_geometric_ladder(self):
        """Test geom:1:100:3 gives 1, 10, 100."""
        values = parse_ladder('geom:1:100:3')

        self.assertEqual(len(values), 3)
        self.assertAlmostEqual(values[1], 10.0, places=12)

    def test_list(self):
        """Test a comma-separated list."""
        self.assertEqual(parse_ladder('1,2.5,4'), (1.0, 2.5, 4.0))

    def test_bad_ladders(self):
        """Test reversed bounds and malformed text are rejected."""
        for text in ('5:2:1', '1:2:0', 'a:b', '1:2:3:4'):
            with self.assertRaises(argparse.ArgumentTypeError):
                parse_ladder(text)


class TraceCommandTests(SimpleTestCase):
    """Test the trace and diff commands."""

    def test_infinite_trace_twelve_digits(self):
        """Test the whole-space trace prints 1/(2 sinh 1/2)."""
        out, _ = run_command('trace', t=1.0, kappa=1.0, d=1, infinite=True)

        self.assertAlmostEqual(float(out), 1.0 / (2.0 * math.sinh(0.5)),
                               places=11)
        self.assertTrue(out.startswith('0.9595'))

    def test_box_trace_json(self):
        """Test the box trace carries its error budget."""
        out, _ = run_command('trace', t=1.0, kappa=1.0, L=3.0, json=True)
        data = json.loads(out)

        self.assertEqual(set(data), {'value', 'error', 'truncation_error',
                                     'discretization_error',
                                     'eigencount_used'})
        self.assertLess(data['value'], 1.0 / (2.0 * math.sinh(0.5)))

    def test_missing_time(self):
        """Test a missing --t is a usage error."""
        with self.assertRaises(CommandError) as context:
            run_command('trace', kappa=1.0, infinite=True)

        self.assertEqual(context.exception.returncode, 64)

    def test_diff_json_schema(self):
        """Test diff --json emits the documented fields."""
        out, _ = run_command('diff', t=1.0, kappa=1.0, L=3.0, d=1, json=True)
        data = json.loads(out)

        self.assertEqual(set(data), {'delta', 'y', 'z', 'err_delta', 'err_y',
                                     'err_z', 'noise_floor'})
        self.assertAlmostEqual(data['delta'], data['y'] + data['z'],
                               delta=data['err_delta'] + data['err_z'])

    def test_zterm_with_quadrature(self):
        """Test the closed form, the quadrature and the bound agree."""
        out, _ = run_command('zterm', t=1.0, kappa=1.0, L=3.0,
                             quadrature=True, json=True)
        data = json.loads(out)

        self.assertAlmostEqual(data['z'], data['quadrature'], delta=1e-10)
        self.assertLessEqual(data['z'], data['bound'])


class ConfigPrecedenceTests(SimpleTestCase):
    """Test flag > config file > settings."""

    def setUp(self):
        self.path = create_config('# trace defaults\nt = 2\nkappa=2\n')

    def tearDown(self):
        os.remove(self.path)

    def test_config_fills_unset_options(self):
        """Test values missing on the command line come from the file."""
        out, _ = run_command('trace', config=self.path, infinite=True)

        self.assertAlmostEqual(float(out), 1.0 / (2.0 * math.sinh(2.0)),
                               places=11)

    def test_flag_overrides_config(self):
        """Test a flag wins over the file."""
        out, _ = run_command('trace', config=self.path, t=1.0,
                             infinite=True)

        self.assertAlmostEqual(float(out), 1.0 / (2.0 * math.sinh(1.0)),
                               places=11)

    def test_unknown_config_key(self):
        """Test an unknown key is a usage error."""
        path = create_config('colour = blue\n')
        self.addCleanup(os.remove, path)

        with self.assertRaises(CommandError) as context:
            run_command('trace', config=path, infinite=True)

        self.assertEqual(context.exception.returncode, 64)

    @patch('core.commands.settings')
    def test_settings_default(self, patched_settings):
        """Test the grid size default comes from NUMERICS."""
        patched_settings.NUMERICS = {
            'TOL': 1e-10, 'GRID_POINTS': 63, 'IMAGE_CUTOFF': None,
            'NOISE_FLOOR_FACTOR': 10.0, 'L_FLOOR': 4.0, 'JOBS': 1,
        }

        with self.assertRaises(CommandError) as context:
            run_command('trace', t=1.0, L=3.0)

        self.assertEqual(context.exception.returncode, 1)


class BoundCommandTests(SimpleTestCase):
    """Test the bound check and its exit codes."""

    def test_bound_holds(self):
        """Test a generous constant passes at L = 4."""
        out, err = run_command('bound', t=1.0, kappa=1.0, L=4.0,
                               constant=10.0, json=True)

        self.assertTrue(json.loads(out)['holds'])
        self.assertIn('Bound holds', err)

    def test_rhs_carries_prefactor_and_trace(self):
        """Test rhs = C P Tr G(t) exp(-(kappa/32)(L^2/4) tanh(kappa t/2))."""
        out, _ = run_command('bound', t=1.0, kappa=1.0, L=4.0, d=2,
                             constant=1000.0, json=True)
        prefactor = 2.0 * 2.0 ** 2 * 2.0 ** 7.5
        trace = (2.0 * math.sinh(0.5)) ** -2
        decay = math.exp(-4.0 * math.tanh(0.5) / 32.0)

        self.assertAlmostEqual(json.loads(out)['rhs']
                               / (1000.0 * prefactor * trace * decay), 1.0,
                               places=10)

    def test_bound_fails(self):
        """Test a tiny constant fails with exit code 2."""
        with self.assertRaises(CommandError) as context:
            run_command('bound', t=1.0, kappa=1.0, L=4.0, constant=1e-12)

        self.assertEqual(context.exception.returncode, 2)

    def test_below_l_floor(self):
        """Test L sqrt(kappa) < 4 is a domain error."""
        with self.assertRaises(CommandError) as context:
            run_command('bound', t=1.0, kappa=1.0, L=3.0)

        self.assertEqual(context.exception.returncode, 1)

    def test_below_noise_floor(self):
        """Test a vanishing difference is refused with exit code 3."""
        with self.assertRaises(CommandError) as context:
            run_command('bound', t=1.0, kappa=1.0, L=30.0)

        self.assertEqual(context.exception.returncode, 3)


class FitDecayCommandTests(SimpleTestCase):
    """Test the decay sweep and fit."""

    def test_gaussian_decay(self):
        """Test kappa = t = 1 over L = 2..5 beats kappa/32."""
        out, err = run_command('fit_decay', t=1.0, kappa=1.0,
                               L=parse_ladder('2:5:0.5'))
        lines = out.strip().split('\n')
        summary = json.loads(err.strip().split('\n')[-1])

        self.assertEqual(lines[0], ','.join(COLUMNS))
        self.assertEqual(len(lines), 8)
        self.assertGreaterEqual(summary['fitted_rate'], 1.0 / 32.0)
        self.assertLess(summary['residual_rms'],
                        0.05 * summary['mean_ordinate'])

    def test_every_point_below_fitted_bound(self):
        """Test the fitted constant covers each point of the sweep."""
        out, _ = run_command('fit_decay', t=1.0, kappa=1.0,
                             L=parse_ladder('2:5:0.5'))
        margin = COLUMNS.index('margin')
        rows = [line.split(',') for line in out.strip().split('\n')[1:]]

        self.assertTrue(all(float(row[margin]) >= 1.0 for row in rows))

    @patch('bounds.theorem.fit_decay')
    def test_slow_decay_fails(self, patched_fit):
        """Test a fitted rate below kappa/32 exits with 2."""
        patched_fit.return_value = create_fit_report(0.01)

        with self.assertRaises(CommandError) as context:
            run_command('fit_decay', t=1.0, kappa=1.0,
                        L=parse_ladder('2:5:0.5'))

        self.assertEqual(context.exception.returncode, 2)

    def test_output_file(self):
        """Test rows go to --output when given."""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'decay.csv')
            out, err = run_command('fit_decay', t=1.0, kappa=1.0,
                                   L=parse_ladder('2:5:0.5'), output=path)
            with open(path, encoding='utf-8') as handle:
                lines = handle.read().strip().split('\n')

        self.assertEqual(out, '')
        self.assertEqual(len(lines), 8)
        self.assertIn('Wrote 7 rows', err)


class SweepCommandTests(SimpleTestCase):
    """Test parameter sweeps."""

    def sweep(self, **options):
        out, _ = run_command('sweep', L=(4.0, 3.0), t=(1.0, 0.5),
                             kappa=(1.0,), n=256, **options)
        return out

    def test_rows_sorted(self):
        """Test rows are sorted by (kappa, t, L) with a fixed header."""
        lines = self.sweep().strip().split('\n')
        rows = [line.split(',') for line in lines[1:]]

        self.assertEqual(lines[0], ','.join(COLUMNS))
        self.assertEqual([(row[2], row[0]) for row in rows],
                         [('0.5', '3'), ('0.5', '4'), ('1', '3'), ('1', '4')])

    def test_jobs_do_not_change_output(self):
        """Test one and two worker processes give identical bytes."""
        self.assertEqual(self.sweep(jobs=1), self.sweep(jobs=2))

    def test_json_format(self):
        """Test JSON rows carry every column."""
        rows = json.loads(self.sweep(format='json'))

        self.assertEqual(len(rows), 4)
        self.assertEqual(list(rows[0]), COLUMNS)

    def test_output_file_matches_stdout(self):
        """Test the file holds the same bytes as stdout."""
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'sweep.csv')
            self.sweep(output=path)
            with open(path, encoding='utf-8', newline='') as handle:
                written = handle.read()

        self.assertEqual(written, self.sweep())

    def test_invalid_grid(self):
        """Test a non-positive box side is a usage error."""
        with self.assertRaises(CommandError) as context:
            run_command('sweep', L=(0.0, 3.0), t=(1.0,))

        self.assertEqual(context.exception.returncode, 64)


class StatmechCommandTests(SimpleTestCase):
    """Test the ideal-gas command."""

    def test_infinite_volume(self):
        """Test Phi and N at kappa = beta = 1, z = 0.3."""
        out, _ = run_command('statmech', beta=1.0, z=0.3, json=True)
        data = json.loads(out)
        direct = sum(0.3 ** k * math.exp(-k / 2.0) / (1 - math.exp(-k))
                     for k in range(1, 201))

        self.assertAlmostEqual(data['phi'], 1.0 / (2.0 * math.sinh(0.5)),
                               places=14)
        self.assertAlmostEqual(data['number']['value'], direct, delta=1e-12)
        self.assertNotIn('scan', data)

    def test_box_text_output(self):
        """Test the finite box prints flat key: value lines."""
        out, _ = run_command('statmech', beta=1.0, z=0.3, L=3.0)

        self.assertIn('phi: ', out)
        self.assertIn('number_terms_used: ', out)

    def test_outside_convergence_region(self):
        """Test z above exp(beta kappa / 2) exits with 1."""
        with self.assertRaises(CommandError) as context:
            run_command('statmech', beta=1.0, z=2.0)

        self.assertEqual(context.exception.returncode, 1)


class OracleCompareCommandTests(SimpleTestCase):
    """Test the dense-oracle cross-check."""

    def test_one_dimension_agrees(self):
        """Test the dense model matches the solver at L = 3."""
        out, _ = run_command('oracle_compare', t=1.0, kappa=1.0, L=3.0,
                             oracle_n=127, json=True)

        self.assertTrue(json.loads(out)['agrees'])

    @patch('oracle.dense.oracle_trace_extrapolated')
    def test_mismatch_exits_with_two(self, patched_oracle):
        """Test a disagreeing oracle is a failed check."""
        patched_oracle.return_value = TraceReport(value=1.0)

        with self.assertRaises(CommandError) as context:
            run_command('oracle_compare', t=1.0, kappa=1.0, L=3.0)

        self.assertEqual(context.exception.returncode, 2)

    def test_three_dimensions_refused(self):
        """Test d = 3 has no dense oracle."""
        with self.assertRaises(CommandError) as context:
            run_command('oracle_compare', t=1.0, kappa=1.0, L=3.0, d=3)

        self.assertEqual(context.exception.returncode, 1)


class IdentitiesCommandTests(SimpleTestCase):
    """Test the identity suite command."""

    def test_suite_passes(self):
        """Test every identity holds on 20 points."""
        out, _ = run_command('identities', points=20)

        self.assertIn('sinh-doubling: ok', out)
        self.assertNotIn('FAILED', out)

    @patch('kernels.identities.run_identity_suite')
    def test_failure_exits_with_two(self, patched_suite):
        """Test a failed identity is reported with exit code 2."""
        patched_suite.return_value = [
            EstimateOutcome(name='coth-sum', holds=False, worst_ratio=1e-3,
                            worst_point=(('alpha', 1.0),)),
        ]

        with self.assertRaises(CommandError) as context:
            run_command('identities', json=True)

        self.assertEqual(context.exception.returncode, 2)
        self.assertIn('coth-sum', str(context.exception))


class KernelCommandTests(SimpleTestCase):
    """Test point evaluations and the spectrum command."""

    def test_mehler_value(self):
        """Test the Mehler kernel on the diagonal."""
        out, _ = run_command('kernel', kind='mehler', x=(0.0,), y=(0.0,),
                             t=1.0)
        expected = kernels.mehler_kernel(0.0, 0.0, 1.0, OscillatorParams(1.0))

        self.assertIn(f'value: {format(expected, ".12g")}', out)

    def test_box_kernel_json(self):
        """Test the box kernel reports its tail and image cutoff."""
        out, _ = run_command('kernel', kind='box', x=(0.1, 0.2),
                             y=(-0.3, 0.0), t=0.5, L=2.0, d=2, json=True)
        data = json.loads(out)

        self.assertGreater(data['value'], 0.0)
        self.assertGreaterEqual(data['m_max'], 1)

    def test_wrong_coordinate_count(self):
        """Test x needs d coordinates."""
        with self.assertRaises(CommandError) as context:
            run_command('kernel', x=(0.0,), y=(0.0,), t=1.0, d=2)

        self.assertEqual(context.exception.returncode, 1)

    def test_bad_kind_from_config(self):
        """Test an unknown kind in a config file is a usage error."""
        path = create_config('kind = gaussian\n')
        self.addCleanup(os.remove, path)

        with self.assertRaises(CommandError) as context:
            run_command('kernel', config=path, x=(0.0,), y=(0.0,), t=1.0)

        self.assertEqual(context.exception.returncode, 64)

    def test_eigenvalues_in_large_box(self):
        """Test L = 30 at n = 4096 reproduces kappa (s + 1/2)."""
        out, _ = run_command('eigs', L=30.0, n=4096, count=3, json=True)
        values = json.loads(out)['values']

        for s, value in enumerate(values):
            self.assertAlmostEqual(value, s + 0.5, delta=1e-8)
