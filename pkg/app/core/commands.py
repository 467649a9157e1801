"""
Shared plumbing for the numerical management commands.

Option values are resolved as command-line flag, then --config file,
then the NUMERICS settings default.
"""
import argparse
import sys

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.cli import USAGE_EXIT
from core.exceptions import (
    BelowNoiseFloorError,
    CheckFailedError,
    ConvergenceError,
    DomainError,
    MehlerTracesError,
)
from core.models import DirichletOscillatorSpec, Discretization
from core.serializers import format_number, render_json

EXIT_CODES = (
    (CheckFailedError, 2),
    (BelowNoiseFloorError, 3),
    (DomainError, 1),
    (ConvergenceError, 1),
)
TRUE_WORDS = ('1', 'true', 'yes', 'on')
FALSE_WORDS = ('0', 'false', 'no', 'off')


def exit_code(error):
    """Process exit code for a library error."""
    for kind, code in EXIT_CODES:
        if isinstance(error, kind):
            return code
    return 1


def parse_bool(text):
    word = str(text).strip().lower()
    if word in TRUE_WORDS:
        return True
    if word in FALSE_WORDS:
        return False
    raise argparse.ArgumentTypeError(f'Not a boolean: {text!r}.')


def choice(*values):
    """Converter accepting only the given words."""
    def convert(text):
        word = str(text).strip()
        if word not in values:
            raise argparse.ArgumentTypeError(
                '{!r} is not one of {}.'.format(word, ', '.join(values)))
        return word
    return convert


def parse_floats(text):
    """Comma-separated numbers, e.g. '0.5,1,2'."""
    try:
        return tuple(float(part) for part in str(text).split(',') if part)
    except ValueError:
        raise argparse.ArgumentTypeError(f'Not a list of numbers: {text!r}.')


def parse_ladder(text):
    """A list of values: 'a:b:step', 'geom:start:stop:count' or 'a,b,c'.

    Arithmetic ladders include both ends.
    """
    text = str(text).strip()
    parts = text.split(':')
    try:
        if parts[0] == 'geom' and len(parts) == 4:
            start, stop = float(parts[1]), float(parts[2])
            values = np.geomspace(start, stop, int(parts[3]))
        elif len(parts) == 3:
            start, stop, step = (float(part) for part in parts)
            if not step > 0 or stop < start:
                raise ValueError
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            values = start + step * np.arange(count)
        elif len(parts) == 1:
            return parse_floats(text)
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f'Not a ladder: {text!r}.')
    return tuple(float(value) for value in values)


def read_config(path):
    """Flat key=value pairs; '#' starts a comment."""
    values = {}
    try:
        with open(path, encoding='utf-8') as handle:
            for number, line in enumerate(handle, 1):
                line = line.split('#', 1)[0].strip()
                if not line:
                    continue
                if '=' not in line:
                    raise CommandError(
                        f'{path}:{number}: expected key=value.',
                        returncode=USAGE_EXIT)
                key, value = line.split('=', 1)
                values[key.strip().replace('-', '_')] = value.strip()
    except OSError as exc:
        raise CommandError(f'Cannot read config {path}: {exc}',
                           returncode=USAGE_EXIT)
    return values


class NumericsCommand(BaseCommand):
    """Base class for commands driving the numerical modules."""
    requires_system_checks = []

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._converters = {}
        self._defaults = {}

    def run_from_argv(self, argv):
        """Run from the command line; malformed arguments exit with 64."""
        self._called_from_command_line = True
        parser = self.create_parser(argv[0], argv[1])
        try:
            parser.parse_args(argv[2:])
        except SystemExit as exc:
            if exc.code:
                sys.exit(USAGE_EXIT)
            raise
        super().run_from_argv(argv)

    def add_option(self, parser, flag, kind, default=None, **kwargs):
        """Add an option that a config file or settings may supply."""
        dest = flag.lstrip('-').replace('-', '_')
        self._converters[dest] = kind
        self._defaults[dest] = default
        parser.add_argument(flag, type=kind, default=None, dest=dest,
                            **kwargs)

    def add_switch(self, parser, flag, help_text):
        dest = flag.lstrip('-').replace('-', '_')
        self._converters[dest] = parse_bool
        self._defaults[dest] = False
        parser.add_argument(flag, action='store_true', default=None,
                            dest=dest, help=help_text)

    def add_arguments(self, parser):
        parser.add_argument('--config', default=None,
                            help='File of key=value option defaults.')

    def add_point_options(self, parser, box=True):
        """Options shared by commands evaluated at one (t, kappa, L, d)."""
        self.add_option(parser, '--t', float, help='Semigroup time.')
        self.add_option(parser, '--kappa', float, default=1.0,
                        help='Oscillator stiffness.')
        if box:
            self.add_option(parser, '--L', float, help='Box side.')
        self.add_option(parser, '--d', int, default=1,
                        help='Spatial dimension, 1 to 3.')

    def add_grid_options(self, parser):
        """Solver tolerance and grid size."""
        self.add_option(parser, '--tol', float,
                        default=self.numerics('TOL'),
                        help='Trace tolerance.')
        self.add_option(parser, '--n', int,
                        default=self.numerics('GRID_POINTS'),
                        help='Interior grid points of the solver.')

    def numerics(self, key):
        return settings.NUMERICS[key]

    def spec(self, options):
        return DirichletOscillatorSpec.create(options['L'], options['kappa'])

    def disc(self, options):
        return Discretization(options['n'])

    def resolve(self, options):
        """Fill unset options from the config file, then from defaults."""
        path = options.get('config')
        for key, raw in (read_config(path) if path else {}).items():
            if key not in self._converters:
                raise CommandError(f'Unknown config key {key!r}.',
                                   returncode=USAGE_EXIT)
            if options.get(key) is None:
                try:
                    options[key] = self._converters[key](raw)
                except (argparse.ArgumentTypeError, ValueError) as exc:
                    raise CommandError(f'Bad value for {key}: {exc}',
                                       returncode=USAGE_EXIT)
        for key, default in self._defaults.items():
            if options.get(key) is None:
                options[key] = default
        return options

    def require(self, options, *keys):
        missing = [key for key in keys if options.get(key) is None]
        if missing:
            flags = ', '.join('--' + key.replace('_', '-')
                              for key in missing)
            raise CommandError(f'Missing required option(s): {flags}.',
                               returncode=USAGE_EXIT)

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except MehlerTracesError as exc:
            raise CommandError(str(exc), returncode=exit_code(exc)) from exc

    def handle(self, *args, **options):
        return self.perform(self.resolve(options))

    def perform(self, options):
        raise NotImplementedError

    def emit(self, data, as_json):
        """Write a flat mapping as JSON or as key: value lines."""
        if as_json:
            self.stdout.write(render_json(data))
            return
        for key, value in data.items():
            if isinstance(value, float):
                value = format(value, '.12g')
            elif isinstance(value, (list, tuple)):
                value = ' '.join(format_number(item) for item in value)
            self.stdout.write(f'{key}: {value}')

