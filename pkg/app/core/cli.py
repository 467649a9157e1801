"""
Command-line entry point: `mehler-traces <command> [options]`.

Commands are the management commands of the core app; hyphenated names
such as fit-decay map to fit_decay.
"""
import os
import sys

import django
from django.apps import apps
from django.core.management import load_command_class

USAGE_EXIT = 64
PROG = 'mehler-traces'
COMMANDS = (
    'kernel',
    'eigs',
    'trace',
    'diff',
    'zterm',
    'bound',
    'fit-decay',
    'statmech',
    'sweep',
    'oracle-compare',
    'identities',
)


def usage():
    return (f'usage: {PROG} <command> [options]\n'
            f'commands: {", ".join(COMMANDS)}\n'
            f'Run {PROG} <command> --help for the options of a command.')


def run(argv=None):
    """Run one command and return its exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] in ('-h', '--help'):
        sys.stdout.write(usage() + '\n')
        return 0
    if not argv or argv[0] not in COMMANDS:
        sys.stderr.write(usage() + '\n')
        return USAGE_EXIT

    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    if not apps.ready:
        django.setup()
    name = argv[0].replace('-', '_')
    command = load_command_class('core', name)
    try:
        command.run_from_argv([PROG, name] + argv[1:])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    return 0


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
