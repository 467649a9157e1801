#!/usr/bin/env python
"""Entry point for the numerical commands and Django's own utilities.

Numerical commands run through core.cli so that failures map to their
documented exit codes.
"""
import os
import sys


def main():
    """Run a numerical command or an administrative task."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django; install requirements.txt first."
        ) from exc

    from core import cli
    if len(sys.argv) > 1 and sys.argv[1] in cli.COMMANDS:
        sys.exit(cli.run(sys.argv[1:]))
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
