#!/usr/bin/env python
"""Command-line front end: ``python manage.py solve|sweep|converge|reproduce``."""
import os
import sys


def main():
    """Dispatch to the confinement management commands."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django; install the project requirements "
            "(uv sync or pip install -r requirements.txt) first."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
