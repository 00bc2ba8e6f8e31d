import os
import sys


def main():
    """Console entry point: ``itp-confine solve ...`` runs ``manage.py solve ...``."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
    from django.core.management import execute_from_command_line

    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
