import os
import sys

from django.core.management import execute_from_command_line


def main(argv=None):
    """
    Entry point of the `wez` console script: `wez design --samples 100`
    runs the `design` management command.
    """
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "wez_surrogate.settings")
    argv = list(sys.argv if argv is None else argv)
    execute_from_command_line(["wez"] + argv[1:])


if __name__ == "__main__":
    main()
