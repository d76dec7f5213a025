#!/usr/bin/env python

import argparse
import os
import sys
import warnings

from django.core.management import execute_from_command_line


os.environ["DJANGO_SETTINGS_MODULE"] = "wez_surrogate.test.settings"


def make_parser():
    parser = argparse.ArgumentParser()
    parser.add_argument(
        "--deprecation",
        choices=["all", "pending", "none"],
        default="pending",
    )
    return parser


def parse_args(args=None):
    return make_parser().parse_known_args(args)


def runtests():
    args, rest = parse_args()

    only_wez = r"^wez_surrogate(\.|$)"
    if args.deprecation == "all":
        # Show all deprecation warnings from all packages, numpy and pandas included
        warnings.simplefilter("default", DeprecationWarning)
        warnings.simplefilter("default", PendingDeprecationWarning)
        warnings.simplefilter("default", FutureWarning)
    elif args.deprecation == "pending":
        # Show deprecation warnings raised from wez_surrogate itself
        warnings.filterwarnings(
            "default", category=DeprecationWarning, module=only_wez
        )
        warnings.filterwarnings(
            "default", category=FutureWarning, module=only_wez
        )
    elif args.deprecation == "none":
        # Deprecation warnings are ignored by default
        pass

    argv = [sys.argv[0]] + rest
    execute_from_command_line(argv)


if __name__ == "__main__":
    runtests()
