"""Command line entry point: ``woafs run|validate|version``.

Exit status: 0 success, 1 configuration error, 2 data error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from . import config as config_module
from .errors import ConfigError, DataError
from .experiment import run_experiment

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_RUNTIME = 0, 1, 2, 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="woafs",
        description="Whale-optimization word selection and classifier evaluation for review corpora.",
        epilog="Config file format:\n" + config_module.__doc__.split("\n", 2)[2],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the full experiment described by a config file")
    run.add_argument("--config", required=True, help="experiment config file")
    run.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
    run.add_argument("--out", default=None, help="output directory (overrides output_dir)")

    val = sub.add_parser("validate", help="parse and check a config file")
    val.add_argument("--config", required=True)

    sub.add_parser("version", help="print the package version")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "version":
        print(f"woafs {__version__}")
        return EXIT_OK

    try:
        cfg = config_module.validate_config(args.config)
        if args.command == "validate":
            print(f"{args.config}: ok ({len(cfg.budgets)} budget(s), {len(cfg.classifiers)} classifier(s), "
                  f"{len(cfg.seeds)} seed(s))")
            return EXIT_OK
        if args.threads < 1:
            raise ConfigError(f"--threads must be >= 1, got {args.threads}")
        run_experiment(cfg, threads=args.threads, out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
