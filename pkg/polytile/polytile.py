import sys

from polytile import logger
from polytile.log import addLogFile, setLogLevel

from polytile import __pkg_name__
from polytile import __version__
from polytile.config import Config
from polytile.run import EXIT_INPUT
from polytile.run import cmd_assemble
from polytile.run import cmd_export
from polytile.run import cmd_planecheck
from polytile.run import cmd_reduce
from polytile.run import cmd_ruler
from polytile.run import cmd_section
from polytile.run import cmd_solve


def _parser():
    import argparse

    parser = argparse.ArgumentParser(
        prog=__pkg_name__,
        description="Reduce Wang tile sets to polycube tilings and verify them.",
    )
    parser.add_argument(
        "-d",
        "--debug",
        dest="debug",
        default=False,
        action="store_true",
        help="Enable debug mode",
    )
    parser.add_argument(
        "-l",
        "--log",
        dest="log",
        default=False,
        action="store_true",
        help="Enable logging to file",
    )
    parser.add_argument(
        "-c",
        "--config",
        dest="config",
        default=None,
        help="JSON config file (defaults to $POLYTILE_CONFIG)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ruler", help="Golomb rulers: powers, modpowers, levels, check, modcheck, search")
    p.add_argument("action", choices=["powers", "modpowers", "levels", "check", "modcheck", "search"])
    p.add_argument("params", nargs="*")
    p.set_defaults(func=cmd_ruler)

    p = sub.add_parser("reduce", help="Build filler, encoder and linker of a tile set")
    p.add_argument("tileset")
    p.add_argument("-o", "--outdir", default=None)
    p.add_argument("--manifest-only", dest="manifest_only", action="store_true", default=False)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="Search a torus tiling")
    p.add_argument("tileset")
    p.add_argument("w", type=int, nargs="?", default=None)
    p.add_argument("h", type=int, nargs="?", default=None)
    p.add_argument("--auto", action="store_true", default=False, help="Try tori of increasing area")
    p.add_argument("--max-side", dest="max_side", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("assemble", help="Assemble and verify the tiling of space for a torus tiling")
    p.add_argument("tileset")
    p.add_argument("tiling")
    p.add_argument("-o", "--outdir", default=None)
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("export", help="Export a polycube or an assembly")
    p.add_argument("source", help="'cross', a cell list or an assembly .json")
    p.add_argument("-f", "--format", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("planecheck", help="Does a polyomino tile the plane by translations?")
    p.add_argument("polyomino", help="'cross' or a polyomino file")
    p.add_argument("--witness", type=int, default=0, help="Search a blocking window up to this side")
    p.set_defaults(func=cmd_planecheck)

    p = sub.add_parser("section", help="Plot a horizontal section of an assembly")
    p.add_argument("assembly")
    p.add_argument("z", type=int)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_section)
    return parser


def main(argv=None):
    """
    Main entry point for the polytile command line interface.

    Global flags:

    * `-d` or `--debug`: Enable debug mode.
    * `-l` or `--log`: Enable logging to file.
    * `-c` or `--config`: Read settings from a JSON file.

    If debug mode is not enabled, the logging level is set to INFO. If
    logging to file is enabled, a log file named
    `{__pkg_name__}_{time.strftime('%Y%m%d_%H:%M:%S')}.log` is created.

    Returns
    -------
    int
        0 on success, 1 on a negative verdict, 2 on bad input, 3 when a
        search budget runs out.
    """
    import time

    start = time.time()
    args = _parser().parse_args(argv)

    if not args.debug:
        setLogLevel("INFO")

    if args.log:
        addLogFile(f"{__pkg_name__}_{time.strftime('%Y%m%d_%H:%M:%S')}.log")
        logger.info("Logging to file enabled")

    logger.log("Announce", f"Starting {__pkg_name__} v{__version__}")
    try:
        config = Config.load(args.config)
        code = args.func(args, config)
    except (ValueError, OSError) as err:
        logger.error(f"{type(err).__name__}: {err}")
        print(f"error: {err}", file=sys.stderr)
        code = EXIT_INPUT

    end = time.time()
    logger.info(f"Finished in {end - start:.2f} seconds")
    logger.log("Announce", f"Exiting {__pkg_name__} with code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
