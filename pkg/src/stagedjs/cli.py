"""Command-line entry point: `stagedc`.

    stagedc <input.sjs> -o <out.mjs.txt> [--save-stages DIR]
            [--max-stages N] [--debug-serve PORT] [--run]

Exit codes: 0 success, 1 usage, 2 parse/analysis error, 3 stage
runtime error, 4 stage limit reached.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .driver import DriverConfig, compile_config


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="stagedc",
        description="Compile a staged program to a pure residual program.",
        add_help=True,
    )
    parser.add_argument("input", help="staged source file (.sjs)")
    parser.add_argument("-o", "--output", help="residual program path (.mjs.txt)")
    parser.add_argument(
        "--save-stages",
        metavar="DIR",
        help="directory for per-stage sources (default: $STAGEDC_SAVE_DIR or the input directory)",
    )
    parser.add_argument(
        "--max-stages",
        metavar="N",
        type=int,
        default=100,
        help="stage iteration guard (default 100)",
    )
    parser.add_argument(
        "--debug-serve",
        metavar="PORT",
        type=int,
        help="serve an interactive stage-debug session on this TCP port",
    )
    parser.add_argument(
        "--run",
        action="store_true",
        help="interpret the residual program after compiling",
    )
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"stagedc: {exc}", file=sys.stderr)
        print(parser.format_usage(), end="", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    if args.max_stages < 1:
        print("stagedc: --max-stages must be at least 1", file=sys.stderr)
        return 1
    config = DriverConfig(
        input_path=args.input,
        output_path=args.output,
        save_dir=args.save_stages,
        max_stages=args.max_stages,
        debug=args.debug_serve is not None,
        debug_port=args.debug_serve,
        run_residual=args.run,
    )
    if args.debug_serve is not None:
        from .debugsvc import serve

        return serve(config)
    return compile_config(config)


if __name__ == "__main__":
    sys.exit(main())
