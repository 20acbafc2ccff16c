#!/usr/bin/env python3
import sys
import argparse

from pydantic import ValidationError

from config.config import DEFAULT_FORMAT, DEFAULT_JOBS, OUTPUT_FORMATS
from utils.finite_field import CodeSpec
from utils.formatter import render
from utils.logger import get_logger
from utils.processor import CodeProcessor, validation_message

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_ERROR = 3


def parse_modulus(text):
    """Comma-separated coefficients, lowest degree first (e.g. "1,0,1" is X^2 + 1)."""
    if text is None:
        return None
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise ValueError(f"modulus must be comma-separated integers, got {text!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        description="Trace-code toolkit: build C_D, enumerate its weights and check the closed forms"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=DEFAULT_FORMAT, help="Output format")
    common.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="Worker count")
    common.add_argument("--timing", action="store_true", help="Include timing in JSON/CSV output")

    single = argparse.ArgumentParser(add_help=False)
    single.add_argument("--p", type=int, required=True, help="Odd prime p")
    single.add_argument("--e", type=int, required=True, help="Even extension degree e")
    single.add_argument("--l", type=int, required=True, help="Exponent parameter l")
    single.add_argument("--modulus", type=str, help="Irreducible modulus, coefficients low-to-high (e.g. 1,0,1)")

    subparsers.add_parser("construct", parents=[common, single], help="Brute-force [n,k,d], weights and CWE")
    subparsers.add_parser("verify", parents=[common, single], help="Compare brute force with every prediction")

    weil = subparsers.add_parser("weilsum", parents=[common, single], help="Evaluate S(alpha, beta) both ways")
    weil.add_argument("--alpha-index", type=int, required=True, help="Enumeration index of alpha")
    weil.add_argument("--beta-index", type=int, default=0, help="Enumeration index of beta")
    weil.add_argument("--require-closed-form", action="store_true", help="Fail when the closed form does not apply")

    sweep = subparsers.add_parser("sweep", parents=[common], help="verify over a cartesian parameter range")
    sweep.add_argument("--p", type=int, nargs="+", required=True, help="Primes to sweep")
    sweep.add_argument("--e", type=int, nargs="+", required=True, help="Extension degrees to sweep")
    sweep.add_argument("--l", type=int, nargs="+", required=True, help="l values to sweep")
    return parser


def run(args):
    """Dispatch one parsed command; returns the exit code."""
    if args.command == "sweep":
        processor = CodeProcessor(jobs=args.jobs)
        result = processor.sweep(args.p, args.e, args.l)
        sys.stdout.write(render(result, args.format, args.timing))
        if not result.cells or len(result.skipped) == len(result.cells):
            logger.error("Every sweep cell lies outside the hypotheses")
            print("Error: no parameter cell satisfies the hypotheses", file=sys.stderr)
            return EXIT_USAGE
        return EXIT_MISMATCH if result.failed else EXIT_OK

    processor = CodeProcessor(jobs=args.jobs, modulus=parse_modulus(args.modulus))

    if args.command == "weilsum":
        result = processor.weil_sum(
            args.p, args.e, args.l, args.alpha_index, args.beta_index, args.require_closed_form
        )
        sys.stdout.write(render(result, args.format, args.timing))
        return EXIT_MISMATCH if result.match is False else EXIT_OK

    spec = CodeSpec(p=args.p, e=args.e, l=args.l)
    if args.command == "construct":
        result = processor.construct(spec)
        sys.stdout.write(render(result, args.format, args.timing))
        return EXIT_OK

    result = processor.verify(spec)
    sys.stdout.write(render(result, args.format, args.timing))
    return EXIT_OK if result.verified else EXIT_MISMATCH


def main(argv=None):
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        return run(args)
    except ValidationError as e:
        message = validation_message(e)
        logger.error(f"Invalid parameters: {message}")
        print(f"Error: {message}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        logger.error(f"Invalid input: {str(e)}")
        print(f"Error: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Error running {args.command}: {str(e)}")
        print(f"Error: {str(e)}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
