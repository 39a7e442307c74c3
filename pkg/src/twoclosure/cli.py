# cli.py

"""
Command-line interface: closure, rank, oracle, zoo and verify.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .aut import oracle_two_closure
from .dispatch import ORACLE_MODES, ClosureReport, two_closure, verify_candidate
from .errors import ClosureError, GroupParseError, MalformedPermutationError, NotRankThreeError
from .groupio import format_group, read_group
from .orbitals import two_orbits
from .perm import PermutationGroup
from .zoo import build_instance

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_PARSE = 2
EXIT_RANK = 3
EXIT_UNRESOLVED = 4


def _load(path: str) -> PermutationGroup:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return read_group(text)


def _report_header(report: ClosureReport) -> list[str]:
    lines = [f"subdegrees {report.subdegrees}"]
    for name, outcome in report.branches.items():
        status = f"order {outcome.order}" if outcome.succeeded else f"failed: {outcome.reason}"
        lines.append(f"{name}: {status}")
    if report.oracle_order is not None:
        lines.append(f"oracle: order {report.oracle_order}")
    lines.extend(f"note: {n}" for n in report.notes)
    lines.append(f"chosen {report.chosen}, order {report.order}, verified {str(report.verified).lower()}")
    return lines


def cmd_closure(args: argparse.Namespace) -> int:
    group = _load(args.file)
    report = two_closure(group, oracle=args.oracle, threshold=args.threshold)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    elif report.resolved:
        print(format_group(report.group, header=_report_header(report)), end="")
    else:
        print("\n".join(f"# {line}" for line in _report_header(report)))
    if not report.resolved:
        print("unresolved", file=sys.stderr)
        return EXIT_UNRESOLVED
    return EXIT_OK


def cmd_rank(args: argparse.Namespace) -> int:
    structure = two_orbits(_load(args.file))
    print(f"rank {structure.rank}")
    print(f"subdegrees {' '.join(str(s) for s in structure.subdegrees)}")
    ok, _ = structure.is_rank3()
    return EXIT_OK if ok else EXIT_RANK


def cmd_oracle(args: argparse.Namespace) -> int:
    closure = oracle_two_closure(_load(args.file))
    print(format_group(closure, header=[f"oracle order {closure.order}"]), end="")
    return EXIT_OK


def cmd_zoo(args: argparse.Namespace) -> int:
    descriptor = build_instance(args.name, args.params)
    text = format_group(descriptor.group, header=descriptor.header() + descriptor.notes)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {descriptor.name} on {descriptor.degree} points to {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    group = _load(args.file)
    candidate = _load(args.candidate)
    ok = verify_candidate(group, candidate)
    print("true" if ok else "false")
    return EXIT_OK if ok else EXIT_REJECTED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twoclosure", description="2-closures of rank 3 permutation groups")
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Set the logging level",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    closure = sub.add_parser("closure", help="Compute the 2-closure of a group file")
    closure.add_argument("--oracle", default="auto", choices=ORACLE_MODES, help="Automorphism search mode")
    closure.add_argument("--threshold", type=int, default=None, help="Largest degree for --oracle auto")
    closure.add_argument("--json", action="store_true", help="Print the JSON report")
    closure.add_argument("file", help="Group file, or - for stdin")
    closure.set_defaults(handler=cmd_closure)

    rank = sub.add_parser("rank", help="Print the rank and subdegrees")
    rank.add_argument("file")
    rank.set_defaults(handler=cmd_rank)

    oracle = sub.add_parser("oracle", help="2-closure by automorphism search only")
    oracle.add_argument("file")
    oracle.set_defaults(handler=cmd_oracle)

    zoo = sub.add_parser("zoo", help="Emit a named rank 3 instance")
    zoo.add_argument("name")
    zoo.add_argument("params", nargs="*")
    zoo.add_argument("-o", "--output", help="Write to this file instead of stdout")
    zoo.set_defaults(handler=cmd_zoo)

    verify = sub.add_parser("verify", help="Check that a candidate contains the group and keeps its 2-orbits")
    verify.add_argument("file")
    verify.add_argument("candidate")
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except (GroupParseError, MalformedPermutationError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"cannot read input: {e}", file=sys.stderr)
        return EXIT_PARSE
    except NotRankThreeError as e:
        print(str(e), file=sys.stderr)
        return EXIT_RANK
    except ClosureError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"unresolved: {e}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
