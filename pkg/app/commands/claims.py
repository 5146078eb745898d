"""
Claim commands: list-claims, check, check-all.
"""

import logging

from app.commands.common import parse_csv, resolve_groups
from app.services.claims import all_claims, get_claim, run_claim
from app.services.corpus import get_group
from app.services.reports import exit_code, render, run_all, write_report

logger = logging.getLogger(__name__)


def list_claims(args) -> int:
    for entry in all_claims():
        print(f"{entry.id}  {entry.kind:<13} {entry.statement}")
    return 0


def check(args) -> int:
    get_claim(args.claim)
    G = get_group(args.group)
    result = run_claim(args.claim, G, timings=args.timings)
    print(render([result], as_json=args.json, timings=args.timings))
    return exit_code([result])


def check_all(args) -> int:
    claim_ids = parse_csv(args.claims)
    if claim_ids is not None:
        for claim_id in claim_ids:
            get_claim(claim_id)
    groups = resolve_groups(parse_csv(args.groups))
    results = run_all(groups, claim_ids, jobs=args.jobs, timings=args.timings)
    text = render(results, as_json=args.json, timings=args.timings)
    print(text)
    if args.output:
        write_report(text, args.output)
    return exit_code(results)


def _add_report_flags(parser) -> None:
    parser.add_argument("--json", action="store_true", help="emit the JSON report instead of text")
    parser.add_argument("--timings", action="store_true", help="report elapsed milliseconds (breaks byte-identical output)")


def register(subparsers) -> None:
    parser = subparsers.add_parser("list-claims", help="list registered claims")
    parser.set_defaults(handler=list_claims)

    parser = subparsers.add_parser("check", help="run one claim on one group")
    parser.add_argument("--claim", required=True, help="claim id, e.g. CHK-09")
    parser.add_argument("--group", required=True, help="group name, e.g. S4")
    _add_report_flags(parser)
    parser.set_defaults(handler=check)

    parser = subparsers.add_parser("check-all", help="run claims over groups")
    parser.add_argument("--groups", default=None, help="comma separated group names (default: the corpus)")
    parser.add_argument("--claims", default=None, help="comma separated claim ids (default: all)")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes")
    parser.add_argument("--output", default=None, help="also write the report to this path")
    _add_report_flags(parser)
    parser.set_defaults(handler=check_all)
