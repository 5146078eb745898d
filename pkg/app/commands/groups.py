"""
Group commands: list-groups, engel-set, radical, eval-expr, load.
"""

import logging

from app.commands.common import parse_csv, parse_env
from app.services.corpus import corpus_names, dump_cayley_table, get_group, load_cayley_table
from app.services.engel import LEFT, RIGHT, engel_set
from app.services.exponent import evaluate
from app.services.groups import GroupError, load_permutation_file, validate_group
from app.services.reports import exit_code, render, run_all
from app.services.structure import baer_radical, derived_length, fitting_oracle, nilpotency_class, whole_group

logger = logging.getLogger(__name__)


def _dash(value) -> str:
    return "-" if value is None else str(value)


def _summary(G) -> str:
    top = whole_group(G)
    return (
        f"{G.name:<10} order {G.order:>4}  class {_dash(nilpotency_class(top)):>2}  "
        f"derived length {_dash(derived_length(top))}"
    )


def list_groups(args) -> int:
    for name in corpus_names():
        print(_summary(get_group(name)))
    return 0


def show_engel_set(args) -> int:
    G = get_group(args.group)
    found = engel_set(G, args.side, args.n)
    kind = "L" if args.side == LEFT else "R"
    print(f"{kind}_{args.n}({G.name}): {len(found)} of {G.order} elements")
    for x in found.members:
        print(f"  {G.format_element(int(x))}")
    return 0


def show_radical(args) -> int:
    G = get_group(args.group)
    radical = baer_radical(G) if args.kind == "baer" else fitting_oracle(G)
    gens = ", ".join(G.format_element(g) for g in radical.generators) or "1"
    print(f"{args.kind} radical of {G.name}: order {radical.order}, generated by {gens}")
    return 0


def eval_expr(args) -> int:
    G = get_group(args.group)
    env = parse_env(G, args.env)
    u = G.element(args.base)
    result = evaluate(G, u, args.expr, env)
    print(G.format_element(result))
    return 0


def load(args) -> int:
    if bool(args.cayley) == bool(args.perms):
        raise GroupError("load needs exactly one of --cayley or --perms")
    if args.cayley:
        G = load_cayley_table(args.cayley, name=args.name)
    else:
        G = load_permutation_file(args.perms, name=args.name or "G")
    validate_group(G)
    if args.dump:
        print(dump_cayley_table(G), end="")
        return 0
    print(_summary(G))
    claim_ids = parse_csv(args.claims)
    if claim_ids is None:
        return 0
    results = run_all([G], claim_ids, jobs=1)
    print(render(results, as_json=args.json))
    return exit_code(results)


def register(subparsers) -> None:
    parser = subparsers.add_parser("list-groups", help="list the default corpus")
    parser.set_defaults(handler=list_groups)

    parser = subparsers.add_parser("engel-set", help="left or right n-Engel elements of a group")
    parser.add_argument("--side", choices=[LEFT, RIGHT], required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--group", required=True)
    parser.set_defaults(handler=show_engel_set)

    parser = subparsers.add_parser("radical", help="Baer radical or Fitting subgroup")
    parser.add_argument("--kind", choices=["baer", "fitting"], required=True)
    parser.add_argument("--group", required=True)
    parser.set_defaults(handler=show_radical)

    parser = subparsers.add_parser("eval-expr", help="evaluate u^(expr) in a group")
    parser.add_argument("--group", required=True)
    parser.add_argument("--base", required=True, help="the element u as a word in the generators")
    parser.add_argument("--expr", required=True, help="exponent expression, e.g. '2a-1'")
    parser.add_argument("--env", default=None, help="label=word bindings, comma separated")
    parser.set_defaults(handler=eval_expr)

    parser = subparsers.add_parser("load", help="load and validate a group from a file")
    parser.add_argument("--cayley", default=None, help="Cayley table file")
    parser.add_argument("--perms", default=None, help="permutation generator file")
    parser.add_argument("--name", default=None)
    parser.add_argument("--claims", default=None, help="comma separated claim ids to run on the loaded group")
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--dump", action="store_true", help="print the group as a Cayley table")
    parser.set_defaults(handler=load)
