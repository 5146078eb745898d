"""
Free nilpotent group commands: collect, hall-basis, theorem2-sym.
"""

import logging

from app.services.collector import CollectorError, collect, free_nilpotent_group, theorem2_symbolic

logger = logging.getLogger(__name__)


def collect_word(args) -> int:
    form = collect(args.word, args.rank, args.cls)
    print(form.format())
    print(" ".join(str(e) for e in form.exponents))
    return 0


def show_basis(args) -> int:
    F = free_nilpotent_group(args.rank, args.cls)
    for u in F.basis:
        print(f"{u.id:>3}  w{u.weight}  {u.label}")
    return 0


def symbolic_theorem2(args) -> int:
    if args.instance_len < 1 or args.conj_len < 0:
        raise CollectorError("--instance-len must be at least 1 and --conj-len at least 0")
    verdict = theorem2_symbolic(args.instance_len, args.conj_len, cap=args.cap)
    print(verdict.format())
    return 0 if verdict.verified else 1


def register(subparsers) -> None:
    parser = subparsers.add_parser("collect", help="collect a word into Hall normal form")
    parser.add_argument("--rank", type=int, required=True)
    parser.add_argument("--class", dest="cls", type=int, required=True)
    parser.add_argument("--word", required=True, help="word in a, b, c, e.g. 'a b a^-1'")
    parser.set_defaults(handler=collect_word)

    parser = subparsers.add_parser("hall-basis", help="print the Hall basis")
    parser.add_argument("--rank", type=int, required=True)
    parser.add_argument("--class", dest="cls", type=int, required=True)
    parser.set_defaults(handler=show_basis)

    parser = subparsers.add_parser("theorem2-sym", help="saturate Engel relators in the free class-5 group")
    parser.add_argument("--instance-len", type=int, required=True)
    parser.add_argument("--conj-len", type=int, required=True)
    parser.add_argument("--cap", type=int, default=None, help="relator instance cap")
    parser.set_defaults(handler=symbolic_theorem2)
