import argparse
import logging
import sys
from typing import List, Optional, TextIO

from polyprod.polyprod import Polyprod
from polyprod.polyprod_setup import PolyprodSetup
from polyprod.polyprod_types import PolyprodError, ProductKind
from polyprod.src.classify import format_verdict, is_3_polytope, kronecker_double
from polyprod.src.construct import apply_plan, format_plan
from polyprod.src.graph_core import vertex_connectivity
from polyprod.src.harness import MODES, format_summary, write_census_csv, write_census_parquet
from polyprod.src.planar_embed import is_planar
from polyprod.src.products import product
from polyprod.src.utils.graph_io import FORMATS, format_edgelist

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_DISAGREE, EXIT_INPUT = 0, 1, 2
KINDS = [k.name for k in ProductKind]


def _non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyprod",
        description="Decide when Kronecker, Cartesian and strong graph products are 3-polytopes.",
    )
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("-v", "--verbose", action="store_true", help="shortcut for --log-level DEBUG")
    parser.add_argument("--embed-cap", type=_non_negative_int, default=None,
                        help="vertex cap for brute-force embedding search (env POLYPROD_EMBED_CAP)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("product", help="print the edge list of a graph product")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--left", required=True, help="family:params or @file")
    p.add_argument("--right", required=True, help="family:params or @file")

    p = sub.add_parser("classify", help="oracle: is the graph a 3-polytope")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("decide", help="theorem verdict and certificate for the Kronecker product with K2")
    p.add_argument("--graph", required=True)
    p.add_argument("--right", default=None, help="decide graph x RIGHT under --kind instead")
    p.add_argument("--kind", default="kronecker", choices=KINDS)
    p.add_argument("--oracle-check", action="store_true")

    p = sub.add_parser("generate", help="augmentations of a planar bipartite base")
    p.add_argument("--base", required=True)
    p.add_argument("--max-m", type=_non_negative_int, required=True)
    p.add_argument("--sample", type=_non_negative_int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="run the oracle on every generated product")

    p = sub.add_parser("census", help="theorem vs oracle over a graph stream on stdin")
    p.add_argument("--format", dest="fmt", default="graph6", choices=list(FORMATS))
    p.add_argument("--mode", default="kronecker-factor", choices=list(MODES))
    p.add_argument("--kind", default="kronecker", choices=KINDS)
    p.add_argument("--right", default=None, help="fixed right factor in product mode")
    p.add_argument("--out", default=None, help="CSV report path (stdout when omitted)")
    p.add_argument("--parquet", default=None, help="also write a parquet report with runtimes")
    p.add_argument("--workers", type=_non_negative_int, default=1)
    p.add_argument("--min-degree", type=_non_negative_int, default=None)
    p.add_argument("--lenient", action="store_true", help="skip malformed records")

    p = sub.add_parser("render", help="barycentric SVG drawing of a planar graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    return parser


def _cmd_product(app: Polyprod, args, out: TextIO) -> int:
    P = app.product(args.left, args.right, args.kind)
    print(format_edgelist(P), file=out)
    return EXIT_OK


def _cmd_classify(app: Polyprod, args, out: TextIO) -> int:
    G = app.load_graph_spec(args.graph)
    verdict = "yes" if is_3_polytope(G) else "no"
    print(f"n={G.n} m={G.m} planar={is_planar(G)} kappa={vertex_connectivity(G)}", file=out)
    print(f"3-polytope: {verdict}", file=out)
    return EXIT_OK


def _cmd_decide(app: Polyprod, args, out: TextIO) -> int:
    H = app.load_graph_spec(args.graph)
    if args.right is None:
        verdict = app.decide(H)
    else:
        J = app.load_graph_spec(args.right)
        verdict = app.decide_product(H, J, args.kind)
    print(format_verdict(verdict), file=out)
    if not args.oracle_check:
        return EXIT_OK
    if args.right is None:
        P = kronecker_double(H) if H.n else H
    else:
        P = product(H, J, args.kind)
    if is_3_polytope(P) == verdict.accepted:
        print("oracle: agree", file=out)
        return EXIT_OK
    print("oracle: DISAGREE", file=out)
    return EXIT_DISAGREE


def _cmd_generate(app: Polyprod, args, out: TextIO) -> int:
    plans = app.generate(args.base, args.max_m, sample=args.sample, seed=args.seed)
    logger.info("%d plan(s)", len(plans))
    blocks = []
    for plan in plans:
        H = apply_plan(plan, verify=args.verify)
        blocks.append(format_plan(plan) + f"\nresult: n={H.n} m={H.m}")
    print(f"# plans={len(plans)}", file=out)
    if blocks:
        print("\n\n".join(blocks), file=out)
    return EXIT_OK


def _cmd_census(app: Polyprod, args, out: TextIO) -> int:
    app.setup.workers = max(1, args.workers)
    app.setup.lenient = args.lenient
    right = args.right
    if args.mode == "product" and right is None:
        raise PolyprodError("census --mode product needs --right")
    report = app.census(sys.stdin, fmt=args.fmt, mode=args.mode, kind=args.kind,
                        right=right if args.mode == "product" else None,
                        min_degree=args.min_degree)
    if args.out is None:
        write_census_csv(report, out)
        print(format_summary(report), file=sys.stderr)
    else:
        write_census_csv(report, args.out)
        print(format_summary(report), file=out)
    if args.parquet:
        write_census_parquet(report, args.parquet)
    return EXIT_DISAGREE if report.summary["disagreements"] else EXIT_OK


def _cmd_render(app: Polyprod, args, out: TextIO) -> int:
    E = app.render(args.graph, args.out)
    print(f"wrote {args.out} ({E.graph.n} vertices)", file=out)
    return EXIT_OK


_COMMANDS = {
    "product": _cmd_product,
    "classify": _cmd_classify,
    "decide": _cmd_decide,
    "generate": _cmd_generate,
    "census": _cmd_census,
    "render": _cmd_render,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; 0 on success, 1 on a theorem/oracle disagreement, 2 on bad input."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else getattr(logging, args.log_level),
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        app = Polyprod(PolyprodSetup(embed_cap=args.embed_cap))
        return _COMMANDS[args.command](app, args, sys.stdout)
    except PolyprodError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
