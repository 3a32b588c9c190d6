import logging
import sys

from polyprod.polyprod import Polyprod
from polyprod.src.classify import format_verdict, is_3_polytope, kronecker_double
from polyprod.src.construct import apply_plan
from polyprod.src.graph_core import is_isomorphic
from polyprod.src.products import make_family, prism, pseudo_double_wheel, wheel
from polyprod.src.utils.graph_io import encode_graph6

logging.basicConfig(level=logging.INFO, stream=sys.stderr)
logger = logging.getLogger(__name__)


def family_identities(n_max: int = 4) -> None:
    for n in range(1, n_max + 1):
        odd_prism = kronecker_double(prism(2 * n + 1))
        logger.info("prism(%d) x K2 = prism(%d): %s", 2 * n + 1, 4 * n + 2,
                    is_isomorphic(odd_prism, prism(4 * n + 2)))
        odd_wheel = kronecker_double(wheel(2 * n + 1))
        logger.info("wheel(%d) x K2 = pseudo double wheel(%d): %s", 2 * n + 1, n,
                    is_isomorphic(odd_wheel, pseudo_double_wheel(n)))


def main() -> None:
    app = Polyprod()
    family_identities()

    for spec in ["wheel:3", "wheel:4", "wheel:5", "twisted_prism:2", "prism:5"]:
        print(spec)
        print(format_verdict(app.decide(spec)))
        print()

    plans = app.generate("cube", max_m=2)
    print(f"cube augmentations with two chords: {len(plans)}")
    H = apply_plan(plans[0])
    print(f"first: {H.m} edges, product is a 3-polytope: {is_3_polytope(kronecker_double(H))}")

    stream = [encode_graph6(make_family(f"wheel:{k}")) for k in (3, 4, 5, 6, 7)]
    report = app.census(stream, fmt="graph6")
    for record in report.records:
        print(record.id, record.n, record.branch, record.accepted, record.agree)
    print(report.summary)


if __name__ == "__main__":
    main()
