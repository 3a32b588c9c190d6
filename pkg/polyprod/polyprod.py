# polyprod.py
import logging
from typing import Iterable, List, Optional, Union

from polyprod.polyprod_setup import PolyprodSetup, default_setup
from polyprod.polyprod_types import (
    AugmentationPlan, CensusReport, Graph, GraphInputError, PlanarEmbedding, ProductKind, Verdict,
)
from polyprod.src.classify import classify_kronecker_factor, classify_product, is_3_polytope
from polyprod.src.construct import apply_plan, enumerate_plans, sample_plans
from polyprod.src.harness import census, read_graphs, render_graph
from polyprod.src.products import make_family, product
from polyprod.src.utils.graph_io import sniff_format

logger = logging.getLogger(__name__)

GraphSpec = Union[Graph, str]


class Polyprod:
    """Single entry point binding a setup to every operation the CLI exposes."""

    def __init__(self, setup: Optional[PolyprodSetup] = None):
        self.setup = setup if setup is not None else default_setup()

    def load_graph_spec(self, spec: GraphSpec) -> Graph:
        """`family:params`, or `@path` whose format follows the extension (.g6, .s6, .el)."""
        if isinstance(spec, Graph):
            return spec
        if spec.startswith("@"):
            path = spec[1:]
            fmt = sniff_format(path)
            try:
                with open(path) as f:
                    G = next(read_graphs(f, fmt, lenient=self.setup.lenient), None)
            except OSError as exc:
                raise GraphInputError(f"cannot read {path!r}: {exc.strerror}")
            if G is None:
                raise GraphInputError(f"no graph in {path!r}")
            return G
        return make_family(spec, setup=self.setup)

    def product(self, left: GraphSpec, right: GraphSpec, kind: Union[ProductKind, str]) -> Graph:
        return product(self.load_graph_spec(left), self.load_graph_spec(right), kind)

    def classify(self, graph: GraphSpec) -> bool:
        """Oracle only: is the graph itself a 3-polytope."""
        return is_3_polytope(self.load_graph_spec(graph))

    def decide(self, graph: GraphSpec) -> Verdict:
        return classify_kronecker_factor(self.load_graph_spec(graph), setup=self.setup)

    def decide_product(self, left: GraphSpec, right: GraphSpec,
                       kind: Union[ProductKind, str]) -> Verdict:
        return classify_product(self.load_graph_spec(left), self.load_graph_spec(right), kind,
                                setup=self.setup)

    def generate(self, base: GraphSpec, max_m: Optional[int] = None, sample: Optional[int] = None,
                 seed: int = 0) -> List[AugmentationPlan]:
        G = self.load_graph_spec(base)
        if sample is None:
            return list(enumerate_plans(G, max_m, setup=self.setup))
        return sample_plans(G, max_m, sample, seed, setup=self.setup)

    def augment(self, plan: AugmentationPlan, verify: bool = False) -> Graph:
        return apply_plan(plan, verify=verify)

    def census(self, stream: Iterable[str], fmt: str = "graph6", mode: str = "kronecker-factor",
               kind: Union[ProductKind, str, None] = None, right: Optional[GraphSpec] = None,
               min_degree: Optional[int] = None) -> CensusReport:
        J = self.load_graph_spec(right) if right is not None else None
        graphs = read_graphs(stream, fmt, lenient=self.setup.lenient)
        return census(graphs, mode=mode, kind=kind, J=J, workers=self.setup.workers,
                      min_degree_filter=min_degree, setup=self.setup)

    def render(self, graph: GraphSpec, path: str) -> PlanarEmbedding:
        return render_graph(self.load_graph_spec(graph), path)
