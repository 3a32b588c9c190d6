import logging
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import networkx as nx

from polyprod.polyprod_setup import PolyprodSetup, default_setup
from polyprod.polyprod_types import FamilyError, FamilySpec, Graph, InvalidGraphError, ProductKind
from polyprod.src.graph_core import from_edge_list, from_networkx, to_networkx

logger = logging.getLogger(__name__)


_PRODUCTS: Dict[ProductKind, Callable[[nx.Graph, nx.Graph], nx.Graph]] = {
    ProductKind.kronecker: nx.tensor_product,
    ProductKind.cartesian: nx.cartesian_product,
    ProductKind.strong: nx.strong_product,
}


def product(H: Graph, J: Graph, kind: Union[ProductKind, str]) -> Graph:
    """Graph product with vertex (a, x) at index a * |V(J)| + x."""
    if isinstance(kind, str):
        kind = ProductKind.from_name(kind)
    if H.n == 0 or J.n == 0:
        raise InvalidGraphError("Product factors must be non-empty")
    P = _PRODUCTS[kind](to_networkx(H), to_networkx(J))
    edges = ((a * J.n + x, b * J.n + y) for (a, x), (b, y) in P.edges())
    return from_edge_list(H.n * J.n, edges)


def path(n: int) -> Graph:
    return from_networkx(nx.path_graph(n))


def cycle(n: int) -> Graph:
    return from_networkx(nx.cycle_graph(n))


def complete(n: int) -> Graph:
    return from_networkx(nx.complete_graph(n))


def complete_bipartite(a: int, b: int) -> Graph:
    return from_networkx(nx.complete_bipartite_graph(a, b))


def wheel(n: int) -> Graph:
    """n-gonal pyramid: apex 0, rim 1..n."""
    return from_networkx(nx.wheel_graph(n + 1))


def prism(n: int) -> Graph:
    return product(cycle(n), complete(2), ProductKind.cartesian)


def ladder(n: int) -> Graph:
    """P_n x K_2 with a_i = 2i, b_i = 2i + 1."""
    return product(path(n), complete(2), ProductKind.cartesian)


def cube() -> Graph:
    return from_networkx(nx.hypercube_graph(3))


def diamond() -> Graph:
    return from_networkx(nx.diamond_graph())


def square_pyramid() -> Graph:
    return wheel(4)


def twisted_prism(n: int) -> Graph:
    """2n-rung ladder closed with the twist chords a_{2n-1} b_0 and b_{2n-1} a_0."""
    base = ladder(2 * n)
    a_last, b_last = 2 * (2 * n - 1), 2 * (2 * n - 1) + 1
    a_0, b_0 = 0, 1
    return from_edge_list(base.n, list(base.edges()) + [(a_last, b_0), (b_last, a_0)])


def pseudo_double_wheel(n: int) -> Graph:
    """(4n+2)-cycle 0..4n+1; apex 4n+2 on the even positions, apex 4n+3 on the odd ones."""
    if n < 1:
        raise FamilyError(f"pseudo_double_wheel needs n >= 1, got {n}")
    k = 4 * n + 2
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + (i % 2), i) for i in range(k)]
    return from_edge_list(k + 2, edges)


def subdivide_even(G: Graph, edge: Tuple[int, int], length: int) -> Graph:
    """Replace `edge` by a path with `length` edges; new vertices take indices n, n+1, ..."""
    u, v = edge
    if not G.has_edge(u, v):
        raise InvalidGraphError(f"Edge ({u}, {v}) not in graph")
    if length < 2 or length % 2:
        raise InvalidGraphError(f"Even subdivision needs an even path length >= 2, got {length}")
    inner = list(range(G.n, G.n + length - 1))
    chain = [u] + inner + [v]
    edges = [e for e in G.edges() if set(e) != {u, v}]
    edges += list(zip(chain, chain[1:]))
    return from_edge_list(G.n + length - 1, edges)


# name -> (builder, number of parameters, minimum parameter value)
FAMILIES: Dict[str, Tuple[Callable[..., Graph], int, int]] = {
    "path": (path, 1, 1),
    "cycle": (cycle, 1, 3),
    "complete": (complete, 1, 1),
    "complete_bipartite": (complete_bipartite, 2, 1),
    "wheel": (wheel, 1, 3),
    "prism": (prism, 1, 3),
    "ladder": (ladder, 1, 1),
    "pseudo_double_wheel": (pseudo_double_wheel, 1, 1),
    "twisted_prism": (twisted_prism, 1, 2),
    "diamond": (diamond, 0, 0),
    "square_pyramid": (square_pyramid, 0, 0),
    "cube": (cube, 0, 0),
}


def parse_family(text: str) -> FamilySpec:
    """`name` or `name:p1,p2`."""
    name, _, rest = text.strip().partition(":")
    try:
        params = tuple(int(p) for p in rest.split(",")) if rest else ()
    except ValueError:
        raise FamilyError(f"Family parameters must be integers: {text!r}")
    return FamilySpec(name=name, params=params)


def make_family(spec: Union[FamilySpec, str], setup: Optional[PolyprodSetup] = None) -> Graph:
    setup = setup if setup is not None else default_setup()
    if isinstance(spec, str):
        spec = parse_family(spec)
    if spec.name not in FAMILIES:
        raise FamilyError(f"Unknown family {spec.name!r}. Known: {sorted(FAMILIES)}")
    builder, arity, low = FAMILIES[spec.name]
    if len(spec.params) != arity:
        raise FamilyError(f"Family {spec.name!r} takes {arity} parameter(s), got {len(spec.params)}")
    for p in spec.params:
        if not low <= p <= setup.family_max_param:
            raise FamilyError(
                f"Family {spec.name!r} parameter {p} outside [{low}, {setup.family_max_param}]"
            )
    logger.debug("building family %s%s", spec.name, spec.params)
    return builder(*spec.params)
