import logging
from itertools import permutations, product
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from polyprod.polyprod_setup import default_setup
from polyprod.polyprod_types import (
    EmbeddingCapExceeded, FaceWalk, Graph, NonPlanar, PlanarEmbedding, Walk,
)
from polyprod.src.graph_core import components_without, is_connected, to_networkx, vertex_connectivity

logger = logging.getLogger(__name__)


def _embedding_from_networkx(G: Graph, emb: nx.PlanarEmbedding) -> PlanarEmbedding:
    rotation = tuple(
        tuple(emb.neighbors_cw_order(v)) if G.adj[v] else () for v in range(G.n)
    )
    return PlanarEmbedding(graph=G, rotation=rotation)


def test_planarity(G: Graph) -> Union[PlanarEmbedding, NonPlanar]:
    """Planar embedding as a rotation system, or a Kuratowski subgraph."""
    planar, cert = nx.check_planarity(to_networkx(G), counterexample=True)
    if planar:
        return _embedding_from_networkx(G, cert)
    witness = tuple(sorted((min(u, v), max(u, v)) for u, v in cert.edges()))
    branch_vertices = sum(1 for v in cert.nodes() if cert.degree(v) >= 3)
    return NonPlanar(witness=witness, kind="K5" if branch_vertices == 5 else "K3,3")


# keep pytest from collecting the library function above as a test
test_planarity.__test__ = False


def is_planar(G: Graph) -> bool:
    return isinstance(test_planarity(G), PlanarEmbedding)


def _positions(rotation: Sequence[Sequence[int]]) -> List[Dict[int, int]]:
    return [{w: i for i, w in enumerate(rot)} for rot in rotation]


def _trace(G: Graph, rotation: Sequence[Sequence[int]]) -> List[FaceWalk]:
    pos = _positions(rotation)
    used = set()
    faces = []
    for u in range(G.n):
        for v in G.adj[u]:
            if (u, v) in used:
                continue
            walk = []
            dart = (u, v)
            while dart not in used:
                used.add(dart)
                a, b = dart
                walk.append(a)
                # leave b along the neighbor preceding a in rotation[b]
                nxt = rotation[b][pos[b][a] - 1]
                dart = (b, nxt)
            faces.append(FaceWalk(boundary=tuple(walk)))
    return faces


def faces(E: PlanarEmbedding) -> List[FaceWalk]:
    return _trace(E.graph, E.rotation)


def odd_faces(E: PlanarEmbedding) -> List[FaceWalk]:
    return [f for f in faces(E) if f.length % 2 == 1]


def face_contains_vertices(f: FaceWalk, S: Iterable[int]) -> bool:
    return set(S) <= f.vertices


def _genus_zero(G: Graph, traced: int) -> bool:
    # traced faces count each component's outer face separately: n' - m + F = 2c'
    touched = [v for v in range(G.n) if G.adj[v]]
    comps = sum(1 for comp in components_without(G) if len(comp) > 1)
    return len(touched) - G.m + traced == 2 * comps


def is_valid_embedding(E: PlanarEmbedding) -> bool:
    G = E.graph
    if len(E.rotation) != G.n:
        return False
    if any(sorted(E.rotation[v]) != list(G.adj[v]) for v in range(G.n)):
        return False
    return _genus_zero(G, len(_trace(G, E.rotation)))


def _rotation_options(G: Graph, v: int) -> List[Tuple[int, ...]]:
    nbrs = G.adj[v]
    if len(nbrs) <= 2:
        return [tuple(nbrs)]
    # lowest neighbor pinned first: one representative per cyclic order
    return [(nbrs[0],) + perm for perm in permutations(nbrs[1:])]


def rotation_count(G: Graph) -> int:
    count = 1
    for v in range(G.n):
        count *= len(_rotation_options(G, v))
    return count


def enumerate_embeddings(G: Graph, cap: Optional[int] = None) -> Iterator[PlanarEmbedding]:
    """All genus-0 rotation systems of G, both reflections included.

    Raises:
        EmbeddingCapExceeded: G has more than `cap` vertices. Raised at call time.
    """
    if cap is None:
        cap = default_setup().embed_cap
    if G.n > cap:
        raise EmbeddingCapExceeded(f"Embedding enumeration capped at {cap} vertices, got {G.n}")
    return _genus_zero_rotations(G)


def _genus_zero_rotations(G: Graph) -> Iterator[PlanarEmbedding]:
    options = [_rotation_options(G, v) for v in range(G.n)]
    for rotation in product(*options):
        if _genus_zero(G, len(_trace(G, rotation))):
            yield PlanarEmbedding(graph=G, rotation=tuple(rotation))


def is_outerplanar_2connected(G: Graph) -> bool:
    if G.n < 3 or vertex_connectivity(G) < 2:
        return False
    nxG = to_networkx(G)
    apex = G.n
    nxG.add_edges_from((apex, v) for v in range(G.n))
    return nx.check_planarity(nxG)[0]


def _cycle_witness(G: Graph, cycle: Sequence[int]) -> Optional[PlanarEmbedding]:
    # subdivide every edge of the cycle and join the subdivision vertices to a new apex;
    # the augmented graph is planar iff the cycle bounds a face in some embedding of G
    nxG = to_networkx(G)
    apex = G.n
    ends = {}
    k = len(cycle)
    for i in range(k):
        u, v = cycle[i], cycle[(i + 1) % k]
        mid = G.n + 1 + i
        ends[mid] = (u, v)
        nxG.remove_edge(u, v)
        nxG.add_edges_from([(u, mid), (mid, v), (mid, apex)])
    planar, emb = nx.check_planarity(nxG)
    if not planar:
        return None

    def original(v: int, w: int) -> int:
        if w not in ends:
            return w
        a, b = ends[w]
        return b if a == v else a

    rotation = tuple(
        tuple(original(v, w) for w in emb.neighbors_cw_order(v)) if G.adj[v] else ()
        for v in range(G.n)
    )
    return PlanarEmbedding(graph=G, rotation=rotation)


def facial_cycles(G: Graph, required: Iterable[int] = ()) -> Iterator[Tuple[Walk, PlanarEmbedding]]:
    """Simple cycles through every `required` vertex that bound a face in some embedding of G.

    Each cycle comes with an embedding in which it is a face; cycles are
    yielded in networkx's simple-cycle order.
    """
    required = set(required)
    if not is_connected(G):
        return
    for cycle in nx.simple_cycles(to_networkx(G)):
        if len(cycle) < 3 or not required <= set(cycle):
            continue
        E = _cycle_witness(G, cycle)
        if E is not None:
            logger.debug("facial cycle %s", cycle)
            yield tuple(cycle), E


def face_of(E: PlanarEmbedding, cycle: Sequence[int]) -> Optional[FaceWalk]:
    """The face of E whose boundary is `cycle` (as a vertex cycle), if any."""
    target = FaceWalk(boundary=tuple(cycle)).edge_set()
    for f in faces(E):
        if f.length == len(cycle) and f.edge_set() == target:
            return f
    return None
