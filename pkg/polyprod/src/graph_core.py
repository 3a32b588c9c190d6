import logging
from collections import deque
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from polyprod.polyprod_types import (
    CanonicalForm, CutSet, Edge, Graph, InvalidGraphError, NotBipartite, TwoColoring,
)

logger = logging.getLogger(__name__)


def _from_neighbor_sets(n: int, nbrs: Sequence[Iterable[int]]) -> Graph:
    return Graph(n=n, adj=tuple(tuple(sorted(set(s))) for s in nbrs))


def from_edge_list(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a simple undirected graph on vertices 0..n-1.

    Args:
        n: vertex count.
        edges: pairs (u, v); duplicates and reversed duplicates collapse.

    Returns:
        Graph with sorted adjacency.
    """
    if n < 0:
        raise InvalidGraphError(f"Vertex count must be non-negative, got {n}")
    nbrs: List[Set[int]] = [set() for _ in range(n)]
    for edge in edges:
        u, v = (int(x) for x in edge)
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidGraphError(f"Edge ({u}, {v}) out of range for {n} vertices")
        if u == v:
            raise InvalidGraphError(f"Self-loop at vertex {u}")
        nbrs[u].add(v)
        nbrs[v].add(u)
    return _from_neighbor_sets(n, nbrs)


def to_networkx(G: Graph) -> nx.Graph:
    nxG = nx.Graph()
    nxG.add_nodes_from(range(G.n))
    nxG.add_edges_from(G.edges())
    return nxG


def from_networkx(nxG: nx.Graph) -> Graph:
    """Relabel the nodes of `nxG` densely in sorted node order."""
    nodes = sorted(nxG.nodes())
    index = {node: i for i, node in enumerate(nodes)}
    return from_edge_list(len(nodes), ((index[u], index[v]) for u, v in nxG.edges() if u != v))


def _reach(G: Graph, start: int, removed: Union[Set[int], frozenset]) -> List[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in G.adj[u]:
            if w not in seen and w not in removed:
                seen.add(w)
                queue.append(w)
    return sorted(seen)


def components_without(G: Graph, removed: Iterable[int] = ()) -> Tuple[Tuple[int, ...], ...]:
    """Connected components of G minus `removed`, in original labels, ordered by least vertex."""
    removed = frozenset(removed)
    seen: Set[int] = set(removed)
    comps = []
    for v in range(G.n):
        if v in seen:
            continue
        comp = _reach(G, v, removed)
        seen.update(comp)
        comps.append(tuple(comp))
    return tuple(comps)


def connected_components(G: Graph) -> List[Tuple[int, ...]]:
    return list(components_without(G))


def is_connected(G: Graph) -> bool:
    if G.n <= 1:
        return True
    return len(_reach(G, 0, frozenset())) == G.n


def _disconnects(G: Graph, removed: Tuple[int, ...]) -> bool:
    rest = G.n - len(removed)
    if rest <= 1:
        return False
    start = next(v for v in range(G.n) if v not in removed)
    return len(_reach(G, start, frozenset(removed))) < rest


def bipartition(G: Graph) -> Union[TwoColoring, NotBipartite]:
    color = [-1] * G.n
    parent = [-1] * G.n
    depth = [0] * G.n
    for root in range(G.n):
        if color[root] != -1:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in G.adj[u]:
                if color[w] == -1:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    queue.append(w)
                elif color[w] == color[u]:
                    return NotBipartite(odd_walk=_odd_walk(u, w, parent, depth))
    return TwoColoring(color=tuple(color))


def _odd_walk(u: int, w: int, parent: List[int], depth: List[int]) -> Tuple[int, ...]:
    # tree paths from u and w up to their lowest common ancestor, closed by the edge uw
    pu, pw = [u], [w]
    while depth[pu[-1]] > depth[pw[-1]]:
        pu.append(parent[pu[-1]])
    while depth[pw[-1]] > depth[pu[-1]]:
        pw.append(parent[pw[-1]])
    while pu[-1] != pw[-1]:
        pu.append(parent[pu[-1]])
        pw.append(parent[pw[-1]])
    return tuple(reversed(pu)) + tuple(pw)


def is_bipartite(G: Graph) -> bool:
    return isinstance(bipartition(G), TwoColoring)


def min_degree(G: Graph) -> int:
    if G.n == 0:
        return 0
    return min(len(nbrs) for nbrs in G.adj)


def degree_count(G: Graph, d: int) -> int:
    return sum(1 for nbrs in G.adj if len(nbrs) == d)


def is_complete(G: Graph) -> bool:
    return all(len(nbrs) == G.n - 1 for nbrs in G.adj)


def is_path(G: Graph) -> bool:
    """P_n with n >= 2."""
    return G.n >= 2 and G.m == G.n - 1 and is_connected(G) and max(len(a) for a in G.adj) <= 2


def is_cycle(G: Graph) -> bool:
    """C_n with n >= 3."""
    return G.n >= 3 and all(len(a) == 2 for a in G.adj) and is_connected(G)


def vertex_connectivity(G: Graph) -> int:
    """Largest k such that G is k-connected (|V| > k and no separator of size < k)."""
    if G.n <= 1 or not is_connected(G):
        return 0
    if is_complete(G):
        return G.n - 1
    for k in (1, 2, 3):
        if any(_disconnects(G, S) for S in combinations(range(G.n), k)):
            return k
    return int(nx.node_connectivity(to_networkx(G)))


def is_k_connected(G: Graph, k: int) -> bool:
    if G.n <= k:
        return False
    if k <= 0:
        return True
    if not is_connected(G):
        return False
    if k <= 3:
        return not any(_disconnects(G, S) for s in range(1, k) for S in combinations(range(G.n), s))
    return vertex_connectivity(G) >= k


def enumerate_cuts(G: Graph, k: int) -> List[CutSet]:
    cuts = []
    for S in combinations(range(G.n), k):
        if _disconnects(G, S):
            cuts.append(CutSet(vertices=S, components=components_without(G, S)))
    return cuts


def is_semi_hyper_k_connected(G: Graph, k: int) -> bool:
    if vertex_connectivity(G) != k:
        return False
    return all(len(cut.components) == 2 for cut in enumerate_cuts(G, k))


def _check_vertex(G: Graph, v: int) -> None:
    if not 0 <= v < G.n:
        raise InvalidGraphError(f"Vertex {v} out of range for {G.n} vertices")


def delete_vertex(G: Graph, v: int) -> Tuple[Graph, Dict[int, int]]:
    """Remove v; vertices above v shift down by one.

    Returns:
        The smaller graph and the old -> new mapping (v itself is absent).
    """
    _check_vertex(G, v)
    mapping = {u: (u if u < v else u - 1) for u in range(G.n) if u != v}
    edges = ((mapping[a], mapping[b]) for a, b in G.edges() if v not in (a, b))
    return from_edge_list(G.n - 1, edges), mapping


def induced_subgraph(G: Graph, vertices: Iterable[int]) -> Tuple[Graph, Dict[int, int]]:
    keep = sorted(set(vertices))
    for v in keep:
        _check_vertex(G, v)
    mapping = {v: i for i, v in enumerate(keep)}
    edges = ((mapping[a], mapping[b]) for a, b in G.edges() if a in mapping and b in mapping)
    return from_edge_list(len(keep), edges), mapping


def delete_edges(G: Graph, edges: Iterable[Sequence[int]]) -> Graph:
    drop = set()
    for u, v in edges:
        _check_vertex(G, u)
        _check_vertex(G, v)
        if not G.has_edge(u, v):
            raise InvalidGraphError(f"Edge ({u}, {v}) not in graph")
        drop.add(frozenset((u, v)))
    return from_edge_list(G.n, (e for e in G.edges() if frozenset(e) not in drop))


def add_edges(G: Graph, edges: Iterable[Sequence[int]]) -> Graph:
    edges = [tuple(e) for e in edges]
    for u, v in edges:
        _check_vertex(G, u)
        _check_vertex(G, v)
    return from_edge_list(G.n, list(G.edges()) + edges)


def disjoint_union(G1: Graph, G2: Graph) -> Graph:
    shifted = ((u + G1.n, v + G1.n) for u, v in G2.edges())
    return from_edge_list(G1.n + G2.n, list(G1.edges()) + list(shifted))


def relabel(G: Graph, perm: Sequence[int]) -> Graph:
    """pi(G): vertex v becomes perm[v]."""
    if sorted(perm) != list(range(G.n)):
        raise InvalidGraphError(f"Not a permutation of 0..{G.n - 1}: {perm}")
    return from_edge_list(G.n, ((perm[u], perm[v]) for u, v in G.edges()))


def _rank(keys: Sequence) -> Tuple[int, ...]:
    order = {key: i for i, key in enumerate(sorted(set(keys)))}
    return tuple(order[key] for key in keys)


def _refine(G: Graph, colors: Tuple[int, ...]) -> Tuple[int, ...]:
    # colour refinement; ranks keep the old colour as primary key so cells only split
    while True:
        keys = [(colors[v], tuple(sorted(colors[w] for w in G.adj[v]))) for v in range(G.n)]
        refined = _rank(keys)
        if len(set(refined)) == len(set(colors)):
            return refined
        colors = refined


def _certificate(G: Graph, colors: Tuple[int, ...]) -> Tuple[Edge, ...]:
    return tuple(sorted(
        (min(colors[u], colors[v]), max(colors[u], colors[v])) for u, v in G.edges()
    ))


def _search(G: Graph, colors: Tuple[int, ...]) -> Tuple[Tuple[Edge, ...], Tuple[int, ...]]:
    colors = _refine(G, colors)
    if len(set(colors)) == G.n:
        return _certificate(G, colors), colors
    cells: Dict[int, List[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    target = min((c for c, cell in cells.items() if len(cell) > 1), key=lambda c: (len(cells[c]), c))
    best = None
    for v in cells[target]:
        individualized = _rank([(c, 0 if u == v else 1) for u, c in enumerate(colors)])
        found = _search(G, individualized)
        if best is None or found[0] < best[0]:
            best = found
    return best


def canonical_labeling(G: Graph, max_n: Optional[int] = None) -> Tuple[int, ...]:
    """Permutation pi such that relabel(G, pi) is the canonical representative.

    Refinement plus individualization over every vertex of the first smallest
    non-trivial cell; the lexicographically least relabeled edge list wins.
    Exponential on highly symmetric inputs, fine at desk scale.
    """
    if max_n is not None and G.n > max_n:
        raise InvalidGraphError(f"Canonical labeling capped at {max_n} vertices, got {G.n}")
    if G.n == 0:
        return ()
    _, colors = _search(G, tuple([0] * G.n))
    return colors


def canonical_form(G: Graph, max_n: Optional[int] = None) -> CanonicalForm:
    perm = canonical_labeling(G, max_n=max_n)
    return CanonicalForm(n=G.n, edges=_certificate(G, perm))


def is_isomorphic(G1: Graph, G2: Graph) -> bool:
    if G1.n != G2.n or G1.m != G2.m:
        return False
    if sorted(map(len, G1.adj)) != sorted(map(len, G2.adj)):
        return False
    return nx.is_isomorphic(to_networkx(G1), to_networkx(G2))
