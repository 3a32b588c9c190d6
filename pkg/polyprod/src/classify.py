import logging
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from polyprod.polyprod_setup import PolyprodSetup, default_setup
from polyprod.polyprod_types import (
    Branch, CutCheck, CutWitness, Edge, FaceWalk, Graph, InvalidGraphError, OddFaceCertificate,
    OrderMatch, OrderTag, PlanarEmbedding, ProductKind, SubgraphCertificate, TwoColoring,
    TwoCutCertificate, Verdict, Walk,
)
from polyprod.src.graph_core import (
    bipartition, connected_components, degree_count, delete_edges, delete_vertex, enumerate_cuts,
    induced_subgraph, is_bipartite, is_connected, is_cycle, is_k_connected, is_path, min_degree,
    vertex_connectivity,
)
from polyprod.src.planar_embed import (
    face_contains_vertices, face_of, faces, facial_cycles, is_outerplanar_2connected,
    is_valid_embedding, odd_faces, test_planarity,
)
from polyprod.src.products import complete, product
from polyprod.src.utils.jax_types import ColoringBits, EdgeMask

logger = logging.getLogger(__name__)

_BATCH = 4096


def _reject(reason: str, certificate=None) -> Verdict:
    return Verdict(accepted=False, branch=Branch.REJECT, reason=reason, certificate=certificate)


def is_3_polytope(G: Graph) -> bool:
    """Oracle: at least 4 vertices, planar and 3-connected."""
    if G.n < 4:
        return False
    if not isinstance(test_planarity(G), PlanarEmbedding):
        return False
    return is_k_connected(G, 3)


def kronecker_double(H: Graph) -> Graph:
    return product(H, complete(2), ProductKind.kronecker)


def classify_kronecker_factor(H: Graph, setup: Optional[PolyprodSetup] = None) -> Verdict:
    """Decide whether H x K2 (Kronecker) is a 3-polytope from the structure of H alone."""
    if not is_connected(H):
        return _reject("factor disconnected", certificate=tuple(connected_components(H)))
    if H.n < 4:
        return _reject(f"factor has {H.n} < 4 vertices")
    delta = min_degree(H)
    if delta < 3:
        v = next(v for v in range(H.n) if H.degree(v) == delta)
        return _reject(f"min degree {delta} < 3 at vertex {v}", certificate=v)
    kappa = vertex_connectivity(H)
    if kappa < 2:
        cut = enumerate_cuts(H, 1)[0]
        return _reject(f"cut vertex {cut.vertices[0]}", certificate=cut)
    coloring = bipartition(H)
    if isinstance(coloring, TwoColoring):
        return _reject("product disconnected: factor is bipartite", certificate=coloring)
    E = test_planarity(H)
    if isinstance(E, PlanarEmbedding):
        if kappa == 2:
            return check_theorem2(H, E)
        return check_theorem1(H, E)
    return check_theorem4(H, setup=setup)


def _meet_in_vertex_or_edge(f: FaceWalk, g: FaceWalk) -> bool:
    shared = f.vertices & g.vertices
    if len(shared) == 1:
        return True
    if len(shared) == 2:
        e = frozenset(shared)
        return e in f.edge_set() and e in g.edge_set()
    return False


def _condition3(O: Sequence[FaceWalk]) -> Optional[Tuple[int, FaceWalk]]:
    for i, f in enumerate(O):
        others = O[:i] + O[i + 1:]
        if not all(f.vertices & g.vertices for g in others):
            continue
        common = frozenset.intersection(*(g.vertices for g in others)) - f.vertices
        if common:
            return min(common), f
    return None


def theorem1_conditions(H: Graph, E: PlanarEmbedding) -> List[OddFaceCertificate]:
    """Every odd-face condition that holds for the embedding, in C1, C2, C3 order."""
    O = tuple(odd_faces(E))
    fired = []
    if len(O) == 2 and not O[0].vertices & O[1].vertices:
        fired.append(OddFaceCertificate(condition="C1", faces=O))
    if len(O) == 4:
        pairs_ok = all(_meet_in_vertex_or_edge(f, g) for f, g in combinations(O, 2))
        triples_ok = all(not (f.vertices & g.vertices & h.vertices) for f, g, h in combinations(O, 3))
        if pairs_ok and triples_ok:
            fired.append(OddFaceCertificate(condition="C2", faces=O))
    if len(O) >= 4:
        found = _condition3(O)
        if found is not None:
            u, f = found
            fired.append(OddFaceCertificate(condition="C3", faces=O, apex=u, special_face=f))
    return fired


_CONDITION_BRANCH = {"C1": Branch.THM1_C1, "C2": Branch.THM1_C2, "C3": Branch.THM1_C3}


def check_theorem1(H: Graph, E: PlanarEmbedding) -> Verdict:
    """Planar 3-connected factor: decided by the arrangement of its odd faces."""
    fired = theorem1_conditions(H, E)
    if len(fired) == 1:
        cert = fired[0]
        return Verdict(accepted=True, branch=_CONDITION_BRANCH[cert.condition], certificate=cert)
    if not fired:
        return _reject("Thm1: no condition holds", certificate=tuple(odd_faces(E)))
    return _reject("Thm1: conditions not exclusive", certificate=tuple(fired))


def check_theorem2(H: Graph, E: PlanarEmbedding) -> Verdict:
    """Planar factor of connectivity 2: odd faces avoiding the 2-cuts and the cut components."""
    cuts = enumerate_cuts(H, 2)
    cut_free = tuple(
        f for f in odd_faces(E) if not any(face_contains_vertices(f, c.vertices) for c in cuts)
    )
    if len(cut_free) != 2:
        return _reject(f"Thm2: {len(cut_free)} odd regions contain no 2-cut", certificate=cut_free)
    witnesses = []
    for cut in cuts:
        if len(cut.components) != 2:
            return _reject(
                f"Thm2: 2-cut {cut.vertices} leaves {len(cut.components)} components",
                certificate=CutWitness(cut=cut.vertices, components=cut.components),
            )
        walks = []
        for comp in cut.components:
            sub, mapping = induced_subgraph(H, comp)
            result = bipartition(sub)
            if isinstance(result, TwoColoring):
                return _reject(
                    f"Thm2: 2-cut {cut.vertices} leaves bipartite component {comp}",
                    certificate=CutWitness(cut=cut.vertices, components=cut.components),
                )
            back = {i: v for v, i in mapping.items()}
            walks.append(tuple(back[x] for x in result.odd_walk))
        witnesses.append(CutWitness(cut=cut.vertices, components=cut.components, odd_walks=tuple(walks)))
    return Verdict(accepted=True, branch=Branch.THM2,
                   certificate=TwoCutCertificate(cut_free_faces=cut_free, cuts=tuple(witnesses)))


def _chain(tag: OrderTag, pos: Dict[int, int], first: Edge,
           others: Sequence[Edge]) -> Optional[Tuple[Edge, ...]]:
    a1, b1 = first
    split = pos[b1]
    oriented = []
    if tag is OrderTag.ord2:
        # a's in [0, split), b's in [split, L); both sequences non-decreasing
        for u, v in others:
            if pos[u] < split <= pos[v]:
                oriented.append((u, v))
            elif pos[v] < split <= pos[u]:
                oriented.append((v, u))
            else:
                return None
        oriented.sort(key=lambda c: (pos[c[0]], pos[c[1]]))
        bs = [pos[b] for _, b in oriented]
        if any(x > y for x, y in zip(bs, bs[1:])):
            return None
        am, bm = oriented[-1]
        if pos[am] == 0 or pos[bm] == split:
            return None
    else:
        # nested chords inside [0, split]
        for u, v in others:
            if pos[u] > split or pos[v] > split:
                return None
            oriented.append((u, v) if pos[u] < pos[v] else (v, u))
        oriented.sort(key=lambda c: (pos[c[0]], -pos[c[1]]))
        bs = [pos[b] for _, b in oriented]
        if any(x < y for x, y in zip(bs, bs[1:])):
            return None
        am, bm = oriented[-1]
        if pos[am] == 0 or pos[bm] == split:
            return None
    return (first,) + tuple(oriented)


def _forbidden_arcs(tag: OrderTag, rot: Walk, pos: Dict[int, int],
                    labeled: Sequence[Edge]) -> Tuple[Walk, Walk]:
    (a1, b1), (am, bm) = labeled[0], labeled[-1]
    if tag is OrderTag.ord2:
        return rot[pos[bm]:] + rot[:1], rot[pos[am]:pos[b1] + 1]
    return rot[pos[b1]:] + rot[:1], rot[pos[am]:pos[bm] + 1]


def match_region_order(boundary: Sequence[int], chords: Sequence[Sequence[int]],
                       cuts: Sequence[Sequence[int]] = ()) -> Optional[OrderMatch]:
    """Find a labeling of `chords` whose endpoints run around `boundary` in a permitted order.

    The boundary must be a simple cycle holding every chord endpoint and every
    cut. Rotations, reflections and every choice of first chord and of its
    orientation are tried; ord1 before ord2. A labeling only counts if no cut
    lies inside either closed forbidden arc.
    """
    chords = [tuple(c) for c in chords]
    cuts = [tuple(c) for c in cuts]
    boundary = tuple(boundary)
    L = len(boundary)
    on = set(boundary)
    if len(chords) < 2 or len(on) != L:
        return None
    if any(u not in on or v not in on for u, v in chords):
        return None
    if any(not set(c) <= on for c in cuts):
        return None
    for seq in (boundary, boundary[::-1]):
        index = {v: i for i, v in enumerate(seq)}
        for k, first in enumerate(chords):
            others = chords[:k] + chords[k + 1:]
            for a1, b1 in (first, first[::-1]):
                start = index[a1]
                rot = seq[start:] + seq[:start]
                pos = {v: i for i, v in enumerate(rot)}
                for tag in (OrderTag.ord1, OrderTag.ord2):
                    labeled = _chain(tag, pos, (a1, b1), others)
                    if labeled is None:
                        continue
                    arcs = _forbidden_arcs(tag, rot, pos, labeled)
                    transcript = tuple(
                        CutCheck(cut=c, on_region=True,
                                 forbidden=set(c) <= set(arcs[0]) or set(c) <= set(arcs[1]))
                        for c in cuts
                    )
                    if not any(check.forbidden for check in transcript):
                        return OrderMatch(order=tag, chords=labeled, arcs=arcs, transcript=transcript)
    return None


_DELEGATE = object()


def _candidate_regions(Hp: Graph, E: PlanarEmbedding, kappa: int,
                       required: set) -> Iterator[Tuple[Walk, PlanarEmbedding]]:
    if kappa >= 3:
        for f in faces(E):
            if required <= f.vertices:
                yield f.boundary, E
    else:
        yield from facial_cycles(Hp, required)


def _try_coloring(H: Graph, color: Tuple[int, ...], removed: List[Edge],
                  setup: PolyprodSetup):
    Hp = delete_edges(H, removed)
    kappa = vertex_connectivity(Hp)
    if kappa < 2:
        return None
    cuts: List[Tuple[int, ...]] = []
    if kappa == 2:
        cut_sets = enumerate_cuts(Hp, 2)
        if any(len(c.components) != 2 for c in cut_sets):
            return None
        cuts = [c.vertices for c in cut_sets]
    E = test_planarity(Hp)
    if not isinstance(E, PlanarEmbedding):
        return None
    if kappa == 2 and Hp.n > setup.embed_cap:
        return _DELEGATE
    required = {v for e in removed for v in e} | {v for c in cuts for v in c}
    for boundary, emb in _candidate_regions(Hp, E, kappa, required):
        match = match_region_order(boundary, removed, cuts)
        if match is None:
            continue
        region = face_of(emb, boundary) or FaceWalk(boundary=boundary)
        return SubgraphCertificate(
            coloring=TwoColoring(color=color), removed=match.chords, embedding=emb,
            region=region, order=match.order, cut_transcript=match.transcript,
        )
    return None


def _coloring_bits(start: int, stop: int, n: int) -> ColoringBits:
    # vertex 0 always gets colour 0: one representative per colour swap
    idx = np.arange(start, stop, dtype=np.int64)
    return ((idx[:, None] << 1) >> np.arange(n, dtype=np.int64)[None, :]) & 1


def check_theorem4(H: Graph, setup: Optional[PolyprodSetup] = None) -> Verdict:
    """Search every 2-coloring of H for a planar bipartite spanning subgraph plus chords on one region.

    The monochromatic edges of a coloring are the chords; what remains must be
    planar and 3-connected or semi-hyper-2-connected, and the chords must sit
    on one of its regions in a permitted order.
    """
    setup = setup if setup is not None else default_setup()
    if not is_connected(H) or H.n < 4:
        return _reject("Thm4: factor must be connected with at least 4 vertices")
    if min_degree(H) < 3:
        return _reject(f"Thm4: min degree {min_degree(H)} < 3")
    if not is_k_connected(H, 2):
        return _reject("Thm4: factor is not 2-connected")

    n, edges = H.n, H.edges()
    eu = np.array([u for u, _ in edges], dtype=np.int64)
    ev = np.array([v for _, v in edges], dtype=np.int64)
    incidence = np.zeros((len(edges), n), dtype=np.int64)
    incidence[np.arange(len(edges)), eu] = 1
    incidence[np.arange(len(edges)), ev] = 1
    degrees = np.array([H.degree(v) for v in range(n)], dtype=np.int64)

    delegated = False
    total = 1 << (n - 1)
    for start in range(0, total, _BATCH):
        bits = _coloring_bits(start, min(total, start + _BATCH), n)
        mono: EdgeMask = bits[:, eu] == bits[:, ev]
        count = mono.sum(axis=1)
        remaining = degrees[None, :] - mono.astype(np.int64) @ incidence
        # a 2-connected spanning subgraph keeps at least n edges and degree 2 everywhere
        viable = (count >= 2) & (len(edges) - count >= n) & (remaining.min(axis=1) >= 2)
        for row in np.flatnonzero(viable):
            color = tuple(int(c) for c in bits[row])
            removed = [e for e, flag in zip(edges, mono[row]) if flag]
            result = _try_coloring(H, color, removed, setup)
            if result is _DELEGATE:
                logger.info("coloring %d: semi-hyper subgraph above embed_cap=%d", start + row, setup.embed_cap)
                delegated = True
            elif result is not None:
                logger.debug("coloring %d accepted with %s", start + row, result.order.value)
                branch = Branch.THM4_ORD1 if result.order is OrderTag.ord1 else Branch.THM4_ORD2
                return Verdict(accepted=True, branch=branch, certificate=result)
    if delegated:
        oracle = is_3_polytope(kronecker_double(H))
        return Verdict(accepted=oracle, branch=Branch.DELEGATED,
                       reason=f"embedding cap {setup.embed_cap} exceeded; oracle decided")
    return _reject("Thm4: no 2-coloring yields a qualifying subgraph")


def verify_theorem4_certificate(H: Graph, cert: SubgraphCertificate) -> bool:
    """Replay a subgraph certificate against H mechanically."""
    color = cert.coloring.color
    if len(color) != H.n:
        return False
    mono = {frozenset(e) for e in H.edges() if color[e[0]] == color[e[1]]}
    if mono != {frozenset(e) for e in cert.removed}:
        return False
    try:
        Hp = delete_edges(H, cert.removed)
    except InvalidGraphError:
        return False
    if cert.embedding.graph != Hp or not is_valid_embedding(cert.embedding):
        return False
    if face_of(cert.embedding, cert.region.boundary) is None:
        return False
    kappa = vertex_connectivity(Hp)
    if kappa < 2:
        return False
    cuts = []
    if kappa == 2:
        cut_sets = enumerate_cuts(Hp, 2)
        if any(len(c.components) != 2 for c in cut_sets):
            return False
        cuts = [c.vertices for c in cut_sets]
    return match_region_order(cert.region.boundary, cert.removed, cuts) is not None


def _is_k2(G: Graph) -> bool:
    return G.n == 2 and G.m == 1


def classify_product(H: Graph, J: Graph, kind: Union[ProductKind, str],
                     setup: Optional[PolyprodSetup] = None) -> Verdict:
    """Decide 3-polytopality of a product; the factor with fewer vertices plays J."""
    if isinstance(kind, str):
        kind = ProductKind.from_name(kind)
    if H.n < J.n:
        H, J = J, H
    if kind is ProductKind.kronecker:
        if not _is_k2(J):
            return _reject("kronecker: smaller factor is not K2", certificate=J)
        return classify_kronecker_factor(H, setup=setup)
    if J.n == 1:
        # K1 is a unit for both products: the product is H itself
        return Verdict(accepted=is_3_polytope(H), branch=Branch.ORACLE, reason="trivial factor")
    if kind is ProductKind.cartesian:
        if _is_k2(J) and is_outerplanar_2connected(H):
            return Verdict(accepted=True, branch=Branch.CART, reason="K2 with outerplanar 2-connected factor")
        if (is_path(H) and is_cycle(J)) or (is_cycle(H) and is_path(J)):
            return Verdict(accepted=True, branch=Branch.CART, reason="path with cycle")
        return _reject("cartesian: not K2 with outerplanar 2-connected, nor path with cycle")
    if (_is_k2(H) and _is_k2(J)) or (is_path(H) and is_path(J) and H.n == J.n == 3):
        return Verdict(accepted=True, branch=Branch.STRONG, reason=f"P{H.n} with P{J.n}")
    return _reject("strong: only K2 with K2 and P3 with P3")


def vertex_deletion_witness(H: Graph) -> Optional[int]:
    """A vertex v with H - v bipartite, if any; none exists when H x K2 is 3-connected."""
    for v in range(H.n):
        if is_bipartite(delete_vertex(H, v)[0]):
            return v
    return None


def product_invariant_violations(H: Graph, P: Optional[Graph] = None) -> List[str]:
    """Degree and face-shape facts every 3-polytopal H x K2 must satisfy."""
    P = P if P is not None else kronecker_double(H)
    problems = []
    if min_degree(P) != 3 or min_degree(H) != 3:
        problems.append(f"min degree of factor/product is {min_degree(H)}/{min_degree(P)}, expected 3/3")
    if degree_count(P, 3) < 8:
        problems.append(f"product has {degree_count(P, 3)} < 8 vertices of degree 3")
    if degree_count(H, 3) < 4:
        problems.append(f"factor has {degree_count(H, 3)} < 4 vertices of degree 3")
    if degree_count(H, 3) == 4:
        E = test_planarity(P)
        if isinstance(E, PlanarEmbedding) and any(f.length != 4 for f in faces(E)):
            problems.append("factor has exactly 4 degree-3 vertices but product is no quadrangulation")
    v = vertex_deletion_witness(H)
    if v is not None:
        problems.append(f"factor minus vertex {v} is bipartite")
    return problems


def _fmt_walk(walk: Sequence[int]) -> str:
    return " ".join(str(v) for v in walk)


def format_verdict(verdict: Verdict) -> str:
    """Line-oriented text form: headline, then one line per certificate field."""
    if verdict.branch is Branch.DELEGATED:
        lines = [f"{'ACCEPT' if verdict.accepted else 'REJECT'} {verdict.branch.value} ({verdict.reason})"]
    elif verdict.accepted:
        lines = [f"ACCEPT {verdict.branch.value}"]
    else:
        lines = [f"REJECT ({verdict.reason})" if verdict.reason else f"REJECT ({verdict.branch.value})"]
    cert = verdict.certificate
    if isinstance(cert, OddFaceCertificate):
        lines.append(f"condition: {cert.condition}")
        lines.extend(f"odd face: {_fmt_walk(f.boundary)}" for f in cert.faces)
        if cert.apex is not None:
            lines.append(f"apex: {cert.apex}")
            lines.append(f"avoiding face: {_fmt_walk(cert.special_face.boundary)}")
    elif isinstance(cert, TwoCutCertificate):
        lines.extend(f"cut-free odd face: {_fmt_walk(f.boundary)}" for f in cert.cut_free_faces)
        for w in cert.cuts:
            comps = " | ".join(_fmt_walk(c) for c in w.components)
            lines.append(f"cut {w.cut[0]} {w.cut[1]}: components {comps}")
            lines.extend(f"  odd walk: {_fmt_walk(walk)}" for walk in w.odd_walks)
    elif isinstance(cert, SubgraphCertificate):
        lines.append(f"coloring: {''.join(str(c) for c in cert.coloring.color)}")
        lines.append("removed: " + " ".join(f"{a}-{b}" for a, b in cert.removed))
        lines.append(f"region: {_fmt_walk(cert.region.boundary)}")
        lines.append(f"order: {cert.order.value}")
        for check in cert.cut_transcript:
            state = "forbidden" if check.forbidden else "ok"
            lines.append(f"cut {check.cut[0]} {check.cut[1]}: {state}")
    return "\n".join(lines)
