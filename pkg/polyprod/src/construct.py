import logging
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from polyprod.polyprod_setup import PolyprodSetup, default_setup
from polyprod.polyprod_types import (
    AugmentationPlan, EmbeddingCapExceeded, Edge, FaceWalk, Graph, NotBipartite, PlanarEmbedding,
    PlanInvariantError, PlanPreconditionError, Walk,
)
from polyprod.src.classify import is_3_polytope, kronecker_double, match_region_order
from polyprod.src.graph_core import add_edges, bipartition, enumerate_cuts, min_degree, vertex_connectivity
from polyprod.src.planar_embed import face_of, faces, facial_cycles, test_planarity

logger = logging.getLogger(__name__)


def _base_structure(base: Graph):
    E = test_planarity(base)
    if not isinstance(E, PlanarEmbedding):
        raise PlanPreconditionError("base not planar")
    coloring = bipartition(base)
    if isinstance(coloring, NotBipartite):
        raise PlanPreconditionError("base not bipartite")
    kappa = vertex_connectivity(base)
    if kappa >= 3:
        return coloring.color, E, []
    cut_sets = enumerate_cuts(base, 2) if kappa == 2 else []
    if kappa < 2 or any(len(c.components) != 2 for c in cut_sets):
        raise PlanPreconditionError("base not 3-connected or semi-hyper-2-connected")
    return coloring.color, E, [c.vertices for c in cut_sets]


def _regions(base: Graph, E: PlanarEmbedding, cuts: List[Tuple[int, ...]],
             setup: PolyprodSetup) -> Iterator[Tuple[Walk, PlanarEmbedding]]:
    if not cuts:
        for f in faces(E):
            yield f.boundary, E
        return
    if base.n > setup.embed_cap:
        raise EmbeddingCapExceeded(
            f"Region search on a semi-hyper-2-connected base capped at {setup.embed_cap} vertices"
        )
    # only regions holding every 2-cut qualify, across all embeddings
    yield from facial_cycles(base, {v for c in cuts for v in c})


def enumerate_plans(base: Graph, max_m: Optional[int] = None,
                    setup: Optional[PolyprodSetup] = None) -> Iterator[AugmentationPlan]:
    """Every admissible chord set with 2 <= m <= max_m, once per chord set.

    Raises:
        PlanPreconditionError: base is not planar, not bipartite, or neither
            3-connected nor semi-hyper-2-connected.
    """
    setup = setup if setup is not None else default_setup()
    color, E, cuts = _base_structure(base)
    degrees = [base.degree(v) for v in range(base.n)]
    seen = set()
    for boundary, emb in _regions(base, E, cuts, setup):
        candidates = [
            (u, v) for u, v in combinations(sorted(boundary), 2)
            if color[u] == color[v] and not base.has_edge(u, v)
        ]
        top = len(candidates) if max_m is None else min(max_m, len(candidates))
        logger.debug("region %s: %d candidate chords", boundary, len(candidates))
        for m in range(2, top + 1):
            for chords in combinations(candidates, m):
                key = frozenset(chords)
                if key in seen:
                    continue
                match = match_region_order(boundary, chords, cuts)
                if match is None:
                    continue
                if _min_degree_with(degrees, chords) < 3:
                    continue
                seen.add(key)
                region = face_of(emb, boundary) or FaceWalk(boundary=tuple(boundary))
                yield AugmentationPlan(base=base, embedding=emb, region=region,
                                       chords=match.chords, order_tag=match.order)


def _min_degree_with(degrees: Sequence[int], chords: Sequence[Edge]) -> int:
    bumped = list(degrees)
    for u, v in chords:
        bumped[u] += 1
        bumped[v] += 1
    return min(bumped)


def apply_plan(plan: AugmentationPlan, verify: bool = False) -> Graph:
    """H = base + chords, after re-checking every plan invariant.

    Args:
        plan: the augmentation to apply.
        verify: also run the oracle on H x K2.
    """
    base = plan.base
    coloring = bipartition(base)
    if isinstance(coloring, NotBipartite):
        raise PlanInvariantError("base not bipartite")
    if len(plan.chords) < 2:
        raise PlanInvariantError(f"need at least 2 chords, got {len(plan.chords)}")
    on = plan.region.vertices
    for a, b in plan.chords:
        if a not in on or b not in on:
            raise PlanInvariantError(f"chord {a}-{b}: endpoints not on one region")
        if coloring.color[a] != coloring.color[b]:
            raise PlanInvariantError(f"chord {a}-{b} is not monochromatic")
        if base.has_edge(a, b):
            raise PlanInvariantError(f"chord {a}-{b} already an edge of the base")
    if plan.embedding.graph != base or face_of(plan.embedding, plan.region.boundary) is None:
        raise PlanInvariantError("region is not a face of the plan's embedding of the base")
    kappa = vertex_connectivity(base)
    cut_sets = enumerate_cuts(base, 2) if kappa == 2 else []
    if kappa < 2 or any(len(c.components) != 2 for c in cut_sets):
        raise PlanInvariantError("base not 3-connected or semi-hyper-2-connected")
    if match_region_order(plan.region.boundary, plan.chords, [c.vertices for c in cut_sets]) is None:
        raise PlanInvariantError("chord endpoints violate the region order or a forbidden arc")
    H = add_edges(base, plan.chords)
    if min_degree(H) < 3:
        raise PlanInvariantError(f"augmented graph has min degree {min_degree(H)} < 3")
    if verify and not is_3_polytope(kronecker_double(H)):
        raise PlanInvariantError("augmented graph fails the 3-polytope postcondition")
    return H


def sample_plans(base: Graph, max_m: Optional[int], count: int, seed: int,
                 setup: Optional[PolyprodSetup] = None) -> List[AugmentationPlan]:
    plans = list(enumerate_plans(base, max_m, setup=setup))
    if count >= len(plans):
        return plans
    rng = np.random.default_rng(seed)
    picks = np.sort(rng.choice(len(plans), size=count, replace=False))
    return [plans[int(i)] for i in picks]


def format_plan(plan: AugmentationPlan) -> str:
    return "\n".join([
        "base: " + " ".join(f"{u}-{v}" for u, v in plan.base.edges()),
        "region: " + " ".join(str(v) for v in plan.region.boundary),
        "chords: " + " ".join(f"{a}-{b}" for a, b in plan.chords),
        f"order: {plan.order_tag.value}",
    ])
