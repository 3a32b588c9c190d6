import logging
from typing import List, Optional, Sequence

import jax.numpy as jnp
import networkx as nx
import numpy as np

from polyprod.polyprod_types import FaceWalk, PlanarEmbedding
from polyprod.src.graph_core import to_networkx
from polyprod.src.planar_embed import faces
from polyprod.src.utils.jax_types import Coords

logger = logging.getLogger(__name__)


def outer_face(E: PlanarEmbedding) -> FaceWalk:
    """Longest face, first in trace order on ties."""
    return max(faces(E), key=lambda f: f.length)


def _distinct(walk: Sequence[int]) -> List[int]:
    seen, out = set(), []
    for v in walk:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def polygon(k: int, radius: float = 1.0) -> Coords:
    angles = 2.0 * jnp.pi * jnp.arange(k) / k + jnp.pi / 2
    return radius * jnp.stack([jnp.cos(angles), jnp.sin(angles)], axis=1)


def tutte_layout(E: PlanarEmbedding, outer: Optional[FaceWalk] = None) -> Coords:
    """Barycentric drawing: outer face pinned to a regular polygon, every other
    vertex at the average of its neighbors.

    Args:
        E: planar embedding; 3-connected graphs give a crossing-free convex drawing.
        outer: face to pin, defaults to `outer_face(E)`.

    Returns:
        (n, 2) numpy array of positions.
    """
    G = E.graph
    if G.n == 0:
        return np.zeros((0, 2))
    ring = _distinct((outer or outer_face(E)).boundary) if G.m else [0]
    pinned = {v: i for i, v in enumerate(ring)}
    inner = [v for v in range(G.n) if v not in pinned]
    pos = np.zeros((G.n, 2))
    pos[ring] = np.asarray(polygon(len(ring))) if len(ring) > 1 else 0.0
    if not inner:
        return pos
    index = {v: i for i, v in enumerate(inner)}
    L = np.zeros((len(inner), len(inner)))
    rhs = np.zeros((len(inner), 2))
    for v in inner:
        i = index[v]
        L[i, i] = G.degree(v)
        for w in G.adj[v]:
            if w in index:
                L[i, index[w]] -= 1.0
            else:
                rhs[i] += pos[w]
    solved = np.asarray(jnp.linalg.solve(jnp.asarray(L), jnp.asarray(rhs)))
    if not np.all(np.isfinite(solved)):
        # singular system: some part of G never reaches the pinned face
        logger.warning("barycentric system singular, using networkx planar layout")
        layout = nx.planar_layout(to_networkx(G))
        return np.array([layout[v] for v in range(G.n)])
    pos[inner] = solved
    return pos
