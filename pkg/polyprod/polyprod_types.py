from typing import Any, Dict, NamedTuple, Optional, Tuple
from enum import Enum, IntEnum


Edge = Tuple[int, int]
Walk = Tuple[int, ...]


class Graph(NamedTuple):
    """Undirected simple graph on vertices 0..n-1.

    `adj[v]` is the sorted tuple of neighbors of v. Build instances through
    `graph_core.from_edge_list` so the symmetry invariant holds.
    """
    n: int
    adj: Tuple[Tuple[int, ...], ...]

    @property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj) // 2

    def edges(self) -> Tuple[Edge, ...]:
        return tuple((u, v) for u in range(self.n) for v in self.adj[u] if u < v)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])


class TwoColoring(NamedTuple):
    color: Tuple[int, ...]


class NotBipartite(NamedTuple):
    # closed walk v0, v1, ..., vk with v0 == vk and k odd
    odd_walk: Walk


class CutSet(NamedTuple):
    vertices: Tuple[int, ...]
    components: Tuple[Tuple[int, ...], ...]


class CanonicalForm(NamedTuple):
    n: int
    edges: Tuple[Edge, ...]


class PlanarEmbedding(NamedTuple):
    graph: Graph
    rotation: Tuple[Tuple[int, ...], ...]


class FaceWalk(NamedTuple):
    boundary: Walk

    @property
    def length(self) -> int:
        return len(self.boundary)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.boundary)

    def edge_set(self) -> frozenset:
        k = len(self.boundary)
        return frozenset(
            frozenset((self.boundary[i], self.boundary[(i + 1) % k])) for i in range(k)
        )


class NonPlanar(NamedTuple):
    witness: Tuple[Edge, ...]
    kind: str  # "K5" or "K3,3" (subdivision)


class ProductKind(IntEnum):
    kronecker = 0
    cartesian = 1
    strong = 2

    @classmethod
    def from_name(cls, name: str) -> "ProductKind":
        try:
            return cls[name.strip().lower()]
        except KeyError:
            raise FamilyError(f"Unknown product kind: {name!r}. Expected one of {[k.name for k in cls]}")


class FamilySpec(NamedTuple):
    name: str
    params: Tuple[int, ...] = ()


class OrderTag(Enum):
    ord1 = "ord1"
    ord2 = "ord2"


class Branch(Enum):
    ORACLE = "Oracle"
    THM1_C1 = "Thm1-C1"
    THM1_C2 = "Thm1-C2"
    THM1_C3 = "Thm1-C3"
    THM2 = "Thm2"
    THM4_ORD1 = "Thm4-ord1"
    THM4_ORD2 = "Thm4-ord2"
    CART = "Cart"
    STRONG = "Strong"
    REJECT = "Reject"
    DELEGATED = "Delegated"


class Verdict(NamedTuple):
    accepted: bool
    branch: Branch
    reason: str = ""
    certificate: Any = None


class OddFaceCertificate(NamedTuple):
    condition: str                     # "C1" | "C2" | "C3"
    faces: Tuple[FaceWalk, ...]        # the odd faces O
    apex: Optional[int] = None         # u of C3
    special_face: Optional[FaceWalk] = None  # f of C3


class CutWitness(NamedTuple):
    cut: Edge
    components: Tuple[Tuple[int, ...], ...]
    odd_walks: Tuple[Walk, ...] = ()   # one odd closed walk per component, when non-bipartite


class TwoCutCertificate(NamedTuple):
    cut_free_faces: Tuple[FaceWalk, ...]
    cuts: Tuple[CutWitness, ...]


class CutCheck(NamedTuple):
    cut: Edge
    on_region: bool
    forbidden: bool


class OrderMatch(NamedTuple):
    order: OrderTag
    chords: Tuple[Edge, ...]           # labeled (a_i, b_i) in order
    arcs: Tuple[Walk, Walk]            # the two forbidden closed arcs
    transcript: Tuple[CutCheck, ...]


class SubgraphCertificate(NamedTuple):
    coloring: TwoColoring
    removed: Tuple[Edge, ...]          # E' labeled a_1 b_1, ..., a_m b_m
    embedding: PlanarEmbedding         # of H' = H - E'
    region: FaceWalk
    order: OrderTag
    cut_transcript: Tuple[CutCheck, ...]


class AugmentationPlan(NamedTuple):
    base: Graph
    embedding: PlanarEmbedding
    region: FaceWalk
    chords: Tuple[Edge, ...]
    order_tag: OrderTag


class CensusRecord(NamedTuple):
    id: str
    n: int
    m: int
    kappa: int
    planar: bool
    branch: str
    accepted: bool
    oracle: bool
    agree: bool
    runtime_us: int


class CensusReport(NamedTuple):
    records: Tuple[CensusRecord, ...]
    summary: Dict[str, Any]


class PolyprodError(ValueError):
    pass


class InvalidGraphError(PolyprodError):
    pass


class GraphInputError(PolyprodError):
    def __init__(self, message: str, line_no: int = 0):
        super().__init__(f"line {line_no}: {message}" if line_no else message)
        self.line_no = line_no


class FamilyError(PolyprodError):
    pass


class EmbeddingCapExceeded(PolyprodError):
    pass


class NonPlanarError(PolyprodError):
    pass


class PlanPreconditionError(PolyprodError):
    pass


class PlanInvariantError(PolyprodError):
    pass


class ConfigError(PolyprodError):
    pass
