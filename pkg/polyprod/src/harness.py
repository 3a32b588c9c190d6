import hashlib
import logging
import time
from collections import Counter
from multiprocessing import Pool
from typing import IO, Iterable, Iterator, List, Optional, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd
import pyarrow as pa
import pyarrow.parquet as pq

from polyprod.polyprod_setup import PolyprodSetup, default_setup
from polyprod.polyprod_types import (
    Branch, CensusRecord, CensusReport, Graph, GraphInputError, InvalidGraphError, NonPlanarError,
    PlanarEmbedding, ProductKind,
)
from polyprod.src.classify import (
    classify_kronecker_factor, classify_product, is_3_polytope, kronecker_double,
    product_invariant_violations,
)
from polyprod.src.graph_core import canonical_form, min_degree, vertex_connectivity
from polyprod.src.planar_embed import is_planar, is_valid_embedding, test_planarity
from polyprod.src.products import product
from polyprod.src.utils.graph_io import (
    FORMATS, decode_edgelist, decode_graph6, decode_sparse6, edgelist_blocks, graph6_records,
)
from polyprod.src.utils.layout_tools import outer_face, tutte_layout

logger = logging.getLogger(__name__)

MODES = ("kronecker-factor", "product")
CSV_COLUMNS = ["id", "n", "m", "kappa", "planar", "branch", "accepted", "oracle", "agree"]


def read_graphs(stream: Iterable[str], fmt: str = "graph6", lenient: bool = False) -> Iterator[Graph]:
    """Decode a graph6, sparse6 or edge-list stream.

    Raises:
        GraphInputError: a malformed record, unless `lenient`, in which case the
            record is logged and skipped.
    """
    if fmt not in FORMATS:
        raise GraphInputError(f"unknown input format {fmt!r}; expected one of {list(FORMATS)}")
    if fmt == "edgelist":
        records = ((start, block, decode_edgelist) for start, block in edgelist_blocks(stream))
    else:
        decode = decode_graph6 if fmt == "graph6" else decode_sparse6
        records = ((line_no, s, decode) for line_no, s in graph6_records(stream))
    for line_no, record, decode in records:
        try:
            G = decode(record, line_no)
        except GraphInputError as exc:
            if not lenient:
                raise
            logger.warning("skipping malformed record: %s", exc)
            continue
        yield G


def graph_id(G: Graph, setup: Optional[PolyprodSetup] = None) -> str:
    """First 12 hex digits of the sha1 of the canonical form."""
    setup = setup if setup is not None else default_setup()
    try:
        form = canonical_form(G, max_n=setup.canonical_max_n)
        text = f"{form.n}:" + ",".join(f"{u}-{v}" for u, v in form.edges)
    except InvalidGraphError:
        # past the canonical labeler's cap the id is labeling-dependent
        text = f"raw {G.n}:" + ",".join(f"{u}-{v}" for u, v in G.edges())
    return hashlib.sha1(text.encode("ascii")).hexdigest()[:12]


def _census_task(args) -> Tuple[CensusRecord, List[str]]:
    H, mode, kind, J, setup = args
    start = time.perf_counter_ns()
    if mode == "kronecker-factor":
        verdict = classify_kronecker_factor(H, setup=setup)
        runtime_us = (time.perf_counter_ns() - start) // 1000
        P = kronecker_double(H) if H.n else H
    else:
        verdict = classify_product(H, J, kind, setup=setup)
        runtime_us = (time.perf_counter_ns() - start) // 1000
        P = product(H, J, kind) if H.n else H
    oracle = is_3_polytope(P)
    record = CensusRecord(
        id=graph_id(H, setup),
        n=H.n,
        m=H.m,
        kappa=vertex_connectivity(H),
        planar=is_planar(H),
        branch=verdict.branch.value,
        accepted=verdict.accepted,
        oracle=oracle,
        agree=verdict.accepted == oracle,
        runtime_us=int(runtime_us),
    )
    violations = []
    if mode == "kronecker-factor" and oracle:
        violations = product_invariant_violations(H, P)
    return record, violations


def census(graphs: Iterable[Graph], mode: str = "kronecker-factor",
           kind: Union[ProductKind, str, None] = None, J: Optional[Graph] = None,
           workers: Optional[int] = None, min_degree_filter: Optional[int] = None,
           setup: Optional[PolyprodSetup] = None) -> CensusReport:
    """Theorem verdict against the oracle for every graph, in input order.

    Args:
        graphs: input factors H.
        mode: "kronecker-factor" (H x K2) or "product" (H with the fixed J under `kind`).
        kind: product kind for product mode.
        J: right factor for product mode.
        workers: worker processes; defaults to `setup.workers`.
        min_degree_filter: drop graphs with smaller minimum degree, counted as filtered.
        setup: configuration, module default when None.

    Returns:
        CensusReport whose summary holds counts by branch, disagreements,
        delegated verdicts and invariant violations.
    """
    setup = setup if setup is not None else default_setup()
    if mode not in MODES:
        raise ValueError(f"Unknown census mode {mode!r}; expected one of {list(MODES)}")
    if mode == "product":
        if J is None or kind is None:
            raise ValueError("product mode needs a product kind and a right factor J")
        kind = ProductKind.from_name(kind) if isinstance(kind, str) else kind
    workers = workers if workers is not None else setup.workers

    filtered = 0
    tasks = []
    for H in graphs:
        if min_degree_filter is not None and min_degree(H) < min_degree_filter:
            filtered += 1
            continue
        tasks.append((H, mode, kind, J, setup))

    if workers > 1 and len(tasks) > 1:
        with Pool(processes=workers) as pool:
            results = list(pool.imap(_census_task, tasks, chunksize=16))
    else:
        results = [_census_task(task) for task in tasks]

    records = tuple(record for record, _ in results)
    violations = 0
    for record, problems in results:
        if not record.agree:
            logger.warning("disagreement on %s: theorem %s, oracle %s",
                           record.id, record.accepted, record.oracle)
        for problem in problems:
            logger.warning("invariant violation on %s: %s", record.id, problem)
        violations += len(problems)

    summary = {
        "total": len(records),
        "filtered": filtered,
        "accepted": sum(r.accepted for r in records),
        "disagreements": sum(not r.agree for r in records),
        "delegated": sum(r.branch == Branch.DELEGATED.value for r in records),
        "invariant_violations": violations,
        "by_branch": dict(sorted(Counter(r.branch for r in records).items())),
    }
    if min_degree_filter is not None:
        summary["min_degree"] = min_degree_filter
    logger.info("census: %s", summary)
    return CensusReport(records=records, summary=summary)


def census_frame(report: CensusReport, runtime: bool = False) -> pd.DataFrame:
    columns = CSV_COLUMNS + (["runtime_us"] if runtime else [])
    rows = [r._asdict() for r in report.records]
    return pd.DataFrame(rows, columns=list(CensusRecord._fields))[columns]


def write_census_csv(report: CensusReport, target: Union[str, IO[str]]) -> None:
    """Fixed-schema CSV without the runtime column, so reruns diff clean."""
    census_frame(report).to_csv(target, index=False)


def write_census_parquet(report: CensusReport, path: str) -> None:
    table = pa.Table.from_pandas(census_frame(report, runtime=True), preserve_index=False)
    pq.write_table(table, path)


def format_summary(report: CensusReport) -> str:
    s = report.summary
    lines = [
        f"graphs: {s['total']} (filtered {s['filtered']})",
        f"accepted: {s['accepted']}",
        f"disagreements: {s['disagreements']}",
        f"delegated: {s['delegated']}",
        f"invariant violations: {s['invariant_violations']}",
    ]
    lines.extend(f"branch {branch}: {count}" for branch, count in s["by_branch"].items())
    return "\n".join(lines)


def export_embedding_svg(E: PlanarEmbedding, path: Union[str, IO]) -> None:
    """Straight-line barycentric drawing of E written as SVG."""
    if not is_valid_embedding(E):
        raise NonPlanarError("rotation system is not a planar embedding")
    G = E.graph
    pos = tutte_layout(E, outer_face(E) if G.m else None)
    # fixed ids and no timestamp keep the file byte-stable
    with plt.rc_context({"svg.hashsalt": "polyprod", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(4, 4))
        for u, v in G.edges():
            ax.plot([pos[u, 0], pos[v, 0]], [pos[u, 1], pos[v, 1]], color="0.3", linewidth=1.2, zorder=1)
        ax.scatter(pos[:, 0], pos[:, 1], s=160, color="#52b", zorder=2)
        for v in range(G.n):
            ax.text(pos[v, 0], pos[v, 1], str(v), ha="center", va="center", color="white",
                    fontsize=7, zorder=3)
        ax.set_aspect("equal")
        ax.axis("off")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def render_graph(G: Graph, path: Union[str, IO]) -> PlanarEmbedding:
    E = test_planarity(G)
    if not isinstance(E, PlanarEmbedding):
        raise NonPlanarError(f"graph is not planar: contains a {E.kind} subdivision")
    export_embedding_svg(E, path)
    return E
