import logging
from typing import Iterable, Iterator, List, Tuple

import networkx as nx

from polyprod.polyprod_types import Graph, GraphInputError, InvalidGraphError
from polyprod.src.graph_core import from_edge_list, from_networkx, to_networkx

logger = logging.getLogger(__name__)

GRAPH6_HEADER = ">>graph6<<"
SPARSE6_HEADER = ">>sparse6<<"

FORMATS = ("graph6", "sparse6", "edgelist")
EXTENSIONS = {".g6": "graph6", ".s6": "sparse6", ".el": "edgelist"}


def _strip_header(text: str, header: str) -> str:
    s = text.strip()
    if s.startswith(header):
        s = s[len(header):].strip()
    return s


def decode_graph6(text: str, line_no: int = 0) -> Graph:
    """One graph6 record; a `:`-prefixed sparse6 record in the same stream is decoded as sparse6."""
    s = _strip_header(text, GRAPH6_HEADER)
    if s.startswith(":") or s.startswith(SPARSE6_HEADER):
        return decode_sparse6(s, line_no)
    try:
        return from_networkx(nx.from_graph6_bytes(s.encode("ascii")))
    except (nx.NetworkXError, UnicodeEncodeError, ValueError) as exc:
        raise GraphInputError(f"bad graph6 record {s!r}: {exc}", line_no)


def decode_sparse6(text: str, line_no: int = 0) -> Graph:
    s = _strip_header(text, SPARSE6_HEADER)
    if not s.startswith(":"):
        raise GraphInputError(f"sparse6 record must start with ':', got {s!r}", line_no)
    try:
        # sparse6 may carry loops and parallel edges; collapse to the simple graph
        G = nx.Graph(nx.from_sparse6_bytes(s.encode("ascii")))
    except (nx.NetworkXError, UnicodeEncodeError, ValueError) as exc:
        raise GraphInputError(f"bad sparse6 record {s!r}: {exc}", line_no)
    G.remove_edges_from(list(nx.selfloop_edges(G)))
    return from_networkx(G)


def encode_graph6(G: Graph) -> str:
    return nx.to_graph6_bytes(to_networkx(G), header=False).decode("ascii").strip()


def graph6_records(lines: Iterable[str]) -> Iterator[Tuple[int, str]]:
    """Non-blank records with their 1-based line numbers."""
    for line_no, line in enumerate(lines, start=1):
        s = line.strip()
        if s:
            yield line_no, s


def edgelist_blocks(lines: Iterable[str]) -> Iterator[Tuple[int, List[str]]]:
    """Blank-line separated blocks; yields (first line number, body lines)."""
    block: List[str] = []
    start = 0
    for line_no, line in enumerate(lines, start=1):
        s = line.strip()
        if s.startswith("#") and not any(t.startswith("n=") for t in s[1:].split()):
            continue
        if s == "":
            if block:
                yield start, block
                block = []
            continue
        if not block:
            start = line_no
        block.append(line)
    if block:
        yield start, block


def decode_edgelist(block: List[str], start: int = 1) -> Graph:
    """`u v` lines; `#` starts a comment; `# n=K` fixes the vertex count.

    Without the directive the vertex count is one more than the largest index.
    """
    n = None
    edges = []
    for offset, line in enumerate(block):
        line_no = start + offset
        body, _, comment = line.partition("#")
        for token in comment.split():
            if token.startswith("n="):
                try:
                    n = int(token[2:])
                except ValueError:
                    raise GraphInputError(f"bad vertex count directive {token!r}", line_no)
        fields = body.split()
        if not fields:
            continue
        if len(fields) != 2:
            raise GraphInputError(f"expected 'u v', got {body.strip()!r}", line_no)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphInputError(f"vertex ids must be integers, got {body.strip()!r}", line_no)
        if u < 0 or v < 0:
            raise GraphInputError(f"vertex ids must be non-negative, got {body.strip()!r}", line_no)
        edges.append((u, v))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    try:
        return from_edge_list(n, edges)
    except InvalidGraphError as exc:
        raise GraphInputError(str(exc), start)


def format_edgelist(G: Graph) -> str:
    lines = [f"# n={G.n} m={G.m}"]
    lines.extend(f"{u} {v}" for u, v in G.edges())
    return "\n".join(lines)


def sniff_format(path: str) -> str:
    for ext, fmt in EXTENSIONS.items():
        if path.endswith(ext):
            return fmt
    raise GraphInputError(f"cannot tell the format of {path!r}; expected one of {sorted(EXTENSIONS)}")
