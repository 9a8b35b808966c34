"""In-memory undirected concept graph with degree and k-hop queries.

The graph is loaded once from a TSV edge file and is immutable afterwards,
so concurrent readers need no locking. All relation types collapse to a
single undirected "related" edge; duplicate edges and self-loops are
dropped. Node ids are dense integers assigned in sorted-surface order,
which makes the loaded graph canonical for a given edge set regardless of
input line order.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .normalize import DEFAULT_POLICY, NormalizationPolicy

log = logging.getLogger(__name__)


class GraphError(Exception):
    """Unreadable edge file or a file with no valid edges."""


class UnknownConceptError(KeyError):
    """A concept id that is not a node of the graph."""


@dataclass(frozen=True)
class Concept:
    """A normalized word or phrase node; the atomic masking unit."""

    id: int
    surface: str
    word_count: int


@dataclass
class LoadReport:
    """Line accounting for one load_graph call."""

    total_lines: int = 0
    valid_edges: int = 0
    malformed: int = 0
    comments: int = 0
    blank: int = 0
    self_loops: int = 0
    duplicates: int = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "total_lines": self.total_lines,
            "valid_edges": self.valid_edges,
            "malformed": self.malformed,
            "comments": self.comments,
            "blank": self.blank,
            "self_loops": self.self_loops,
            "duplicates": self.duplicates,
        }


class KnowledgeGraph:
    """Undirected adjacency over concepts.

    adjacency[i] is the sorted, deduplicated list of neighbor ids of node i;
    symmetry (b in adj(a) iff a in adj(b)) holds by construction.
    """

    def __init__(
        self,
        nodes: list[Concept],
        adjacency: list[list[int]],
        edge_count: int,
        policy: NormalizationPolicy = DEFAULT_POLICY,
        load_report: LoadReport | None = None,
    ):
        self.nodes = nodes
        self.adjacency = adjacency
        self.edge_count = edge_count
        self.policy = policy
        self.load_report = load_report
        self._surface_to_id = {c.surface: c.id for c in nodes}

    def __len__(self) -> int:
        return len(self.nodes)

    def concept(self, concept_id: int) -> Concept:
        self._check_id(concept_id)
        return self.nodes[concept_id]

    def id_of(self, surface: str) -> int | None:
        """Id for a normalized surface, or None if absent."""
        return self._surface_to_id.get(surface)

    def neighbors(self, concept_id: int) -> list[int]:
        self._check_id(concept_id)
        return self.adjacency[concept_id]

    def degree(self, concept_id: int) -> int:
        """Number of distinct related concepts."""
        self._check_id(concept_id)
        return len(self.adjacency[concept_id])

    def k_hop_neighborhood(self, seeds: Iterable[int], k: int) -> set[int]:
        """All nodes at shortest-path distance 1..k from any seed.

        Seeds themselves are excluded from the result; callers wanting the
        closed neighborhood union the seeds back in.
        """
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        seed_set = set(seeds)
        for s in seed_set:
            self._check_id(s)
        visited = set(seed_set)
        frontier = list(seed_set)
        reached: set[int] = set()
        adjacency = self.adjacency
        for _ in range(k):
            nxt: list[int] = []
            for u in frontier:
                for v in adjacency[u]:
                    if v not in visited:
                        visited.add(v)
                        reached.add(v)
                        nxt.append(v)
            if not nxt:
                break
            frontier = nxt
        return reached

    def digest(self) -> str:
        """sha256 over the canonical node and edge listing."""
        h = hashlib.sha256()
        for c in self.nodes:
            h.update(c.surface.encode("utf-8"))
            h.update(b"\n")
        h.update(b"--edges--\n")
        for a in range(len(self.adjacency)):
            for b in self.adjacency[a]:
                if a < b:
                    h.update(f"{a}\t{b}\n".encode("utf-8"))
        return h.hexdigest()

    def _check_id(self, concept_id: int) -> None:
        if not 0 <= concept_id < len(self.nodes):
            raise UnknownConceptError(concept_id)


def load_graph(
    edge_file: str | Path,
    normalization: NormalizationPolicy = DEFAULT_POLICY,
) -> KnowledgeGraph:
    """Load a TSV edge file (relation, head, tail, extra columns ignored).

    All relations collapse to one undirected edge set. Malformed lines
    (fewer than 3 columns, or a surface that normalizes to nothing) are
    counted and skipped; '#' comment lines, blank lines, self-loops and
    duplicate edges are counted separately. Raises GraphError if the file
    is unreadable or yields zero valid edges.
    """
    path = Path(edge_file)
    report = LoadReport()
    edges: set[tuple[str, str]] = set()
    try:
        fh = path.open(encoding="utf-8")
    except OSError as exc:
        raise GraphError(f"cannot read edge file {path}: {exc}") from exc
    with fh:
        for line in fh:
            report.total_lines += 1
            stripped = line.strip()
            if not stripped:
                report.blank += 1
                continue
            if stripped.startswith("#"):
                report.comments += 1
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) < 3:
                report.malformed += 1
                continue
            head = normalization.normalize_surface(cols[1])
            tail = normalization.normalize_surface(cols[2])
            if not head or not tail:
                report.malformed += 1
                continue
            if head == tail:
                report.self_loops += 1
                continue
            edge = (head, tail) if head < tail else (tail, head)
            if edge in edges:
                report.duplicates += 1
                continue
            edges.add(edge)
            report.valid_edges += 1
    if not edges:
        raise GraphError(f"no valid edges in {path}")

    surfaces = sorted({s for pair in edges for s in pair})
    ids = {s: i for i, s in enumerate(surfaces)}
    nodes = [Concept(id=i, surface=s, word_count=len(s.split())) for i, s in enumerate(surfaces)]
    neighbor_sets: list[set[int]] = [set() for _ in surfaces]
    for a, b in edges:
        ia, ib = ids[a], ids[b]
        neighbor_sets[ia].add(ib)
        neighbor_sets[ib].add(ia)
    adjacency = [sorted(ns) for ns in neighbor_sets]

    log.info(
        "loaded graph %s: %d nodes, %d edges (%d malformed, %d self-loops, %d duplicates skipped)",
        path, len(nodes), len(edges), report.malformed, report.self_loops, report.duplicates,
    )
    return KnowledgeGraph(nodes, adjacency, len(edges), normalization, report)


def write_graph_index(g: KnowledgeGraph, out_dir: str | Path) -> None:
    """Write the graph artifact: nodes.tsv (id, surface, degree) and edges.tsv."""
    out = Path(out_dir)
    with (out / "graph_nodes.tsv").open("w", encoding="utf-8") as fh:
        for c in g.nodes:
            fh.write(f"{c.id}\t{c.surface}\t{g.degree(c.id)}\n")
    with (out / "graph_edges.tsv").open("w", encoding="utf-8") as fh:
        for a in range(len(g)):
            for b in g.adjacency[a]:
                if a < b:
                    fh.write(f"{a}\t{b}\n")


def read_graph_index(in_dir: str | Path, policy: NormalizationPolicy = DEFAULT_POLICY) -> KnowledgeGraph:
    """Load a graph previously written by write_graph_index."""
    src = Path(in_dir)
    nodes: list[Concept] = []
    with (src / "graph_nodes.tsv").open(encoding="utf-8") as fh:
        for line in fh:
            id_str, surface, _degree = line.rstrip("\n").split("\t")
            nodes.append(Concept(id=int(id_str), surface=surface, word_count=len(surface.split())))
    neighbor_sets: list[set[int]] = [set() for _ in nodes]
    edge_count = 0
    with (src / "graph_edges.tsv").open(encoding="utf-8") as fh:
        for line in fh:
            a_str, b_str = line.rstrip("\n").split("\t")
            a, b = int(a_str), int(b_str)
            neighbor_sets[a].add(b)
            neighbor_sets[b].add(a)
            edge_count += 1
    adjacency = [sorted(ns) for ns in neighbor_sets]
    return KnowledgeGraph(nodes, adjacency, edge_count, policy)
