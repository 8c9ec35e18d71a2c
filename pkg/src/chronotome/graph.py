"""Year-windowed co-mention graphs, Louvain communities, and export.

Two entities are linked when they occur in chapters whose assigned years
lie within ``window`` of each other; the edge weight counts the year
pairs within the window, so the unweighted rule (edge iff weight >= 1)
is preserved while Louvain gets meaningful weights.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import EmptyGraph, UnassignedYear
from .store import PERSON, PLACE, EntityRow


@dataclass
class CanonicalEntity:
    """A normalized entity with its per-year chapter counts."""

    normalized: str
    label: str
    occurrences: dict[int, int] = field(default_factory=dict)
    chapters: set[str] = field(default_factory=set)

    @property
    def total(self) -> int:
        return sum(self.occurrences.values())

    @property
    def dominant_year(self) -> int:
        # Highest count, earlier year on ties.
        return min(self.occurrences, key=lambda y: (-self.occurrences[y], y))


@dataclass
class TemporalGraph:
    nodes: list[CanonicalEntity]
    edges: dict[tuple[str, str], int]  # key is the sorted name pair
    window: int
    partition: dict[str, int] | None = None

    def node_names(self) -> list[str]:
        return [n.normalized for n in self.nodes]

    def weighted_degree(self, name: str) -> int:
        return sum(w for (u, v), w in self.edges.items() if name in (u, v))


def collect_occurrences(
    rows: Iterable[EntityRow], years: Mapping[str, int]
) -> list[CanonicalEntity]:
    """Fold accepted entity rows into canonical entities.

    Labels resolve by majority across chapters (PERSON on ties);
    occurrences count chapters per assigned year.
    """
    by_name: dict[str, dict[str, str]] = {}
    for row in rows:
        if row.chapter_id not in years or years[row.chapter_id] is None:
            raise UnassignedYear(row.chapter_id)
        by_name.setdefault(row.normalized, {})[row.chapter_id] = row.label

    entities = []
    for normalized in sorted(by_name):
        chapter_labels = by_name[normalized]
        persons = sum(1 for label in chapter_labels.values() if label == PERSON)
        label = PERSON if persons * 2 >= len(chapter_labels) else PLACE
        occurrences: dict[int, int] = {}
        for chapter_id in chapter_labels:
            year = years[chapter_id]
            occurrences[year] = occurrences.get(year, 0) + 1
        entities.append(
            CanonicalEntity(
                normalized=normalized,
                label=label,
                occurrences=occurrences,
                chapters=set(chapter_labels),
            )
        )
    return entities


def build_graph(entities: list[CanonicalEntity], window: int = 1) -> TemporalGraph:
    """Link entities whose occurrence years fall within the window.

    weight(u, v) counts pairs (a, b) with a in years(u), b in years(v)
    and |a - b| <= window. Undirected, no self-edges, independent of the
    input order.
    """
    if window < 0:
        raise ValueError("window must be >= 0")
    by_year: dict[int, list[str]] = {}
    for entity in entities:
        for year in entity.occurrences:
            by_year.setdefault(year, []).append(entity.normalized)
    for names in by_year.values():
        names.sort()

    edges: dict[tuple[str, str], int] = {}

    def bump(u: str, v: str) -> None:
        key = (u, v) if u < v else (v, u)
        edges[key] = edges.get(key, 0) + 1

    years = sorted(by_year)
    for a in years:
        bucket_a = by_year[a]
        for i, u in enumerate(bucket_a):
            for v in bucket_a[i + 1 :]:
                bump(u, v)
        for b in range(a + 1, a + window + 1):
            if b not in by_year:
                continue
            for u in bucket_a:
                for v in by_year[b]:
                    if u != v:
                        bump(u, v)

    return TemporalGraph(
        nodes=sorted(entities, key=lambda e: e.normalized),
        edges=edges,
        window=window,
    )


def modularity(graph: TemporalGraph, partition: Mapping[str, int]) -> float:
    """Newman-Girvan weighted modularity of a node partition."""
    if not graph.edges:
        raise EmptyGraph("modularity is undefined for a graph with no edges")
    names = graph.node_names()
    missing = [n for n in names if n not in partition]
    if missing:
        raise ValueError(f"partition does not cover nodes: {missing}")

    total = float(sum(graph.edges.values()))
    intra: dict[int, float] = {}
    degree_sum: dict[int, float] = {}
    for (u, v), w in graph.edges.items():
        cu, cv = partition[u], partition[v]
        if cu == cv:
            intra[cu] = intra.get(cu, 0.0) + w
        degree_sum[cu] = degree_sum.get(cu, 0.0) + w
        degree_sum[cv] = degree_sum.get(cv, 0.0) + w

    communities = {partition[n] for n in names}
    return sum(
        intra.get(c, 0.0) / total - (degree_sum.get(c, 0.0) / (2.0 * total)) ** 2
        for c in communities
    )


# -- Louvain ------------------------------------------------------------------


def _local_move(
    n: int,
    adj: list[dict[int, float]],
    self_loop: list[float],
    total: float,
    rng: random.Random,
) -> tuple[list[int], bool]:
    strength = [sum(adj[i].values()) + 2.0 * self_loop[i] for i in range(n)]
    node_comm = list(range(n))
    comm_tot = strength[:]

    order = list(range(n))
    rng.shuffle(order)  # fixed for the whole pass

    moved_any = False
    improved = True
    while improved:
        improved = False
        for i in order:
            ci = node_comm[i]
            weight_to: dict[int, float] = {}
            for j, w in adj[i].items():
                cj = node_comm[j]
                weight_to[cj] = weight_to.get(cj, 0.0) + w
            k_i = strength[i]
            comm_tot[ci] -= k_i
            best_comm = ci
            best_gain = weight_to.get(ci, 0.0) - comm_tot[ci] * k_i / (2.0 * total)
            for cj in sorted(weight_to):
                if cj == ci:
                    continue
                gain = weight_to[cj] - comm_tot[cj] * k_i / (2.0 * total)
                if gain > best_gain:
                    best_gain = gain
                    best_comm = cj
            comm_tot[best_comm] += k_i
            node_comm[i] = best_comm
            if best_comm != ci:
                improved = True
                moved_any = True
    return node_comm, moved_any


def _aggregate(
    n: int,
    adj: list[dict[int, float]],
    self_loop: list[float],
    node_comm: list[int],
) -> tuple[int, list[dict[int, float]], list[float], dict[int, int]]:
    dense = {c: i for i, c in enumerate(sorted(set(node_comm)))}
    m = len(dense)
    new_adj: list[dict[int, float]] = [{} for _ in range(m)]
    new_self = [0.0] * m
    for i in range(n):
        ci = dense[node_comm[i]]
        new_self[ci] += self_loop[i]
        for j, w in adj[i].items():
            if j < i:
                continue
            cj = dense[node_comm[j]]
            if ci == cj:
                new_self[ci] += w
            else:
                new_adj[ci][cj] = new_adj[ci].get(cj, 0.0) + w
                new_adj[cj][ci] = new_adj[cj].get(ci, 0.0) + w
    return m, new_adj, new_self, dense


def louvain_history(graph: TemporalGraph, seed: int = 0) -> list[dict[str, int]]:
    """Louvain per-pass partitions of the original nodes.

    Each entry is the flattened partition after one pass (local moves
    followed by aggregation); the last entry is the final partition.
    Empty when the very first pass finds no improving move.
    """
    if not graph.edges:
        raise EmptyGraph("no edges to cluster")
    names = sorted({n.normalized for n in graph.nodes})
    idx = {name: i for i, name in enumerate(names)}
    n = len(names)
    adj: list[dict[int, float]] = [{} for _ in range(n)]
    for (u, v), w in graph.edges.items():
        adj[idx[u]][idx[v]] = adj[idx[u]].get(idx[v], 0.0) + w
        adj[idx[v]][idx[u]] = adj[idx[v]].get(idx[u], 0.0) + w
    self_loop = [0.0] * n
    total = float(sum(graph.edges.values()))

    rng = random.Random(seed)
    membership = list(range(n))  # original node -> current-level node
    history: list[dict[str, int]] = []
    while True:
        node_comm, moved = _local_move(n, adj, self_loop, total, rng)
        if not moved:
            break
        n, adj, self_loop, dense = _aggregate(n, adj, self_loop, node_comm)
        membership = [dense[node_comm[m]] for m in membership]
        history.append({name: membership[idx[name]] for name in names})
        if n == 1:
            break
    return history


def louvain(graph: TemporalGraph, seed: int = 0) -> dict[str, int]:
    """Community partition via two-phase Louvain, reproducible per seed.

    Community ids are dense from 0, numbered by first appearance over
    the node names in sorted order.
    """
    history = louvain_history(graph, seed)
    names = sorted({n.normalized for n in graph.nodes})
    raw = history[-1] if history else {name: i for i, name in enumerate(names)}
    dense: dict[int, int] = {}
    partition = {}
    for name in names:
        community = raw[name]
        if community not in dense:
            dense[community] = len(dense)
        partition[name] = dense[community]
    return partition


def singleton_partition(graph: TemporalGraph) -> dict[str, int]:
    return {name: i for i, name in enumerate(sorted(graph.node_names()))}


# -- captions and export --------------------------------------------------------


@dataclass(frozen=True)
class CommunityCaption:
    community_id: int
    top_entities: tuple[str, ...]
    year_span: tuple[int, int]
    caption: str


def make_captions(
    graph: TemporalGraph, partition: Mapping[str, int], k: int = 3
) -> list[CommunityCaption]:
    """One caption line per community: its top members and year span."""
    entities = {e.normalized: e for e in graph.nodes}
    members: dict[int, list[str]] = {}
    for name in sorted(partition):
        if name in entities:
            members.setdefault(partition[name], []).append(name)

    captions = []
    for community_id in sorted(members):
        names = members[community_id]
        top = sorted(names, key=lambda n: (-graph.weighted_degree(n), n))[:k]
        years = [y for n in names for y in entities[n].occurrences]
        span = (min(years), max(years))
        captions.append(
            CommunityCaption(
                community_id=community_id,
                top_entities=tuple(top),
                year_span=span,
                caption=f"{', '.join(top)} — {span[0]}–{span[1]}",
            )
        )
    return captions


def export_graph(
    graph: TemporalGraph,
    partition: Mapping[str, int],
    captions: Sequence[CommunityCaption],
    book_ids: Sequence[str] = (),
    seed: int = 0,
) -> str:
    """Portable JSON document for the portal UI; byte-identical across runs.

    Node ``year`` is the dominant occurrence year and doubles as the
    horizontal layout hint; nodes are ordered by name, edges by pair.
    """
    document = {
        "meta": {
            "book_ids": list(book_ids),
            "window": graph.window,
            "seed": seed,
            "modularity": modularity(graph, partition),
        },
        "nodes": [
            {
                "id": entity.normalized,
                "label": entity.label,
                "total": entity.total,
                "year": entity.dominant_year,
                "community": partition[entity.normalized],
            }
            for entity in sorted(graph.nodes, key=lambda e: e.normalized)
        ],
        "edges": [
            {"source": u, "target": v, "weight": w}
            for (u, v), w in sorted(graph.edges.items())
        ],
        "captions": [
            {
                "community": c.community_id,
                "entities": list(c.top_entities),
                "years": list(c.year_span),
                "text": c.caption,
            }
            for c in captions
        ],
    }
    return json.dumps(document, ensure_ascii=False, sort_keys=True, indent=2) + "\n"
