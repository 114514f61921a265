"""Exact graph extraction from circle families, girth, and chromatic number.

Graphs are simple and undirected.  Extraction is an O(n²) predicate sweep —
at the family sizes this package targets, exactness beats indexing.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .budget import DEFAULT_BUDGET, Budget
from .coloring import AvoidResult, find_avoiding_coloring
from .errors import BudgetExceeded
from .geometry import (
    Circle,
    CosAngle,
    concentric,
    intersect_at_angle,
    tangency_kind,
)

if TYPE_CHECKING:  # pragma: no cover
    from .builder import Constellation


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with sorted edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
        object.__setattr__(
            self, "edges", tuple(sorted(tuple(sorted(e)) for e in self.edges))
        )
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels must match vertex count")

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "Graph":
        normal = {tuple(sorted(e)) for e in edges}
        return cls(n, tuple(sorted(normal)), labels)

    def adjacency(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return tuple(sorted((u, v))) in set(self.edges)


def pair_classification(circles: list[Circle]):
    """Yield (i, j, kind) for every noteworthy pair, kind in
    {"duplicate", "concentric", "external", "internal"}."""
    xs = [c.cx for c in circles]
    ys = [c.cy for c in circles]
    rs = [c.r for c in circles]
    n = len(circles)
    for i in range(n):
        xi, yi, ri = xs[i], ys[i], rs[i]
        for j in range(i + 1, n):
            dx = xi - xs[j]
            dy = yi - ys[j]
            if not dx and not dy:
                yield i, j, ("duplicate" if ri == rs[j] else "concentric")
                continue
            d2 = dx * dx + dy * dy
            rj = rs[j]
            if d2 == (ri + rj) ** 2:
                yield i, j, "external"
            elif d2 == (ri - rj) ** 2:
                yield i, j, "internal"


def tangency_graph(circles, include_internal: bool = True) -> Graph:
    """Graph with an edge per tangent pair (externally, plus internally when asked)."""
    circles = list(circles)
    wanted = {"external", "internal"} if include_internal else {"external"}
    edges = [(i, j) for i, j, kind in pair_classification(circles) if kind in wanted]
    return Graph(len(circles), tuple(edges))


def theta_graph(circles, a: CosAngle) -> Graph:
    """Graph with an edge per pair of circles meeting at angle θ."""
    circles = list(circles)
    edges = []
    for i in range(len(circles)):
        for j in range(i + 1, len(circles)):
            if intersect_at_angle(circles[i], circles[j], a):
                edges.append((i, j))
    return Graph(len(circles), tuple(edges))


def _bfs_estimate(adj, start):
    """Shortest closed walk through start: (length, (u, w), dist, parent)."""
    dist = {start: 0}
    parent = {start: -1}
    best = math.inf
    best_edge = None
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                parent[w] = u
                queue.append(w)
            elif w != parent[u]:
                cand = dist[u] + dist[w] + 1
                if cand < best:
                    best = cand
                    best_edge = (u, w)
    return best, best_edge, dist, parent


def girth(graph: Graph):
    """Exact girth (math.inf for forests) via per-vertex BFS."""
    adj = graph.adjacency()
    best = math.inf
    for s in range(graph.n):
        est, _, _, _ = _bfs_estimate(adj, s)
        if est < best:
            best = est
    return best


def shortest_cycle(graph: Graph):
    """A concrete shortest cycle as a vertex list, or None for forests."""
    adj = graph.adjacency()
    best = math.inf
    best_start = None
    for s in range(graph.n):
        est, edge, _, _ = _bfs_estimate(adj, s)
        if est < best:
            best, best_start = est, s
    if best_start is None:
        return None
    # Re-run the winning BFS (deterministic) and stitch the two tree paths.
    _, (u, w), dist, parent = _bfs_estimate(adj, best_start)

    def path_to_root(x):
        out = [x]
        while parent[out[-1]] != -1:
            out.append(parent[out[-1]])
        return out

    pu, pw = path_to_root(u), path_to_root(w)
    # At a girth-achieving candidate the two paths meet only at the root.
    cycle = pu[::-1] + pw[:-1]
    assert len(cycle) == best and len(set(cycle)) == best
    return cycle


@dataclass(frozen=True)
class ColoringWitness:
    """Either a validated proper coloring or an exhaustion certificate."""

    kind: str  # "coloring" | "exhausted"
    k: int
    coloring: tuple[int, ...] | None
    nodes: int
    digest: str

    @classmethod
    def proper(cls, graph: Graph, k: int, coloring, nodes: int) -> "ColoringWitness":
        coloring = tuple(coloring)
        for u, v in graph.edges:
            if coloring[u] == coloring[v]:
                raise ValueError(f"coloring not proper on edge ({u},{v})")
        res = AvoidResult(coloring, nodes)
        return cls("coloring", k, coloring, nodes, res.digest())

    @classmethod
    def exhausted(cls, k: int, nodes: int) -> "ColoringWitness":
        res = AvoidResult(None, nodes)
        return cls("exhausted", k, None, nodes, res.digest())

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "coloring": list(self.coloring) if self.coloring is not None else None,
            "nodes": self.nodes,
            "digest": self.digest,
        }


def is_k_colorable(graph: Graph, k: int, budget: Budget = DEFAULT_BUDGET):
    """A proper k-coloring, or None when exhaustive search proves none exists."""
    if graph.n == 0:
        return ()
    res = find_avoiding_coloring(graph.n, graph.edges, k, budget)
    return res.coloring


def greedy_coloring(graph: Graph) -> tuple[int, ...]:
    """Deterministic saturation-first greedy coloring (an upper-bound witness)."""
    adj = graph.adjacency()
    colors = [-1] * graph.n
    neighbor_colors: list[set] = [set() for _ in range(graph.n)]
    for _ in range(graph.n):
        pick = max(
            (v for v in range(graph.n) if colors[v] < 0),
            key=lambda v: (len(neighbor_colors[v]), len(adj[v]), -v),
        )
        c = 0
        while c in neighbor_colors[pick]:
            c += 1
        colors[pick] = c
        for w in adj[pick]:
            neighbor_colors[w].add(c)
    return tuple(colors)


def _greedy_clique(graph: Graph) -> tuple[int, ...]:
    adj = [set(a) for a in graph.adjacency()]
    order = sorted(range(graph.n), key=lambda v: (-len(adj[v]), v))
    clique: list[int] = []
    for v in order:
        if all(v in adj[u] for u in clique):
            clique.append(v)
    return tuple(clique)


@dataclass(frozen=True)
class ChromaticResult:
    value: int | None  # exact chromatic number when exact=True
    lower: int
    upper: int | None
    exact: bool
    witness: ColoringWitness | None  # proper coloring at the upper bound
    exhaustion: ColoringWitness | None  # failed search at value-1
    clique: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "witness": self.witness.to_dict() if self.witness else None,
            "exhaustion": self.exhaustion.to_dict() if self.exhaustion else None,
            "clique": list(self.clique),
        }


def chromatic_number(graph: Graph, budget: Budget = DEFAULT_BUDGET) -> ChromaticResult:
    """Exact chromatic number with a proper coloring and an exhaustion
    certificate for one color fewer.

    On budget exhaustion, returns the best proven bounds with exact=False.
    """
    if graph.n == 0:
        return ChromaticResult(0, 0, 0, True, None, None, ())
    clique = _greedy_clique(graph)
    lower = max(1, len(clique))
    exhaustion = None
    k = lower
    try:
        # Certify the clique bound by exhausting k-1 colors when meaningful.
        if lower > 1:
            res = find_avoiding_coloring(graph.n, graph.edges, lower - 1, budget)
            assert res.exhausted, "a clique cannot be colored with fewer colors"
            exhaustion = ColoringWitness.exhausted(lower - 1, res.nodes)
        while True:
            res = find_avoiding_coloring(graph.n, graph.edges, k, budget)
            if not res.exhausted:
                witness = ColoringWitness.proper(graph, k, res.coloring, res.nodes)
                return ChromaticResult(k, k, k, True, witness, exhaustion, clique)
            exhaustion = ColoringWitness.exhausted(k, res.nodes)
            k += 1
    except BudgetExceeded:
        return ChromaticResult(None, k, None, False, None, exhaustion, clique)


@dataclass(frozen=True)
class StructureReport:
    """Outcome of comparing a swept tangency graph against the predicted
    copy-plus-matching edge partition."""

    ok: bool
    unexpected: tuple  # (u, v, kind) pairs present but not predicted
    missing: tuple  # (u, v) pairs predicted but absent
    n_copies: int

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "unexpected": [list(x) for x in self.unexpected],
            "missing": [list(x) for x in self.missing],
            "n_copies": self.n_copies,
        }


def expected_assembly_edges(provenance, base_graph: Graph, copy_point_indices):
    """Predicted edge set for an assembled family.

    Copies are given as tuples of indices into the lifted point set, aligned
    with the base-circle order; provenance carries the same indices.
    """
    large_at = {}
    small_at = {}
    for idx, tag in enumerate(provenance):
        if tag.kind == "large":
            large_at[tag.point] = idx
        elif tag.kind == "small":
            small_at[(tag.copy, tag.source)] = idx
    expected = set()
    for ci, copy_pts in enumerate(copy_point_indices):
        for i, x_idx in enumerate(copy_pts):
            expected.add(tuple(sorted((large_at[x_idx], small_at[(ci, i)]))))
        for u, v in base_graph.edges:
            expected.add(tuple(sorted((small_at[(ci, u)], small_at[(ci, v)]))))
    return expected


def verify_structure(
    constellation: "Constellation", base_graph: Graph, copy_point_indices
) -> StructureReport:
    """Check that tangencies are exactly per-copy base images plus the
    large-small matchings, and nothing else (no internal tangencies at all)."""
    circles = list(constellation.circles)
    expected = expected_assembly_edges(
        constellation.provenance, base_graph, copy_point_indices
    )
    unexpected = []
    seen = set()
    for i, j, kind in pair_classification(circles):
        if kind == "external" and (i, j) in expected:
            seen.add((i, j))
        else:
            unexpected.append((i, j, kind))
    missing = sorted(expected - seen)
    ok = not unexpected and not missing
    return StructureReport(ok, tuple(unexpected), tuple(missing), len(copy_point_indices))
