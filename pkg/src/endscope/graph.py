"""Lazy infinite graphs and the finite windows explored from them.

A :class:`LazyGraph` is described only through ordered neighbour streams, so
vertices of infinite degree are fine. :func:`explore` turns a graph into a
:class:`Window`: the BFS ball around the root, where every vertex records
whether its neighbourhood was enumerated completely. All later computations
work on windows and report how certain their answers are.
"""
from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Hashable, Iterable, Iterator, Mapping

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import ConfigError, NotExploredError

Vertex = Hashable
INFINITE = math.inf

BudgetSchedule = Callable[[int], int]


class LazyGraph(ABC):
    """A connected, loopless simple graph given by neighbour streams.

    Subclasses must keep ``neighbors`` deterministic and symmetric. When a
    closed-form graph distance is known, override ``exact_metric`` with a
    method; it stays ``None`` otherwise.
    """

    name = "graph"
    root: Vertex
    exact_metric: Callable[[Vertex, Vertex], int] | None = None

    @abstractmethod
    def neighbors(self, v: Vertex) -> Iterator[Vertex]:
        ...

    @abstractmethod
    def is_adjacent(self, u: Vertex, v: Vertex) -> bool:
        ...

    def degree_hint(self, v: Vertex) -> int | float | None:
        """Finite degree, ``INFINITE``, or ``None`` when unknown."""
        return None

    def token(self, v: Vertex) -> str:
        return str(v)

    def default_budget(self, radius: int) -> int:
        return 4 * (radius + 1)

    def dist(self, u: Vertex, v: Vertex) -> int | None:
        """Closed-form distance if available."""
        if self.exact_metric is None:
            return None
        return self.exact_metric(u, v)


class FiniteGraph(LazyGraph):
    """Finite graph from an adjacency mapping; used for tests and examples."""

    def __init__(self, adjacency: Mapping[Vertex, Iterable[Vertex]], root: Vertex, name="finite"):
        adj: dict[Vertex, list] = {v: [] for v in adjacency}
        for v, ws in adjacency.items():
            for w in ws:
                if w == v:
                    raise ConfigError(f"loop at {v!r}")
                adj.setdefault(w, [])
                if w not in adj[v]:
                    adj[v].append(w)
                if v not in adj[w]:
                    adj[w].append(v)
        self._adj = {v: sorted(ws, key=repr) for v, ws in adj.items()}
        self._sets = {v: frozenset(ws) for v, ws in self._adj.items()}
        if root not in self._adj:
            raise ConfigError(f"root {root!r} not in graph")
        self.root = root
        self.name = name

    @classmethod
    def path(cls, n: int, root: int = 0) -> "FiniteGraph":
        """Path on vertices 0..n (length n)."""
        return cls({i: [i + 1] for i in range(n)} | {n: []}, root, name=f"path{n}")

    @classmethod
    def cycle(cls, n: int) -> "FiniteGraph":
        return cls({i: [(i + 1) % n] for i in range(n)}, 0, name=f"cycle{n}")

    def vertices(self):
        return list(self._adj)

    def neighbors(self, v):
        return iter(self._adj[v])

    def is_adjacent(self, u, v):
        return v in self._sets.get(u, ())

    def degree_hint(self, v):
        return len(self._adj[v])


class Certainty(str, Enum):
    EXACT = "Exact"
    LOWER_BOUND = "LowerBound"
    UPPER_BOUND = "UpperBound"


_WEAKNESS = {Certainty.EXACT: 0, Certainty.UPPER_BOUND: 1, Certainty.LOWER_BOUND: 2}


@dataclass(frozen=True)
class DiameterEstimate:
    value: int | None
    certainty: Certainty
    infinite: bool = False

    def is_finite(self) -> bool:
        return not self.infinite and self.value is not None

    def to_dict(self):
        return {"value": "Infinite" if self.infinite else self.value, "certainty": self.certainty.value}


@dataclass(frozen=True)
class EnumStatus:
    complete: bool
    enumerated: int

    def __str__(self):
        return "Complete" if self.complete else f"TruncatedAt({self.enumerated})"


@dataclass(frozen=True, eq=False)
class Window:
    """Finite explored part of a lazy graph. Immutable once built."""

    graph: LazyGraph
    origin: Vertex
    radius: int
    budget: int
    adjacency: Mapping[Vertex, frozenset]
    status: Mapping[Vertex, EnumStatus]
    layer: Mapping[Vertex, int]
    capped: bool = False
    _tokens: dict = field(default_factory=dict, repr=False)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.adjacency)

    @property
    def frontier(self) -> frozenset:
        return frozenset(v for v, s in self.status.items() if not s.complete)

    @property
    def edges(self) -> frozenset:
        return frozenset(frozenset((u, w)) for u, ws in self.adjacency.items() for w in ws)

    def __contains__(self, v) -> bool:
        return v in self.adjacency

    def __len__(self):
        return len(self.adjacency)

    def is_complete(self, v) -> bool:
        return self.status[v].complete

    def require(self, *vs):
        for v in vs:
            if v not in self.adjacency:
                raise NotExploredError(f"vertex {self.token(v)} is outside the window (radius {self.radius})")

    def token(self, v) -> str:
        t = self._tokens.get(v)
        if t is None:
            t = self._tokens[v] = self.graph.token(v)
        return t

    def min_token_vertex(self, vs: Iterable):
        return min(vs, key=self.token)

    def bfs(self, sources: Iterable, allowed: Callable[[Vertex], bool] | None = None, limit: int | None = None) -> dict:
        """Window BFS distances from ``sources`` through vertices passing ``allowed``."""
        dist = {}
        queue = deque()
        for s in sources:
            if s in self.adjacency and s not in dist and (allowed is None or allowed(s)):
                dist[s] = 0
                queue.append(s)
        while queue:
            v = queue.popleft()
            d = dist[v]
            if limit is not None and d >= limit:
                continue
            for w in self.adjacency[v]:
                if w not in dist and (allowed is None or allowed(w)):
                    dist[w] = d + 1
                    queue.append(w)
        return dist

    def bfs_path(self, source, targets: set, allowed: Callable[[Vertex], bool] | None = None) -> list | None:
        """Shortest window path from ``source`` to any target; ties by token."""
        if source in targets:
            return [source]
        parent = {source: None}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in sorted(self.adjacency[v], key=self.token):
                if w in parent:
                    continue
                if w in targets:
                    path = [w, v]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                if allowed is None or allowed(w):
                    parent[w] = v
                    queue.append(w)
        return None


def _schedule(budget) -> BudgetSchedule | None:
    if budget is None or callable(budget):
        return budget
    if isinstance(budget, int) and not isinstance(budget, bool):
        return lambda _r, b=budget: b
    raise ConfigError(f"budget must be an int or a schedule, got {budget!r}")


def explore(graph: LazyGraph, radius: int, budget=None, max_vertices: int | None = None) -> Window:
    """Build the BFS window of ``radius`` around ``graph.root``.

    ``budget`` caps how many neighbours of an infinite- or unknown-degree vertex
    are enumerated; it is an int or a schedule ``radius -> int``. Vertices with
    a finite degree hint are always enumerated fully. ``max_vertices`` is a
    global safety cap: once reached, no new vertices are admitted and the
    affected vertices stay truncated.
    """
    if radius < 0:
        raise ConfigError("radius must be non-negative")
    schedule = _schedule(budget) or graph.default_budget
    b = schedule(radius)
    if b <= 0:
        raise ConfigError("budget schedule must be positive")
    root = graph.root
    layer = {root: 0}
    adjacency: dict = {root: set()}
    status = {}
    queue = deque([root])
    capped = False
    while queue:
        v = queue.popleft()
        hint = graph.degree_hint(v)
        limit = None if isinstance(hint, int) else b
        stream = graph.neighbors(v)
        if limit is not None:
            stream = itertools.islice(stream, limit + 1)
        count = 0
        complete = True
        for w in stream:
            if limit is not None and count >= limit:
                complete = False
                break
            count += 1
            if w not in layer:
                if layer[v] >= radius:
                    complete = False
                    continue
                if max_vertices is not None and len(layer) >= max_vertices:
                    complete = False
                    capped = True
                    continue
                layer[w] = layer[v] + 1
                adjacency[w] = set()
                queue.append(w)
            adjacency[v].add(w)
            adjacency[w].add(v)
        status[v] = EnumStatus(complete, count)
    frozen = {v: frozenset(ws) for v, ws in adjacency.items()}
    return Window(graph, root, radius, b, frozen, status, layer, capped)


def _window_distance(window: Window, x, y) -> tuple[int, bool]:
    # exact iff every vertex closer to x than y is Complete
    if x == y:
        return 0, True
    dist = {x: 0}
    queue = deque([x])
    min_incomplete = INFINITE
    while queue:
        v = queue.popleft()
        d = dist[v]
        if not window.status[v].complete:
            min_incomplete = min(min_incomplete, d)
        for w in window.adjacency[v]:
            if w not in dist:
                dist[w] = d + 1
                if w == y:
                    return d + 1, _layer_complete(window, dist, queue, d, min_incomplete)
                queue.append(w)
    raise NotExploredError(f"{window.token(y)} unreachable from {window.token(x)} in window")


def _layer_complete(window, dist, queue, d, min_incomplete) -> bool:
    # vertices still queued at distance <= d were not yet inspected
    if min_incomplete <= d:
        return False
    return all(window.status[v].complete for v in queue if dist[v] <= d)


def distance(window: Window, x, y, use_exact_metric: bool = True) -> DiameterEstimate:
    """Graph distance between two window vertices with its certainty."""
    window.require(x, y)
    if x == y:
        return DiameterEstimate(0, Certainty.EXACT)
    g = window.graph
    if use_exact_metric and g.exact_metric is not None:
        return DiameterEstimate(g.exact_metric(x, y), Certainty.EXACT)
    if g.is_adjacent(x, y):
        return DiameterEstimate(1, Certainty.EXACT)
    d, exact = _window_distance(window, x, y)
    return DiameterEstimate(d, Certainty.EXACT if exact else Certainty.UPPER_BOUND)


def set_diameter(window: Window, vertices: Iterable, use_exact_metric: bool = True) -> DiameterEstimate:
    """Max pairwise distance; the empty set has diameter 0 by convention."""
    vs = sorted(set(vertices), key=window.token)
    best = 0
    weakest = Certainty.EXACT
    for i, u in enumerate(vs):
        for v in vs[i + 1:]:
            est = distance(window, u, v, use_exact_metric)
            best = max(best, est.value)
            if _WEAKNESS[est.certainty] > _WEAKNESS[weakest]:
                weakest = est.certainty
    return DiameterEstimate(best, weakest)


class UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        root = x
        while parent.setdefault(root, root) != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


class Openness(str, Enum):
    CLOSED = "Closed"
    OPEN = "Open"


@dataclass(frozen=True)
class ComponentLabeling:
    """Components of window minus a set, keyed by their minimal token."""

    labels: Mapping[Vertex, str]
    openness: Mapping[str, Openness]
    members: Mapping[str, frozenset]

    def component_of(self, v) -> str | None:
        return self.labels.get(v)

    def closed(self) -> list[str]:
        return sorted(f for f, o in self.openness.items() if o is Openness.CLOSED)

    def open(self) -> list[str]:
        return sorted(f for f, o in self.openness.items() if o is Openness.OPEN)


def components_of_complement(window: Window, removed: Iterable) -> ComponentLabeling:
    removed = set(removed)
    uf = UnionFind()
    rest = [v for v in window.adjacency if v not in removed]
    for v in rest:
        uf.find(v)
        for w in window.adjacency[v]:
            if w not in removed:
                uf.union(v, w)
    groups: dict = {}
    for v in rest:
        groups.setdefault(uf.find(v), []).append(v)
    labels, openness, members = {}, {}, {}
    for vs in groups.values():
        fp = min(window.token(v) for v in vs)
        members[fp] = frozenset(vs)
        openness[fp] = Openness.CLOSED if all(window.status[v].complete for v in vs) else Openness.OPEN
        for v in vs:
            labels[v] = fp
    return ComponentLabeling(labels, openness, members)


def ball(window: Window, center, radius: int) -> tuple[frozenset, bool]:
    """Window part of K(center, radius) and whether it is certified complete.

    With an exact metric the membership of every window vertex is exact, and
    the ball is complete when all its vertices at distance < radius are
    Complete. Without one, window BFS is used and the same completeness
    condition also certifies the distances.
    """
    window.require(center)
    g = window.graph
    if g.exact_metric is not None:
        members = frozenset(v for v in window.adjacency if g.exact_metric(center, v) <= radius)
        inner = [v for v in members if g.exact_metric(center, v) < radius]
    else:
        dist = window.bfs([center], limit=radius)
        members = frozenset(dist)
        inner = [v for v, d in dist.items() if d < radius]
    complete = all(window.status[v].complete for v in inner)
    return members, complete


def all_pairs_distances(window: Window) -> tuple[list, np.ndarray]:
    """Window BFS distance matrix (scipy csgraph); ordering by token."""
    order = sorted(window.adjacency, key=window.token)
    index = {v: i for i, v in enumerate(order)}
    rows, cols = [], []
    for v, ws in window.adjacency.items():
        for w in ws:
            rows.append(index[v])
            cols.append(index[w])
    n = len(order)
    mat = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    dist = shortest_path(mat, method="D", unweighted=True, directed=False)
    return order, dist
