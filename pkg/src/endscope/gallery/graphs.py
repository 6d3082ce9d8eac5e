"""Closed-form lazy graphs for the example gallery.

Vertex encodings (tokens in brackets):

* ladder: ``(n, side)`` with side ``"t"``/``"b"``  [``(n,t)``]
* line: ``n``  [``n``]
* star of paths: ``"x"`` and ``(n, i)`` with 1 <= i <= n; (n, 1) is joined to x
* X1: ``"x1"``, ``"x2"`` and ``(j, n)`` on ray L_j; X2 uses a single hub ``"x"``
* tree / tree+2: address tuples, root ``()``  [``o``, ``0.3.1``]
* K_N chain: ``(level, index)``; 5b/5c add hubs as in X1/X2
"""
from __future__ import annotations

import itertools

from ..errors import ConfigError
from ..graph import INFINITE, LazyGraph

SIDES = ("t", "b")


class Ladder(LazyGraph):
    name = "ladder"

    def __init__(self):
        self.root = (0, "t")

    def neighbors(self, v):
        n, s = v
        yield (n - 1, s)
        yield (n + 1, s)
        yield (n, "b" if s == "t" else "t")

    def is_adjacent(self, u, v):
        return self.exact_metric(u, v) == 1

    def degree_hint(self, v):
        return 3

    def exact_metric(self, u, v):
        return abs(u[0] - v[0]) + (u[1] != v[1])

    def token(self, v):
        return f"({v[0]},{v[1]})"


class Line(LazyGraph):
    name = "line"
    root = 0

    def neighbors(self, v):
        yield v - 1
        yield v + 1

    def is_adjacent(self, u, v):
        return abs(u - v) == 1

    def degree_hint(self, v):
        return 2

    def exact_metric(self, u, v):
        return abs(u - v)


class StarOfPaths(LazyGraph):
    """Paths P_n = (n,1)..(n,n) whose initial vertices are joined to x."""

    name = "star-paths"
    root = "x"

    def neighbors(self, v):
        if v == "x":
            return ((n, 1) for n in itertools.count(1))
        n, i = v
        out = ["x" if i == 1 else (n, i - 1)]
        if i < n:
            out.append((n, i + 1))
        return iter(out)

    def is_adjacent(self, u, v):
        if u == "x" or v == "x":
            w = v if u == "x" else u
            return w != "x" and w[1] == 1
        return u[0] == v[0] and abs(u[1] - v[1]) == 1

    def degree_hint(self, v):
        if v == "x":
            return INFINITE
        n, i = v
        return 1 if i == n else 2

    def exact_metric(self, u, v):
        if u == v:
            return 0
        if u == "x" or v == "x":
            return (v if u == "x" else u)[1]
        if u[0] == v[0]:
            return abs(u[1] - v[1])
        return u[1] + v[1]

    def token(self, v):
        return v if v == "x" else f"({v[0]},{v[1]})"


class HubRays(LazyGraph):
    """Two disjoint rays L1, L2 with every vertex joined to a hub.

    ``split=True`` gives X1 (hubs x1 ~ x2, L_j joined to x_j); ``split=False``
    gives X2 (one hub x joined to both rays).
    """

    def __init__(self, split: bool):
        self.split = split
        self.name = "x1" if split else "x2"
        self.root = "x1" if split else "x"

    def _hub(self, j):
        return f"x{j}" if self.split else "x"

    def neighbors(self, v):
        if isinstance(v, str):
            if self.split:
                j = int(v[1])
                yield "x2" if j == 1 else "x1"
                yield from ((j, n) for n in itertools.count())
            else:
                for n in itertools.count():
                    yield (1, n)
                    yield (2, n)
            return
        j, n = v
        yield self._hub(j)
        if n > 0:
            yield (j, n - 1)
        yield (j, n + 1)

    def is_adjacent(self, u, v):
        if u == v:
            return False
        if isinstance(u, str) and isinstance(v, str):
            return self.split
        if isinstance(u, str) or isinstance(v, str):
            hub, w = (u, v) if isinstance(u, str) else (v, u)
            return hub == self._hub(w[0])
        return u[0] == v[0] and abs(u[1] - v[1]) == 1

    def degree_hint(self, v):
        return INFINITE if isinstance(v, str) else (2 if v[1] == 0 else 3)

    def exact_metric(self, u, v):
        if u == v:
            return 0
        if isinstance(u, str) and isinstance(v, str):
            return 1
        if isinstance(u, str) or isinstance(v, str):
            hub, w = (u, v) if isinstance(u, str) else (v, u)
            return 1 if hub == self._hub(w[0]) else 2
        if u[0] == v[0]:
            return min(abs(u[1] - v[1]), 2)
        return 3 if self.split else 2

    def token(self, v):
        return v if isinstance(v, str) else f"({v[0]},{v[1]})"


def _tree_distance(u: tuple, v: tuple) -> int:
    k = 0
    for a, b in zip(u, v):
        if a != b:
            break
        k += 1
    return len(u) + len(v) - 2 * k


class AddressTree(LazyGraph):
    """Rooted tree on address tuples, with pairs at tree distance <= r joined.

    ``branching=None`` means every vertex has countably many children; the
    neighbour stream is then dovetailed so every neighbour appears at a finite
    position. Only r in {1, 2} is supported (the plain tree and tree+2).
    """

    def __init__(self, branching: int | None = None, r: int = 2):
        if branching is not None and branching < 2:
            raise ConfigError("branching must be >= 2 or infinite")
        if r not in (1, 2):
            raise ConfigError("address trees support r = 1 or 2")
        self.branching = branching
        self.r = r
        b = "inf" if branching is None else str(branching)
        self.name = f"treeplus2:b={b}" if r == 2 else f"tree:b={b}"
        self.root = ()

    def neighbors(self, v):
        if v:
            yield v[:-1]
            if self.r == 2 and len(v) > 1:
                yield v[:-2]
        stages = itertools.count() if self.branching is None else range(self.branching)
        for s in stages:
            if self.r == 2 and v and s != v[-1]:
                yield v[:-1] + (s,)
            yield v + (s,)
            if self.r == 2:
                for t in range(s):
                    yield v + (t, s)
                    yield v + (s, t)
                yield v + (s, s)

    def is_adjacent(self, u, v):
        if self.branching is not None and any(i >= self.branching for i in u + v):
            return False
        return 1 <= _tree_distance(u, v) <= self.r

    def degree_hint(self, v):
        if self.branching is None:
            return INFINITE
        b = self.branching
        if self.r == 1:
            return b + (1 if v else 0)
        up = (1 + (b - 1) if v else 0) + (1 if len(v) > 1 else 0)
        return up + b + b * b

    def exact_metric(self, u, v):
        return -(-_tree_distance(u, v) // self.r)

    def token(self, v):
        return "o" if not v else ".".join(map(str, v))

    def default_budget(self, radius):
        return radius + 2


class KNChain(LazyGraph):
    """Complete graphs on the naturals, in four arrangements.

    5a: one K_N, vertices (0, i). 5b: K_N^(1), K_N^(2) with hubs x1 ~ x2.
    5c: the same with a single hub x. 5d: levels (n, i), n in Z, complete
    inside a level and between consecutive levels.
    """

    VARIANTS = ("5a", "5b", "5c", "5d")

    def __init__(self, variant: str):
        if variant not in self.VARIANTS:
            raise ConfigError(f"unknown K_N chain variant {variant!r}")
        self.variant = variant
        self.name = f"kn-chain:variant={variant}"
        self.root = {"5a": (0, 0), "5b": "x1", "5c": "x", "5d": (0, 0)}[variant]

    def _hub(self, level):
        return {"5b": f"x{level}", "5c": "x"}.get(self.variant)

    def neighbors(self, v):
        var = self.variant
        if isinstance(v, str):
            if var == "5b":
                j = int(v[1])
                yield "x2" if j == 1 else "x1"
                yield from ((j, i) for i in itertools.count())
            else:
                for i in itertools.count():
                    yield (1, i)
                    yield (2, i)
            return
        n, i = v
        hub = self._hub(n)
        if hub is not None:
            yield hub
        for s in itertools.count():
            if s != i:
                yield (n, s)
            if var == "5d":
                yield (n + 1, s)
                yield (n - 1, s)

    def is_adjacent(self, u, v):
        return u != v and self.exact_metric(u, v) == 1

    def degree_hint(self, v):
        return INFINITE

    def exact_metric(self, u, v):
        if u == v:
            return 0
        var = self.variant
        if var == "5d":
            return abs(u[0] - v[0]) or 1
        if isinstance(u, str) and isinstance(v, str):
            return 1
        if isinstance(u, str) or isinstance(v, str):
            hub, w = (u, v) if isinstance(u, str) else (v, u)
            if var == "5a":
                raise ConfigError("5a has no hubs")
            return 1 if hub == self._hub(w[0]) else 2
        if u[0] == v[0]:
            return 1
        return 3 if var == "5b" else 2

    def token(self, v):
        return v if isinstance(v, str) else f"({v[0]},{v[1]})"
