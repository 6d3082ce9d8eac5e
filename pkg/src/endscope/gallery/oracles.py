"""Closed-form separation oracles for the gallery graphs.

An oracle answers four questions, each with None meaning "no opinion":

* ``classify(carrier)``: certified cut kinds of one of its own shapes
* ``separator(r1, r2, notion, depth)``: a shape meant to hold r1's tail and not r2's
* ``equivalent(r1, r2, notion)``: a tag when the two rays share an end
* ``tail_in(ray, carrier)``: (inside, from_index) for rays it recognises

Separators are only proposals; ``separation_verdict`` still checks the cut
kind and both tails before reporting a separation.
"""
from __future__ import annotations

from ..cuts import GalleryShape, Notion

ALL_YES = {Notion.VERTEX: True, Notion.EDGE: True, Notion.METRIC: True}


def _side(ray, coordinate) -> int | None:
    # sign of the coordinate once the ray has left K(root, 1)
    if not ray.has_escape:
        return None
    i0 = ray.escape(1)
    if i0 is None:
        return None
    c = coordinate(ray(i0))
    return (c > 0) - (c < 0)


class GalleryOracle:
    def __init__(self, graph):
        self.graph = graph

    def shape(self, tag, params, predicate, kinds, bound, theta_diameter_bound=None) -> GalleryShape:
        return GalleryShape(self.graph.name, tag, tuple(params), predicate, dict(kinds), bound,
                            theta_diameter_bound=theta_diameter_bound)

    def classify(self, carrier):
        if isinstance(carrier, GalleryShape) and carrier.graph_name == self.graph.name:
            return dict(carrier.kinds)
        return None

    def separator(self, r1, r2, notion, depth):
        return None

    def equivalent(self, r1, r2, notion):
        if r1.end_key is not None and r1.end_key == r2.end_key:
            return f"same-end:{r1.end_key}"
        return None

    def tail_in(self, ray, carrier):
        return None


class TwoSidedOracle(GalleryOracle):
    """Ladder and line: the two ends are the two half-infinite sides."""

    def __init__(self, graph, coordinate, bound):
        super().__init__(graph)
        self.coordinate = coordinate
        self.bound = bound

    def separator(self, r1, r2, notion, depth):
        s1, s2 = _side(r1, self.coordinate), _side(r2, self.coordinate)
        if s1 is None or s2 is None or s1 == s2 or 0 in (s1, s2):
            return None
        coord = self.coordinate
        return self.shape("half", (s1,), lambda v: coord(v) * s1 >= 1, ALL_YES, self.bound, 1)

    def equivalent(self, r1, r2, notion):
        s1, s2 = _side(r1, self.coordinate), _side(r2, self.coordinate)
        if s1 is not None and s1 == s2 and s1 != 0:
            return "two-sided:" + ("right" if s1 > 0 else "left")
        return super().equivalent(r1, r2, notion)


class HubOracle(GalleryOracle):
    """X1/X2 and the K_N variants 5b/5c: two branches hanging off hubs.

    Rays are recognised through their ``end_key`` (the branch index).
    """

    def __init__(self, graph, split: bool):
        super().__init__(graph)
        self.split = split

    def separator(self, r1, r2, notion, depth):
        j, k = r1.end_key, r2.end_key
        if j is None or k is None or j == k:
            return None
        if self.split:
            hub = f"x{j}"
            return self.shape(f"branch{j}+{hub}", (j,),
                              lambda v: v == hub or (isinstance(v, tuple) and v[0] == j), ALL_YES, 0, 0)
        kinds = {Notion.VERTEX: True, Notion.EDGE: False, Notion.METRIC: True}
        return self.shape(f"branch{j}", (j,), lambda v: isinstance(v, tuple) and v[0] == j, kinds, 0, 0)

    def equivalent(self, r1, r2, notion):
        if not self.split and Notion(notion) is Notion.EDGE and r1.end_key and r2.end_key:
            # every finite edge set misses infinitely many hub edges of both branches
            return "hub-shared"
        return super().equivalent(r1, r2, notion)


class LevelOracle(GalleryOracle):
    """Level chain 5d: one vertex/edge end, two proper metric ends (level -> +-inf)."""

    def separator(self, r1, r2, notion, depth):
        if Notion(notion) is not Notion.METRIC:
            return None
        s1, s2 = _side(r1, lambda v: v[0]), _side(r2, lambda v: v[0])
        if s1 is None or s2 is None or s1 == s2 or 0 in (s1, s2):
            return None
        kinds = {Notion.VERTEX: False, Notion.EDGE: False, Notion.METRIC: True}
        tag = "levels<=0" if s1 < 0 else "levels>=0"
        return self.shape(tag, (s1,), lambda v: v[0] * s1 >= 0, kinds, 1, 1)

    def equivalent(self, r1, r2, notion):
        if Notion(notion) is not Notion.METRIC:
            # removing finitely many vertices never disconnects two levels
            return "single-end"
        s1, s2 = _side(r1, lambda v: v[0]), _side(r2, lambda v: v[0])
        if s1 is not None and s1 == s2 and s1 != 0:
            return "level-direction:" + ("+" if s1 > 0 else "-")
        return super().equivalent(r1, r2, notion)


class ConeOracle(GalleryOracle):
    """Trees with distance-r edges added (tree, tree+2, free groups).

    Separators are prefix cones. With infinite branching the cone boundary
    contains infinitely many siblings, so only the metric kind survives and
    the vertex/edge topologies are indiscrete.
    """

    def __init__(self, graph, r: int, finite_degree: bool):
        super().__init__(graph)
        self.r = r
        self.finite_degree = finite_degree
        # a plain tree cone has a single boundary vertex whatever the branching
        self.finite_boundary = finite_degree or r == 1

    def separator(self, r1, r2, notion, depth):
        if not (r1.has_escape and r2.has_escape):
            return None
        i1, i2 = r1.escape(depth), r2.escape(depth)
        if i1 is None or i2 is None:
            return None
        w1, w2 = r1(i1), r2(i2)
        k = 0
        while k < min(len(w1), len(w2)) and w1[k] == w2[k]:
            k += 1
        if k >= min(len(w1), len(w2)):
            return None
        p = tuple(w1[: k + 1])
        fin = self.finite_boundary
        kinds = {Notion.VERTEX: fin, Notion.EDGE: fin, Notion.METRIC: True}
        bound = -(-(len(p) + self.r - 1) // self.r)
        return self.shape("cone", (self.graph.token(p),), lambda v: tuple(v[: len(p)]) == p, kinds, bound)

    def equivalent(self, r1, r2, notion):
        if not self.finite_boundary and Notion(notion) is not Notion.METRIC:
            return "indiscrete"
        return super().equivalent(r1, r2, notion)
