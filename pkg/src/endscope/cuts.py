"""Vertex/edge boundaries, cut classification, star balls.

Every classification is three-valued: ``YesCertified`` and ``NoCertified``
are never revised by deeper exploration; anything else is reported as
``UnknownAtDepth`` together with the window radius.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable

from .errors import ConfigError, DepthError, OracleConflict
from .graph import (
    INFINITE,
    Certainty,
    DiameterEstimate,
    Openness,
    Window,
    ball,
    components_of_complement,
    explore,
    set_diameter,
)


class Notion(str, Enum):
    VERTEX = "vertex"
    EDGE = "edge"
    METRIC = "metric"


class Cert(str, Enum):
    YES = "YesCertified"
    NO = "NoCertified"
    UNKNOWN = "UnknownAtDepth"


# --- carriers -------------------------------------------------------------


class Carrier:
    """A (possibly infinite) vertex set e, known through membership queries.

    ``contains`` answers True/False when membership is certain and None when
    the window cannot decide. ``crossing_bound`` is a radius B such that every
    edge between e and its complement has an endpoint in K(root, B), or None.
    """

    exact_membership = False

    def contains(self, v) -> bool | None:
        raise NotImplementedError

    def crossing_bound(self, graph) -> int | None:
        return None

    def facts(self, window: Window, members: frozenset) -> dict:
        return {}

    def describe(self) -> dict:
        raise NotImplementedError


def _max_root_distance(graph, vs) -> int | None:
    if graph.exact_metric is None:
        return None
    return max((graph.exact_metric(graph.root, v) for v in vs), default=0)


def _infinite_degree(window, vs) -> bool:
    return any(window.graph.degree_hint(v) == INFINITE for v in vs)


@dataclass(frozen=True)
class ExplicitFinite(Carrier):
    members: frozenset
    exact_membership = True

    def contains(self, v):
        return v in self.members

    def crossing_bound(self, graph):
        return _max_root_distance(graph, self.members) if self.members else None

    def facts(self, window, members):
        window.require(*self.members)
        if all(window.is_complete(v) for v in self.members):
            return dict(theta_finite=True, theta_exact=True, inner_finite=True, delta_finite=True, delta_exact=True)
        out = dict(inner_finite=True)
        if _infinite_degree(window, self.members):
            out.update(theta_finite=False, delta_finite=False)
        return out

    def describe(self):
        return {"type": "ExplicitFinite", "size": len(self.members)}


@dataclass(frozen=True)
class ComplementOfFinite(Carrier):
    removed: frozenset
    exact_membership = True

    def contains(self, v):
        return v not in self.removed

    def crossing_bound(self, graph):
        return _max_root_distance(graph, self.removed)

    def facts(self, window, members):
        window.require(*self.removed)
        out = dict(theta_finite=True)
        if all(window.is_complete(v) for v in self.removed):
            out.update(theta_exact=True, inner_finite=True, delta_finite=True, delta_exact=True)
        elif _infinite_degree(window, self.removed):
            out.update(inner_finite=False, delta_finite=False)
        return out

    def describe(self):
        return {"type": "ComplementOfFinite", "size": len(self.removed)}


@dataclass(frozen=True)
class BallComplementComponent(Carrier):
    """Component of K(center, radius)* seen in a window, named by fingerprint."""

    center: object
    radius: int
    fingerprint: str
    members: frozenset = field(repr=False)
    closed: bool = False
    ball_members: frozenset = field(default=frozenset(), repr=False)

    @classmethod
    def of(cls, window: Window, center, radius: int, vertex) -> "BallComplementComponent":
        kball, _ = ball(window, center, radius)
        labeling = components_of_complement(window, kball)
        fp = labeling.component_of(vertex)
        if fp is None:
            raise ConfigError(f"{window.token(vertex)} lies inside K({window.token(center)}, {radius})")
        return cls(center, radius, fp, labeling.members[fp], labeling.openness[fp] is Openness.CLOSED, kball)

    @property
    def exact_membership(self):
        return self.closed

    def contains(self, v):
        if v in self.members:
            return True
        if self.closed or v in self.ball_members:
            return False
        return None

    def crossing_bound(self, graph):
        if graph.exact_metric is None:
            return None
        return self.radius + graph.exact_metric(graph.root, self.center)

    def facts(self, window, members):
        if self.closed:
            return dict(theta_finite=True, theta_exact=True, inner_finite=True, delta_finite=True, delta_exact=True)
        out = dict(theta_diameter_finite=True, theta_diameter_bound=2 * self.radius)
        kball, complete = ball(window, self.center, self.radius)
        if complete:
            out["theta_finite"] = True
            g = window.graph
            if g.exact_metric is not None:
                sphere = [v for v in kball if g.exact_metric(self.center, v) == self.radius]
            else:
                dist = window.bfs([self.center], limit=self.radius)
                sphere = [v for v, d in dist.items() if d == self.radius]
            if all(window.is_complete(v) for v in sphere):
                out.update(inner_finite=True, delta_finite=True)
        return out

    def describe(self):
        return {
            "type": "BallComplementComponent",
            "radius": self.radius,
            "fingerprint": self.fingerprint,
            "openness": "Closed" if self.closed else "Open",
        }


@dataclass(frozen=True)
class ComponentOfComplement(Carrier):
    """Window component of X minus a finite separator."""

    removed: frozenset
    fingerprint: str
    members: frozenset = field(repr=False)
    closed: bool = False

    @property
    def exact_membership(self):
        return self.closed

    def contains(self, v):
        if v in self.members:
            return True
        if self.closed or v in self.removed:
            return False
        return None

    def crossing_bound(self, graph):
        return _max_root_distance(graph, self.removed)

    def facts(self, window, members):
        if self.closed:
            return dict(theta_finite=True, theta_exact=True, inner_finite=True, delta_finite=True, delta_exact=True)
        out = dict(theta_finite=True)
        if all(window.is_complete(v) for v in self.removed):
            out.update(inner_finite=True, delta_finite=True)
        return out

    def describe(self):
        return {"type": "ComponentOfComplement", "separator": len(self.removed), "fingerprint": self.fingerprint}


@dataclass(frozen=True)
class WindowSide(Carrier):
    """One side of a window edge cut; nothing is known outside the window."""

    members: frozenset = field(repr=False)
    label: str = ""

    def contains(self, v):
        return True if v in self.members else None

    def describe(self):
        return {"type": "WindowSide", "label": self.label, "size": len(self.members)}


@dataclass(frozen=True, eq=False)
class GalleryShape(Carrier):
    """Closed-form vertex set supplied by a gallery graph.

    ``kinds`` holds the certified cut kinds; they are only consulted through
    the gallery oracle.
    """

    graph_name: str
    tag: str
    params: tuple
    predicate: Callable = field(repr=False)
    kinds: dict = field(default_factory=dict)
    bound: int | None = None
    inner_finite: bool | None = None
    theta_diameter_bound: int | None = None
    exact_membership = True

    def contains(self, v):
        return bool(self.predicate(v))

    def crossing_bound(self, graph):
        return self.bound

    def facts(self, window, members):
        out = {}
        if self.theta_diameter_bound is not None:
            out.update(theta_diameter_finite=True, theta_diameter_bound=self.theta_diameter_bound)
        if self.inner_finite is not None:
            out["inner_finite"] = self.inner_finite
        return out

    def describe(self):
        return {"type": "GalleryShape", "tag": self.tag, "params": list(self.params)}


@dataclass(frozen=True, eq=False)
class Complement(Carrier):
    base: Carrier

    @property
    def exact_membership(self):
        return self.base.exact_membership

    def contains(self, v):
        c = self.base.contains(v)
        return None if c is None else not c

    def crossing_bound(self, graph):
        return self.base.crossing_bound(graph)

    def facts(self, window, members):
        f = self.base.facts(window, frozenset(v for v in window.adjacency if self.base.contains(v) is True))
        out = {}
        if "inner_finite" in f:
            out["theta_finite"] = f["inner_finite"]
        if "theta_finite" in f:
            out["inner_finite"] = f["theta_finite"]
        for k in ("delta_finite", "delta_exact"):
            if k in f:
                out[k] = f[k]
        return out

    def describe(self):
        return {"type": "Complement", "of": self.base.describe()}


@dataclass(frozen=True, eq=False)
class Intersection(Carrier):
    parts: tuple

    @property
    def exact_membership(self):
        return all(p.exact_membership for p in self.parts)

    def contains(self, v):
        answers = [p.contains(v) for p in self.parts]
        if any(a is False for a in answers):
            return False
        if all(a is True for a in answers):
            return True
        return None

    def crossing_bound(self, graph):
        bounds = [p.crossing_bound(graph) for p in self.parts]
        return None if any(b is None for b in bounds) else max(bounds)

    def describe(self):
        return {"type": "Intersection", "parts": [p.describe() for p in self.parts]}


def intersect(a: Carrier, b: Carrier) -> Carrier:
    if isinstance(a, ComplementOfFinite) and isinstance(b, ComplementOfFinite):
        return ComplementOfFinite(a.removed | b.removed)
    for x, y in ((a, b), (b, a)):
        if isinstance(x, ExplicitFinite) and y.exact_membership:
            return ExplicitFinite(frozenset(v for v in x.members if y.contains(v)))
    return Intersection((a, b))


# --- boundaries and classification ---------------------------------------


@dataclass(frozen=True)
class Boundaries:
    theta: frozenset
    inner_theta: frozenset
    delta: frozenset
    theta_finite: bool | None = None
    theta_exact: bool = False
    inner_finite: bool | None = None
    delta_finite: bool | None = None
    delta_exact: bool = False
    theta_diameter_finite: bool | None = None
    theta_diameter_bound: int | None = None

    @property
    def delta_growing(self) -> bool:
        return not self.delta_exact and self.delta_finite is not True


def window_members(window: Window, carrier: Carrier) -> frozenset:
    return frozenset(v for v in window.adjacency if carrier.contains(v) is True)


def _facts(window: Window, carrier: Carrier, members: frozenset, oracle) -> dict:
    if isinstance(carrier, Intersection):
        subs = [_facts(window, p, window_members(window, p), oracle) for p in carrier.parts]
        out = {}
        # boundaries of an intersection lie in the union of the parts' boundaries
        for key in ("theta_finite", "inner_finite", "delta_finite"):
            if all(s.get(key) is True for s in subs):
                out[key] = True
        if all(s.get("theta_finite") is True or s.get("theta_diameter_finite") is True for s in subs):
            out["theta_diameter_finite"] = True
        return out
    return carrier.facts(window, members)


def _crossing_facts(window: Window, carrier: Carrier) -> dict:
    # every crossing edge touches K(root, B); if that ball is fully enumerated
    # then all of delta is already in the window
    bound = carrier.crossing_bound(window.graph)
    if bound is None or not carrier.exact_membership or window.origin != window.graph.root:
        return {}
    kball, _ = ball(window, window.origin, bound)
    if not all(window.is_complete(v) for v in kball):
        return {}
    return dict(theta_finite=True, theta_exact=True, inner_finite=True, delta_finite=True, delta_exact=True)


def boundaries(window: Window, carrier: Carrier, oracle=None) -> Boundaries:
    """theta, inner theta and delta of ``carrier`` restricted to the window."""
    members = window_members(window, carrier)
    theta, inner, delta = set(), set(), set()
    for v in members:
        for w in window.adjacency[v]:
            if w not in members:
                theta.add(w)
                inner.add(v)
                delta.add(frozenset((v, w)))
    facts = _facts(window, carrier, members, oracle)
    facts.update(_crossing_facts(window, carrier))
    if facts.get("theta_finite") or facts.get("theta_diameter_finite"):
        facts.setdefault("theta_diameter_finite", True)
    return Boundaries(frozenset(theta), frozenset(inner), frozenset(delta), **facts)


def _cert(flag: bool | None) -> Cert:
    return Cert.YES if flag is True else Cert.NO if flag is False else Cert.UNKNOWN


@dataclass(frozen=True)
class CutCandidate:
    carrier: Carrier
    theta: frozenset
    inner_theta: frozenset
    delta: frozenset
    delta_growing: bool
    kinds: dict
    depth: int
    theta_diameter: DiameterEstimate | None = None

    def kind(self, notion: Notion) -> Cert:
        return self.kinds[Notion(notion)]

    def to_dict(self, window: Window | None = None) -> dict:
        tok = window.token if window is not None else str
        out = {
            "carrier": self.carrier.describe(),
            "theta": sorted(tok(v) for v in self.theta),
            "inner_theta_size": len(self.inner_theta),
            "delta_size": len(self.delta),
            "delta_growing": self.delta_growing,
            "kinds": {n.value: c.value for n, c in sorted(self.kinds.items(), key=lambda kv: kv[0].value)},
            "depth": self.depth,
        }
        if self.theta_diameter is not None:
            out["theta_diameter"] = self.theta_diameter.to_dict()
        return out


_ORDER = (Notion.EDGE, Notion.VERTEX, Notion.METRIC)


def _propagate(kinds: dict) -> dict:
    # edge-cut => vertex-cut => metric cut, and the contrapositive
    for strong, weak in zip(_ORDER, _ORDER[1:]):
        if kinds[strong] is Cert.YES:
            if kinds[weak] is Cert.NO:
                raise OracleConflict(f"{strong.value} certified but {weak.value} refuted")
            kinds[weak] = Cert.YES
    for strong, weak in reversed(list(zip(_ORDER, _ORDER[1:]))):
        if kinds[weak] is Cert.NO:
            kinds[strong] = Cert.NO
    return kinds


def classify_cut(window: Window, carrier: Carrier, oracle=None) -> CutCandidate:
    b = boundaries(window, carrier, oracle)
    kinds = {
        Notion.VERTEX: _cert(b.theta_finite),
        Notion.EDGE: _cert(True if (b.theta_finite and b.inner_finite) else b.delta_finite),
        Notion.METRIC: _cert(True if b.theta_diameter_finite else None),
    }
    if oracle is not None:
        told = oracle.classify(carrier) or {}
        for notion, value in told.items():
            notion = Notion(notion)
            if value is None:
                continue
            c = Cert.YES if value else Cert.NO
            if kinds[notion] is not Cert.UNKNOWN and kinds[notion] is not c:
                raise OracleConflict(f"oracle says {c.value} for {notion.value}, window says {kinds[notion].value}")
            kinds[notion] = c
    kinds = _propagate(kinds)
    diam = None
    if b.theta_exact:
        diam = set_diameter(window, b.theta)
    elif b.theta_diameter_bound is not None:
        diam = DiameterEstimate(b.theta_diameter_bound, Certainty.UPPER_BOUND)
        if b.theta and window.graph.exact_metric is not None:
            # the window part is a lower bound; meeting the closed-form bound pins it
            seen = set_diameter(window, b.theta)
            if seen.value == b.theta_diameter_bound:
                diam = DiameterEstimate(seen.value, Certainty.EXACT)
    growing = b.delta_growing
    return CutCandidate(carrier, b.theta, b.inner_theta, b.delta, growing, kinds, window.radius, diam)


# --- star balls -----------------------------------------------------------


class StarVerdict(str, Enum):
    EVIDENCE = "StarBallEvidence"
    REFUTED = "RefutedAtDepth"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class StarReport:
    center: object
    radius: int
    score: int
    open_component_count: int
    closed_component_count: int
    threshold: int
    verdict: StarVerdict
    depth: int

    def to_dict(self, window: Window | None = None) -> dict:
        return {
            "center": window.token(self.center) if window is not None else str(self.center),
            "radius": self.radius,
            "score": self.score,
            "open_component_count": self.open_component_count,
            "closed_component_count": self.closed_component_count,
            "threshold": self.threshold,
            "verdict": self.verdict.value,
            "depth": self.depth,
        }


def star_ball_score(window: Window, center, radius: int, threshold: int | None = None) -> StarReport:
    """Largest certified diameter among finite components of K(center, radius)*.

    Closed components are genuine finite components of the graph, so their
    diameters are sound lower bounds for the supremum over C_0(K).
    """
    kball, _ = ball(window, center, radius)
    labeling = components_of_complement(window, kball)
    score = 0
    for fp in labeling.closed():
        est = set_diameter(window, labeling.members[fp])
        if est.certainty is Certainty.EXACT:
            score = max(score, est.value)
    if threshold is None:
        threshold = window.radius - radius - 2
    if not window.frontier:
        verdict = StarVerdict.REFUTED
    elif score > 0 and score >= threshold:
        verdict = StarVerdict.EVIDENCE
    else:
        verdict = StarVerdict.UNKNOWN
    return StarReport(
        center, radius, score, len(labeling.open()), len(labeling.closed()), threshold, verdict, window.radius
    )


# --- nested descent -------------------------------------------------------


def inner_boundary(window: Window, members: frozenset) -> frozenset:
    return frozenset(v for v in members if any(w not in members for w in window.adjacency[v]))


def nested_witness_path(window: Window, chain: list[frozenset]) -> list:
    """Path through e_1 \\ e_2, e_2 \\ e_3, ... joining inner boundaries.

    Each segment starts at a vertex of the inner boundary of e_n and runs
    inside e_n \\ e_{n+1} until it steps into the inner boundary of e_{n+1}.
    """
    if not chain:
        return []
    for outer, inner in zip(chain, chain[1:]):
        if not inner <= outer:
            raise ConfigError("chain is not nested")
    start = inner_boundary(window, chain[0])
    if not start:
        raise DepthError("first set has no inner boundary in the window")
    path = [window.min_token_vertex(start)]
    for outer, inner in zip(chain, chain[1:]):
        targets = set(inner_boundary(window, inner))
        ring = outer - inner
        seg = window.bfs_path(path[-1], targets, allowed=lambda v, ring=ring: v in ring)
        if seg is None:
            raise DepthError("could not connect consecutive sets inside the window", required=window.radius + 1)
        path.extend(seg[1:])
    return path


class WitnessKind(str, Enum):
    METRIC_RAY_PREFIX = "MetricRayPrefix"
    STAR_BALL = "StarBallWitness"
    BOUNDED = "BoundedCertified"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class DiameterWitness:
    variant: WitnessKind
    depth: int
    path: tuple = ()
    checkpoints: tuple = ()
    star: StarReport | None = None
    diameter: int | None = None

    def to_dict(self, window: Window | None = None) -> dict:
        tok = window.token if window is not None else str
        out = {"variant": self.variant.value, "depth": self.depth}
        if self.path:
            out["path"] = [tok(v) for v in self.path]
            out["checkpoints"] = list(self.checkpoints)
        if self.star is not None:
            out["star"] = self.star.to_dict(window)
        if self.diameter is not None:
            out["diameter"] = self.diameter
        return out


def infinite_diameter_witness(graph, depth: int, window: Window | None = None, budget=None) -> DiameterWitness:
    """Finite-depth evidence for the infinite-diameter dichotomy.

    Descends through components of K(root, r)* for r = 1..depth. At each
    radius a star ball is reported as soon as its score clears the growth
    threshold; otherwise the descent continues into an open component. A
    completed descent yields a path whose checkpoints sit at distance r+1.
    """
    if depth < 1:
        raise ConfigError("depth must be >= 1")
    if window is None:
        window = explore(graph, depth + 2, budget, max_vertices=20000)
    if not window.frontier:
        diam = set_diameter(window, window.adjacency, use_exact_metric=False)
        return DiameterWitness(WitnessKind.BOUNDED, window.radius, diameter=diam.value)
    root = window.origin
    chain: list[frozenset] = []
    previous = None
    for r in range(1, depth + 1):
        report = star_ball_score(window, root, r)
        if report.verdict is StarVerdict.EVIDENCE:
            return DiameterWitness(WitnessKind.STAR_BALL, window.radius, star=report)
        kball, _ = ball(window, root, r)
        labeling = components_of_complement(window, kball)
        options = [fp for fp in labeling.open() if previous is None or labeling.members[fp] <= previous]
        if not options:
            return DiameterWitness(WitnessKind.UNKNOWN, window.radius)
        previous = labeling.members[options[0]]
        chain.append(previous)
    path = nested_witness_path(window, chain)
    g = window.graph
    checkpoints = []
    for v in path:
        d = g.exact_metric(root, v) if g.exact_metric is not None else window.layer[v]
        if not checkpoints or d > checkpoints[-1]:
            checkpoints.append(d)
    return DiameterWitness(WitnessKind.METRIC_RAY_PREFIX, window.radius, tuple(path), tuple(checkpoints))
