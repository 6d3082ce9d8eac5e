"""Rays, tail containment, separation verdicts and end approximants."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Sequence

import networkx as nx

from .cuts import (
    BallComplementComponent,
    Carrier,
    Cert,
    Complement,
    ComplementOfFinite,
    ComponentOfComplement,
    CutCandidate,
    ExplicitFinite,
    Notion,
    StarVerdict,
    WindowSide,
    classify_cut,
    nested_witness_path,
    star_ball_score,
)
from .errors import ClassificationError, ConfigError, DepthError, InvalidRayError, NotMetricRayError, OracleConflict
from .graph import Window, ball, components_of_complement, explore

DEFAULT_MAX_VERTICES = 4000


# --- rays -----------------------------------------------------------------


class MetricityKind(str, Enum):
    EVIDENCE = "MetricRayEvidence"
    NOT_METRIC = "NotMetricCertified"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Metricity:
    kind: MetricityKind
    depth: int

    def to_dict(self):
        return {"kind": self.kind.value, "depth": self.depth}


class Ray:
    """A ray given by an index -> vertex generator.

    ``escape(r)``, when supplied, is a certified closed form: the first index
    after which the ray stays outside K(root, r), or None when the ray returns
    to that ball infinitely often. ``end_key`` optionally names the end the
    ray belongs to in a gallery's closed-form description.
    """

    def __init__(self, graph, generator: Callable[[int], object], name="ray", escape=None, end_key=None):
        self.graph = graph
        self.generator = generator
        self.name = name
        self._escape = escape
        self.end_key = end_key
        self._cache: list = []
        self._seen: dict = {}
        self.verified_prefix = 0

    def __call__(self, i: int):
        while len(self._cache) <= i:
            self._cache.append(self.generator(len(self._cache)))
        return self._cache[i]

    def __repr__(self):
        return f"Ray({self.name!r} on {self.graph.name})"

    def prefix(self, n: int) -> list:
        return [self(i) for i in range(n)]

    def verify(self, n: int) -> int:
        """Check indices below ``n`` for distinctness and adjacency."""
        g = self.graph
        for i in range(self.verified_prefix, n):
            v = self(i)
            if v in self._seen:
                raise InvalidRayError(f"{self.name}: index {i} repeats index {self._seen[v]}")
            if i > 0 and not g.is_adjacent(self(i - 1), v):
                raise InvalidRayError(f"{self.name}: indices {i - 1} and {i} are not adjacent")
            self._seen[v] = i
            self.verified_prefix = i + 1
        return self.verified_prefix

    @property
    def has_escape(self) -> bool:
        return self._escape is not None

    def escape(self, r: int) -> int | None:
        if self._escape is None:
            raise DepthError(f"{self.name}: no escape certificate")
        return self._escape(r)

    def metricity(self, depth: int) -> Metricity:
        if self._escape is None:
            return Metricity(MetricityKind.UNKNOWN, depth)
        for r in range(depth + 1):
            if self._escape(r) is None:
                return Metricity(MetricityKind.NOT_METRIC, r)
        return Metricity(MetricityKind.EVIDENCE, depth)

    def checkpoints(self, depth: int) -> list[int]:
        """Escape indices for radii 0..depth (strictly increasing for metric rays)."""
        return [self.escape(r) for r in range(depth + 1)]


# --- tail containment -----------------------------------------------------


class Answer(str, Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "UnknownAtDepth"


@dataclass(frozen=True)
class TailResult:
    answer: Answer
    index: int | None = None
    depth: int | None = None
    method: str = ""

    def to_dict(self):
        out = {"answer": self.answer.value, "method": self.method}
        if self.index is not None:
            out["from_index"] = self.index
        if self.depth is not None:
            out["depth"] = self.depth
        return out


def _start_of_run(ray: Ray, carrier: Carrier, i0: int) -> int:
    n = i0
    while n > 0 and carrier.contains(ray(n - 1)) is True:
        n -= 1
    return n


def tail_in(ray: Ray, carrier: Carrier, window: Window | None = None, oracle=None) -> TailResult:
    """Does all but finitely much of ``ray`` lie in ``carrier``?

    The certified route uses the carrier's crossing bound B: once the ray has
    left K(root, B) it can no longer cross between the set and its
    complement, so membership at the escape index decides the whole tail.
    """
    depth = window.radius if window is not None else None
    if window is not None:
        ray.verify(window.radius + 1)
    if isinstance(carrier, ComplementOfFinite) and not carrier.removed:
        return TailResult(Answer.YES, 0, depth, "whole-vertex-set")
    if isinstance(carrier, ExplicitFinite):
        return TailResult(Answer.NO, None, depth, "finite-set")
    if oracle is not None:
        told = oracle.tail_in(ray, carrier)
        if told is not None:
            inside, n = told
            return TailResult(Answer.YES if inside else Answer.NO, n if inside else None, depth, "oracle")
    bound = carrier.crossing_bound(ray.graph)
    if bound is not None and ray.has_escape:
        i0 = ray.escape(bound)
        if i0 is not None:
            side = carrier.contains(ray(i0))
            if side is True:
                return TailResult(Answer.YES, _start_of_run(ray, carrier, i0), depth, "crossing-bound")
            if side is False:
                return TailResult(Answer.NO, None, depth, "crossing-bound")
    return TailResult(Answer.UNKNOWN, None, depth, "undecided")


# --- verdicts -------------------------------------------------------------


class Outcome(str, Enum):
    SEPARATED = "Separated"
    EQUIVALENT = "EquivalentCertified"
    NOT_SEPARATED = "NotSeparatedAtDepth"
    UNKNOWN = "Unknown"


CERTIFIED = (Outcome.SEPARATED, Outcome.EQUIVALENT)


@dataclass(frozen=True)
class Verdict:
    notion: Notion
    outcome: Outcome
    depth: int
    certificate: CutCandidate | None = None
    tag: str | None = None
    tails: tuple = ()
    best_candidate: CutCandidate | None = None
    note: str | None = None

    @property
    def certified(self) -> bool:
        return self.outcome in CERTIFIED

    def to_dict(self, window: Window | None = None) -> dict:
        out = {"notion": self.notion.value, "outcome": self.outcome.value, "depth": self.depth}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict(window)
        if self.tag is not None:
            out["tag"] = self.tag
        if self.tails:
            out["tails"] = [t.to_dict() for t in self.tails]
        if self.best_candidate is not None:
            out["best_candidate"] = self.best_candidate.to_dict(window)
        if self.note:
            out["note"] = self.note
        return out


def _window_for(graph, depth, window, budget, max_vertices):
    if window is not None:
        return window
    return explore(graph, depth, budget, max_vertices=max_vertices)


def _certify(window, carrier, r1, r2, notion, oracle):
    cand = classify_cut(window, carrier, oracle)
    if cand.kind(notion) is not Cert.YES:
        return None, cand
    t1 = tail_in(r1, carrier, window, oracle)
    t2 = tail_in(r2, Complement(carrier), window, oracle)
    if t1.answer is Answer.YES and t2.answer is Answer.YES:
        return (t1, t2), cand
    return None, cand


def _anchor(ray: Ray, window: Window):
    # last verified vertex that is still inside the window
    for i in range(ray.verified_prefix - 1, -1, -1):
        if ray(i) in window:
            return ray(i)
    raise DepthError(f"{ray.name} has no vertex in the window")


def _window_candidates(window: Window, r1: Ray, r2: Ray, notion: Notion, depth: int) -> list[Carrier]:
    a1, a2 = _anchor(r1, window), _anchor(r2, window)
    out: list[Carrier] = []
    for r in range(1, depth):
        kball, _ = ball(window, window.origin, r)
        if a1 in kball or a2 in kball:
            continue
        labeling = components_of_complement(window, kball)
        if labeling.component_of(a1) != labeling.component_of(a2):
            fp = labeling.component_of(a1)
            out.append(BallComplementComponent(
                window.origin, r, fp, labeling.members[fp], labeling.closed().count(fp) > 0, kball))
    if a1 == a2 or notion is Notion.METRIC:
        return out
    g = nx.Graph()
    g.add_nodes_from(window.adjacency)
    g.add_edges_from((u, w) for u, ws in window.adjacency.items() for w in ws)
    if notion is Notion.VERTEX and a2 not in window.adjacency[a1]:
        sep = frozenset(nx.minimum_node_cut(g, a1, a2))
        labeling = components_of_complement(window, sep)
        fp = labeling.component_of(a1)
        out.append(ComponentOfComplement(sep, fp, labeling.members[fp], fp in labeling.closed()))
    elif notion is Notion.EDGE:
        cut = nx.minimum_edge_cut(g, a1, a2)
        h = g.copy()
        h.remove_edges_from(cut)
        side = frozenset(nx.node_connected_component(h, a1))
        out.append(WindowSide(side, f"min-edge-cut:{len(cut)}"))
    return out


def separation_verdict(r1: Ray, r2: Ray, notion, depth: int, oracle=None, window: Window | None = None,
                       budget=None, max_vertices: int | None = DEFAULT_MAX_VERTICES) -> Verdict:
    """Three-valued verdict on whether two rays are separated under ``notion``."""
    notion = Notion(notion)
    if depth < 1:
        raise ConfigError("depth must be >= 1")
    if r1.graph is not r2.graph:
        raise ConfigError("rays live on different graphs")
    r1.verify(depth + 1)
    r2.verify(depth + 1)
    if notion is Notion.METRIC:
        for r in (r1, r2):
            m = r.metricity(depth)
            if m.kind is not MetricityKind.EVIDENCE:
                raise NotMetricRayError(f"{r.name}: {m.kind.value} at depth {m.depth}")
    window = _window_for(r1.graph, depth, window, budget, max_vertices)
    if oracle is not None:
        shape = oracle.separator(r1, r2, notion, depth)
        if shape is not None:
            tails, cand = _certify(window, shape, r1, r2, notion, oracle)
            if tails is not None:
                return Verdict(notion, Outcome.SEPARATED, depth, cand, tag=shape.tag, tails=tails)
        tag = oracle.equivalent(r1, r2, notion)
        if tag is not None:
            return Verdict(notion, Outcome.EQUIVALENT, depth, tag=tag)
    best = None
    for carrier in _window_candidates(window, r1, r2, notion, depth):
        tails, cand = _certify(window, carrier, r1, r2, notion, oracle)
        if tails is not None:
            return Verdict(notion, Outcome.SEPARATED, depth, cand, tails=tails)
        key = (len(cand.theta), cand.carrier.describe().get("fingerprint", ""))
        if best is None or key < best[0]:
            best = (key, cand)
    return Verdict(notion, Outcome.NOT_SEPARATED, depth, best_candidate=best[1] if best else None)


def coarsen(verdict: Verdict) -> Verdict:
    """Re-tag an edge-end separation as a vertex-end separation."""
    if verdict.outcome is not Outcome.SEPARATED or verdict.certificate is None:
        return replace(verdict, note="passthrough: nothing to coarsen")
    if verdict.notion is not Notion.EDGE:
        raise ConfigError("coarsen expects an edge-end verdict")
    cert = verdict.certificate
    if cert.kind(Notion.VERTEX) is not Cert.YES:
        raise OracleConflict("edge certificate without vertex certification")
    return replace(verdict, notion=Notion.VERTEX, note="coarsened from edge")


# --- counting -------------------------------------------------------------


class CountStatus(str, Enum):
    STABILIZED = "StabilizedCertified"
    GROWING = "GrowingLowerBound"
    INFINITE = "InfiniteCertified"


INFINITE_TRUTH = "Infinite"


@dataclass(frozen=True)
class EndCount:
    notion: Notion
    depth: int
    lower_bound: int
    status: CountStatus
    family: tuple = ()
    star: object = None

    def to_dict(self, window: Window | None = None):
        out = {
            "notion": self.notion.value,
            "depth": self.depth,
            "lower_bound": self.lower_bound,
            "status": self.status.value,
            "family": list(self.family),
        }
        if self.star is not None:
            out["star"] = self.star.to_dict(window)
        return out


def _max_family(names: list[str], separated: set) -> tuple:
    for size in range(len(names), 0, -1):
        for combo in itertools.combinations(names, size):
            if all((a, b) in separated for a, b in itertools.combinations(combo, 2)):
                return combo
    return ()


def count_ends_at_depth(gallery_graph, notion, depth: int, budget=None, window: Window | None = None) -> EndCount:
    """Largest pairwise-separated family among the gallery's named rays."""
    notion = Notion(notion)
    gg = gallery_graph
    rays = gg.rays()
    if notion is Notion.METRIC:
        rays = {k: r for k, r in rays.items() if r.metricity(depth).kind is MetricityKind.EVIDENCE}
    names = sorted(rays)
    star = None
    if gg.truth.star_ball_examples:
        center, radius = gg.truth.star_ball_examples[0]
        star_window = explore(gg.graph, depth, budget, max_vertices=20000)
        star = star_ball_score(star_window, center, radius)
    if names:
        window = _window_for(gg.graph, depth, window, budget, DEFAULT_MAX_VERTICES)
    separated = set()
    for a, b in itertools.combinations(names, 2):
        v = separation_verdict(rays[a], rays[b], notion, depth, gg.oracle, window)
        if v.outcome is Outcome.SEPARATED:
            separated |= {(a, b), (b, a)}
    family = _max_family(names, separated)
    truth = gg.truth.end_counts[notion]
    n = len(family)
    if truth == INFINITE_TRUTH:
        status = CountStatus.INFINITE
    elif n > truth:
        raise OracleConflict(f"found {n} separated ends, ground truth says {truth}")
    else:
        status = CountStatus.STABILIZED if n == truth else CountStatus.GROWING
    return EndCount(notion, depth, n, status, family, star)


# --- end approximants -----------------------------------------------------


@dataclass(frozen=True)
class EndApproximant:
    chain: tuple
    witness_path: tuple
    depth: int
    members: tuple = field(default=(), repr=False, compare=False)

    def to_dict(self, window: Window | None = None):
        tok = window.token if window is not None else str
        return {
            "chain": [{"radius": r, "fingerprint": fp} for r, fp in self.chain],
            "witness_path": [tok(v) for v in self.witness_path],
            "depth": self.depth,
        }


def _approximant_from_vertices(window: Window, picks: list) -> EndApproximant:
    chain, members = [], []
    root = window.origin
    for r, v in picks:
        kball, _ = ball(window, root, r)
        labeling = components_of_complement(window, kball)
        fp = labeling.component_of(v)
        if fp is None:
            raise DepthError(f"{window.token(v)} is inside K(root, {r})")
        chain.append((r, fp))
        members.append(labeling.members[fp])
    path = nested_witness_path(window, members)
    return EndApproximant(tuple(chain), tuple(path), window.radius, tuple(members))


def end_approximant(source, depth: int, window: Window | None = None, budget=None) -> EndApproximant:
    """Nested ball-complement components selected by a ray, or by a cut chain.

    ``source`` is a :class:`Ray` (its escape certificate picks the component
    at each radius) or a sequence of carriers e_1 >= e_2 >= ... .
    """
    if isinstance(source, Ray):
        ray = source
        picks = []
        for r in range(1, depth + 1):
            i0 = ray.escape(r) if ray.has_escape else _empirical_escape(ray, r, depth)
            if i0 is None:
                raise ClassificationError(
                    f"{ray.name} does not escape K(root, {r}); classify it as a sequence",
                    {"redirect": "classify_sequence", "radius": r},
                )
            picks.append((r, ray(i0)))
        if window is None:
            reach = max(ray.graph.dist(ray.graph.root, v) or 0 for _, v in picks)
            window = explore(ray.graph, max(depth + 1, reach), budget, max_vertices=20000)
        ray.verify(window.radius + 1)
        window.require(*(v for _, v in picks))
        return _approximant_from_vertices(window, picks)
    carriers = list(source)
    if window is None:
        raise ConfigError("a cut chain needs an explicit window")
    members = [frozenset(v for v in window.adjacency if c.contains(v) is True) for c in carriers]
    for outer, inner in zip(members, members[1:]):
        if not inner < outer:
            raise ClassificationError("cut chain is not strictly decreasing", {"redirect": "classify_sequence"})
    path = nested_witness_path(window, members)
    chain = tuple((None, window.token(window.min_token_vertex(m))) for m in members)
    return EndApproximant(chain, tuple(path), window.radius, tuple(members))


def _empirical_escape(ray: Ray, r: int, depth: int) -> int | None:
    # scan a prefix; an index counts only if the rest of the prefix stays out
    g = ray.graph
    horizon = 4 * (depth + 2)
    if g.exact_metric is None:
        return None
    last_inside = -1
    for i in range(horizon):
        if g.exact_metric(g.root, ray(i)) <= r:
            last_inside = i
    i0 = last_inside + 1
    return i0 if i0 < horizon // 2 else None


# --- sequence classification ---------------------------------------------


class Case(str, Enum):
    VERTEX_LIMIT = "VertexLimit"
    LOCAL_END = "LocalEnd"
    PROPER_METRIC_END = "ProperMetricEnd"
    STAR_END = "StarEnd"


@dataclass(frozen=True)
class SequenceClassification:
    case: Case
    depth: int
    evidence: dict
    vertex: object = None
    approximant: EndApproximant | None = None

    def to_dict(self, window: Window | None = None):
        out = {"case": self.case.value, "depth": self.depth, "evidence": self.evidence}
        if self.vertex is not None:
            out["vertex"] = window.graph.token(self.vertex) if window is not None else str(self.vertex)
        if self.approximant is not None:
            out["approximant"] = self.approximant.to_dict(window)
        return out


def classify_sequence(graph, seq: Callable[[int], object] | Sequence, depth: int, window: Window | None = None,
                      budget=None, multiplicity: int | None = None) -> SequenceClassification:
    """Sort a vertex sequence into one of the four convergence cases.

    Indices 0..2*depth+1 are inspected and the tail is every index above
    ``depth``. A vertex hit more than ``multiplicity`` times (default
    ``depth``) without the tail being constant is reported as conflicting.
    """
    if depth < 1:
        raise ConfigError("depth must be >= 1")
    get = seq.__getitem__ if isinstance(seq, Sequence) else seq
    n = 2 * depth + 2
    elems = [get(i) for i in range(n)]
    tail = elems[depth + 1:]
    if all(v == tail[0] for v in tail):
        return SequenceClassification(Case.VERTEX_LIMIT, depth, {"inspected": n}, vertex=tail[0])
    limit = depth if multiplicity is None else multiplicity
    counts = Counter(elems)
    worst, hits = counts.most_common(1)[0]
    diag = {"inspected": n, "max_multiplicity": hits}
    if hits > limit:
        raise ClassificationError("a vertex repeats too often without the tail becoming constant", diag)
    root = graph.root
    if graph.exact_metric is not None:
        dist = [graph.exact_metric(root, v) for v in tail]
    else:
        if window is None:
            window = explore(graph, n, budget, max_vertices=20000)
        window.require(*tail)
        reach = window.bfs([root])
        dist = [reach[v] for v in tail]
    diag["tail_distances"] = [min(dist), max(dist)]
    if max(dist) <= depth:
        diag["ball_radius"] = max(dist)
        return SequenceClassification(Case.LOCAL_END, depth, diag)
    if min(dist) <= depth:
        raise ClassificationError("tail neither stays in a ball nor escapes K(root, depth)", diag)
    if window is None:
        window = explore(graph, max(dist), budget, max_vertices=20000)
    window.require(*tail)
    per_radius = []
    single = True
    scattered = False
    cap = max(1, len(tail) // 4)
    for r in range(1, depth + 1):
        kball, _ = ball(window, root, r)
        labeling = components_of_complement(window, kball)
        load = Counter(labeling.component_of(v) for v in tail)
        per_radius.append(len(load))
        if len(load) > 1:
            single = False
        if max(load.values()) <= cap and all(fp in labeling.closed() for fp in load):
            scattered = True
    diag["components_per_radius"] = per_radius
    if single:
        picks = [(r, tail[-1]) for r in range(1, depth + 1)]
        approx = _approximant_from_vertices(window, picks)
        return SequenceClassification(Case.PROPER_METRIC_END, depth, diag, approximant=approx)
    if scattered:
        stars = [star_ball_score(window, root, r) for r in range(1, depth + 1)]
        hit = next((s for s in stars if s.verdict is StarVerdict.EVIDENCE), None)
        if hit is not None:
            diag["star_radius"] = hit.radius
            diag["star_score"] = hit.score
            return SequenceClassification(Case.STAR_END, depth, diag)
    raise ClassificationError("no case fits the inspected prefix", diag)
