"""Quasi-isometries: sampled axiom checks, ray transport, fattening, quasi-openness.

All checks here are falsification-oriented. ``NoViolationFound`` means the
sampled pairs satisfied the bounds, never that the maps are quasi-isometries.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable

import numpy as np

from .cuts import Carrier, Cert, GalleryShape, Notion, classify_cut
from .ends import MetricityKind, Outcome, Ray, separation_verdict
from .errors import ConfigError, DepthError, NotMetricRayError, QISpecViolation
from .graph import Certainty, DiameterEstimate, LazyGraph, Window, distance, explore, set_diameter

WINDOW_CAP = 3000


@dataclass(frozen=True, eq=False)
class QuasiIsometrySpec:
    X: LazyGraph
    Y: LazyGraph
    phi: Callable
    psi: Callable
    a: int
    b: int
    c: int
    d: int
    name: str = "qi"

    def __post_init__(self):
        if min(self.a, self.b) < 1 or min(self.c, self.d) < 0:
            raise ConfigError("need a, b >= 1 and c, d >= 0")

    def with_phi(self, phi: Callable, name: str) -> "QuasiIsometrySpec":
        return QuasiIsometrySpec(self.X, self.Y, phi, self.psi, self.a, self.b, self.c, self.d, name)


def _metric(graph: LazyGraph, window: Window | None, u, v):
    """(distance, exact?) using the closed form when there is one."""
    if graph.exact_metric is not None:
        return graph.exact_metric(u, v), True
    if window is None or u not in window or v not in window:
        return None, False
    est = distance(window, u, v)
    return est.value, est.certainty is Certainty.EXACT


# --- axiom sampling -------------------------------------------------------


class QIVerdict(str, Enum):
    NO_VIOLATION = "NoViolationFound"
    VIOLATED = "Violated"


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    measured: int
    bound: int

    def to_dict(self):
        return {"axiom": self.axiom, "witness": list(self.witness), "measured": self.measured, "bound": self.bound}


@dataclass(frozen=True)
class QIReport:
    checked_pairs: int
    checked_points: int
    skipped: int
    violations: tuple
    seed: int

    @property
    def verdict(self) -> QIVerdict:
        return QIVerdict.VIOLATED if self.violations else QIVerdict.NO_VIOLATION

    def axioms_violated(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def to_dict(self):
        return {
            "checked_pairs": self.checked_pairs,
            "checked_points": self.checked_points,
            "skipped": self.skipped,
            "verdict": self.verdict.value,
            "violations": [v.to_dict() for v in self.violations[:20]],
            "violation_count": len(self.violations),
            "seed": self.seed,
            "certainty": "SamplingRelative",
        }


def _sorted_vertices(window: Window) -> list:
    return sorted(window.adjacency, key=window.token)


def qi_verify(spec: QuasiIsometrySpec, window_X: Window | None = None, window_Y: Window | None = None,
              samples: int = 500, seed: int = 0, radius: int = 4) -> QIReport:
    """Check Q1 on X-pairs, Q2 on Y-pairs, Q3 on X-points and Q4 on Y-points."""
    wX = window_X or explore(spec.X, radius, max_vertices=WINDOW_CAP)
    wY = window_Y or explore(spec.Y, radius, max_vertices=WINDOW_CAP)
    vx, vy = _sorted_vertices(wX), _sorted_vertices(wY)
    rng = np.random.default_rng(seed)
    X, Y = spec.X, spec.Y
    violations: list[Violation] = []
    pairs = points = skipped = 0

    def check(axiom, pts, measured_fn, bound_fn, tok):
        nonlocal skipped
        m, ok1 = measured_fn()
        bnd, ok2 = bound_fn()
        if not (ok1 and ok2):
            skipped += 1
            return False
        if m > bnd:
            violations.append(Violation(axiom, tuple(tok(p) for p in pts), m, bnd))
        return True

    for i, j in rng.integers(0, len(vx), size=(samples, 2)):
        x1, x2 = vx[i], vx[j]
        pairs += check(
            "Q1", (x1, x2),
            lambda: _metric(Y, wY, spec.phi(x1), spec.phi(x2)),
            lambda: (lambda d, ok: (spec.a * d, ok))(*_metric(X, wX, x1, x2)),
            wX.token,
        )
    for i, j in rng.integers(0, len(vy), size=(samples, 2)):
        y1, y2 = vy[i], vy[j]
        pairs += check(
            "Q2", (y1, y2),
            lambda: _metric(X, wX, spec.psi(y1), spec.psi(y2)),
            lambda: (lambda d, ok: (spec.b * d, ok))(*_metric(Y, wY, y1, y2)),
            wY.token,
        )
    for i in rng.integers(0, len(vx), size=samples):
        x = vx[i]
        points += check("Q3", (x,), lambda: _metric(X, wX, spec.psi(spec.phi(x)), x), lambda: (spec.c, True), wX.token)
    for i in rng.integers(0, len(vy), size=samples):
        y = vy[i]
        points += check("Q4", (y,), lambda: _metric(Y, wY, spec.phi(spec.psi(y)), y), lambda: (spec.d, True), wY.token)
    return QIReport(pairs, points, skipped, tuple(violations), seed)


def diameter_transfer_check(spec: QuasiIsometrySpec, window_X: Window | None = None, sets: int = 200, max_size: int = 6,
                  seed: int = 0, radius: int = 4) -> list[Violation]:
    """Sampled check of diam phi(A) <= a * diam A for finite A."""
    wX = window_X or explore(spec.X, radius, max_vertices=WINDOW_CAP)
    vx = _sorted_vertices(wX)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(sets):
        size = int(rng.integers(1, max_size + 1))
        A = [vx[i] for i in rng.choice(len(vx), size=min(size, len(vx)), replace=False)]
        dx = max((_metric(spec.X, wX, u, v)[0] for u, v in itertools.combinations(A, 2)), default=0)
        img = [spec.phi(x) for x in A]
        dy = max((_metric(spec.Y, None, u, v)[0] for u, v in itertools.combinations(img, 2)), default=0)
        if dy > spec.a * dx:
            out.append(Violation("diam-transfer", tuple(wX.token(x) for x in A), dy, spec.a * dx))
    return out


# --- ray transport --------------------------------------------------------


def _geodesic(Y: LazyGraph, start, target, max_len: int, scan_limit: int = 20000) -> list:
    """Vertices after ``start`` on a greedy geodesic to ``target``."""
    metric = Y.exact_metric
    if metric is None:
        raise ConfigError("ray transport needs an exact metric on the target graph")
    gap = metric(start, target)
    if gap > max_len:
        raise QISpecViolation(f"images of adjacent vertices are {gap} apart, more than a = {max_len}")
    out, y = [], start
    while y != target:
        want = metric(y, target) - 1
        for z in itertools.islice(Y.neighbors(y), scan_limit):
            if metric(z, target) == want:
                y = z
                break
        else:
            raise DepthError("no geodesic step found within the scan limit")
        out.append(y)
    return out


class _ImageWalk:
    """Loop-erased interpolation of phi along a metric ray.

    Loop erasure can rewrite an already-built prefix when the walk comes back,
    so positions are only released once the source ray has provably moved far
    enough that no later walk vertex can coincide with them.
    """

    def __init__(self, spec: QuasiIsometrySpec, ray: Ray):
        self.spec, self.ray = spec, ray
        y0 = spec.phi(ray(0))
        self.path, self.source, self.pos = [y0], [0], {y0: 0}
        self.done = 0
        self.offset = spec.Y.exact_metric(spec.Y.root, spec.phi(spec.X.root))

    def _push(self, y, src):
        k = self.pos.get(y)
        if k is not None:
            for z in self.path[k + 1:]:
                del self.pos[z]
            del self.path[k + 1:]
            del self.source[k + 1:]
            return
        self.pos[y] = len(self.path)
        self.path.append(y)
        self.source.append(src)

    def advance_to(self, n: int):
        spec, ray = self.spec, self.ray
        while self.done < n:
            i = self.done
            for y in _geodesic(spec.Y, spec.phi(ray(i)), spec.phi(ray(i + 1)), spec.a):
                self._push(y, i + 1)
            self.done += 1

    def _safe(self, m: int) -> int:
        # later walk vertices stay > 2a from phi(x_i), i <= m, once d_X(root, x) > 2ab + 2c + D0
        spec, ray, X = self.spec, self.ray, self.spec.X
        d0 = max(X.exact_metric(X.root, ray(k)) for k in range(m + 1))
        idx = ray.escape(2 * spec.a * spec.b + 2 * spec.c + d0)
        if idx is None:
            raise NotMetricRayError(f"{ray.name} stops escaping")
        return max(idx, m + 1)

    def final(self, j: int):
        while True:
            while len(self.path) <= j:
                self.advance_to(self.done + 1)
            m = self.source[j]
            self.advance_to(self._safe(m))
            if len(self.path) > j and self.source[j] <= m:
                return self.path[j]

    def escape(self, R: int) -> int:
        spec = self.spec
        idx = self.ray.escape(spec.b * (R + spec.a + self.offset) + 2 * spec.c)
        if idx is None:
            raise NotMetricRayError(f"{self.ray.name} stops escaping")
        self.advance_to(idx + 1)
        while True:
            p = next((k for k, s in enumerate(self.source) if s >= idx), None)
            if p is None:
                self.advance_to(self.done + 1)
                continue
            self.final(p)
            q = next(k for k, s in enumerate(self.source) if s >= idx)
            if q == p:
                return p


def qi_map_ray(spec: QuasiIsometrySpec, ray: Ray, depth: int) -> Ray:
    """Transport a metric ray along phi by geodesic interpolation and loop erasure."""
    if ray.graph is not spec.X:
        raise ConfigError("ray does not live on the source graph")
    m = ray.metricity(depth)
    if m.kind is not MetricityKind.EVIDENCE:
        raise NotMetricRayError(f"{ray.name}: {m.kind.value} at depth {m.depth}")
    if spec.X.exact_metric is None:
        raise ConfigError("ray transport needs an exact metric on the source graph")
    walk = _ImageWalk(spec, ray)
    image = Ray(spec.Y, walk.final, f"{spec.name}({ray.name})", walk.escape)
    image.verify(depth + 1)
    return image


# --- fattening and quasi-openness -----------------------------------------


# above this many metric evaluations fatten falls back to window BFS
FATTEN_PAIR_LIMIT = 200_000


@dataclass(frozen=True)
class Fattened:
    members: frozenset
    certainty: Certainty
    ends: tuple = ()


def fatten(window: Window, A: Iterable, r: int, ends: tuple = ()) -> Fattened:
    """A + r inside the window; LowerBound when truncated vertices could add members."""
    if r < 0:
        raise ConfigError("r must be non-negative")
    A = frozenset(A)
    window.require(*A)
    g = window.graph
    if g.exact_metric is not None and len(A) * len(window.adjacency) <= FATTEN_PAIR_LIMIT:
        near = {}
        for x in window.adjacency:
            d = min((g.exact_metric(a, x) for a in A), default=None)
            if d is not None and d <= r:
                near[x] = d
    else:
        near = window.bfs(A, limit=r)
    exact = all(window.is_complete(x) for x, d in near.items() if d < r)
    return Fattened(frozenset(near), Certainty.EXACT if exact else Certainty.LOWER_BOUND, tuple(ends))


class OpenVerdict(str, Enum):
    OPEN = "OpenEvidence"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class QuasiOpenEvidence:
    verdict: OpenVerdict
    depth: int
    theta: tuple
    diameter: DiameterEstimate | None
    bound: int
    checked: int
    violations: tuple
    required_depth: int | None = None

    def to_dict(self):
        out = {
            "verdict": self.verdict.value,
            "depth": self.depth,
            "theta": list(self.theta[:50]),
            "theta_size": len(self.theta),
            "bound": self.bound,
            "checked": self.checked,
            "violations": [v.to_dict() for v in self.violations],
        }
        if self.diameter is not None:
            out["diameter"] = self.diameter.to_dict()
        if self.required_depth is not None:
            out["required_depth"] = self.required_depth
        return out


def quasi_open_check(spec: QuasiIsometrySpec, e: Carrier, depth: int, window_X: Window | None = None,
                     window_Y: Window | None = None, oracle=None) -> QuasiOpenEvidence:
    """Boundary of phi(e) + d + 1 and the containment psi(theta) in theta e + b(d+2)+c-1."""
    wX = window_X or explore(spec.X, depth, max_vertices=WINDOW_CAP)
    wY = window_Y or explore(spec.Y, depth, max_vertices=WINDOW_CAP)
    cand = classify_cut(wX, e, oracle)
    if cand.kind(Notion.METRIC) is not Cert.YES:
        raise ConfigError("e must be a certified metric cut")
    X, Y = spec.X, spec.Y
    e_members = [x for x in wX.adjacency if e.contains(x) is True]
    seeds = {spec.phi(x) for x in e_members} & set(wY.adjacency)
    seeds |= {y for y in wY.adjacency if e.contains(spec.psi(y)) is True}
    fat = fatten(wY, seeds, spec.d + 1)
    F = fat.members
    theta = set()
    for z in F:
        theta.update(w for w in wY.adjacency[z] if w not in F)
    # psi(y) in e forces y into phi(e) + d, so such y are window artifacts
    theta = {y for y in theta if e.contains(spec.psi(y)) is not True}
    bound = spec.b * (spec.d + 2) + spec.c
    if not theta:
        return QuasiOpenEvidence(OpenVerdict.UNKNOWN, depth, (), None, bound, 0, (), depth + spec.d + 2)
    theta_e = cand.theta
    violations = []
    for y in sorted(theta, key=wY.token):
        x = spec.psi(y)
        if e.contains(x) is True:
            violations.append(Violation("psi(theta) in e*", (wY.token(y),), 0, 0))
            continue
        to_e = min(_metric(X, wX, x, v)[0] for v in e_members)
        if to_e > bound:
            violations.append(Violation("dist(psi(y), e)", (wY.token(y),), to_e, bound))
        to_theta = min((_metric(X, wX, x, v)[0] for v in theta_e), default=None)
        if to_theta is not None and to_theta > bound - 1:
            violations.append(Violation("psi(y) in theta e + r", (wY.token(y),), to_theta, bound - 1))
    diam = set_diameter(wY, theta)
    ok = not violations and diam.is_finite() and diam.certainty is Certainty.EXACT
    verdict = OpenVerdict.OPEN if ok else OpenVerdict.UNKNOWN
    tokens = tuple(sorted(wY.token(y) for y in theta))
    return QuasiOpenEvidence(verdict, depth, tokens, diam, bound, len(theta), tuple(violations))


# --- presets --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QIPreset:
    spec: QuasiIsometrySpec
    source: object
    target: object
    open_cut: Carrier
    depth: int = 6
    metric_rays: tuple = field(default=())


def _identity(v):
    return v


def preset(name: str) -> QIPreset:
    from . import gallery

    if name == "tree2-identity":
        gx, gy = gallery.make("tree:b=inf"), gallery.make("treeplus2:b=inf")
        spec = QuasiIsometrySpec(gx.graph, gy.graph, _identity, _identity, 1, 2, 0, 0, name)
        cut = gx.oracle.shape("cone", ("0",), lambda v: v[:1] == (0,),
                              {Notion.VERTEX: True, Notion.EDGE: True, Notion.METRIC: True}, 1)
        return QIPreset(spec, gx, gy, cut, 6)
    if name == "ladder-line":
        gx, gy = gallery.make("ladder"), gallery.make("line")
        spec = QuasiIsometrySpec(gx.graph, gy.graph, lambda v: v[0], lambda n: (n, "t"), 1, 1, 1, 0, name)
        cut = gx.oracle.shape("columns>=2", (2,), lambda v: v[0] >= 2,
                              {Notion.VERTEX: True, Notion.EDGE: True, Notion.METRIC: True}, 2)
        return QIPreset(spec, gx, gy, cut, 6)
    if name == "free-r1-r3":
        gx, gy = gallery.make("free:r=1"), gallery.make("free:r=3")
        spec = QuasiIsometrySpec(gx.graph, gy.graph, _identity, _identity, 1, 3, 0, 0, name)
        cut = gx.oracle.shape("cone", ("g1",), lambda v: v[:1] == (1,),
                              {Notion.VERTEX: True, Notion.EDGE: True, Notion.METRIC: True}, 1)
        return QIPreset(spec, gx, gy, cut, 4)
    raise ConfigError(f"unknown QI preset {name!r}; expected one of {', '.join(PRESETS)}")


PRESETS = ("tree2-identity", "ladder-line", "free-r1-r3")


@dataclass(frozen=True)
class CorrespondenceRecord:
    pair: tuple
    source: Outcome
    target: Outcome

    @property
    def consistent(self) -> bool:
        return (self.source is Outcome.SEPARATED) == (self.target is Outcome.SEPARATED)

    def to_dict(self):
        return {"pair": list(self.pair), "source": self.source.value, "target": self.target.value,
                "consistent": self.consistent}


def end_correspondence(p: QIPreset, depth: int = 6) -> list[CorrespondenceRecord]:
    """Metric separation of named X-rays versus separation of their images."""
    spec = p.spec
    rays = {k: r for k, r in p.source.rays().items() if r.metricity(depth).kind is MetricityKind.EVIDENCE}
    images = {k: qi_map_ray(spec, r, depth) for k, r in rays.items()}
    wX = explore(spec.X, depth, max_vertices=WINDOW_CAP)
    wY = explore(spec.Y, depth, max_vertices=WINDOW_CAP)
    out = []
    for a, b in itertools.combinations(sorted(rays), 2):
        vx = separation_verdict(rays[a], rays[b], Notion.METRIC, depth, p.source.oracle, wX)
        vy = separation_verdict(images[a], images[b], Notion.METRIC, depth, p.target.oracle, wY)
        out.append(CorrespondenceRecord((a, b), vx.outcome, vy.outcome))
    return out
