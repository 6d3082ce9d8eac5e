"""Gallery of example graphs with ground truths, named rays and oracles.

Graph specs follow the CLI grammar::

    ladder | line | star-paths | x1 | x2 | treeplus2:b=<int|inf> | tree:b=<int|inf>
    | kn-chain:variant=<5a|5b|5c|5d> | free:r=<int>[,k=<int>]
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..cuts import Notion
from ..ends import INFINITE_TRUTH, Outcome, Ray
from ..errors import ConfigError
from ..walk import FreeGroupCayley
from .graphs import AddressTree, HubRays, KNChain, Ladder, Line, StarOfPaths
from .oracles import ConeOracle, GalleryOracle, HubOracle, LevelOracle, TwoSidedOracle

V, E, M = Notion.VERTEX, Notion.EDGE, Notion.METRIC
SEP, EQ = Outcome.SEPARATED, Outcome.EQUIVALENT


@dataclass(frozen=True)
class GroundTruth:
    end_counts: dict
    expected_verdicts: tuple = ()
    star_ball_examples: tuple = ()
    stabilization_depth: int = 2

    def count(self, notion) -> int | str:
        return self.end_counts[Notion(notion)]


@dataclass(frozen=True, eq=False)
class GalleryGraph:
    tag: str
    params: dict
    graph: object
    truth: GroundTruth
    oracle: GalleryOracle
    ray_specs: dict = field(default_factory=dict, repr=False)
    sequence_specs: dict = field(default_factory=dict, repr=False)

    def rays(self) -> dict[str, Ray]:
        """Fresh named rays (verification state is per instance)."""
        return {name: Ray(self.graph, gen, name, esc, key) for name, (gen, esc, key) in self.ray_specs.items()}

    def ray(self, name: str) -> Ray:
        specs = self.ray_specs
        if name not in specs:
            raise ConfigError(f"{self.tag} has no ray {name!r}; known: {', '.join(sorted(specs)) or 'none'}")
        gen, esc, key = specs[name]
        return Ray(self.graph, gen, name, esc, key)

    def sequence_names(self) -> list[str]:
        return ["constant"] + sorted(self.sequence_specs) + [f"ray:{k}" for k in sorted(self.ray_specs)]

    def sequence(self, name: str) -> Callable[[int], object]:
        """Named vertex sequence: ``constant``, ``ray:<name>`` or a graph-specific one."""
        if name == "constant":
            root = self.graph.root
            return lambda i: root
        if name.startswith("ray:"):
            return self.ray(name[4:])
        if name in self.sequence_specs:
            return self.sequence_specs[name]
        raise ConfigError(f"{self.tag} has no sequence {name!r}; known: {', '.join(self.sequence_names())}")


SEQUENCES = {
    # vertices of one K_N, all distinct but pairwise adjacent
    "kn-chain": {"distinct": lambda i: (0, i)},
    # last vertex of P_(n+1)
    "star-paths": {"endpoints": lambda n: (n + 1, n + 1)},
}


def _counts(v, e, m):
    return {V: v, E: e, M: m}


def _all(r1, r2, outcome):
    return tuple((r1, r2, n, outcome) for n in (V, E, M))


def _ladder():
    g = Ladder()
    rays = {
        "top-right": (lambda i: (i, "t"), lambda r: r + 1, "right"),
        "top-left": (lambda i: (-i, "t"), lambda r: r + 1, "left"),
        "bottom-right": (lambda i: (i, "b"), lambda r: r, "right"),
        "bottom-left": (lambda i: (-i, "b"), lambda r: r, "left"),
    }
    truth = GroundTruth(
        _counts(2, 2, 2),
        _all("top-right", "top-left", SEP) + _all("top-right", "bottom-right", EQ)
        + _all("bottom-left", "top-left", EQ) + _all("bottom-right", "bottom-left", SEP),
    )
    return g, truth, TwoSidedOracle(g, lambda v: v[0], 1), rays


def _line():
    g = Line()
    rays = {
        "right": (lambda i: i, lambda r: r + 1, "right"),
        "left": (lambda i: -i, lambda r: r + 1, "left"),
    }
    truth = GroundTruth(_counts(2, 2, 2), _all("right", "left", SEP))
    return g, truth, TwoSidedOracle(g, lambda v: v, 0), rays


def _star():
    g = StarOfPaths()
    return g, GroundTruth(_counts(0, 0, 0), (), (("x", 1),)), GalleryOracle(g), {}


def _hub(split: bool):
    g = HubRays(split)
    if split:
        esc1 = lambda r: 0 if r == 0 else None  # noqa: E731
        esc2 = lambda r: 0 if r <= 1 else None  # noqa: E731
    else:
        esc1 = esc2 = lambda r: 0 if r == 0 else None  # noqa: E731
    rays = {
        "L1": (lambda i: (1, i), esc1, 1),
        "L2": (lambda i: (2, i), esc2, 2),
    }
    if split:
        truth = GroundTruth(_counts(2, 2, 0), (("L1", "L2", V, SEP), ("L1", "L2", E, SEP)))
    else:
        truth = GroundTruth(_counts(2, 1, 0), (("L1", "L2", V, SEP), ("L1", "L2", E, EQ)))
    return g, truth, HubOracle(g, split), rays


def _branch_rays(r: int, branches: int):
    return {
        f"branch{k}": (lambda i, k=k: (k,) * i, lambda R: r * R + 1, f"{k}^inf")
        for k in range(branches)
    }


def _address_tree(params, r):
    b = params.get("b", "inf")
    branching = None if b == "inf" else _int(b, "b")
    g = AddressTree(branching, r=r)
    rays = _branch_rays(r, min(3, branching or 3))
    names = sorted(rays)
    pairs = [(a, c) for i, a in enumerate(names) for c in names[i + 1:]]
    if branching is None and r == 2:
        counts = _counts(1, 1, INFINITE_TRUTH)
        verdicts = tuple((a, c, n, EQ) for a, c in pairs for n in (V, E)) + tuple((a, c, M, SEP) for a, c in pairs)
    else:
        counts = _counts(INFINITE_TRUTH, INFINITE_TRUTH, INFINITE_TRUTH)
        verdicts = tuple(v for a, c in pairs for v in _all(a, c, SEP))
    return g, GroundTruth(counts, verdicts), ConeOracle(g, r, branching is not None), rays


def _kn(params):
    variant = params.get("variant")
    g = KNChain(variant)
    if variant == "5a":
        rays = {"K": (lambda i: (0, i), lambda r: 1 if r == 0 else None, "K")}
        return g, GroundTruth(_counts(1, 1, 0)), GalleryOracle(g), rays
    if variant in ("5b", "5c"):
        split = variant == "5b"
        esc1 = lambda r: 0 if r == 0 else None  # noqa: E731
        esc2 = (lambda r: 0 if r <= 1 else None) if split else esc1
        rays = {
            "L1": (lambda i: (1, i), esc1, 1),
            "L2": (lambda i: (2, i), esc2, 2),
        }
        counts = _counts(2, 2, 0) if split else _counts(2, 1, 0)
        verdicts = (("L1", "L2", V, SEP), ("L1", "L2", E, SEP if split else EQ))
        return g, GroundTruth(counts, verdicts), HubOracle(g, split), rays
    rays = {
        "right": (lambda i: (i, 0), lambda r: r + 1, None),
        "left": (lambda i: (-i, 0), lambda r: r + 1, None),
        "diag": (lambda i: (i, i), lambda r: r + 1, None),
    }
    verdicts = (
        ("right", "left", V, EQ), ("right", "left", E, EQ),
        ("right", "left", M, SEP), ("diag", "left", M, SEP), ("right", "diag", M, EQ),
    )
    return g, GroundTruth(_counts(1, 1, 2), verdicts), LevelOracle(g), rays


def _free(params):
    r = _int(params.get("r", "1"), "r")
    k = params.get("k", "2")
    gens = None if k == "inf" else _int(k, "k")
    g = FreeGroupCayley(r=r, generators=gens)
    esc = lambda R, r=r: r * R + 1  # noqa: E731
    rays = {
        "g1": (lambda i: (1,) * i, esc, "g1^inf"),
        "g2": (lambda i: (2,) * i, esc, "g2^inf"),
        "g1^-1": (lambda i: (-1,) * i, esc, "g1^-inf"),
        "g2^-1": (lambda i: (-2,) * i, esc, "g2^-inf"),
        "g1g2": (lambda i: tuple((1, 2)[j % 2] for j in range(i)), esc, "(g1g2)^inf"),
    }
    inf = INFINITE_TRUTH
    verdicts = _all("g1", "g2", SEP) + _all("g1", "g1^-1", SEP) + _all("g1", "g1g2", SEP)
    return g, GroundTruth(_counts(inf, inf, inf), verdicts), ConeOracle(g, r, gens is not None), rays


def _int(text, key) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {text!r}") from None


BUILDERS: dict[str, Callable] = {
    "ladder": lambda p: _ladder(),
    "line": lambda p: _line(),
    "star-paths": lambda p: _star(),
    "x1": lambda p: _hub(True),
    "x2": lambda p: _hub(False),
    "treeplus2": lambda p: _address_tree(p, 2),
    "tree": lambda p: _address_tree(p, 1),
    "kn-chain": _kn,
    "free": _free,
}

TAGS = tuple(BUILDERS)


def parse_spec(spec: str) -> tuple[str, dict]:
    tag, _, rest = spec.strip().partition(":")
    if tag not in BUILDERS:
        raise ConfigError(f"unknown graph tag {tag!r}; expected one of {', '.join(TAGS)}")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise ConfigError(f"malformed parameter {item!r} in {spec!r}")
        params[key.strip()] = value.strip()
    return tag, params


def make(spec: str, **params) -> GalleryGraph:
    """Build a gallery graph from a spec string such as ``"kn-chain:variant=5d"``."""
    tag, parsed = parse_spec(spec)
    parsed.update({k: str(v) for k, v in params.items()})
    if tag == "kn-chain" and "variant" not in parsed:
        raise ConfigError("kn-chain needs variant=5a|5b|5c|5d")
    graph, truth, oracle, rays = BUILDERS[tag](parsed)
    seqs = dict(SEQUENCES.get(tag, {}))
    if tag == "kn-chain" and parsed["variant"] != "5a":
        seqs.clear()
    return GalleryGraph(tag, parsed, graph, truth, oracle, rays, seqs)


def ground_truth(spec: str) -> GroundTruth:
    return make(spec).truth


ACCEPTANCE_SPECS = (
    "ladder", "star-paths", "x1", "x2", "treeplus2:b=inf",
    "kn-chain:variant=5a", "kn-chain:variant=5b", "kn-chain:variant=5c", "kn-chain:variant=5d",
    "free:r=1", "free:r=2", "line", "treeplus2:b=3", "tree:b=inf",
)

__all__ = ["GalleryGraph", "GroundTruth", "make", "ground_truth", "parse_spec", "TAGS", "ACCEPTANCE_SPECS"]
