"""Command-line front end.

Every subcommand builds a report dict; ``--json`` prints it with sorted keys
under ``"schema": "endscope/1"``, otherwise a short text rendering is shown.
Exit codes: 0 ok, 2 invalid configuration, 3 not explored / depth too small.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import gallery
from .cuts import Notion, star_ball_score
from .ends import classify_sequence, count_ends_at_depth, separation_verdict
from .errors import ConfigError, DepthError, EndscopeError, NotExploredError
from .graph import explore
from .qi import PRESETS, end_correspondence, diameter_transfer_check, preset, qi_verify, quasi_open_check
from .walk import FreeGroupCayley, StepMeasure, convergence_report, simulate

SCHEMA = "endscope/1"
COMMANDS = ("explore", "star", "ends", "separate", "classify", "qi", "walk")


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: str | None = None
    depth: int = 8
    budget: int | None = None
    seed: int = 0
    notion: str = "vertex"
    json: bool = False
    rays: str | None = None
    sequence: str | None = None
    center: str | None = None
    radius: int = 1
    qi: str | None = None
    samples: int = 500
    mu: str = "uniform4"
    steps: int = 1000
    traj: int = 100
    prefix: int = 1


def _notion(text: str) -> Notion:
    try:
        return Notion(text)
    except ValueError:
        raise ConfigError(f"unknown notion {text!r}; expected vertex, edge or metric") from None


def _need_graph(cfg: RunConfig) -> gallery.GalleryGraph:
    if not cfg.graph:
        raise ConfigError(f"{cfg.command} needs --graph")
    return gallery.make(cfg.graph)


def _window(gg, cfg: RunConfig, max_vertices=None):
    return explore(gg.graph, cfg.depth, cfg.budget, max_vertices=max_vertices)


def _find_vertex(window, token: str):
    for v in window.adjacency:
        if window.token(v) == token:
            return v
    raise NotExploredError(f"no vertex with token {token!r} in the window")


def cmd_explore(cfg: RunConfig) -> dict:
    gg = _need_graph(cfg)
    w = _window(gg, cfg, max_vertices=20000)
    layers: dict = {}
    for d in w.layer.values():
        layers[d] = layers.get(d, 0) + 1
    complete = not w.frontier
    return {
        "graph": gg.graph.name,
        "radius": w.radius,
        "budget": w.budget,
        "vertices": len(w),
        "edges": len(w.edges),
        "frontier": len(w.frontier),
        "layer_sizes": [layers[d] for d in sorted(layers)],
        "capped": w.capped,
        "certainty": "Exact" if complete else "LowerBound",
    }


def cmd_star(cfg: RunConfig) -> dict:
    gg = _need_graph(cfg)
    w = _window(gg, cfg, max_vertices=20000)
    if cfg.center is not None:
        center = _find_vertex(w, cfg.center)
        radius = cfg.radius
    elif gg.truth.star_ball_examples:
        center, radius = gg.truth.star_ball_examples[0]
    else:
        center, radius = gg.graph.root, cfg.radius
    rep = star_ball_score(w, center, radius)
    out = rep.to_dict(w)
    out["certainty"] = rep.verdict.value
    return out


def cmd_ends(cfg: RunConfig) -> dict:
    gg = _need_graph(cfg)
    count = count_ends_at_depth(gg, _notion(cfg.notion), cfg.depth, budget=cfg.budget)
    out = count.to_dict()
    out["certainty"] = count.status.value
    return out


def cmd_separate(cfg: RunConfig) -> dict:
    gg = _need_graph(cfg)
    names = [n.strip() for n in (cfg.rays or "").split(",") if n.strip()]
    if len(names) != 2:
        raise ConfigError("--rays takes two comma-separated ray names, e.g. L1,L2")
    r1, r2 = (gg.ray(n) for n in names)
    v = separation_verdict(r1, r2, _notion(cfg.notion), cfg.depth, gg.oracle, budget=cfg.budget)
    out = v.to_dict()
    out["rays"] = names
    out["certainty"] = v.outcome.value
    return out


def cmd_classify(cfg: RunConfig) -> dict:
    gg = _need_graph(cfg)
    if not cfg.sequence:
        raise ConfigError(f"classify needs --sequence; known: {', '.join(gg.sequence_names())}")
    seq = gg.sequence(cfg.sequence)
    res = classify_sequence(gg.graph, seq, cfg.depth, budget=cfg.budget)
    out = res.to_dict()
    out["sequence"] = cfg.sequence
    out["certainty"] = "DepthRelative"
    return out


def cmd_qi(cfg: RunConfig) -> dict:
    if not cfg.qi:
        raise ConfigError(f"qi needs --qi; known presets: {', '.join(PRESETS)}")
    p = preset(cfg.qi)
    spec = p.spec
    wX = explore(spec.X, p.depth, max_vertices=3000)
    wY = explore(spec.Y, p.depth, max_vertices=3000)
    rep = qi_verify(spec, wX, wY, samples=cfg.samples, seed=cfg.seed)
    lem = diameter_transfer_check(spec, wX, seed=cfg.seed)
    opened = quasi_open_check(spec, p.open_cut, p.depth, wX, wY, oracle=p.source.oracle)
    corr = end_correspondence(p, p.depth)
    return {
        "preset": p.spec.name,
        "constants": {"a": spec.a, "b": spec.b, "c": spec.c, "d": spec.d},
        "axioms": rep.to_dict(),
        "diameter_transfer": [v.to_dict() for v in lem],
        "quasi_open": opened.to_dict(),
        "correspondence": [c.to_dict() for c in corr],
        "certainty": "SamplingRelative",
        "depth_stamp": p.depth,
    }


_UNIFORM = re.compile(r"uniform(\d+)$")


def _measure(text: str) -> StepMeasure:
    m = _UNIFORM.match(text)
    if m:
        k = int(m.group(1))
        if k < 2 or k % 2:
            raise ConfigError("uniformN needs an even N >= 2 (generators and their inverses)")
        return StepMeasure.uniform(k // 2)
    path = Path(text)
    if not path.is_file():
        raise ConfigError(f"--mu must be uniformN or a measure file, got {text!r}")
    return StepMeasure.parse(path.read_text())


def cmd_walk(cfg: RunConfig) -> dict:
    gg = _need_graph(cfg)
    graph = gg.graph
    if not isinstance(graph, FreeGroupCayley):
        raise ConfigError("walk runs on free:r=<int> graphs only")
    mu = _measure(cfg.mu)
    mu.check_against(graph)
    trajs = simulate(mu, cfg.steps, cfg.traj, cfg.seed, r=graph.r, prefix_depth=max(cfg.prefix, 1))
    alphabet = None if graph.generators is None else 2 * graph.generators
    report = convergence_report(trajs, cfg.prefix, measure=mu, alphabet_size=alphabet)
    report["graph"] = graph.name
    report["seed"] = cfg.seed
    # a walk has no exploration depth; the run length plays that role
    report["depth_stamp"] = cfg.steps
    return report


HANDLERS = {
    "explore": cmd_explore,
    "star": cmd_star,
    "ends": cmd_ends,
    "separate": cmd_separate,
    "classify": cmd_classify,
    "qi": cmd_qi,
    "walk": cmd_walk,
}


def report(cfg: RunConfig) -> dict:
    """Run one command and return the full report (including schema and config)."""
    if cfg.command not in HANDLERS:
        raise ConfigError(f"unknown command {cfg.command!r}")
    if cfg.depth < 0:
        raise ConfigError("--depth must be non-negative")
    result = HANDLERS[cfg.command](cfg)
    return {
        "schema": SCHEMA,
        "command": cfg.command,
        "config": {k: v for k, v in asdict(cfg).items() if k != "json"},
        "depth": result.pop("depth_stamp", cfg.depth),
        "certainty": result.pop("certainty"),
        "result": result,
    }


def _render_text(rep: dict) -> str:
    res = rep["result"]
    head = f"{rep['command']} depth={rep['depth']} certainty={rep['certainty']}"
    lines = [head]
    for key in sorted(res):
        val = res[key]
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True)
            if len(val) > 200:
                val = val[:197] + "..."
        lines.append(f"  {key}: {val}")
    return "\n".join(lines)


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        rep = report(cfg)
    except (NotExploredError, DepthError) as exc:
        print(f"endscope: {exc}", file=err)
        return 3
    except (ConfigError, EndscopeError) as exc:
        print(f"endscope: {exc}", file=err)
        return 2
    text = json.dumps(rep, sort_keys=True) if cfg.json else _render_text(rep)
    out.write(text + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="endscope", description="Finite-depth end structure of lazy infinite graphs.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="gallery spec, e.g. ladder, x2, treeplus2:b=inf, kn-chain:variant=5d, free:r=1")
    common.add_argument("--depth", type=int, default=8)
    common.add_argument("--budget", type=int, default=None, help="neighbour budget for infinite-degree vertices")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    helps = {
        "explore": "window statistics",
        "star": "star-ball score of a ball",
        "ends": "lower bound on the number of ends",
        "separate": "separate two named rays",
        "classify": "classify a named vertex sequence",
        "qi": "quasi-isometry checks for a preset",
        "walk": "random walk on a free group",
    }
    cmds = {name: sub.add_parser(name, parents=[common], help=helps[name]) for name in COMMANDS}
    for name in ("ends", "separate"):
        cmds[name].add_argument("--notion", default="vertex", choices=[n.value for n in Notion])
    cmds["separate"].add_argument("--rays", required=True, help="two ray names, e.g. L1,L2")
    cmds["star"].add_argument("--center", help="vertex token (default: the graph's star example or root)")
    cmds["star"].add_argument("--radius", type=int, default=1)
    cmds["classify"].add_argument("--sequence", help="constant, ray:<name> or a graph-specific sequence")
    cmds["qi"].add_argument("--qi", required=True, choices=PRESETS)
    cmds["qi"].add_argument("--samples", type=int, default=500)
    w = cmds["walk"]
    w.add_argument("--mu", default="uniform4", help="uniformN or a file of 'word weight' lines")
    w.add_argument("--steps", type=int, default=1000)
    w.add_argument("--traj", type=int, default=100)
    w.add_argument("--prefix", type=int, default=1)
    return parser


def config_from_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields})


def main(argv=None) -> int:
    return run(config_from_args(argv))


if __name__ == "__main__":
    sys.exit(main())
