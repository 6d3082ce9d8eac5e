"""Gallery registry: specs, rays, neighbour streams and ground truths."""
import itertools

import pytest

from endscope.cuts import Notion
from endscope.errors import ConfigError
from endscope.gallery import ACCEPTANCE_SPECS, ground_truth, make, parse_spec

INF = "Infinite"


@pytest.mark.parametrize("spec,counts", [
    ("ladder", (2, 2, 2)),
    ("line", (2, 2, 2)),
    ("star-paths", (0, 0, 0)),
    ("x1", (2, 2, 0)),
    ("x2", (2, 1, 0)),
    ("treeplus2:b=inf", (1, 1, INF)),
    ("treeplus2:b=3", (INF, INF, INF)),
    ("tree:b=inf", (INF, INF, INF)),
    ("kn-chain:variant=5a", (1, 1, 0)),
    ("kn-chain:variant=5b", (2, 2, 0)),
    ("kn-chain:variant=5c", (2, 1, 0)),
    ("kn-chain:variant=5d", (1, 1, 2)),
    ("free:r=1", (INF, INF, INF)),
])
def test_ground_truth_table(spec, counts):
    t = ground_truth(spec)
    assert tuple(t.count(n) for n in (Notion.VERTEX, Notion.EDGE, Notion.METRIC)) == counts


def test_parse_spec():
    assert parse_spec("kn-chain:variant=5d") == ("kn-chain", {"variant": "5d"})
    assert parse_spec("free:r=2,k=3") == ("free", {"r": "2", "k": "3"})


@pytest.mark.parametrize("bad", ["nope", "free:r", "free:r=x", "kn-chain", "kn-chain:variant=5e",
                                 "treeplus2:b=1", "free:r=0"])
def test_bad_specs(bad):
    with pytest.raises(ConfigError):
        make(bad)


def test_unknown_ray_and_sequence():
    gg = make("ladder")
    with pytest.raises(ConfigError):
        gg.ray("diagonal")
    with pytest.raises(ConfigError):
        gg.sequence("endpoints")


@pytest.mark.parametrize("spec", ACCEPTANCE_SPECS)
def test_rays_are_rays(spec):
    for ray in make(spec).rays().values():
        assert ray.verify(40) == 40


@pytest.mark.parametrize("spec", ACCEPTANCE_SPECS)
def test_escape_certificates_hold_on_prefix(spec):
    gg = make(spec)
    g = gg.graph
    for ray in gg.rays().values():
        for r in range(4):
            i0 = ray.escape(r)
            if i0 is None:
                # the ray comes back: some later vertex is inside the ball
                assert any(g.exact_metric(g.root, ray(i)) <= r for i in range(40))
                continue
            assert all(g.exact_metric(g.root, ray(i)) > r for i in range(i0, i0 + 40))


@pytest.mark.parametrize("spec", ACCEPTANCE_SPECS)
def test_neighbor_streams_agree_with_adjacency(spec):
    g = make(spec).graph
    frontier = [g.root]
    seen = {g.root}
    for _ in range(2):
        nxt = []
        for v in frontier:
            stream = list(itertools.islice(g.neighbors(v), 30))
            assert len(set(stream)) == len(stream)
            for w in stream:
                assert w != v
                assert g.is_adjacent(v, w) and g.is_adjacent(w, v)
                assert g.exact_metric(v, w) == 1
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt[:10]


@pytest.mark.parametrize("spec", ACCEPTANCE_SPECS)
def test_tokens_are_unique(spec):
    from endscope.graph import explore
    w = explore(make(spec).graph, 3, max_vertices=400)
    toks = [w.token(v) for v in w.adjacency]
    assert len(set(toks)) == len(toks)


def test_dovetailed_tree_stream_reaches_every_child():
    g = make("treeplus2:b=inf").graph
    stream = list(itertools.islice(g.neighbors(()), 500))
    for i in range(5):
        assert (i,) in stream
        assert (i, 3) in stream


def test_sequences():
    assert make("kn-chain:variant=5a").sequence("distinct")(4) == (0, 4)
    assert make("star-paths").sequence("endpoints")(0) == (1, 1)
    assert make("ladder").sequence("constant")(9) == (0, "t")
    assert make("ladder").sequence("ray:top-right")(3) == (3, "t")
    assert "distinct" not in make("kn-chain:variant=5d").sequence_names()
