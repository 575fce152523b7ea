import pytest

from tame.errors import InputError
from tame.graph import enumerate_triangles, format_graph
from tame.similarity import format_similarity
from tame.synthgen import GenConfig, generate, summarize, write_pair


def test_seed_triangle_only():
    p = generate(GenConfig(ancestor_size=3, size_a=3, size_b=3, noise_pairs_per_node=0))
    for g in (p.graph_a, p.graph_b):
        assert (g.node_count, g.edge_count) == (3, 3)
    named = {(p.graph_a.labels[i], p.graph_b.labels[j]) for i, j in p.truth.pairs}
    assert named == {("a0", "b0"), ("a1", "b1"), ("a2", "b2")}
    assert len(p.sim) == 3


def test_sizes_and_truth():
    cfg = GenConfig(ancestor_size=40, size_a=60, size_b=75, seed=9)
    p = generate(cfg)
    assert p.graph_a.node_count == 60 and p.graph_b.node_count == 75
    assert len(p.truth) == 40
    w = p.sim.lookup()
    for pair in p.truth.pairs:
        assert 1.0 <= w[pair] <= 1.5


def test_no_isolated_nodes():
    p = generate(GenConfig(ancestor_size=30, size_a=80, size_b=90, seed=2))
    for g in (p.graph_a, p.graph_b):
        assert all(g.adjacency[i] for i in range(g.node_count))


def test_same_seed_identical_files(tmp_path):
    cfg = GenConfig(ancestor_size=30, size_a=45, size_b=50, seed=77)
    paths1 = write_pair(generate(cfg), tmp_path / "one")
    paths2 = write_pair(generate(cfg), tmp_path / "two")
    for key in paths1:
        assert paths1[key].read_bytes() == paths2[key].read_bytes()


def test_different_seeds_differ():
    a = generate(GenConfig(ancestor_size=20, size_a=30, size_b=30, seed=1))
    b = generate(GenConfig(ancestor_size=20, size_a=30, size_b=30, seed=2))
    assert format_graph(a.graph_a) != format_graph(b.graph_a) or \
        format_similarity(a.sim, a.graph_a, a.graph_b) != format_similarity(b.sim, b.graph_a, b.graph_b)


def test_default_benchmark_summary():
    p = generate(GenConfig(seed=0))
    s = summarize(p)
    assert s["graph_a"][0] == 300 and s["graph_b"][0] == 400
    for side, g in (("graph_a", p.graph_a), ("graph_b", p.graph_b)):
        assert s[side] == (g.node_count, g.edge_count, len(enumerate_triangles(g)))
        assert s[side][2] > 0


@pytest.mark.parametrize("kwargs", [
    {"dup_prob": 1.5}, {"edge_keep_prob": -0.1}, {"complement_prob": 2},
    {"noise_pairs_per_node": -1}, {"ancestor_size": 2},
    {"ancestor_size": 50, "size_a": 40},
])
def test_invalid_config(kwargs):
    with pytest.raises(InputError):
        GenConfig(**kwargs)
