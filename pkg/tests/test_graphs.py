import networkx as nx
import pytest

from biblioscape.graphs import (WeightedGraph, GraphEdge, GraphNode, graph_from_graphml,
                                greedy_modularity_clusters, make_graph, to_dot,
                                to_edge_csv, to_graphml, to_node_csv, validate_graph,
                                weighted_degrees)


@pytest.fixture
def toy_graph():
    return make_graph(
        "collaboration",
        nodes=[("b", "B. Person", 3.0), ("a", "A. Person", 2.0), ("c", "C, Q.", 1.0)],
        edges=[("b", "a", 2.0), ("c", "b", 1.0)],
        clusters={"a": 1, "b": 1, "c": 2},
        coverage_note="references available for 2/3 documents (67%)",
    )


def test_make_graph_canonicalizes_edges(toy_graph):
    assert toy_graph.edges == (GraphEdge("a", "b", 2.0), GraphEdge("b", "c", 1.0))


def test_validate_rejects_self_loop():
    with pytest.raises(ValueError):
        make_graph("collaboration", [("a", "a", 1.0)], [("a", "a", 1.0)])


def test_validate_rejects_unknown_endpoint():
    g = WeightedGraph("collaboration", (GraphNode("a", "a", 1.0),),
                      (GraphEdge("a", "b", 1.0),))
    with pytest.raises(ValueError):
        validate_graph(g)


def test_validate_rejects_nonpositive_weight():
    g = WeightedGraph("collaboration",
                      (GraphNode("a", "a", 1.0), GraphNode("b", "b", 1.0)),
                      (GraphEdge("a", "b", 0.0),))
    with pytest.raises(ValueError):
        validate_graph(g)


def test_validate_rejects_noncanonical_order():
    g = WeightedGraph("collaboration",
                      (GraphNode("a", "a", 1.0), GraphNode("b", "b", 1.0)),
                      (GraphEdge("b", "a", 1.0),))
    with pytest.raises(ValueError):
        validate_graph(g)


def test_weighted_degrees(toy_graph):
    assert weighted_degrees(toy_graph) == {"a": 2.0, "b": 3.0, "c": 1.0}


def test_graphml_roundtrip(toy_graph):
    text = to_graphml(toy_graph)
    back = graph_from_graphml(text)
    assert back == toy_graph


def test_graphml_readable_by_networkx(toy_graph):
    import io
    g = nx.read_graphml(io.BytesIO(to_graphml(toy_graph).encode()))
    assert set(g.nodes) == {"a", "b", "c"}
    assert g.nodes["b"]["label"] == "B. Person"
    assert g.nodes["b"]["cluster"] == 1
    assert g.edges[("a", "b")]["weight"] == 2.0
    assert not g.is_directed()


def test_graphml_escapes_special_characters():
    g = make_graph("cooccurrence", [('q"<&>', 'lab<el> & "q"', 1.0)], [])
    back = graph_from_graphml(to_graphml(g))
    assert back.nodes[0].id == 'q"<&>'
    assert back.nodes[0].label == 'lab<el> & "q"'


def test_dot_output_contains_nodes_edges_and_clusters(toy_graph):
    dot = to_dot(toy_graph)
    assert dot.startswith('graph "collaboration" {')
    assert '"a" -- "b" [weight=2];' in dot
    assert '"b" [label="B. Person", weight=3, cluster=1];' in dot
    assert "references available" in dot


def test_csv_tables(toy_graph):
    nodes = to_node_csv(toy_graph)
    edges = to_edge_csv(toy_graph)
    assert nodes.splitlines()[0] == "id,label,weight,cluster"
    assert '"C, Q."' in nodes  # embedded comma quoted
    assert edges.splitlines() == ["source,target,weight", "a,b,2", "b,c,1"]


# --------------------------------------------------------------------------
# Greedy modularity communities
# --------------------------------------------------------------------------

def test_two_cliques_with_bridge_split():
    ids = ["a1", "a2", "a3", "b1", "b2", "b3"]
    edges = [("a1", "a2", 1.0), ("a1", "a3", 1.0), ("a2", "a3", 1.0),
             ("b1", "b2", 1.0), ("b1", "b3", 1.0), ("b2", "b3", 1.0),
             ("a3", "b1", 0.1)]
    clusters = greedy_modularity_clusters(ids, edges)
    assert clusters["a1"] == clusters["a2"] == clusters["a3"]
    assert clusters["b1"] == clusters["b2"] == clusters["b3"]
    assert clusters["a1"] != clusters["b1"]
    assert clusters["a1"] == 1  # ids contiguous, ordered by first node


def test_isolated_nodes_stay_singletons():
    clusters = greedy_modularity_clusters(["x", "y", "z"], [])
    assert sorted(clusters.values()) == [1, 2, 3]


def test_target_count_reached_even_across_components():
    ids = ["a", "b", "c", "d"]
    edges = [("a", "b", 1.0), ("c", "d", 1.0)]
    clusters = greedy_modularity_clusters(ids, edges, target=2)
    assert len(set(clusters.values())) == 2
    assert clusters["a"] == clusters["b"]
    assert clusters["c"] == clusters["d"]
    merged_to_one = greedy_modularity_clusters(ids, edges, target=1)
    assert set(merged_to_one.values()) == {1}


def test_target_validated():
    with pytest.raises(ValueError):
        greedy_modularity_clusters(["a"], [], target=5)


def test_deterministic_under_repeats():
    ids = [f"n{i}" for i in range(9)]
    edges = [(f"n{i}", f"n{(i + 1) % 9}", 1.0) for i in range(9)]
    first = greedy_modularity_clusters(ids, edges)
    for _ in range(5):
        assert greedy_modularity_clusters(ids, edges) == first
