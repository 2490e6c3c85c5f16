import json
import warnings

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from grt.errors import GraphFormatError, PreconditionError
from grt.graph import (
    UNREACHABLE,
    Graph,
    cartesian_product,
    catalog,
    catalog_coordinates,
    distances,
    parse_graph,
    serialize_graph,
)
from _cases import CATALOG_CASES, case_id, graph

EXPECTED_SIZES = {
    "dodecahedron": (20, 30, 3),
    "petersen": (10, 15, 3),
    "icosahedron": (12, 30, 5),
    "truncated_tetrahedron": (12, 18, 3),
    "cuboctahedron": (12, 24, 4),
    "cell24": (24, 96, 8),
}


@st.composite
def random_graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


def test_cycle_four():
    g = catalog("cycle", [4])
    assert (g.n, g.num_edges) == (4, 4)


@pytest.mark.parametrize("name", sorted(EXPECTED_SIZES))
def test_named_sizes(name):
    g = catalog(name)
    n, m, k = EXPECTED_SIZES[name]
    assert (g.n, g.num_edges, g.degree) == (n, m, k)


def test_rhombic_dodecahedron_degrees():
    g = catalog("rhombic_dodecahedron")
    assert sorted(g.degrees.tolist()) == [3] * 8 + [4] * 6
    assert g.num_edges == 24


@pytest.mark.parametrize("case", CATALOG_CASES, ids=case_id)
def test_adjacency_invariants(case):
    g = graph(*case)
    a = g.adjacency
    assert np.array_equal(a, a.T)
    assert not np.any(np.diag(a))
    assert g.num_edges * 2 == a.sum()


@pytest.mark.parametrize("case", [c for c in CATALOG_CASES if c[0] != "rhombic_dodecahedron"], ids=case_id)
def test_catalog_regular(case):
    assert graph(*case).is_regular


@pytest.mark.parametrize("case", CATALOG_CASES, ids=case_id)
def test_catalog_matches_networkx_isomorphism_class(case):
    g = graph(*case)
    oracle = {
        "cycle": lambda p: nx.cycle_graph(p[0]),
        "complete": lambda p: nx.complete_graph(p[0]),
        "complete_bipartite": lambda p: nx.complete_bipartite_graph(*p),
        "complete_multipartite": lambda p: nx.complete_multipartite_graph(*p),
        "prism": lambda p: nx.circular_ladder_graph(p[0]),
        "torus": lambda p: nx.grid_2d_graph(*p, periodic=True),
        "cuboctahedron": lambda p: nx.line_graph(nx.cubical_graph()),
        "petersen": lambda p: nx.petersen_graph(),
        "dodecahedron": lambda p: nx.dodecahedral_graph(),
        "icosahedron": lambda p: nx.icosahedral_graph(),
        "truncated_tetrahedron": lambda p: nx.truncated_tetrahedron_graph(),
    }
    name, params = case
    if name not in oracle:
        pytest.skip("no networkx constructor")
    h = nx.Graph(list(g.edge_list))
    h.add_nodes_from(range(g.n))
    assert nx.is_isomorphic(h, oracle[name](params))


def test_cell24_coordinates_and_edges():
    pts = catalog_coordinates("cell24")
    assert pts.shape == (24, 4)
    assert np.allclose(np.sum(pts**2, axis=1), 2.0)
    g = catalog("cell24")
    for i, j in g.edge_list:
        assert np.isclose(np.sum((pts[i] - pts[j]) ** 2), 2.0)


@pytest.mark.parametrize("name,params", [("cycle", [2]), ("prism", [2]), ("nosuch", []), ("petersen", [3])])
def test_catalog_rejects(name, params):
    with pytest.raises(PreconditionError):
        catalog(name, params)


def test_cartesian_product_examples():
    c6 = catalog("cycle", [6])
    g = cartesian_product(c6, c6)
    assert (g.n, g.num_edges, g.degree) == (36, 72, 4)
    k2 = catalog("complete", [2])
    sq = cartesian_product(k2, k2)
    assert nx.is_isomorphic(nx.Graph(list(sq.edge_list)), nx.cycle_graph(4))


@given(random_graphs(5), random_graphs(4))
def test_cartesian_product_rule(g, h):
    p = cartesian_product(g, h)
    for a in range(g.n):
        for b in range(h.n):
            for a2 in range(g.n):
                for b2 in range(h.n):
                    expect = (a == a2 and h.adjacency[b, b2]) or (b == b2 and g.adjacency[a, a2])
                    assert p.adjacency[a * h.n + b, a2 * h.n + b2] == bool(expect)


@pytest.mark.parametrize("name,diam", [("petersen", 2), ("dodecahedron", 5)])
def test_diameters(name, diam):
    assert distances(catalog(name)).diam == diam


def test_c4_diameter():
    assert distances(catalog("cycle", [4])).diam == 2


@given(random_graphs())
def test_distances_match_matrix_powers(g):
    table = distances(g)
    a = g.adjacency.astype(np.int64)
    reach = np.eye(g.n, dtype=np.int64)
    first = np.full((g.n, g.n), UNREACHABLE, dtype=np.int64)
    first[np.eye(g.n, dtype=bool)] = 0
    power = np.eye(g.n, dtype=np.int64)
    for k in range(1, g.n):
        power = np.minimum(power @ a, 1)
        new = (power > 0) & (reach == 0)
        first[new] = k
        reach |= power
    assert np.array_equal(table.dist, first)
    assert np.array_equal(table.dist, table.dist.T)
    assert np.array_equal(table.dist == 1, a == 1)


@given(random_graphs())
def test_triangle_inequality(g):
    d = distances(g).dist.astype(float)
    d[d == UNREACHABLE] = np.inf
    for k in range(g.n):
        assert np.all(d <= d[:, [k]] + d[[k], :])


def test_disconnected_distances():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    t = distances(g)
    assert not t.connected
    assert t.diam == 1
    assert t.dist[0, 2] == UNREACHABLE


def test_graph6_k4():
    g = parse_graph(b"C~", "graph6")
    assert g == catalog("complete", [4])


@given(random_graphs(12))
def test_graph6_against_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edge_list)
    data = nx.to_graph6_bytes(h, header=False).strip()
    assert serialize_graph(g, "graph6").strip() == data
    assert parse_graph(data, "graph6") == g


def test_graph6_header_and_large_n():
    g = Graph.from_edges(70, [(0, 69), (5, 6)])
    data = serialize_graph(g, "graph6")
    assert data[0] == 126
    assert parse_graph(b">>graph6<<" + data, "graph6") == g


@pytest.mark.parametrize("bad", [b"", b"C", b"C~~", b"C\x10", b"A`"])
def test_graph6_malformed(bad):
    with pytest.raises(GraphFormatError):
        parse_graph(bad, "graph6")


def test_edge_list_triangle():
    g = parse_graph("0 1\n1 2\n2 0", "edge_list")
    assert g == catalog("complete", [3])


def test_edge_list_loop_rejected():
    with pytest.raises(GraphFormatError):
        parse_graph("0 1\n3 3\n", "edge_list")


def test_edge_list_duplicate_warns():
    with pytest.warns(UserWarning, match="duplicate"):
        g = parse_graph("0 1\n1 0\n1 2\n", "edgelist")
    assert g.num_edges == 2


def test_edge_list_header_range():
    g = parse_graph("# n=5\n0 1\n", "edge_list")
    assert g.n == 5
    with pytest.raises(GraphFormatError):
        parse_graph("# n=2\n0 4\n", "edge_list")


@pytest.mark.parametrize("bad", ['{"n": 3}', '{"n": 2, "edges": [[0, 5]]}', "nope", '{"n": 0, "edges": []}'])
def test_json_malformed(bad):
    with pytest.raises(GraphFormatError):
        parse_graph(bad, "json")


@pytest.mark.parametrize("fmt", ["graph6", "edge_list", "json"])
@pytest.mark.parametrize("case", CATALOG_CASES, ids=case_id)
def test_round_trip_catalog(case, fmt):
    g = graph(*case)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert parse_graph(serialize_graph(g, fmt), fmt) == g


@given(random_graphs(), st.sampled_from(["graph6", "edge_list", "json"]))
def test_round_trip_random(g, fmt):
    assert parse_graph(serialize_graph(g, fmt), fmt) == g


def test_json_schema():
    obj = json.loads(serialize_graph(catalog("cycle", [3]), "json"))
    assert obj == {"n": 3, "edges": [[0, 1], [0, 2], [1, 2]]}


def test_graph_is_immutable():
    g = catalog("cycle", [4])
    with pytest.raises(ValueError):
        g.adjacency[0, 1] = 0


def test_torus_is_cycle_product():
    g = catalog("torus", [6, 6])
    c6 = catalog("cycle", [6])
    assert g.edges == cartesian_product(c6, c6).edges
    assert (g.n, g.num_edges, g.degree) == (36, 72, 4)
    with pytest.raises(PreconditionError):
        catalog("torus", [6])
