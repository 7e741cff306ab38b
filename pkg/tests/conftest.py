import pytest

from ab_linkpred import load_edge_list

from graphgen import community_edges, edge_text, graph_from_edges, two_cliques_edges

# Stand-ins for the evaluation networks: same node/edge totals, same flavor
# (dense friend circles), generated deterministically since the original
# files are not shipped with the repository.
G333_NODES, G333_EDGES = 333, 2519


@pytest.fixture(scope="session")
def g333_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "ego333.txt"
    path.write_text(edge_text(community_edges(G333_NODES, G333_EDGES, communities=9, seed=3)))
    return path


@pytest.fixture(scope="session")
def g333(g333_file):
    return load_edge_list(g333_file)


@pytest.fixture(scope="session")
def two_k6():
    return graph_from_edges(two_cliques_edges(6))
