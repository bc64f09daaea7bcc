import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igtopo.errors import UndefinedMetricError
from igtopo.generators import GeneratorConfig, generate
from igtopo.graph import Graph
from igtopo.metrics import (
    average_path_length,
    clustering_coefficient,
    default_rich_club_grid,
    degree_distribution,
    link_distribution,
    links_with_top,
    links_within_top,
    rank_table,
    rich_club_connectivity,
    rich_club_curve,
    rich_club_links,
    summarize,
    top_count,
)

from conftest import complete_graph, path_graph, random_graph, star_graph


# --- brute-force oracles -------------------------------------------------------


def brute_ranks(g):
    """rank = 1 + number of nodes that sort strictly before (degree desc, id asc)."""
    d = g.degrees
    return [1 + sum(1 for u in range(g.num_nodes) if (-d[u], u) < (-d[v], v)) for v in range(g.num_nodes)]


def brute_rich_club(g, n):
    rank = brute_ranks(g)
    members = [v for v in range(g.num_nodes) if rank[v] <= n]
    links = sum(1 for i, a in enumerate(members) for b in members[i + 1 :] if g.has_edge(a, b))
    return Fraction(links, n * (n - 1) // 2)


def brute_link_cells(g, bin_width):
    n = g.num_nodes
    rank = brute_ranks(g)
    nb = round(1 / bin_width) if abs(1 / bin_width - round(1 / bin_width)) < 1e-9 else math.ceil(1 / bin_width)
    # bin b holds ranks r with (b-1)*w*N < r <= b*w*N
    bin_of = {}
    for v in range(n):
        b = 1
        while not rank[v] <= Fraction(b) * Fraction(bin_width).limit_denominator(10**6) * n:
            b += 1
        bin_of[v] = min(b, nb)
    cells = {}
    for u in range(n):
        for v in range(u + 1, n):
            if g.has_edge(u, v):
                key = tuple(sorted((bin_of[u], bin_of[v])))
                cells[key] = cells.get(key, 0) + 1
    return cells


# --- degree distribution / ranks ------------------------------------------------


def test_degree_distribution_small():
    d = degree_distribution(path_graph(3))
    assert d.counts == {1: 2, 2: 1}
    assert d.k_average == pytest.approx(4 / 3)
    k5 = degree_distribution(complete_graph(5))
    assert k5.counts == {4: 5} and k5.k_max == 4
    assert list(k5.items()) == [(4, 5, 1.0)]


def test_rank_table_examples():
    g = Graph(3)
    g.degrees[:] = [5, 2, 9]  # degrees only; ranking reads nothing else
    rt = rank_table(g)
    assert rt.order == [2, 0, 1]
    assert {n: rt.rank[n] for n in range(3)} == {2: 1, 0: 2, 1: 3}
    ring = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    assert rank_table(ring).order == list(range(6))


def test_rank_one_is_kmax():
    g = generate(GeneratorConfig("IG", target_nodes=2000, seed=1))
    rt = rank_table(g)
    assert rt.degrees[0] == degree_distribution(g).k_max
    assert all(a >= b for a, b in zip(rt.degrees, rt.degrees[1:]))
    assert sorted(rt.rank) == list(range(1, g.num_nodes + 1))
    assert rank_table(g).order == rt.order


# --- rich club ------------------------------------------------------------------


def test_rich_club_complete_and_star():
    k10 = complete_graph(10)
    for r in (0.2, 0.5, 1.0):
        assert rich_club_connectivity(k10, None, r) == 1.0
    s10 = star_graph(9)
    assert rich_club_connectivity(s10, None, 0.2) == 1.0  # hub + leaf 1
    assert rich_club_links(s10, rank_table(s10), 0.3) == (2, 3)
    assert rich_club_connectivity(s10, None, 0.3) == pytest.approx(2 / 3)


def test_rich_club_undefined():
    with pytest.raises(UndefinedMetricError):
        rich_club_connectivity(complete_graph(10), None, 0.1)


def test_top_count_is_robust_to_round_off():
    assert top_count(0.29, 100) == 29
    assert top_count(0.01, 11461) == 114
    assert top_count(0.05, 11461) == 573


def test_curve_full_graph_is_density():
    g = random_graph(40, 0.2, 1)
    curve = rich_club_curve(g, [1.0])
    assert curve.points[0][1] == pytest.approx(2 * g.num_links / (40 * 39))
    assert [phi for _, phi in rich_club_curve(complete_graph(5), [0.4, 0.6, 1.0]).points] == [1.0, 1.0, 1.0]


def test_default_grid():
    grid = default_rich_club_grid(11461)
    assert 0.01 in grid and 0.05 in grid
    assert grid[-1] == pytest.approx(1.0)
    assert all(top_count(r, 11461) >= 2 for r in grid)
    assert len(grid) == 32


@pytest.mark.parametrize("seed", range(20))
def test_rich_club_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(5, 60)
    g = random_graph(n, rng.uniform(0.05, 0.5), seed)
    rt = rank_table(g)
    assert rt.rank == brute_ranks(g)
    grid = [k / n for k in range(2, n + 1)]
    curve = rich_club_curve(g, grid, rt)
    for size, links, r in zip(curve.club_sizes, curve.club_links, grid):
        expected = brute_rich_club(g, size)
        assert Fraction(links, size * (size - 1) // 2) == expected
        assert Fraction(*rich_club_links(g, rt, r)) == expected


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("width", [0.05, 0.1, 0.3, 1.0])
def test_link_distribution_matches_brute_force(seed, width):
    rng = random.Random(seed)
    g = random_graph(rng.randint(5, 60), rng.uniform(0.05, 0.5), seed)
    m = link_distribution(g, bin_width=width)
    assert m.cells == brute_link_cells(g, width)
    assert m.total == g.num_links


def test_link_distribution_single_link():
    # a ring ranks nodes by id, so node 0 is rank 1 and node 19 is rank N
    ranks = rank_table(Graph.from_edges(20, [(i, (i + 1) % 20) for i in range(20)]))
    g = Graph.from_edges(20, [(0, 19)])
    assert link_distribution(g, ranks, 0.05).cells == {(1, 20): 1}


def test_link_marginals():
    g = generate(GeneratorConfig("IG", target_nodes=3000, seed=2))
    rt = rank_table(g)
    m = link_distribution(g, rt, 0.05)
    assert m.with_top_bins(1) == links_with_top(g, rt, 0.05)
    assert m.within_top_bins(1) == links_within_top(g, rt, 0.05)
    assert m.within_top_bins(1) <= m.with_top_bins(1) <= g.num_links
    marginals = [links_with_top(g, rt, x / 20) for x in range(1, 21)]
    assert marginals == sorted(marginals) and marginals[-1] == g.num_links
    assert sum(m.row(1)) == m.with_top_bins(1)


def test_phi_invariant_under_relabeling():
    g = generate(GeneratorConfig("BA", target_nodes=500, seed=3))
    perm = list(range(500))
    random.Random(0).shuffle(perm)
    h = g.relabeled(perm)
    degs = rank_table(g).degrees
    # club membership is label-free wherever the cut does not split a degree tie
    clean = [n for n in range(2, 500) if degs[n - 1] > degs[n]] + [500]
    assert len(clean) > 20
    for n in clean:
        assert rich_club_links(h, rank_table(h), n / 500) == rich_club_links(g, rank_table(g), n / 500)


# --- small-world metrics --------------------------------------------------------


def test_clustering_examples():
    assert clustering_coefficient(complete_graph(3)) == 1.0
    assert clustering_coefficient(star_graph(9)) == 0.0
    k4_minus = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
    assert clustering_coefficient(k4_minus) == pytest.approx(5 / 6)


def _brute_clustering(g):
    total = 0.0
    for u in range(g.num_nodes):
        nb = sorted(g.adj[u])
        k = len(nb)
        if k < 2:
            continue
        closed = sum(1 for i in range(k) for j in range(i + 1, k) if g.has_edge(nb[i], nb[j]))
        total += closed / (k * (k - 1) / 2)
    return total / g.num_nodes


@pytest.mark.parametrize("seed", range(5))
def test_clustering_matches_brute_force(seed):
    g = random_graph(40, 0.2, seed)
    assert clustering_coefficient(g) == pytest.approx(_brute_clustering(g))


def test_path_length_examples():
    assert average_path_length(path_graph(3)) == pytest.approx(4 / 3)
    assert average_path_length(complete_graph(7)) == 1.0
    with pytest.raises(UndefinedMetricError):
        average_path_length(Graph())
    # largest component only
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4)])
    assert average_path_length(g) == pytest.approx(4 / 3)


def _floyd_mean(g, nodes):
    inf = float("inf")
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, v in g.edges():
        if u in idx and v in idx:
            d[idx[u]][idx[v]] = d[idx[v]][idx[u]] = 1
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == inf:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return sum(d[i][j] for i in range(n) for j in range(n) if i != j) / (n * (n - 1))


def test_path_length_exact_and_sampled():
    g = generate(GeneratorConfig("IG", target_nodes=200, seed=5))
    exact = average_path_length(g, sample_size=10**6)
    assert exact == pytest.approx(_floyd_mean(g, list(range(200))))
    sampled = average_path_length(g, sample_size=60, seed=1)
    assert abs(sampled - exact) / exact < 0.05


def test_summarize_triangle():
    s = summarize(complete_graph(3))
    assert (s["N"], s["L"], s["k_average"]) == (3, 3, 2.0)
    assert math.isnan(s["phi_1pct"])


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 40), st.floats(0.0, 1.0), st.integers(0, 10**6))
def test_conservation_properties(n, p, seed):
    g = random_graph(n, p, seed)
    d = degree_distribution(g)
    assert sum(d.counts.values()) == n
    assert sum(k * c for k, c in d.counts.items()) == 2 * g.num_links
    assert sum(prob for _, _, prob in d.items()) == pytest.approx(1.0)
    m = link_distribution(g, bin_width=0.05)
    assert m.total == g.num_links and all(c >= 0 for c in m.cells.values())
    curve = rich_club_curve(g, default_rich_club_grid(n))
    assert all(0.0 <= phi <= 1.0 for _, phi in curve.points)
