"""Structural metrics used to validate topology models.

All functions are pure reads of a finished :class:`~igtopo.graph.Graph`.
Ranks are 1-based positions in decreasing-degree order with ties broken by
ascending node identifier; a normalized rank ``r`` selects the top
``floor(r * N)`` nodes.
"""

from __future__ import annotations

import math
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from igtopo.errors import UndefinedMetricError
from igtopo.graph import Graph

__all__ = [
    "DegreeDistribution",
    "RankTable",
    "RichClubCurve",
    "LinkDistMatrix",
    "degree_distribution",
    "rank_table",
    "top_count",
    "rich_club_links",
    "rich_club_connectivity",
    "rich_club_curve",
    "default_rich_club_grid",
    "link_distribution",
    "links_with_top",
    "links_within_top",
    "clustering_coefficient",
    "average_path_length",
    "summarize",
]

# floor(r * N) must not lose a whole node to binary round-off (0.29 * 100 = 28.999...)
_EPS = 1e-9


def top_count(fraction: float, n: int) -> int:
    """Size of the top set selected by a normalized rank."""
    return int(math.floor(fraction * n + _EPS))


@dataclass
class DegreeDistribution:
    counts: dict[int, int]
    num_nodes: int
    num_links: int

    @property
    def k_max(self) -> int:
        return max(self.counts, default=0)

    @property
    def k_average(self) -> float:
        return 2 * self.num_links / self.num_nodes

    def p(self, k: int) -> float:
        return self.counts.get(k, 0) / self.num_nodes

    def items(self):
        """``(k, count, P(k))`` in increasing ``k``."""
        for k in sorted(self.counts):
            yield k, self.counts[k], self.counts[k] / self.num_nodes


def degree_distribution(g: Graph) -> DegreeDistribution:
    if g.num_nodes < 1:
        raise UndefinedMetricError("degree distribution of an empty graph")
    dist = DegreeDistribution(dict(Counter(g.degrees)), g.num_nodes, g.num_links)
    assert sum(dist.counts.values()) == dist.num_nodes
    assert sum(k * c for k, c in dist.counts.items()) == 2 * dist.num_links
    return dist


@dataclass
class RankTable:
    order: list[int]  # node ids, richest first
    degrees: list[int]  # degree of order[i]
    rank: list[int]  # rank[node] -> 1-based position

    @property
    def num_nodes(self) -> int:
        return len(self.order)

    def normalized(self, node: int) -> float:
        return self.rank[node] / len(self.order)

    def top(self, fraction: float) -> list[int]:
        return self.order[: top_count(fraction, len(self.order))]


def rank_table(g: Graph) -> RankTable:
    deg = g.degrees
    order = sorted(range(g.num_nodes), key=lambda i: (-deg[i], i))
    rank = [0] * g.num_nodes
    for pos, node in enumerate(order, start=1):
        rank[node] = pos
    return RankTable(order, [deg[i] for i in order], rank)


def _cumulative_club_links(g: Graph, ranks: RankTable) -> list[int]:
    """``out[n]`` = links among the ``n`` richest nodes, for n = 0..N."""
    out = [0] * (ranks.num_nodes + 1)
    rank = ranks.rank
    running = 0
    for pos, node in enumerate(ranks.order, start=1):
        running += sum(1 for v in g.adj[node] if rank[v] < pos)
        out[pos] = running
    return out


def rich_club_links(g: Graph, ranks: RankTable, r: float) -> tuple[int, int]:
    """``(links among the top floor(r*N) nodes, maximum possible links)``."""
    n = top_count(r, g.num_nodes)
    if n < 2:
        raise UndefinedMetricError(f"rich club of r={r} has {n} node(s); need at least 2")
    top = set(ranks.order[:n])
    links = sum(1 for u in top for v in g.adj[u] if v in top) // 2
    return links, n * (n - 1) // 2


def rich_club_connectivity(g: Graph, ranks: RankTable | None = None, r: float = 0.01) -> float:
    """Fraction of possible links realised among the top ``floor(r*N)`` nodes."""
    ranks = ranks or rank_table(g)
    links, possible = rich_club_links(g, ranks, r)
    return float(Fraction(links, possible))


@dataclass
class RichClubCurve:
    points: list[tuple[float, float]]  # (r, phi)
    club_sizes: list[int] = field(default_factory=list)
    club_links: list[int] = field(default_factory=list)

    def at(self, r: float) -> float:
        for x, phi in self.points:
            if math.isclose(x, r, rel_tol=1e-12, abs_tol=0.0):
                return phi
        raise KeyError(r)


def default_rich_club_grid(n: int, count: int = 30) -> list[float]:
    """Log-spaced ranks over [2/N, 1] plus the 1% and 5% marks."""
    grid = set(np.geomspace(2 / n, 1.0, count).tolist())
    grid.update(r for r in (0.01, 0.05) if top_count(r, n) >= 2)
    # the lowest grid point can fall a hair under 2/N after exp/log
    return sorted(r for r in grid if top_count(r, n) >= 2)


def rich_club_curve(g: Graph, r_values=None, ranks: RankTable | None = None) -> RichClubCurve:
    ranks = ranks or rank_table(g)
    if r_values is None:
        r_values = default_rich_club_grid(g.num_nodes)
    cumulative = _cumulative_club_links(g, ranks)
    curve = RichClubCurve([])
    for r in r_values:
        n = top_count(r, g.num_nodes)
        if n < 2:
            raise UndefinedMetricError(f"rich club of r={r} has {n} node(s); need at least 2")
        links = cumulative[n]
        curve.points.append((r, float(Fraction(links, n * (n - 1) // 2))))
        curve.club_sizes.append(n)
        curve.club_links.append(links)
    return curve


@dataclass
class LinkDistMatrix:
    """Link counts between normalized-rank bins.

    Bin ``b`` (1-based) holds ranks in ``((b-1)*w*N, b*w*N]``. Cells are
    keyed ``(b_i, b_j)`` with ``b_i <= b_j``.
    """

    bin_width: float
    num_bins: int
    cells: dict[tuple[int, int], int]

    @property
    def total(self) -> int:
        return sum(self.cells.values())

    def with_top_bins(self, b: int) -> int:
        """Links with at least one endpoint in bins ``1..b`` (each link once)."""
        return sum(c for (bi, _), c in self.cells.items() if bi <= b)

    def within_top_bins(self, b: int) -> int:
        return sum(c for (_, bj), c in self.cells.items() if bj <= b)

    def row(self, b_i: int) -> list[int]:
        """``l(bin b_i, bin b_j)`` for every ``b_j`` (symmetric lookup)."""
        out = []
        for b_j in range(1, self.num_bins + 1):
            key = (min(b_i, b_j), max(b_i, b_j))
            out.append(self.cells.get(key, 0))
        return out


def _num_bins(bin_width: float) -> int:
    return max(1, math.ceil(1.0 / bin_width - _EPS))


def _bin_of(rank: int, n: int, bin_width: float, num_bins: int) -> int:
    b = math.ceil(rank / (bin_width * n) - _EPS)
    return min(max(b, 1), num_bins)


def link_distribution(g: Graph, ranks: RankTable | None = None, bin_width: float = 0.05) -> LinkDistMatrix:
    if not 0 < bin_width <= 1:
        raise ValueError(f"bin_width must lie in (0, 1], got {bin_width}")
    ranks = ranks or rank_table(g)
    n = g.num_nodes
    nb = _num_bins(bin_width)
    bins = [_bin_of(ranks.rank[node], n, bin_width, nb) for node in range(n)]
    cells: Counter[tuple[int, int]] = Counter()
    for u, v in g.edges():
        a, b = bins[u], bins[v]
        cells[(a, b) if a <= b else (b, a)] += 1
    matrix = LinkDistMatrix(bin_width, nb, dict(cells))
    assert matrix.total == g.num_links
    return matrix


def links_with_top(g: Graph, ranks: RankTable, x: float) -> int:
    """Links with at least one endpoint among the top ``floor(x*N)`` nodes."""
    top = set(ranks.order[: top_count(x, g.num_nodes)])
    return sum(1 for u, v in g.edges() if u in top or v in top)


def links_within_top(g: Graph, ranks: RankTable, x: float) -> int:
    top = set(ranks.order[: top_count(x, g.num_nodes)])
    return sum(1 for u, v in g.edges() if u in top and v in top)


def clustering_coefficient(g: Graph) -> float:
    """Mean local clustering; nodes with fewer than two links count as 0."""
    if g.num_nodes < 3:
        raise UndefinedMetricError("clustering needs at least 3 nodes")
    adj = g.adj
    total = 0.0
    for u, nbrs in enumerate(adj):
        k = len(nbrs)
        if k < 2:
            continue
        # each neighbour-neighbour link is seen from both ends
        closed = sum(len(nbrs & adj[v]) for v in nbrs) // 2
        total += closed / (k * (k - 1) / 2)
    return total / g.num_nodes


def _components(g: Graph) -> list[list[int]]:
    seen = [False] * g.num_nodes
    comps = []
    for s in range(g.num_nodes):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(comp)
    return comps


def _bfs_distance_sum(g: Graph, source: int) -> tuple[int, int]:
    dist = {source: 0}
    queue = deque([source])
    total = 0
    while queue:
        u = queue.popleft()
        d = dist[u] + 1
        for v in g.adj[u]:
            if v not in dist:
                dist[v] = d
                total += d
                queue.append(v)
    return total, len(dist) - 1


def average_path_length(g: Graph, sample_size: int | None = None, seed: int = 0) -> float:
    """Mean shortest-path hop count within the largest connected component.

    Exact when ``sample_size`` covers the component; otherwise the mean over
    BFS runs from ``sample_size`` uniformly drawn sources. By default the
    computation is exact up to 2000 nodes and uses 1000 sources above.
    """
    if g.num_nodes == 0:
        raise UndefinedMetricError("path length of an empty graph")
    lcc = max(_components(g), key=len)
    if len(lcc) < 2:
        raise UndefinedMetricError("largest component has a single node")
    if sample_size is None:
        sample_size = len(lcc) if len(lcc) <= 2000 else 1000
    if sample_size < 1:
        raise ValueError("sample_size must be >= 1")
    if sample_size >= len(lcc):
        sources = sorted(lcc)
    else:
        sources = random.Random(seed).sample(sorted(lcc), sample_size)
    dist_total = pairs = 0
    for s in sources:
        d, c = _bfs_distance_sum(g, s)
        dist_total += d
        pairs += c
    return dist_total / pairs


def summarize(g: Graph, ranks: RankTable | None = None) -> dict[str, float]:
    """The headline numbers used to compare a model against a measured map."""
    ranks = ranks or rank_table(g)
    dist = degree_distribution(g)
    n = g.num_nodes
    summary: dict[str, float] = {
        "N": n,
        "L": g.num_links,
        "k_max": dist.k_max,
        "k_average": dist.k_average,
        "P1": dist.p(1),
        "P2": dist.p(2),
        "P3": dist.p(3),
    }
    summary["phi_1pct"] = (
        rich_club_connectivity(g, ranks, 0.01) if top_count(0.01, n) >= 2 else float("nan")
    )
    summary["l_top5"] = links_with_top(g, ranks, 0.05)
    summary["l_top5_top5"] = links_within_top(g, ranks, 0.05)
    return summary
