"""Undirected simple graph with degree-proportional node sampling.

The graph keeps a cumulative-weight index (two Fenwick trees, one over
degrees and one over the indicator ``degree >= 1``) so that a node can be
drawn with probability proportional to ``k - beta`` in logarithmic time.
Both trees hold exact integers; the kernel offset is only combined with them
during the descent, so no floating-point drift accumulates across updates.
"""

from __future__ import annotations

import enum
import random
from collections.abc import Collection, Iterator
from dataclasses import dataclass

from igtopo.errors import ConfigError, NoCandidateError, UnknownNodeError

__all__ = [
    "EdgeOutcome",
    "Graph",
    "PreferenceKernel",
    "LINEAR",
    "sample_preferential",
]


class EdgeOutcome(enum.Enum):
    ADDED = "added"
    DUPLICATE = "duplicate"
    SELF_LOOP = "self-loop"


@dataclass(frozen=True)
class PreferenceKernel:
    """Attachment weight as a function of degree.

    ``linear`` weighs a node by its degree ``k``; ``shifted-linear`` by
    ``k - beta``. Isolated nodes always have weight zero.
    """

    kind: str = "linear"
    beta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("linear", "shifted-linear"):
            raise ConfigError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "linear" and self.beta != 0.0:
            raise ConfigError("beta is only meaningful for the shifted-linear kernel")
        if not self.beta < 1:
            raise ConfigError(f"beta must be < 1, got {self.beta}")

    @classmethod
    def shifted(cls, beta: float) -> PreferenceKernel:
        return cls("shifted-linear", float(beta))

    @property
    def offset(self) -> float:
        return self.beta if self.kind == "shifted-linear" else 0.0

    def weight(self, degree: int) -> float:
        if degree <= 0:
            return 0.0
        return max(degree - self.offset, 0.0)


LINEAR = PreferenceKernel()


class _PreferenceIndex:
    """Fenwick trees over degree and over 'has at least one link'."""

    __slots__ = ("cap", "deg_tree", "conn_tree", "top_bit")

    def __init__(self, degrees: list[int]):
        self._build(degrees, max(16, 2 * len(degrees)))

    def _build(self, degrees: list[int], cap: int) -> None:
        deg_tree = [0] * (cap + 1)
        conn_tree = [0] * (cap + 1)
        for i, k in enumerate(degrees, start=1):
            deg_tree[i] = k
            conn_tree[i] = 1 if k > 0 else 0
        for i in range(1, cap + 1):
            parent = i + (i & -i)
            if parent <= cap:
                deg_tree[parent] += deg_tree[i]
                conn_tree[parent] += conn_tree[i]
        self.cap = cap
        self.deg_tree = deg_tree
        self.conn_tree = conn_tree
        self.top_bit = 1 << (cap.bit_length() - 1)

    def ensure_capacity(self, n: int, degrees: list[int]) -> None:
        if n > self.cap:
            self._build(degrees, 2 * n)

    def bump(self, node: int, new_degree: int) -> None:
        """Record that ``node``'s degree just went up by one."""
        i = node + 1
        cap = self.cap
        deg_tree = self.deg_tree
        if new_degree == 1:
            conn_tree = self.conn_tree
            while i <= cap:
                deg_tree[i] += 1
                conn_tree[i] += 1
                i += i & -i
        else:
            while i <= cap:
                deg_tree[i] += 1
                i += i & -i

    def find(self, target: float, offset: float) -> int:
        """Smallest 0-based position whose cumulative weight exceeds ``target``."""
        pos = 0
        step = self.top_bit
        cap = self.cap
        deg_tree = self.deg_tree
        conn_tree = self.conn_tree
        while step:
            nxt = pos + step
            if nxt <= cap:
                w = deg_tree[nxt] - offset * conn_tree[nxt]
                if w <= target:
                    pos = nxt
                    target -= w
            step >>= 1
        return pos


class Graph:
    """Undirected simple graph on dense integer identifiers ``0..N-1``.

    A graph under construction is meant to be mutated from one thread only;
    once built it can be read concurrently.
    """

    def __init__(self, n: int = 0):
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.degrees: list[int] = [0] * n
        self.link_count = 0
        self.connected_count = 0  # nodes with degree >= 1
        self._index: _PreferenceIndex | None = None

    @classmethod
    def from_edges(cls, n: int, edges) -> Graph:
        g = cls(n)
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def __len__(self) -> int:
        return len(self.degrees)

    def __repr__(self) -> str:
        return f"Graph(N={self.num_nodes}, L={self.link_count})"

    @property
    def num_nodes(self) -> int:
        return len(self.degrees)

    @property
    def num_links(self) -> int:
        return self.link_count

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def degree(self, node: int) -> int:
        return self.degrees[node]

    def neighbors(self, node: int) -> set[int]:
        return self.adj[node]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each link once as ``(u, v)`` with ``u < v``."""
        for u, nbrs in enumerate(self.adj):
            for v in nbrs:
                if u < v:
                    yield u, v

    def add_node(self) -> int:
        node = len(self.degrees)
        self.adj.append(set())
        self.degrees.append(0)
        if self._index is not None:
            self._index.ensure_capacity(node + 1, self.degrees)
        return node

    def add_edge(self, u: int, v: int) -> EdgeOutcome:
        n = len(self.degrees)
        for x in (u, v):
            if not (isinstance(x, int) and 0 <= x < n):
                raise UnknownNodeError(x)
        if u == v:
            return EdgeOutcome.SELF_LOOP
        if v in self.adj[u]:
            return EdgeOutcome.DUPLICATE
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.link_count += 1
        index = self._index
        for x in (u, v):
            k = self.degrees[x] + 1
            self.degrees[x] = k
            if k == 1:
                self.connected_count += 1
            if index is not None:
                index.bump(x, k)
        return EdgeOutcome.ADDED

    def copy(self) -> Graph:
        g = Graph(0)
        g.adj = [set(s) for s in self.adj]
        g.degrees = list(self.degrees)
        g.link_count = self.link_count
        g.connected_count = self.connected_count
        return g

    def relabeled(self, perm: list[int]) -> Graph:
        """Copy with node ``i`` renamed to ``perm[i]``."""
        g = Graph(self.num_nodes)
        for u, v in self.edges():
            g.add_edge(perm[u], perm[v])
        return g

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges())

    def check_invariants(self) -> None:
        """Raise AssertionError if the adjacency is not a simple undirected graph."""
        total = 0
        for u, nbrs in enumerate(self.adj):
            assert u not in nbrs, f"self-loop at {u}"
            assert len(nbrs) == self.degrees[u], f"degree mismatch at {u}"
            for v in nbrs:
                assert u in self.adj[v], f"asymmetric link {u}-{v}"
            total += len(nbrs)
        assert total == 2 * self.link_count, "degree sum != 2L"
        assert self.connected_count == sum(1 for k in self.degrees if k > 0)

    def total_weight(self, kernel: PreferenceKernel) -> float:
        return self.link_count * 2 - kernel.offset * self.connected_count

    def _preference_index(self) -> _PreferenceIndex:
        if self._index is None:
            self._index = _PreferenceIndex(self.degrees)
        return self._index


def _scan_eligible(
    g: Graph, kernel: PreferenceKernel, excluded: Collection[int], rng: random.Random
) -> int:
    candidates = []
    weights = []
    for node, k in enumerate(g.degrees):
        if k > 0 and node not in excluded:
            w = kernel.weight(k)
            if w > 0:
                candidates.append(node)
                weights.append(w)
    if not candidates:
        raise NoCandidateError("no eligible node with positive weight")
    return rng.choices(candidates, weights=weights)[0]


def sample_preferential(
    g: Graph,
    kernel: PreferenceKernel,
    excluded: Collection[int] = (),
    rng: random.Random | None = None,
) -> int:
    """Draw a node with probability proportional to its kernel weight.

    Nodes in ``excluded`` are never returned; the distribution over the
    remaining nodes is renormalised. Draws are rejection-sampled against the
    cumulative index and fall back to an explicit scan after
    ``100 * len(excluded) + 100`` rejections.

    Raises
    ------
    NoCandidateError
        If no non-excluded node has positive weight.
    """
    if rng is None:
        rng = random.Random()
    offset = kernel.offset
    total = g.link_count * 2 - offset * g.connected_count
    if total <= 0:
        raise NoCandidateError("total preference weight is zero")
    index = g._preference_index()
    degrees = g.degrees
    n = len(degrees)
    tries = 100 * len(excluded) + 100
    for _ in range(tries):
        node = index.find(rng.random() * total, offset)
        # guards float round-off at bucket edges
        if node >= n or degrees[node] == 0:
            continue
        if node not in excluded:
            return node
    return _scan_eligible(g, kernel, excluded, rng)
