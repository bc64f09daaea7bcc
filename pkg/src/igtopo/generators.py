"""Growth models: Barabasi-Albert (BA), Generalized Linear Preference (GLP)
and Interactive Growth (IG).

Every generator is a pure function of its :class:`GeneratorConfig`; the seed
in the config drives a private ``random.Random`` (MT19937) stream, so the same
config always yields the same edge list.
"""

from __future__ import annotations

import heapq
import logging
import random
from array import array
from collections.abc import Iterator
from dataclasses import asdict, dataclass, field

from igtopo.errors import ConfigError, NoCandidateError, UnreachableTargetError
from igtopo.graph import LINEAR, Graph, PreferenceKernel, sample_preferential

__all__ = [
    "RNG_ALGORITHM",
    "MODELS",
    "GeneratorConfig",
    "GenerationStats",
    "TraceSpec",
    "GrowthTrace",
    "make_seed_graph",
    "generate",
    "generate_ba",
    "generate_glp",
    "generate_ig",
    "generate_with_trace",
    "node_inserted_at",
]

log = logging.getLogger(__name__)

RNG_ALGORITHM = "python-random-mt19937"
MODELS = ("BA", "GLP", "IG")

_REDRAW_CAP = 1000


@dataclass(frozen=True)
class GeneratorConfig:
    """Model choice plus every growth parameter.

    ``m`` is links per new node for BA and links per operation for GLP; the
    IG model always adds three links per step and ignores it.
    """

    model: str = "IG"
    target_nodes: int = 11461
    m0: int = 10
    m: int = 3
    rho: float = 0.0
    beta: float = 0.0
    ig_branch_a_prob: float = 0.40
    target_links: int | None = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", self.model.upper())

    def validate(self) -> None:
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.m0 < 2:
            raise ConfigError(f"m0 must be >= 2, got {self.m0}")
        if self.target_nodes < self.m0:
            raise ConfigError(f"target_nodes ({self.target_nodes}) must be >= m0 ({self.m0})")
        if self.m < 1:
            raise ConfigError(f"m must be >= 1, got {self.m}")
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigError(f"rho must lie in [0, 1], got {self.rho}")
        if not self.beta < 1:
            raise ConfigError(f"beta must be < 1, got {self.beta}")
        if not 0.0 <= self.ig_branch_a_prob <= 1.0:
            raise ConfigError(f"ig_branch_a_prob must lie in [0, 1], got {self.ig_branch_a_prob}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.model == "BA" and self.m > self.m0:
            raise ConfigError(f"BA needs m <= m0 (got m={self.m}, m0={self.m0})")
        if self.model == "GLP":
            if self.m >= self.m0:
                raise ConfigError(f"GLP needs m < m0 (got m={self.m}, m0={self.m0})")
            if self.rho == 1.0 and self.target_nodes > self.m0:
                raise ConfigError("rho=1 never adds nodes")
        if self.model == "IG" and self.m0 < 4:
            raise ConfigError(f"IG needs m0 >= 4, got {self.m0}")

    def to_dict(self) -> dict:
        return asdict(self)

    def make_rng(self) -> random.Random:
        return random.Random(self.seed)


@dataclass
class GenerationStats:
    """Counters for the rare fallback paths taken during a run."""

    peer_fallbacks: int = 0
    skipped_links: int = 0
    glp_topup_ops: int = 0
    fallback_steps: list[int] = field(default_factory=list)


@dataclass(frozen=True)
class TraceSpec:
    """Which nodes to follow and how often to record them.

    ``insertion_times`` are growth steps (the node added at step ``t`` is
    traced); degrees are recorded every ``stride`` steps from insertion on.
    """

    insertion_times: tuple[int, ...] = (100,)
    stride: int = 1

    def __post_init__(self):
        if self.stride < 1:
            raise ConfigError("stride must be >= 1")
        if any(t < 1 for t in self.insertion_times):
            raise ConfigError("insertion times start at step 1")


class GrowthTrace:
    """Degree time series ``k(t)`` for the traced nodes.

    ``t`` counts new-node insertions; the seed graph is ``t = 0``. Series are
    stored per node in compact arrays; :meth:`samples` yields the flat
    ``(t, node, k)`` view.
    """

    def __init__(self):
        self.tracked_nodes: dict[int, int] = {}  # node -> insertion step
        self._times: dict[int, array] = {}
        self._degrees: dict[int, array] = {}

    def append(self, t: int, node: int, degree: int) -> None:
        if node not in self._times:
            self._times[node] = array("q")
            self._degrees[node] = array("q")
        self._times[node].append(t)
        self._degrees[node].append(degree)

    def series(self, node: int) -> tuple[array, array]:
        return self._times[node], self._degrees[node]

    def samples(self) -> Iterator[tuple[int, int, int]]:
        """All samples ordered by ``(t, node)``."""
        return heapq.merge(*(self._stream(node) for node in sorted(self._times)))

    def _stream(self, node: int) -> Iterator[tuple[int, int, int]]:
        for t, k in zip(self._times[node], self._degrees[node]):
            yield t, node, k

    def __len__(self) -> int:
        return sum(len(ts) for ts in self._times.values())


def node_inserted_at(m0: int, step: int) -> int:
    """Identifier of the node added at growth step ``step`` (1-based)."""
    return m0 + step - 1


class _Tracer:
    def __init__(self, spec: TraceSpec, m0: int):
        self.spec = spec
        self.trace = GrowthTrace()
        self._pending = {node_inserted_at(m0, t): t for t in spec.insertion_times}

    def record(self, g: Graph, step: int) -> None:
        stride = self.spec.stride
        for node, t0 in self._pending.items():
            if node < g.num_nodes and step >= t0 and (step - t0) % stride == 0:
                self.trace.tracked_nodes.setdefault(node, t0)
                self.trace.append(step, node, g.degrees[node])


def make_seed_graph(model: str, m0: int, rng: random.Random) -> Graph:
    """Initial graph for a growth run.

    BA and GLP start from a path over ``m0`` nodes. IG starts from a connected
    random graph with exactly ``m0`` links: a uniform random spanning tree
    (random Pruefer sequence) plus one extra random link.
    """
    model = model.upper()
    if m0 < 2:
        raise ConfigError(f"m0 must be >= 2, got {m0}")
    if model in ("BA", "GLP"):
        return Graph.from_edges(m0, ((i, i + 1) for i in range(m0 - 1)))
    if model != "IG":
        raise ConfigError(f"unknown model {model!r}")
    if m0 < 3:
        raise ConfigError("an IG seed needs m0 >= 3 to hold m0 links without multi-edges")
    g = Graph(m0)
    for u, v in _random_tree(m0, rng):
        g.add_edge(u, v)
    missing = [(u, v) for u in range(m0) for v in range(u + 1, m0) if not g.has_edge(u, v)]
    g.add_edge(*rng.choice(missing))
    return g


def _random_tree(n: int, rng: random.Random) -> list[tuple[int, int]]:
    if n == 2:
        return [(0, 1)]
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return edges


def _distinct_targets(g: Graph, kernel: PreferenceKernel, count: int, rng, excluded=()) -> list[int]:
    chosen: list[int] = []
    taken = set(excluded)
    for _ in range(count):
        node = sample_preferential(g, kernel, taken, rng)
        chosen.append(node)
        taken.add(node)
    return chosen


def _preferential_pair(g: Graph, kernel: PreferenceKernel, rng, excluded=()) -> tuple[int, int] | None:
    """Two preferentially drawn endpoints forming a new link, or None after the redraw cap."""
    for _ in range(_REDRAW_CAP):
        u = sample_preferential(g, kernel, excluded, rng)
        v = sample_preferential(g, kernel, excluded, rng)
        if u != v and not g.has_edge(u, v):
            return u, v
    return None


def generate_ba(config: GeneratorConfig, rng: random.Random | None = None, *, tracer=None) -> Graph:
    """Linear preferential attachment: each new node links to ``m`` distinct nodes."""
    config.validate()
    if config.model != "BA":
        raise ConfigError(f"generate_ba called with model {config.model}")
    rng = rng or config.make_rng()
    g = make_seed_graph("BA", config.m0, rng)
    for step in range(1, config.target_nodes - config.m0 + 1):
        targets = _distinct_targets(g, LINEAR, config.m, rng)
        new = g.add_node()
        for t in targets:
            g.add_edge(new, t)
        if tracer is not None:
            tracer.record(g, step)
    return g


def generate_glp(
    config: GeneratorConfig, rng: random.Random | None = None, *, tracer=None, stats=None, kernel=None
) -> Graph:
    """Generalized linear preference growth.

    Each step either adds ``m`` links between preferentially chosen pairs of
    existing nodes (probability ``rho``) or one new node with ``m`` links.
    Once ``target_nodes`` is reached, link-only operations continue until
    ``target_links`` (when given) is met exactly. ``kernel`` overrides the
    shifted-linear kernel built from ``config.beta``.
    """
    config.validate()
    if config.model != "GLP":
        raise ConfigError(f"generate_glp called with model {config.model}")
    rng = rng or config.make_rng()
    stats = stats if stats is not None else GenerationStats()
    kernel = kernel or PreferenceKernel.shifted(config.beta)
    g = make_seed_graph("GLP", config.m0, rng)

    def add_links(count: int) -> None:
        for _ in range(count):
            pair = _preferential_pair(g, kernel, rng)
            if pair is None:
                stats.skipped_links += 1
                log.warning("GLP link-only operation skipped a link after %d redraws", _REDRAW_CAP)
                continue
            g.add_edge(*pair)

    step = 0
    while g.num_nodes < config.target_nodes:
        if rng.random() < config.rho:
            add_links(config.m)
        else:
            targets = _distinct_targets(g, kernel, config.m, rng)
            new = g.add_node()
            for t in targets:
                g.add_edge(new, t)
            step += 1
            if tracer is not None:
                tracer.record(g, step)

    if config.target_links is not None:
        if config.target_links < g.link_count:
            raise UnreachableTargetError(
                f"target_links={config.target_links} but growth already produced {g.link_count} links"
            )
        while g.link_count < config.target_links:
            before = g.link_count
            add_links(min(config.m, config.target_links - g.link_count))
            stats.glp_topup_ops += 1
            if g.link_count == before:
                raise UnreachableTargetError("link-only operations can no longer place new links")
    return g


def _pick_peer(g: Graph, host: int, new: int, rng) -> int | None:
    excluded = (host, new)
    for _ in range(_REDRAW_CAP):
        try:
            peer = sample_preferential(g, LINEAR, excluded, rng)
        except NoCandidateError:
            return None
        if peer not in g.adj[host]:
            return peer
    return None


def generate_ig(
    config: GeneratorConfig, rng: random.Random | None = None, *, tracer=None, stats=None
) -> Graph:
    """Interactive growth: every new node also triggers host-to-peer links.

    Per step, with probability ``ig_branch_a_prob`` the new node attaches to
    one host which then links to two peers; otherwise it attaches to two
    hosts and one of them (chosen uniformly) links to one peer. All choices
    use linear preference. Peers differ from the host and the new node and
    are not already neighbours of the host.
    """
    config.validate()
    if config.model != "IG":
        raise ConfigError(f"generate_ig called with model {config.model}")
    rng = rng or config.make_rng()
    stats = stats if stats is not None else GenerationStats()
    g = make_seed_graph("IG", config.m0, rng)

    for step in range(1, config.target_nodes - config.m0 + 1):
        if rng.random() < config.ig_branch_a_prob:
            hosts = _distinct_targets(g, LINEAR, 1, rng)
            peer_host, n_peers = hosts[0], 2
        else:
            hosts = _distinct_targets(g, LINEAR, 2, rng)
            peer_host, n_peers = hosts[rng.randrange(2)], 1
        new = g.add_node()
        for h in hosts:
            g.add_edge(new, h)
        for _ in range(n_peers):
            peer = _pick_peer(g, peer_host, new, rng)
            if peer is not None:
                g.add_edge(peer_host, peer)
                continue
            # host saturated: keep the 3-link budget with one free preferential link
            stats.peer_fallbacks += 1
            stats.fallback_steps.append(step)
            pair = _preferential_pair(g, LINEAR, rng, excluded=(new,))
            if pair is None:
                stats.skipped_links += 1
                log.warning("IG step %d added fewer than 3 links", step)
            else:
                g.add_edge(*pair)
        if tracer is not None:
            tracer.record(g, step)
    return g


_GENERATORS = {"BA": generate_ba, "GLP": generate_glp, "IG": generate_ig}


def generate(config: GeneratorConfig, rng: random.Random | None = None, **kwargs) -> Graph:
    config.validate()
    return _GENERATORS[config.model](config, rng, **kwargs)


def generate_with_trace(
    config: GeneratorConfig, rng: random.Random | None = None, track: TraceSpec | None = None
) -> tuple[Graph, GrowthTrace]:
    """Run a generator while recording the degree of selected nodes.

    Tracing only observes: the graph equals the untraced result for the same seed.
    """
    track = track or TraceSpec()
    tracer = _Tracer(track, config.m0)
    g = generate(config, rng, tracer=tracer)
    return g, tracer.trace
