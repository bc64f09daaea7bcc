"""Internet-like power-law topologies: BA, GLP and Interactive Growth
generators plus degree, rich-club and link-distribution metrics."""

__version__ = "0.1.0"

from igtopo.errors import (  # noqa: E402
    ConfigError,
    EdgeListError,
    FitError,
    NoCandidateError,
    TopologyError,
    UndefinedMetricError,
    UnknownNodeError,
    UnreachableTargetError,
)
from igtopo.graph import LINEAR, EdgeOutcome, Graph, PreferenceKernel, sample_preferential  # noqa: E402
from igtopo.generators import (  # noqa: E402
    GeneratorConfig,
    GrowthTrace,
    TraceSpec,
    generate,
    generate_ba,
    generate_glp,
    generate_ig,
    generate_with_trace,
    make_seed_graph,
)
