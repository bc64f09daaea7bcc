"""Plain-text graph and metric files.

Edge lists are ``u v`` lines (``u < v``, sorted) preceded by ``#`` comment
headers of the form ``# key: value``. A ``# nodes: N`` header keeps trailing
isolated nodes across a round trip; relabelled inputs carry their
original identifiers in ``#@map <dense> <original>`` lines.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from igtopo.errors import EdgeListError
from igtopo.graph import Graph
from igtopo.metrics import DegreeDistribution, LinkDistMatrix, RankTable, RichClubCurve

__all__ = [
    "FORMAT_VERSION",
    "Metadata",
    "MetricBundle",
    "METRIC_FILES",
    "format_fraction",
    "write_edge_list",
    "read_edge_list",
    "save_edge_list",
    "load_edge_list",
    "edge_list_text",
    "write_metrics_csv",
]

FORMAT_VERSION = "1"


@dataclass
class Metadata:
    fields: dict[str, str] = field(default_factory=dict)
    original_ids: list[int] | None = None  # dense id -> id in the source file
    duplicates: int = 0  # duplicate pairs collapsed while reading

    def __getitem__(self, key: str) -> str:
        return self.fields[key]

    def get(self, key: str, default=None):
        return self.fields.get(key, default)


def write_edge_list(g: Graph, meta: Metadata | dict | None, sink) -> None:
    """Write ``g`` to a text stream in canonical form."""
    if isinstance(meta, dict):
        meta = Metadata({str(k): str(v) for k, v in meta.items()})
    meta = meta or Metadata()
    header = {"format": FORMAT_VERSION, **meta.fields, "nodes": str(g.num_nodes)}
    for key, value in header.items():
        sink.write(f"# {key}: {value}\n")
    if meta.original_ids is not None:
        for dense, original in enumerate(meta.original_ids):
            sink.write(f"#@map {dense} {original}\n")
    for u, v in sorted(g.edges()):
        sink.write(f"{u} {v}\n")


def edge_list_text(g: Graph, meta=None) -> str:
    buf = io.StringIO()
    write_edge_list(g, meta, buf)
    return buf.getvalue()


def read_edge_list(source, relabel: bool = False) -> tuple[Graph, Metadata]:
    """Parse an edge list from a text stream or string.

    Lines may be unordered, reversed or padded with whitespace. Duplicate
    pairs are collapsed and counted in ``Metadata.duplicates``; self-loops
    and malformed lines raise :class:`EdgeListError`. Without ``relabel``
    identifiers must be dense non-negative integers and ``N`` is the largest
    one plus one (or the ``nodes`` header when larger). With ``relabel``,
    arbitrary integer identifiers (AS numbers) are mapped to ``0..N-1`` in
    ascending order.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    meta = Metadata()
    pairs: list[tuple[int, int]] = []
    id_map: dict[int, int] = {}
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#@map"):
            parts = line.split()
            if len(parts) != 3:
                raise EdgeListError(lineno, f"bad map line {line!r}")
            id_map[int(parts[1])] = int(parts[2])
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition(":")
            if sep:
                meta.fields[key.strip()] = value.strip()
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(lineno, f"expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(lineno, f"non-integer node id in {line!r}") from None
        if u == v:
            raise EdgeListError(lineno, f"self-loop {u}-{v}")
        if not relabel and (u < 0 or v < 0):
            raise EdgeListError(lineno, "negative node id")
        pairs.append((u, v))

    declared = int(meta.fields.pop("nodes", 0) or 0)
    if relabel:
        ids = sorted({x for pair in pairs for x in pair})
        dense = {x: i for i, x in enumerate(ids)}
        pairs = [(dense[u], dense[v]) for u, v in pairs]
        meta.original_ids = ids
        n = len(ids)
    else:
        n = max(declared, 1 + max((max(p) for p in pairs), default=-1))
        if id_map:
            meta.original_ids = [id_map.get(i, i) for i in range(n)]

    g = Graph(n)
    for u, v in pairs:
        if g.has_edge(u, v):
            meta.duplicates += 1
        else:
            g.add_edge(u, v)
    return g, meta


def save_edge_list(path, g: Graph, meta=None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_edge_list(g, meta, fh)


def load_edge_list(path, relabel: bool = False) -> tuple[Graph, Metadata]:
    with open(path, encoding="utf-8") as fh:
        return read_edge_list(fh, relabel=relabel)


def format_fraction(x: float) -> str:
    """Fixed-point text with at least 6 decimals and 6 significant digits."""
    if x == 0 or not math.isfinite(x):
        return f"{x:.6f}"
    decimals = max(6, 5 - math.floor(math.log10(abs(x))))
    return f"{x:.{decimals}f}"


@dataclass
class MetricBundle:
    degree: DegreeDistribution | None = None
    ranks: RankTable | None = None
    rich_club: RichClubCurve | None = None
    link_dist: LinkDistMatrix | None = None


METRIC_FILES = {
    "degree": ("degree.csv", ["k", "count", "p"]),
    "rank": ("rank.csv", ["rank", "degree"]),
    "richclub": ("richclub.csv", ["r", "phi"]),
    "linkdist": ("linkdist.csv", ["bin_i", "bin_j", "count"]),
}


def _rows(results: MetricBundle):
    if results.degree is not None:
        yield "degree", ([k, c, format_fraction(p)] for k, c, p in results.degree.items())
    if results.ranks is not None:
        yield "rank", ([i, k] for i, k in enumerate(results.ranks.degrees, start=1))
    if results.rich_club is not None:
        yield "richclub", (
            [format_fraction(r), format_fraction(phi)] for r, phi in results.rich_club.points
        )
    if results.link_dist is not None:
        yield "linkdist", ([bi, bj, c] for (bi, bj), c in sorted(results.link_dist.cells.items()))


def write_metrics_csv(results: MetricBundle, sink) -> dict[str, Path]:
    """Write one CSV per metric present in ``results`` into directory ``sink``.

    Returns the paths written, keyed by metric name.
    """
    out_dir = Path(sink)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    for name, rows in _rows(results):
        filename, header = METRIC_FILES[name]
        path = out_dir / filename
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
        written[name] = path
    return written


def default_out_dir() -> Path:
    return Path(os.environ.get("IGTOPO_OUT_DIR", "."))
