"""Command-line entry point: ``igtopo {generate,analyze,evolve,compare}``.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import statistics
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from igtopo import __version__
from igtopo.errors import TopologyError
from igtopo.fitting import fit_theta
from igtopo.generators import RNG_ALGORITHM, GeneratorConfig, TraceSpec, generate, generate_with_trace
from igtopo.io import (
    FORMAT_VERSION,
    Metadata,
    MetricBundle,
    default_out_dir,
    format_fraction,
    load_edge_list,
    save_edge_list,
    write_metrics_csv,
)
from igtopo.metrics import (
    average_path_length,
    clustering_coefficient,
    degree_distribution,
    link_distribution,
    rank_table,
    rich_club_curve,
    summarize,
)

log = logging.getLogger("igtopo")

METRIC_NAMES = ("degree", "rank", "richclub", "linkdist", "clustering", "pathlen")
SUMMARY_KEYS = ("N", "L", "k_max", "k_average", "P1", "P2", "P3", "phi_1pct", "l_top5", "l_top5_top5")
_INT_KEYS = {"N", "L", "k_max", "l_top5", "l_top5_top5"}

# standard GLP(1) parameters when not given
_MODEL_DEFAULTS = {
    "BA": {"m": 3, "rho": 0.0, "beta": 0.0},
    "GLP": {"m": 1, "rho": 0.66, "beta": 0.6447},
    "IG": {"m": 3, "rho": 0.0, "beta": 0.0},
}
_CONFIG_KEYS = ("model", "target_nodes", "m0", "m", "rho", "beta", "ig_branch_a_prob", "target_links", "seed")


class UsageError(Exception):
    pass


def _fmt(key: str, value) -> str:
    if key in _INT_KEYS:
        return str(int(value))
    return format_fraction(float(value))


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", type=str.upper, choices=("BA", "GLP", "IG"))
    p.add_argument("--nodes", type=int, default=11461, help="target number of nodes N")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--m", type=int, help="links per step (BA: per new node, GLP: per operation)")
    p.add_argument("--m0", type=int, default=10, help="seed graph size")
    p.add_argument("--rho", type=float, help="GLP probability of a link-only step")
    p.add_argument("--beta", type=float, help="GLP preference offset (< 1)")
    p.add_argument("--branch-a-prob", type=float, default=0.40, help="IG probability of the 1-host/2-peer branch")
    p.add_argument("--target-links", type=int, help="GLP: top up with link-only steps to exactly this L")


def _config_from_args(args) -> GeneratorConfig:
    if args.model is None:
        raise UsageError("--model is required")
    defaults = _MODEL_DEFAULTS[args.model]
    return GeneratorConfig(
        model=args.model,
        target_nodes=args.nodes,
        m0=args.m0,
        m=args.m if args.m is not None else defaults["m"],
        rho=args.rho if args.rho is not None else defaults["rho"],
        beta=args.beta if args.beta is not None else defaults["beta"],
        ig_branch_a_prob=args.branch_a_prob,
        target_links=args.target_links,
        seed=args.seed,
    )


def read_manifest(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line and not line.startswith("#"):
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def config_from_manifest(path) -> GeneratorConfig:
    m = read_manifest(path)
    try:
        target_links = m["config.target_links"]
        return GeneratorConfig(
            model=m["config.model"],
            target_nodes=int(m["config.target_nodes"]),
            m0=int(m["config.m0"]),
            m=int(m["config.m"]),
            rho=float(m["config.rho"]),
            beta=float(m["config.beta"]),
            ig_branch_a_prob=float(m["config.ig_branch_a_prob"]),
            target_links=None if target_links == "None" else int(target_links),
            seed=int(m["config.seed"]),
        )
    except KeyError as exc:
        raise TopologyError(f"manifest {path} lacks {exc.args[0]}") from None


def write_manifest(path: Path, command: str, config: GeneratorConfig | None, outputs, started: str, extra=None) -> None:
    lines = [
        f"tool=igtopo",
        f"tool_version={__version__}",
        f"format_version={FORMAT_VERSION}",
        f"command={command}",
        f"rng={RNG_ALGORITHM}",
    ]
    if config is not None:
        lines.append(f"seed={config.seed}")
        lines += [f"config.{k}={getattr(config, k)}" for k in _CONFIG_KEYS]
    for key, value in (extra or {}).items():
        lines.append(f"{key}={value}")
    lines.append(f"started={started}")
    lines.append(f"finished={_now()}")
    lines += [f"output={p}" for p in outputs]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _graph_meta(config: GeneratorConfig) -> Metadata:
    fields = {"generator": "igtopo " + __version__, "rng": RNG_ALGORITHM}
    fields.update({k: str(getattr(config, k)) for k in _CONFIG_KEYS})
    return Metadata(fields)


def _write_summary(path: Path, labels: list[str], summaries: list[dict], keys) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["graph", *keys])
        for label, s in zip(labels, summaries):
            w.writerow([label, *(_fmt(k, s[k]) for k in keys)])
        if len(summaries) > 1:
            means = {k: statistics.fmean(s[k] for s in summaries) for k in keys}
            stds = {k: statistics.stdev(s[k] for s in summaries) for k in keys}
            w.writerow(["mean", *(format_fraction(means[k]) for k in keys)])
            w.writerow(["stddev", *(format_fraction(stds[k]) for k in keys)])


def _run_paths(out: Path, runs: int) -> list[Path]:
    if runs == 1:
        return [out]
    return [out.with_name(f"{out.stem}.run{i:02d}{out.suffix}") for i in range(runs)]


def cmd_generate(args) -> int:
    started = _now()
    if args.from_manifest:
        config = config_from_manifest(args.from_manifest)
    else:
        config = _config_from_args(args)
    config.validate()
    if args.runs < 1:
        raise UsageError("--runs must be >= 1")
    out = Path(args.out) if args.out else default_out_dir() / f"{config.model.lower()}_{config.seed}.edges"
    out.parent.mkdir(parents=True, exist_ok=True)
    paths = _run_paths(out, args.runs)
    summaries = []
    for i, path in enumerate(paths):
        cfg = replace(config, seed=config.seed + i)
        g = generate(cfg)
        save_edge_list(path, g, _graph_meta(cfg))
        write_manifest(path.with_name(path.name + ".manifest"), "generate", cfg, [path], started)
        log.info("%s: N=%d L=%d", path, g.num_nodes, g.num_links)
        if args.runs > 1:
            summaries.append(summarize(g))
    if summaries:
        summary_path = out.with_name(f"{out.stem}.summary.csv")
        _write_summary(summary_path, [p.name for p in paths], summaries, SUMMARY_KEYS)
    return 0


def _parse_metrics(text: str) -> list[str]:
    names = [x.strip() for x in text.split(",") if x.strip()]
    unknown = [x for x in names if x not in METRIC_NAMES]
    if unknown:
        raise UsageError(f"unknown metric(s) {', '.join(unknown)}; choose from {', '.join(METRIC_NAMES)}")
    return names


def analyze_graph(g, metrics, bin_width: float, path_samples=None):
    """Compute requested metrics; returns (bundle, summary dict)."""
    ranks = rank_table(g)
    bundle = MetricBundle()
    if "degree" in metrics:
        bundle.degree = degree_distribution(g)
    if "rank" in metrics:
        bundle.ranks = ranks
    if "richclub" in metrics:
        bundle.rich_club = rich_club_curve(g, ranks=ranks)
    if "linkdist" in metrics:
        bundle.link_dist = link_distribution(g, ranks, bin_width)
    summary = summarize(g, ranks)
    if "clustering" in metrics:
        summary["clustering"] = clustering_coefficient(g)
    if "pathlen" in metrics:
        summary["path_length"] = average_path_length(g, path_samples)
    return bundle, summary


def cmd_analyze(args) -> int:
    metrics = _parse_metrics(args.metrics)
    if not 0 < args.bin_width <= 1:
        raise UsageError("--bin-width must lie in (0, 1]")
    out_dir = Path(args.out_dir) if args.out_dir else default_out_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    labels, summaries, outputs = [], [], []
    for src in args.inputs:
        g, _ = load_edge_list(src, relabel=args.relabel)
        bundle, summary = analyze_graph(g, metrics, args.bin_width, args.path_samples)
        target = out_dir if len(args.inputs) == 1 else out_dir / Path(src).stem
        outputs += write_metrics_csv(bundle, target).values()
        labels.append(str(src))
        summaries.append(summary)
    keys = list(SUMMARY_KEYS) + [k for k in ("clustering", "path_length") if k in summaries[0]]
    summary_path = out_dir / "summary.csv"
    _write_summary(summary_path, labels, summaries, keys)
    print(summary_path.read_text(encoding="utf-8"), end="")
    return 0


def cmd_evolve(args) -> int:
    started = _now()
    config = _config_from_args(args)
    times = args.track_insertion_time or [100]
    tracked = tuple(sorted({t + j for t in times for j in range(args.track_count)}))
    spec = TraceSpec(tracked, args.stride)
    out = Path(args.out) if args.out else default_out_dir() / f"{config.model.lower()}_{config.seed}.trace.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    g, trace = generate_with_trace(config, track=spec)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "node", "degree"])
        w.writerows(trace.samples())
    theta, diag = fit_theta(trace)
    theta_path = out.with_name(out.name + ".theta.txt")
    lines = [
        f"theta={format_fraction(theta)}",
        f"tracked_nodes={len(trace.tracked_nodes)}",
        f"points={diag.points}",
        f"residual={format_fraction(diag.residual)}",
        "per_node=" + ",".join(format_fraction(x) for x in diag.per_series),
    ]
    theta_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    write_manifest(out.with_name(out.name + ".manifest"), "evolve", config, [out, theta_path], started,
                   {"track": ",".join(map(str, tracked)), "stride": args.stride})
    print(f"theta={theta:.4f} over {len(trace.tracked_nodes)} node(s)")
    return 0


def cmd_compare(args) -> int:
    if len(args.inputs) < 2:
        raise UsageError("compare needs at least two --in files")
    out_dir = Path(args.out_dir) if args.out_dir else default_out_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    labels = args.labels.split(",") if args.labels else [Path(p).stem for p in args.inputs]
    if len(labels) != len(args.inputs):
        raise UsageError("--labels must name every input")
    results = []
    for src in args.inputs:
        g, _ = load_edge_list(src, relabel=args.relabel)
        results.append(analyze_graph(g, ("degree", "rank", "richclub", "linkdist"), args.bin_width))

    with open(out_dir / "compare_summary.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["metric", *labels])
        for key in SUMMARY_KEYS:
            w.writerow([key, *(_fmt(key, s[key]) for _, s in results)])

    def merged(name, header, rows_of):
        with open(out_dir / name, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["graph", *header])
            for label, (bundle, _) in zip(labels, results):
                w.writerows([label, *row] for row in rows_of(bundle))

    merged("degree.csv", ["k", "count", "p"],
           lambda b: ([k, c, format_fraction(p)] for k, c, p in b.degree.items()))
    merged("rank.csv", ["rank", "degree"], lambda b: enumerate(b.ranks.degrees, start=1))
    merged("richclub.csv", ["r", "phi"],
           lambda b: ([format_fraction(r), format_fraction(phi)] for r, phi in b.rich_club.points))
    merged("linkdist.csv", ["bin_i", "bin_j", "count"],
           lambda b: ([bi, bj, c] for (bi, bj), c in sorted(b.link_dist.cells.items())))
    # links from the richest bin to every bin, for overlay plots
    merged("linkdist_top.csv", ["bin_j", "count"], lambda b: enumerate(b.link_dist.row(1), start=1))
    print((out_dir / "compare_summary.csv").read_text(encoding="utf-8"), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="igtopo", description="Power-law topology generators and rich-club metrics.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="grow a graph and write its edge list")
    _add_model_args(p)
    p.add_argument("--out", help="edge-list path (default: $IGTOPO_OUT_DIR/<model>_<seed>.edges)")
    p.add_argument("--runs", type=int, default=1, help="ensemble size; run i uses seed+i")
    p.add_argument("--from-manifest", help="re-run the configuration recorded in a manifest")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="compute metrics for one or more edge lists")
    p.add_argument("--in", dest="inputs", action="append", required=True)
    p.add_argument("--metrics", default=",".join(METRIC_NAMES[:4]), help=f"comma list from {','.join(METRIC_NAMES)}")
    p.add_argument("--bin-width", type=float, default=0.05)
    p.add_argument("--path-samples", type=int, help="BFS sources for pathlen (default exact up to 2000 nodes)")
    p.add_argument("--relabel", action="store_true", help="map sparse ids (e.g. AS numbers) to 0..N-1")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("evolve", help="trace k(t) of selected nodes and fit the growth exponent")
    _add_model_args(p)
    p.add_argument("--track-insertion-time", type=int, action="append", help="growth step of a tracked node (repeatable)")
    p.add_argument("--track-count", type=int, default=1, help="also track the next C-1 nodes after each time")
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("compare", help="side-by-side summary of several graphs")
    p.add_argument("--in", dest="inputs", action="append", required=True)
    p.add_argument("--labels", help="comma-separated column names")
    p.add_argument("--bin-width", type=float, default=0.05)
    p.add_argument("--relabel", action="store_true")
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"igtopo: error: {exc}", file=sys.stderr)
        return 2
    except (TopologyError, OSError) as exc:
        print(f"igtopo: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
