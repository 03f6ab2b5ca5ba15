"""Command-line front end.

Subcommands: threshold (minimum ring size per connectivity order),
simulate (one sampled graph, reported), sweep (custom transition sweep),
reliability (deletion experiment), and figure 1-4 (bundled experiment
presets).  Parameters come from defaults, then an optional JSON config
file with flat keys, then explicit flags, in that order.

Exit codes: 0 success, 2 invalid configuration, 3 unsatisfiable
threshold query, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from . import __version__
from .connectivity import is_k_connected, min_degree, vertex_connectivity
from .experiments import (
    ExperimentSpec,
    SweepSummary,
    emit_csv,
    run_reliability_experiment,
    run_transition_sweep,
)
from .graphgen import RngSeed, sample_intersection_model, write_edgelist
from .model import (
    NetworkParams,
    UnsatisfiableError,
    critical_k1,
    evaluate_scaling,
    mean_edge_prob,
)

__all__ = ["RunConfig", "main", "console_main"]

_FIGURE_MU = (0.5, 0.5)
_FIGURE_N = 500
_FIGURE_P = 10_000


@dataclass
class RunConfig:
    """Flat, JSON-mirrorable configuration for every subcommand."""

    command: str = ""
    n: int = 500
    P: int = 10_000
    mu: tuple = (0.5, 0.5)
    K: tuple | None = None
    alpha: float = 0.4
    offsets: tuple = (0, 10)
    k: tuple = (2,)
    sweep_var: str | None = None
    sweep_values: tuple | None = None
    trials: int = 200
    seed: int = 1
    workers: int | None = None
    out: str = "results"
    max_deletions: int = 20
    dump_graphs: bool = False
    plot_script: bool = False


_TUPLE_KEYS = {"mu", "K", "offsets", "k", "sweep_values"}


def _coerce(key: str, value):
    if key in _TUPLE_KEYS and value is not None:
        return tuple(value)
    return value


def _load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise OSError(f"failed reading config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"config {path} must hold a JSON object of flat keys")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"config {path} has unknown keys: {sorted(unknown)}")
    return raw


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, value in _load_config_file(args.config).items():
            setattr(cfg, key, _coerce(key, value))
    for key in (
        "n", "P", "mu", "K", "alpha", "offsets", "k", "sweep_var", "sweep_values",
        "trials", "seed", "workers", "out", "max_deletions", "dump_graphs", "plot_script",
    ):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, _coerce(key, value))
    cfg.command = args.command
    if args.command == "figure":
        cfg.command = f"figure {args.figure_id}"
    return cfg


def _params_from_config(cfg: RunConfig) -> NetworkParams:
    if cfg.K is None:
        raise ValueError("K must be provided (config key 'K' or --K) for this command")
    return NetworkParams(n=cfg.n, mu=cfg.mu, K=cfg.K, P=cfg.P, alpha=cfg.alpha)


def _print_config(cfg: RunConfig) -> None:
    print(json.dumps(asdict(cfg), indent=2, sort_keys=True))


def cmd_threshold(cfg: RunConfig) -> int:
    """Print the minimum ring size K1 per requested k, with the mean edge
    probability and scaling deviation at the solution."""
    print(f"{'k':>4} {'K1':>6} {'lambda1':>12} {'gamma_n':>12}")
    for k in cfg.k:
        k1 = critical_k1(cfg.n, k, cfg.alpha, cfg.mu, cfg.offsets, cfg.P)
        params = NetworkParams(
            n=cfg.n,
            mu=cfg.mu,
            K=tuple(k1 + o for o in cfg.offsets),
            P=cfg.P,
            alpha=cfg.alpha,
        )
        ev = evaluate_scaling(params, k)
        print(f"{k:>4} {k1:>6} {ev.lambda1:>12.6g} {ev.gamma_n:>12.6g}")
    return 0


def cmd_simulate(cfg: RunConfig) -> int:
    """Sample one graph from the model and report its connectivity."""
    params = _params_from_config(cfg)
    seed = RngSeed(cfg.seed)
    g = sample_intersection_model(params, seed)
    cut = vertex_connectivity(g) if g.n >= 2 else None
    lines = [
        f"nodes: {g.n}",
        f"edges: {g.m}",
        f"min degree: {min_degree(g)}",
        f"vertex connectivity: {cut.kappa if cut else 0}",
    ]
    for k in cfg.k:
        verdict = "yes" if is_k_connected(g, k) else "no"
        lines.append(f"{k}-connected: {verdict}")
    print("\n".join(lines))
    if cfg.dump_graphs:
        out_dir = Path(cfg.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        dump = out_dir / f"simulate_seed_{cfg.seed}.txt"
        write_edgelist(g, dump)
        print(f"edge list written to {dump}")
    return 0


def _write_summaries(
    cfg: RunConfig,
    summaries: list[tuple[str, SweepSummary]],
    meta_name: str,
    meta: dict,
    plot: dict | None,
) -> None:
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_files = []
    warnings = []
    for stem, summary in summaries:
        path = out_dir / f"{stem}.csv"
        emit_csv(summary, path)
        csv_files.append(path.name)
        warnings.extend(summary.warnings)
    meta = dict(meta)
    meta["tool_version"] = __version__
    meta["config"] = asdict(cfg)
    meta["csv_files"] = csv_files
    if warnings:
        meta["warnings"] = warnings
    meta_path = out_dir / f"{meta_name}_meta.json"
    try:
        meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing metadata to {meta_path}: {exc}") from exc
    for message in warnings:
        print(f"warning: {message}", file=sys.stderr)
    if plot is not None and cfg.plot_script:
        script_path = out_dir / f"{meta_name}_plot.py"
        _write_plot_script(script_path, **plot)
    print(f"wrote {len(csv_files)} CSV file(s) to {out_dir}")


_PLOT_TEMPLATE = '''"""Plot {title} from the CSV files next to this script."""
import csv

import matplotlib.pyplot as plt

CURVES = {curves}

fig, ax = plt.subplots()
for label, filename in CURVES:
    xs, ys = [], []
    with open(filename) as fh:
        for row in csv.DictReader(fh):
            xs.append(float(row["{xcol}"]))
            ys.append(float(row["prob"]))
    ax.plot(xs, ys, marker="o", label=label)
for x in {vlines}:
    ax.axvline(x, linestyle="--", linewidth=0.8, color="gray")
ax.set_xlabel("{xlabel}")
ax.set_ylabel("empirical probability")
ax.set_ylim(-0.02, 1.02)
ax.legend()
fig.savefig("{png}", dpi=150, bbox_inches="tight")
'''


def _write_plot_script(path: Path, title, curves, xcol, xlabel, vlines, png) -> None:
    source = _PLOT_TEMPLATE.format(
        title=title,
        curves=repr(curves),
        xcol=xcol,
        xlabel=xlabel,
        vlines=repr(vlines),
        png=png,
    )
    try:
        path.write_text(source)
    except OSError as exc:
        raise OSError(f"failed writing plot script to {path}: {exc}") from exc


def cmd_sweep(cfg: RunConfig) -> int:
    """Run a custom transition sweep from the resolved configuration."""
    if cfg.sweep_var not in ("K1", "alpha"):
        raise ValueError("sweep needs sweep_var 'K1' or 'alpha' (config or --sweep-var)")
    if not cfg.sweep_values:
        raise ValueError("sweep needs a non-empty sweep_values list")
    if cfg.sweep_var == "K1":
        base_k = tuple(int(cfg.sweep_values[0]) + o for o in cfg.offsets)
        base = NetworkParams(n=cfg.n, mu=cfg.mu, K=base_k, P=cfg.P, alpha=cfg.alpha)
    else:
        base = _params_from_config(cfg)
    spec = ExperimentSpec(
        name=f"sweep_{cfg.sweep_var}",
        base=base,
        ks=cfg.k,
        trials=cfg.trials,
        master_seed=cfg.seed,
        sweep_var=cfg.sweep_var,
        sweep_values=tuple(cfg.sweep_values),
        offsets=cfg.offsets if cfg.sweep_var == "K1" else (),
    )
    summary = run_transition_sweep(spec, workers=cfg.workers)
    summaries = []
    for k in spec.ks:
        stem = spec.name if len(spec.ks) == 1 else f"{spec.name}_k_{k}"
        summaries.append((stem, replace(summary, rows=summary.rows_for_k(k))))
    meta = {"experiment": spec.name, "thresholds": _jsonable_thresholds(summary)}
    xcol = "sweep_value"
    plot = {
        "title": spec.name,
        "curves": [(f"k={k}", f"{stem}.csv") for (stem, _), k in zip(summaries, spec.ks)],
        "xcol": xcol,
        "xlabel": cfg.sweep_var,
        "vlines": _threshold_values(summary),
        "png": f"{spec.name}.png",
    }
    _write_summaries(cfg, summaries, spec.name, meta, plot)
    return 0


def _jsonable_thresholds(summary: SweepSummary) -> dict | None:
    if summary.predicted_thresholds is None:
        return None
    return {str(k): v for k, v in summary.predicted_thresholds.items()}


def _threshold_values(summary: SweepSummary) -> list:
    if summary.predicted_thresholds is None:
        return []
    return sorted(v for v in summary.predicted_thresholds.values() if v is not None)


def cmd_reliability(cfg: RunConfig) -> int:
    """Run the minimum-cut deletion experiment from the configuration."""
    if len(cfg.k) != 1:
        raise ValueError(f"reliability uses a single design k, got {cfg.k}")
    params = _params_from_config(cfg)
    spec = ExperimentSpec(
        name=f"reliability_k_{cfg.k[0]}",
        base=params,
        ks=cfg.k,
        trials=cfg.trials,
        master_seed=cfg.seed,
    )
    summary = run_reliability_experiment(spec, cfg.max_deletions, workers=cfg.workers)
    meta = {"experiment": spec.name, "notes": [_DELETION_NOTE]}
    plot = {
        "title": spec.name,
        "curves": [(f"k={cfg.k[0]}", f"{spec.name}.csv")],
        "xcol": "deletions",
        "xlabel": "deleted nodes",
        "vlines": [],
        "png": f"{spec.name}.png",
    }
    _write_summaries(cfg, [(spec.name, summary)], spec.name, meta, plot)
    return 0


_DELETION_NOTE = (
    "victims beyond the minimum vertex cut follow a deterministic cut-adjacent "
    "order (largest surviving component, breadth-first from the cut); the model "
    "itself only pins down deletions up to the cut size"
)


def _figure_base(alpha: float, K: tuple) -> NetworkParams:
    return NetworkParams(n=_FIGURE_N, mu=_FIGURE_MU, K=K, P=_FIGURE_P, alpha=alpha)


def cmd_figure(cfg: RunConfig, figure_id: int) -> int:
    """Reproduce one of the four bundled experiments.

    figure 1: P(2-connected) vs K1 for alpha in {0.2, 0.4, 0.6, 0.8}
    figure 2: P(k-connected) vs K1 for k in {4, 6, 8, 10} at alpha 0.4
    figure 3: P(2-connected) vs alpha for four ring pairs of mean 40
    figure 4: P(connected) vs deletions from a minimum vertex cut
    """
    mu, offsets = _FIGURE_MU, (0, 10)
    if figure_id == 1:
        summaries = []
        thresholds = {}
        for alpha in (0.2, 0.4, 0.6, 0.8):
            spec = ExperimentSpec(
                name=f"fig1_alpha_{alpha:g}",
                base=_figure_base(alpha, (5, 15)),
                ks=(2,),
                trials=cfg.trials,
                master_seed=cfg.seed,
                sweep_var="K1",
                sweep_values=tuple(range(5, 41)),
                offsets=offsets,
            )
            summary = run_transition_sweep(spec, workers=cfg.workers)
            summaries.append((spec.name, summary))
            thresholds[f"alpha={alpha:g}"] = summary.predicted_thresholds[2]
        plot = {
            "title": "2-connectivity vs smallest ring size",
            "curves": [(name.replace("fig1_", ""), f"{name}.csv") for name, _ in summaries],
            "xcol": "sweep_value",
            "xlabel": "K1",
            "vlines": sorted(thresholds.values()),
            "png": "fig1.png",
        }
        _write_summaries(cfg, summaries, "fig1", {"figure": 1, "thresholds": thresholds}, plot)
        return 0
    if figure_id == 2:
        spec = ExperimentSpec(
            name="fig2",
            base=_figure_base(0.4, (15, 25)),
            ks=(4, 6, 8, 10),
            trials=cfg.trials,
            master_seed=cfg.seed,
            sweep_var="K1",
            sweep_values=tuple(range(15, 41)),
            offsets=offsets,
        )
        summary = run_transition_sweep(spec, workers=cfg.workers)
        summaries = [
            (f"fig2_k_{k}", replace(summary, rows=summary.rows_for_k(k))) for k in spec.ks
        ]
        thresholds = {f"k={k}": summary.predicted_thresholds[k] for k in spec.ks}
        plot = {
            "title": "k-connectivity vs smallest ring size",
            "curves": [(f"k={k}", f"fig2_k_{k}.csv") for k in spec.ks],
            "xcol": "sweep_value",
            "xlabel": "K1",
            "vlines": sorted(v for v in thresholds.values() if v is not None),
            "png": "fig2.png",
        }
        _write_summaries(cfg, summaries, "fig2", {"figure": 2, "thresholds": thresholds}, plot)
        return 0
    if figure_id == 3:
        alphas = tuple(round(0.05 * i, 2) for i in range(1, 21))
        summaries = []
        for K in ((10, 70), (20, 60), (30, 50), (40, 40)):
            spec = ExperimentSpec(
                name=f"fig3_K_{K[0]}_{K[1]}",
                base=_figure_base(alphas[0], K),
                ks=(2,),
                trials=cfg.trials,
                master_seed=cfg.seed,
                sweep_var="alpha",
                sweep_values=alphas,
            )
            summary = run_transition_sweep(spec, workers=cfg.workers)
            summaries.append((spec.name, summary))
        plot = {
            "title": "2-connectivity vs channel probability (mean ring size 40)",
            "curves": [(name.replace("fig3_K_", "K="), f"{name}.csv") for name, _ in summaries],
            "xcol": "sweep_value",
            "xlabel": "alpha",
            "vlines": [],
            "png": "fig3.png",
        }
        _write_summaries(cfg, summaries, "fig3", {"figure": 3}, plot)
        return 0
    if figure_id == 4:
        summaries = []
        designs = {}
        for k in (8, 10, 12, 14):
            k1 = critical_k1(_FIGURE_N, k, 0.4, mu, offsets, _FIGURE_P)
            designs[f"k={k}"] = k1
            spec = ExperimentSpec(
                name=f"fig4_k_{k}",
                base=_figure_base(0.4, (k1, k1 + 10)),
                ks=(k,),
                trials=cfg.trials,
                master_seed=cfg.seed,
            )
            summary = run_reliability_experiment(spec, cfg.max_deletions, workers=cfg.workers)
            summaries.append((spec.name, summary))
        meta = {"figure": 4, "K1_designs": designs, "notes": [_DELETION_NOTE]}
        plot = {
            "title": "connectivity after deletions from a minimum vertex cut",
            "curves": [(name.replace("fig4_", ""), f"{name}.csv") for name, _ in summaries],
            "xcol": "deletions",
            "xlabel": "deleted nodes",
            "vlines": [],
            "png": "fig4.png",
        }
        _write_summaries(cfg, summaries, "fig4", meta, plot)
        return 0
    raise ValueError(f"figure id must be 1, 2, 3, or 4, got {figure_id}")


def _add_common_flags(sub: argparse.ArgumentParser, *, params: bool = True) -> None:
    sub.add_argument("--config", help="JSON config file with flat RunConfig keys")
    sub.add_argument("--seed", type=int, default=None, help="master seed (64-bit unsigned)")
    sub.add_argument("--trials", type=int, default=None, help="samples per sweep point")
    sub.add_argument("--workers", type=int, default=None, help="worker processes (default: all cores)")
    sub.add_argument("--out", default=None, help="output directory for CSV/metadata")
    sub.add_argument("--plot-script", action="store_true", default=None, dest="plot_script",
                     help="also emit a standalone matplotlib script")
    sub.add_argument("--print-config", action="store_true", dest="print_config",
                     help="print the resolved configuration as JSON and exit")
    if params:
        sub.add_argument("--n", type=int, default=None)
        sub.add_argument("--P", type=int, default=None)
        sub.add_argument("--alpha", type=float, default=None)
        sub.add_argument("--mu", type=float, nargs="+", default=None)
        sub.add_argument("--K", type=int, nargs="+", default=None)
        sub.add_argument("--offsets", type=int, nargs="+", default=None)
        sub.add_argument("--k", type=int, nargs="+", default=None, help="connectivity order(s)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keygraph",
        description="k-connectivity analysis of key-predistribution networks over unreliable channels",
    )
    parser.add_argument("--version", action="version", version=f"keygraph {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("threshold", help="minimum ring size K1 per connectivity order k")
    _add_common_flags(p)

    p = subs.add_parser("simulate", help="sample one graph and report its connectivity")
    _add_common_flags(p)
    p.add_argument("--dump-graphs", action="store_true", default=None, dest="dump_graphs",
                   help="write the sampled graph as an edge list under --out")

    p = subs.add_parser("sweep", help="custom transition sweep (sweep_var from config)")
    _add_common_flags(p)
    p.add_argument("--sweep-var", dest="sweep_var", choices=("K1", "alpha"), default=None)
    p.add_argument("--sweep-values", dest="sweep_values", type=float, nargs="+", default=None)

    p = subs.add_parser("reliability", help="connectivity after minimum-cut deletions")
    _add_common_flags(p)
    p.add_argument("--max-deletions", dest="max_deletions", type=int, default=None)

    p = subs.add_parser("figure", help="reproduce a bundled experiment (1-4)")
    p.add_argument("figure_id", type=int, choices=(1, 2, 3, 4))
    _add_common_flags(p, params=False)
    p.add_argument("--max-deletions", dest="max_deletions", type=int, default=None)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        cfg = _resolve_config(args)
        if getattr(args, "print_config", False):
            _print_config(cfg)
            return 0
        if args.command == "threshold":
            return cmd_threshold(cfg)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "reliability":
            return cmd_reliability(cfg)
        if args.command == "figure":
            return cmd_figure(cfg, args.figure_id)
        raise ValueError(f"unknown command {args.command!r}")
    except UnsatisfiableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
