"""Monte Carlo harness for connectivity experiments.

Two experiment shapes: transition sweeps (empirical probability of
k-connectivity as one parameter moves through its critical window) and
the deletion reliability curve (probability of staying connected as
nodes are removed from a minimum vertex cut).  Trials are independent
work units with pinned seed streams -- trial i at sweep point j always
draws from stream j * 2^32 + i -- so results are identical for any
worker count.
"""

from __future__ import annotations

import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .connectivity import (
    connected_components,
    delete_nodes,
    is_k_connected,
    min_degree,
    vertex_connectivity,
)
from .graphgen import Graph, RngSeed, sample_intersection_model
from .model import NetworkParams, UnsatisfiableError, critical_k1

__all__ = [
    "ExperimentSpec",
    "TrialResult",
    "SweepRow",
    "SweepSummary",
    "run_transition_sweep",
    "run_reliability_experiment",
    "emit_csv",
    "parse_csv",
    "wilson_halfwidth",
]

_WILSON_Z = 1.959963984540054  # two-sided 95%
_TRIAL_BLOCK = 25  # trials per worker task
_DROP_TOLERANCE = 0.15  # largest believable drop between adjacent points

_SWEEP_HEADER = "experiment,sweep_value,k,trials,successes,prob"
_RELIABILITY_HEADER = "experiment,deletions,k_design,trials,successes,prob"


def wilson_halfwidth(successes: int, trials: int, z: float = _WILSON_Z) -> float:
    """Half-width of the Wilson score interval for a binomial proportion."""
    n = trials
    p = successes / n
    return (z / (1.0 + z * z / n)) * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n))


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: a parameter template, what to sweep, which
    connectivity orders to test, and the trial budget.

    sweep_var is "K1" (ring sizes become value + offsets per class),
    "alpha", or None for experiments with fixed parameters.
    """

    name: str
    base: NetworkParams
    ks: tuple[int, ...]
    trials: int = 200
    master_seed: int = 0
    sweep_var: str | None = None
    sweep_values: tuple = ()
    offsets: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        object.__setattr__(self, "sweep_values", tuple(self.sweep_values))
        object.__setattr__(self, "offsets", tuple(int(o) for o in self.offsets))
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if not self.ks or any(k < 1 for k in self.ks):
            raise ValueError(f"ks must be positive integers, got {self.ks}")
        if self.sweep_var not in (None, "K1", "alpha"):
            raise ValueError(f"sweep_var must be 'K1', 'alpha', or None, got {self.sweep_var!r}")
        if self.sweep_var is not None and not self.sweep_values:
            raise ValueError("sweep_values must be non-empty when sweep_var is set")
        if self.sweep_var == "K1":
            if len(self.offsets) != self.base.r:
                raise ValueError(
                    f"offsets must have one entry per class, got {len(self.offsets)} for r={self.base.r}"
                )
            if self.offsets[0] != 0:
                raise ValueError(f"offsets must start at 0, got {self.offsets}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        # Every sweep point must yield a valid parameterization.
        for value in self.sweep_values:
            self.params_at(value)

    def params_at(self, value) -> NetworkParams:
        if self.sweep_var == "K1":
            return replace(self.base, K=tuple(int(value) + o for o in self.offsets))
        if self.sweep_var == "alpha":
            return replace(self.base, alpha=float(value))
        return self.base

    def trial_seed(self, point_index: int, trial_index: int) -> RngSeed:
        return RngSeed(self.master_seed, (point_index << 32) | trial_index)


@dataclass(frozen=True)
class TrialResult:
    """Outcome of a single sampled graph."""

    sweep_value: object
    trial_index: int
    min_degree: int
    k_connected: tuple[bool, ...]
    kappa: int | None = None


@dataclass(frozen=True)
class SweepRow:
    """Aggregated outcome of one (sweep point, k) cell."""

    experiment: str
    sweep_value: object
    k: int
    trials: int
    successes: int

    def __post_init__(self):
        if not 0 <= self.successes <= self.trials:
            raise ValueError(f"successes must lie in [0, trials], got {self.successes}/{self.trials}")

    @property
    def prob(self) -> float:
        return self.successes / self.trials

    @property
    def wilson_halfwidth(self) -> float:
        return wilson_halfwidth(self.successes, self.trials)


@dataclass(frozen=True)
class SweepSummary:
    """Rows of one experiment plus side information that stays out of
    the CSV: predicted thresholds (K1 sweeps) and sanity warnings."""

    kind: str  # "sweep" or "reliability"
    rows: tuple[SweepRow, ...]
    predicted_thresholds: dict | None = None
    warnings: tuple[str, ...] = ()

    def rows_for_k(self, k: int) -> tuple[SweepRow, ...]:
        return tuple(row for row in self.rows if row.k == k)


def _assert_whitney(result: TrialResult, ks: tuple[int, ...]) -> None:
    for k, ok in zip(ks, result.k_connected):
        assert not ok or result.min_degree >= k, (
            f"Whitney violation: {k}-connected with min degree {result.min_degree}"
        )
    if result.kappa is not None:
        assert result.kappa <= result.min_degree


def _sweep_block(task):
    params, ks, master_seed, point_index, value, lo, hi = task
    out = []
    for i in range(lo, hi):
        seed = RngSeed(master_seed, (point_index << 32) | i)
        g = sample_intersection_model(params, seed)
        md = min_degree(g)
        if len(ks) == 1:
            kappa = None
            flags = (is_k_connected(g, ks[0]),)
        else:
            # One exact connectivity value answers every k at once.
            kappa = vertex_connectivity(g).kappa
            flags = tuple(kappa >= k for k in ks)
        out.append(
            TrialResult(sweep_value=value, trial_index=i, min_degree=md, k_connected=flags, kappa=kappa)
        )
    return point_index, lo, out


def _run_blocks(worker, tasks, workers):
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, tasks))


def _blocks(trials: int):
    return [(lo, min(lo + _TRIAL_BLOCK, trials)) for lo in range(0, trials, _TRIAL_BLOCK)]


def run_transition_sweep(spec: ExperimentSpec, workers: int | None = None) -> SweepSummary:
    """Empirical probability of k-connectivity at every sweep point.

    For K1 sweeps the summary also carries the predicted threshold per k
    (smallest K1 whose mean edge probability clears the connectivity
    bound), the quantity the transition is expected to straddle.
    """
    if spec.sweep_var not in ("K1", "alpha"):
        raise ValueError("run_transition_sweep needs sweep_var 'K1' or 'alpha'")
    tasks = [
        (spec.params_at(value), spec.ks, spec.master_seed, j, value, lo, hi)
        for j, value in enumerate(spec.sweep_values)
        for lo, hi in _blocks(spec.trials)
    ]
    counts = {(j, k): 0 for j in range(len(spec.sweep_values)) for k in spec.ks}
    for point_index, _lo, results in _run_blocks(_sweep_block, tasks, workers):
        for result in results:
            _assert_whitney(result, spec.ks)
            for k, ok in zip(spec.ks, result.k_connected):
                if ok:
                    counts[(point_index, k)] += 1
    rows = tuple(
        SweepRow(
            experiment=spec.name,
            sweep_value=value,
            k=k,
            trials=spec.trials,
            successes=counts[(j, k)],
        )
        for k in spec.ks
        for j, value in enumerate(spec.sweep_values)
    )
    thresholds = None
    if spec.sweep_var == "K1":
        thresholds = {}
        for k in spec.ks:
            try:
                thresholds[k] = critical_k1(
                    spec.base.n, k, spec.base.alpha, spec.base.mu, spec.offsets, spec.base.P
                )
            except UnsatisfiableError:
                thresholds[k] = None
    return SweepSummary(
        kind="sweep",
        rows=rows,
        predicted_thresholds=thresholds,
        warnings=_sanity_warnings(rows, spec.ks),
    )


def _sanity_warnings(rows, ks) -> tuple[str, ...]:
    """Flag (never fail on) implausible drops between adjacent sweep points;
    the transition should be monotone up to binomial noise."""
    warnings = []
    for k in ks:
        per_k = [row for row in rows if row.k == k]
        for prev, cur in zip(per_k, per_k[1:]):
            drop = prev.prob - cur.prob
            if drop > _DROP_TOLERANCE:
                warnings.append(
                    f"{prev.experiment}: k={k} probability drops {drop:.3f} between "
                    f"sweep values {prev.sweep_value} and {cur.sweep_value}"
                )
    return tuple(warnings)


def _deletion_order(g: Graph, cut) -> list[int]:
    """Deterministic victim order: the cut itself (ascending), then the
    largest surviving component in breadth-first distance from the cut,
    then everything else.

    Deleting past the cut from the largest side keeps the graph
    disconnected until that side is exhausted, which keeps the per-trial
    reliability curve monotone at the deletion counts of interest.
    """
    cut_list = sorted(int(v) for v in cut)
    n, adj = g.n, g.adj
    in_cut = [False] * n
    for v in cut_list:
        in_cut[v] = True
    comp_of = [-1] * n
    comps: list[list[int]] = []
    for start in range(n):
        if in_cut[start] or comp_of[start] != -1:
            continue
        comp = [start]
        comp_of[start] = len(comps)
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if not in_cut[w] and comp_of[w] == -1:
                    comp_of[w] = len(comps)
                    comp.append(w)
                    queue.append(w)
        comps.append(comp)
    if not comps:
        return cut_list
    largest_id = max(range(len(comps)), key=lambda i: len(comps[i]))
    ordered: list[int] = []
    if cut_list:
        seen = in_cut.copy()
        queue = deque(cut_list)
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    if comp_of[w] == largest_id:
                        ordered.append(w)
                    queue.append(w)
    missing = set(comps[largest_id]) - set(ordered)
    ordered.extend(sorted(missing))
    rest = sorted(
        v for cid, comp in enumerate(comps) if cid != largest_id for v in comp
    )
    return cut_list + ordered + rest


def _is_connected_after(g: Graph, victims) -> bool:
    sub = delete_nodes(g, victims)
    if sub.n <= 1:
        return True
    return int(connected_components(sub).max()) == 0


def _reliability_block(task):
    params, k_design, master_seed, lo, hi, max_deletions = task
    out = []
    for i in range(lo, hi):
        seed = RngSeed(master_seed, i)
        g = sample_intersection_model(params, seed)
        md = min_degree(g)
        cut_result = vertex_connectivity(g)
        kappa = cut_result.kappa
        order = _deletion_order(g, cut_result.cut_nodes)
        survived = []
        for d in range(max_deletions + 1):
            if d < kappa:
                # No d < kappa nodes can disconnect; deleting the whole cut does.
                survived.append(True)
            else:
                survived.append(_is_connected_after(g, order[:d]))
        trial = TrialResult(
            sweep_value=None,
            trial_index=i,
            min_degree=md,
            k_connected=(kappa >= k_design,),
            kappa=kappa,
        )
        out.append((trial, tuple(survived)))
    return lo, out


def run_reliability_experiment(
    spec: ExperimentSpec, max_deletions: int, workers: int | None = None
) -> SweepSummary:
    """Probability of remaining connected after d deletions, d = 0..max.

    Victims come from a minimum vertex cut of each sampled graph: fewer
    than kappa deletions can never disconnect, removing the full cut
    disconnects by construction, and deletions beyond the cut follow the
    deterministic extension order of _deletion_order.
    """
    if spec.sweep_var is not None:
        raise ValueError("reliability experiments fix all parameters; sweep_var must be None")
    if len(spec.ks) != 1:
        raise ValueError(f"reliability experiments use a single design k, got {spec.ks}")
    if not 0 <= max_deletions < spec.base.n:
        raise ValueError(f"max_deletions must lie in [0, n), got {max_deletions}")
    k_design = spec.ks[0]
    tasks = [
        (spec.base, k_design, spec.master_seed, lo, hi, max_deletions)
        for lo, hi in _blocks(spec.trials)
    ]
    successes = [0] * (max_deletions + 1)
    for _lo, results in _run_blocks(_reliability_block, tasks, workers):
        for trial, survived in results:
            _assert_whitney(trial, spec.ks)
            for d, ok in enumerate(survived):
                if ok:
                    successes[d] += 1
    rows = tuple(
        SweepRow(
            experiment=spec.name,
            sweep_value=d,
            k=k_design,
            trials=spec.trials,
            successes=successes[d],
        )
        for d in range(max_deletions + 1)
    )
    return SweepSummary(kind="reliability", rows=rows)


def _fmt(value) -> str:
    if isinstance(value, bool):
        raise TypeError("boolean CSV fields are not part of the schema")
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def emit_csv(summary: SweepSummary, path) -> None:
    """Write a summary as CSV (LF endings, 6 significant digits for
    floating-point fields).  Byte-stable for fixed inputs; sweep values
    that are exact at 6 significant digits round-trip through parse_csv."""
    header = _SWEEP_HEADER if summary.kind == "sweep" else _RELIABILITY_HEADER
    lines = [header]
    for row in summary.rows:
        lines.append(
            ",".join(
                [
                    row.experiment,
                    _fmt(row.sweep_value),
                    str(row.k),
                    str(row.trials),
                    str(row.successes),
                    _fmt(row.prob),
                ]
            )
        )
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing CSV to {path}: {exc}") from exc


def _parse_value(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def parse_csv(path) -> SweepSummary:
    """Read back an emit_csv file (tabular payload only)."""
    try:
        with open(path) as fh:
            lines = [line.rstrip("\n") for line in fh if line.strip()]
    except OSError as exc:
        raise OSError(f"failed reading CSV from {path}: {exc}") from exc
    if not lines:
        raise ValueError(f"{path}: empty CSV")
    if lines[0] == _SWEEP_HEADER:
        kind = "sweep"
    elif lines[0] == _RELIABILITY_HEADER:
        kind = "reliability"
    else:
        raise ValueError(f"{path}: unrecognized header {lines[0]!r}")
    rows = []
    for line in lines[1:]:
        fields = line.split(",")
        if len(fields) != 6:
            raise ValueError(f"{path}: expected 6 columns, got {len(fields)} in {line!r}")
        rows.append(
            SweepRow(
                experiment=fields[0],
                sweep_value=_parse_value(fields[1]),
                k=int(fields[2]),
                trials=int(fields[3]),
                successes=int(fields[4]),
            )
        )
    return SweepSummary(kind=kind, rows=tuple(rows))
