"""Monte Carlo campaigns: seeded trial batches, summaries, and CSV output.

Trial i always uses seed base_seed + i, so any subset of a campaign can
be reproduced in isolation and parallel execution is byte-identical to
sequential execution.
"""

from __future__ import annotations

import hashlib
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .bounds import frugal_bounds
from .engine import GameConfig, Strategy, TrialResult, is_proper, run
from .errors import ContractViolation
from .graph import Graph, format_edge_list, generate

K_RULES = ("delta+1", "delta+2")


def resolve_k(g: Graph, strategy: Strategy, k: int | None = None, k_rule: str | None = None) -> int:
    """Turn an explicit k or a rule into a palette size for this graph.

    With neither given, the strategy's minimum legal palette is used.
    """
    if k is not None and k_rule is not None:
        raise ValueError("give either k or k_rule, not both")
    if k is not None:
        return k
    delta = g.max_degree()
    if k_rule is None:
        return strategy.min_colors(delta)
    if k_rule == "delta+1":
        return delta + 1
    if k_rule == "delta+2":
        return delta + 2
    raise ValueError(f"unknown k rule {k_rule!r}; choose from {K_RULES}")


@dataclass(frozen=True)
class ExperimentSpec:
    """A resolved campaign: graph, palette, strategy, and trial plan."""

    graph: Graph
    k: int
    strategy: Strategy
    trials: int
    base_seed: int
    max_rounds: int = 10**6
    retention: str = "counts"
    allow_illegal_k: bool = False
    initial: tuple[int, ...] | None = None

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        self.trial_config(0).validate(self.graph)

    def trial_config(self, trial: int) -> GameConfig:
        return GameConfig(
            k=self.k,
            strategy=self.strategy,
            seed=self.base_seed + trial,
            max_rounds=self.max_rounds,
            enforce_k_bound=not self.allow_illegal_k,
            initial=self.initial,
        )

    def content_hash(self) -> str:
        """Stable digest of everything that determines campaign output."""
        payload = json.dumps(
            {
                "graph": hashlib.sha256(format_edge_list(self.graph).encode()).hexdigest(),
                "k": self.k,
                "strategy": self.strategy.value,
                "trials": self.trials,
                "base_seed": self.base_seed,
                "max_rounds": self.max_rounds,
                "retention": self.retention,
                "initial": list(self.initial) if self.initial is not None else None,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class CampaignSummary:
    """Aggregate view of one campaign.

    tau statistics cover converged trials only; the converged count says
    how many that is. Timeout trials contribute the mean residual unhappy
    count instead.
    """

    n: int
    delta: int
    k: int
    strategy: str
    trials: int
    converged: int
    timeouts: int
    mean_tau: float | None
    median_tau: float | None
    q95_tau: float | None
    max_tau: int | None
    mean_final_unhappy_on_timeout: float | None
    wall_time: float
    spec_hash: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    def human_line(self) -> str:
        """One-line summary, 4 significant digits."""
        mt = "n/a" if self.mean_tau is None else f"{self.mean_tau:.4g}"
        q = "n/a" if self.q95_tau is None else f"{self.q95_tau:.4g}"
        return (
            f"n={self.n} k={self.k} {self.strategy}: {self.converged}/{self.trials} converged, "
            f"mean_tau={mt} q95={q} timeouts={self.timeouts} ({self.wall_time:.4g}s)"
        )


@dataclass(frozen=True)
class CampaignResult:
    summary: CampaignSummary
    results: tuple[TrialResult, ...]


_WORKER: dict = {}


def _init_worker(spec: ExperimentSpec, paranoid: bool) -> None:
    _WORKER["spec"] = spec
    _WORKER["paranoid"] = paranoid


def _run_indexed(trial: int) -> TrialResult:
    spec: ExperimentSpec = _WORKER["spec"]
    return run(
        spec.graph,
        spec.trial_config(trial),
        retention=spec.retention,
        paranoid=_WORKER["paranoid"],
    )


def run_campaign(
    spec: ExperimentSpec,
    *,
    jobs: int = 1,
    out: str | None = None,
    rounds_out: str | None = None,
    paranoid: bool = False,
) -> CampaignResult:
    """Execute every trial of the spec, in order or across a worker pool.

    Output is identical either way because each trial is a pure function
    of (graph, base_seed + index). Every 100th converged trial's final
    coloring is re-validated as proper.
    """
    spec.validate()
    start = time.perf_counter()
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    if jobs == 1:
        results = [
            run(spec.graph, spec.trial_config(i), retention=spec.retention, paranoid=paranoid)
            for i in range(spec.trials)
        ]
    else:
        chunk = max(1, spec.trials // (jobs * 8))
        with ProcessPoolExecutor(
            max_workers=jobs, initializer=_init_worker, initargs=(spec, paranoid)
        ) as pool:
            results = list(pool.map(_run_indexed, range(spec.trials), chunksize=chunk))
    wall = time.perf_counter() - start

    for i, r in enumerate(results):
        if r.tau is not None and i % 100 == 0:
            if not is_proper(spec.graph, r.final_state.colors):
                raise ContractViolation(f"trial {i} converged but its coloring is not proper")

    summary = summarize(spec, results, wall)
    if out is not None:
        write_trials_csv(out, results)
    if rounds_out is not None:
        write_rounds_csv(rounds_out, results, spec.graph.n)
    return CampaignResult(summary=summary, results=tuple(results))


def summarize(spec: ExperimentSpec, results, wall_time: float) -> CampaignSummary:
    taus = [r.tau for r in results if r.tau is not None]
    timeouts = [r for r in results if r.tau is None]
    residuals = [spec.graph.n - r.history[-1].happy_count for r in timeouts]
    return CampaignSummary(
        n=spec.graph.n,
        delta=spec.graph.max_degree(),
        k=spec.k,
        strategy=spec.strategy.value,
        trials=spec.trials,
        converged=len(taus),
        timeouts=len(timeouts),
        mean_tau=statistics.fmean(taus) if taus else None,
        median_tau=float(statistics.median(taus)) if taus else None,
        q95_tau=float(quantile_95(taus)) if taus else None,
        max_tau=max(taus) if taus else None,
        mean_final_unhappy_on_timeout=statistics.fmean(residuals) if residuals else None,
        wall_time=wall_time,
        spec_hash=spec.content_hash(),
    )


def quantile_95(values) -> float:
    """Empirical 0.95 quantile: smallest x with at least 95% of mass at or below."""
    ordered = sorted(values)
    idx = max(0, math.ceil(0.95 * len(ordered)) - 1)
    return ordered[idx]


def write_trials_csv(path: str, results) -> None:
    """Per-trial CSV, schema trial,seed,tau,timeout,rounds_run; stable bytes."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("trial,seed,tau,timeout,rounds_run\n")
        for i, r in enumerate(results):
            tau = "" if r.tau is None else str(r.tau)
            timeout = "true" if r.tau is None else "false"
            fh.write(f"{i},{r.seed},{tau},{timeout},{r.final_state.round}\n")


def write_rounds_csv(path: str, results, n: int) -> None:
    """Long-format per-round unhappy counts: trial,round,unhappy_count."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("trial,round,unhappy_count\n")
        for i, r in enumerate(results):
            for rec in r.history:
                fh.write(f"{i},{rec.round},{n - rec.happy_count}\n")


SWEEP_COLUMNS = (
    "n",
    "delta",
    "k",
    "strategy",
    "trials",
    "converged",
    "timeouts",
    "mean_tau",
    "median_tau",
    "q95_tau",
    "max_tau",
    "e_t_bound",
)


def sweep(
    ns,
    family: str,
    strategy: Strategy,
    *,
    k: int | None = None,
    k_rule: str | None = None,
    trials: int = 100,
    base_seed: int = 0,
    p: float | None = None,
    avg_degree: float = 8.0,
    graph_seed: int | None = None,
    max_rounds: int = 10**6,
    jobs: int = 1,
) -> list[dict]:
    """One campaign per n, plus the closed-form envelope column.

    For erdos_renyi sweeps, a fixed p overrides the default policy of
    holding the expected degree at avg_degree across n.
    """
    rows = []
    for n in ns:
        if family == "erdos_renyi":
            pn = p if p is not None else min(1.0, avg_degree / n)
            g = generate(family, n, p=pn, seed=base_seed if graph_seed is None else graph_seed)
        else:
            g = generate(family, n)
        spec = ExperimentSpec(
            graph=g,
            k=resolve_k(g, strategy, k=k, k_rule=k_rule),
            strategy=strategy,
            trials=trials,
            base_seed=base_seed,
            max_rounds=max_rounds,
            retention="counts",
        )
        summary = run_campaign(spec, jobs=jobs).summary
        row = {c: getattr(summary, c) for c in SWEEP_COLUMNS if c != "e_t_bound"}
        row["e_t_bound"] = frugal_bounds(n).e_t_bound
        rows.append(row)
    return rows


def format_sweep_csv(rows) -> str:
    """Plot-ready CSV table; header always present, even with no rows."""
    lines = [",".join(SWEEP_COLUMNS)]
    for row in rows:
        cells = []
        for c in SWEEP_COLUMNS:
            v = row[c]
            cells.append("" if v is None else str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
