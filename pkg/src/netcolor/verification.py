"""Built-in verification suites driven by the `verify` CLI subcommand.

Three families of checks:
  * exact floors: over every conflicted coloring of a small corpus, the
    available-set-size tail probability clears 1/16 and the two-round
    happiness probability clears 1/(2^6 e^5), both in exact arithmetic;
  * engine/oracle agreement: chi-square between sampled rounds and the
    enumerated one-round law;
  * envelope dominance on a fresh campaign of tau samples.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from scipy.stats import chi2

from .bounds import check_dominance, mu
from .engine import ColoringState, GameConfig, Strategy, run, step
from .graph import Graph, complete_graph, cycle_graph, path_graph, star_graph
from .oracle import (
    available_size_distribution,
    one_round_distribution,
    two_round_floor_holds,
    two_round_happiness_prob,
)

DEFAULT_SEED = 20260814


@dataclass(frozen=True)
class CorpusInstance:
    name: str
    graph: Graph
    k: int


# Small enough for exact enumeration, varied enough to exercise frozen
# neighbors, saturated palettes (path3 at k=2), and hub topologies.
CORPUS = (
    CorpusInstance("triangle_k3", complete_graph(3), 3),
    CorpusInstance("path3_k2", path_graph(3), 2),
    CorpusInstance("path3_k3", path_graph(3), 3),
    CorpusInstance("cycle4_k3", cycle_graph(4), 3),
    CorpusInstance("star4_k4", star_graph(4), 4),
)

FAST_CORPUS = CORPUS[:2]


def corpus_for(level: str):
    if level == "fast":
        return FAST_CORPUS
    if level == "full":
        return CORPUS
    raise ValueError(f"level must be 'fast' or 'full', got {level!r}")


def conflicted_colorings(g: Graph, k: int):
    """Every coloring with at least one monochromatic edge."""
    edges = g.edges()
    for colors in itertools.product(range(k), repeat=g.n):
        if any(colors[u] == colors[v] for u, v in edges):
            yield colors


def _unhappy(g: Graph, colors) -> list[int]:
    return [
        v for v in range(g.n) if any(colors[u] == colors[v] for u in g.neighbors(v))
    ]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: dict

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


def check_available_size_floor(level: str = "full") -> CheckResult:
    """Exact tail floor on |available set| after one round, corpus-wide."""
    checked = 0
    violations = []
    for inst in corpus_for(level):
        for colors in conflicted_colorings(inst.graph, inst.k):
            state = ColoringState(colors, 1)
            for v in _unhappy(inst.graph, colors):
                res = available_size_distribution(
                    inst.graph, state, v, Strategy.FRUGAL, inst.k
                )
                checked += 1
                if not res.holds:
                    violations.append(
                        {
                            "instance": inst.name,
                            "coloring": list(colors),
                            "vertex": v,
                            "prob": str(res.prob_at_least),
                            "threshold": str(res.threshold),
                        }
                    )
    return CheckResult(
        name="available_size_floor",
        passed=not violations,
        details={"level": level, "checked": checked, "violations": violations},
    )


def check_two_round_floor(level: str = "full") -> CheckResult:
    """Exact two-round happiness floor, corpus-wide, with the worst case reported."""
    checked = 0
    violations = []
    min_prob = None
    for inst in corpus_for(level):
        cache: dict = {}
        for colors in conflicted_colorings(inst.graph, inst.k):
            state = ColoringState(colors, 1)
            for v in _unhappy(inst.graph, colors):
                prob = two_round_happiness_prob(
                    inst.graph, state, v, Strategy.FRUGAL, inst.k, cache=cache
                )
                checked += 1
                if min_prob is None or prob < min_prob:
                    min_prob = prob
                if not two_round_floor_holds(prob):
                    violations.append(
                        {
                            "instance": inst.name,
                            "coloring": list(colors),
                            "vertex": v,
                            "prob": str(prob),
                        }
                    )
    return CheckResult(
        name="two_round_happiness_floor",
        passed=not violations,
        details={
            "level": level,
            "checked": checked,
            "violations": violations,
            "min_prob": str(min_prob),
        },
    )


def chi_square_agreement(
    g: Graph,
    colors: tuple[int, ...],
    strategy: Strategy,
    k: int,
    *,
    trials: int = 10**5,
    seed: int = DEFAULT_SEED,
    alpha: float = 1e-3,
) -> dict:
    """Sampled one-round outcomes vs the enumerated law.

    Fails on any outcome the law assigns probability zero, on a
    chi-square statistic above the alpha critical value, or on any
    per-outcome |z| above 4.
    """
    state = ColoringState(colors, 1)
    dist = one_round_distribution(g, state, strategy, k)
    expected = {out.colors: float(p) for out, p in dist.support}
    cfg = GameConfig(k=k, strategy=strategy, seed=seed)
    rng = random.Random(seed)
    counts: dict[tuple[int, ...], int] = {}
    for _ in range(trials):
        nxt, _ = step(g, state, cfg, rng)
        counts[nxt.colors] = counts.get(nxt.colors, 0) + 1

    unseen = [c for c in counts if c not in expected]
    stat = 0.0
    max_abs_z = 0.0
    for out, p in expected.items():
        obs = counts.get(out, 0)
        exp = trials * p
        stat += (obs - exp) ** 2 / exp
        spread = (trials * p * (1.0 - p)) ** 0.5
        z = 0.0 if spread == 0.0 else (obs - exp) / spread
        max_abs_z = max(max_abs_z, abs(z))
    dof = max(1, len(expected) - 1)
    threshold = float(chi2.isf(alpha, dof))
    passed = not unseen and stat <= threshold and max_abs_z <= 4.0
    return {
        "strategy": strategy.value,
        "k": k,
        "trials": trials,
        "chi2": stat,
        "chi2_threshold": threshold,
        "dof": dof,
        "max_abs_z": max_abs_z,
        "unseen_outcomes": [list(c) for c in unseen],
        "passed": passed,
    }


# The agreement suite needs a Greedy instance too: a fault that only
# distorts Greedy sampling would be invisible to a Frugal-only test.
AGREEMENT_INSTANCES = (
    ("triangle_k3_frugal", complete_graph(3), (0, 0, 1), Strategy.FRUGAL, 3),
    ("triangle_k4_greedy", complete_graph(3), (0, 0, 1), Strategy.GREEDY, 4),
)


def check_engine_agreement(trials: int = 10**5, seed: int = DEFAULT_SEED) -> CheckResult:
    per_instance = {}
    ok = True
    for i, (name, g, colors, strategy, k) in enumerate(AGREEMENT_INSTANCES):
        rep = chi_square_agreement(g, colors, strategy, k, trials=trials, seed=seed + i)
        per_instance[name] = rep
        ok = ok and rep["passed"]
    return CheckResult(
        name="engine_oracle_agreement", passed=ok, details=per_instance
    )


def check_envelope_dominance(trials: int = 2000, seed: int = DEFAULT_SEED) -> CheckResult:
    """Fresh frugal campaign on a triangle; tau samples must sit under the envelope."""
    g = complete_graph(3)
    taus = []
    for i in range(trials):
        r = run(g, GameConfig(k=3, strategy=Strategy.FRUGAL, seed=seed + i), retention="counts")
        if r.tau is None:
            return CheckResult(
                name="envelope_dominance",
                passed=False,
                details={"error": f"trial {i} timed out"},
            )
        taus.append(r.tau)
    report = check_dominance(taus, mu())
    return CheckResult(
        name="envelope_dominance",
        passed=report.violations == 0,
        details={
            "sample_size": report.sample_size,
            "violations": report.violations,
            "band": report.band,
            "min_margin": min(p.margin for p in report.grid),
            "max_tau": max(taus),
        },
    )


def run_all(level: str = "fast", seed: int = DEFAULT_SEED) -> tuple[bool, list[dict]]:
    """The whole verify suite; returns (all_passed, per-check report)."""
    checks = [
        check_available_size_floor(level),
        check_two_round_floor(level),
        check_engine_agreement(seed=seed),
        check_envelope_dominance(seed=seed),
    ]
    return all(c.passed for c in checks), [c.to_dict() for c in checks]
