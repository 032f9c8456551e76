"""Round-synchronous coloring game: strategies, state, and the run loop.

A round is one simultaneous move of all players. The initial assignment
counts as round 1, so tau = 1 means the starting coloring was already
proper. Within a round, redraws consume the trial's single random stream
in ascending vertex order over the unhappy vertices; draws from a
one-element set do not touch the stream at all. Both conventions are
load-bearing for reproducibility and are shared by step() and run().
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .errors import ContractViolation, IllegalPaletteError
from .graph import Graph


class Strategy(Enum):
    """How an unhappy player resamples.

    GREEDY draws from the colors no neighbor currently uses and therefore
    always changes color; it needs k >= max_degree + 2 to be safe. FRUGAL
    draws from its own color plus the colors no neighbor uses, may keep
    its color, and needs only k >= max_degree + 1.
    """

    GREEDY = "greedy"
    FRUGAL = "frugal"

    def min_colors(self, max_degree: int) -> int:
        """Smallest palette size this strategy is guaranteed to work with."""
        return max_degree + 2 if self is Strategy.GREEDY else max_degree + 1


@dataclass(frozen=True)
class GameConfig:
    """Everything a single trial needs besides the graph.

    initial=None draws the starting colors i.i.d. uniform from [k];
    a tuple fixes them. enforce_k_bound=False exists to reproduce the
    known non-convergent Greedy configurations and is refused by the
    CLI unless explicitly flagged.
    """

    k: int
    strategy: Strategy
    seed: int
    max_rounds: int = 10**6
    enforce_k_bound: bool = True
    initial: tuple[int, ...] | None = None

    def validate(self, g: Graph) -> None:
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.max_rounds < 1:
            raise ValueError(f"max_rounds must be >= 1, got {self.max_rounds}")
        if self.enforce_k_bound:
            need = self.strategy.min_colors(g.max_degree())
            if self.k < need:
                raise IllegalPaletteError(
                    f"{self.strategy.value} needs k >= {need} on this graph "
                    f"(max degree {g.max_degree()}), got k={self.k}"
                )
        if self.initial is not None:
            if len(self.initial) != g.n:
                raise ValueError(
                    f"initial assignment has {len(self.initial)} entries for n={g.n}"
                )
            for v, c in enumerate(self.initial):
                if not 0 <= c < self.k:
                    raise ValueError(f"initial color {c} at vertex {v} outside [0, {self.k})")


@dataclass(frozen=True)
class ColoringState:
    """Colors of all vertices at a given round; rounds are 1-based."""

    colors: tuple[int, ...]
    round: int


@dataclass(frozen=True)
class RoundRecord:
    """Per-round trace entry; unhappy is None under counts-only retention."""

    round: int
    unhappy: frozenset[int] | None
    happy_count: int


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one trial.

    tau is the first round whose coloring is proper, or None on timeout.
    min_available is the smallest available-set size seen across all
    redraws (None if no vertex ever redrew); the legality invariant says
    it stays >= 2 whenever the palette bound holds.
    """

    tau: int | None
    history: tuple[RoundRecord, ...]
    final_state: ColoringState
    seed: int
    min_available: int | None


def is_happy(g: Graph, s: ColoringState, v: int) -> bool:
    """True iff no neighbor of v shares v's color."""
    c = s.colors[v]
    return all(s.colors[u] != c for u in g.neighbors(v))


def neighbor_colors(g: Graph, s: ColoringState, v: int) -> frozenset[int]:
    """The set of colors currently held by v's neighbors."""
    return frozenset(s.colors[u] for u in g.neighbors(v))


def unhappy_vertices(g: Graph, s: ColoringState) -> list[int]:
    """Ascending list of vertices with at least one same-colored neighbor."""
    colors = s.colors
    out = []
    for v in range(g.n):
        c = colors[v]
        for u in g.neighbors(v):
            if colors[u] == c:
                out.append(v)
                break
    return out


def is_proper(g: Graph, colors: tuple[int, ...]) -> bool:
    """True iff no edge is monochromatic."""
    return all(colors[u] != colors[v] for u, v in g.edges())


def _available_list(
    colors, neighbors_v, own: int, strategy: Strategy, k: int
) -> list[int]:
    """Sorted candidate colors for a redraw; the single sampling-law choke point.

    All engine paths (available_set, step, run) route through here so a
    fault injected at this seam is visible to every consumer.
    """
    used = {colors[u] for u in neighbors_v}
    free = [c for c in range(k) if c not in used]
    if strategy is Strategy.GREEDY or own not in used:
        return free
    out = free + [own]
    out.sort()
    return out


def available_set(g: Graph, s: ColoringState, v: int, strategy: Strategy, k: int) -> frozenset[int]:
    """The set an unhappy v samples from next round.

    Calling this on a happy vertex is a contract violation: happy players
    stick, and their conventional singleton set is exposed as stick_set.
    """
    if is_happy(g, s, v):
        raise ContractViolation(
            f"available_set called on happy vertex {v}; use stick_set for the singleton convention"
        )
    out = _available_list(s.colors, g.neighbors(v), s.colors[v], strategy, k)
    if not out:
        raise ContractViolation(
            f"empty available set at vertex {v}: neighbors cover all {k} colors (palette bound violated)"
        )
    return frozenset(out)


def stick_set(s: ColoringState, v: int) -> frozenset[int]:
    """A happy player's one-element set: it keeps its current color."""
    return frozenset((s.colors[v],))


def _draw(rng: random.Random, avail: list[int]) -> int:
    # Singleton sets skip the stream so forced moves are seed-independent.
    if len(avail) == 1:
        return avail[0]
    return avail[rng.randrange(len(avail))]


def initial_state(g: Graph, cfg: GameConfig, rng: random.Random) -> ColoringState:
    """Round-1 coloring: the configured assignment or i.i.d. uniform draws."""
    if cfg.initial is not None:
        return ColoringState(tuple(cfg.initial), 1)
    k = cfg.k
    return ColoringState(tuple(rng.randrange(k) for _ in range(g.n)), 1)


def step(
    g: Graph, s: ColoringState, cfg: GameConfig, rng: random.Random
) -> tuple[ColoringState, RoundRecord]:
    """One simultaneous round; reference implementation with a full rescan.

    Returns the successor state (round + 1) and the record of that new
    state. run() must produce identical trajectories for the same stream.
    """
    colors = list(s.colors)
    changes = []
    for v in unhappy_vertices(g, s):
        avail = _available_list(colors, g.neighbors(v), colors[v], cfg.strategy, cfg.k)
        if not avail:
            raise ContractViolation(
                f"empty available set at vertex {v} in round {s.round}"
            )
        changes.append((v, _draw(rng, avail)))
    for v, c in changes:
        colors[v] = c
    nxt = ColoringState(tuple(colors), s.round + 1)
    unhappy = frozenset(unhappy_vertices(g, nxt))
    return nxt, RoundRecord(nxt.round, unhappy, g.n - len(unhappy))


def run(
    g: Graph,
    cfg: GameConfig,
    *,
    retention: str = "full",
    paranoid: bool = False,
) -> TrialResult:
    """Play until the coloring is proper or max_rounds is hit.

    retention="full" keeps the unhappy set of every round; "counts"
    keeps only per-round happy counts. paranoid=True raises if a happy
    vertex ever turns unhappy, which no legal configuration can cause;
    it consumes no randomness, so results are unaffected.

    The loop only re-examines vertices whose neighborhood changed, which
    is exact because colors change nowhere else. A timeout is a value
    (tau=None), not an error.
    """
    if retention not in ("full", "counts"):
        raise ValueError(f"retention must be 'full' or 'counts', got {retention!r}")
    cfg.validate(g)
    rng = random.Random(cfg.seed)
    first = initial_state(g, cfg, rng)
    colors = list(first.colors)
    adj = [g.neighbors(v) for v in range(g.n)]
    n, k, strategy = g.n, cfg.k, cfg.strategy
    keep_sets = retention == "full"

    unhappy = unhappy_vertices(g, first)
    history = [
        RoundRecord(1, frozenset(unhappy) if keep_sets else None, n - len(unhappy))
    ]
    min_available: int | None = None
    rnd = 1
    while unhappy and rnd < cfg.max_rounds:
        changes = []
        for v in unhappy:
            avail = _available_list(colors, adj[v], colors[v], strategy, k)
            if not avail:
                raise ContractViolation(
                    f"empty available set at vertex {v} in round {rnd}"
                )
            if min_available is None or len(avail) < min_available:
                min_available = len(avail)
            changes.append((v, _draw(rng, avail)))
        was_unhappy = set(unhappy)
        for v, c in changes:
            colors[v] = c
        nxt: set[int] = set()
        for v, _ in changes:
            cv = colors[v]
            for u in adj[v]:
                if colors[u] == cv:
                    nxt.add(v)
                    if u not in was_unhappy:
                        # cannot happen while draws avoid neighbor colors
                        if paranoid:
                            raise ContractViolation(
                                f"happy vertex {u} lost happiness in round {rnd + 1}"
                            )
                        nxt.add(u)
        unhappy = sorted(nxt)
        rnd += 1
        history.append(
            RoundRecord(rnd, frozenset(unhappy) if keep_sets else None, n - len(unhappy))
        )
    tau = rnd if not unhappy else None
    return TrialResult(
        tau=tau,
        history=tuple(history),
        final_state=ColoringState(tuple(colors), rnd),
        seed=cfg.seed,
        min_available=min_available,
    )
