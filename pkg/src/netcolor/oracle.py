"""Brute-force ground truth on tiny instances.

Everything here recomputes the game's rules from scratch instead of
calling the engine's samplers: the two code paths must stay independent
so the engine/oracle agreement test retains its power to catch faults
in either one.

Probabilities are exact Fractions while the enumerated joint support is
at most EXACT_SUPPORT_CAP outcomes, doubles beyond that.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .engine import ColoringState, GameConfig, Strategy
from .errors import ContractViolation, EnumerationLimitError
from .graph import Graph

ENUMERATION_CAP = 10**7
EXACT_SUPPORT_CAP = 10**4
DENSE_SOLVER_MAX = 2000

# Tail floor for the available-set size after one round.
AVAILABLE_SIZE_FLOOR = Fraction(1, 16)

# The two-round happiness floor 1/(2^6 e^5) is irrational; exact rational
# probabilities are compared against this certified bracketing interval
# (digits re-verified against extended-precision evaluation in the tests).
TWO_ROUND_FLOOR_LO = Fraction("0.0001052804218607104233849382566116")
TWO_ROUND_FLOOR_HI = Fraction("0.0001052804218607104233849382566117")


@dataclass(frozen=True)
class Distribution:
    """Finite distribution: sorted (outcome, probability) pairs.

    exact=True means Fraction probabilities summing to exactly 1;
    otherwise doubles summing to 1 within 1e-12.
    """

    support: tuple
    kind: str
    exact: bool

    def total(self):
        if self.exact:
            return sum(p for _, p in self.support)
        # compensated summation: keeps huge float supports near one ulp
        return math.fsum(p for _, p in self.support)

    def as_dict(self) -> dict:
        return dict(self.support)


@dataclass(frozen=True)
class NeighborPartition:
    """Classification of v's neighborhood at one state.

    frozen_colors are the colors of happy neighbors (they never move);
    unhappy neighbors split by whether they currently share v's color.
    """

    happy: frozenset[int]
    frozen_colors: frozenset[int]
    f: int
    unhappy_same: frozenset[int]
    unhappy_diff: frozenset[int]


def _is_unhappy(g: Graph, colors, v: int) -> bool:
    c = colors[v]
    return any(colors[u] == c for u in g.neighbors(v))


def _unhappy_list(g: Graph, colors) -> list[int]:
    return [v for v in range(g.n) if _is_unhappy(g, colors, v)]


def _available(colors, nbrs, own: int, strategy: Strategy, k: int) -> tuple[int, ...]:
    # Independent twin of the engine's candidate computation; keep it that way.
    used = {colors[u] for u in nbrs}
    free = [c for c in range(k) if c not in used]
    if strategy is Strategy.GREEDY or own not in used:
        return tuple(free)
    return tuple(sorted(free + [own]))


def partition_neighbors(g: Graph, s: ColoringState, v: int) -> NeighborPartition:
    """Split v's neighbors into happy and unhappy-same/diff, with frozen colors."""
    colors = s.colors
    happy, same, diff = set(), set(), set()
    for u in g.neighbors(v):
        if _is_unhappy(g, colors, u):
            (same if colors[u] == colors[v] else diff).add(u)
        else:
            happy.add(u)
    frozen = frozenset(colors[u] for u in happy)
    return NeighborPartition(
        happy=frozenset(happy),
        frozen_colors=frozen,
        f=len(frozen),
        unhappy_same=frozenset(same),
        unhappy_diff=frozenset(diff),
    )


def _joint_size(avails) -> int:
    size = 1
    for a in avails:
        size *= len(a)
    return size


def one_round_distribution(
    g: Graph, s: ColoringState, strategy: Strategy, k: int, *, cap: int = ENUMERATION_CAP
) -> Distribution:
    """Exact law of the next state: happy vertices stick, unhappy draw jointly."""
    colors = s.colors
    movers = _unhappy_list(g, colors)
    avails = [_available(colors, g.neighbors(v), colors[v], strategy, k) for v in movers]
    for v, a in zip(movers, avails):
        if not a:
            raise ContractViolation(f"empty available set at vertex {v}")
    size = _joint_size(avails)
    if size > cap:
        raise EnumerationLimitError(f"joint support {size} exceeds enumeration cap {cap}")
    exact = size <= EXACT_SUPPORT_CAP
    p = Fraction(1, size) if exact else 1.0 / size
    acc: dict[tuple[int, ...], object] = {}
    base = list(colors)
    for draws in itertools.product(*avails):
        for v, c in zip(movers, draws):
            base[v] = c
        key = tuple(base)
        acc[key] = acc.get(key, 0) + p
    support = tuple(
        (ColoringState(c, s.round + 1), acc[c]) for c in sorted(acc)
    )
    return Distribution(support=support, kind="coloring", exact=exact)


@dataclass(frozen=True)
class AvailableSizeCheck:
    """Exact law of next round's available-set size at one vertex.

    threshold is (k - f)/5 where f counts distinct happy-neighbor colors;
    prob_at_least = P(size >= threshold) must clear the 1/16 floor.
    """

    distribution: Distribution
    threshold: Fraction
    prob_at_least: object
    floor: Fraction
    f: int
    holds: bool


def available_size_distribution(
    g: Graph, s: ColoringState, v: int, strategy: Strategy, k: int, *, cap: int = ENUMERATION_CAP
) -> AvailableSizeCheck:
    """Enumerate the size of v's next-round available set.

    The size uses the defining formula |{own'} union ([k] minus C')|
    evaluated at the post-round colors, whatever v's new happiness status:
    that is the quantity the tail floor is about. Only draws inside v's
    closed neighborhood can affect it, so the enumeration marginalizes
    the rest away exactly.
    """
    colors = s.colors
    if not _is_unhappy(g, colors, v):
        raise ContractViolation(f"vertex {v} is happy; the size law is defined for unhappy vertices")
    part = partition_neighbors(g, s, v)
    nbrs = g.neighbors(v)
    movers = sorted(u for u in set(nbrs) | {v} if _is_unhappy(g, colors, u))
    avails = [_available(colors, g.neighbors(u), colors[u], strategy, k) for u in movers]
    for u, a in zip(movers, avails):
        if not a:
            raise ContractViolation(f"empty available set at vertex {u}")
    size = _joint_size(avails)
    if size > cap:
        raise EnumerationLimitError(f"joint support {size} exceeds enumeration cap {cap}")
    exact = size <= EXACT_SUPPORT_CAP
    p = Fraction(1, size) if exact else 1.0 / size
    pos = {u: i for i, u in enumerate(movers)}
    acc: dict[int, object] = {}
    for draws in itertools.product(*avails):
        own_new = draws[pos[v]]
        c_new = {draws[pos[u]] if u in pos else colors[u] for u in nbrs}
        a_size = (k - len(c_new)) + (1 if own_new in c_new else 0)
        acc[a_size] = acc.get(a_size, 0) + p
    dist = Distribution(
        support=tuple(sorted(acc.items())), kind="available_size", exact=exact
    )
    threshold = Fraction(k - part.f, 5)
    prob = sum((q for sz, q in dist.support if sz >= threshold), Fraction(0) if exact else 0.0)
    floor = AVAILABLE_SIZE_FLOOR
    holds = prob >= (floor if exact else float(floor))
    return AvailableSizeCheck(
        distribution=dist,
        threshold=threshold,
        prob_at_least=prob,
        floor=floor,
        f=part.f,
        holds=holds,
    )


def two_round_floor_holds(prob) -> bool:
    """Compare an exact or float probability against the irrational floor.

    For Fractions the verdict is certified by the bracketing interval; a
    probability falling inside the interval itself would be undecidable
    at the stored precision and raises instead of guessing.
    """
    if isinstance(prob, Fraction):
        if prob >= TWO_ROUND_FLOOR_HI:
            return True
        if prob < TWO_ROUND_FLOOR_LO:
            return False
        raise ContractViolation(
            f"probability {prob} falls inside the floor's bracketing interval; widen the precision"
        )
    return prob >= float(TWO_ROUND_FLOOR_HI)


def two_round_happiness_prob(
    g: Graph,
    s: ColoringState,
    v: int,
    strategy: Strategy,
    k: int,
    *,
    cap: int = ENUMERATION_CAP,
    shortcut: bool = True,
    cache: dict | None = None,
):
    """Exact P(v is happy two rounds after state s).

    shortcut=True credits outcomes where v is already happy after one
    round with probability 1, which is what happiness monotonicity
    guarantees; shortcut=False enumerates the second round regardless and
    must give the identical value. Both rounds only involve draws inside
    v's closed 2-neighborhood, so everything else marginalizes away.

    cache maps second-round subproblems to their probability; share one
    dict across calls on the same graph to amortize corpus scans.
    """
    colors = s.colors
    if not _is_unhappy(g, colors, v):
        return Fraction(1)
    ball1 = [v, *g.neighbors(v)]
    ball2 = sorted({w for u in ball1 for w in (u, *g.neighbors(u))})
    movers1 = [u for u in ball2 if _is_unhappy(g, colors, u)]
    avails1 = [_available(colors, g.neighbors(u), colors[u], strategy, k) for u in movers1]
    for u, a in zip(movers1, avails1):
        if not a:
            raise ContractViolation(f"empty available set at vertex {u}")
    size1 = _joint_size(avails1)
    if size1 > cap:
        raise EnumerationLimitError(f"round-one joint support {size1} exceeds enumeration cap {cap}")
    exact = size1 <= EXACT_SUPPORT_CAP
    p1 = Fraction(1, size1) if exact else 1.0 / size1
    if cache is None:
        cache = {}
    total = Fraction(0) if exact else 0.0
    work = list(colors)
    for draws in itertools.product(*avails1):
        for u, c in zip(movers1, draws):
            work[u] = c
        if shortcut and not _is_unhappy(g, work, v):
            total += p1
        else:
            key = (v, strategy, k, exact, tuple(work[u] for u in ball2))
            hit = cache.get(key)
            if hit is None:
                hit = _second_round_prob(g, work, v, ball1, strategy, k, cap, exact)
                cache[key] = hit
            total += p1 * hit
    return total


def _second_round_prob(g, colors1, v, ball1, strategy, k, cap, exact):
    """P(v happy after one more round from colors1); draws restricted to ball1."""
    movers = [u for u in ball1 if _is_unhappy(g, colors1, u)]
    avails = [_available(colors1, g.neighbors(u), colors1[u], strategy, k) for u in movers]
    for u, a in zip(movers, avails):
        if not a:
            raise ContractViolation(f"empty available set at vertex {u}")
    size = _joint_size(avails)
    if size > cap:
        raise EnumerationLimitError(f"round-two joint support {size} exceeds enumeration cap {cap}")
    p = Fraction(1, size) if exact else 1.0 / size
    pos = {u: i for i, u in enumerate(movers)}
    nbrs = g.neighbors(v)
    total = Fraction(0) if exact else 0.0
    for draws in itertools.product(*avails):
        own = draws[pos[v]] if v in pos else colors1[v]
        ok = True
        for u in nbrs:
            cu = draws[pos[u]] if u in pos else colors1[u]
            if cu == own:
                ok = False
                break
        if ok:
            total += p
    return total


@dataclass(frozen=True)
class ExpectedTau:
    """Exact expected convergence round, or inf when a trapped class is reachable."""

    expected: float
    reachable_states: int
    trapped_states: int


def exact_expected_tau(
    g: Graph,
    cfg: GameConfig,
    *,
    state_cap: int = 10**5,
    transition_cap: int = ENUMERATION_CAP,
) -> ExpectedTau:
    """Expected tau of the game's absorbing chain, counting the start as round 1.

    Explores colorings reachable from the initial distribution, solves
    (I - Q) x = 1 over the transient states (dense below 2000 states,
    value iteration above; residual <= 1e-10 either way), and returns
    1 + sum of initial mass times x. States that cannot reach a proper
    coloring make the expectation infinite; their count is reported.
    """
    cfg.validate(g)
    n, k = g.n, cfg.k
    if k**n > state_cap:
        raise EnumerationLimitError(f"state space k^n = {k**n} exceeds state cap {state_cap}")
    if cfg.initial is not None:
        init: list[tuple[tuple[int, ...], float]] = [(tuple(cfg.initial), 1.0)]
    else:
        w = 1.0 / k**n
        init = [(c, w) for c in itertools.product(range(k), repeat=n)]

    transitions: dict[tuple[int, ...], list[tuple[tuple[int, ...], float]]] = {}
    absorbing: set[tuple[int, ...]] = set()
    rev: dict[tuple[int, ...], set[tuple[int, ...]]] = {}
    stack = [c for c, _ in init]
    seen = set(stack)
    while stack:
        state = stack.pop()
        movers = _unhappy_list(g, state)
        if not movers:
            absorbing.add(state)
            continue
        avails = [_available(state, g.neighbors(u), state[u], cfg.strategy, k) for u in movers]
        for u, a in zip(movers, avails):
            if not a:
                raise ContractViolation(f"empty available set at vertex {u} in state {state}")
        size = _joint_size(avails)
        if size > transition_cap:
            raise EnumerationLimitError(
                f"transition fan-out {size} exceeds enumeration cap {transition_cap}"
            )
        p = 1.0 / size
        succ: dict[tuple[int, ...], float] = {}
        base = list(state)
        for draws in itertools.product(*avails):
            for u, c in zip(movers, draws):
                base[u] = c
            key = tuple(base)
            succ[key] = succ.get(key, 0.0) + p
        transitions[state] = list(succ.items())
        for t in succ:
            rev.setdefault(t, set()).add(state)
            if t not in seen:
                seen.add(t)
                stack.append(t)

    # States that can reach absorption, found by walking reverse edges.
    co = set(absorbing)
    frontier = list(absorbing)
    while frontier:
        t = frontier.pop()
        for s_prev in rev.get(t, ()):
            if s_prev not in co:
                co.add(s_prev)
                frontier.append(s_prev)
    trapped = len(seen) - len(co)
    if trapped:
        return ExpectedTau(math.inf, len(seen), trapped)

    transient = sorted(transitions)
    index = {state: i for i, state in enumerate(transient)}
    m = len(transient)
    if m == 0:
        return ExpectedTau(1.0, len(seen), 0)
    if m < DENSE_SOLVER_MAX:
        a = np.eye(m)
        for state, succ in transitions.items():
            i = index[state]
            for t, p in succ:
                j = index.get(t)
                if j is not None:
                    a[i, j] -= p
        b = np.ones(m)
        x = np.linalg.solve(a, b)
        residual = float(np.max(np.abs(a @ x - b)))
    else:
        rows = [
            [(index[t], p) for t, p in transitions[state] if t in index]
            for state in transient
        ]
        x = np.zeros(m)
        for _ in range(10**6):
            new = np.ones(m)
            for i, row in enumerate(rows):
                acc = 1.0
                for j, p in row:
                    acc += p * x[j]
                new[i] = acc
            residual = float(np.max(np.abs(new - x)))
            x = new
            if residual <= 1e-10:
                break
        residual = _residual(rows, x)
    if residual > 1e-10:
        raise ContractViolation(f"absorption solve residual {residual} above 1e-10")

    expected = 1.0
    for state, w in init:
        i = index.get(state)
        if i is not None:
            expected += w * float(x[i])
    return ExpectedTau(expected, len(seen), 0)


def _residual(rows, x) -> float:
    worst = 0.0
    for i, row in enumerate(rows):
        acc = 1.0
        for j, p in row:
            acc += p * x[j]
        worst = max(worst, abs(acc - x[i]))
    return worst
