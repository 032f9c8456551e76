"""Simple undirected graphs: validation, generators, and edge-list file I/O.

Vertices are dense zero-based integers so hot loops can index arrays
directly. Graphs are immutable after construction and safe to share
across worker processes.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence

from .errors import GraphFormatError

FAMILIES = ("complete", "cycle", "path", "star", "erdos_renyi")


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    Build instances with :func:`from_edge_list`, :func:`generate`, or
    :func:`read_edge_list`; the constructor trusts its arguments.
    """

    __slots__ = ("n", "edge_count", "_adj")

    def __init__(self, n: int, adjacency: tuple[tuple[int, ...], ...], edge_count: int):
        self.n = n
        self._adj = adjacency
        self.edge_count = edge_count

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Sorted neighbors of v."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        """Largest vertex degree; 0 for an edgeless graph."""
        if self.n == 0:
            return 0
        return max(len(a) for a in self._adj)

    def edges(self) -> list[tuple[int, int]]:
        """All edges as sorted (u, v) pairs with u < v."""
        return [(u, v) for u in range(self.n) for v in self._adj[u] if u < v]

    def validate(self) -> None:
        """Check symmetry, loop-freeness, sortedness, and the edge count.

        Raises GraphFormatError on any violation. Used by tests as an
        independent structural check on every construction path.
        """
        if len(self._adj) != self.n:
            raise GraphFormatError("adjacency length differs from n")
        count = 0
        for v, nbrs in enumerate(self._adj):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphFormatError(f"adjacency of {v} not sorted/deduplicated")
            for u in nbrs:
                if u == v:
                    raise GraphFormatError(f"self-loop at {v}")
                if not 0 <= u < self.n:
                    raise GraphFormatError(f"neighbor {u} of {v} out of range")
                if v not in self._adj[u]:
                    raise GraphFormatError(f"asymmetric edge ({v}, {u})")
            count += len(nbrs)
        if count != 2 * self.edge_count:
            raise GraphFormatError("edge_count inconsistent with adjacency")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._adj == other._adj

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def from_edge_list(pairs: Iterable[tuple[int, int]], n: int) -> Graph:
    """Build a Graph from unordered endpoint pairs.

    Duplicate pairs (in either orientation) collapse silently; self-loops
    and out-of-range endpoints are rejected.
    """
    if n < 0:
        raise GraphFormatError(f"vertex count must be >= 0, got {n}")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for a, b in pairs:
        if a == b:
            raise GraphFormatError(f"self-loop ({a}, {b}) not allowed")
        if not (0 <= a < n and 0 <= b < n):
            raise GraphFormatError(f"edge ({a}, {b}) out of range for n={n}")
        nbrs[a].add(b)
        nbrs[b].add(a)
    adjacency = tuple(tuple(sorted(s)) for s in nbrs)
    edge_count = sum(len(s) for s in nbrs) // 2
    return Graph(n, adjacency, edge_count)


def complete_graph(n: int) -> Graph:
    _check_n(n)
    return from_edge_list([(u, v) for u in range(n) for v in range(u + 1, n)], n)


def cycle_graph(n: int) -> Graph:
    _check_n(n)
    if n < 3:
        raise GraphFormatError(f"cycle needs n >= 3, got {n}")
    return from_edge_list([(v, (v + 1) % n) for v in range(n)], n)


def path_graph(n: int) -> Graph:
    _check_n(n)
    return from_edge_list([(v, v + 1) for v in range(n - 1)], n)


def star_graph(n: int) -> Graph:
    """Star on n vertices total: center 0 joined to leaves 1..n-1."""
    _check_n(n)
    return from_edge_list([(0, v) for v in range(1, n)], n)


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with each unordered pair included independently.

    Deterministic for fixed (n, p, seed).
    """
    _check_n(n)
    if not 0.0 <= p <= 1.0:
        raise GraphFormatError(f"edge probability must be in [0, 1], got {p}")
    rng = random.Random(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return from_edge_list(pairs, n)


def generate(kind: str, n: int, p: float | None = None, seed: int | None = None) -> Graph:
    """Dispatch to a named generator family.

    erdos_renyi requires both p and seed; the fixed families ignore them.
    """
    if kind == "complete":
        return complete_graph(n)
    if kind == "cycle":
        return cycle_graph(n)
    if kind == "path":
        return path_graph(n)
    if kind == "star":
        return star_graph(n)
    if kind == "erdos_renyi":
        if p is None:
            raise GraphFormatError("erdos_renyi requires p")
        if seed is None:
            raise GraphFormatError("erdos_renyi requires a seed")
        return erdos_renyi(n, p, seed)
    raise GraphFormatError(f"unknown graph family {kind!r}; choose from {FAMILIES}")


def _check_n(n: int) -> None:
    if n < 1:
        raise GraphFormatError(f"generator needs n >= 1, got {n}")


def read_edge_list(path: str) -> Graph:
    """Parse the edge-list text format.

    First data line is ``n m``, followed by exactly m lines ``u v`` with
    zero-based endpoints. Blank lines and lines starting with ``#`` are
    skipped anywhere in the file.
    """
    header: tuple[int, int] | None = None
    pairs: list[tuple[int, int]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if len(fields) != 2:
                raise GraphFormatError(f"{path}:{lineno}: expected two fields, got {line!r}")
            try:
                a, b = int(fields[0]), int(fields[1])
            except ValueError:
                raise GraphFormatError(f"{path}:{lineno}: non-integer field in {line!r}") from None
            if header is None:
                header = (a, b)
                continue
            pairs.append((a, b))
            if len(pairs) > header[1]:
                raise GraphFormatError(f"{path}:{lineno}: more than {header[1]} edges declared in header")
    if header is None:
        raise GraphFormatError(f"{path}: missing 'n m' header line")
    n, m = header
    if n < 0 or m < 0:
        raise GraphFormatError(f"{path}: header values must be non-negative, got {n} {m}")
    if len(pairs) != m:
        raise GraphFormatError(f"{path}: header declares {m} edges, file has {len(pairs)}")
    try:
        return from_edge_list(pairs, n)
    except GraphFormatError as exc:
        raise GraphFormatError(f"{path}: {exc}") from None


def write_edge_list(g: Graph, path: str) -> None:
    """Write the edge-list text format with sorted edges; deterministic bytes."""
    edges = g.edges()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{g.n} {len(edges)}\n")
        for u, v in edges:
            fh.write(f"{u} {v}\n")


def format_edge_list(g: Graph) -> str:
    """The edge-list format as a string (for stdout emission)."""
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"
