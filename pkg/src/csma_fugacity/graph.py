"""Conflict graphs: representation, generators, clique/cycle enumeration, DIMACS I/O.

Vertices are 0-indexed internally. Adjacency is stored as one Python ``int``
bitset per vertex, so neighbourhood intersections are single ``&`` operations.
The 1-indexed labels used in DIMACS files and for the named example networks
are converted at the I/O boundary only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimacsParseError, ParameterError

Region = tuple  # strictly increasing tuple of vertex ids

__all__ = [
    "ConflictGraph",
    "Cycle4",
    "Region",
    "make_region",
    "complete",
    "grid",
    "ring",
    "random_geometric",
    "fig8",
    "chordal6",
    "generate",
    "TOPOLOGY_KINDS",
    "load_dimacs",
    "write_dimacs",
    "maximal_cliques",
    "chordless_4cycles",
    "is_chordal",
]


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def make_region(vertices: Iterable[int], n: int | None = None) -> Region:
    """Return ``vertices`` as a canonical region (sorted tuple), validating it."""
    r = tuple(sorted(int(v) for v in vertices))
    if not r:
        raise ParameterError("region must be nonempty")
    if len(set(r)) != len(r):
        raise ParameterError(f"region {r} has duplicate vertices")
    if r[0] < 0 or (n is not None and r[-1] >= n):
        raise ParameterError(f"region {r} has vertex ids outside [0, {n})")
    return r


@dataclass(frozen=True)
class ConflictGraph:
    """Undirected conflict graph over ``n`` links.

    ``adj[i]`` is an integer bitset whose bit ``j`` is set iff links ``i`` and
    ``j`` interfere. Instances are immutable and hashable.
    """

    n: int
    adj: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("a conflict graph needs at least one vertex")
        if len(self.adj) != self.n:
            raise ParameterError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for i, a in enumerate(self.adj):
            if a & ~full:
                raise ParameterError(f"vertex {i} has a neighbour outside [0, {self.n})")
            if (a >> i) & 1:
                raise ParameterError(f"self-loop at vertex {i}")
            for j in _bits(a):
                if not (self.adj[j] >> i) & 1:
                    raise ParameterError(f"asymmetric adjacency between {i} and {j}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "ConflictGraph":
        adj = [0] * n
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u},{v}) outside [0, {n})")
            if u == v:
                raise ParameterError(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def from_adjacency_matrix(cls, matrix) -> "ConflictGraph":
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ParameterError("adjacency matrix must be square")
        if not np.array_equal(a != 0, (a != 0).T):
            raise ParameterError("adjacency matrix must be symmetric")
        n = a.shape[0]
        return cls.from_edges(n, [(i, j) for i, j in zip(*np.nonzero(a)) if i < j])

    def neighbors(self, i: int) -> list[int]:
        return list(_bits(self.adj[i]))

    def degree(self, i: int) -> int:
        return self.adj[i].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.adj[i]) if i < j]

    @property
    def n_edges(self) -> int:
        return sum(self.degree(i) for i in range(self.n)) // 2

    def adjacency_matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges():
            m[i, j] = m[j, i] = True
        return m

    def is_clique(self, vertices: Sequence[int]) -> bool:
        return all(self.has_edge(u, v) for u, v in itertools.combinations(vertices, 2))

    def is_independent(self, vertices: Sequence[int]) -> bool:
        return not any(self.has_edge(u, v) for u, v in itertools.combinations(vertices, 2))

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["ConflictGraph", list[int]]:
        """Induced subgraph plus the list mapping new ids back to old ids."""
        keep = sorted(set(vertices))
        index = {v: k for k, v in enumerate(keep)}
        sub = [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        return ConflictGraph.from_edges(len(keep), sub), keep

    def relabel(self, perm: Sequence[int]) -> "ConflictGraph":
        """Graph in which old vertex ``i`` becomes ``perm[i]``."""
        if sorted(perm) != list(range(self.n)):
            raise ParameterError("perm must be a permutation of range(n)")
        return ConflictGraph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def __repr__(self):
        return f"ConflictGraph(n={self.n}, edges={self.n_edges})"


# ---------------------------------------------------------------- generators


def complete(n: int) -> ConflictGraph:
    _check_n(n)
    return ConflictGraph.from_edges(n, itertools.combinations(range(n), 2))


def grid(rows: int, cols: int) -> ConflictGraph:
    """4-neighbour lattice with row-major ids."""
    if rows < 1 or cols < 1:
        raise ParameterError("grid needs rows >= 1 and cols >= 1")
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
            if r + 1 < rows:
                edges.append((i, i + cols))
    return ConflictGraph.from_edges(rows * cols, edges)


def ring(n: int) -> ConflictGraph:
    _check_n(n)
    edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n) if n > 1 and i != (i + 1) % n}
    return ConflictGraph.from_edges(n, sorted(edges))


def random_geometric(n: int, side: float = 3.0, radius: float = 0.8, seed: int = 0) -> ConflictGraph:
    """Uniform points in ``[0, side]^2``; edges join pairs within ``radius``.

    Points come from ``numpy.random.default_rng(seed)`` (PCG64) as one
    ``uniform(0, side, size=(n, 2))`` draw, so the graph is a deterministic
    function of ``(n, side, radius, seed)`` on every platform. The result is
    not conditioned on connectivity.
    """
    _check_n(n)
    if radius < 0:
        raise ParameterError("radius must be >= 0")
    if side <= 0:
        raise ParameterError("side must be > 0")
    pts = np.random.default_rng(seed).uniform(0.0, side, size=(n, 2))
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
    close = d2 <= radius * radius
    return ConflictGraph.from_edges(
        n, [(i, j) for i in range(n) for j in range(i + 1, n) if close[i, j]]
    )


_FIG8_EDGES = [(1, 2), (2, 8), (8, 7), (2, 3), (3, 7), (2, 7), (3, 4), (3, 5), (3, 6), (5, 6), (6, 7), (5, 7)]
_CHORDAL6_EDGES = [(1, 2), (1, 4), (4, 5), (2, 5), (1, 5), (5, 6), (3, 6), (2, 3), (3, 5)]


def fig8() -> ConflictGraph:
    """The 8-link example network (vertex ``k`` here is label ``k+1`` there)."""
    return ConflictGraph.from_edges(8, [(u - 1, v - 1) for u, v in _FIG8_EDGES])


def chordal6() -> ConflictGraph:
    """The 6-vertex chordal example with cliques {1,4,5},{1,2,5},{2,3,5},{3,5,6}."""
    return ConflictGraph.from_edges(6, [(u - 1, v - 1) for u, v in _CHORDAL6_EDGES])


TOPOLOGY_KINDS = ("complete", "grid", "ring", "random_geometric", "fig8", "chordal6")


def generate(kind: str, *, n=None, rows=None, cols=None, side=3.0, radius=0.8, seed=0) -> ConflictGraph:
    """Build a named topology. Unused parameters for a kind are ignored."""
    if kind == "complete":
        return complete(_need(n, "n"))
    if kind == "grid":
        return grid(_need(rows, "rows"), _need(cols, "cols"))
    if kind == "ring":
        return ring(_need(n, "n"))
    if kind == "random_geometric":
        return random_geometric(_need(n, "n"), side, radius, seed)
    if kind == "fig8":
        return fig8()
    if kind == "chordal6":
        return chordal6()
    raise ParameterError(f"unknown topology kind {kind!r}; expected one of {', '.join(TOPOLOGY_KINDS)}")


def _need(value, name):
    if value is None:
        raise ParameterError(f"missing parameter {name!r}")
    return int(value)


def _check_n(n):
    if n < 1:
        raise ParameterError("n must be >= 1")


# ---------------------------------------------------------------- DIMACS


def load_dimacs(text) -> ConflictGraph:
    """Parse a DIMACS ``p edge`` graph from ``bytes`` or ``str``."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("ascii")
    n = m = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        tag = tokens[0]
        if tag == "p":
            if n is not None:
                raise DimacsParseError("duplicate problem line", lineno)
            if len(tokens) != 4 or tokens[1] != "edge":
                raise DimacsParseError("malformed header, expected 'p edge <n> <m>'", lineno)
            try:
                n, m = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise DimacsParseError("non-integer vertex or edge count", lineno) from None
            if n < 1 or m < 0:
                raise DimacsParseError("vertex count must be >= 1 and edge count >= 0", lineno)
        elif tag == "e":
            if len(tokens) != 3:
                raise DimacsParseError("malformed edge line, expected 'e <u> <v>'", lineno)
            try:
                u, v = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise DimacsParseError("non-integer edge endpoint", lineno) from None
            if u == v:
                raise DimacsParseError(f"self-loop at vertex {u}", lineno)
            if n is None:
                raise DimacsParseError("edge before problem line", lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsParseError(f"vertex out of range 1..{n}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DimacsParseError(f"duplicate edge {key[0]}-{key[1]}", lineno)
            seen.add(key)
        else:
            raise DimacsParseError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise DimacsParseError("missing problem line 'p edge <n> <m>'")
    if len(seen) != m:
        raise DimacsParseError(f"header declares {m} edges but {len(seen)} were given")
    return ConflictGraph.from_edges(n, [(u - 1, v - 1) for u, v in seen])


def write_dimacs(g: ConflictGraph) -> bytes:
    edges = g.edges()
    lines = [f"p edge {g.n} {len(edges)}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in edges]
    return ("\n".join(lines) + "\n").encode("ascii")


# ---------------------------------------------------------------- structure


def maximal_cliques(g: ConflictGraph) -> list[Region]:
    """All inclusion-maximal cliques, sorted. Bron-Kerbosch with pivoting."""
    adj = g.adj
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(tuple(_bits(r)))
            return
        pivot = max(_bits(p | x), key=lambda u: (p & adj[u]).bit_count())
        for v in list(_bits(p & ~adj[pivot])):
            bit = 1 << v
            expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    expand(0, (1 << g.n) - 1, 0)
    return sorted(out)


@dataclass(frozen=True)
class Cycle4:
    """A chordless 4-cycle given by its two non-adjacent diagonal pairs."""

    diagonals: tuple  # ((u, w), (v, x)), each pair sorted, pairs sorted

    @property
    def region(self) -> Region:
        return tuple(sorted(self.diagonals[0] + self.diagonals[1]))

    def diagonal(self, i: int) -> int:
        for a, b in self.diagonals:
            if i == a:
                return b
            if i == b:
                return a
        raise KeyError(i)

    def neighbors(self, i: int) -> tuple[int, int]:
        """The two cycle-neighbours of ``i`` (the other diagonal pair)."""
        for pair in self.diagonals:
            if i not in pair:
                return pair
        raise KeyError(i)

    def structure(self, i: int) -> tuple[int, int, int]:
        """``(neighbor_a, neighbor_b, diagonal)`` for vertex ``i``."""
        a, b = self.neighbors(i)
        return a, b, self.diagonal(i)


def chordless_4cycles(g: ConflictGraph) -> list[Cycle4]:
    """Every induced 4-cycle exactly once, sorted by region."""
    found = {}
    adj = g.adj
    for u in range(g.n):
        for w in range(u + 1, g.n):
            if (adj[u] >> w) & 1:
                continue
            common = list(_bits(adj[u] & adj[w]))
            for v, x in itertools.combinations(common, 2):
                if (adj[v] >> x) & 1:
                    continue
                c = Cycle4(tuple(sorted([(u, w), (v, x)])))
                found[c.region] = c
    return [found[r] for r in sorted(found)]


def lex_bfs(g: ConflictGraph) -> list[int]:
    """Lexicographic BFS visit order (partition refinement, O(n^2))."""
    order = []
    parts = [list(range(g.n))]
    while parts:
        v = parts[0].pop(0)
        if not parts[0]:
            parts.pop(0)
        order.append(v)
        refined = []
        for part in parts:
            inside = [u for u in part if g.has_edge(u, v)]
            outside = [u for u in part if not g.has_edge(u, v)]
            refined.extend(p for p in (inside, outside) if p)
        parts = refined
    return order


def is_chordal(g: ConflictGraph) -> bool:
    """True iff the reverse LexBFS order is a perfect elimination ordering."""
    peo = lex_bfs(g)[::-1]
    pos = {v: k for k, v in enumerate(peo)}
    for v in peo:
        later = [u for u in _bits(g.adj[v]) if pos[u] > pos[v]]
        if len(later) < 2:
            continue
        parent = min(later, key=pos.__getitem__)
        rest = sum(1 << u for u in later if u != parent)
        if rest & ~g.adj[parent]:
            return False
    return True
