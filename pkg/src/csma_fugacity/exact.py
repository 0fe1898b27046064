"""Brute-force Gibbs oracle over independent sets.

Everything here enumerates the feasible schedules of the conflict graph, so it
is limited to small graphs (``n <= 30``). Schedules are handled as integer
bitmasks; the partition function is accumulated in log space.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._simplex import minimize_ge
from ._validation import check_fugacities
from .exceptions import TooLarge
from .graph import ConflictGraph, maximal_cliques

MAX_N = 30
MAX_SETS = 1 << 24

__all__ = [
    "MAX_N",
    "ExactSummary",
    "enumerate_independent_sets",
    "independent_set_masks",
    "gibbs_distribution",
    "exact_marginals",
    "maximal_independent_sets",
    "max_symmetric_rate",
]


@dataclass(frozen=True)
class ExactSummary:
    logZ: float
    marginals: np.ndarray
    n_sets: int


def _guard(g: ConflictGraph):
    if g.n > MAX_N:
        raise TooLarge(g.n, MAX_N)


def enumerate_independent_sets(g: ConflictGraph) -> Iterator[tuple]:
    """Yield every independent set (as a sorted tuple) once, the empty set first."""
    _guard(g)
    adj = g.adj
    n = g.n

    def dfs(k, chosen, blocked):
        if k == n:
            yield tuple(chosen)
            return
        yield from dfs(k + 1, chosen, blocked)
        if not (blocked >> k) & 1:
            chosen.append(k)
            yield from dfs(k + 1, chosen, blocked | adj[k])
            chosen.pop()

    yield from dfs(0, [], 0)


@functools.lru_cache(maxsize=16)
def independent_set_masks(g: ConflictGraph) -> np.ndarray:
    """All independent sets as an ``int64`` bitmask array in a fixed order."""
    _guard(g)
    masks = np.zeros(1, dtype=np.int64)
    for v in range(g.n):
        lower = g.adj[v] & ((1 << v) - 1)
        ok = masks[(masks & lower) == 0]
        if masks.size + ok.size > MAX_SETS:
            raise TooLarge(g.n, MAX_N)
        masks = np.concatenate([masks, ok | (1 << v)])
    masks.setflags(write=False)
    return masks


def _bit_columns(masks: np.ndarray, n: int) -> list[np.ndarray]:
    return [((masks >> i) & 1).astype(bool) for i in range(n)]


def _log_weights(g, v):
    masks = independent_set_masks(g)
    bits = _bit_columns(masks, g.n)
    energy = np.zeros(masks.size)
    for i in range(g.n):
        if v[i] == -np.inf:
            energy[bits[i]] = -np.inf
        else:
            energy[bits[i]] += v[i]
    top = energy.max()
    logZ = top + np.log(np.exp(energy - top).sum())
    return masks, bits, energy, logZ


def gibbs_distribution(g: ConflictGraph, v) -> tuple[np.ndarray, np.ndarray]:
    """``(masks, probabilities)`` of the product-form distribution over schedules."""
    v = check_fugacities(v, g.n)
    masks, _, energy, logZ = _log_weights(g, v)
    return masks, np.exp(energy - logZ)


def exact_marginals(g: ConflictGraph, v) -> ExactSummary:
    """Exact log-partition value and per-link activity probabilities."""
    v = check_fugacities(v, g.n)
    masks, bits, energy, logZ = _log_weights(g, v)
    p = np.exp(energy - logZ)
    marg = np.array([p[b].sum() for b in bits])
    return ExactSummary(float(logZ), marg, int(masks.size))


def maximal_independent_sets(g: ConflictGraph) -> list[tuple]:
    """Maximal independent sets = maximal cliques of the complement graph."""
    full = (1 << g.n) - 1
    comp = ConflictGraph(g.n, tuple(full & ~a & ~(1 << i) for i, a in enumerate(g.adj)))
    return maximal_cliques(comp)


@functools.lru_cache(maxsize=64)
def max_symmetric_rate(g: ConflictGraph) -> float:
    """Largest ``s`` with ``s * 1`` in the rate region, i.e. ``1 / fractional chromatic number``.

    Solves ``min sum_I x_I  s.t.  sum_{I ∋ v} x_I >= 1`` over maximal
    independent sets with the bundled simplex.
    """
    _guard(g)
    sets = maximal_independent_sets(g)
    A = np.zeros((g.n, len(sets)))
    for k, mis in enumerate(sets):
        A[list(mis), k] = 1.0
    chi_f, _ = minimize_ge(np.ones(len(sets)), A, np.ones(g.n))
    return 1.0 / chi_f
