"""Region-approximated fugacities for the Bethe, clique and 4-cycle methods.

All fugacities are returned as log-fugacities ``v`` (natural log). For a
region collection with counting numbers ``c_r`` and per-region ratios
``rho[r, i] = b_r(x^i) / b_r(0)``, vertex ``i`` gets

    v_i = sum over regions r containing i of  c_r * log(rho[r, i]).

Clique regions admit exactly one consistent regional distribution, with
``rho[r, i] = s_i / (1 - sum_{j in r} s_j)``; chordless 4-cycles use the
max-entropy product form from :mod:`csma_fugacity.cycle4`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._validation import check_rates
from .cycle4 import cycle4_maxent_oracle, cycle4_probabilities, cycle4_ratio_closed, SCHEDULES
from .exceptions import DegenerateDenominator, InfeasibleRates, MissingRatio, NoConvergence, ParameterError
from .graph import ConflictGraph, Cycle4
from .regions import RegionCollection, build_collection, local_collection

__all__ = [
    "Cycle4MismatchWarning",
    "RegionDistribution",
    "clique_raf",
    "bethe_raf",
    "clique_ratios",
    "cycle4_ratios",
    "combine_raf",
    "cycle4_raf",
    "region_entropy",
    "raf",
    "local_raf",
    "cycle4_distribution",
]

MISMATCH_TOL = 1e-6


class Cycle4MismatchWarning(RuntimeWarning):
    """Closed-form 4-cycle ratio disagreed with the Newton oracle; the oracle was used."""


def _idle_log(region, s) -> float:
    """log(1 - sum of rates over ``region``), raising if not positive."""
    return math.log(_idle(region, s))


def _idle(region, s) -> float:
    """``1 - sum_{j in region} s_j``, correctly rounded (no cancellation near 1)."""
    idle = math.fsum([1.0] + [-s[j] for j in region])
    if not idle > 0.0:
        total = math.fsum(s[j] for j in region)
        raise InfeasibleRates(region, f"rates sum to {total:.6g} >= 1")
    return idle


def clique_raf(g: ConflictGraph, collection: RegionCollection, s) -> np.ndarray:
    """``v_i = log s_i - sum_{r ∋ i} c_r log(1 - sum_{j∈r} s_j)`` over a clique collection."""
    s = check_rates(s, g.n)
    idle = {r: _idle_log(r, s) for r in collection.regions}
    v = np.log(s)
    for r, c in collection.counting.items():
        if c:
            for i in r:
                v[i] -= c * idle[r]
    return v


def bethe_raf(g: ConflictGraph, s) -> np.ndarray:
    """Bethe fugacities from each vertex's own rate and its neighbours' rates."""
    s = check_rates(s, g.n)
    v = np.empty(g.n)
    for i in range(g.n):
        nbrs = g.neighbors(i)
        acc = math.log(s[i]) + (len(nbrs) - 1) * math.log(_idle((i,), s))
        for j in nbrs:
            acc -= _idle_log((min(i, j), max(i, j)), s)
        v[i] = acc
    return v


def clique_ratios(collection: RegionCollection, s, regions=None) -> dict:
    """Ratios ``s_i / (1 - sum_{j∈r} s_j)`` for every (clique region, member)."""
    out = {}
    for r in collection.regions if regions is None else regions:
        idle = _idle(r, s)
        for i in r:
            out[r, i] = s[i] / idle
    return out


def combine_raf(collection: RegionCollection, ratios: dict) -> np.ndarray:
    """``v_i = sum_{r ∋ i} c_r log(ratio[r, i])``."""
    v = np.zeros(collection.n)
    for r in collection.regions:
        c = collection.counting[r]
        for i in r:
            try:
                rho = ratios[r, i]
            except KeyError:
                raise MissingRatio(r, i) from None
            if c:
                v[i] += c * math.log(rho)
    return v


def _cyclic(cycle: Cycle4) -> tuple:
    (u, w), (a, b) = cycle.diagonals
    return (u, a, w, b)


def cycle4_ratios(cycle: Cycle4, s) -> dict:
    """Ratios for the four members of ``cycle``: closed form, oracle on trouble.

    Raises :class:`InfeasibleRates` naming the cycle if no product-form
    distribution with the requested marginals exists.
    """
    order = _cyclic(cycle)
    rates = [s[i] for i in order]
    try:
        oracle = cycle4_maxent_oracle(rates)
    except NoConvergence as exc:
        raise InfeasibleRates(cycle.region, f"4-cycle marginals infeasible ({exc})") from None
    out = {}
    for k, i in enumerate(order):
        a, b, d = cycle.structure(i)
        try:
            closed = cycle4_ratio_closed(s[i], s[a], s[b], s[d])
        except DegenerateDenominator:
            out[cycle.region, i] = float(oracle[k])
            continue
        if not abs(closed - oracle[k]) <= MISMATCH_TOL * max(1.0, oracle[k]):
            warnings.warn(
                f"closed-form ratio {closed!r} vs oracle {oracle[k]!r} at vertex {i} of {cycle.region}",
                Cycle4MismatchWarning,
                stacklevel=2,
            )
            out[cycle.region, i] = float(oracle[k])
        else:
            out[cycle.region, i] = closed
    return out


def cycle4_raf(g: ConflictGraph, collection: RegionCollection, s) -> np.ndarray:
    """Fugacities for the clique + chordless 4-cycle collection."""
    s = check_rates(s, g.n)
    cliques = [r for r in collection.regions if r not in collection.cycles]
    ratios = clique_ratios(collection, s, cliques)
    for r in sorted(collection.cycles):
        ratios.update(cycle4_ratios(collection.cycles[r], s))
    return combine_raf(collection, ratios)


def raf(g: ConflictGraph, s, method: str = "clique", collection: RegionCollection | None = None) -> np.ndarray:
    """Log-fugacities for ``method``; builds the collection when not given."""
    if method == "bethe" and collection is None:
        return bethe_raf(g, s)
    if collection is None:
        collection = build_collection(g, method)
    elif collection.method != method:
        raise ParameterError(f"collection was built for {collection.method!r}, not {method!r}")
    if method in ("bethe", "clique"):
        return clique_raf(g, collection, s)
    if method == "cycle4":
        return cycle4_raf(g, collection, s)
    raise ParameterError(f"unknown method {method!r}")


def local_raf(g: ConflictGraph, i: int, s, method: str = "clique") -> float:
    """Fugacity of vertex ``i`` computed from its local neighbourhood only."""
    s = check_rates(s, g.n)
    local = local_collection(g, i, method)
    if method == "cycle4":
        cliques = [r for r in local.regions if r not in local.cycles]
        ratios = clique_ratios(local, s, cliques)
        for r in sorted(local.cycles):
            ratios.update(cycle4_ratios(local.cycles[r], s))
        return float(combine_raf(local, ratios)[i])
    v = math.log(s[i])
    for r, c in local.counting.items():
        if c:
            v -= c * _idle_log(r, s)
    return v


# ---------------------------------------------------------------- entropy


@dataclass(frozen=True)
class RegionDistribution:
    """Distribution over local schedules of ``region``.

    ``probs`` maps a 0/1 tuple aligned with ``region`` to its probability.
    """

    region: tuple
    probs: dict

    def __post_init__(self):
        for x, p in self.probs.items():
            if len(x) != len(self.region):
                raise ParameterError(f"schedule {x} does not match region {self.region}")
            if p < 0:
                raise ParameterError(f"negative probability {p} for schedule {x}")
        total = math.fsum(self.probs.values())
        if abs(total - 1.0) > 1e-9:
            raise ParameterError(f"probabilities sum to {total}, not 1")

    def is_supported_on(self, g: ConflictGraph) -> bool:
        """True iff every schedule with positive mass is locally feasible."""
        for x, p in self.probs.items():
            if p > 0 and not g.is_independent([v for v, on in zip(self.region, x) if on]):
                return False
        return True

    def marginal(self, i: int) -> float:
        k = self.region.index(i)
        return math.fsum(p for x, p in self.probs.items() if x[k])


def region_entropy(d: RegionDistribution) -> float:
    """``-sum b log b`` with ``0 log 0 = 0``."""
    return -math.fsum(p * math.log(p) for p in d.probs.values() if p > 0)


def cycle4_distribution(cycle: Cycle4, lams) -> RegionDistribution:
    """Product-form distribution on ``cycle`` for ratios given in cyclic order."""
    order = _cyclic(cycle)
    probs = cycle4_probabilities(lams)
    pos = {v: k for k, v in enumerate(cycle.region)}
    table = {}
    for row, p in zip(SCHEDULES, probs):
        x = [0, 0, 0, 0]
        for k, on in enumerate(row):
            if on:
                x[pos[order[k]]] = 1
        table[tuple(x)] = float(p)
    return RegionDistribution(cycle.region, table)
