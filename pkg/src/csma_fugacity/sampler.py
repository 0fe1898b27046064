"""Slotted Basic-CSMA Gibbs sampler.

Each slot one link, chosen uniformly at random, updates: it stays silent if a
conflicting link was active in the previous slot, otherwise it transmits with
probability ``exp(v_i) / (1 + exp(v_i))``. The stationary law of this chain is
the product-form distribution over independent sets.

Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64). Draws are
taken in chunks of ``CHUNK`` slots as ``integers(0, n, CHUNK)`` followed by
``random(CHUNK)``, so a trajectory is a deterministic function of the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from ._validation import check_fugacities
from .exceptions import ParameterError
from .graph import ConflictGraph

CHUNK = 1 << 18

__all__ = ["ScheduleState", "activation_probability", "step", "simulate", "state_visits", "CHUNK"]


@dataclass(frozen=True)
class ScheduleState:
    active: int  # bitmask of transmitting links
    slot: int = 0

    def links(self) -> list[int]:
        return [i for i in range(self.active.bit_length()) if (self.active >> i) & 1]


def activation_probability(v) -> np.ndarray:
    """Logistic ``e^v / (1 + e^v)``, evaluated without overflow; ``-inf`` maps to 0."""
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    pos = v >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-v[pos]))
    e = np.exp(v[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def apply_update(g: ConflictGraph, p_on, state: ScheduleState, link: int, u: float) -> ScheduleState:
    """Update ``link`` given a uniform draw ``u``; all other links keep their value."""
    bit = 1 << link
    if state.active & g.adj[link]:
        active = state.active & ~bit
    elif u < p_on[link]:
        active = state.active | bit
    else:
        active = state.active & ~bit
    return ScheduleState(active, state.slot + 1)


def step(g: ConflictGraph, v, state: ScheduleState, rng: np.random.Generator) -> ScheduleState:
    """Advance the chain by one slot."""
    v = check_fugacities(v, g.n)
    link = int(rng.integers(0, g.n))
    new = apply_update(g, activation_probability(v), state, link, float(rng.random()))
    assert not any(new.active & g.adj[i] for i in new.links()), "schedule left the feasible set"
    return new


@numba.njit(cache=True)
def _run(nbr_ptr, nbr_idx, p_on, active, picks, us, count_from, counts, record, masks):
    n = active.size
    mask = 0
    for j in range(n):
        if active[j]:
            mask |= 1 << j
    for t in range(picks.size):
        i = picks[t]
        busy = False
        for k in range(nbr_ptr[i], nbr_ptr[i + 1]):
            if active[nbr_idx[k]]:
                busy = True
                break
        on = (not busy) and us[t] < p_on[i]
        active[i] = on
        if on:
            mask |= 1 << i
        else:
            mask &= ~(1 << i)
        if record:
            masks[t] = mask
        if t >= count_from:
            for j in range(n):
                if active[j]:
                    counts[j] += 1


def _csr(g: ConflictGraph):
    ptr = np.zeros(g.n + 1, dtype=np.int64)
    idx = []
    for i in range(g.n):
        nb = g.neighbors(i)
        idx.extend(nb)
        ptr[i + 1] = ptr[i] + len(nb)
    return ptr, np.array(idx, dtype=np.int64)


def _draws(rng, size, n):
    return rng.integers(0, n, size=size), rng.random(size)


def _chain(g, v, slots, burn_in, seed, on_masks=None):
    v = check_fugacities(v, g.n)
    if not slots > burn_in >= 0:
        raise ParameterError("need slots > burn_in >= 0")
    if on_masks is not None and g.n > 62:
        raise ParameterError("state recording supports at most 62 links")
    ptr, idx = _csr(g)
    p_on = activation_probability(v)
    active = np.zeros(g.n, dtype=np.bool_)
    counts = np.zeros(g.n, dtype=np.int64)
    rng = np.random.default_rng(seed)
    done = 0
    scratch = np.zeros(CHUNK if on_masks is not None else 1, dtype=np.int64)
    while done < slots:
        size = min(CHUNK, slots - done)
        picks, us = _draws(rng, size, g.n)
        record = on_masks is not None
        _run(ptr, idx, p_on, active, picks, us, burn_in - done, counts, record, scratch)
        if record:
            on_masks(done, scratch[:size])
        done += size
    return counts


def simulate(g: ConflictGraph, v, slots: int, burn_in: int = 0, seed: int = 0, trace=None) -> np.ndarray:
    """Fraction of post-burn-in slots each link spends transmitting.

    If ``trace`` is a writable text stream, one ``t <slot> <active-bitset-hex>``
    line is written per slot (bit ``i`` is link ``i``), burn-in included.
    """
    callback = None
    if trace is not None:

        def callback(start, masks):
            trace.writelines(f"t {start + k} {m:x}\n" for k, m in enumerate(masks.tolist()))

    counts = _chain(g, v, slots, burn_in, seed, callback)
    return counts / (slots - burn_in)


def state_visits(g: ConflictGraph, v, slots: int, burn_in: int = 0, seed: int = 0) -> np.ndarray:
    """Post-burn-in visit counts indexed by state bitmask (length ``2**n``, n <= 20)."""
    if g.n > 20:
        raise ParameterError("state histograms support at most 20 links")
    hist = np.zeros(1 << g.n, dtype=np.int64)

    def callback(start, masks):
        skip = max(0, burn_in - start)
        hist[:] += np.bincount(masks[skip:], minlength=hist.size)

    _chain(g, v, slots, burn_in, seed, callback)
    return hist
