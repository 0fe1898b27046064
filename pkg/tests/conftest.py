import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from csma_fugacity.graph import ConflictGraph, chordal6, complete, fig8, grid, ring


def naive_independent_sets(g):
    """Every subset of vertices filtered for independence (2^n scan)."""
    out = []
    for mask in range(1 << g.n):
        verts = [i for i in range(g.n) if (mask >> i) & 1]
        if all(not g.has_edge(a, b) for a, b in itertools.combinations(verts, 2)):
            out.append(mask)
    return out


def naive_marginals(g, v):
    sets = naive_independent_sets(g)
    w = np.array([np.exp(sum(v[i] for i in range(g.n) if (m >> i) & 1)) for m in sets])
    p = w / w.sum()
    return np.array([p[[(m >> i) & 1 == 1 for m in sets]].sum() for i in range(g.n)]), np.log(w.sum())


@st.composite
def graphs(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return ConflictGraph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


NAMED = {
    "chordal6": chordal6(),
    "fig8": fig8(),
    "complete5": complete(5),
    "grid3x3": grid(3, 3),
    "grid4x4": grid(4, 4),
    "ring5": ring(5),
    "ring6": ring(6),
}


@pytest.fixture(params=sorted(NAMED))
def named_graph(request):
    return NAMED[request.param]
