"""Input validation shared by the functional API and the estimators."""

from __future__ import annotations

import numpy as np

from .exceptions import ParameterError


def check_graph(graph):
    """Accept a ``ConflictGraph`` or a square symmetric adjacency matrix."""
    from .graph import ConflictGraph

    if isinstance(graph, ConflictGraph):
        return graph
    try:
        return ConflictGraph.from_adjacency_matrix(graph)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"expected a ConflictGraph or adjacency matrix: {exc}") from None


def check_rates(s, n: int, *, allow_2d: bool = False) -> np.ndarray:
    """Service rates as a float array of length ``n`` with entries in (0, 1)."""
    arr = np.array(s, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n, float(arr))
    if arr.ndim not in ((1, 2) if allow_2d else (1,)):
        raise ParameterError(f"rates must be a length-{n} vector, got shape {arr.shape}")
    if arr.shape[-1] != n:
        raise ParameterError(f"expected {n} rates, got {arr.shape[-1]}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError("rates must be finite")
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ParameterError("every service rate must lie strictly between 0 and 1")
    return arr


def check_fugacities(v, n: int, *, allow_2d: bool = False) -> np.ndarray:
    arr = np.array(v, dtype=float)
    if arr.ndim not in ((1, 2) if allow_2d else (1,)):
        raise ParameterError(f"fugacities must be a length-{n} vector, got shape {arr.shape}")
    if arr.shape[-1] != n:
        raise ParameterError(f"expected {n} fugacities, got {arr.shape[-1]}")
    if np.any(np.isnan(arr)) or np.any(arr == np.inf):
        raise ParameterError("log-fugacities must not be NaN or +inf")
    return arr
