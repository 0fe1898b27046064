"""Dense two-phase tableau simplex with Bland's rule.

Only what the fractional-colouring LP needs: ``min c.x`` subject to
``A x >= b``, ``x >= 0`` with ``b >= 0``.
"""

from __future__ import annotations

import numpy as np

_EPS = 1e-11


class LPError(ArithmeticError):
    pass


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r] -= T[r, col] * T[row]
    basis[row] = col


def _run(T, basis, allowed, max_iter):
    """Minimise the objective stored in the last row; columns in ``allowed`` may enter."""
    m = T.shape[0] - 1
    for _ in range(max_iter):
        costs = T[-1, :-1]
        entering = next((j for j in allowed if costs[j] < -_EPS), None)
        if entering is None:
            return
        col = T[:m, entering]
        best, leave = None, None
        for r in range(m):
            if col[r] > _EPS:
                ratio = T[r, -1] / col[r]
                if best is None or ratio < best - _EPS or (abs(ratio - best) <= _EPS and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            raise LPError("linear program is unbounded")
        _pivot(T, basis, leave, entering)
    raise LPError("simplex iteration limit reached")


def minimize_ge(c, A, b, max_iter=100_000):
    """Solve ``min c.x  s.t.  A x >= b, x >= 0`` (``b >= 0``); returns ``(value, x)``."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, k = A.shape
    if np.any(b < 0):
        raise LPError("right-hand side must be nonnegative")
    # columns: x (k) | surplus (m) | artificial (m) | rhs
    T = np.zeros((m + 1, k + 2 * m + 1))
    T[:m, :k] = A
    T[:m, k : k + m] = -np.eye(m)
    T[:m, k + m : k + 2 * m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(k + m, k + 2 * m))

    # phase 1: minimise the sum of artificials
    T[-1, :k] = -A.sum(axis=0)
    T[-1, k : k + m] = 1.0
    T[-1, -1] = -b.sum()
    _run(T, basis, range(k + m), max_iter)
    if -T[-1, -1] > 1e-9:
        raise LPError("linear program is infeasible")
    keep = []
    for r in range(m):
        if basis[r] >= k + m:
            col = next((j for j in range(k + m) if abs(T[r, j]) > _EPS), None)
            if col is None:
                continue  # redundant constraint
            _pivot(T, basis, r, col)
        keep.append(r)
    T = T[keep + [m]]
    basis = [basis[r] for r in keep]

    # phase 2: artificial columns may no longer enter
    cost = np.zeros(T.shape[1] - 1)
    cost[:k] = c
    T[-1, :-1] = cost
    T[-1, -1] = 0.0
    for r, j in enumerate(basis):
        if T[-1, j] != 0.0:
            T[-1] -= T[-1, j] * T[r]
    _run(T, basis, range(k + m), max_iter)
    x = np.zeros(k)
    for r, j in enumerate(basis):
        if j < k:
            x[j] = T[r, -1]
    return float(c @ x), x
