"""Max-entropy regional distributions on a chordless 4-cycle.

A 4-cycle ``a-b-c-d-a`` has seven feasible local schedules: all idle, one
active vertex (four ways), and one of the two diagonal pairs ``{a,c}``,
``{b,d}``. The entropy maximiser with prescribed single-vertex marginals is a
product form ``b(x) ∝ prod_i lam_i ** x_i`` over those schedules, and
``lam_i = b(x^i) / b(0)`` is the ratio the fugacity formula needs.

Rates passed to :func:`cycle4_maxent_oracle` and :func:`cycle4_marginals` are
in cyclic order ``(a, b, c, d)``.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import DegenerateDenominator, NoConvergence, ParameterError

__all__ = [
    "SCHEDULES",
    "cycle4_ratio_closed",
    "cycle4_ratio_homogeneous",
    "homogeneous_rate",
    "cycle4_marginals",
    "cycle4_probabilities",
    "cycle4_maxent_oracle",
]

# rows: feasible schedules of the cycle (a, b, c, d) in cyclic order
SCHEDULES = np.array(
    [
        [0, 0, 0, 0],
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [1, 0, 1, 0],
        [0, 1, 0, 1],
    ],
    dtype=float,
)


def cycle4_ratio_closed(si: float, sa: float, sb: float, sd: float) -> float:
    """Closed-form ``b*(x^i)/b*(0)`` for vertex ``i`` of a chordless 4-cycle.

    Parameters
    ----------
    si : rate of the vertex itself
    sa, sb : rates of its two cycle neighbours (order irrelevant)
    sd : rate of the diagonal (non-adjacent) vertex

    Raises
    ------
    DegenerateDenominator
        If ``(si + sa - 1) * (si + sb - 1) == 0``.
    """
    den = 2.0 * (si + sa - 1.0) * (si + sb - 1.0)
    if den == 0.0:
        raise DegenerateDenominator(f"closed form undefined at si={si}, sa={sa}, sb={sb}")
    disc = (si * (sa + sb - sd - 1.0) + sa * (sb + sd - 1.0) + (sb - 1.0) * (sd - 1.0)) ** 2 + 4.0 * si * sd * (
        si + sd - 1.0
    ) * (sa + sb - 1.0)
    if disc < 0.0:
        raise DegenerateDenominator(f"negative discriminant {disc!r}")
    poly = (
        -2.0 * si * si
        - si * (sa + sb + sd - 3.0)
        - sa * sb
        - sa * sd
        + sa
        - sb * sd
        + sb
        + sd
        - 1.0
    )
    return (math.sqrt(disc) + poly) / den


def cycle4_ratio_homogeneous(s: float) -> float:
    """Positive root ``lam`` of ``s = (lam^2 + lam) / (1 + 2 lam^2 + 4 lam)``, 0 < s < 1/2."""
    if not 0.0 < s < 0.5:
        raise ParameterError(f"homogeneous 4-cycle rate must lie in (0, 1/2), got {s}")
    return (-1.0 + 4.0 * s + math.sqrt(1.0 - 4.0 * s + 8.0 * s * s)) / (2.0 - 4.0 * s)


def homogeneous_rate(lam: float) -> float:
    """Forward map of :func:`cycle4_ratio_homogeneous`."""
    return (lam * lam + lam) / (1.0 + 2.0 * lam * lam + 4.0 * lam)


def _probabilities_from_logs(y) -> np.ndarray:
    logits = SCHEDULES @ y
    w = np.exp(logits - logits.max())
    return w / w.sum()


def cycle4_probabilities(lams) -> np.ndarray:
    """Product-form probabilities over :data:`SCHEDULES` for ratios ``lams``."""
    return _probabilities_from_logs(np.log(np.asarray(lams, dtype=float)))


def cycle4_marginals(lams) -> np.ndarray:
    return SCHEDULES.T @ cycle4_probabilities(lams)


def _log_partition(y):
    z = SCHEDULES @ y
    top = z.max()
    return top + math.log(np.exp(z - top).sum())


def _polish(y, s, steps=2):
    """Extra full Newton steps once converged, kept only while the residual shrinks."""
    best = np.max(np.abs(SCHEDULES.T @ _probabilities_from_logs(y) - s))
    for _ in range(steps):
        p = _probabilities_from_logs(y)
        m = SCHEDULES.T @ p
        hess = (SCHEDULES.T * p) @ SCHEDULES - np.outer(m, m)
        y_new = y + np.linalg.solve(hess, s - m)
        r = np.max(np.abs(SCHEDULES.T @ _probabilities_from_logs(y_new) - s))
        if not r < best:
            break
        y, best = y_new, r
    return y


_MAX_LOG_STEP = 4.0  # keeps iterates out of saturated regions with singular Hessians
_NEAR = 1e-6


def cycle4_maxent_oracle(rates, *, tol=1e-12, max_iter=200) -> np.ndarray:
    """Solve for the product-form ratios whose marginals equal ``rates``.

    Damped Newton on ``y = log(lam)`` minimising the convex dual
    ``log Z(y) - rates . y``; steps are capped in length and halved until
    the dual decreases. The start is ``lam_i = s_i / (1 - sum(s))`` clipped
    to ``[1e-6, 1e6]``.
    Returns ``lam`` (cyclic order) once ``max|marginals - rates| < tol``.

    Raises
    ------
    NoConvergence
        After ``max_iter`` iterations, which is how infeasible marginals show up.
        Rates with two cycle neighbours summing to 1 or more are rejected at
        once: such marginals lie on or outside the boundary of the cycle's
        rate region, where Newton can drive the residual down without any
        finite solution existing.
    """
    s = np.asarray(rates, dtype=float)
    if s.shape != (4,):
        raise ParameterError("expected four rates in cyclic order")
    if not np.all(np.isfinite(s)) or np.any(s <= 0) or np.any(s >= 1):
        raise NoConvergence(f"rates {s.tolist()} are outside (0, 1)")
    edge = s + np.roll(s, -1)
    if np.any(edge >= 1.0):
        k = int(np.argmax(edge))
        raise NoConvergence(f"neighbouring rates {s[k]:.6g} + {s[(k + 1) % 4]:.6g} >= 1")
    guess = s / max(1.0 - s.sum(), 1e-300)
    y = np.log(np.clip(guess, 1e-6, 1e6))

    def dual(y):
        return _log_partition(y) - s @ y

    f = dual(y)
    for _ in range(max_iter):
        p = _probabilities_from_logs(y)
        m = SCHEDULES.T @ p
        g = m - s
        if np.max(np.abs(g)) < tol:
            return np.exp(_polish(y, s))
        hess = (SCHEDULES.T * p) @ SCHEDULES - np.outer(m, m)
        try:
            step = np.linalg.solve(hess, -g)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        longest = np.max(np.abs(step))
        if longest > _MAX_LOG_STEP:
            step *= _MAX_LOG_STEP / longest
        gmax = np.max(np.abs(g))
        t = 1.0
        for _ in range(60):
            y_new = y + t * step
            f_new = dual(y_new)
            if f_new <= f + 1e-4 * t * (g @ step):
                break
            # near the optimum the dual decrease is below rounding; judge by residual
            if gmax < _NEAR and np.max(np.abs(SCHEDULES.T @ _probabilities_from_logs(y_new) - s)) < gmax:
                break
            t *= 0.5
        else:
            break
        y, f = y_new, f_new
    resid = np.max(np.abs(SCHEDULES.T @ _probabilities_from_logs(y) - s))
    raise NoConvergence(f"4-cycle marginals {s.tolist()} not matched after {max_iter} iterations (residual {resid:.3g})")
