"""Approximation-error experiments: load sweeps and random-topology averages."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exact import exact_marginals, max_symmetric_rate
from .exceptions import InfeasibleRates, ParameterError
from .fugacity import raf
from .graph import ConflictGraph, random_geometric
from .regions import METHODS, build_collection
from .sampler import simulate

CSV_HEADER = ("topology", "n", "seed", "method", "load", "error_abs", "error_pct", "status")

__all__ = [
    "ErrorRow",
    "ExactOracle",
    "SamplerOracle",
    "approx_error",
    "sweep",
    "random_rows",
    "random_average",
    "rows_to_csv",
    "CSV_HEADER",
]


@dataclass(frozen=True)
class ErrorRow:
    topology: str
    n: int
    seed: int | None
    method: str
    load: float
    error_abs: float
    error_pct: float
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


class ExactOracle:
    """Achieved rates from exact enumeration."""

    name = "exact"

    def __call__(self, g, v):
        return exact_marginals(g, v).marginals


@dataclass(frozen=True)
class SamplerOracle:
    """Achieved rates estimated by running the CSMA chain."""

    slots: int = 1_000_000
    burn_in: int = 10_000
    seed: int = 0
    name = "sampler"

    def __call__(self, g, v):
        return simulate(g, v, self.slots, self.burn_in, self.seed)


def approx_error(target, achieved) -> float:
    """Largest absolute gap between target and achieved service rates."""
    t = np.asarray(target, dtype=float)
    a = np.asarray(achieved, dtype=float)
    if t.shape != a.shape:
        raise ParameterError(f"length mismatch: {t.shape} vs {a.shape}")
    return float(np.max(np.abs(t - a))) if t.size else 0.0


def _oracle(oracle):
    if oracle is None or oracle == "exact":
        return ExactOracle()
    if oracle == "sampler":
        return SamplerOracle()
    if callable(oracle):
        return oracle
    raise ParameterError(f"unknown oracle {oracle!r}")


def sweep(
    g: ConflictGraph,
    methods: Sequence[str] = METHODS,
    loads: Iterable[float] = (0.3, 0.5, 0.7, 0.9),
    oracle="exact",
    topology: str = "graph",
    seed: int | None = None,
) -> list[ErrorRow]:
    """Error of each method at each load ``s = load * max_symmetric_rate(g)``.

    Methods that cannot produce fugacities at a load (a clique sum reaching 1,
    an infeasible 4-cycle) yield a row with status ``infeasible`` and NaN errors.
    """
    run = _oracle(oracle)
    loads = [float(x) for x in loads]
    for load in loads:
        if not 0.0 < load <= 1.0:
            raise ParameterError(f"load {load} outside (0, 1]")
    for m in methods:
        if m not in METHODS:
            raise ParameterError(f"unknown method {m!r}")
    peak = max_symmetric_rate(g)
    rows = []
    for method in methods:
        collection = None if method == "bethe" else build_collection(g, method)
        for load in loads:
            target = np.full(g.n, load * peak)
            try:
                v = raf(g, target, method, collection)
            except (InfeasibleRates, ParameterError):
                rows.append(ErrorRow(topology, g.n, seed, method, load, math.nan, math.nan, "infeasible"))
                continue
            err = approx_error(target, run(g, v))
            rows.append(ErrorRow(topology, g.n, seed, method, load, err, 100.0 * err / target.max()))
    rows.sort(key=lambda r: (r.topology, r.method, r.load))
    return rows


def random_rows(
    count: int,
    n: int,
    load: float,
    methods: Sequence[str] = METHODS,
    base_seed: int = 0,
    side: float = 3.0,
    radius: float = 0.8,
    oracle="exact",
) -> list[ErrorRow]:
    """One row per (random geometric graph, method); seeds ``base_seed .. base_seed+count-1``."""
    if count < 1:
        raise ParameterError("count must be >= 1")
    rows = []
    for seed in range(base_seed, base_seed + count):
        g = random_geometric(n, side, radius, seed)
        rows += sweep(g, methods, [load], oracle, topology=f"random_geometric_{seed:04d}", seed=seed)
    rows.sort(key=lambda r: (r.topology, r.method, r.load))
    return rows


def random_average(count, n, load, method, base_seed=0, side=3.0, radius=0.8, oracle="exact") -> float:
    """Mean ``error_pct`` of ``method`` over ``count`` random geometric graphs (feasible rows only)."""
    rows = random_rows(count, n, load, [method], base_seed, side, radius, oracle)
    ok = [r.error_pct for r in rows if r.ok]
    return float(np.mean(ok)) if ok else math.nan


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "nan" if math.isnan(x) else f"{x:.10g}"
    return str(x)


def rows_to_csv(rows: Iterable[ErrorRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_fmt(getattr(r, f)) for f in CSV_HEADER])
    return buf.getvalue()
