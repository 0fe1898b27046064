"""Region collections with counting numbers for the Bethe, clique and 4-cycle methods."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .exceptions import ParameterError
from .graph import ConflictGraph, Cycle4, Region, chordless_4cycles, make_region, maximal_cliques

METHODS = ("bethe", "clique", "cycle4")

__all__ = [
    "METHODS",
    "RegionCollection",
    "ValidationReport",
    "cvm_levels",
    "cvm_closure",
    "assign_counting_numbers",
    "build_collection",
    "local_collection",
    "validate",
]


def _mask(region) -> int:
    m = 0
    for v in region:
        m |= 1 << v
    return m


def _region(mask: int) -> Region:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def cvm_levels(maximal: Iterable[Region]) -> list[list[Region]]:
    """Intersection levels ``[R_0, R_1, ...]`` generated from the maximal regions.

    Level ``l+1`` holds the nonempty intersections of a level-``l`` region with
    a different region from levels ``<= l``, minus regions already produced and
    minus regions that are proper subsets of another region of the same level.
    If the levels stop before the family is closed under pairwise intersection
    (possible only when a same-level discard is never regenerated), the missing
    intersections seed a further level so the result is always closed.
    """
    level = sorted({_mask(r) for r in maximal})
    if any(m == 0 for m in level):
        raise ParameterError("regions must be nonempty")
    seen = set(level)
    levels = [level]
    while True:
        while True:
            cur = levels[-1]
            pool = list(seen)
            cand = {a & b for a in cur for b in pool if a != b} - {0}
            cand -= seen
            cand = {r for r in cand if not any(r != q and r & q == r for q in cand)}
            if not cand:
                break
            levels.append(sorted(cand))
            seen |= cand
        everything = list(seen)
        missing = {a & b for a in everything for b in everything} - {0} - seen
        if not missing:
            break
        levels.append(sorted(missing))
        seen |= missing
    return [sorted(_region(m) for m in lv) for lv in levels]


def cvm_closure(maximal: Iterable[Region]) -> list[Region]:
    """All regions produced by :func:`cvm_levels`, sorted."""
    return sorted(r for lv in cvm_levels(maximal) for r in lv)


@dataclass(frozen=True)
class RegionCollection:
    """Regions with integer counting numbers.

    ``supersets[r]`` lists the regions strictly containing ``r``; ``cycles``
    maps each chordless 4-cycle region to its cycle structure.
    """

    n: int
    method: str
    counting: dict
    cycles: dict = field(default_factory=dict)
    supersets: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        masks = {r: _mask(r) for r in self.counting}
        sup = {
            r: tuple(sorted(q for q, mq in masks.items() if q != r and mr & mq == mr))
            for r, mr in masks.items()
        }
        object.__setattr__(self, "supersets", sup)

    @property
    def regions(self) -> list[Region]:
        return sorted(self.counting, key=lambda r: (-len(r), r))

    def __len__(self):
        return len(self.counting)

    def __contains__(self, region):
        return tuple(region) in self.counting

    def containing(self, i: int) -> list[Region]:
        return [r for r in self.regions if i in r]

    def restrict(self, i: int) -> "RegionCollection":
        """Regions containing vertex ``i`` with their global counting numbers."""
        keep = {r: c for r, c in self.counting.items() if i in r}
        return RegionCollection(self.n, self.method, keep, {r: cy for r, cy in self.cycles.items() if i in r})

    def counting_sum(self, i: int) -> int:
        return sum(c for r, c in self.counting.items() if i in r)

    def dump(self) -> str:
        """One ``region <v1,v2,...> c=<int>`` line per region."""
        return "".join(
            f"region {','.join(map(str, r))} c={self.counting[r]}\n" for r in self.regions
        )


def assign_counting_numbers(
    regions: Iterable[Region], method: str = "clique", n: int | None = None, cycles: dict | None = None
) -> RegionCollection:
    """Counting numbers ``c_r = 1 - sum of c_q over strict supersets q``.

    Regions are processed in decreasing cardinality, so superset-free regions
    receive 1.
    """
    regs = sorted({tuple(r) for r in regions}, key=lambda r: (-len(r), r))
    if n is None:
        n = 1 + max((r[-1] for r in regs), default=0)
    masks = [_mask(r) for r in regs]
    counting = {}
    for k, (r, m) in enumerate(zip(regs, masks)):
        above = sum(counting[regs[j]] for j in range(k) if masks[j] != m and masks[j] & m == m)
        counting[r] = 1 - above
    return RegionCollection(n, method, counting, dict(cycles or {}))


def _regions_for(g: ConflictGraph, method: str, cliques, cycles) -> tuple[list[Region], dict]:
    if method == "bethe":
        regs = list(g.edges())
        return regs, {}
    if method == "clique":
        return cvm_closure(cliques), {}
    if method == "cycle4":
        cyc = {c.region: c for c in cycles}
        # every cycle edge is a clique region, so each cycle's overlap with a
        # larger clique is a region too; other sub-cliques would get c = 0
        edges = {tuple(sorted((i, j))) for c in cycles for i in c.region for j in c.neighbors(i)}
        return list(cyc) + cvm_closure(cliques) + sorted(edges), cyc
    raise ParameterError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def build_collection(g: ConflictGraph, method: str) -> RegionCollection:
    """Region collection of ``g`` for ``method`` in ``{'bethe', 'clique', 'cycle4'}``.

    * ``bethe``: all edges and singletons.
    * ``clique``: maximal cliques closed under intersection, plus singletons.
    * ``cycle4``: chordless 4-cycles, the clique regions above, the edges of
      every 4-cycle, and singletons. Counting numbers are taken over the union.
    """
    cliques = maximal_cliques(g) if method in ("clique", "cycle4") else []
    cycles = chordless_4cycles(g) if method == "cycle4" else []
    regs, cyc = _regions_for(g, method, cliques, cycles)
    regs = set(regs) | {(i,) for i in range(g.n)}
    return assign_counting_numbers(regs, method, g.n, cyc)


def local_collection(g: ConflictGraph, i: int, method: str) -> RegionCollection:
    """Regions containing ``i`` built from ``i``'s neighbourhood alone.

    Uses the one-hop induced subgraph for ``bethe``/``clique`` and the two-hop
    one for ``cycle4`` (a 4-cycle's diagonal vertex is two hops away).
    """
    if not 0 <= i < g.n:
        raise ParameterError(f"vertex {i} outside [0, {g.n})")
    ball = {i} | set(g.neighbors(i))
    if method == "cycle4":
        ball |= {w for u in list(ball) for w in g.neighbors(u)}
    sub, ids = g.induced_subgraph(ball)
    li = ids.index(i)
    if method == "bethe":
        regs = [(li, j) if li < j else (j, li) for j in sub.neighbors(li)]
        cyc = {}
    else:
        cliques = [c for c in maximal_cliques(sub) if li in c]
        cycles = [c for c in chordless_4cycles(sub) if li in c.region] if method == "cycle4" else []
        regs, cyc = _regions_for(sub, method, cliques, cycles)
    regs = {r for r in regs if li in r} | {(li,)}
    local = assign_counting_numbers(regs, method, sub.n, cyc)

    def back(r):
        return tuple(sorted(ids[v] for v in r))

    def back_cycle(c):
        return Cycle4(tuple(sorted(tuple(sorted((ids[a], ids[b]))) for a, b in c.diagonals)))

    return RegionCollection(
        g.n,
        method,
        {back(r): c for r, c in local.counting.items()},
        {back(r): back_cycle(c) for r, c in local.cycles.items()},
    )


@dataclass
class ValidationReport:
    counting_sums: dict
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate(c: RegionCollection, g: ConflictGraph) -> ValidationReport:
    """Check coverage, per-vertex counting sums, singletons and (Bethe/clique) the Kikuchi condition."""
    violations = []
    for r in c.counting:
        try:
            make_region(r, g.n)
        except ParameterError as exc:
            violations.append(f"malformed region {r}: {exc}")
    covered = set()
    for r in c.counting:
        covered.update(r)
    sums = {}
    for i in range(g.n):
        if i not in covered:
            violations.append(f"coverage: vertex {i} is in no region")
        if (i,) not in c.counting:
            violations.append(f"singleton: region ({i},) missing")
        sums[i] = c.counting_sum(i)
        if sums[i] != 1:
            violations.append(f"counting-sum: vertex {i} sums to {sums[i]}")
    if c.method in ("bethe", "clique"):
        for r in c.counting:
            if not g.is_clique(r):
                violations.append(f"region {r} is not a clique")
            total = c.counting[r] + sum(c.counting[q] for q in c.supersets[r])
            if total != 1:
                violations.append(f"kikuchi: region {r} superset sum is {total}")
    for r, cyc in c.cycles.items():
        if cyc.region != r:
            violations.append(f"cycle structure for {r} does not match its region")
    return ValidationReport(sums, violations)
