"""Exact maximum-independent-set oracle.

Bitmask branch-and-bound with component splitting and closed forms for
paths/cycles.  Deterministic: ties in the optimum are broken toward the
lexicographically smallest vertex set.  A node budget bounds worst-case
latency; it is far from reachable on the small windows reductions use.
"""

from __future__ import annotations

import os
import sys
from typing import Iterable, Sequence

sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))

DEFAULT_BUDGET = 10_000_000
_BUDGET_ENV = "PIG_ORACLE_BUDGET"


class OracleBudgetExceeded(RuntimeError):
    """Branch-node budget ran out; caller should shrink the window."""


def default_budget() -> int:
    raw = os.environ.get(_BUDGET_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_BUDGET


class _Solver:
    def __init__(self, ids: Sequence[int], nbr: dict[int, Iterable[int]], budget: int):
        self.ids = list(ids)
        index = {v: i for i, v in enumerate(self.ids)}
        self.masks = [0] * len(self.ids)
        for v, ns in nbr.items():
            i = index[v]
            acc = 0
            for u in ns:
                j = index.get(u)
                if j is not None and j != i:
                    acc |= 1 << j
            self.masks[i] = acc
        self.budget = budget
        self.nodes = 0

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise OracleBudgetExceeded(f"exceeded {self.budget} branch nodes")

    def alpha(self, pool: int) -> int:
        self._tick()
        if pool == 0:
            return 0
        masks = self.masks
        # peel simplicial-ish easy vertices: degree 0 or 1 in the pool
        total = 0
        changed = True
        while changed and pool:
            changed = False
            p = pool
            while p:
                low = p & -p
                p ^= low
                if not pool & low:
                    continue
                i = low.bit_length() - 1
                nb = masks[i] & pool
                if nb == 0:
                    pool ^= low
                    total += 1
                    changed = True
                elif nb & (nb - 1) == 0:
                    pool &= ~(low | nb)
                    total += 1
                    changed = True
        if pool == 0:
            return total
        # split off one connected component
        low = pool & -pool
        comp = low
        frontier = low
        while frontier:
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                f ^= b
                nxt |= masks[b.bit_length() - 1] & pool
            nxt &= ~comp
            comp |= nxt
            frontier = nxt
        if comp != pool:
            return total + self.alpha(comp) + self.alpha(pool ^ comp)
        # connected, min degree >= 2: path/cycle closed form if max degree <= 2
        best_i, best_d = -1, -1
        edges2 = 0
        p = pool
        while p:
            b = p & -p
            p ^= b
            i = b.bit_length() - 1
            d = (masks[i] & pool).bit_count()
            edges2 += d
            if d > best_d:
                best_d = d
                best_i = i
        k = pool.bit_count()
        if best_d <= 2:
            # connected with degrees <= 2 and min degree 2 here: a cycle
            return total + k // 2
        v = 1 << best_i
        take = 1 + self.alpha(pool & ~(v | masks[best_i]))
        skip = self.alpha(pool ^ v)
        return total + max(take, skip)

    def lex_smallest_optimum(self, pool: int) -> list[int]:
        target = self.alpha(pool)
        out: list[int] = []
        for i in range(len(self.ids)):
            bit = 1 << i
            if not pool & bit:
                continue
            rest = pool & ~(bit | self.masks[i])
            if self.alpha(rest) == target - 1:
                out.append(self.ids[i])
                pool = rest
                target -= 1
                if target == 0:
                    break
            else:
                pool ^= bit
        return out


def _solver(g, vertices: Iterable[int] | None, budget: int | None) -> _Solver:
    ids = sorted(vertices) if vertices is not None else list(g.vertices)
    nbr = {v: g.neighbors(v) for v in ids}
    return _Solver(ids, nbr, budget if budget is not None else default_budget())


def alpha(g, vertices: Iterable[int] | None = None, budget: int | None = None) -> int:
    """Independence number of g (or of the induced subgraph on vertices)."""
    s = _solver(g, vertices, budget)
    return s.alpha((1 << len(s.ids)) - 1)


def mis_exact(
    g, vertices: Iterable[int] | None = None, budget: int | None = None
) -> tuple[int, ...]:
    """A maximum independent set; lexicographically smallest optimum."""
    s = _solver(g, vertices, budget)
    return tuple(s.lex_smallest_optimum((1 << len(s.ids)) - 1))


def alpha_at_least(
    g, k: int, vertices: Iterable[int] | None = None, budget: int | None = None
) -> bool:
    """True iff the (sub)graph has an independent set of size k."""
    if k <= 0:
        return True
    s = _solver(g, vertices, budget)
    pool = (1 << len(s.ids)) - 1
    if pool.bit_count() < k:
        return False
    return s.alpha(pool) >= k


def verify_independent(g, s: Iterable[int]) -> bool:
    vs = list(s)
    seen = set()
    for v in vs:
        if not g.has_vertex(v):
            raise KeyError(f"unknown vertex {v}")
        if v in seen:
            return False
        seen.add(v)
    for v in vs:
        if g.neighbors(v) & seen:
            return False
    return True
