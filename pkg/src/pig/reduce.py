"""Certified reductions: plans, certification, application and lifting.

A reduction plan names a vertex set S and pairwise disjoint connected parts
S_1..S_t inside it (t < |S|).  Applying it contracts each part to a fresh
vertex and deletes the rest of S; a solution of the reduced graph lifts back
by swapping selected part-vertices for an oracle-optimal completion inside
the local window.  Certification checks, for every subset X of pairwise
nonadjacent parts, that the window I(S) ∪ ∪_{i∈X} S_i holds an independent
set of size |X| + ceil(c(|S|-t)); that inequality is exactly what makes the
lift meet its size contract no matter which part-vertices the recursion
returns.  Plans are never applied uncertified.

Also here: the separating-triangle split with its residue arithmetic and
candidate recombination recipes, and the low-degree reductions that make
ratio 1/5 total on all planar graphs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import mis
from .configs import ConfigurationMatch, joint_neighborhood
from .graph import EmbeddedGraph, GraphError


class PlanRejected(GraphError):
    """A plan failed validation or certification; never applied."""


class LiftError(RuntimeError):
    """A certified lift failed its guarantee: indicates an engine bug."""


@dataclass(frozen=True, order=True)
class Ratio:
    """Target independence ratio a/b in lowest terms, 0 < a/b < 1."""

    a: int
    b: int

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0 or self.a >= self.b:
            raise ValueError(f"ratio must be in (0,1): {self.a}/{self.b}")
        if math.gcd(self.a, self.b) != 1:
            raise ValueError(f"ratio not in lowest terms: {self.a}/{self.b}")

    @classmethod
    def parse(cls, text: str) -> "Ratio":
        try:
            a, b = text.split("/")
            return cls(int(a), int(b))
        except ValueError:
            raise ValueError(f"cannot parse ratio {text!r}") from None

    def ceil_mul(self, n: int) -> int:
        """ceil(a*n/b)."""
        return -((-self.a * n) // self.b)

    def holds(self, j: int, x: int) -> bool:
        """j >= (a/b) * x, exactly."""
        return self.b * j >= self.a * x

    def __str__(self) -> str:
        return f"{self.a}/{self.b}"


ONE_FIFTH = Ratio(1, 5)
TWO_NINTHS = Ratio(2, 9)
THREE_THIRTEENTHS = Ratio(3, 13)
PRESETS = {str(r): r for r in (ONE_FIFTH, TWO_NINTHS, THREE_THIRTEENTHS)}


def neighborhood_floor(j: int, c: Ratio) -> int:
    """Least joint-neighborhood size a non-maximal independent j-set can
    have in a graph with no reduction at ratio c: floor((b-a)/a * j) + 2."""
    if j < 1:
        raise ValueError("set size must be >= 1")
    return (c.b - c.a) * j // c.a + 2


@dataclass(frozen=True)
class ReductionPlan:
    """One constructive reduction: S, its parts, and bookkeeping."""

    kind: str  # delete-closed-nbhd | anchored-pairs | grown-parts
    s: frozenset[int]
    parts: tuple[frozenset[int], ...]
    ratio: Ratio
    provenance: str
    j: tuple[int, ...] = ()
    k: int | None = None

    @property
    def t(self) -> int:
        return len(self.parts)

    def need(self) -> int:
        return self.ratio.ceil_mul(len(self.s) - self.t)

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "provenance": self.provenance,
            "S": sorted(self.s),
            "parts": [sorted(p) for p in self.parts],
            "j": list(self.j),
            "k": self.k,
            "need": self.need(),
        }


@dataclass(frozen=True)
class CertifiedPlan:
    plan: ReductionPlan
    interior: frozenset[int]
    need: int
    checked: tuple[tuple[tuple[int, ...], int], ...]  # (X, alpha found)


@dataclass(frozen=True)
class LiftContext:
    graph: EmbeddedGraph
    cert: CertifiedPlan
    w_ids: tuple[int, ...]  # contracted vertex per part

    @property
    def plan(self) -> ReductionPlan:
        return self.cert.plan


def interior(g: EmbeddedGraph, s: frozenset[int]) -> frozenset[int]:
    return frozenset(v for v in s if g.neighbors(v) <= s)


def _parts_adjacent(g: EmbeddedGraph, p1: frozenset[int], p2: frozenset[int]) -> bool:
    small, big = (p1, p2) if len(p1) <= len(p2) else (p2, p1)
    return any(g.neighbors(v) & big for v in small)


def _admissible_subsets(
    g: EmbeddedGraph, parts: Sequence[frozenset[int]]
) -> Iterator[tuple[int, ...]]:
    t = len(parts)
    adj = [
        [ _parts_adjacent(g, parts[i], parts[j]) for j in range(t) ]
        for i in range(t)
    ]
    for mask in range(1 << t):
        chosen = [i for i in range(t) if mask >> i & 1]
        if all(
            not adj[a][b]
            for x, a in enumerate(chosen)
            for b in chosen[x + 1:]
        ):
            yield tuple(chosen)


def certify_plan(
    g: EmbeddedGraph, plan: ReductionPlan, budget: int | None = None
) -> CertifiedPlan:
    """Validate plan structure, then oracle-check every admissible window.

    Raises PlanRejected when the plan is malformed or under-certified; a
    certified plan's lift is guaranteed for every possible recursion
    outcome.
    """
    s = plan.s
    if not s or not all(g.has_vertex(v) for v in s):
        raise PlanRejected("S empty or referencing dead vertices")
    if plan.t >= len(s):
        raise PlanRejected("need t < |S|")
    covered: set[int] = set()
    for p in plan.parts:
        if not p or not p <= s:
            raise PlanRejected("part empty or outside S")
        if covered & p:
            raise PlanRejected("parts overlap")
        covered |= p
        if len(g.subgraph(p).components()) != 1:
            raise PlanRejected(f"part {sorted(p)} not connected")
    if plan.kind == "anchored-pairs":
        if not plan.j:
            raise PlanRejected("anchored plan missing its independent set")
        others = {
            y: g.neighbors(y) for y in plan.j
        }
        for p in plan.parts:
            anchors = [x for x in p if x in plan.j]
            if len(anchors) != 1 or len(p) != 3:
                raise PlanRejected("anchored part must be {x, u, v} with x in J")
            x = anchors[0]
            u, v = sorted(p - {x})
            if g.adjacent(u, v):
                raise PlanRejected("anchored pair not independent")
            for y in plan.j:
                if y != x and (u in others[y] or v in others[y]):
                    raise PlanRejected("anchored pair not private")
    inside = interior(g, s)
    need = plan.need()
    n = g.n
    bound_before = plan.ratio.ceil_mul(n)
    bound_after = plan.ratio.ceil_mul(n - len(s) + plan.t)
    if bound_after + need < bound_before:
        raise PlanRejected("size ledger would not close")  # unreachable
    checked = []
    for chosen in _admissible_subsets(g, plan.parts):
        window = set(inside)
        for i in chosen:
            window |= plan.parts[i]
        want = len(chosen) + need
        if len(window) < want:
            raise PlanRejected(
                f"window for X={chosen} too small for alpha >= {want}"
            )
        if not mis.alpha_at_least(g, want, vertices=window, budget=budget):
            raise PlanRejected(
                f"alpha(window) < {want} for X={chosen}"
            )
        checked.append((chosen, want))
    return CertifiedPlan(plan, inside, need, tuple(checked))


def apply_plan(
    g: EmbeddedGraph, cert: CertifiedPlan
) -> tuple[EmbeddedGraph, LiftContext]:
    plan = cert.plan
    cur = g
    w_ids = []
    for part in plan.parts:
        cur, w = cur.contract_set(part)
        w_ids.append(w)
    rest = plan.s - {v for p in plan.parts for v in p}
    if rest:
        cur = cur.delete_set(rest)
    if cur.n != g.n - len(plan.s) + plan.t:
        raise LiftError("reduced size mismatch")
    return cur, LiftContext(g, cert, tuple(w_ids))


def lift(
    reduced_set: Iterable[int], ctx: LiftContext, budget: int | None = None
) -> frozenset[int]:
    """Transform a solution of the reduced graph into one of the original.

    Selected part-vertices W are swapped out for an exact optimum T of the
    window I(S) ∪ (parts chosen by W); certification made |T| large enough
    that the result meets ceil(c*n).
    """
    plan = ctx.plan
    g = ctx.graph
    red = frozenset(reduced_set)
    n_red = g.n - len(plan.s) + plan.t
    if len(red) < plan.ratio.ceil_mul(n_red):
        raise LiftError("reduced solution below its own bound")
    w_set = frozenset(ctx.w_ids) & red
    chosen = [i for i, w in enumerate(ctx.w_ids) if w in w_set]
    window = set(ctx.cert.interior)
    for i in chosen:
        window |= plan.parts[i]
    t_set = frozenset(mis.mis_exact(g, vertices=window, budget=budget))
    if len(t_set) < len(chosen) + ctx.cert.need:
        raise LiftError("window optimum below certified size")
    out = (red - w_set) | t_set
    if not mis.verify_independent(g, out):
        raise LiftError("lifted set not independent")
    if len(out) < plan.ratio.ceil_mul(g.n):
        raise LiftError("lifted set below the size contract")
    return frozenset(out)


# -- low-degree pipeline -------------------------------------------------------


def find_low_degree_plan(g: EmbeddedGraph, c: Ratio) -> ReductionPlan | None:
    """Reduction at a minimum-degree vertex, when the arithmetic allows it.

    Clique neighborhoods are deleted whole (the vertex survives in the
    window); otherwise the vertex is contracted with two nonadjacent
    neighbors.  At 1/5 this covers every planar graph; at 3/13 it covers
    degrees at most 4.
    """
    d_pair = c.b // c.a  # max degree with b >= a*d
    for v in sorted(g.vertices, key=lambda v: (g.degree(v), v)):
        d = g.degree(v)
        if d > d_pair:
            return None
        ns = sorted(g.neighbors(v))
        pair = None
        for i, u in enumerate(ns):
            for w in ns[i + 1:]:
                if not g.adjacent(u, w):
                    pair = (u, w)
                    break
            if pair:
                break
        if pair is None:
            # clique neighborhood: delete N[v], keep v in the window
            if c.ceil_mul(d + 1) > 1:
                continue
            return ReductionPlan(
                kind="delete-closed-nbhd",
                s=frozenset(ns) | {v},
                parts=(),
                ratio=c,
                provenance="low-degree-clique",
                j=(v,),
                k=None,
            )
        return ReductionPlan(
            kind="anchored-pairs",
            s=frozenset(ns) | {v},
            parts=(frozenset((v,) + pair),),
            ratio=c,
            provenance="low-degree",
            j=(v,),
            k=0,
        )
    return None


# -- planner: reduction candidates from matches --------------------------------


def _private_pairs(
    g: EmbeddedGraph, j: Sequence[int], x: int, cap: int = 6
) -> list[tuple[int, int]]:
    """Independent 2-sets in N(x) avoiding the neighborhoods of J \\ {x}."""
    pool = set(g.neighbors(x))
    for y in j:
        if y != x:
            pool -= g.neighbors(y)
    pool = sorted(pool)
    out = []
    for i, u in enumerate(pool):
        for v in pool[i + 1:]:
            if not g.adjacent(u, v):
                out.append((u, v))
                if len(out) >= cap:
                    return out
    return out


def _absorb(
    g: EmbeddedGraph, s: frozenset[int], seeds: list[set[int]]
) -> list[set[int]]:
    """Grow disjoint connected seeds inside S until nothing else attaches.
    Earlier seeds grow to exhaustion first."""
    taken = set().union(*seeds)
    rest = set(s) - taken
    for part in seeds:
        grew = True
        while grew:
            grew = False
            for v in sorted(rest):
                if g.neighbors(v) & part:
                    part.add(v)
                    rest.discard(v)
                    grew = True
    return seeds


def candidate_plans(
    g: EmbeddedGraph, match: ConfigurationMatch, c: Ratio
) -> Iterator[ReductionPlan]:
    """Reduction plans for a match, best-founded first.

    Plans around an independent set J: slack-k contractions of {x, u_x, v_x}
    parts built from private pairs, then grown two- and three-part covers of
    S = J ∪ N(J), then whole-S contraction or deletion.  Certification is
    the judge of every one of them.
    """
    if match.j:
        yield from plans_for_independent_set(g, tuple(match.j), c, match.kind, match.preferred_k)


def plans_for_independent_set(
    g: EmbeddedGraph,
    j: tuple[int, ...],
    c: Ratio,
    provenance: str,
    preferred_k: int = 0,
) -> Iterator[ReductionPlan]:
    nj = joint_neighborhood(g, j)
    s = frozenset(j) | nj
    pairs = {x: _private_pairs(g, j, x) for x in j}
    with_pairs = [x for x in j if pairs[x]]

    k_values = sorted(range(len(j)), key=lambda k: (k != preferred_k, k))
    for k in k_values:
        t = len(j) - k
        if t <= 0 or t > len(with_pairs):
            continue
        if not c.holds(len(j), len(nj) + k):
            continue
        for members in itertools.combinations(with_pairs, t):
            parts = tuple(
                frozenset((x,) + pairs[x][0]) for x in members
            )
            yield ReductionPlan(
                kind="anchored-pairs",
                s=s,
                parts=parts,
                ratio=c,
                provenance=f"{provenance}:k={k}",
                j=j,
                k=k,
            )

    if len(j) == 3:
        # grown two-part covers: one member with its pair, the others bulked
        if c.holds(len(j), len(nj) + 1):
            for alone in j:
                if not pairs[alone]:
                    continue
                others = [x for x in j if x != alone]
                seed_big = set(others)
                seed_small = {alone} | set(pairs[alone][0])
                if seed_big & seed_small:
                    continue
                big, small = _absorb(g, s, [seed_big, seed_small])
                if any(
                    len(g.subgraph(p).components()) != 1 for p in (big, small)
                ):
                    continue
                yield ReductionPlan(
                    kind="grown-parts",
                    s=s,
                    parts=(frozenset(small), frozenset(big)),
                    ratio=c,
                    provenance=f"{provenance}:cover2",
                    j=j,
                    k=1,
                )
        # grown three-part covers: one bare member, two with pairs
        if c.holds(len(j), len(nj)):
            for bare in j:
                others = [x for x in j if x != bare]
                if not all(pairs[x] for x in others):
                    continue
                seeds = [
                    {bare},
                    {others[0]} | set(pairs[others[0]][0]),
                    {others[1]} | set(pairs[others[1]][0]),
                ]
                if seeds[0] & seeds[1] or seeds[0] & seeds[2] or seeds[1] & seeds[2]:
                    continue
                grown = _absorb(g, s, seeds)
                if any(
                    len(g.subgraph(p).components()) != 1 for p in grown
                ):
                    continue
                yield ReductionPlan(
                    kind="grown-parts",
                    s=s,
                    parts=tuple(frozenset(p) for p in grown),
                    ratio=c,
                    provenance=f"{provenance}:cover3",
                    j=j,
                    k=0,
                )

    # whole-S contraction and plain deletion, as last resorts
    if len(s) >= 2 and len(g.subgraph(s).components()) == 1:
        yield ReductionPlan(
            kind="grown-parts",
            s=s,
            parts=(s,),
            ratio=c,
            provenance=f"{provenance}:contract-all",
            j=j,
            k=None,
        )
    yield ReductionPlan(
        kind="delete-closed-nbhd",
        s=s,
        parts=(),
        ratio=c,
        provenance=f"{provenance}:delete-all",
        j=j,
        k=None,
    )


def plan_from_match(
    g: EmbeddedGraph, match: ConfigurationMatch, c: Ratio
) -> ReductionPlan:
    """First structurally valid candidate plan for a match."""
    for plan in candidate_plans(g, match, c):
        return plan
    raise PlanRejected(f"match {match.kind} yields no plan")


# -- separating-triangle split ---------------------------------------------------


@dataclass(frozen=True)
class SplitPlan:
    """Decomposition along a separating triangle plus its size arithmetic.

    ``guarantees`` maps each recombination strategy to the independent-set size
    it promises from bound-respecting sub-solutions; at least one strategy
    always reaches ceil(c*n).
    """

    triangle: tuple[int, int, int]
    side1: frozenset[int]  # includes the triangle
    side2: frozenset[int]
    ratio: Ratio
    n: int
    target: int
    residues: tuple[tuple[int, ...], tuple[int, ...]]  # k_i^j for j=0..3
    guarantees: tuple[tuple[str, int], ...]
    strategy: str  # chosen: fewest sub-solves among those meeting the target

    def sizes(self) -> tuple[int, int]:
        return len(self.side1), len(self.side2)


def split_guarantees(n1: int, n2: int, c: Ratio) -> dict[str, int]:
    """Guaranteed combined sizes for the recombination strategies, where
    n1, n2 are the private side sizes (sides minus the triangle)."""
    return {
        "delete-both": c.ceil_mul(n1) + c.ceil_mul(n2),
        "hub1": c.ceil_mul(n1 + 1) + c.ceil_mul(n2 + 3) - 1,
        "hub2": c.ceil_mul(n2 + 1) + c.ceil_mul(n1 + 3) - 1,
        "edge-pairs": c.ceil_mul(n1 + 2) + c.ceil_mul(n2 + 2) - 1,
    }


def split_plan(g: EmbeddedGraph, triangle: Sequence[int], c: Ratio) -> SplitPlan:
    tri = tuple(sorted(triangle))
    if len(tri) != 3 or not all(
        g.adjacent(a, b) for a, b in ((tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2]))
    ):
        raise PlanRejected(f"{tri} is not a triangle")
    rest = g.delete_set(tri)
    comps = rest.components()
    if len(comps) < 2:
        raise PlanRejected(f"triangle {tri} does not separate")
    side1 = frozenset(comps[0]) | set(tri)
    side2 = frozenset(v for comp in comps[1:] for v in comp) | set(tri)
    n1, n2 = len(side1) - 3, len(side2) - 3
    target = c.ceil_mul(g.n)
    gs = split_guarantees(n1, n2, c)
    order = ("delete-both", "hub1", "hub2", "edge-pairs")
    strategy = next((name for name in order if gs[name] >= target), None)
    if strategy is None:
        raise PlanRejected("no split strategy reaches the bound")  # unreachable
    residues = tuple(
        tuple(((c.a * (ni + j) - 1) % c.b) + 1 for j in range(4))
        for ni in (n1, n2)
    )
    return SplitPlan(
        triangle=tri,
        side1=side1,
        side2=side2,
        ratio=c,
        n=g.n,
        target=target,
        residues=residues,
        guarantees=tuple(sorted(gs.items())),
        strategy=strategy,
    )


@dataclass(frozen=True)
class SplitSub:
    """One sub-instance of a split: tag, graph, and the id of the vertex a
    contraction introduced (if any)."""

    tag: str
    graph: EmbeddedGraph
    merged: int | None
    floor: int  # the sub-solution size the strategy arithmetic relies on


def split_subproblems(g: EmbeddedGraph, sp: SplitPlan) -> tuple[SplitSub, ...]:
    tri = frozenset(sp.triangle)
    c = sp.ratio
    a1 = g.subgraph(sp.side1)
    a2 = g.subgraph(sp.side2)
    n1, n2 = len(sp.side1) - 3, len(sp.side2) - 3
    subs: list[SplitSub] = []
    if sp.strategy == "delete-both":
        subs.append(SplitSub("del1", a1.delete_set(tri), None, c.ceil_mul(n1)))
        subs.append(SplitSub("del2", a2.delete_set(tri), None, c.ceil_mul(n2)))
    elif sp.strategy in ("hub1", "hub2"):
        ctr_side, full_side = (a1, a2) if sp.strategy == "hub1" else (a2, a1)
        nc = n1 if sp.strategy == "hub1" else n2
        nf = n2 if sp.strategy == "hub1" else n1
        ctr, u = ctr_side.contract_set(tri)
        subs.append(SplitSub("ctr", ctr, u, c.ceil_mul(nc + 1)))
        subs.append(SplitSub("full", full_side, None, c.ceil_mul(nf + 3)))
    else:
        x1, x2, x3 = sp.triangle
        for side_idx, side in ((1, a1), (2, a2)):
            ni = n1 if side_idx == 1 else n2
            for t, xt in ((2, x2), (3, x3)):
                sub, m = side.contract_set({x1, xt})
                subs.append(
                    SplitSub(f"e{side_idx}t{t}", sub, m, c.ceil_mul(ni + 2))
                )
    return tuple(subs)


def split_combine(
    g: EmbeddedGraph,
    sp: SplitPlan,
    solved: dict[str, frozenset[int]],
    merged: dict[str, int | None],
) -> tuple[frozenset[int], str]:
    """Best verified recombination of split sub-solutions.

    Every recipe candidate is checked for independence in the original
    graph; the largest winner is returned and must reach the target size.
    """
    tri = set(sp.triangle)
    x1, x2, x3 = sp.triangle
    cands: list[tuple[str, frozenset[int]]] = []

    if sp.strategy == "delete-both":
        cands.append(("delete-both", solved["del1"] | solved["del2"]))
    elif sp.strategy in ("hub1", "hub2"):
        ic, if_ = solved["ctr"], solved["full"]
        u = merged["ctr"]
        if u in ic:
            cands.append((sp.strategy + ":merged", (ic - {u}) | if_))
        else:
            cands.append((sp.strategy + ":plain", ic | (if_ - tri)))
    else:
        third = {2: x3, 3: x2}
        sols = {
            (side, t): solved[f"e{side}t{t}"] for side in (1, 2) for t in (2, 3)
        }
        ms = {
            (side, t): merged[f"e{side}t{t}"] for side in (1, 2) for t in (2, 3)
        }
        for t in (2, 3):
            i1, i2 = sols[(1, t)], sols[(2, t)]
            m1, m2 = ms[(1, t)], ms[(2, t)]
            xt_third = third[t]
            drop = tri | {m1, m2}
            p1 = "merged" if m1 in i1 else "third" if xt_third in i1 else "none"
            p2 = "merged" if m2 in i2 else "third" if xt_third in i2 else "none"
            if p1 == "none" or p2 == "none":
                cands.append((f"edge:t{t}:drop", (i1 | i2) - drop))
            elif p1 == "third" and p2 == "third":
                cands.append(
                    (f"edge:t{t}:third", (i1 | i2) - {m1, m2, x1, x2 if t == 2 else x3})
                )
            elif p1 == "merged" and p2 == "merged":
                cands.append(
                    (f"edge:t{t}:apex", ((i1 | i2) - drop) | {x1})
                )
        for side in (1, 2):
            for t in (2, 3):
                # third retained on the other side at t, merged here at 5-t
                ot = 5 - t
                ia = sols[(3 - side, t)]
                ib = sols[(side, ot)]
                mb = ms[(side, ot)]
                if third[t] in ia and mb in ib:
                    cands.append(
                        (f"edge:cross{side}t{t}", (ia | ib) - {mb, ms[(3 - side, t)]})
                    )
        for side in (1, 2):
            ia, ib = sols[(side, 2)], sols[(3 - side, 3)]
            ma, mb = ms[(side, 2)], ms[(3 - side, 3)]
            if ma in ia and mb in ib:
                cands.append(
                    (f"edge:bridge{side}", ((ia | ib) - {ma, mb}) | {x1})
                )

    best: tuple[int, str, frozenset[int]] | None = None
    for tag, cand in cands:
        cand = frozenset(cand)
        if not mis.verify_independent(g, cand):
            continue
        if best is None or len(cand) > best[0]:
            best = (len(cand), tag, cand)
    if best is None or best[0] < sp.target:
        raise LiftError(
            f"split recombination below target {sp.target} "
            f"(best {best[0] if best else 'none'})"
        )
    return best[2], best[1]
