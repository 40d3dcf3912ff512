"""Exact-rational discharging on triangulations.

Every vertex starts with charge d(v) - 6; rules move charge between
neighbors, so the total 2m - 6n (equal to -12 on a triangulation) is
conserved through every phase.  All arithmetic is `fractions.Fraction`:
the engine asserts equalities, not tolerances.

Two rule sets are implemented: a three-rule warmup and the five-rule main
system whose last two rules redistribute surplus after the first pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .graph import EmbeddedGraph, GraphError, neighbor_cycle


class DischargeError(GraphError):
    """Input violates a structural precondition of the rules."""


@dataclass(frozen=True)
class Transfer:
    giver: int
    receiver: int
    amount: Fraction
    rule: str


@dataclass(frozen=True)
class ChargeState:
    """Per-vertex charges at a phase plus the ledger that produced them."""

    phase: str
    charge: Mapping[int, Fraction]
    ledger: tuple[Transfer, ...]

    def total(self) -> Fraction:
        return sum(self.charge.values(), Fraction(0))

    def replay(self, initial: "ChargeState") -> dict[int, Fraction]:
        """Apply this state's ledger to ``initial``; must reproduce charges."""
        acc = dict(initial.charge)
        for t in self.ledger:
            acc[t.giver] -= t.amount
            acc[t.receiver] += t.amount
        return acc


@dataclass(frozen=True)
class NeighborProfile:
    """Degree buckets and 5-neighbor classification around one vertex.

    The classification lives on the induced structure of the 5/6-neighbors:
    a member with no other 5/6-neighbor adjacent to it there is isolated; a
    non-isolated 5-neighbor whose both flanking rotation neighbors are
    6-vertices is crowded; remaining 5-neighbors are plain.  ``h`` maps each
    6⁻-neighbor w to the number of 7⁺-vertices among the two face apexes of
    the edge to w.
    """

    vertex: int
    fives: tuple[int, ...]
    sixes: tuple[int, ...]
    sevens: tuple[int, ...]
    eight_plus: tuple[int, ...]
    isolated: frozenset[int]
    crowded: frozenset[int]
    plain: frozenset[int]
    h: Mapping[int, int]


def classify(g: EmbeddedGraph, v: int) -> NeighborProfile:
    nc = neighbor_cycle(g, v)
    if not nc.is_induced_cycle:
        raise DischargeError(
            f"neighborhood of {v} is not an induced cycle "
            f"(separating triangle or degree < 3 nearby)"
        )
    ring = nc.order
    k = len(ring)
    deg = {u: g.degree(u) for u in ring}
    fives = tuple(u for u in ring if deg[u] == 5)
    sixes = tuple(u for u in ring if deg[u] == 6)
    sevens = tuple(u for u in ring if deg[u] == 7)
    eights = tuple(u for u in ring if deg[u] >= 8)

    low = {u for u in ring if deg[u] <= 6}
    isolated = set()
    crowded = set()
    plain = set()
    for i, u in enumerate(ring):
        if u not in low:
            continue
        left, right = ring[i - 1], ring[(i + 1) % k]
        inside = [x for x in (left, right) if x in low]
        if not inside:
            isolated.add(u)
        elif deg[u] == 5 and deg[left] == 6 and deg[right] == 6:
            crowded.add(u)
        elif deg[u] == 5:
            plain.add(u)
    h = {}
    for i, u in enumerate(ring):
        if deg[u] <= 6:
            left, right = ring[i - 1], ring[(i + 1) % k]
            h[u] = sum(1 for x in (left, right) if deg[x] >= 7)
    return NeighborProfile(
        vertex=v,
        fives=fives,
        sixes=sixes,
        sevens=sevens,
        eight_plus=eights,
        isolated=frozenset(isolated),
        crowded=frozenset(crowded),
        plain=frozenset(plain),
        h=h,
    )


def initial_charges(g: EmbeddedGraph) -> ChargeState:
    charge = {v: Fraction(g.degree(v) - 6) for v in g.vertices}
    return ChargeState("initial", charge, ())


def _check_preconditions(g: EmbeddedGraph) -> None:
    if not g.is_triangulation():
        raise DischargeError("discharging rules need a triangulation")
    if g.min_degree() < 5:
        raise DischargeError("discharging rules need minimum degree 5")


def _apply(charge: dict[int, Fraction], transfers: list[Transfer]) -> None:
    for t in transfers:
        if t.amount <= 0:
            raise DischargeError(f"non-positive transfer {t}")
        charge[t.giver] -= t.amount
        charge[t.receiver] += t.amount


THIRD = Fraction(1, 3)
SEVENTH = Fraction(1, 7)
TWO_SEVENTHS = Fraction(2, 7)
QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)
EIGHTH = Fraction(1, 8)


def run_warmup(g: EmbeddedGraph) -> ChargeState:
    """Simultaneous warmup rules.

    W1: every 7⁺-vertex gives 1/3 to each 5-neighbor.
    W2: every 7⁺-vertex gives 1/7 to each 6-neighbor that has a 5-neighbor.
    W3: every 6-vertex gives 2/7 to each 5-neighbor.
    """
    _check_preconditions(g)
    deg = {v: g.degree(v) for v in g.vertices}
    has_five = {
        v: any(deg[u] == 5 for u in g.rotation(v)) for v in g.vertices
    }
    transfers: list[Transfer] = []
    for v in g.vertices:
        d = deg[v]
        if d >= 7:
            for u in g.rotation(v):
                if deg[u] == 5:
                    transfers.append(Transfer(v, u, THIRD, "W1"))
                elif deg[u] == 6 and has_five[u]:
                    transfers.append(Transfer(v, u, SEVENTH, "W2"))
        elif d == 6:
            for u in g.rotation(v):
                if deg[u] == 5:
                    transfers.append(Transfer(v, u, TWO_SEVENTHS, "W3"))
    charge = dict(initial_charges(g).charge)
    _apply(charge, transfers)
    return ChargeState("warmup", charge, tuple(transfers))


def main_phases(
    g: EmbeddedGraph,
) -> tuple[ChargeState, ChargeState, ChargeState, ChargeState]:
    """Initial charges and the states after the three main phases.

    Pass one (M1-M3, simultaneous):
      M1: each 6-vertex gives 1/2 to a 5-neighbor, reduced to 1/4 when they
          share a 6-apex and no 5-apex, or when the 5-neighbor has at least
          four positive senders.
      M2: each 8⁺-vertex gives 1/4 + h_w/8 to each 6⁻-neighbor w.
      M3: each 7-vertex gives 1/2, 0 or 1/4 to a 5-neighbor as it is
          isolated, crowded or plain; and 1/4 to each 6-neighbor unless
          neither end has a 5-neighbor.
    Pass two (M4): a 5-vertex with positive charge returns it in equal parts
          to the 6-neighbors that sent 1/2.
    Pass three (M5): a 6-vertex with positive charge splits it equally among
          its 6-neighbors with negative charge.
    """
    _check_preconditions(g)
    deg = {v: g.degree(v) for v in g.vertices}
    profiles = {v: classify(g, v) for v in g.vertices}

    def giver_count(five: int) -> int:
        count = 0
        for u in g.rotation(five):
            d = deg[u]
            if d == 6 or d >= 8:
                count += 1
            elif d == 7 and five not in profiles[u].crowded:
                count += 1
        return count

    init = initial_charges(g)
    transfers: list[Transfer] = []
    for v in g.vertices:
        d = deg[v]
        prof = profiles[v]
        if d == 6:
            for u in prof.fives:
                a1, a2 = g.apexes(v, u)
                if (6 in (deg[a1], deg[a2])) and (5 not in (deg[a1], deg[a2])):
                    amt = QUARTER
                elif giver_count(u) >= 4:
                    amt = QUARTER
                else:
                    amt = HALF
                transfers.append(Transfer(v, u, amt, "M1"))
        elif d >= 8:
            for u in g.rotation(v):
                if deg[u] <= 6:
                    amt = QUARTER + Fraction(prof.h[u], 8)
                    transfers.append(Transfer(v, u, amt, "M2"))
        elif d == 7:
            for u in prof.fives:
                if u in prof.isolated:
                    transfers.append(Transfer(v, u, HALF, "M3"))
                elif u in prof.crowded:
                    pass
                else:
                    transfers.append(Transfer(v, u, QUARTER, "M3"))
            for u in prof.sixes:
                if prof.fives or profiles[u].fives:
                    transfers.append(Transfer(v, u, QUARTER, "M3"))

    charge1 = dict(init.charge)
    _apply(charge1, transfers)
    state1 = ChargeState("after-M1-M3", charge1, tuple(transfers))

    r4: list[Transfer] = []
    half_givers: dict[int, list[int]] = {}
    for t in transfers:
        if t.rule == "M1" and t.amount == HALF:
            half_givers.setdefault(t.receiver, []).append(t.giver)
    for v in g.vertices:
        if deg[v] == 5 and charge1[v] > 0:
            givers = sorted(half_givers.get(v, ()))
            if givers:
                share = charge1[v] / len(givers)
                for u in givers:
                    r4.append(Transfer(v, u, share, "M4"))
    charge2 = dict(charge1)
    _apply(charge2, r4)
    state2 = ChargeState("after-M4", charge2, tuple(transfers) + tuple(r4))

    r5: list[Transfer] = []
    for v in g.vertices:
        if deg[v] == 6 and charge2[v] > 0:
            needy = sorted(
                u for u in g.rotation(v) if deg[u] == 6 and charge2[u] < 0
            )
            if needy:
                share = charge2[v] / len(needy)
                for u in needy:
                    r5.append(Transfer(v, u, share, "M5"))
    charge3 = dict(charge2)
    _apply(charge3, r5)
    state3 = ChargeState(
        "after-M5", charge3, tuple(transfers) + tuple(r4) + tuple(r5)
    )
    return init, state1, state2, state3


def run_main(g: EmbeddedGraph) -> ChargeState:
    """Final state of the five-rule system; see ``main_phases``."""
    return main_phases(g)[3]


def negative_vertices(cs: ChargeState) -> list[int]:
    return sorted(v for v, c in cs.charge.items() if c < 0)
