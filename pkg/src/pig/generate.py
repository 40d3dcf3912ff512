"""Seeded random planar triangulations.

Build-up: start from K4, insert vertices into random faces until the target
size, then mix with a walk of random diagonal flips (10*m attempts).  Flag
repair: targeted flips raise small degrees / break separating triangles;
samples that cannot be repaired are rejected and redrawn, up to a fixed
budget.  The whole process is a pure function of the GenSpec recipe.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import EmbeddedGraph, GraphError, separating_triangles

FLIP_WALK_FACTOR = 10
REJECTION_BUDGET = 1000
REPAIR_ROUNDS = 400


class GenerationError(GraphError):
    """Flag satisfaction not achieved within the attempt budget."""


@dataclass(frozen=True)
class GenSpec:
    """Deterministic recipe for one corpus triangulation."""

    seed: int
    n: int
    min_degree5: bool = False
    no_separating_triangle: bool = False


class _Builder:
    """Mutable rotation system for the generation walk (ids 1..n)."""

    def __init__(self):
        self.rot: dict[int, list[int]] = {
            1: [2, 3, 4], 2: [1, 4, 3], 3: [1, 2, 4], 4: [1, 3, 2],
        }
        self.adj: dict[int, set[int]] = {v: set(ns) for v, ns in self.rot.items()}
        # K4 faces; kept fresh only during the insertion phase
        self.faces: list[tuple[int, int, int]] = [
            (1, 2, 4), (1, 4, 3), (1, 3, 2), (2, 3, 4),
        ]

    @property
    def m(self) -> int:
        return sum(len(ns) for ns in self.rot.values()) // 2

    def insert_vertex(self, face_idx: int) -> None:
        a, b, c = self.faces[face_idx]
        w = len(self.rot) + 1
        self.rot[w] = [a, c, b]
        self.adj[w] = {a, b, c}
        ra = self.rot[a]
        ra.insert(ra.index(c) + 1, w)
        rb = self.rot[b]
        rb.insert(rb.index(a) + 1, w)
        rc = self.rot[c]
        rc.insert(rc.index(b) + 1, w)
        for x in (a, b, c):
            self.adj[x].add(w)
        self.faces[face_idx] = (a, b, w)
        self.faces.append((b, c, w))
        self.faces.append((c, a, w))

    def flip_apexes(self, u: int, v: int) -> tuple[int, int]:
        ns = self.rot[u]
        i = ns.index(v)
        return ns[i - 1], ns[(i + 1) % len(ns)]

    def can_flip(self, u: int, v: int) -> bool:
        if len(self.rot[u]) <= 3 or len(self.rot[v]) <= 3:
            return False
        x, y = self.flip_apexes(u, v)
        return x != y and y not in self.adj[x]

    def flip(self, u: int, v: int) -> tuple[int, int]:
        """Replace edge uv by the edge between its two face apexes."""
        x, y = self.flip_apexes(u, v)
        self.rot[u].remove(v)
        self.rot[v].remove(u)
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        rx = self.rot[x]
        rx.insert(rx.index(v) + 1, y)
        ry = self.rot[y]
        ry.insert(ry.index(u) + 1, x)
        self.adj[x].add(y)
        self.adj[y].add(x)
        return x, y

    def graph(self) -> EmbeddedGraph:
        return EmbeddedGraph(self.rot)


def _random_edge(b: _Builder, rng: random.Random, n: int) -> tuple[int, int]:
    while True:
        u = rng.randrange(1, n + 1)
        v = rng.choice(b.rot[u])
        return u, v


def _sample(rng: random.Random, n: int) -> _Builder:
    b = _Builder()
    while len(b.rot) < n:
        b.insert_vertex(rng.randrange(len(b.faces)))
    m = b.m
    for _ in range(FLIP_WALK_FACTOR * m):
        u, v = _random_edge(b, rng, n)
        if b.can_flip(u, v):
            b.flip(u, v)
    return b


def _repair_degrees(b: _Builder, rng: random.Random, n: int) -> bool:
    """Raise every degree to >= 5 by flipping edges of faces at deficient
    vertices; the flip adds an edge at the apex and cheapens two others."""
    for _ in range(REPAIR_ROUNDS * 4):
        low = [v for v in range(1, n + 1) if len(b.rot[v]) < 5]
        if not low:
            return True
        w = min(low, key=lambda v: (len(b.rot[v]), v))
        ring = b.rot[w]
        cands = []
        for i in range(len(ring)):
            u, v = ring[i], ring[(i + 1) % len(ring)]
            x, y = b.flip_apexes(u, v)
            # flipping uv adds edge x-y; useful only when one apex is w
            apex = x if y == w else y if x == w else None
            if apex is None or apex == w or apex in b.adj[w]:
                continue
            if not b.can_flip(u, v):
                continue
            score = min(len(b.rot[u]), len(b.rot[v]))
            cands.append((score, u, v))
        if not cands:
            return False
        cands.sort(key=lambda t: (-t[0], t[1], t[2]))
        top = [c for c in cands if c[0] == cands[0][0]]
        _, u, v = top[rng.randrange(len(top))]
        b.flip(u, v)
    return False


def _repair_separating_triangles(
    b: _Builder, rng: random.Random, keep_degrees: bool
) -> bool:
    for _ in range(REPAIR_ROUNDS):
        g = b.graph()
        tris = separating_triangles(g)
        if not tris:
            return True
        a, c, d = tris[rng.randrange(len(tris))]
        options = [(a, c), (a, d), (c, d)]
        rng.shuffle(options)
        done = False
        for u, v in options:
            if not b.can_flip(u, v):
                continue
            if keep_degrees and (len(b.rot[u]) <= 5 or len(b.rot[v]) <= 5):
                continue
            b.flip(u, v)
            done = True
            break
        if not done:
            if keep_degrees:
                return False
            u, v = options[0]
            if b.can_flip(u, v):
                b.flip(u, v)
            else:
                return False
    return False


def generate(spec: GenSpec) -> EmbeddedGraph:
    """Produce the triangulation described by ``spec``.

    Raises GenerationError when the requested flags cannot be satisfied
    within the rejection budget (reported, never silent).
    """
    if spec.n < 4:
        raise GraphError("generation needs n >= 4")
    if spec.min_degree5 and spec.n not in (12,) and spec.n < 14:
        # minimum degree 5 forces n = 12 or n >= 14; no such
        # triangulation has 13 vertices
        raise GenerationError("min degree 5 needs n = 12 or n >= 14")
    rng = random.Random(spec.seed)
    for _ in range(REJECTION_BUDGET):
        b = _sample(rng, spec.n)
        if spec.min_degree5:
            if not _repair_degrees(b, rng, spec.n):
                continue
        if spec.no_separating_triangle:
            if not _repair_separating_triangles(b, rng, spec.min_degree5):
                continue
        if spec.min_degree5 and any(
            len(b.rot[v]) < 5 for v in range(1, spec.n + 1)
        ):
            continue
        g = b.graph()
        if spec.no_separating_triangle and separating_triangles(g):
            continue
        if not g.is_triangulation():
            raise GraphError("generator produced a non-triangulation")
        return g
    raise GenerationError(
        f"could not satisfy flags of {spec} within {REJECTION_BUDGET} samples"
    )
