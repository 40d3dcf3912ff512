"""Embedded planar graphs given by rotation systems.

A graph is stored as the clockwise cyclic order of neighbors around every
vertex.  That order determines the embedding combinatorially: faces are the
orbits of the next-dart rule, and validity is checked through Euler's
formula.  All values are immutable; structural operations return new graphs.

Vertex ids are positive integers.  They are stable across deletions and are
never reused: graphs derived by contraction mint fresh ids starting at
``next_id``, so a trace of reductions can keep naming vertices of earlier
stages unambiguously.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence


class GraphError(ValueError):
    """Structural problem with a graph or an operation on it."""


class ParseError(GraphError):
    """Malformed rotation-format document."""


class EmbeddingError(GraphError):
    """Rotation system fails validation (symmetry, simplicity, Euler trace)."""


class EmbeddedGraph:
    """Simple plane graph as a clockwise rotation system.

    ``rotations`` maps each vertex id to the cyclic sequence of its
    neighbors.  The face tracing rule: the dart (u, v) is followed by
    (v, w) where w is the successor of u in the rotation at v.
    """

    __slots__ = ("_rot", "_adj", "_next_id", "_faces", "_m")

    def __init__(
        self,
        rotations: Mapping[int, Sequence[int]],
        *,
        next_id: int | None = None,
        validate: bool = True,
    ):
        rot: dict[int, tuple[int, ...]] = {
            v: tuple(ns) for v, ns in rotations.items()
        }
        self._rot = rot
        self._adj = {v: frozenset(ns) for v, ns in rot.items()}
        self._m = sum(len(ns) for ns in rot.values()) // 2
        top = max(rot, default=0)
        self._next_id = max(next_id or 0, top + 1)
        self._faces: tuple[tuple[int, ...], ...] | None = None
        if validate:
            self._validate()

    # -- basic queries ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._rot)

    @property
    def m(self) -> int:
        return self._m

    @property
    def next_id(self) -> int:
        return self._next_id

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._rot))

    def has_vertex(self, v: int) -> bool:
        return v in self._rot

    def degree(self, v: int) -> int:
        return len(self._rot[v])

    def min_degree(self) -> int:
        return min((len(ns) for ns in self._rot.values()), default=0)

    def rotation(self, v: int) -> tuple[int, ...]:
        return self._rot[v]

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [
            (u, v) for u in sorted(self._rot) for v in self._rot[u] if u < v
        ]

    def __contains__(self, v: int) -> bool:
        return v in self._rot

    def __repr__(self) -> str:
        return f"EmbeddedGraph(n={self.n}, m={self.m})"

    # -- validation --------------------------------------------------------

    def _validate(self) -> None:
        for v, ns in self._rot.items():
            if not isinstance(v, int) or v <= 0:
                raise EmbeddingError(f"vertex id {v!r} is not a positive int")
            if len(set(ns)) != len(ns):
                raise EmbeddingError(f"repeated neighbor in rotation of {v}")
            if v in self._adj[v]:
                raise EmbeddingError(f"loop at vertex {v}")
            for u in ns:
                if u not in self._rot:
                    raise EmbeddingError(f"vertex {v} lists unknown vertex {u}")
                if v not in self._adj[u]:
                    raise EmbeddingError(
                        f"asymmetric adjacency: {v} lists {u} but not vice versa"
                    )
        self._check_euler()

    def _check_euler(self) -> None:
        # Each component must close up: n - m + f = 2 per component, where
        # an edgeless component contributes its single face.
        comps = self.components()
        face_owner: dict[int, int] = {}
        for ci, comp in enumerate(comps):
            for v in comp:
                face_owner[v] = ci
        fcount = [0] * len(comps)
        for face in self.faces():
            fcount[face_owner[face[0]]] += 1
        for ci, comp in enumerate(comps):
            nc = len(comp)
            mc = sum(len(self._rot[v]) for v in comp) // 2
            fc = fcount[ci] if mc else 1
            if nc - mc + fc != 2:
                raise EmbeddingError(
                    f"Euler trace fails on component of {comp[0]}: "
                    f"n={nc} m={mc} f={fc}"
                )

    # -- faces -------------------------------------------------------------

    def faces(self) -> tuple[tuple[int, ...], ...]:
        """All face walks, each a cyclic vertex sequence, in a fixed order."""
        if self._faces is None:
            self._faces = tuple(self._trace_faces())
        return self._faces

    def _trace_faces(self) -> Iterator[tuple[int, ...]]:
        pos = {
            v: {u: i for i, u in enumerate(ns)} for v, ns in self._rot.items()
        }
        seen: set[tuple[int, int]] = set()
        for u in sorted(self._rot):
            for v in self._rot[u]:
                if (u, v) in seen:
                    continue
                walk = []
                a, b = u, v
                while (a, b) not in seen:
                    seen.add((a, b))
                    walk.append(a)
                    ns = self._rot[b]
                    a, b = b, ns[(pos[b][a] + 1) % len(ns)]
                yield tuple(walk)

    def face_sets(self) -> set[frozenset[int]]:
        return {frozenset(f) for f in self.faces()}

    def is_triangulation(self) -> bool:
        return self.n >= 3 and all(len(f) == 3 for f in self.faces())

    # -- traversal ---------------------------------------------------------

    def components(self) -> list[tuple[int, ...]]:
        """Connected components as sorted vertex tuples, smallest-first."""
        seen: set[int] = set()
        out = []
        for s in sorted(self._rot):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self._rot[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            out.append(tuple(sorted(comp)))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def apexes(self, u: int, v: int) -> tuple[int, int]:
        """The two face-neighbors of edge uv: predecessor and successor of v
        around u.  In a triangulation these are the corners of the two faces
        on edge uv."""
        ns = self._rot[u]
        i = ns.index(v)
        return ns[i - 1], ns[(i + 1) % len(ns)]

    # -- derived graphs ------------------------------------------------------

    def subgraph(self, keep: Iterable[int]) -> "EmbeddedGraph":
        """Induced subgraph; keeps ids and the inherited embedding."""
        ks = set(keep)
        bad = ks - self._rot.keys()
        if bad:
            raise GraphError(f"unknown vertices {sorted(bad)}")
        rot = {
            v: tuple(u for u in self._rot[v] if u in ks)
            for v in sorted(ks)
        }
        return EmbeddedGraph(rot, next_id=self._next_id, validate=False)

    def delete_set(self, drop: Iterable[int]) -> "EmbeddedGraph":
        ds = set(drop)
        bad = ds - self._rot.keys()
        if bad:
            raise GraphError(f"unknown vertices {sorted(bad)}")
        return self.subgraph(self._rot.keys() - ds)

    def delete_edge(self, u: int, v: int) -> "EmbeddedGraph":
        if v not in self._adj[u]:
            raise GraphError(f"no edge {u}-{v}")
        rot = dict(self._rot)
        rot[u] = tuple(x for x in rot[u] if x != v)
        rot[v] = tuple(x for x in rot[v] if x != u)
        return EmbeddedGraph(rot, next_id=self._next_id, validate=False)

    def contract_set(self, part: Iterable[int]) -> tuple["EmbeddedGraph", int]:
        """Contract the connected set ``part`` to one fresh vertex.

        Rotations are merged along the boundary walk; loops are dropped and
        parallel edges collapsed to the slot appearing first.  Returns the
        new graph and the fresh vertex id.
        """
        ps = sorted(set(part))
        if not ps:
            raise GraphError("cannot contract an empty set")
        for v in ps:
            if v not in self._rot:
                raise GraphError(f"unknown vertex {v}")
        if len(self.subgraph(ps).components()) != 1:
            raise GraphError(f"contraction set {ps} does not induce a connected subgraph")

        new_id = self._next_id
        if len(ps) == 1:
            # Rename the single vertex to the fresh id.
            old = ps[0]
            rot = {}
            for v, ns in self._rot.items():
                key = new_id if v == old else v
                rot[key] = tuple(new_id if u == old else u for u in ns)
            return EmbeddedGraph(rot, next_id=new_id + 1, validate=False), new_id

        darts: dict[int, list[_Dart]] = {
            v: [_Dart(v) for _ in ns] for v, ns in self._rot.items()
        }
        for v, ns in self._rot.items():
            for i, u in enumerate(ns):
                d = darts[v][i]
                if d.twin is None:
                    t = darts[u][self._rot[u].index(v)]
                    d.twin = t
                    t.twin = d

        root = ps[0]
        remaining = set(ps[1:])
        while remaining:
            lst = darts[root]
            pick = next(
                (i for i, d in enumerate(lst) if d.twin.owner in remaining), None
            )
            if pick is None:  # unreachable for connected parts
                raise GraphError("contraction lost connectivity")
            d = lst[pick]
            v = d.twin.owner
            remaining.discard(v)
            vlst = darts[v]
            j = next(i for i, t in enumerate(vlst) if t is d.twin)
            seq = vlst[j + 1:] + vlst[:j]
            for s in seq:
                s.owner = root
            darts[root][pick:pick + 1] = seq
            del darts[v]
            # Parallel edges between root and v became loops: drop both darts.
            loops = [s for s in darts[root] if s.twin.owner == root]
            if loops:
                dead = set(map(id, loops))
                darts[root] = [s for s in darts[root] if id(s) not in dead]

        # Collapse parallel edges at the merged vertex, keeping first slots.
        seen_nbr: set[int] = set()
        keep: list[_Dart] = []
        for s in darts[root]:
            w = s.twin.owner
            if w in seen_nbr:
                other = darts[w]
                other.remove(s.twin)
            else:
                seen_nbr.add(w)
                keep.append(s)
        darts[root] = keep

        rot: dict[int, tuple[int, ...]] = {}
        for v, lst in darts.items():
            key = new_id if v == root else v
            rot[key] = tuple(
                new_id if s.twin.owner == root else s.twin.owner for s in lst
            )
        g = EmbeddedGraph(rot, next_id=new_id + 1)
        return g, new_id

    # -- serialization -------------------------------------------------------

    def canonical_rotations(self) -> dict[int, tuple[int, ...]]:
        """Rotations rotated to start at the smallest neighbor."""
        out = {}
        for v in sorted(self._rot):
            ns = self._rot[v]
            if ns:
                k = ns.index(min(ns))
                ns = ns[k:] + ns[:k]
            out[v] = ns
        return out

    def serialize(self) -> str:
        """Rotation-format document; relabels to 1..n if ids are sparse."""
        vs = self.vertices
        remap = {v: i + 1 for i, v in enumerate(vs)}
        lines = [f"{self.n} {self.m}"]
        relabeled = any(v != remap[v] for v in vs)
        if relabeled:
            lines.insert(0, "# vertices relabeled to 1..n")
        for v in vs:
            ns = tuple(remap[u] for u in self._rot[v])
            if ns:
                k = ns.index(min(ns))
                ns = ns[k:] + ns[:k]
            lines.append(f"{remap[v]}: " + " ".join(map(str, ns)))
        return "\n".join(lines) + "\n"

    def graph_hash(self) -> str:
        """Hash of the canonical rotation system with original ids."""
        h = hashlib.sha256()
        for v, ns in self.canonical_rotations().items():
            h.update(f"{v}:{','.join(map(str, ns))};".encode())
        return h.hexdigest()


class _Dart:
    __slots__ = ("owner", "twin")

    def __init__(self, owner: int):
        self.owner = owner
        self.twin: "_Dart | None" = None


# -- parsing ----------------------------------------------------------------


def parse_rotation_graph(text: str) -> EmbeddedGraph:
    """Parse a rotation-format document.

    Line 1 is ``n m``; then one line per vertex ``id: u1 u2 ... ud`` giving
    the clockwise rotation.  ``#`` starts a comment.  Ids are 1..n.
    """
    rows = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((ln, line))
    if not rows:
        raise ParseError("empty document")
    head = rows[0][1].split()
    if len(head) != 2:
        raise ParseError(f"line {rows[0][0]}: expected 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError(f"line {rows[0][0]}: expected integers 'n m'") from None
    if n < 0 or m < 0:
        raise ParseError("negative n or m")
    rot: dict[int, tuple[int, ...]] = {}
    for ln, line in rows[1:]:
        if ":" not in line:
            raise ParseError(f"line {ln}: missing ':'")
        head_s, _, tail = line.partition(":")
        try:
            v = int(head_s.strip())
            ns = tuple(int(t) for t in tail.split())
        except ValueError:
            raise ParseError(f"line {ln}: malformed vertex line") from None
        if v in rot:
            raise ParseError(f"line {ln}: duplicate vertex {v}")
        rot[v] = ns
    if sorted(rot) != list(range(1, n + 1)):
        raise ParseError(f"vertex ids must be exactly 1..{n}")
    try:
        g = EmbeddedGraph(rot)
    except EmbeddingError as exc:
        raise ParseError(str(exc)) from None
    if g.m != m:
        raise ParseError(f"header claims m={m} but rotations give m={g.m}")
    return g


# -- structure queries --------------------------------------------------------


@dataclass(frozen=True)
class CommonNeighbors:
    """N(u) ∩ N(v) with the component structure it induces."""

    vertices: frozenset[int]
    components: tuple[tuple[int, ...], ...]
    is_k1_k2_union: bool


def common_neighbors(g: EmbeddedGraph, u: int, v: int) -> CommonNeighbors:
    if u == v:
        raise GraphError("common_neighbors needs two distinct vertices")
    cs = g.neighbors(u) & g.neighbors(v)
    sub = g.subgraph(cs) if cs else None
    comps = tuple(sub.components()) if sub else ()
    ok = all(
        len(c) <= 2 and (len(c) < 2 or g.adjacent(c[0], c[1])) for c in comps
    )
    # components of an induced subgraph are K1/K2 iff each has <= 2 vertices
    return CommonNeighbors(frozenset(cs), comps, ok)


@dataclass(frozen=True)
class NeighborCycle:
    """Rotation order of N(v) plus whether it is the induced structure."""

    order: tuple[int, ...]
    is_cycle: bool          # consecutive rotation neighbors are adjacent
    is_induced_cycle: bool  # additionally no chords inside N(v)
    chords: tuple[tuple[int, int], ...]


def neighbor_cycle(g: EmbeddedGraph, v: int) -> NeighborCycle:
    order = g.rotation(v)
    k = len(order)
    if k < 3:
        return NeighborCycle(order, False, False, ())
    is_cycle = all(g.adjacent(order[i], order[(i + 1) % k]) for i in range(k))
    chords = []
    for i in range(k):
        for j in range(i + 2, k):
            if i == 0 and j == k - 1:
                continue
            if g.adjacent(order[i], order[j]):
                chords.append((order[i], order[j]))
    induced = is_cycle and not chords
    return NeighborCycle(order, is_cycle, induced, tuple(chords))


def _disconnects(g: EmbeddedGraph, triple: tuple[int, int, int]) -> bool:
    drop = set(triple)
    rest = [v for v in g.vertices if v not in drop]
    if len(rest) <= 1:
        return False
    seen = {rest[0]}
    stack = [rest[0]]
    while stack:
        x = stack.pop()
        for y in g.rotation(x):
            if y not in drop and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) < len(rest)


def triangles(g: EmbeddedGraph) -> list[tuple[int, int, int]]:
    out = []
    for u, v in g.edges():
        for w in g.neighbors(u) & g.neighbors(v):
            if w > v:
                out.append((u, v, w))
    out.sort()
    return out


def separating_triangles(g: EmbeddedGraph) -> list[tuple[int, int, int]]:
    """All triangles whose removal disconnects the graph, sorted.

    In a triangulation only non-face triangles can separate, which prunes
    the candidate list; every candidate is still verified by deletion.
    """
    cands = triangles(g)
    if g.is_triangulation():
        fs = g.face_sets()
        cands = [t for t in cands if frozenset(t) not in fs]
    return [t for t in cands if _disconnects(g, t)]


# -- triangulation -------------------------------------------------------------


def triangulate(g: EmbeddedGraph) -> EmbeddedGraph:
    """Add chords until every face is a triangle.

    The result is a supergraph on the same vertex set, so any independent
    set of it is independent in ``g``.  Chords fan out of the smallest-id
    vertex available on each face; ears are cut when a fan chord would be
    parallel to an existing edge.
    """
    if g.n < 3:
        raise GraphError("triangulate needs at least 3 vertices")
    if not g.is_connected():
        raise GraphError("triangulate needs a connected graph")
    rot = {v: list(ns) for v, ns in g._rot.items()}
    adj = {v: set(ns) for v, ns in g._rot.items()}

    def add_chord(walk: list[int], p: int, q: int) -> None:
        a, b = walk[p], walk[q]
        ra, rb = rot[a], rot[b]
        ra.insert(ra.index(walk[p - 1]) + 1, b)
        rb.insert(rb.index(walk[q - 1]) + 1, a)
        adj[a].add(b)
        adj[b].add(a)

    stack = [list(f) for f in g.faces() if len(f) > 3]
    while stack:
        walk = stack.pop()
        k = len(walk)
        # ear positions p where chord walk[p]..walk[p+2] is addable
        best = None
        for p in range(k):
            a, b = walk[p], walk[(p + 2) % k]
            if a != b and b not in adj[a]:
                if best is None or walk[p] < walk[best]:
                    best = p
        if best is None:
            raise EmbeddingError("face admits no chord; cannot triangulate")
        q = (best + 2) % k
        add_chord(walk, best, q)
        rest = walk[q:] + walk[:best + 1] if q > best else walk[q:best + 1]
        if len(rest) > 3:
            stack.append(rest)

    out = EmbeddedGraph(rot, next_id=g.next_id)
    if not out.is_triangulation() or out.m != 3 * out.n - 6:
        raise EmbeddingError("triangulation postcondition failed")
    return out


# -- fixture constructions ------------------------------------------------------


def embedded_from_faces(faces: Sequence[Sequence[int]]) -> EmbeddedGraph:
    """Build a rotation system from a face list of a 2-connected plane graph.

    Face orientations are made consistent by propagation across shared
    edges; each undirected edge must lie on exactly two faces.
    """
    fs = [tuple(f) for f in faces]
    by_edge: dict[frozenset[int], list[int]] = {}
    for i, f in enumerate(fs):
        for j in range(len(f)):
            by_edge.setdefault(frozenset((f[j], f[(j + 1) % len(f)])), []).append(i)
    if any(len(v) != 2 for v in by_edge.values()):
        raise GraphError("every edge must lie on exactly two faces")

    oriented: dict[int, tuple[int, ...]] = {0: fs[0]}
    queue = [0]
    while queue:
        i = queue.pop()
        f = oriented[i]
        darts = {(f[j], f[(j + 1) % len(f)]) for j in range(len(f))}
        for j in range(len(f)):
            e = frozenset((f[j], f[(j + 1) % len(f)]))
            for o in by_edge[e]:
                if o == i or o in oriented:
                    continue
                of = fs[o]
                odarts = {(of[x], of[(x + 1) % len(of)]) for x in range(len(of))}
                if odarts & darts:
                    of = tuple(reversed(of))
                oriented[o] = of
                queue.append(o)
    if len(oriented) != len(fs):
        raise GraphError("face adjacency is not connected")

    succ: dict[int, dict[int, int]] = {}
    for f in oriented.values():
        k = len(f)
        for j in range(k):
            x, y, z = f[j - 1], f[j], f[(j + 1) % k]
            succ.setdefault(y, {})[x] = z
    rot = {}
    for v, s in succ.items():
        start = min(s)
        cyc = [start]
        while True:
            nxt = s[cyc[-1]]
            if nxt == start:
                break
            cyc.append(nxt)
        if len(cyc) != len(s):
            raise GraphError(f"rotation at {v} is not a single cycle")
        rot[v] = tuple(cyc)
    return EmbeddedGraph(rot)


def k4() -> EmbeddedGraph:
    return embedded_from_faces([(1, 2, 3), (1, 3, 4), (1, 4, 2), (2, 4, 3)])


def embedded_cycle(k: int) -> EmbeddedGraph:
    if k < 3:
        raise GraphError("cycle needs k >= 3")
    rot = {
        i + 1: ((i - 1) % k + 1, (i + 1) % k + 1) for i in range(k)
    }
    return EmbeddedGraph(rot)


def octahedron() -> EmbeddedGraph:
    return embedded_from_faces(
        [
            (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 2),
            (6, 3, 2), (6, 4, 3), (6, 5, 4), (6, 2, 5),
        ]
    )


def cube() -> EmbeddedGraph:
    return embedded_from_faces(
        [
            (1, 2, 3, 4), (5, 8, 7, 6),
            (1, 5, 6, 2), (2, 6, 7, 3), (3, 7, 8, 4), (4, 8, 5, 1),
        ]
    )


def icosahedron() -> EmbeddedGraph:
    u = [2, 3, 4, 5, 6]
    lo = [7, 8, 9, 10, 11]
    faces: list[tuple[int, int, int]] = []
    for k in range(5):
        k1 = (k + 1) % 5
        faces.append((1, u[k], u[k1]))
        faces.append((u[k], lo[k1], u[k1]))
        faces.append((lo[k], lo[k1], u[k]))
        faces.append((12, lo[k1], lo[k]))
    return embedded_from_faces(faces)


def stacked_k4s() -> EmbeddedGraph:
    """Two K4s glued on triangle {1,2,3}; apexes 4 and 5.  The glue triangle
    is separating."""
    return embedded_from_faces(
        [
            (1, 2, 4), (2, 3, 4), (3, 1, 4),
            (2, 1, 5), (3, 2, 5), (1, 3, 5),
        ]
    )
