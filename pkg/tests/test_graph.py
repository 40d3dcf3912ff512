import random

import pytest

from pig.graph import (
    EmbeddedGraph,
    GraphError,
    ParseError,
    common_neighbors,
    embedded_cycle,
    neighbor_cycle,
    parse_rotation_graph,
    separating_triangles,
    triangulate,
)
from pig.generate import GenSpec, generate

from conftest import brute_separating_triangles


def euler_ok(g):
    comps = g.components()
    total = 0
    for comp in comps:
        total += 2
    return g.n - g.m + len(g.faces()) == total if g.m else True


class TestParse:
    def test_k3(self):
        g = parse_rotation_graph("3 3\n1: 2 3\n2: 3 1\n3: 1 2\n")
        assert g.n == 3 and g.m == 3
        assert len(g.faces()) == 2

    def test_comments_and_blanks(self):
        g = parse_rotation_graph("# header\n3 3\n\n1: 2 3 # one\n2: 3 1\n3: 1 2\n")
        assert g.n == 3

    def test_icosahedron_roundtrip(self, ico):
        text = ico.serialize()
        g = parse_rotation_graph(text)
        assert g.n == 12 and g.m == 30
        assert len(g.faces()) == 20
        assert g.serialize() == text

    def test_shipped_icosahedron_fixture(self, ico):
        from pathlib import Path

        text = Path(__file__).parent.joinpath("data", "icosahedron.rot").read_text()
        g = parse_rotation_graph(text)
        assert g.n == 12 and g.m == 30 and len(g.faces()) == 20
        assert g.n - g.m + len(g.faces()) == 2
        assert g.graph_hash() == ico.graph_hash()

    def test_asymmetry_error(self):
        with pytest.raises(ParseError, match="asymmetric"):
            parse_rotation_graph("3 3\n1: 2 3\n2: 3\n3: 1 2\n")

    def test_malformed_line(self):
        with pytest.raises(ParseError):
            parse_rotation_graph("2 1\n1: 2\n2 1\n")

    def test_bad_ids(self):
        with pytest.raises(ParseError):
            parse_rotation_graph("2 1\n1: 5\n5: 1\n")

    def test_wrong_edge_count(self):
        with pytest.raises(ParseError, match="m="):
            parse_rotation_graph("3 2\n1: 2 3\n2: 3 1\n3: 1 2\n")

    def test_invalid_embedding(self):
        # K4 rotations scrambled to a torus-like system fail the Euler trace
        with pytest.raises(ParseError):
            parse_rotation_graph(
                "4 6\n1: 2 3 4\n2: 1 3 4\n3: 1 2 4\n4: 1 2 3\n"
            )

    def test_isolated_vertices(self):
        g = parse_rotation_graph("2 0\n1:\n2:\n")
        assert g.n == 2 and g.m == 0


class TestFaces:
    def test_k4(self, graph_k4):
        assert sorted(len(f) for f in graph_k4.faces()) == [3, 3, 3, 3]

    def test_cube(self, graph_cube):
        assert sorted(len(f) for f in graph_cube.faces()) == [4] * 6

    def test_icosahedron(self, ico):
        faces = ico.faces()
        assert len(faces) == 20
        assert all(len(f) == 3 for f in faces)

    def test_each_dart_once(self, ico):
        darts = []
        for f in ico.faces():
            for i in range(len(f)):
                darts.append((f[i], f[(i + 1) % len(f)]))
        assert len(darts) == 2 * ico.m
        assert len(set(darts)) == len(darts)

    def test_face_length_sum(self, graph_cube):
        assert sum(len(f) for f in graph_cube.faces()) == 2 * graph_cube.m


class TestTriangulate:
    def test_k4_unchanged(self, graph_k4):
        t = triangulate(graph_k4)
        assert t.m == graph_k4.m and t.n == 4

    def test_c5(self):
        t = triangulate(embedded_cycle(5))
        assert t.n == 5 and t.m == 9
        assert t.is_triangulation()

    def test_cube(self, graph_cube):
        t = triangulate(graph_cube)
        assert t.n == 8 and t.m == 18
        assert t.is_triangulation()

    def test_supergraph(self, graph_cube):
        t = triangulate(graph_cube)
        for u, v in graph_cube.edges():
            assert t.adjacent(u, v)

    def test_deterministic(self, graph_cube):
        assert triangulate(graph_cube).serialize() == triangulate(graph_cube).serialize()

    def test_too_small(self):
        with pytest.raises(GraphError):
            triangulate(parse_rotation_graph("2 1\n1: 2\n2: 1\n"))

    def test_path_with_cut_vertex(self):
        g = parse_rotation_graph("3 2\n1: 2\n2: 1 3\n3: 2\n")
        t = triangulate(g)
        assert t.m == 3 and t.is_triangulation()

    def test_random_sparse(self):
        rng = random.Random(7)
        for seed in range(8):
            g = generate(GenSpec(seed=seed, n=30))
            rot = {v: list(g.rotation(v)) for v in g.vertices}
            edges = [(u, v) for u, v in g.edges()]
            rng.shuffle(edges)
            for u, v in edges[:20]:
                rot[u].remove(v)
                rot[v].remove(u)
            h = EmbeddedGraph(rot)
            if not h.is_connected():
                continue
            t = triangulate(h)
            assert t.is_triangulation() and t.m == 3 * t.n - 6


class TestSeparatingTriangles:
    def test_icosahedron_brute(self, ico):
        assert separating_triangles(ico) == []
        assert brute_separating_triangles(ico) == []

    def test_stacked(self, graph_stacked):
        assert separating_triangles(graph_stacked) == [(1, 2, 3)]

    def test_k4(self, graph_k4):
        assert separating_triangles(graph_k4) == []

    def test_matches_brute_on_corpus(self):
        for seed in range(6):
            g = generate(GenSpec(seed=seed, n=18))
            assert separating_triangles(g) == sorted(brute_separating_triangles(g))


class TestCommonNeighbors:
    def test_icosahedron_adjacent(self, ico):
        for u in ico.vertices:
            for v in ico.rotation(u):
                if v > u:
                    cn = common_neighbors(ico, u, v)
                    assert len(cn.vertices) == 2
                    assert cn.is_k1_k2_union

    def test_k4(self, graph_k4):
        cn = common_neighbors(graph_k4, 1, 2)
        assert cn.vertices == frozenset({3, 4})
        assert cn.components == ((3, 4),)

    def test_distance3_empty(self):
        g = embedded_cycle(7)
        cn = common_neighbors(g, 1, 4)
        assert cn.vertices == frozenset()

    def test_same_vertex_error(self, ico):
        with pytest.raises(GraphError):
            common_neighbors(ico, 1, 1)


class TestNeighborCycle:
    def test_icosahedron_c5(self, ico):
        for v in ico.vertices:
            nc = neighbor_cycle(ico, v)
            assert nc.is_cycle and nc.is_induced_cycle
            assert len(nc.order) == 5

    def test_k4_c3(self, graph_k4):
        nc = neighbor_cycle(graph_k4, 1)
        assert nc.is_cycle and len(nc.order) == 3

    def test_stacked_flags_chords(self, graph_stacked):
        # apex of the glue triangle: clean C3
        nc4 = neighbor_cycle(graph_stacked, 4)
        assert nc4.is_cycle and nc4.is_induced_cycle
        # glue-triangle vertices see chords (the separating triangle)
        nc1 = neighbor_cycle(graph_stacked, 1)
        assert nc1.is_cycle and not nc1.is_induced_cycle
        assert nc1.chords


class TestDeleteContract:
    def test_contract_k4_edge(self, graph_k4):
        g, w = graph_k4.contract_set({1, 2})
        assert g.n == 3 and g.m == 3
        assert w == 5
        assert g.is_triangulation()

    def test_contract_path_icosahedron(self, ico):
        u = ico.rotation(1)[0]
        u2 = ico.rotation(1)[2]  # distance 2 around vertex 1's ring
        g, w = ico.contract_set({1, u, u2})
        assert g.n == 10
        assert g.m <= 3 * g.n - 6
        assert euler_ok(g)

    def test_delete_closed_neighborhood(self, ico):
        g = ico.delete_set(set(ico.neighbors(1)) | {1})
        assert g.n == 6

    def test_contract_disconnected_error(self, ico):
        far = [v for v in ico.vertices if v != 1 and not ico.adjacent(1, v)]
        with pytest.raises(GraphError, match="connected"):
            ico.contract_set({1, far[0]})

    def test_ids_never_reused(self, ico):
        g, w = ico.contract_set({1, ico.rotation(1)[0]})
        g2, w2 = g.contract_set({w, g.rotation(w)[0]})
        assert w2 > w > max(ico.vertices)

    def test_contract_keeps_embedding_on_corpus(self):
        for seed in range(5):
            g = generate(GenSpec(seed=seed, n=25))
            v = g.vertices[seed % g.n]
            part = {v} | set(g.rotation(v)[:2])
            h, w = g.contract_set(part)
            assert euler_ok(h)
            assert h.n == g.n - len(part) + 1


class TestIndependenceUnderOps:
    def test_contraction_lift_small(self):
        # independent sets of a contraction lift back after removing the
        # merged vertex; checked exhaustively on small graphs
        import itertools
        from pig import mis

        for seed in range(4):
            g = generate(GenSpec(seed=seed, n=12))
            v = g.vertices[0]
            part = {v} | set(g.rotation(v)[:1])
            h, w = g.contract_set(part)
            for r in range(1, 4):
                for c in itertools.combinations(h.vertices, r):
                    if not mis.verify_independent(h, c):
                        continue
                    base = [x for x in c if x != w]
                    assert mis.verify_independent(g, base)

    def test_triangulate_alpha_monotone(self):
        from pig import mis

        for seed in range(5):
            g = generate(GenSpec(seed=seed, n=16))
            rot = {v: list(g.rotation(v)) for v in g.vertices}
            rng = random.Random(seed)
            edges = g.edges()
            rng.shuffle(edges)
            for u, v in edges[:10]:
                rot[u].remove(v)
                rot[v].remove(u)
            h = EmbeddedGraph(rot)
            if not h.is_connected():
                continue
            t = triangulate(h)
            assert mis.alpha(t) <= mis.alpha(h)
