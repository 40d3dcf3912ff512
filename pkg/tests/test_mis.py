import random

import pytest

from pig import mis
from pig.generate import GenSpec, generate
from pig.graph import embedded_cycle

from conftest import brute_alpha


def test_icosahedron(ico):
    assert mis.alpha(ico) == 3 == brute_alpha(ico)
    s = mis.mis_exact(ico)
    assert len(s) == 3 and mis.verify_independent(ico, s)


def test_k4(graph_k4):
    assert mis.alpha(graph_k4) == 1
    assert mis.mis_exact(graph_k4) == (1,)


def test_edgeless():
    from pig.graph import EmbeddedGraph

    g = EmbeddedGraph({i: () for i in range(1, 8)})
    assert mis.alpha(g) == 7
    assert mis.mis_exact(g) == tuple(range(1, 8))


def test_cycles():
    for k in range(3, 10):
        g = embedded_cycle(k)
        assert mis.alpha(g) == k // 2
    assert mis.alpha_at_least(embedded_cycle(7), 3)
    assert not mis.alpha_at_least(embedded_cycle(7), 4)


def test_alpha_at_least_boundaries(ico):
    assert mis.alpha_at_least(ico, 0)
    assert mis.alpha_at_least(ico, 3)
    assert not mis.alpha_at_least(ico, 4)
    assert not mis.alpha_at_least(ico, 13)


def test_verify_independent(ico):
    assert mis.verify_independent(ico, ())
    u = ico.rotation(1)[0]
    assert not mis.verify_independent(ico, (1, u))
    with pytest.raises(KeyError):
        mis.verify_independent(ico, (999,))


def test_random_graphs_match_brute():
    rng = random.Random(4)
    for trial in range(25):
        n = rng.randint(2, 11)
        edges = {
            (i, j)
            for i in range(1, n + 1)
            for j in range(i + 1, n + 1)
            if rng.random() < 0.4
        }

        class Bare:
            vertices = tuple(range(1, n + 1))

            def neighbors(self, v):
                return frozenset(
                    b if a == v else a for a, b in edges if v in (a, b)
                )

            def has_vertex(self, v):
                return 1 <= v <= n

        g = Bare()
        a = brute_alpha(g)
        assert mis.alpha(g) == a
        s = mis.mis_exact(g)
        assert len(s) == a and mis.verify_independent(g, s)
        assert mis.alpha_at_least(g, a) and not mis.alpha_at_least(g, a + 1)


def test_lexicographic_tiebreak():
    # C4: optima {1,3} and {2,4}; must return {1,3}
    g = embedded_cycle(4)
    assert mis.mis_exact(g) == (1, 3)


def test_planar_corpus_alpha_at_least_consistency():
    for seed in range(6):
        g = generate(GenSpec(seed=seed, n=18))
        a = mis.alpha(g)
        assert a == brute_alpha(g)
        assert mis.alpha_at_least(g, a)
        assert not mis.alpha_at_least(g, a + 1)


def test_budget_guard():
    rng = random.Random(9)
    n = 40
    edges = {
        (i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        if rng.random() < 0.5
    }

    class Bare:
        vertices = tuple(range(1, n + 1))

        def neighbors(self, v):
            return frozenset(b if a == v else a for a, b in edges if v in (a, b))

        def has_vertex(self, v):
            return 1 <= v <= n

    with pytest.raises(mis.OracleBudgetExceeded):
        mis.alpha(Bare(), budget=5)


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("PIG_ORACLE_BUDGET", "123")
    assert mis.default_budget() == 123
    monkeypatch.setenv("PIG_ORACLE_BUDGET", "junk")
    assert mis.default_budget() == mis.DEFAULT_BUDGET


def test_big_seven_plus_windows_have_alpha_four():
    # windows holding a 7⁺-vertex and its whole neighborhood, 10+ vertices,
    # always contain an independent 4-set in these triangulations
    rng = random.Random(0)
    checked = 0
    for seed in range(12):
        g = generate(
            GenSpec(seed=seed, n=60, min_degree5=True, no_separating_triangle=True)
        )
        for v in g.vertices:
            if g.degree(v) < 7:
                continue
            closed = {v} | set(g.neighbors(v))
            extra = [u for u in g.vertices if u not in closed]
            rng.shuffle(extra)
            window = closed | set(extra[: max(0, 10 - len(closed)) + 2])
            if len(window) >= 10:
                assert mis.alpha_at_least(g, 4, vertices=window)
                checked += 1
            if checked >= 40:
                return
    assert checked > 0
