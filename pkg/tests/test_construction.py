import math
from fractions import Fraction

import pytest

from coopcolor.construction import (build_construction, construction_stats, copy_subgraph,
                                    extract_star_family, max_t_for_degree, shift, vertex_ratio)
from coopcolor.exhaustive import Status, solve_adapted_exact
from coopcolor.graphs import is_star_forest, max_degree


@pytest.mark.parametrize("i, x, expected", [(2, 1, 1), (2, 2, 3), (1, 3, 4), (4, 3, 3)])
def test_shift(i, x, expected):
    assert shift(i, x) == expected


def test_shift_never_hits_i():
    for t in range(1, 6):
        for i in range(1, t + 2):
            images = [shift(i, x, t) for x in range(1, t + 1)]
            assert i not in images
            assert sorted(images) == [y for y in range(1, t + 2) if y != i]


@pytest.mark.parametrize("i, x, t", [(1, 0, 3), (5, 1, 3), (1, 4, 3), (0, 1, 3)])
def test_shift_rejects_out_of_range(i, x, t):
    with pytest.raises(ValueError):
        shift(i, x, t)


# vertex counts 2, 5, 16, 65, ... from V_t = t*V_{t-1} + 1
V_EXPECTED = [2, 5, 16, 65, 326, 1957, 13700, 109601, 986410, 9864101]


def test_stats_values():
    for t, v in enumerate(V_EXPECTED, start=1):
        s = construction_stats(t)
        assert s.vertex_count == v
        assert s.max_mono_degree == (1 if t == 1 else V_EXPECTED[t - 2])
    assert construction_stats(4).vertex_count == 65 and construction_stats(4).max_mono_degree == 16


def test_vertex_ratio_is_exponential_partial_sum():
    for t in range(1, 12):
        partial = sum(Fraction(1, math.factorial(k)) for k in range(t + 1))
        assert vertex_ratio(t) == partial
    assert abs(float(vertex_ratio(10)) - math.e) < 2 / math.factorial(11)


def test_stats_overflow_guard():
    with pytest.raises(OverflowError):
        construction_stats(10 ** 6)


def _edge_oracle(t):
    # E_1 = 1, E_t = t*E_{t-1} + t*V_{t-1}
    e, v = 1, 2
    for s in range(2, t + 1):
        e, v = s * e + s * v, s * v + 1
    return e


@pytest.mark.parametrize("t", range(1, 7))
def test_build_matches_stats(t):
    c = build_construction(t)
    s = construction_stats(t)
    assert len(c.multigraph.vertices) == s.vertex_count
    assert len(c.multigraph.colored_edges) == s.edge_count == _edge_oracle(t)


def test_t2_by_hand():
    c = build_construction(2)
    assert c.apex == 4
    assert c.multigraph.colored_edges == ((0, 1, 2), (0, 4, 1), (1, 4, 1), (2, 3, 1), (2, 4, 2), (3, 4, 2))
    assert c.copy_map == {0: (1, 0), 1: (1, 1), 2: (2, 0), 3: (2, 1)}


@pytest.mark.parametrize("t", range(2, 6))
def test_apex_structure(t):
    c = build_construction(t)
    m = c.multigraph
    apex_edges = [(u, col) for u, v, col in m.colored_edges if v == c.apex]
    assert len(apex_edges) == len(m.vertices) - 1
    for u, col in apex_edges:
        assert c.copy_map[u][0] == col
    sizes = {}
    for _, (i, _) in c.copy_map.items():
        sizes[i] = sizes.get(i, 0) + 1
    assert set(sizes.values()) == {construction_stats(t - 1).vertex_count}
    assert len(sizes) == t


@pytest.mark.parametrize("t", range(1, 7))
def test_color_classes_are_star_forests(t):
    c = build_construction(t)
    delta = construction_stats(t).max_mono_degree
    degs = []
    for i in range(1, t + 1):
        g = c.multigraph.color_class(i)
        assert is_star_forest(g)
        degs.append(max_degree(g))
    assert max(degs) == delta


@pytest.mark.parametrize("t", [2, 3])
def test_recolored_copy_has_no_coloring_without_its_index(t):
    c = build_construction(t)
    for i in range(1, t + 1):
        h = copy_subgraph(c, i)
        reduced = [x for x in range(1, t + 1) if x != i]
        assert solve_adapted_exact(h, reduced).status is Status.UNSAT


def test_extract_star_family():
    assert extract_star_family(build_construction(1)).members[0].edges == {(0, 1)}
    fam = extract_star_family(build_construction(2))
    assert fam.k == 2 and fam.is_common and len(fam.universal_vertices) == 5
    assert all(is_star_forest(g) and max_degree(g) == 2 for g in fam.members)
    fam = extract_star_family(build_construction(3))
    assert fam.k == 3 and fam.max_degree() == 5


@pytest.mark.parametrize("d, t", [(1, 1), (2, 2), (4, 2), (5, 3), (15, 3), (16, 4), (64, 4), (65, 5), (100, 5), (325, 5), (326, 6)])
def test_max_t_for_degree(d, t):
    assert max_t_for_degree(d) == t


def test_cap():
    with pytest.raises(ValueError):
        build_construction(9)
    with pytest.raises(ValueError):
        build_construction(0)
