import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from affine_ncp import linalg as la
from affine_ncp.coxeter import (
    GroupSpec, adjacent_horizontals, appendix_walls, axial_cells, axial_chamber, build, c0_vertices,
    classify_reflection, elliptic_interval, horizontal_components, lemma_point, parabolic_coxeter_element,
    parabolic_coxeter_element_direct, parse_spec, product_lemma_check, reflections_containing, root_system_name,
    subgroup_arrangement, vertex_orbit, verticals_at, w_power,
)
from affine_ncp.shelling import all_factorizations
from oracles import catalan, coxeter_factorizations

ALL = ["A~2[2,1]", "A~3[2,2]", "A~3[3,1]", "B~3", "C~2", "C~3", "D~4", "G~2", "F~4"]


def test_parse_spec():
    assert parse_spec("A~2[2,1]") == GroupSpec("A", 2, 2, 1)
    assert parse_spec("A2") == GroupSpec("A", 2, 2, 1)
    assert parse_spec("C~3") == GroupSpec("C", 3)
    assert str(parse_spec("A3[2,2]")) == "A~3[2,2]"
    for bad in ["X7", "A~3[1,3]", "A~3[2,1]", "B~2", "E~5", "G~3", "C~3[2,1]", "A3(2,2)"]:
        with pytest.raises(ValueError):
            parse_spec(bad)


@pytest.mark.parametrize("g", ALL + ["E~6"])
def test_coxeter_element(g):
    s = build(g)
    assert s.product(s.simples) == s.w
    assert s.w.length == s.n + 1 and not s.w.elliptic
    assert len(c0_vertices(s)) == s.n + 1
    # mu is the translation part of w along its axis
    p = s.frame.point(0)
    assert s.w(p) == s.amb.canon(la.vadd(p, s.mu))


@pytest.mark.parametrize("g", ALL)
def test_positive_root_counts(g):
    s = build(g)
    expected = {"A~2[2,1]": 3, "A~3[2,2]": 6, "A~3[3,1]": 6, "B~3": 9, "C~2": 4, "C~3": 9, "D~4": 12,
                "G~2": 6, "F~4": 24}
    assert len(s.steps) == expected[g]


@pytest.mark.parametrize("g", ALL)
def test_parabolic_sizes_match_catalan(g):
    s = build(g)
    for b in c0_vertices(s):
        wb = parabolic_coxeter_element(s, b)
        assert wb == parabolic_coxeter_element_direct(s, b)
        name = root_system_name(subgroup_arrangement(s, reflections_containing(s, wb.mov_min_fix()[2])).dirs)
        assert len(elliptic_interval(s, wb).elements) == catalan(name), name


@pytest.mark.parametrize("g", ["A~2[2,1]", "C~2", "G~2", "B~3", "C~3", "A~3[3,1]"])
def test_factorization_counts(g):
    s = build(g)
    for b in c0_vertices(s):
        wb = parabolic_coxeter_element(s, b)
        name = root_system_name(subgroup_arrangement(s, reflections_containing(s, wb.mov_min_fix()[2])).dirs)
        assert len(all_factorizations(s, wb)) == coxeter_factorizations(name)


def test_exceptional_parabolics():
    s = build("E~6")
    names = sorted(root_system_name(subgroup_arrangement(s, reflections_containing(
        s, parabolic_coxeter_element(s, b).mov_min_fix()[2])).dirs) for b in c0_vertices(s))
    assert names == ["A1 x A5"] * 3 + ["A2 x A2 x A2"] + ["E6"] * 3


@pytest.mark.parametrize("g", ALL)
def test_axial_vertices_fall_in_orbits(g):
    s = build(g)
    cells = axial_cells(s, (-3, 4))
    assert set(cells.orbit_id.values()) <= set(range(s.n + 1))
    for v in cells.vertices:
        k, j = vertex_orbit(s, v)
        assert w_power(s, j)(c0_vertices(s)[k]) == s.amb.canon(v)
    for ch in cells.chambers:
        assert not s.arr.on_hyperplane(ch.sample_point)
        assert len(ch.walls) == s.n + 1


def test_a2_three_vertex_orbits():
    s = build("A~2[2,1]")
    assert len(set(axial_cells(s, (-4, 6)).orbit_id.values())) == 3


@pytest.mark.parametrize("g", ALL)
def test_axial_chamber_translates(g):
    s = build(g)
    P = int(1 / s.frame.spacing)
    for i in range(-2, 3):
        a, b = axial_chamber(s, i), axial_chamber(s, i + P)
        assert {s.amb.canon(s.w(v)) for v in a.vertices(s.amb)} == {s.amb.canon(v) for v in b.vertices(s.amb)}


@pytest.mark.parametrize("g", ALL)
def test_horizontal_strip(g):
    s = build(g)
    hor = adjacent_horizontals(s)
    for r in hor:
        assert classify_reflection(s, r) == "Horizontal"
    comps = horizontal_components(s)
    assert sum(c.rank for c in comps.components) == s.n - 1
    assert comps.t.is_translation()


def test_verticals_at_a2_points():
    s = build("A~2[2,1]")
    for i in range(-5, 6):
        assert len(verticals_at(s, i)) == 1


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_product_lemma_random(seed):
    rng = random.Random(seed)
    for g in ("A~3[2,2]", "B~3", "C~3", "D~4"):
        s = build(g)
        assert product_lemma_check(s, lemma_point(s, rng)).ok


def test_spacing_values():
    assert build("A~3[2,2]").frame.spacing == F(1, 2)
    assert build("A~4[3,2]").frame.spacing == F(1, 5)
    assert build("G~2").frame.spacing == F(1, 2)


@pytest.mark.parametrize("g", ["B~3", "B~4", "C~2", "C~3", "C~5", "D~4", "D~5"])
def test_coordinate_chamber_walls_give_w(g):
    # second route to w: the walls of the coordinate chamber, multiplied in order
    s = build(g)
    assert s.product(appendix_walls(s.spec)) == s.w
