import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pascal_adic.diagram import Edge, PascalVertex
from pascal_adic.errors import MissingGuide
from pascal_adic.orders import build_guides, continuum_order, direction_path, fiber_audit
from pascal_adic.orders.guides import (
    GuidePath,
    _dyadic_terms,
    _pick_branch_vertex,
    branch_point_violations,
    distance_to_ray,
    intersection_violations,
    merging_vertices,
    pairwise_intersections,
)

P = PascalVertex
F = Fraction


@given(st.integers(0, 200), st.integers(0, 200))
def test_distance_to_diagonal(x, y):
    assert math.isclose(distance_to_ray(P(x, y), F(1, 2)), abs(x - y) / math.sqrt(2), abs_tol=1e-9)
    assert math.isclose(distance_to_ray(P(x, y), 0), y, abs_tol=1e-9)


def test_level_zero_is_the_axis():
    c = continuum_order(32, 0)
    assert list(c.guides) == [F(0)]
    assert c.guides[F(0)].vertices == [P(x, 0) for x in range(33)]
    assert all(c.order.label(Edge(P(x, 0), P(x + 1, 0))) == 0 for x in range(32))
    assert fiber_audit(c.order).ok


def test_half_guide_at_depth_512():
    c = continuum_order(512, 1)
    half = c.guides[F(1, 2)]
    step = c.steps[0]
    assert half.start == P(step.M, 0) and step.M >= 32
    assert half.start in c.guides[F(0)].vertices
    assert half.max_band_distance() < 2
    assert all(abs(v.i - v.j) / math.sqrt(2) < 2 for v in half.vertices if v.level >= half.stabilization_level)
    assert not intersection_violations(c.guides)
    assert fiber_audit(c.order).ok


@pytest.mark.parametrize("depth,level", [(512, 2), (512, 3), (1024, 2)])
def test_inductive_conditions(depth, level):
    guides, steps = build_guides(depth, level)
    assert len(guides) == 2**level
    assert max(len(s) for s in pairwise_intersections(guides).values()) <= 1
    assert not intersection_violations(guides)
    assert not branch_point_violations(guides)
    assert not merging_vertices(guides)
    assert all(g.max_band_distance() < 2 for g in guides.values())
    assert all(s.separation >= 5 for s in steps)
    for g in guides.values():
        for a, b in zip(g.vertices, g.vertices[1:]):
            assert (b.i - a.i, b.j - a.j) in ((1, 0), (0, 1))


def test_continuum_order_labels():
    c = continuum_order(512, 2)
    assert fiber_audit(c.order).ok
    assert not c.zero_edges & c.one_edges
    assert all(c.order.label(e) == 0 for e in c.zero_edges)
    assert all(c.order.label(e) == 1 for e in c.one_edges)
    # shifted copies stay below and above the diagonal
    assert all(e.range.j < e.range.i for e in c.zero_edges)
    assert all(e.range.i < e.range.j for e in c.one_edges)


def test_depth_precondition():
    with pytest.raises(ValueError):
        build_guides(100, 2)


def test_dyadic_terms():
    assert list(_dyadic_terms(F(5, 8))) == [(1, F(1, 2)), (3, F(5, 8))]
    assert list(_dyadic_terms(F(0))) == []


def test_direction_paths():
    c = continuum_order(256, 3)
    assert direction_path(0, c) == c.guides[F(0)].vertices
    g8 = c.guides[F(1, 8)]
    path = direction_path(F(1, 8), c)
    k = g8.start.level
    assert path[: k + 1] == c.guides[F(0)].vertices[: k + 1]
    assert path[k:] == g8.vertices
    assert all(b.level == a.level + 1 for a, b in zip(path, path[1:]))


def test_directions_sharing_a_prefix():
    c = continuum_order(512, 4)
    r1 = F(3, 16) + F(1, 96)
    r2 = F(1, 8) + F(1, 48)
    a, b = direction_path(r1, c), direction_path(r2, c)
    split = c.guides[F(3, 16)].start.level
    assert a[: split + 1] == b[: split + 1]
    assert a[split + 1] != b[split + 1]


def test_missing_guide():
    c = continuum_order(512, 1)
    with pytest.raises(MissingGuide):
        direction_path(F(1, 8), c)


def test_branch_vertex_tie_break():
    g = GuidePath(F(0), [P(0, 2), P(1, 2), P(2, 2)], 0)
    # all three points are at distance 2 from the axis ray at angle 0
    assert _pick_branch_vertex(g, F(0), 0) == P(0, 2)
