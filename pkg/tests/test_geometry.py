"""Geometry primitives: distances, bisectors, clipping, arc booleans."""

import math
import random

import pytest

from coveragekit.errors import ConcentricDisks, InvalidChain
from coveragekit.geometry import (ArcPolygon, CircularArc, ConvexPolygon, Disk,
                                  HalfPlane, Point2, Rect, Segment, TWO_PI,
                                  arc_polygon_area, arc_polygon_contains,
                                  clip_convex, convex_polygon_intersection,
                                  power_bisector, power_distance,
                                  region_disk_boolean, signed_distance)
from oracles import grid_boolean_area, lens_area

UNIT_SQUARE = ConvexPolygon((Point2(0, 0), Point2(1, 0), Point2(1, 1), Point2(0, 1)))


def test_signed_distance_values():
    d = Disk(Point2(0, 0), 3.0)
    assert signed_distance(Point2(5, 0), d) == pytest.approx(2.0)
    assert signed_distance(Point2(3, 0), d) == pytest.approx(0.0)
    assert signed_distance(Point2(0, 0), d) == pytest.approx(-3.0)


def test_power_distance_values():
    d = Disk(Point2(0, 0), 3.0)
    assert power_distance(Point2(5, 0), d) == pytest.approx(16.0)
    assert power_distance(Point2(3, 0), d) == pytest.approx(0.0)
    assert power_distance(Point2(0, 0), d) == pytest.approx(-9.0)


def test_signed_distance_order_matches_euclidean_for_equal_radii():
    rng = random.Random(7)
    d1 = Disk(Point2(1.0, 2.0), 1.5)
    d2 = Disk(Point2(-2.0, 0.5), 1.5)
    for _ in range(500):
        x = Point2(rng.uniform(-5, 5), rng.uniform(-5, 5))
        lhs = signed_distance(x, d1) < signed_distance(x, d2)
        rhs = math.dist((x.x, x.y), (1.0, 2.0)) < math.dist((x.x, x.y), (-2.0, 0.5))
        assert lhs == rhs


def test_power_bisector_equal_radii_is_perpendicular_bisector():
    h = power_bisector(Disk(Point2(0, 0), 1), Disk(Point2(4, 0), 1))
    # boundary x = 2
    assert h.value(Point2(2, 17)) == pytest.approx(0.0)
    assert h.value(Point2(1, 0)) < 0 < h.value(Point2(3, 0))


def test_power_bisector_unequal_radii():
    h = power_bisector(Disk(Point2(0, 0), 2), Disk(Point2(4, 0), 0))
    assert h.value(Point2(2.5, -3)) == pytest.approx(0.0)
    assert h.value(Point2(2.4, 0)) < 0 < h.value(Point2(2.6, 0))


def test_power_bisector_vertical_symmetry():
    h = power_bisector(Disk(Point2(0, 0), 1), Disk(Point2(0, 6), 1))
    assert h.value(Point2(100, 3)) == pytest.approx(0.0)


def test_power_bisector_concentric_raises():
    with pytest.raises(ConcentricDisks):
        power_bisector(Disk(Point2(1, 1), 1), Disk(Point2(1, 1), 2))


def test_power_bisector_boundary_residual_property():
    rng = random.Random(3)
    for _ in range(20):
        d1 = Disk(Point2(rng.uniform(-10, 10), rng.uniform(-10, 10)), rng.uniform(0, 5))
        d2 = Disk(Point2(rng.uniform(-10, 10), rng.uniform(-10, 10)), rng.uniform(0, 5))
        if math.dist((d1.center.x, d1.center.y), (d2.center.x, d2.center.y)) < 1e-6:
            continue
        h = power_bisector(d1, d2)
        nn = math.hypot(h.nx, h.ny)
        p0x, p0y = h.nx * h.offset / nn**2, h.ny * h.offset / nn**2
        dx, dy = -h.ny / nn, h.nx / nn
        for _ in range(50):
            t = rng.uniform(-30, 30)
            x = Point2(p0x + t * dx, p0y + t * dy)
            scale = 30.0
            assert abs(power_distance(x, d1) - power_distance(x, d2)) <= 1e-9 * scale**2


def test_clip_convex_basic():
    r = clip_convex(UNIT_SQUARE, HalfPlane(1, 0, 0.5))
    assert r is not None
    assert r.area() == pytest.approx(0.5)
    assert clip_convex(UNIT_SQUARE, HalfPlane(1, 0, 2.0)).area() == pytest.approx(1.0)
    assert clip_convex(UNIT_SQUARE, HalfPlane(1, 0, -1.0)) is None


def test_convex_polygon_intersection():
    tri = ConvexPolygon((Point2(0, 0), Point2(2, 0), Point2(0, 2)))
    same = convex_polygon_intersection(tri, tri)
    assert same.area() == pytest.approx(tri.area())
    shifted = ConvexPolygon((Point2(0.5, 0.5), Point2(1.5, 0.5),
                             Point2(1.5, 1.5), Point2(0.5, 1.5)))
    inter = convex_polygon_intersection(UNIT_SQUARE, shifted)
    assert inter.area() == pytest.approx(0.25)
    far = ConvexPolygon((Point2(5, 5), Point2(6, 5), Point2(6, 6)))
    assert convex_polygon_intersection(UNIT_SQUARE, far) is None


def test_area_full_circle():
    circle = ArcPolygon((CircularArc(Disk(Point2(0, 0), 1.0), 0.0, 0.0),))
    assert arc_polygon_area(circle) == pytest.approx(math.pi, abs=1e-9)


def test_area_unit_square_chain():
    square = ArcPolygon((Segment(Point2(0, 0), Point2(1, 0)),
                         Segment(Point2(1, 0), Point2(1, 1)),
                         Segment(Point2(1, 1), Point2(0, 1)),
                         Segment(Point2(0, 1), Point2(0, 0))))
    assert arc_polygon_area(square) == pytest.approx(1.0)


def test_area_half_disk():
    d = Disk(Point2(0, 0), 1.0)
    half = ArcPolygon((Segment(Point2(-1, 0), Point2(1, 0)),
                       CircularArc(d, 0.0, math.pi)))
    assert arc_polygon_area(half) == pytest.approx(math.pi / 2)


def test_area_rejects_open_chain():
    bad = ArcPolygon((Segment(Point2(0, 0), Point2(1, 0)),
                      Segment(Point2(1, 0), Point2(1, 1))))
    with pytest.raises(InvalidChain):
        arc_polygon_area(bad)


def test_area_rejects_self_intersection():
    bow = ArcPolygon((Segment(Point2(0, 0), Point2(1, 1)),
                      Segment(Point2(1, 1), Point2(1, 0)),
                      Segment(Point2(1, 0), Point2(0, 1)),
                      Segment(Point2(0, 1), Point2(0, 0))))
    with pytest.raises(InvalidChain):
        arc_polygon_area(bow)


BIG = ConvexPolygon((Point2(-2, -2), Point2(2, -2), Point2(2, 2), Point2(-2, 2)))


def test_boolean_disjoint_exclude_gives_full_circle():
    out = region_disk_boolean(BIG, Disk(Point2(0, 0), 1), Disk(Point2(10, 10), 1))
    assert len(out) == 1
    assert arc_polygon_area(out[0]) == pytest.approx(math.pi, rel=1e-9)
    assert len(out[0].edges) == 1


def test_boolean_exclude_covers_include():
    out = region_disk_boolean(BIG, Disk(Point2(0, 0), 1), Disk(Point2(0, 0), 2))
    assert out == []


def test_boolean_lens_subtraction_matches_oracles():
    include = Disk(Point2(0, 0), 1.0)
    exclude = Disk(Point2(1.5, 0), 1.0)
    out = region_disk_boolean(BIG, include, exclude)
    area = sum(arc_polygon_area(ap) for ap in out)
    expected = math.pi - lens_area(1.0, 1.0, 1.5)
    assert area == pytest.approx(expected, rel=1e-6)
    win = Rect(-2, -2, 2, 2)
    grid = grid_boolean_area(BIG, include, exclude, win, n=1000)
    assert abs(area - grid) <= 0.005 * win.area()


def test_boolean_hole_is_split_not_dropped():
    include = Disk(Point2(0, 0), 1.5)
    exclude = Disk(Point2(0.2, 0.1), 0.4)
    out = region_disk_boolean(BIG, include, exclude)
    area = sum(arc_polygon_area(ap) for ap in out)
    assert area == pytest.approx(math.pi * 1.5**2 - math.pi * 0.4**2, rel=1e-6)
    assert len(out) == 2  # split along a chord through the hole


def test_boolean_polygon_clips_circle():
    region = ConvexPolygon((Point2(0, -2), Point2(2, -2), Point2(2, 2), Point2(0, 2)))
    out = region_disk_boolean(region, Disk(Point2(0, 0), 1), Disk(Point2(9, 9), 0.1))
    area = sum(arc_polygon_area(ap) for ap in out)
    assert area == pytest.approx(math.pi / 2, rel=1e-6)


def test_boolean_random_instances_match_grid_oracle():
    rng = random.Random(11)
    win = Rect(-2, -2, 2, 2)
    for _ in range(25):
        include = Disk(Point2(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                       rng.uniform(0.2, 1.4))
        exclude = Disk(Point2(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                       rng.uniform(0.1, 1.5))
        out = region_disk_boolean(BIG, include, exclude)
        area = sum(arc_polygon_area(ap) for ap in out)
        grid = grid_boolean_area(BIG, include, exclude, win, n=700)
        assert abs(area - grid) <= 0.005 * win.area()
        # never negative, never more than the clipped include disk
        assert area >= 0.0
        cap = min(math.pi * include.radius**2, BIG.area())
        assert area <= cap + 1e-9


def test_boolean_area_bounded_by_include_in_region():
    include = Disk(Point2(0.5, 0.5), 0.3)
    exclude = Disk(Point2(0.6, 0.5), 0.2)
    out = region_disk_boolean(UNIT_SQUARE, include, exclude)
    area = sum(arc_polygon_area(ap) for ap in out)
    full = region_disk_boolean(UNIT_SQUARE, include, Disk(Point2(50, 50), 0.1))
    full_area = sum(arc_polygon_area(ap) for ap in full)
    assert 0.0 <= area <= full_area + 1e-12


def test_arc_polygon_contains():
    circle = ArcPolygon((CircularArc(Disk(Point2(0, 0), 1.0), 0.0, 0.0),))
    assert arc_polygon_contains(circle, Point2(0.3, 0.2))
    assert not arc_polygon_contains(circle, Point2(1.5, 0.0))
