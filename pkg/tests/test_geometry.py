import math

import numpy as np
import pytest
from hypothesis import example, given, settings, strategies as st

from hyperpd.errors import DimensionMismatch
from hyperpd.geometry import (HPoint, PointSet, Space, apply, boost, circle_angles,
                              circle_distance, distance, distance_matrix, lobachevsky_point,
                              minkowski, origin, polar_point, rotation, sample_ball)

radii = st.floats(0, 8)
angles = st.floats(0, 2 * math.pi)


def h2_point(r, theta):
    return polar_point(r, (math.cos(theta), math.sin(theta)))


def test_origin_distance():
    o = origin(2)
    assert distance(o, o) == 0.0
    assert distance(o, polar_point(1.7, (1, 0))) == pytest.approx(1.7, rel=1e-14)
    assert distance(origin(3), polar_point(4.0, (0, 0, 1))) == pytest.approx(4.0, rel=1e-14)


def test_small_distances_keep_precision():
    p = polar_point(1e-9, (1, 0))
    assert distance(origin(2), p) == pytest.approx(1e-9, rel=1e-12)


def test_normalization_checked():
    with pytest.raises(ValueError):
        HPoint((1.0, 0.5, 0.0))
    with pytest.raises(ValueError):
        HPoint((-1.0, 0.0, 0.0))
    with pytest.raises(DimensionMismatch):
        distance(origin(2), origin(3))


@given(radii, angles, radii, angles, radii, angles)
def test_triangle_inequality(r1, a1, r2, a2, r3, a3):
    p, q, s = h2_point(r1, a1), h2_point(r2, a2), h2_point(r3, a3)
    assert distance(p, q) == distance(q, p)
    assert distance(p, s) <= distance(p, q) + distance(q, s) + 1e-10


@given(radii, angles, st.floats(-3, 3), st.floats(0, 2 * math.pi))
def test_isometries_preserve_distance(r, a, s, phi):
    p, q = h2_point(r, a), h2_point(1.0, 0.3)
    m = boost(2, 1, s) @ rotation(2, 1, 2, phi)
    assert distance(apply(m, p), apply(m, q)) == pytest.approx(distance(p, q), abs=1e-9)


@given(st.floats(-4, 4), st.floats(-4, 4))
@example(0.0, 1e-9)
def test_lobachevsky_pythagoras(u, v):
    p = lobachevsky_point(u, v)
    assert abs(minkowski(p.as_array(), p.as_array()) - 1) < 1e-12 * p.coords[0] ** 2
    # cosh d = cosh u cosh v, written without cancellation as
    # 2 sinh^2(d/2) = 2 sinh^2(u/2) + 2 sinh^2(v/2) + 4 sinh^2(u/2) sinh^2(v/2)
    su, sv = math.sinh(u / 2) ** 2, math.sinh(v / 2) ** 2
    d = 2 * math.asinh(math.sqrt(su + sv + 2 * su * sv))
    assert distance(origin(2), p) == pytest.approx(d, rel=1e-9, abs=1e-300)


def test_lobachevsky_axes():
    assert distance(origin(2), lobachevsky_point(0, 0)) == 0
    assert distance(origin(2), lobachevsky_point(-1.5, 0)) == pytest.approx(1.5)
    assert distance(origin(2), lobachevsky_point(1, 1)) == pytest.approx(
        math.acosh(math.cosh(1) ** 2), rel=1e-14)


def test_circle_configurations():
    assert circle_angles(2) == [0.0, math.pi]
    assert circle_angles(4) == pytest.approx([0, math.pi / 2, math.pi, 3 * math.pi / 2])
    th = circle_angles(4)
    d = np.array([[circle_distance(a, b) for b in th] for a in th])
    for k in range(4):
        assert d[k] == pytest.approx(np.roll([0, math.pi / 2, math.pi, math.pi / 2], k))
    with pytest.raises(ValueError):
        circle_angles(1)


class TestSampling:

    def test_deterministic(self):
        assert sample_ball(2, 3.0, 50, 7) == sample_ball(2, 3.0, 50, 7)
        assert sample_ball(3, 3.0, 50, 7) != sample_ball(3, 3.0, 50, 8)

    @pytest.mark.parametrize("dim", [2, 3])
    def test_within_ball(self, dim):
        pts = sample_ball(dim, 2.5, 200, 1)
        r = distance_matrix(np.vstack([origin(dim).as_array(), pts.coords()]))[0, 1:]
        assert np.all(r <= 2.5 + 1e-12)
        assert pts.dim == dim

    def test_tiny_radius(self):
        pts = sample_ball(2, 1e-12, 1, 0)
        assert distance(origin(2), pts.points[0]) <= 1e-12

    def test_radial_moment_h2(self):
        # E[cosh r] for density sinh r on [0, 2]
        R = 2.0
        expected = (0.5 * math.sinh(R) ** 2) / (math.cosh(R) - 1)
        pts = sample_ball(2, R, 100_000, 3)
        assert np.mean(pts.coords()[:, 0]) == pytest.approx(expected, rel=5e-3)

    def test_radial_moment_h3(self):
        # E[cosh r] for density sinh^2 r on [0, 2]
        R = 2.0
        num = math.sinh(R) ** 3 / 3
        den = 0.5 * (math.sinh(R) * math.cosh(R) - R)
        pts = sample_ball(3, R, 20_000, 4)
        assert np.mean(pts.coords()[:, 0]) == pytest.approx(num / den, rel=1e-2)


def test_pointset_csv_roundtrip():
    pts = sample_ball(3, 4.0, 30, 11)
    text = pts.to_csv()
    assert text.splitlines()[1] == "dim,x0,x1,x2,x3"
    back = PointSet.from_csv(text)
    assert back == pts
    assert back.seed == 11 and back.radius_bound == 4.0


def test_pointset_invariants():
    with pytest.raises(DimensionMismatch):
        PointSet((origin(2), origin(3)))
    with pytest.raises(ValueError):
        PointSet((polar_point(3.0, (1, 0)),), radius_bound=1.0)


def test_space_weights():
    r = np.array([0.0, 0.5, 3.0])
    assert Space.H2.weight(r) == pytest.approx(2 * math.pi * np.sinh(r))
    assert Space.H3.weight(r) == pytest.approx(4 * math.pi * np.sinh(r) ** 2)
    assert np.exp(Space.H3.log_weight(r[1:])) == pytest.approx(Space.H3.weight(r[1:]), rel=1e-14)
    assert Space.parse("h3") is Space.H3
    with pytest.raises(ValueError):
        Space.parse("h4")


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_sampled_points_normalized(seed):
    for p in sample_ball(3, 6.0, 10, seed).points:
        x = p.as_array()
        assert abs(minkowski(x, x) - 1) <= 1e-12 * x[0] ** 2
