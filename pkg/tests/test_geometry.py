"""Point queries and convex pair distances, cross-checked against sampling."""
import math

import numpy as np
import pytest

from virtlab.geometry import (
    Box,
    Capsule,
    Cylinder,
    Plane,
    Sphere,
    aabb,
    pair_distance,
    point_query,
)
from virtlab.scene import axis_angle_matrix, translation_matrix

from oracle import oracle_pair

I4 = np.eye(4)


def _tf(translation, axis=(0, 0, 1), angle=0.0):
    return translation_matrix(translation) @ axis_angle_matrix(axis, angle)


class TestPointQuery:
    def test_sphere_outside(self):
        d, sp, n = point_query(Sphere(1.0), I4, (2, 0, 0))
        assert d == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(sp, [1, 0, 0])
        assert np.allclose(n, [1, 0, 0])

    def test_sphere_inside_signed(self):
        d, sp, n = point_query(Sphere(1.0), I4, (0.5, 0, 0))
        assert d == pytest.approx(-0.5, abs=1e-12)
        assert np.allclose(sp, [1, 0, 0])

    def test_plane(self):
        d, sp, n = point_query(Plane((0, 1, 0), 0.0), I4, (3, 2, 0))
        assert d == pytest.approx(2.0, abs=1e-12)
        assert np.allclose(sp, [3, 0, 0])
        assert np.allclose(n, [0, 1, 0])

    def test_box_face_edge_corner(self):
        b = Box((1, 1, 1))
        d, sp, n = point_query(b, I4, (2, 0, 0))
        assert d == pytest.approx(1.0) and np.allclose(n, [1, 0, 0])
        d, _, _ = point_query(b, I4, (2, 2, 0))
        assert d == pytest.approx(math.sqrt(2))
        d, _, _ = point_query(b, I4, (2, 2, 2))
        assert d == pytest.approx(math.sqrt(3))

    def test_box_inside_nearest_face(self):
        d, sp, n = point_query(Box((1, 2, 3)), I4, (0.5, 0, 0))
        assert d == pytest.approx(-0.5)
        assert np.allclose(sp, [1, 0, 0]) and np.allclose(n, [1, 0, 0])

    def test_cylinder_side_and_cap(self):
        c = Cylinder(radius=1.0, half_height=2.0)
        d, _, n = point_query(c, I4, (3, 0, 0))
        assert d == pytest.approx(2.0) and np.allclose(n, [1, 0, 0])
        d, _, n = point_query(c, I4, (0, 5, 0))
        assert d == pytest.approx(3.0) and np.allclose(n, [0, 1, 0])
        d, _, _ = point_query(c, I4, (2, 3, 0))  # rim region
        assert d == pytest.approx(math.sqrt(2))

    def test_capsule(self):
        cap = Capsule(radius=0.5, half_length=1.0)
        d, _, n = point_query(cap, I4, (0, 3, 0))
        assert d == pytest.approx(1.5) and np.allclose(n, [0, 1, 0])
        d, _, n = point_query(cap, I4, (2, 0, 0))
        assert d == pytest.approx(1.5) and np.allclose(n, [1, 0, 0])

    def test_transformed_query(self):
        tf = _tf((5, 0, 0), (0, 0, 1), math.pi / 2)
        d, sp, n = point_query(Box((1, 2, 1)), tf, (8, 0, 0))
        # box local y axis now points along world -x; world x extent is 2
        assert d == pytest.approx(1.0)
        assert np.allclose(sp, [7, 0, 0], atol=1e-12)

    def test_normal_is_unit_everywhere(self):
        rng = np.random.default_rng(3)
        shapes = [Sphere(0.7), Box((0.5, 0.8, 0.3)),
                  Cylinder(0.4, 0.6), Capsule(0.3, 0.5)]
        for shape in shapes:
            for _ in range(200):
                p = rng.uniform(-2, 2, 3)
                d, sp, n = point_query(shape, I4, p)
                assert abs(np.linalg.norm(n) - 1) < 1e-9
                # surface point must sit on the boundary
                d2, _, _ = point_query(shape, I4, sp)
                assert abs(d2) < 1e-7


class TestPairDistance:
    def test_sphere_sphere_exact(self):
        d = pair_distance(Sphere(1), I4, Sphere(2), _tf((10, 0, 0)))
        assert d == pytest.approx(7.0, abs=1e-9)

    def test_sphere_sphere_penetration_negative(self):
        d = pair_distance(Sphere(1), I4, Sphere(1), _tf((1.5, 0, 0)))
        assert d == pytest.approx(-0.5, abs=1e-9)

    def test_aligned_boxes_exact(self):
        d = pair_distance(Box((1, 1, 1)), I4, Box((1, 1, 1)), _tf((5, 0, 0)))
        assert d == pytest.approx(3.0, abs=1e-9)

    def test_capsule_capsule_parallel(self):
        a = Capsule(0.2, 1.0)
        b = Capsule(0.3, 1.0)
        d = pair_distance(a, I4, b, _tf((2, 0, 0)))
        assert d == pytest.approx(1.5, abs=1e-9)

    def test_cylinder_box_touching(self):
        d = pair_distance(Cylinder(1, 1), I4, Box((1, 1, 1)), _tf((2, 0, 0)))
        assert abs(d) < 1e-6

    def test_matches_sampling_oracle(self):
        rng = np.random.default_rng(7)
        shapes = [Sphere(0.3), Box((0.3, 0.2, 0.4)),
                  Cylinder(0.25, 0.35), Capsule(0.15, 0.3)]
        trials = 0
        for _ in range(30):
            sa, sb = rng.choice(len(shapes), 2)
            axis_a = rng.normal(size=3)
            axis_a /= np.linalg.norm(axis_a)
            axis_b = rng.normal(size=3)
            axis_b /= np.linalg.norm(axis_b)
            ta = _tf(rng.uniform(-0.6, 0.6, 3), tuple(axis_a),
                     rng.uniform(0, 2 * math.pi))
            tb = _tf(rng.uniform(-0.6, 0.6, 3), tuple(axis_b),
                     rng.uniform(0, 2 * math.pi))
            d = pair_distance(shapes[sa], ta, shapes[sb], tb)
            dmin, penetrating, tol = oracle_pair(
                shapes[sa], ta, shapes[sb], tb, n=20_000, seed=trials)
            if penetrating:
                assert d < tol
            else:
                assert abs(d - dmin) < tol
            trials += 1


class TestAabb:
    def test_sphere(self):
        lo, hi = aabb(Sphere(1.0), _tf((2, 3, 4)))
        assert np.allclose(lo, [1, 2, 3]) and np.allclose(hi, [3, 4, 5])

    def test_rotated_box_bounds_contain_samples(self):
        tf = _tf((0.1, -0.2, 0.3), (1, 1, 1) / np.sqrt(3), 0.7)
        shape = Box((0.5, 0.3, 0.2))
        lo, hi = aabb(shape, tf)
        from oracle import sample_surface
        pts = sample_surface(shape, tf, 5000, np.random.default_rng(0))
        assert (pts >= lo - 1e-9).all() and (pts <= hi + 1e-9).all()
