import math

import numpy as np
import pytest

from svsplit.bodies import (
    Ball,
    Product,
    VPolytope,
    contains,
    minkowski_sum,
    translate,
)
from svsplit.errors import UnsupportedRep
from svsplit.metrics import hausdorff_distance
from svsplit.selections import (
    chebyshev_center,
    nearest_point,
    steiner_lipschitz_bound,
    steiner_point,
)

TRIANGLE = VPolytope([[0, 0], [1, 0], [0, 1]])
SQUARE = VPolytope([[-1, -1], [1, -1], [1, 1], [-1, 1]])


def test_steiner_segment_is_midpoint():
    est = steiner_point(VPolytope([[0, 0, 0], [0, 0, 1]]))
    np.testing.assert_allclose(est.point, [0, 0, 0.5], atol=1e-12)
    assert est.stderr == 0.0


def test_steiner_ball_is_center():
    est = steiner_point(Ball([2, -1], 0.5))
    np.testing.assert_allclose(est.point, [2, -1])


def test_steiner_triangle_exact_value():
    est = steiner_point(TRIANGLE)
    np.testing.assert_allclose(est.point, [0.375, 0.375], atol=1e-12)


def test_steiner_exact_matches_monte_carlo():
    exact = steiner_point(TRIANGLE).point
    mc = steiner_point(TRIANGLE, samples=200_000, seed=1, method="mc")
    assert np.linalg.norm(mc.point - exact) <= 3 * mc.stderr + 1e-8


def test_steiner_membership():
    rng = np.random.default_rng(10)
    for _ in range(25):
        body = VPolytope(rng.standard_normal((7, 2)))
        est = steiner_point(body)
        assert contains(body, est.point)


def test_steiner_translation_equivariance():
    rng = np.random.default_rng(11)
    for _ in range(10):
        body = VPolytope(rng.standard_normal((6, 2)))
        v = rng.standard_normal(2)
        a = steiner_point(body).point
        b = steiner_point(translate(body, v)).point
        np.testing.assert_allclose(b, a + v, atol=1e-12)


def test_steiner_additivity():
    a = VPolytope([[0, 0], [2, 0], [1, 1]])
    b = SQUARE
    lhs = steiner_point(minkowski_sum(a, b)).point
    rhs = steiner_point(a).point + steiner_point(b).point
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_steiner_of_flat_body_in_3d():
    flat = VPolytope([[0, 0, 1], [1, 0, 1], [0, 1, 1]])
    est = steiner_point(flat)
    np.testing.assert_allclose(est.point, [0.375, 0.375, 1.0], atol=1e-12)


def test_steiner_product_blocks():
    pr = Product((VPolytope([[0.0], [1.0]]), Ball([0.0, 0.0], 1.0)))
    est = steiner_point(pr)
    np.testing.assert_allclose(est.point, [0.5, 0, 0], atol=1e-12)


def test_steiner_mc_is_seeded():
    body = minkowski_sum(VPolytope([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]), Ball([0, 0, 0], 0.3))
    a = steiner_point(body, samples=500, seed=3, method="mc")
    b = steiner_point(body, samples=500, seed=3, method="mc")
    np.testing.assert_array_equal(a.point, b.point)
    assert a.samples_used == 500 and a.stderr > 0


def test_steiner_lipschitz_values():
    assert math.isclose(steiner_lipschitz_bound(1), 1.0)
    assert math.isclose(steiner_lipschitz_bound(2), 4 / math.pi)
    assert math.isclose(steiner_lipschitz_bound(3), 1.5)


def test_steiner_lipschitz_ratio_on_pairs():
    rng = np.random.default_rng(12)
    bound = steiner_lipschitz_bound(2)
    for _ in range(60):
        a = VPolytope(rng.standard_normal((6, 2)))
        b = VPolytope(rng.standard_normal((6, 2)))
        h = hausdorff_distance(a, b).value
        if h < 1e-9:
            continue
        ratio = np.linalg.norm(steiner_point(a).point - steiner_point(b).point) / h
        assert ratio <= bound + 1e-9


def test_chebyshev_square():
    c, r = chebyshev_center(SQUARE)
    np.testing.assert_allclose(c, [0, 0], atol=1e-9)
    assert math.isclose(r, math.sqrt(2), abs_tol=1e-9)


def test_chebyshev_right_triangle():
    c, r = chebyshev_center(VPolytope([[0, 0], [4, 0], [0, 3]]))
    np.testing.assert_allclose(c, [2, 1.5], atol=1e-9)
    assert math.isclose(r, 2.5, abs_tol=1e-9)


def test_chebyshev_ball_and_rounded():
    c, r = chebyshev_center(Ball([1, 2], 0.75))
    np.testing.assert_allclose(c, [1, 2])
    assert r == 0.75
    c2, r2 = chebyshev_center(minkowski_sum(SQUARE, Ball([0, 0], 0.5)))
    np.testing.assert_allclose(c2, [0, 0], atol=1e-9)
    assert math.isclose(r2, math.sqrt(2) + 0.5, abs_tol=1e-9)


def test_chebyshev_center_is_inside():
    rng = np.random.default_rng(13)
    for _ in range(20):
        body = VPolytope(rng.standard_normal((8, 2)))
        c, _ = chebyshev_center(body)
        assert contains(body, c)


def test_nearest_point_ball():
    np.testing.assert_allclose(nearest_point(Ball([0, 0], 1.0), [2, 0]), [1, 0], atol=1e-12)


def test_nearest_point_identity_inside():
    box = VPolytope([[0, 0], [1, 0], [1, 1], [0, 1]])
    np.testing.assert_allclose(nearest_point(box, [0.3, 0.7]), [0.3, 0.7], atol=1e-9)


def test_nearest_point_corner():
    box = VPolytope([[0, 0], [1, 0], [1, 1], [0, 1]])
    np.testing.assert_allclose(nearest_point(box, [2, 2]), [1, 1], atol=1e-9)


def test_nearest_point_rounded_sum():
    body = minkowski_sum(SQUARE, Ball([0, 0], 0.5))
    out = nearest_point(body, [3, 0])
    np.testing.assert_allclose(out, [1.5, 0], atol=1e-9)
    inside = nearest_point(body, [1.2, 0.0])
    np.testing.assert_allclose(inside, [1.2, 0.0], atol=1e-12)


def test_nearest_point_is_1_lipschitz_and_idempotent():
    rng = np.random.default_rng(14)
    body = VPolytope(rng.standard_normal((7, 2)))
    for _ in range(40):
        x, y = rng.standard_normal(2) * 3, rng.standard_normal(2) * 3
        px, py = nearest_point(body, x), nearest_point(body, y)
        assert np.linalg.norm(px - py) <= np.linalg.norm(x - y) + 1e-8
        np.testing.assert_allclose(nearest_point(body, px), px, atol=1e-7)


def test_steiner_exact_mode_refuses_thick_3d():
    tetra = VPolytope([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    with pytest.raises(UnsupportedRep):
        steiner_point(tetra, method="exact")
