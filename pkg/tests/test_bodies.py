import json
import math

import numpy as np
import pytest

from svsplit.bodies import (
    AffineImage,
    Ball,
    MinkowskiSum,
    Product,
    VPolytope,
    ball_polytope,
    body_from_json,
    body_to_json,
    contains,
    diameter,
    difference_body,
    disk_polygon,
    flatten_vertices,
    minkowski_sum,
    product_body,
    reflect,
    support_point,
    support_value,
    support_values,
    translate,
)
from svsplit.errors import ConfigError, DimError, EmptyInput, UnsupportedRep
from svsplit.optimize import combination_residual

SQUARE = VPolytope([[-1, -1], [1, -1], [1, 1], [-1, 1]])
UNIT_SEGMENT = VPolytope([[0.0], [1.0]])


def test_square_support_values():
    assert support_value(SQUARE, [1, 0]) == 1.0
    assert support_value(SQUARE, [1, 1]) == 2.0
    assert support_value(SQUARE, [-1, 0]) == 1.0


def test_support_point_tie_is_lexicographic():
    # the whole right edge maximizes; ties resolve to the smallest vertex
    np.testing.assert_allclose(support_point(SQUARE, [1, 0]), [1, -1])
    np.testing.assert_allclose(support_point(SQUARE, [0, 1]), [-1, 1])


def test_ball_support():
    b = Ball([1.0, 2.0], 3.0)
    assert math.isclose(support_value(b, [0, 2]), 2 * 2 + 3 * 2)
    np.testing.assert_allclose(support_point(b, [3, 0]), [4, 2])


def test_support_positive_homogeneity():
    rng = np.random.default_rng(0)
    bodies = [SQUARE, Ball([0.5, -0.2], 1.5), minkowski_sum(SQUARE, Ball([0, 0], 1))]
    for body in bodies:
        for _ in range(50):
            p = rng.standard_normal(2)
            lam = float(rng.uniform(0.1, 10))
            assert math.isclose(
                support_value(body, lam * p),
                lam * support_value(body, p),
                rel_tol=0,
                abs_tol=1e-10 * (1 + abs(support_value(body, p))),
            )


def test_support_additivity_under_sums():
    rng = np.random.default_rng(1)
    tri = VPolytope([[0, 0], [2, 0], [0, 1]])
    s = minkowski_sum(SQUARE, tri)
    for _ in range(50):
        p = rng.standard_normal(2)
        assert math.isclose(
            support_value(s, p), support_value(SQUARE, p) + support_value(tri, p), abs_tol=1e-12
        )


def test_support_values_batch_matches_scalar():
    dirs = np.random.default_rng(2).standard_normal((40, 2))
    body = minkowski_sum(SQUARE, Ball([0.3, 0.1], 0.7))
    batch = support_values(body, dirs)
    single = [support_value(body, p) for p in dirs]
    np.testing.assert_allclose(batch, single, atol=1e-12)


def test_minkowski_sum_of_boxes():
    s = minkowski_sum(SQUARE, SQUARE)
    for p in ([1, 0], [0, 1], [1, 1], [-1, 1]):
        assert support_value(s, p) == 2 * support_value(SQUARE, p)
    verts = flatten_vertices(s)
    assert sorted(map(tuple, verts)) == [(-2, -2), (-2, 2), (2, -2), (2, 2)]


def test_ball_sum_acts_like_one_ball():
    s = minkowski_sum(Ball([1, 0], 2), Ball([0, 1], 0.5))
    merged = Ball([1, 1], 2.5)
    for p in np.random.default_rng(3).standard_normal((20, 2)):
        assert math.isclose(support_value(s, p), support_value(merged, p), abs_tol=1e-12)


def test_product_body_blocks():
    sq = product_body(UNIT_SEGMENT, UNIT_SEGMENT)
    assert sq.dim == 2
    assert support_value(sq, [1, 1]) == 2.0
    assert support_value(sq, [-1, 1]) == 1.0
    verts = flatten_vertices(sq)
    assert sorted(map(tuple, verts)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_affine_image_support():
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    body = AffineImage(rot, [1.0, 0.0], SQUARE)
    # rotated square is the same square; offset shifts the support
    assert math.isclose(support_value(body, [1, 0]), 1 + 1)
    np.testing.assert_allclose(
        flatten_vertices(body).mean(axis=0), [1.0, 0.0], atol=1e-12
    )


def test_translate_and_reflect():
    t = translate(SQUARE, [2, 3])
    assert support_value(t, [1, 0]) == 3.0
    r = reflect(VPolytope([[1, 0], [0, 2]]))
    assert sorted(map(tuple, flatten_vertices(r))) == [(-1, 0), (0, -2)]
    d = difference_body(SQUARE, SQUARE)
    assert contains(d, [0, 0])
    assert support_value(d, [1, 0]) == 2.0


def test_contains_polytope():
    assert contains(SQUARE, [0.3, -0.9])
    assert contains(SQUARE, [1.0, 1.0])
    assert not contains(SQUARE, [1.0001, 0.0])
    assert not contains(SQUARE, [1.5, 1.5])


def test_contains_ball_and_product():
    b = Ball([1, 1], 0.5)
    assert contains(b, [1.3, 1.3])
    assert not contains(b, [1.4, 1.4])
    pr = product_body(UNIT_SEGMENT, UNIT_SEGMENT)
    assert contains(pr, [0.5, 1.0])
    assert not contains(pr, [0.5, 1.01])


def test_contains_rounded_square():
    body = minkowski_sum(SQUARE, Ball([0, 0], 0.5))
    assert contains(body, [1.5, 0.0])
    assert contains(body, [1.0 + 0.5 / math.sqrt(2) - 1e-9, 1.0 + 0.5 / math.sqrt(2) - 1e-9])
    assert not contains(body, [1.4, 1.4])


def test_contains_affine_image_invertible_and_flat():
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert contains(AffineImage(rot, [0, 0], SQUARE), [0.99, 0.99])
    # rank-1 image of the square is the segment [-1, 1] scaled along (1, 1)
    proj = np.array([[1.0, 0.0], [1.0, 0.0]])
    flat = AffineImage(proj, [0.0, 0.0], SQUARE)
    assert contains(flat, [0.7, 0.7])
    assert not contains(flat, [0.7, 0.6])


def test_combination_residual_values():
    assert combination_residual([SQUARE.vertices], [0.25, -0.5]) <= 1e-9
    assert math.isclose(combination_residual([SQUARE.vertices], [2.0, 0.0]), 1.0, abs_tol=1e-8)
    groups = [SQUARE.vertices, np.array([[5.0, 0.0]])]
    assert combination_residual(groups, [5.5, 0.5]) <= 1e-9


def test_diameter():
    assert math.isclose(diameter(SQUARE), 2 * math.sqrt(2))
    assert diameter(Ball([3, 4], 1.25)) == 2.5
    assert math.isclose(diameter(minkowski_sum(SQUARE, Ball([0, 0], 0.5))), 2 * math.sqrt(2) + 1)
    assert math.isclose(diameter(product_body(UNIT_SEGMENT, UNIT_SEGMENT)), math.sqrt(2))
    assert diameter(VPolytope([[1.0, 1.0]])) == 0.0


def test_vertex_dedupe_keeps_first():
    v = VPolytope([[0, 0], [1, 0], [0, 0], [1, 0]])
    assert len(v.vertices) == 2


def test_empty_and_mismatch_errors():
    with pytest.raises(EmptyInput):
        VPolytope(np.zeros((0, 2)))
    with pytest.raises(DimError):
        minkowski_sum(SQUARE, Ball([0.0], 1.0))
    with pytest.raises(UnsupportedRep):
        flatten_vertices(Ball([0, 0], 1))


def test_discretized_balls_are_inscribed():
    disk = disk_polygon([1, 2], 2.0, segments=48)
    assert len(disk.vertices) == 48
    sphere = ball_polytope([0, 0, 0], 1.0, level=1)
    assert len(sphere.vertices) == 42
    for p in np.random.default_rng(4).standard_normal((30, 2)):
        assert support_value(disk, p) <= support_value(Ball([1, 2], 2.0), p) + 1e-12


def test_json_round_trip_is_exact():
    body = MinkowskiSum(
        (
            VPolytope([[0.1, 0.2], [0.3, -0.4], [-1.0 / 3.0, 0.7]]),
            Ball([0.5, -0.25], 0.125),
            AffineImage(np.eye(2) * 0.5, [1e-3, -2.0], SQUARE),
        )
    )
    blob = body_to_json(body)
    again = body_from_json(blob)
    assert body_to_json(again) == blob
    assert json.dumps(blob) == json.dumps(body_to_json(again))


def test_json_product_round_trip():
    pr = Product((UNIT_SEGMENT, Ball([0.0, 0.0], 1.0)))
    assert body_to_json(body_from_json(body_to_json(pr))) == body_to_json(pr)


def test_json_errors_carry_paths():
    with pytest.raises(ConfigError, match=r"\$\.type"):
        body_from_json({"type": "cone"})
    with pytest.raises(ConfigError, match=r"\$\.radius"):
        body_from_json({"type": "ball", "center": [0, 0], "radius": "big"})
    with pytest.raises(ConfigError, match=r"\$\.terms\[1\]"):
        body_from_json(
            {"type": "sum", "terms": [{"type": "ball", "center": [0], "radius": 1}, {"type": "?"}]}
        )
    with pytest.raises(ConfigError, match=r"\$\.body"):
        body_from_json({"type": "affine_image", "matrix": [[1]], "offset": [0]})
