import math

import numpy as np
import pytest

from svsplit.bodies import Ball, VPolytope, minkowski_sum, translate
from svsplit.errors import DimError
from svsplit.metrics import hausdorff_distance, hausdorff_refined, support_table

SQUARE = VPolytope([[-1, -1], [1, -1], [1, 1], [-1, 1]])


def test_concentric_balls():
    est = hausdorff_distance(Ball([0, 0], 1.0), Ball([0, 0], 2.0))
    assert est.exact and est.gap == 0.0
    assert est.value == 1.0


def test_translated_square():
    est = hausdorff_distance(SQUARE, translate(SQUARE, [1, 0]))
    assert est.exact
    assert math.isclose(est.value, 1.0, abs_tol=1e-12)


def test_segment_vs_point():
    seg = VPolytope([[0, 0], [1, 0]])
    est = hausdorff_distance(seg, VPolytope([[0, 0]]))
    assert est.exact and math.isclose(est.value, 1.0)


def test_one_dimensional_intervals():
    a = VPolytope([[0.0], [1.0]])
    b = VPolytope([[2.0], [5.0]])
    est = hausdorff_distance(a, b)
    assert est.exact and est.value == 4.0


def test_identity_symmetry_triangle():
    rng = np.random.default_rng(8)
    polys = [VPolytope(rng.standard_normal((6, 2))) for _ in range(9)]
    for p in polys:
        assert hausdorff_distance(p, p).value <= 1e-12
    for a, b, c in zip(polys[::3], polys[1::3], polys[2::3]):
        hab = hausdorff_distance(a, b).value
        hba = hausdorff_distance(b, a).value
        assert math.isclose(hab, hba, abs_tol=1e-12)
        hac = hausdorff_distance(a, c).value
        hcb = hausdorff_distance(c, b).value
        assert hab <= hac + hcb + 1e-12


def test_ball_inflation_distance():
    rng = np.random.default_rng(9)
    for eps in (0.1, 0.5, 1.0):
        poly = VPolytope(rng.standard_normal((7, 2)))
        fat = minkowski_sum(poly, Ball([0, 0], eps))
        est = hausdorff_distance(poly, fat)
        assert not est.exact
        assert math.isclose(est.value, eps, abs_tol=1e-12)
        assert est.upper >= eps


def test_sampled_square_vs_disk():
    est = hausdorff_distance(SQUARE, Ball([0, 0], 1.0))
    assert not est.exact
    assert math.isclose(est.value, math.sqrt(2) - 1, abs_tol=1e-9)
    assert est.gap < 0.02
    assert est.upper >= math.sqrt(2) - 1


def test_refined_estimate_converges():
    est = hausdorff_refined(SQUARE, Ball([0, 0], 1.0))
    assert math.isclose(est.value, math.sqrt(2) - 1, abs_tol=1e-9)


def test_dim_mismatch():
    with pytest.raises(DimError):
        hausdorff_distance(SQUARE, VPolytope([[0.0], [1.0]]))


def test_support_table_shape():
    dirs = np.array([[1.0, 0.0], [0.0, 1.0]])
    tab = support_table([SQUARE, Ball([0, 0], 2.0)], dirs)
    np.testing.assert_allclose(tab, [[1, 1], [2, 2]])


def test_estimate_is_floatable():
    assert float(hausdorff_distance(Ball([0, 0], 1.0), Ball([0, 0], 1.0))) == 0.0
