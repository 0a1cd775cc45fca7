import math

import numpy as np
import pytest

from svsplit.bodies import MinkowskiSum, flatten_vertices
from svsplit.errors import UnknownBody
from svsplit.zoo import (
    ZOO_NAMES,
    body_zoo,
    counter_arc_hull,
    crease_anchor,
    crease_samples,
    cylinder_body,
    rise_segment,
    tangent_apex_cone,
)


def test_cylinder_vertex_count():
    cyl = cylinder_body(360)
    assert cyl.vertices.shape == (720, 3)
    assert set(np.unique(cyl.vertices[:, 2])) == {0.0, 1.0}


def test_cone_has_apex_and_ring():
    cone = tangent_apex_cone(120)
    assert cone.vertices.shape == (121, 3)
    assert np.array_equal(cone.vertices[-1], [0.0, 0.0, 0.0])
    ring = cone.vertices[:-1]
    assert np.allclose(np.linalg.norm(ring[:, :2] - [1.0, 0.0], axis=1), 1.0)
    assert np.all(ring[:, 2] == 1.0)


def test_arc_hull_arcs_sit_at_opposite_heights():
    hull = counter_arc_hull(72)
    upper = hull.vertices[hull.vertices[:, 2] == 0.0]
    lower = hull.vertices[hull.vertices[:, 2] == 1.0]
    assert len(upper) == len(lower) == 37
    assert np.all(upper[:, 1] >= -1e-15)
    assert np.all(lower[:, 1] <= 1e-15)


def test_rise_segment_is_a_vertical_unit_segment():
    seg = rise_segment()
    assert np.array_equal(seg.vertices, [[0, 0, 0], [0, 0, 1]])


def test_zoo_names_all_build():
    for name in ZOO_NAMES:
        body = body_zoo(name, m=24)
        assert body.dim == 3


def test_zoo_sum_body_is_a_minkowski_sum():
    body = body_zoo("example11_C", m=24)
    assert isinstance(body, MinkowskiSum)
    verts = flatten_vertices(body)
    assert verts[:, 2].min() == 0.0 and verts[:, 2].max() == 2.0


def test_zoo_rejects_unknown_names():
    with pytest.raises(UnknownBody, match="example11_A"):
        body_zoo("warp core")


@pytest.mark.parametrize("m", [7, 9, 25])
def test_resolution_must_be_even_and_large_enough(m):
    with pytest.raises(ValueError):
        cylinder_body(m)


def test_crease_samples_land_on_stored_vertices():
    m = 360
    hull = counter_arc_hull(m)
    snapped, pts = crease_samples(m, [0.2, 0.5, 1.0])
    step = math.pi / (m // 2)
    assert np.allclose(snapped, np.round(np.array([0.2, 0.5, 1.0]) / step) * step)
    for t, c in zip(snapped, pts):
        a = crease_anchor(m, t)
        # anchor is bitwise one of the stored arc vertices
        assert any(np.array_equal(a, v) for v in hull.vertices)
        assert np.array_equal(c[:2], a[:2])
        assert math.isclose(c[2], 1.0 - 2.0 * t / math.pi, abs_tol=1e-15)


def test_crease_samples_negative_side_uses_lower_arc():
    snapped, pts = crease_samples(360, [-0.5])
    a = crease_anchor(360, snapped[0])
    assert a[2] == 1.0 and a[1] < 0.0
    assert math.isclose(pts[0][2], 1.0 - 2.0 * snapped[0] / math.pi, abs_tol=1e-15)
    assert pts[0][2] > 1.0


def test_crease_parameter_range_is_enforced():
    with pytest.raises(ValueError, match="outside"):
        crease_samples(360, [2.0])


def test_crease_snapping_is_symmetric():
    s_pos, p_pos = crease_samples(360, [0.7])
    s_neg, p_neg = crease_samples(360, [-0.7])
    assert s_pos[0] == -s_neg[0]
    assert math.isclose(p_pos[0][0], p_neg[0][0], abs_tol=1e-15)
    assert math.isclose(p_pos[0][1], -p_neg[0][1], abs_tol=1e-15)
    assert math.isclose(p_pos[0][2] + p_neg[0][2], 2.0, abs_tol=1e-15)
