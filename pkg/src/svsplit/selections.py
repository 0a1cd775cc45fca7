"""Canonical single-point selections of convex bodies.

steiner_point returns the curvature-averaged center: the mean of the support
point over uniformly distributed directions.  In the plane that average has a
closed form, the vertex average weighted by exterior angles, and the planar
formula also covers any body whose affine hull is at most 2-dimensional
(directions decompose into an in-plane part plus a normal part that the
support point ignores, and the in-plane part is again uniform by symmetry).
Everything else uses seeded Monte Carlo with a reported standard error.

The estimator is Minkowski additive and commutes with products, which the
exact mode exploits part by part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bodies import (
    AffineImage,
    Ball,
    ConvexBody,
    MinkowskiSum,
    Product,
    VPolytope,
    flatten_vertices,
)
from .config import Tolerances, tolerances_or_default
from .directions import unit_sphere_samples
from .errors import UnsupportedRep
from .optimize import min_enclosing_ball, nearest_point_qp


@dataclass(frozen=True)
class SteinerEstimate:
    point: np.ndarray
    samples_used: int
    stderr: float

    def __post_init__(self):
        p = np.asarray(self.point, dtype=float)
        object.__setattr__(self, "point", p)
        p.flags.writeable = False


def steiner_point(
    body: ConvexBody,
    samples: int = 20_000,
    seed: int = 0,
    method: str = "auto",
) -> SteinerEstimate:
    if method not in ("auto", "exact", "mc"):
        raise ValueError(f"unknown steiner method {method!r}")
    if method != "mc":
        point = _exact_steiner(body)
        if point is not None:
            return SteinerEstimate(point, 0, 0.0)
        if method == "exact":
            raise UnsupportedRep("no exact Steiner mode for this body")
    dirs = unit_sphere_samples(body.dim, samples, seed)
    pts = _support_points(body, dirs)
    mean = pts.mean(axis=0)
    stderr = float((pts.std(axis=0, ddof=1) / math.sqrt(samples)).max())
    return SteinerEstimate(mean, samples, stderr)


def steiner_lipschitz_bound(n: int) -> float:
    """Best Lipschitz constant of the Steiner map w.r.t. Hausdorff distance."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    return 2.0 / math.sqrt(math.pi) * math.gamma(n / 2 + 1) / math.gamma((n + 1) / 2)


def chebyshev_center(body: ConvexBody, tol: Tolerances | None = None):
    """Center and radius of the smallest enclosing ball (the minimax point)."""
    t = tolerances_or_default(tol)
    if isinstance(body, Ball):
        return body.center.copy(), float(body.radius)
    if isinstance(body, MinkowskiSum):
        balls = [p for p in body.parts if isinstance(p, Ball)]
        rest = [p for p in body.parts if not isinstance(p, Ball)]
        if balls:
            shift = np.sum([p.center for p in balls], axis=0)
            r = float(sum(p.radius for p in balls))
            if not rest:
                return shift, r
            c, rad = chebyshev_center(MinkowskiSum(tuple(rest)), tol=t)
            return c + shift, rad + r
    verts = flatten_vertices(body)
    center, radius = min_enclosing_ball(verts, tol=t)
    return center, radius


def nearest_point(body: ConvexBody, x0, tol: Tolerances | None = None) -> np.ndarray:
    """Euclidean projection of x0 onto the body (1-Lipschitz in x0)."""
    t = tolerances_or_default(tol)
    x0 = np.asarray(x0, dtype=float).ravel()
    if x0.size != body.dim:
        from .errors import DimError

        raise DimError("projection target has the wrong dimension")
    if isinstance(body, Ball):
        gap = x0 - body.center
        d = float(np.linalg.norm(gap))
        if d <= body.radius:
            return x0.copy()
        return body.center + body.radius / d * gap
    if isinstance(body, MinkowskiSum):
        balls = [p for p in body.parts if isinstance(p, Ball)]
        rest = [p for p in body.parts if not isinstance(p, Ball)]
        if balls and rest:
            shift = np.sum([p.center for p in balls], axis=0)
            r = float(sum(p.radius for p in balls))
            base = nearest_point(MinkowskiSum(tuple(rest)).translate(shift), x0, tol=t)
            gap = x0 - base
            d = float(np.linalg.norm(gap))
            if d <= r:
                return x0.copy()
            return base + r / d * gap
        if balls and not rest:
            merged = Ball(np.sum([p.center for p in balls], axis=0), float(sum(p.radius for p in balls)))
            return nearest_point(merged, x0, tol=t)
    from .polytopes import to_hrep

    h = to_hrep(body, tol=t)
    res = nearest_point_qp(x0, h.normals, h.offsets, h.eq_normals, h.eq_offsets, tol=t)
    return res.point


# ---------------------------------------------------------------------------
# internals


def _exact_steiner(body: ConvexBody):
    if isinstance(body, Ball):
        return body.center.copy()
    if isinstance(body, MinkowskiSum):
        parts = [_exact_steiner(p) for p in body.parts]
        if any(p is None for p in parts):
            return None
        return np.sum(parts, axis=0)
    if isinstance(body, Product):
        blocks = [_exact_steiner(f) for f in body.factors]
        if any(b is None for b in blocks):
            return None
        return np.concatenate(blocks)
    try:
        verts = flatten_vertices(body)
    except UnsupportedRep:
        return None
    return _flat_steiner(verts)


def _flat_steiner(verts: np.ndarray):
    """Exact Steiner point of hull(verts) when its affine hull is at most a plane."""
    from .polytopes import _affine_hull, prune_vertices
    from .config import Tolerances

    verts = prune_vertices(verts)
    if len(verts) == 1:
        return verts[0].copy()
    center, basis, _ = _affine_hull(verts, Tolerances())
    rank = basis.shape[1]
    if rank > 2:
        return None
    if rank == 1:
        coord = (verts - center) @ basis[:, 0]
        mid = 0.5 * (coord.min() + coord.max())
        return center + mid * basis[:, 0]
    coords = (verts - center) @ basis
    planar = _planar_steiner(coords)
    if planar is None:
        return None
    return center + basis @ planar


def _planar_steiner(pts: np.ndarray):
    from scipy.spatial import ConvexHull, QhullError

    try:
        hull = ConvexHull(pts)
    except QhullError:
        return None
    ring = pts[hull.vertices]  # counterclockwise
    n = len(ring)
    weights = np.zeros(n)
    for i in range(n):
        prev_edge = ring[i] - ring[i - 1]
        next_edge = ring[(i + 1) % n] - ring[i]
        cross = prev_edge[0] * next_edge[1] - prev_edge[1] * next_edge[0]
        dot = float(prev_edge @ next_edge)
        weights[i] = math.atan2(cross, dot)
    weights /= weights.sum()  # exterior angles, total 2*pi
    return weights @ ring


def _support_points(body: ConvexBody, dirs: np.ndarray) -> np.ndarray:
    if isinstance(body, VPolytope):
        idx = np.argmax(dirs @ body.vertices.T, axis=1)
        return body.vertices[idx]
    if isinstance(body, Ball):
        units = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
        return body.center + body.radius * units
    if isinstance(body, MinkowskiSum):
        return np.sum([_support_points(p, dirs) for p in body.parts], axis=0)
    if isinstance(body, AffineImage):
        inner = _support_points(body.body, dirs @ body.matrix)
        return inner @ body.matrix.T + body.offset
    if isinstance(body, Product):
        out, at = [], 0
        for f in body.factors:
            out.append(_support_points(f, dirs[:, at : at + f.dim]))
            at += f.dim
        return np.hstack(out)
    return np.vstack([body.support_point(p) for p in dirs])
