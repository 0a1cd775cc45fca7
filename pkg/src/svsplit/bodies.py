"""Convex body variants and their support calculus.

Five representations, all closed under the operations the toolkit needs:

* ``VPolytope``: convex hull of finitely many vertices (the workhorse),
* ``Ball``: Euclidean ball, kept exact rather than discretized,
* ``MinkowskiSum``: lazy sum of parts,
* ``AffineImage``: matrix @ body + offset,
* ``Product``: cartesian product living in the direct sum of the factor spaces.

Support values and support points evaluate recursively and exactly on every
variant; conversions that would need a discretization (e.g. a ball into a
polytope) are explicit, never implicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import Tolerances, tolerances_or_default
from .directions import circle_angles, icosphere
from .errors import (
    ConfigError,
    DimError,
    EmptyInput,
    UnsupportedDim,
    UnsupportedRep,
)
from .linalg import as_vector, unit

_FLATTEN_CAP = 250_000


class ConvexBody:
    """Base class; concrete variants implement the support oracle."""

    dim: int

    def support_value(self, p) -> float:
        raise NotImplementedError

    def support_point(self, p) -> np.ndarray:
        raise NotImplementedError

    def bounding_radius(self) -> float:
        """Upper bound for max(|x| : x in body); Lipschitz constant of the support function."""
        raise NotImplementedError

    def translate(self, v) -> "ConvexBody":
        raise NotImplementedError

    def reflect(self) -> "ConvexBody":
        """The reflection -A through the origin."""
        raise NotImplementedError


@dataclass(frozen=True)
class VPolytope(ConvexBody):
    vertices: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if v.size == 0:
            raise EmptyInput("a polytope needs at least one vertex")
        # deduplicate within 1e-9, keeping first occurrences
        _, idx = np.unique(np.round(v / 1e-9) * 1e-9, axis=0, return_index=True)
        v = v[np.sort(idx)]
        object.__setattr__(self, "vertices", v)
        v.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def support_value(self, p) -> float:
        return float((self.vertices @ as_vector(p, self.dim)).max())

    def support_point(self, p, tie: float | None = None) -> np.ndarray:
        vals = self.vertices @ as_vector(p, self.dim)
        top = float(vals.max())
        tie = 1e-9 if tie is None else tie
        cand = self.vertices[vals >= top - tie * (1.0 + abs(top))]
        order = np.lexsort(cand.T[::-1])  # lexicographically smallest among ties
        return cand[order[0]].copy()

    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self.vertices, axis=1).max())

    def translate(self, v) -> "VPolytope":
        return VPolytope(self.vertices + as_vector(v, self.dim))

    def reflect(self) -> "VPolytope":
        return VPolytope(-self.vertices)


@dataclass(frozen=True)
class Ball(ConvexBody):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = as_vector(self.center)
        r = float(self.radius)
        if r < 0:
            raise ValueError("ball radius must be nonnegative")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", r)
        c.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.center.size

    def support_value(self, p) -> float:
        pv = as_vector(p, self.dim)
        return float(pv @ self.center + self.radius * np.linalg.norm(pv))

    def support_point(self, p) -> np.ndarray:
        return self.center + self.radius * unit(as_vector(p, self.dim))

    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self.center) + self.radius)

    def translate(self, v) -> "Ball":
        return Ball(self.center + as_vector(v, self.dim), self.radius)

    def reflect(self) -> "Ball":
        return Ball(-self.center, self.radius)


@dataclass(frozen=True)
class MinkowskiSum(ConvexBody):
    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise EmptyInput("a Minkowski sum needs at least one part")
        d = parts[0].dim
        for p in parts:
            if p.dim != d:
                raise DimError("Minkowski sum parts must share a dimension")
        object.__setattr__(self, "parts", parts)

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    def support_value(self, p) -> float:
        return float(sum(part.support_value(p) for part in self.parts))

    def support_point(self, p) -> np.ndarray:
        return np.sum([part.support_point(p) for part in self.parts], axis=0)

    def bounding_radius(self) -> float:
        return float(sum(part.bounding_radius() for part in self.parts))

    def translate(self, v) -> "MinkowskiSum":
        return MinkowskiSum((self.parts[0].translate(v),) + self.parts[1:])

    def reflect(self) -> "MinkowskiSum":
        return MinkowskiSum(tuple(p.reflect() for p in self.parts))


@dataclass(frozen=True)
class AffineImage(ConvexBody):
    matrix: np.ndarray
    offset: np.ndarray
    body: ConvexBody

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        o = as_vector(self.offset)
        if m.shape[0] != o.size:
            raise DimError("offset dimension must match matrix rows")
        if m.shape[1] != self.body.dim:
            raise DimError("matrix columns must match inner body dimension")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "offset", o)
        m.flags.writeable = False
        o.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.offset.size

    def support_value(self, p) -> float:
        pv = as_vector(p, self.dim)
        return float(pv @ self.offset + self.body.support_value(self.matrix.T @ pv))

    def support_point(self, p) -> np.ndarray:
        pv = as_vector(p, self.dim)
        return self.matrix @ self.body.support_point(self.matrix.T @ pv) + self.offset

    def bounding_radius(self) -> float:
        op = float(np.linalg.norm(self.matrix, 2))
        return float(np.linalg.norm(self.offset)) + op * self.body.bounding_radius()

    def translate(self, v) -> "AffineImage":
        return AffineImage(self.matrix, self.offset + as_vector(v, self.dim), self.body)

    def reflect(self) -> "AffineImage":
        return AffineImage(-self.matrix, -self.offset, self.body)


@dataclass(frozen=True)
class Product(ConvexBody):
    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise EmptyInput("a product needs at least one factor")
        object.__setattr__(self, "factors", factors)

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    def _split(self, p) -> list[np.ndarray]:
        pv = as_vector(p, self.dim)
        out, at = [], 0
        for f in self.factors:
            out.append(pv[at : at + f.dim])
            at += f.dim
        return out

    def support_value(self, p) -> float:
        return float(sum(f.support_value(b) for f, b in zip(self.factors, self._split(p))))

    def support_point(self, p) -> np.ndarray:
        return np.concatenate(
            [f.support_point(b) for f, b in zip(self.factors, self._split(p))]
        )

    def bounding_radius(self) -> float:
        return math.sqrt(sum(f.bounding_radius() ** 2 for f in self.factors))

    def translate(self, v) -> "Product":
        return Product(
            tuple(f.translate(b) for f, b in zip(self.factors, self._split(v)))
        )

    def reflect(self) -> "Product":
        return Product(tuple(f.reflect() for f in self.factors))


# ---------------------------------------------------------------------------
# free functions (the operation surface used by the rest of the toolkit)


def support_value(body: ConvexBody, p) -> float:
    return body.support_value(p)


def support_point(body: ConvexBody, p) -> np.ndarray:
    return body.support_point(p)


def support_values(body: ConvexBody, dirs: np.ndarray) -> np.ndarray:
    """Vectorized support values over rows of ``dirs``."""
    if isinstance(body, VPolytope):
        return (dirs @ body.vertices.T).max(axis=1)
    if isinstance(body, Ball):
        return dirs @ body.center + body.radius * np.linalg.norm(dirs, axis=1)
    if isinstance(body, MinkowskiSum):
        return np.sum([support_values(p, dirs) for p in body.parts], axis=0)
    if isinstance(body, AffineImage):
        return dirs @ body.offset + support_values(body.body, dirs @ body.matrix)
    if isinstance(body, Product):
        out = np.zeros(len(dirs))
        at = 0
        for f in body.factors:
            out += support_values(f, dirs[:, at : at + f.dim])
            at += f.dim
        return out
    return np.array([body.support_value(p) for p in dirs])


def minkowski_sum(a: ConvexBody, b: ConvexBody) -> ConvexBody:
    parts = []
    for x in (a, b):
        parts.extend(x.parts if isinstance(x, MinkowskiSum) else (x,))
    return MinkowskiSum(tuple(parts))


def product_body(a: ConvexBody, b: ConvexBody) -> Product:
    factors = []
    for x in (a, b):
        factors.extend(x.factors if isinstance(x, Product) else (x,))
    if sum(f.dim for f in factors) > 6:
        raise UnsupportedDim("product bodies are supported up to total dimension 6")
    return Product(tuple(factors))


def translate(body: ConvexBody, v) -> ConvexBody:
    return body.translate(v)


def reflect(body: ConvexBody) -> ConvexBody:
    return body.reflect()


def difference_body(a: ConvexBody, b: ConvexBody) -> ConvexBody:
    """The algebraic difference a + (-b); contains 0 iff the bodies intersect."""
    return minkowski_sum(a, reflect(b))


def flatten_vertices(body: ConvexBody, prune: bool = True) -> np.ndarray:
    """Vertex generators of a polytopal body (composites expanded).

    Raises UnsupportedRep for bodies with a ball factor; balls are only turned
    into polytopes by the explicit discretizers below.
    """
    if isinstance(body, VPolytope):
        return body.vertices
    if isinstance(body, Ball):
        if body.radius == 0.0:
            return body.center[None, :]
        raise UnsupportedRep("a ball has no finite vertex representation")
    if isinstance(body, MinkowskiSum):
        acc = flatten_vertices(body.parts[0], prune=prune)
        for part in body.parts[1:]:
            nxt = flatten_vertices(part, prune=prune)
            if len(acc) * len(nxt) > _FLATTEN_CAP:
                raise UnsupportedRep("Minkowski sum vertex expansion too large")
            acc = (acc[:, None, :] + nxt[None, :, :]).reshape(-1, acc.shape[1])
            acc = _maybe_prune(acc, prune)
        return acc
    if isinstance(body, AffineImage):
        inner = flatten_vertices(body.body, prune=prune)
        return _maybe_prune(inner @ body.matrix.T + body.offset, prune)
    if isinstance(body, Product):
        acc = flatten_vertices(body.factors[0], prune=prune)
        for f in body.factors[1:]:
            nxt = flatten_vertices(f, prune=prune)
            if len(acc) * len(nxt) > _FLATTEN_CAP:
                raise UnsupportedRep("product vertex expansion too large")
            acc = np.hstack(
                [
                    np.repeat(acc, len(nxt), axis=0),
                    np.tile(nxt, (len(acc), 1)),
                ]
            )
        return acc
    raise UnsupportedRep(f"cannot flatten {type(body).__name__}")


def _maybe_prune(verts: np.ndarray, prune: bool) -> np.ndarray:
    if not prune or len(verts) <= 8 or verts.shape[1] > 4:
        return verts
    from .polytopes import prune_vertices

    return prune_vertices(verts)


def contains(body: ConvexBody, x, tol: Tolerances | None = None) -> bool:
    """Exact membership test (recursive; LP-backed for polytopal variants)."""
    t = tolerances_or_default(tol)
    x = as_vector(x, body.dim)
    if isinstance(body, Ball):
        return float(np.linalg.norm(x - body.center)) <= body.radius + t.membership
    if isinstance(body, VPolytope):
        return _hull_membership([body.vertices], x, t)
    if isinstance(body, Product):
        at = 0
        for f in body.factors:
            if not contains(f, x[at : at + f.dim], tol=t):
                return False
            at += f.dim
        return True
    if isinstance(body, AffineImage):
        m = body.matrix
        y = x - body.offset
        if m.shape[0] == m.shape[1]:
            det = np.linalg.det(m)
            if abs(det) > 1e-12:
                return contains(body.body, np.linalg.solve(m, y), tol=t)
        try:
            verts = flatten_vertices(body, prune=False)
        except UnsupportedRep:
            return _ball_affine_membership(body, x, t)
        return _hull_membership([verts], x, t)
    if isinstance(body, MinkowskiSum):
        groups, balls = [], []
        for part in body.parts:
            if isinstance(part, Ball):
                balls.append(part)
            else:
                groups.append(flatten_vertices(part, prune=False))
        if not balls:
            return _hull_membership(groups, x, t)
        if len(balls) == 1:
            y = x - balls[0].center
            r = balls[0].radius
            if not groups:
                return float(np.linalg.norm(y)) <= r + t.membership
            return _distance_to_hull(groups, y, t) <= r + t.membership
        # several balls add up to one
        c = np.sum([b.center for b in balls], axis=0)
        r = float(sum(b.radius for b in balls))
        y = x - c
        if not groups:
            return float(np.linalg.norm(y)) <= r + t.membership
        return _distance_to_hull(groups, y, t) <= r + t.membership
    raise UnsupportedRep(f"membership not implemented for {type(body).__name__}")


def _hull_membership(groups: list[np.ndarray], x: np.ndarray, t: Tolerances) -> bool:
    """x in G1 + G2 + ... (each Gi a convex hull of rows), via an L1 feasibility LP."""
    from .optimize import combination_residual

    return combination_residual(groups, x, t) <= t.membership


def _distance_to_hull(groups: list[np.ndarray], y: np.ndarray, t: Tolerances) -> float:
    from .polytopes import to_hrep_from_vertices
    from .optimize import nearest_point_qp

    verts = groups[0]
    for g in groups[1:]:
        verts = (verts[:, None, :] + g[None, :, :]).reshape(-1, verts.shape[1])
        verts = _maybe_prune(verts, True)
    hp = to_hrep_from_vertices(verts, tol=t)
    res = nearest_point_qp(y, hp.normals, hp.offsets, hp.eq_normals, hp.eq_offsets, tol=t)
    return res.distance


def _ball_affine_membership(body: AffineImage, x: np.ndarray, t: Tolerances) -> bool:
    inner = body.body
    if not isinstance(inner, Ball):
        raise UnsupportedRep("affine membership needs an invertible matrix or polytopal body")
    # solve matrix @ y = x - offset with y closest to the ball center
    m = body.matrix
    rhs = x - body.offset
    y0, residual, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    if float(np.linalg.norm(m @ y0 - rhs)) > t.membership * (1.0 + np.linalg.norm(rhs)):
        return False
    # move within the null space toward the center
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    null = vt[int((s > 1e-12 * max(1.0, s[0] if s.size else 1.0)).sum()):].T
    delta = inner.center - y0
    y = y0 + null @ (null.T @ delta) if null.size else y0
    return float(np.linalg.norm(y - inner.center)) <= inner.radius + t.membership


def diameter(body: ConvexBody) -> float:
    """Largest pairwise distance (exact on the representations below)."""
    if isinstance(body, VPolytope):
        return _point_set_diameter(body.vertices)
    if isinstance(body, Ball):
        return 2.0 * body.radius
    if isinstance(body, Product):
        return math.sqrt(sum(diameter(f) ** 2 for f in body.factors))
    if isinstance(body, MinkowskiSum):
        balls = [p for p in body.parts if isinstance(p, Ball)]
        rest = [p for p in body.parts if not isinstance(p, Ball)]
        extra = 2.0 * sum(b.radius for b in balls)
        if not rest:
            return extra
        if len(rest) == 1:
            return diameter(rest[0]) + extra
        try:
            verts = flatten_vertices(MinkowskiSum(tuple(rest)))
        except UnsupportedRep:
            return _sampled_diameter(body)
        return _point_set_diameter(verts) + extra
    if isinstance(body, AffineImage):
        try:
            return _point_set_diameter(flatten_vertices(body))
        except UnsupportedRep:
            return _sampled_diameter(body)
    return _sampled_diameter(body)


def _point_set_diameter(verts: np.ndarray) -> float:
    n = len(verts)
    if n == 1:
        return 0.0
    best = 0.0
    block = max(1, int(2e6 / max(n, 1)))
    for i in range(0, n, block):
        chunk = verts[i : i + block]
        d2 = ((chunk[:, None, :] - verts[None, :, :]) ** 2).sum(axis=2)
        best = max(best, float(d2.max()))
    return math.sqrt(best)


def _sampled_diameter(body: ConvexBody) -> float:
    """Upper bound: max sampled width plus the covering correction."""
    from .directions import default_plan

    plan = default_plan(body.dim) if body.dim <= 3 else default_plan(3)  # pragma: no cover
    if body.dim > 3:
        from .directions import random_plan

        plan = random_plan(body.dim, 4000)
    widths = support_values(body, plan.dirs) + support_values(body, -plan.dirs)
    w = float(widths.max())
    if math.isinf(plan.covering_chord):
        return w  # lower estimate; no rigorous net available in this dimension
    return w + 2.0 * body.bounding_radius() * plan.covering_chord


# ---------------------------------------------------------------------------
# explicit ball discretizers


def disk_polygon(center, radius: float, segments: int = 64) -> VPolytope:
    """Inscribed regular polygon; chord deficit radius*(1 - cos(pi/segments))."""
    c = as_vector(center)
    if c.size != 2:
        raise DimError("disk_polygon builds 2-D bodies")
    return VPolytope(c + radius * circle_angles(segments))


def ball_polytope(center, radius: float, level: int = 2) -> VPolytope:
    """Inscribed icosphere polytope in 3-D."""
    c = as_vector(center)
    if c.size != 3:
        raise DimError("ball_polytope builds 3-D bodies")
    return VPolytope(c + radius * icosphere(level))


def ball_vertices(dim: int, radius: float = 1.0) -> np.ndarray:
    """Discretized unit-sphere scaled by radius; 1-D exact, 2-D 64-gon, 3-D icosphere."""
    if dim == 1:
        return np.array([[-radius], [radius]])
    if dim == 2:
        return radius * circle_angles(64)
    if dim == 3:
        return radius * icosphere(2)
    raise UnsupportedDim("discretized balls available up to dimension 3")


# ---------------------------------------------------------------------------
# JSON round trip


def body_to_json(body: ConvexBody) -> dict:
    if isinstance(body, VPolytope):
        return {"type": "vpolytope", "vertices": [[float(v) for v in row] for row in body.vertices]}
    if isinstance(body, Ball):
        return {"type": "ball", "center": [float(v) for v in body.center], "radius": float(body.radius)}
    if isinstance(body, MinkowskiSum):
        return {"type": "sum", "terms": [body_to_json(p) for p in body.parts]}
    if isinstance(body, AffineImage):
        return {
            "type": "affine_image",
            "matrix": [[float(v) for v in row] for row in body.matrix],
            "offset": [float(v) for v in body.offset],
            "body": body_to_json(body.body),
        }
    if isinstance(body, Product):
        return {"type": "product", "factors": [body_to_json(f) for f in body.factors]}
    raise UnsupportedRep(f"no JSON form for {type(body).__name__}")


def body_from_json(data, path: str = "$") -> ConvexBody:
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object, got {type(data).__name__}")
    kind = data.get("type")
    try:
        if kind == "vpolytope":
            return VPolytope(_num_matrix(data, "vertices", path))
        if kind == "ball":
            center = _num_vector(data, "center", path)
            radius = data.get("radius")
            if not isinstance(radius, (int, float)):
                raise ConfigError(f"{path}.radius: expected a number")
            return Ball(center, float(radius))
        if kind == "sum":
            parts = _child_list(data, "terms", path)
            return MinkowskiSum(
                tuple(body_from_json(p, f"{path}.terms[{i}]") for i, p in enumerate(parts))
            )
        if kind == "affine_image":
            if "body" not in data:
                raise ConfigError(f"{path}.body: missing")
            return AffineImage(
                _num_matrix(data, "matrix", path),
                _num_vector(data, "offset", path),
                body_from_json(data["body"], f"{path}.body"),
            )
        if kind == "product":
            factors = _child_list(data, "factors", path)
            return Product(
                tuple(body_from_json(f, f"{path}.factors[{i}]") for i, f in enumerate(factors))
            )
    except (DimError, EmptyInput, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.type: unknown body type {kind!r}")


def _num_matrix(data, key, path):
    val = data.get(key)
    if not isinstance(val, list) or not val or not all(isinstance(r, list) for r in val):
        raise ConfigError(f"{path}.{key}: expected a list of rows")
    try:
        return np.asarray(val, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{path}.{key}: rows must be numeric and rectangular") from None


def _num_vector(data, key, path):
    val = data.get(key)
    if not isinstance(val, list) or not val:
        raise ConfigError(f"{path}.{key}: expected a nonempty list of numbers")
    try:
        return np.asarray(val, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{path}.{key}: entries must be numeric") from None


def _child_list(data, key, path):
    val = data.get(key)
    if not isinstance(val, list) or not val:
        raise ConfigError(f"{path}.{key}: expected a nonempty list")
    return val
