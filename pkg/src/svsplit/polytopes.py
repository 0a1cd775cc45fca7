"""Facet and vertex enumeration, erosion, and slicing of polytopal bodies.

The two representation changes both route through qhull on coordinates of the
body's own affine hull, so flat (lower-dimensional) inputs are handled
uniformly: the hull deficit shows up as equality rows of the H-representation.

Vertex enumeration runs on the polar dual: after translating a strictly
interior point to the origin, the facets of ``hull({a_i / b_i})`` are in
bijection with the vertices of ``{x : a_i . x <= b_i}``.  Implicit equalities
(flat feasible sets given with inequality rows only) are detected through a
Chebyshev LP and peeled off before dualizing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .bodies import Ball, ConvexBody, MinkowskiSum, Product, VPolytope, flatten_vertices, support_value, support_values
from .config import Tolerances, tolerances_or_default
from .errors import DimError, SolverStall, UnsupportedDim, UnsupportedRep
from .optimize import OPTIMAL, UNBOUNDED, linear_minimize, nearest_point_qp


@dataclass(frozen=True)
class HPolytope:
    """{x : normals x <= offsets, eq_normals x = eq_offsets}; normal rows are unit."""

    normals: np.ndarray
    offsets: np.ndarray
    eq_normals: np.ndarray
    eq_offsets: np.ndarray

    def __post_init__(self):
        for name in ("normals", "offsets", "eq_normals", "eq_offsets"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            arr.flags.writeable = False

    @property
    def dim(self) -> int:
        return self.normals.shape[1] if self.normals.size else self.eq_normals.shape[1]

    @property
    def facet_count(self) -> int:
        return self.normals.shape[0]

    def contains_point(self, x, tol: Tolerances | None = None) -> bool:
        t = tolerances_or_default(tol)
        x = np.asarray(x, dtype=float).ravel()
        ok = True
        if self.normals.size:
            ok = (self.normals @ x - self.offsets).max() <= t.membership
        if ok and self.eq_normals.size:
            ok = np.abs(self.eq_normals @ x - self.eq_offsets).max() <= t.membership
        return bool(ok)


def prune_vertices(verts: np.ndarray, tol: Tolerances | None = None) -> np.ndarray:
    """Keep only the extreme points of ``hull(verts)``."""
    t = tolerances_or_default(tol)
    verts = _dedupe(np.atleast_2d(np.asarray(verts, dtype=float)))
    if len(verts) <= 2:
        return verts
    center, basis, _ = _affine_hull(verts, t)
    if basis.shape[1] == 0:
        return verts[:1]
    coords = (verts - center) @ basis
    if basis.shape[1] == 1:
        keep = sorted({int(np.argmin(coords[:, 0])), int(np.argmax(coords[:, 0]))})
        return verts[keep]
    try:
        hull = ConvexHull(coords)
    except QhullError:
        return verts
    return verts[np.sort(hull.vertices)]


def to_hrep_from_vertices(verts: np.ndarray, tol: Tolerances | None = None) -> HPolytope:
    t = tolerances_or_default(tol)
    verts = _dedupe(np.atleast_2d(np.asarray(verts, dtype=float)))
    n = verts.shape[1]
    center, basis, normal = _affine_hull(verts, t)
    eq_n = normal.T
    eq_o = eq_n @ center if eq_n.size else np.zeros(0)
    rank = basis.shape[1]
    if rank == 0:
        return HPolytope(np.zeros((0, n)), np.zeros(0), eq_n, eq_o)
    if rank == 1:
        d = basis[:, 0]
        coord = (verts - center) @ d
        normals = np.vstack([d, -d])
        offsets = np.array([
            float(d @ center + coord.max()),
            float(-(d @ center) - coord.min()),
        ])
        return HPolytope(normals, offsets, eq_n, eq_o)
    coords = (verts - center) @ basis
    try:
        hull = ConvexHull(coords)
    except QhullError as exc:
        raise SolverStall(f"facet enumeration failed: {exc}") from exc
    # qhull equations: a.y + off <= 0 with |a| = 1; triangulated duplicates collapse
    amb_normals = hull.equations[:, :-1] @ basis.T
    amb_offsets = -hull.equations[:, -1] + amb_normals @ center
    key = np.round(np.hstack([amb_normals, amb_offsets[:, None]]) / t.dedupe) * t.dedupe
    _, idx = np.unique(key, axis=0, return_index=True)
    amb_normals = amb_normals[np.sort(idx)]
    # tighten against the vertex set so every facet supports it exactly
    amb_offsets = (verts @ amb_normals.T).max(axis=0)
    return HPolytope(amb_normals, amb_offsets, eq_n, eq_o)


def to_hrep(body: ConvexBody, tol: Tolerances | None = None) -> HPolytope:
    if body.dim > 4:
        raise UnsupportedDim("facet enumeration is supported up to dimension 4")
    if isinstance(body, Product):
        # products factor: stack per-factor hreps block-diagonally instead of
        # hulling the (possibly huge) flattened vertex product
        blocks = [to_hrep(f, tol=tol) for f in body.factors]
        dims = [f.dim for f in body.factors]
        total, at = sum(dims), 0
        normals, offsets, eqn, eqo = [], [], [], []
        for h, d in zip(blocks, dims):
            if h.normals.size:
                pad = np.zeros((len(h.normals), total))
                pad[:, at : at + d] = h.normals
                normals.append(pad)
                offsets.append(h.offsets)
            if h.eq_normals.size:
                pad = np.zeros((len(h.eq_normals), total))
                pad[:, at : at + d] = h.eq_normals
                eqn.append(pad)
                eqo.append(h.eq_offsets)
            at += d
        return HPolytope(
            np.vstack(normals) if normals else np.zeros((0, total)),
            np.concatenate(offsets) if offsets else np.zeros(0),
            np.vstack(eqn) if eqn else np.zeros((0, total)),
            np.concatenate(eqo) if eqo else np.zeros(0),
        )
    return to_hrep_from_vertices(flatten_vertices(body), tol=tol)


def facet_normals(body: ConvexBody, tol: Tolerances | None = None) -> np.ndarray:
    return to_hrep(body, tol=tol).normals


def vertices_from_hrep(hrep: HPolytope, tol: Tolerances | None = None) -> np.ndarray:
    """Vertex array of the (bounded) feasible set; shape (0, dim) when empty.

    Raises UnsupportedRep when the set is unbounded.
    """
    t = tolerances_or_default(tol)
    A = np.atleast_2d(hrep.normals) if hrep.normals.size else np.zeros((0, hrep.dim))
    b = hrep.offsets
    E = np.atleast_2d(hrep.eq_normals) if hrep.eq_normals.size else np.zeros((0, hrep.dim))
    e = hrep.eq_offsets
    n = hrep.dim
    verts = _enumerate(A, b, E, e, t, depth=0)
    if verts is None:
        return np.zeros((0, n))
    return verts


def _enumerate(A, b, E, e, t: Tolerances, depth: int):
    """Vertices in the current coordinates, or None when infeasible."""
    n = A.shape[1] if A.size else E.shape[1]
    if depth > 2 * n + 4:
        raise SolverStall("implicit-equality peeling did not terminate")

    if E.shape[0]:
        x0, *_ = np.linalg.lstsq(E, e, rcond=None)
        scale = 1.0 + float(np.abs(e).max(initial=0.0))
        if float(np.abs(E @ x0 - e).max(initial=0.0)) > 1e3 * t.feasibility * scale:
            return None
        _, s, vt = np.linalg.svd(E)
        thresh = max(t.rank, 1e-12) * max(1.0, s[0] if s.size else 1.0)
        N = vt[int((s > thresh).sum()):].T
        if N.shape[1] == 0:
            if A.shape[0] and (A @ x0 - b).max() > 1e2 * t.feasibility * (1.0 + np.abs(b).max(initial=0.0)):
                return None
            return x0[None, :]
        Ar = A @ N if A.shape[0] else np.zeros((0, N.shape[1]))
        br = b - A @ x0 if A.shape[0] else b
        inner = _enumerate(Ar, br, np.zeros((0, N.shape[1])), np.zeros(0), t, depth + 1)
        if inner is None:
            return None
        return _dedupe(x0 + inner @ N.T)

    # pure-inequality system from here on
    norms = np.linalg.norm(A, axis=1) if A.shape[0] else np.zeros(0)
    degenerate = norms <= 1e-12
    if degenerate.any():
        if (b[degenerate] < -t.feasibility).any():
            return None
        A, b, norms = A[~degenerate], b[~degenerate], norms[~degenerate]
    if A.shape[0] == 0:
        if n == 0:
            return np.zeros((1, 0))
        raise UnsupportedRep("unbounded feasible set has no vertex form")
    if n == 0:
        return None if (b < -t.feasibility).any() else np.zeros((1, 0))

    scale = 1.0 + float(np.abs(b).max(initial=0.0))
    cap = 10.0 * scale
    cheb = linear_minimize(
        np.concatenate([np.zeros(n), [-1.0]]),
        np.vstack([np.hstack([A, norms[:, None]]), np.concatenate([np.zeros(n), [1.0]])[None, :]]),
        np.concatenate([b, [cap]]),
        tol=t,
    )
    if cheb.status == "infeasible":
        return None
    if cheb.status != OPTIMAL:
        raise SolverStall("interior-point program did not solve")
    radius = -cheb.value
    flat_tol = max(1e-9, 1e2 * t.feasibility) * scale

    if radius <= flat_tol:
        rows = _implicit_equalities(A, b, t, flat_tol)
        if rows is None:
            return None
        if rows.size == 0:
            raise SolverStall("degenerate region: no interior point and no implicit equalities")
        keep = np.ones(len(A), dtype=bool)
        keep[rows] = False
        return _enumerate(A[keep], b[keep], A[rows], b[rows], t, depth + 1)

    yc = cheb.x[:n]
    bt = b - A @ yc
    if n == 1:
        a = A[:, 0]
        up = a > 1e-12
        dn = a < -1e-12
        if not up.any() or not dn.any():
            raise UnsupportedRep("unbounded feasible set has no vertex form")
        hi = float((bt[up] / a[up]).min())
        lo = float(-(bt[dn] / -a[dn]).min())
        return _dedupe(yc + np.array([[lo], [hi]]))

    dual = A / bt[:, None]
    try:
        hull = ConvexHull(dual)
    except QhullError as exc:
        raise UnsupportedRep(f"vertex enumeration failed (unbounded or degenerate): {exc}") from exc
    eqs = hull.equations
    d = eqs[:, -1]
    if (d > -1e-12).any():
        raise UnsupportedRep("unbounded feasible set has no vertex form")
    verts = yc + eqs[:, :-1] / (-d[:, None])
    return _dedupe(verts)


def _implicit_equalities(A, b, t: Tolerances, flat_tol: float):
    rows = []
    for i in range(len(A)):
        res = linear_minimize(A[i], A, b, tol=t)
        if res.status == "infeasible":
            return None
        if res.status == UNBOUNDED:
            raise UnsupportedRep("unbounded feasible set has no vertex form")
        if b[i] - res.value <= flat_tol:
            rows.append(i)
    return np.asarray(rows, dtype=int)


def intersect_hreps(h1: HPolytope, h2: HPolytope) -> HPolytope:
    if h1.dim != h2.dim:
        raise DimError("intersection needs matching dimensions")
    return HPolytope(
        np.vstack([np.atleast_2d(h1.normals), np.atleast_2d(h2.normals)])
        if (h1.normals.size or h2.normals.size)
        else np.zeros((0, h1.dim)),
        np.concatenate([h1.offsets, h2.offsets]),
        np.vstack([np.atleast_2d(h1.eq_normals), np.atleast_2d(h2.eq_normals)])
        if (h1.eq_normals.size or h2.eq_normals.size)
        else np.zeros((0, h1.dim)),
        np.concatenate([h1.eq_offsets, h2.eq_offsets]),
    )


def intersect_bodies(a: ConvexBody, b: ConvexBody, tol: Tolerances | None = None):
    """Vertex form of the intersection, or None when it is empty."""
    verts = vertices_from_hrep(intersect_hreps(to_hrep(a, tol), to_hrep(b, tol)), tol)
    return VPolytope(verts) if len(verts) else None


def geometric_difference(a: ConvexBody, b: ConvexBody, tol: Tolerances | None = None):
    """{x : x + b subset a} in vertex form; None when the erosion is empty."""
    t = tolerances_or_default(tol)
    if a.dim != b.dim:
        raise DimError("erosion needs matching dimensions")
    if isinstance(b, VPolytope) and len(b.vertices) == 1:
        return a.translate(-b.vertices[0])
    if isinstance(a, Ball):
        if isinstance(b, Ball):
            r = a.radius - b.radius
            if r < 0:
                return None
            return Ball(a.center - b.center, r)
        raise UnsupportedRep("ball erosion is closed-form only for ball subtrahends")
    h = to_hrep(a, tol=t)
    offsets = h.offsets - support_values(b, h.normals) if h.normals.size else h.offsets
    eq_offsets = h.eq_offsets.copy()
    for i, m in enumerate(np.atleast_2d(h.eq_normals) if h.eq_normals.size else []):
        width = b.support_value(m) + b.support_value(-m)
        if width > 1e2 * t.membership:
            return None  # subtrahend is thick along a flat direction of a
        eq_offsets[i] = h.eq_offsets[i] - b.support_value(m)
    verts = vertices_from_hrep(HPolytope(h.normals, offsets, h.eq_normals, eq_offsets), t)
    if len(verts) == 0:
        return None
    return VPolytope(verts)


def affine_slice(a: ConvexBody, subspace, tol: Tolerances | None = None):
    """a intersected with the subspace, in subspace coordinates; None when empty."""
    t = tolerances_or_default(tol)
    if subspace.ambient_dim != a.dim:
        raise DimError("slice subspace must live in the body's dimension")
    base, D = subspace.base_point, subspace.directions
    k = D.shape[1]
    if isinstance(a, Ball):
        coords0 = subspace.coords(a.center)
        proj = subspace.embed(coords0)
        gap = float(np.linalg.norm(a.center - proj))
        if gap > a.radius + t.membership:
            return None
        return Ball(coords0, float(np.sqrt(max(a.radius**2 - gap**2, 0.0))))
    h = to_hrep(a, tol=t)
    normals = h.normals @ D if h.normals.size else np.zeros((0, k))
    offsets = h.offsets - h.normals @ base if h.normals.size else h.offsets
    eq_normals = h.eq_normals @ D if h.eq_normals.size else np.zeros((0, k))
    eq_offsets = h.eq_offsets - h.eq_normals @ base if h.eq_normals.size else h.eq_offsets
    verts = vertices_from_hrep(HPolytope(normals, offsets, eq_normals, eq_offsets), t)
    if len(verts) == 0:
        return None
    return VPolytope(verts)


def inclusion_radius(body: ConvexBody, tol: Tolerances | None = None) -> float:
    """Largest gamma with gamma * unit-ball inside the body; 0 when 0 is outside."""
    from .bodies import contains

    t = tolerances_or_default(tol)
    if not contains(body, np.zeros(body.dim), tol=t):
        return 0.0
    if isinstance(body, Ball):
        return max(0.0, body.radius - float(np.linalg.norm(body.center)))
    if isinstance(body, MinkowskiSum):
        balls = [p for p in body.parts if isinstance(p, Ball)]
        rest = [p for p in body.parts if not isinstance(p, Ball)]
        if balls:
            r = float(sum(p.radius for p in balls))
            shift = np.sum([p.center for p in balls], axis=0)
            if not rest:
                return max(0.0, r - float(np.linalg.norm(shift)))
            inner = MinkowskiSum(tuple(rest)).translate(shift)
            iv = flatten_vertices(inner)
            h = to_hrep_from_vertices(iv, t)
            if h.contains_point(np.zeros(body.dim), t):
                return _hrep_origin_radius(h) + r
            proj = nearest_point_qp(
                np.zeros(body.dim), h.normals, h.offsets, h.eq_normals, h.eq_offsets, tol=t
            )
            return max(0.0, r - proj.distance)
    try:
        h = to_hrep(body, tol=t)
    except (UnsupportedRep, UnsupportedDim):
        return _sampled_inclusion_radius(body)
    return _hrep_origin_radius(h)


def _hrep_origin_radius(h: HPolytope) -> float:
    if h.eq_normals.size:
        return 0.0
    if not h.normals.size:
        return 0.0
    return max(0.0, float(h.offsets.min()))


def _sampled_inclusion_radius(body: ConvexBody) -> float:
    from .directions import default_plan

    if body.dim < 2:
        lo = -support_value(body, np.array([-1.0]))
        hi = support_value(body, np.array([1.0]))
        return max(0.0, min(hi, -lo))
    plan = default_plan(min(body.dim, 3)) if body.dim <= 3 else None
    if plan is None:
        from .directions import random_plan

        plan = random_plan(body.dim, 4000)
    prev = np.inf
    for _ in range(4):
        val = float(support_values(body, plan.dirs).min())
        if abs(prev - val) < 1e-6:
            break
        prev = val
        plan = plan.refined()
    return max(0.0, val)


def _dedupe(verts: np.ndarray) -> np.ndarray:
    _, idx = np.unique(np.round(verts / 1e-9) * 1e-9, axis=0, return_index=True)
    return verts[np.sort(idx)]


def _affine_hull(verts: np.ndarray, t: Tolerances):
    """(center, basis columns, normal columns) of the affine hull of the rows."""
    center = verts.mean(axis=0)
    if len(verts) == 1:
        n = verts.shape[1]
        return center, np.zeros((n, 0)), np.eye(n)
    _, s, vt = np.linalg.svd(verts - center, full_matrices=False)
    top = s[0] if s.size and s[0] > 0 else 1.0
    rank = int((s > 1e-9 * max(1.0, top)).sum())
    basis = vt[:rank].T
    normal = vt[rank:].T if rank < verts.shape[1] else np.zeros((verts.shape[1], 0))
    if normal.shape[1] < verts.shape[1] - rank:  # svd returned a short vt
        full = np.linalg.svd(np.eye(verts.shape[1]) - basis @ basis.T)[0]
        normal = full[:, : verts.shape[1] - rank]
    return center, basis, normal
