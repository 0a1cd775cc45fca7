"""Continuity analysis of the lower height function of a convex body.

For a unit direction q, every point x of the body's shadow (orthogonal
projection onto the hyperplane q-perp) carries the minimal height
f(x) = min { mu : embed(x) + mu q in body }.  The function is convex and
lower semicontinuous automatically; bodies whose f stays *upper*
semicontinuous for every q are the ones with well-behaved slices, and that is
what :func:`pset_check` classifies.

The checker exploits convexity twice.  First, discontinuities of a convex
function on a convex compact domain can only sit on the relative boundary, so
sampling concentrates there.  Second, for continuous f the oscillation
osc(x0, d) = max f over the d-ball at x0 minus f(x0) is convex in d with
osc(0) = 0, hence 2 osc(d/2) - osc(d) <= 0; a strictly positive
extrapolated value that survives mesh refinement is therefore a genuine jump
rather than a steep slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, cKDTree

from .bodies import Ball, ConvexBody, MinkowskiSum, VPolytope, flatten_vertices
from .config import Tolerances, tolerances_or_default
from .directions import circle_angles, icosphere, unit_sphere_samples
from .errors import OutsideShadow, UnsupportedDim
from .linalg import orthonormal_complement, unit
from .polytopes import HPolytope, _affine_hull, prune_vertices, to_hrep
from .selections import chebyshev_center

PSET = "PSet"
NOT_PSET = "NotPSet"
INCONCLUSIVE = "Inconclusive"

_VERTICAL_TOL = 1e-9


@dataclass(frozen=True)
class PsetVerdict:
    """Classification of a body's lower height functions.

    ``witness_direction`` and ``witness_point`` (in shadow coordinates, basis
    ``orthonormal_complement(q)``) are set only for NotPSet; ``jump_size`` is
    the extrapolated oscillation at the witness; ``resolution`` records the
    mesh parameters the verdict was reached at.
    """

    verdict: str
    witness_direction: np.ndarray | None
    witness_point: np.ndarray | None
    jump_size: float
    resolution: dict


@dataclass(frozen=True)
class OpennessReport:
    """Projection-openness probe results for one direction.

    ``violations`` rows are (interior point, shadow probe point, defect): a
    probe in the shadow near the projected interior point whose fiber misses
    the surrounding ball.  An empty tuple means no violation was found.
    """

    direction: np.ndarray
    violations: tuple
    samples: int
    probe_radius: float

    @property
    def ok(self) -> bool:
        return len(self.violations) == 0


class _Envelope:
    """Vectorized lower/upper height evaluators for a fixed hrep and direction."""

    def __init__(self, hrep: HPolytope, q, t: Tolerances):
        self.q = unit(q)
        self.basis = orthonormal_complement(self.q)
        N = np.atleast_2d(hrep.normals) if hrep.normals.size else np.zeros((0, self.q.size))
        b = hrep.offsets
        d = N @ self.q
        C = N @ self.basis
        low = d < -_VERTICAL_TOL
        up = d > _VERTICAL_TOL
        side = ~(low | up)
        self.c_low, self.d_low, self.b_low = C[low], d[low], b[low]
        self.c_up, self.d_up, self.b_up = C[up], d[up], b[up]
        self.c_side, self.b_side = C[side], b[side]
        E = np.atleast_2d(hrep.eq_normals) if hrep.eq_normals.size else np.zeros((0, self.q.size))
        e = hrep.eq_offsets
        de = E @ self.q
        Ce = E @ self.basis
        pin = np.abs(de) > _VERTICAL_TOL
        self.c_pin, self.d_pin, self.e_pin = Ce[pin], de[pin], e[pin]
        self.c_eq, self.e_eq = Ce[~pin], e[~pin]
        scale = max(
            1.0,
            float(np.abs(b).max()) if b.size else 0.0,
            float(np.abs(e).max()) if e.size else 0.0,
        )
        self.pad = 1e-7 * scale

    def heights(self, X: np.ndarray):
        """(lower, upper, feasible) over rows of shadow coordinates X."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        k = len(X)
        f = np.full(k, -np.inf)
        g = np.full(k, np.inf)
        if self.c_low.size or self.d_low.size:
            f = ((self.b_low - X @ self.c_low.T) / self.d_low).max(axis=1)
        if self.c_up.size or self.d_up.size:
            g = ((self.b_up - X @ self.c_up.T) / self.d_up).min(axis=1)
        if self.d_pin.size:
            R = (self.e_pin - X @ self.c_pin.T) / self.d_pin
            f = np.maximum(f, R.max(axis=1))
            g = np.minimum(g, R.min(axis=1))
        feas = f <= g + self.pad
        if self.c_side.size:
            feas &= (X @ self.c_side.T - self.b_side).max(axis=1) <= self.pad
        if self.c_eq.size:
            feas &= np.abs(X @ self.c_eq.T - self.e_eq).max(axis=1) <= self.pad
        return f, g, feas


def shadow_basis(q) -> np.ndarray:
    """Orthonormal columns spanning q-perp; shadow coordinates refer to this."""
    return orthonormal_complement(q)


def shadow(body: ConvexBody, q) -> ConvexBody:
    """Orthogonal projection of the body onto q-perp, in shadow coordinates."""
    qn = unit(q)
    B = orthonormal_complement(qn)
    if isinstance(body, Ball):
        return Ball(B.T @ body.center, body.radius)
    if isinstance(body, MinkowskiSum):
        return MinkowskiSum(tuple(shadow(p, qn) for p in body.parts))
    if isinstance(body, VPolytope):
        return VPolytope(body.vertices @ B)
    return VPolytope(flatten_vertices(body) @ B)


def lower_envelope(body: ConvexBody, q, x, tol: Tolerances | None = None) -> float:
    """Minimal height of the body over shadow point x along direction q.

    Exact: closed form for balls, facet ratios for anything polytopal.
    Raises OutsideShadow when x is not in the projection.
    """
    t = tolerances_or_default(tol)
    qn = unit(q)
    x = np.asarray(x, dtype=float).ravel()
    if x.size != qn.size - 1:
        raise OutsideShadow(
            f"shadow point has dimension {x.size}, expected {qn.size - 1}"
        )
    if isinstance(body, Ball):
        B = orthonormal_complement(qn)
        gap = float(np.linalg.norm(x - B.T @ body.center))
        if gap > body.radius + t.membership:
            raise OutsideShadow(f"point {x} outside the projected ball")
        return float(qn @ body.center) - math.sqrt(max(body.radius**2 - gap**2, 0.0))
    env = _Envelope(to_hrep(body, tol=t), qn, t)
    f, _, feas = env.heights(x[None, :])
    if not feas[0]:
        raise OutsideShadow(f"point {x} outside the shadow")
    return float(f[0])


# ---------------------------------------------------------------------------
# shadow meshing


def _segment_chain(a, b, spacing):
    length = float(np.linalg.norm(b - a))
    steps = max(1, int(math.ceil(length / spacing)))
    frac = np.arange(steps) / steps
    return a[None, :] + frac[:, None] * (b - a)[None, :]


def _mesh_boundary(verts: np.ndarray, spacing: float, t: Tolerances):
    """Boundary-dense samples of hull(verts) and ordered chains for slope stats.

    Chains are lists of index arrays; consecutive entries are boundary
    neighbors (rings wrap).  Falls back to nearest-neighbor slope pairing for
    3-dimensional shadows, where no single boundary walk exists.
    """
    verts = prune_vertices(verts, tol=t)
    d = verts.shape[1]
    center, basis, _ = _affine_hull(verts, t)
    rank = basis.shape[1]
    if rank == 0:
        return verts[:1], []
    coords = (verts - center) @ basis
    if rank == 1:
        order = np.argsort(coords[:, 0])
        a, b = verts[order[0]], verts[order[-1]]
        pts = np.vstack([_segment_chain(a, b, spacing), b[None, :]])
        return pts, [np.arange(len(pts))]
    if rank == 2:
        hull = ConvexHull(coords)
        ring = hull.vertices
        pieces = []
        for i, j in zip(ring, np.roll(ring, -1)):
            pieces.append(_segment_chain(verts[i], verts[j], spacing))
        pts = np.vstack(pieces)
        return pts, [np.arange(len(pts))]  # closed ring in walk order
    # rank 3: sample each hull facet triangle with a barycentric grid
    hull = ConvexHull(coords)
    pieces = [verts]
    for tri in hull.simplices:
        a, b, c = verts[tri[0]], verts[tri[1]], verts[tri[2]]
        edge = max(
            np.linalg.norm(b - a), np.linalg.norm(c - a), np.linalg.norm(c - b)
        )
        n = max(1, int(math.ceil(edge / spacing)))
        for i in range(n + 1):
            lam = i / n
            row0 = a + lam * (b - a)
            row1 = a + lam * (c - a)
            pieces.append(_segment_chain(row0, row1, spacing))
            pieces.append(row1[None, :])
    pts = np.vstack(pieces)
    key = np.round(pts / max(spacing / 4, 1e-12))
    _, idx = np.unique(key, axis=0, return_index=True)
    return pts[np.sort(idx)], []


def _slope_quantile(pts, f, chains, quantile=0.95):
    """Robust |f| slope statistic over boundary-neighbor (or NN) pairs."""
    slopes = []
    if chains:
        for chain in chains:
            a, b = chain, np.roll(chain, -1)
            run = np.linalg.norm(pts[b] - pts[a], axis=1)
            keep = run > 1e-12
            slopes.append(np.abs(f[b] - f[a])[keep] / run[keep])
    elif len(pts) > 2:
        tree = cKDTree(pts)
        dist, nn = tree.query(pts, k=2)
        run = dist[:, 1]
        keep = run > 1e-12
        slopes.append(np.abs(f[nn[:, 1]] - f)[keep] / run[keep])
    if not slopes:
        return 0.0
    alls = np.concatenate(slopes)
    return float(np.quantile(alls, quantile)) if alls.size else 0.0


def _oscillations(tree, pts, f, deltas):
    """osc(x_j, delta) = max f within delta of x_j, minus f(x_j); per delta."""
    out = []
    for delta in deltas:
        osc = np.zeros(len(pts))
        for j, nbrs in enumerate(tree.query_ball_point(pts, delta)):
            osc[j] = f[nbrs].max() - f[j]
        out.append(osc)
    return out


# ---------------------------------------------------------------------------
# classification


def _direction_net(hrep: HPolytope, dim: int, directions: int | None) -> np.ndarray:
    if dim == 2:
        base = circle_angles(directions or 48)
    elif dim == 3:
        base = icosphere(2) if directions is None else unit_sphere_samples(3, directions, seed=0)
    else:
        base = unit_sphere_samples(dim, directions or 80, seed=0)
    axes = np.vstack([np.eye(dim), -np.eye(dim)])
    extra = [base, axes]
    normals = np.atleast_2d(hrep.normals) if hrep.normals.size else np.zeros((0, dim))
    if len(normals) > 120:
        normals = normals[:: int(math.ceil(len(normals) / 120))]
    extra.append(normals)
    if hrep.eq_normals.size:
        eqn = np.atleast_2d(hrep.eq_normals)
        extra += [eqn, -eqn]
    dirs = np.vstack(extra)
    dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    _, idx = np.unique(np.round(dirs / 1e-9), axis=0, return_index=True)
    return dirs[np.sort(idx)]


def _scan_direction(env, shadow_verts, spacing, deltas, t):
    """Largest extrapolated jump for one direction at one mesh spacing.

    Returns (jump, point, threshold, rebound).  ``rebound`` is the rise of f
    from the candidate point to the minimum over the annulus at distance
    [0.4 delta, delta]: a jump born from a vertical boundary fiber sits at
    the bottom of a rise on all sides and rebounds by the fiber height, while
    a one-sided cliff (a body edge nearly parallel to the direction) or a
    thin wedge where two boundary chains pass within delta of each other does
    not rebound and is a discretization artifact, not a jump.
    """
    pts, chains = _mesh_boundary(shadow_verts, spacing, t)
    f, _, feas = env.heights(pts)
    pts, f = pts[feas], f[feas]
    if len(pts) < 2:
        return 0.0, None, np.inf, 0.0
    tree = cKDTree(pts)
    osc_wide, osc_half = _oscillations(tree, pts, f, deltas)
    jumps = np.maximum(0.0, 2.0 * osc_half - osc_wide)
    frange = float(f.max() - f.min())
    slope = _slope_quantile(pts, f, chains)
    threshold = max(10.0 * spacing * slope, 0.05 * frange, 1e-7)
    j = int(np.argmax(jumps))
    ring = set(tree.query_ball_point(pts[j], deltas[0]))
    ring -= set(tree.query_ball_point(pts[j], 0.4 * deltas[0]))
    rebound = float(f[sorted(ring)].min() - f[j]) if ring else 0.0
    return float(jumps[j]), pts[j], threshold, rebound


def pset_check(
    body: ConvexBody,
    directions: int | None = None,
    mesh: float = 0.0125,
    refinements: int = 2,
    deltas: tuple = (0.05, 0.025),
    tol: Tolerances | None = None,
) -> PsetVerdict:
    """Classify whether every lower height function of the body is continuous.

    For each direction in the net the shadow boundary is meshed at ``mesh``
    spacing and the oscillation at physical scales ``deltas`` (wide, half) is
    linearly extrapolated to scale zero.  A candidate jump must clear the
    threshold (10x the mesh-induced slope allowance, floored at 5% of the
    height range), persist through ``refinements`` mesh halvings, and show a
    two-sided rebound: f must rise again by at least half the jump over the
    surrounding annulus, the signature of a vertical boundary fiber.  The
    rebound stage dismisses one-sided cliffs and thin boundary wedges, which
    mimic jumps at the delta scale but are discretization artifacts.
    Candidates that linger near the threshold without resolving give
    Inconclusive.

    The certificate is deliberately two-sided: a jump whose high values lie
    entirely on one side while the other side stays at the floor level has no
    rebound and is not certified, because at the delta scale it cannot be
    told apart from a steep alignment ramp.  Such one-sided discontinuities
    surface instead through the output modulus of any selection built over
    the body.
    """
    t = tolerances_or_default(tol)
    if body.dim not in (2, 3, 4):
        raise UnsupportedDim("classification covers ambient dimensions 2-4")
    if deltas[1] * 2 != deltas[0]:
        raise ValueError("deltas must halve: (d, d/2)")
    hrep = to_hrep(body, tol=t)
    verts = flatten_vertices(body)
    dirs = _direction_net(hrep, body.dim, directions)
    spacing0 = mesh if body.dim < 4 else max(mesh, 0.025)
    best = (0.0, None, None)  # (jump, point, direction)
    lingering = False
    for q in dirs:
        env = _Envelope(hrep, q, t)
        shadow_verts = verts @ env.basis
        jump, point, threshold, rebound = _scan_direction(
            env, shadow_verts, spacing0, deltas, t
        )
        if jump < threshold:
            continue
        # refinement: the jump must survive denser boundary sampling
        survived, spacing = True, spacing0
        for _ in range(refinements):
            spacing /= 2.0
            jump, point, threshold, rebound = _scan_direction(
                env, shadow_verts, spacing, deltas, t
            )
            if jump < threshold / 2.0:
                survived = False
                break
        if not survived:
            continue
        if jump < threshold:
            lingering = True
            continue
        if rebound < max(threshold, 0.5 * jump):
            continue
        if jump > best[0]:
            best = (jump, point, q)
    resolution = {
        "mesh": spacing0 / (2**refinements),
        "deltas": tuple(deltas),
        "directions": len(dirs),
        "refinements": refinements,
        "rebound_annulus": (0.4 * deltas[0], deltas[0]),
    }
    if best[2] is not None:
        return PsetVerdict(NOT_PSET, best[2], best[1], best[0], resolution)
    if lingering:
        return PsetVerdict(INCONCLUSIVE, None, None, 0.0, resolution)
    return PsetVerdict(PSET, None, None, 0.0, resolution)


def lsc_defect(
    body: ConvexBody,
    q,
    mesh: float = 0.0125,
    deltas: tuple = (0.05, 0.025),
    tol: Tolerances | None = None,
) -> float:
    """Extrapolated downward jump of the lower height function along q.

    Mirror image of the usc scan: measures f(x0) minus the minimum over
    shrinking balls.  Lower height functions are lower semicontinuous
    automatically, so for bodies with continuous f the drops cancel and the
    value stays near zero; next to a genuine jump the minimum keeps seeing
    the low side, and the value approaches the jump size as seen from the
    high side.  Useful as a sanity probe on the envelope machinery.
    """
    t = tolerances_or_default(tol)
    env = _Envelope(to_hrep(body, tol=t), q, t)
    pts, _ = _mesh_boundary(flatten_vertices(body) @ env.basis, mesh, t)
    f, _, feas = env.heights(pts)
    pts, f = pts[feas], f[feas]
    if len(pts) < 2:
        return 0.0
    drop_wide, drop_half = _oscillations(cKDTree(pts), pts, -f, deltas)
    return float(np.maximum(0.0, 2.0 * drop_half - drop_wide).max())


# ---------------------------------------------------------------------------
# openness cross-check


def openness_check(
    body: ConvexBody,
    q,
    mesh: float = 0.05,
    margin: float | None = None,
    tol: Tolerances | None = None,
) -> OpennessReport:
    """Probe whether projecting along q is an open map on the body.

    Near-boundary anchor points z are paired with shadow probes y close to
    the projection of z; openness requires the fiber over y to meet the
    mesh-ball around z.  Probes combine a direction ring with actual shadow
    boundary samples, so thin high-slope boundary strips are not missed.
    Misses smaller than ``margin`` (default mesh/2) are not reported: short
    steep facets of a polytopal stand-in for a smooth body overshoot the
    window by about their sagitta, which is noise at the probe scale, while
    structural failures overshoot by a height-scale amount.
    """
    t = tolerances_or_default(tol)
    qn = unit(q)
    if margin is None:
        margin = mesh / 2.0
    if body.dim not in (2, 3, 4):
        raise UnsupportedDim("openness probing covers ambient dimensions 2-4")
    hrep = to_hrep(body, tol=t)
    env = _Envelope(hrep, qn, t)
    verts = flatten_vertices(body)
    center, _ = chebyshev_center(body, tol=t)
    anchors = [np.asarray(center, dtype=float)]
    for v in prune_vertices(verts, tol=t):
        gap = center - v
        norm = np.linalg.norm(gap)
        if norm > 1e-12:
            anchors.append(v + (mesh / 8.0) * gap / norm)
    anchors = np.array(anchors)
    shadow_pts, _ = _mesh_boundary(verts @ env.basis, mesh / 8.0, t)
    sf, _, sfeas = env.heights(shadow_pts)
    shadow_pts = shadow_pts[sfeas]
    tree = cKDTree(shadow_pts) if len(shadow_pts) else None
    d_sh = env.basis.shape[1]
    if d_sh == 1:
        ring = np.array([[-1.0], [1.0]])
    elif d_sh == 2:
        ring = circle_angles(16)
    else:
        ring = icosphere(1)
    violations = []
    for z in anchors:
        x = env.basis.T @ z
        mu_z = float(qn @ z)
        probes = [x + (mesh / 4.0) * u for u in ring]
        if tree is not None:
            near = tree.query_ball_point(x, 1.2 * (mesh / 4.0))
            probes += [shadow_pts[i] for i in near]
        P = np.array(probes)
        gaps = np.linalg.norm(P - x, axis=1)
        keep = gaps <= mesh * (1.0 - 1e-9)  # fiber window must stay real
        P, gaps = P[keep], gaps[keep]
        if not len(P):
            continue
        f, g, feas = env.heights(P)
        width = np.sqrt(np.maximum(mesh**2 - gaps**2, 0.0))
        slack = margin + 10 * t.membership
        bad = feas & ((f > mu_z + width + slack) | (g < mu_z - width - slack))
        for i in np.flatnonzero(bad):
            defect = max(f[i] - (mu_z + width[i]), (mu_z - width[i]) - g[i])
            violations.append((z.copy(), P[i].copy(), float(defect)))
    return OpennessReport(qn, tuple(violations), len(anchors), mesh)
