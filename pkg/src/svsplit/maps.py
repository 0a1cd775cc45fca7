"""Set-valued mappings over finite parameter samples.

A map is stored extensionally: parameter samples plus one convex body per
sample.  Continuity claims about such data are finite families of
inequalities; everything here reports estimates together with the sampling
gaps needed to read them honestly.

Pairwise Hausdorff work is batched: ball-valued maps use the closed form, and
everything else shares one support-value table per map across all pairs.
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
    body_from_json,
    body_to_json,
    diameter,
    difference_body,
    flatten_vertices,
)
from .config import Tolerances, tolerances_or_default
from .directions import default_plan
from .errors import (
    ConfigError,
    DimError,
    EmptyIntersection,
    InsufficientDomain,
    UnsupportedDim,
)
from .metrics import _as_single_ball, hausdorff_distance
from .polytopes import inclusion_radius, intersect_bodies, prune_vertices


@dataclass(frozen=True)
class SetValuedMap:
    points: np.ndarray
    bodies: tuple
    name: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        bodies = tuple(self.bodies)
        if len(bodies) == 0:
            raise ConfigError("a set-valued map needs at least one sample")
        if len(bodies) != len(pts):
            raise ConfigError("sample count and body count differ")
        d = bodies[0].dim
        for body in bodies:
            if body.dim != d:
                raise DimError("all values of a map must share one dimension")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "bodies", bodies)
        pts.flags.writeable = False

    def __len__(self) -> int:
        return len(self.bodies)

    @property
    def dim(self) -> int:
        return self.bodies[0].dim

    @property
    def param_dim(self) -> int:
        return self.points.shape[1]

    def body_at(self, i: int) -> ConvexBody:
        return self.bodies[i]

    def pair_distances(self) -> np.ndarray:
        diff = self.points[:, None, :] - self.points[None, :, :]
        return np.sqrt((diff**2).sum(axis=2))


def grid_map(a: float, b: float, bodies, name: str = "") -> SetValuedMap:
    return SetValuedMap(np.linspace(a, b, len(tuple(bodies))), tuple(bodies), name)


def same_domain(f1: SetValuedMap, f2: SetValuedMap) -> bool:
    return f1.points.shape == f2.points.shape and bool(
        np.allclose(f1.points, f2.points, atol=1e-12)
    )


@dataclass(frozen=True)
class ModulusEstimate:
    """Running max of pairwise Hausdorff values by pair distance."""

    breakpoints: tuple
    pair_count: int
    gap: float

    def __call__(self, t: float) -> float:
        ts = [bp[0] for bp in self.breakpoints]
        i = int(np.searchsorted(ts, t + 1e-12, side="right")) - 1
        return self.breakpoints[max(i, 0)][1]

    @property
    def omega_zero_plus(self) -> float:
        return self.breakpoints[0][1]


def empirical_modulus(f: SetValuedMap, tol: Tolerances | None = None) -> ModulusEstimate:
    if len(f) < 2:
        raise InsufficientDomain("modulus estimation needs at least two samples")
    t = tolerances_or_default(tol)
    dist = f.pair_distances()
    iu, ju = np.triu_indices(len(f), k=1)
    values, gap = _pairwise_hausdorff(f, iu, ju, t)
    pair_t = dist[iu, ju]
    order = np.argsort(pair_t, kind="stable")
    pair_t, values = pair_t[order], values[order]
    breaks = []
    running = 0.0
    keys = np.round(pair_t, 12)
    for key in np.unique(keys):
        sel = keys == key
        running = max(running, float(values[sel].max()))
        breaks.append((float(key), running))
    return ModulusEstimate(tuple(breaks), len(iu), gap)


def _pairwise_hausdorff(f: SetValuedMap, iu, ju, t: Tolerances):
    balls = [_as_single_ball(b) for b in f.bodies]
    if all(b is not None for b in balls):
        centers = np.vstack([b.center for b in balls])
        radii = np.array([b.radius for b in balls])
        cd = np.linalg.norm(centers[iu] - centers[ju], axis=1)
        return cd + np.abs(radii[iu] - radii[ju]), 0.0
    if f.dim == 1:
        his = np.array([b.support_value([1.0]) for b in f.bodies])
        los = np.array([-b.support_value([-1.0]) for b in f.bodies])
        return np.maximum(np.abs(his[iu] - his[ju]), np.abs(los[iu] - los[ju])), 0.0
    plan = default_plan(f.dim) if f.dim <= 3 else None
    if plan is None:
        from .directions import random_plan

        plan = random_plan(f.dim, 2000)
    from .metrics import support_table

    table = support_table(f.bodies, plan.dirs)
    values = np.abs(table[iu] - table[ju]).max(axis=1)
    rads = np.array([b.bounding_radius() for b in f.bodies])
    if math.isfinite(plan.covering_chord):
        gap = float((rads[iu] + rads[ju]).max() * plan.covering_chord)
    else:
        gap = math.inf
    return values, gap


def intersection_map(
    f1: SetValuedMap,
    f2: SetValuedMap,
    segments: int = 64,
    tol: Tolerances | None = None,
) -> SetValuedMap:
    """Samplewise F1 ∩ F2 as vertex bodies (balls discretized to inscribed polytopes)."""
    if not same_domain(f1, f2):
        raise ConfigError("intersection needs maps over one domain")
    if f1.dim != f2.dim:
        raise DimError("intersection needs values of one dimension")
    t = tolerances_or_default(tol)
    out = []
    for i in range(len(f1)):
        a = polytopal_body(f1.bodies[i], segments)
        b = polytopal_body(f2.bodies[i], segments)
        cap = intersect_bodies(a, b, tol=t)
        if cap is None:
            raise EmptyIntersection(
                f"values do not intersect at sample {i}", f1.points[i].copy()
            )
        out.append(cap)
    return SetValuedMap(f1.points, tuple(out), name=f"({f1.name})&({f2.name})")


def polytopal_body(body: ConvexBody, segments: int = 64) -> ConvexBody:
    """Replace every Ball in the structure with an inscribed polytope."""
    if isinstance(body, Ball):
        if body.dim == 2:
            from .bodies import disk_polygon

            return disk_polygon(body.center, body.radius, segments)
        if body.dim == 3:
            from .bodies import ball_polytope

            return ball_polytope(body.center, body.radius, 2 if segments >= 64 else 1)
        if body.dim == 1:
            return VPolytope(body.center + body.radius * np.array([[-1.0], [1.0]]))
        raise UnsupportedDim("ball discretization tops out at dimension 3")
    if isinstance(body, MinkowskiSum):
        return MinkowskiSum(tuple(polytopal_body(p, segments) for p in body.parts))
    if isinstance(body, AffineImage):
        return AffineImage(body.matrix, body.offset, polytopal_body(body.body, segments))
    if isinstance(body, Product):
        return Product(tuple(polytopal_body(p, segments) for p in body.factors))
    return body


def estimate_alpha(f1: SetValuedMap, f2: SetValuedMap, tol: Tolerances | None = None):
    """(alpha, gamma_min) for the intersection continuity bound.

    Per sample, gamma is the inclusion radius of F1 - F2 and d the smaller of
    the two diameters; alpha = max d/gamma with 0/0 counting as 0 and any
    d > 0 over gamma = 0 making alpha infinite.
    """
    if not same_domain(f1, f2):
        raise ConfigError("alpha estimation needs maps over one domain")
    t = tolerances_or_default(tol)
    alpha = 0.0
    gamma_min = math.inf
    for i in range(len(f1)):
        gamma = inclusion_radius(difference_body(f1.bodies[i], f2.bodies[i]), tol=t)
        d = min(diameter(f1.bodies[i]), diameter(f2.bodies[i]))
        gamma_min = min(gamma_min, gamma)
        if d <= 1e-12:
            continue
        if gamma <= 1e-12:
            return math.inf, 0.0
        alpha = max(alpha, d / gamma)
    return alpha, gamma_min


@dataclass(frozen=True)
class ModulusReport:
    applicable: bool
    alpha: float
    gamma_min: float
    pair_count: int
    violations: tuple
    worst_slack: float
    tolerance: float
    note: str

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "alpha": None if math.isinf(self.alpha) else self.alpha,
            "alpha_infinite": math.isinf(self.alpha),
            "gamma_min": self.gamma_min,
            "pair_count": self.pair_count,
            "violation_count": len(self.violations),
            "violations": [list(v) for v in self.violations],
            "worst_slack": self.worst_slack,
            "tolerance": self.tolerance,
            "note": self.note,
        }


_CONSISTENCY_NOTE = (
    "consistency check with empirical moduli on both sides; "
    "not a continuity proof"
)


def verify_intersection_modulus(
    f1: SetValuedMap,
    f2: SetValuedMap,
    segments: int = 64,
    tol: Tolerances | None = None,
) -> ModulusReport:
    """Check h(G(x1),G(x2)) <= max(w1,w2) + alpha*(w1+w2) over all sampled pairs."""
    t = tolerances_or_default(tol)
    alpha, gamma_min = estimate_alpha(f1, f2, tol=t)
    if math.isinf(alpha):
        return ModulusReport(
            False, alpha, gamma_min, 0, (), math.nan, math.nan,
            "bound not applicable: alpha is infinite (gamma reaches 0 with positive diameter); "
            + _CONSISTENCY_NOTE,
        )
    g = intersection_map(f1, f2, segments=segments, tol=t)
    w1 = empirical_modulus(f1, tol=t)
    w2 = empirical_modulus(f2, tol=t)
    dist = f1.pair_distances()
    iu, ju = np.triu_indices(len(f1), k=1)
    lhs, gap_g = _pairwise_hausdorff(g, iu, ju, t)
    # discretizing balls to inscribed polytopes moves each body by at most its
    # chord deficit; fold that into the comparison tolerance
    deficit = max(
        (_discretization_deficit(b, segments) for b in (*f1.bodies, *f2.bodies)),
        default=0.0,
    )
    tol_total = gap_g + (1.0 + 2.0 * alpha) * (max(w1.gap, w2.gap) + 2.0 * deficit) + 1e-6
    violations = []
    worst = math.inf
    for k in range(len(iu)):
        tk = dist[iu[k], ju[k]]
        o1, o2 = w1(tk), w2(tk)
        rhs = max(o1, o2) + alpha * (o1 + o2)
        slack = rhs + tol_total - float(lhs[k])
        worst = min(worst, slack)
        if slack < 0:
            violations.append((int(iu[k]), int(ju[k]), float(lhs[k]), rhs))
    return ModulusReport(
        True, alpha, gamma_min, len(iu), tuple(violations), worst, tol_total,
        _CONSISTENCY_NOTE,
    )


def _discretization_deficit(body: ConvexBody, segments: int) -> float:
    if isinstance(body, Ball):
        if body.dim == 2:
            return body.radius * (1.0 - math.cos(math.pi / segments))
        if body.dim == 3:
            return body.radius * 0.02  # icosphere level 2 chord deficit bound
        return 0.0
    if isinstance(body, MinkowskiSum):
        return sum(_discretization_deficit(p, segments) for p in body.parts)
    if isinstance(body, AffineImage):
        scale = float(np.linalg.norm(body.matrix, 2))
        return scale * _discretization_deficit(body.body, segments)
    if isinstance(body, Product):
        return math.sqrt(sum(_discretization_deficit(p, segments) ** 2 for p in body.factors))
    return 0.0


def graph_body(f: SetValuedMap, at) -> VPolytope:
    """Hull of the listed graph fibers {x} x F(x) as one polytope."""
    indices = []
    for x in at:
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        hits = np.flatnonzero(np.all(np.abs(f.points - xv) <= 1e-9, axis=1))
        if hits.size == 0:
            raise ConfigError(f"parameter {x!r} is not a domain sample")
        indices.append(int(hits[0]))
    total = f.param_dim + f.dim
    if total > 6:
        raise UnsupportedDim("graph bodies are limited to total dimension 6")
    rows = []
    for i in indices:
        verts = flatten_vertices(f.bodies[i])
        rows.append(np.hstack([np.tile(f.points[i], (len(verts), 1)), verts]))
    return VPolytope(prune_vertices(np.vstack(rows)))


# ---------------------------------------------------------------------------
# bundled families and JSON forms


def translating_ball_map(a=0.0, b=1.0, n=101, radius=1.0, velocity=(1.0, 0.0), name="translating_ball"):
    xs = np.linspace(a, b, n)
    v = np.asarray(velocity, dtype=float)
    return SetValuedMap(xs, tuple(Ball(x * v, radius) for x in xs), name)


def scaling_ball_map(a=1.0, b=2.0, n=101, center=(0.0, 0.0), name="scaling_ball"):
    xs = np.linspace(a, b, n)
    c = np.asarray(center, dtype=float)
    return SetValuedMap(xs, tuple(Ball(c, float(x)) for x in xs), name)


def rotating_polytope_map(a=0.0, b=1.0, n=101, vertices=None, rate=1.0, name="rotating_polytope"):
    if vertices is None:
        vertices = [[-1, -1], [1, -1], [1, 1], [-1, 1]]
    base = np.asarray(vertices, dtype=float)
    xs = np.linspace(a, b, n)
    bodies = []
    for x in xs:
        th = rate * x
        rot = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
        bodies.append(VPolytope(base @ rot.T))
    return SetValuedMap(xs, tuple(bodies), name)


def constant_map(body: ConvexBody, a=0.0, b=1.0, n=101, name="constant"):
    return SetValuedMap(np.linspace(a, b, n), tuple([body] * n), name)


def bundled_pair(name: str, n: int = 101):
    """Named (F1, F2) pairs driving the intersection-bound checks."""
    if name == "translating_balls":
        f1 = translating_ball_map(0.0, 0.5, n, radius=2.0, velocity=(1.0, 0.0), name="ball_right")
        f2 = translating_ball_map(0.0, 0.5, n, radius=2.0, velocity=(-1.0, 0.0), name="ball_left")
        return f1, f2
    if name == "rotating_polytope":
        f1 = rotating_polytope_map(0.0, 1.0, n)
        f2 = constant_map(VPolytope([[-1, -1], [1, -1], [1, 1], [-1, 1]]), 0.0, 1.0, n, name="static_box")
        return f1, f2
    if name == "gamma_collapse":
        # centers drift apart until the difference body only touches the origin
        f1 = translating_ball_map(0.0, 1.0, n, radius=1.0, velocity=(-1.0, 0.0), name="left_lens")
        f2 = translating_ball_map(0.0, 1.0, n, radius=1.0, velocity=(1.0, 0.0), name="right_lens")
        return f1, f2
    raise ConfigError(f"unknown bundled pair {name!r}")


def map_to_json(f: SetValuedMap) -> dict:
    xs = f.points
    domain: dict
    if xs.shape[1] == 1 and len(xs) >= 2:
        lin = np.linspace(xs[0, 0], xs[-1, 0], len(xs))
        if np.allclose(lin, xs[:, 0], atol=1e-12):
            domain = {"kind": "interval", "a": float(xs[0, 0]), "b": float(xs[-1, 0]), "n": len(xs)}
        else:
            domain = {"kind": "points", "values": xs[:, 0].tolist()}
    else:
        domain = {"kind": "points", "values": xs.tolist()}
    return {
        "type": "grid_map",
        "name": f.name,
        "domain": domain,
        "bodies": [body_to_json(b) for b in f.bodies],
    }


_FAMILIES = {
    "translating_ball": translating_ball_map,
    "scaling_ball": scaling_ball_map,
    "rotating_polytope": rotating_polytope_map,
}


def map_from_json(data, path: str = "$") -> SetValuedMap:
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object")
    kind = data.get("type")
    if kind == "family":
        name = data.get("name")
        if name not in _FAMILIES:
            raise ConfigError(f"{path}.name: unknown family {name!r}")
        params = data.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"{path}.params: expected an object")
        try:
            return _FAMILIES[name](**params)
        except TypeError as exc:
            raise ConfigError(f"{path}.params: {exc}") from exc
    if kind != "grid_map":
        raise ConfigError(f"{path}.type: expected 'grid_map' or 'family', got {kind!r}")
    domain = data.get("domain")
    if not isinstance(domain, dict):
        raise ConfigError(f"{path}.domain: expected an object")
    dk = domain.get("kind")
    if dk == "interval":
        try:
            xs = np.linspace(float(domain["a"]), float(domain["b"]), int(domain["n"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{path}.domain: interval needs numeric a, b, n ({exc})") from exc
    elif dk == "points":
        vals = domain.get("values")
        if not isinstance(vals, list) or not vals:
            raise ConfigError(f"{path}.domain.values: expected a nonempty list")
        xs = np.asarray(vals, dtype=float)
    else:
        raise ConfigError(f"{path}.domain.kind: expected 'interval' or 'points', got {dk!r}")
    blobs = data.get("bodies")
    if not isinstance(blobs, list) or not blobs:
        raise ConfigError(f"{path}.bodies: expected a nonempty list")
    bodies = tuple(
        body_from_json(blob, f"{path}.bodies[{i}]") for i, blob in enumerate(blobs)
    )
    try:
        return SetValuedMap(xs, bodies, str(data.get("name", "")))
    except (ConfigError, DimError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
