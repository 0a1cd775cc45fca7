"""Unit-direction sampling plans with covering guarantees.

The Hausdorff and inclusion-radius estimators need a net of unit directions
together with a bound on how far an arbitrary direction can be from the net
(chord metric); that bound is what turns a sampled maximum into a rigorous
two-sided estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import UnsupportedDim


def circle_angles(n: int) -> np.ndarray:
    th = 2.0 * math.pi * np.arange(n) / n
    return np.stack([np.cos(th), np.sin(th)], axis=1)


@lru_cache(maxsize=8)
def _icosphere_cached(level: int):
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = []
    for s1 in (-1.0, 1.0):
        for s2 in (-1.0, 1.0):
            verts += [(0.0, s1, s2 * phi), (s1, s2 * phi, 0.0), (s2 * phi, 0.0, s1)]
    V = np.unique(np.round(np.array(verts), 12), axis=0)
    V = V / np.linalg.norm(V, axis=1, keepdims=True)
    from scipy.spatial import ConvexHull

    F = [tuple(f) for f in ConvexHull(V).simplices]
    for _ in range(level):
        V = list(V)
        midpoint = {}

        def mid(i, j):
            key = (i, j) if i < j else (j, i)
            if key not in midpoint:
                m = V[i] + V[j]
                m = m / np.linalg.norm(m)
                midpoint[key] = len(V)
                V.append(m)
            return midpoint[key]

        nf = []
        for a, b, c in F:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            nf += [(a, ab, ca), (b, ab, bc), (c, bc, ca), (ab, bc, ca)]
        F = nf
        V = np.array(V)
    V = np.asarray(V)
    edge_max = 0.0
    for a, b, c in F:
        for i, j in ((a, b), (b, c), (c, a)):
            dot = float(np.clip(np.dot(V[i], V[j]), -1.0, 1.0))
            edge_max = max(edge_max, math.acos(dot))
    V.flags.writeable = False
    return V, tuple(F), edge_max


def icosphere(level: int) -> np.ndarray:
    """Unit vectors of a subdivided icosahedron: 12, 42, 162, 642, 2562, ..."""
    return _icosphere_cached(level)[0]


def icosphere_faces(level: int):
    return _icosphere_cached(level)[1]


def unit_sphere_samples(dim: int, n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    out = rng.standard_normal((n, dim))
    norms = np.linalg.norm(out, axis=1)
    bad = norms < 1e-12
    while bad.any():
        out[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(out, axis=1)
        bad = norms < 1e-12
    return out / norms[:, None]


@dataclass(frozen=True)
class SamplingPlan:
    """A direction net plus the chord distance any unit vector has to it.

    ``covering_chord = inf`` flags a net without a rigorous covering bound
    (random high-dimensional sampling); estimates stay valid as lower bounds.
    """

    dirs: np.ndarray
    covering_chord: float

    @property
    def dim(self) -> int:
        return self.dirs.shape[1]

    def refined(self) -> "SamplingPlan":
        """Plan with roughly doubled angular density."""
        d = self.dim
        if d == 2:
            return circle_plan(2 * len(self.dirs))
        if d == 3:
            lv = _level_for_count(len(self.dirs)) + 1
            return icosphere_plan(min(lv, 6))
        return random_plan(d, 2 * len(self.dirs), seed=len(self.dirs))


def circle_plan(n: int = 720) -> SamplingPlan:
    # nearest sample within angle pi/n; chord = 2 sin(pi/(2n))
    return SamplingPlan(circle_angles(n), 2.0 * math.sin(math.pi / (2.0 * n)))


def _level_for_count(count: int) -> int:
    lv, n = 0, 12
    while n < count and lv < 7:
        lv += 1
        n = 10 * 4**lv + 2
    return lv


def icosphere_plan(level: int = 4) -> SamplingPlan:
    V, _, edge_max = _icosphere_cached(level)
    # every unit vector lies in a face, hence within the longest face edge of a vertex
    return SamplingPlan(V, 2.0 * math.sin(min(edge_max, math.pi) / 2.0))


def random_plan(dim: int, n: int, seed: int = 0) -> SamplingPlan:
    return SamplingPlan(unit_sphere_samples(dim, n, seed), math.inf)


def default_plan(dim: int, density: int | None = None) -> SamplingPlan:
    """2-D: 720 angles; 3-D: 2562-point icosphere; above: seeded random net."""
    if dim < 2:
        raise UnsupportedDim("direction nets start at dimension 2")
    if dim == 2:
        return circle_plan(density or 720)
    if dim == 3:
        if density is None:
            return icosphere_plan(4)
        return icosphere_plan(max(0, min(6, _level_for_count(density))))
    return random_plan(dim, density or 2000)
