"""Named demonstration bodies.

Circular arcs are discretized to chords; the count ``m`` always refers to a
full turn, so a half-circle arc receives ``m // 2`` chords.  All builders are
deterministic, which keeps vertex arrays bitwise reproducible across calls --
the crease sampler below relies on that to land exactly on stored vertices.
"""

from __future__ import annotations

import math

import numpy as np

from .bodies import VPolytope, minkowski_sum
from .directions import circle_angles
from .errors import UnknownBody


def _check_resolution(m: int) -> None:
    if m < 8 or m % 2:
        raise ValueError(f"arc resolution must be an even count >= 8, got {m}")


def cylinder_body(m: int = 360) -> VPolytope:
    """Prism over the unit disk: an m-gon stacked at heights 0 and 1."""
    _check_resolution(m)
    ring = circle_angles(m)
    lo = np.hstack([ring, np.zeros((m, 1))])
    hi = np.hstack([ring, np.ones((m, 1))])
    return VPolytope(np.vstack([lo, hi]))


def tangent_apex_cone(m: int = 360) -> VPolytope:
    """Hull of a horizontal unit circle centered at (1, 0, 1) and the origin.

    The apex sits on the vertical through a boundary point of the circle's
    projection, so the bottom height function degenerates there.
    """
    _check_resolution(m)
    ring = circle_angles(m) + np.array([1.0, 0.0])
    top = np.hstack([ring, np.ones((m, 1))])
    return VPolytope(np.vstack([top, np.zeros((1, 3))]))


def _upper_arc(m: int) -> np.ndarray:
    th = np.linspace(0.0, math.pi, m // 2 + 1)
    return np.stack([np.cos(th), np.sin(th), np.zeros_like(th)], axis=1)


def _lower_arc(m: int) -> np.ndarray:
    th = np.linspace(-math.pi, 0.0, m // 2 + 1)
    return np.stack([np.cos(th), np.sin(th), np.ones_like(th)], axis=1)


def counter_arc_hull(m: int = 360) -> VPolytope:
    """Hull of an upper half-circle at height 0 and a lower half-circle at height 1.

    The two arcs share only the silhouette points (+-1, 0, *); everything in
    between is filled by slanted boundary, which makes the summand
    decomposition along the crease of ``counter_arc_hull + rise_segment``
    unique and discontinuous.
    """
    _check_resolution(m)
    return VPolytope(np.vstack([_upper_arc(m), _lower_arc(m)]))


def rise_segment() -> VPolytope:
    """Vertical unit segment from the origin."""
    return VPolytope([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0]])


def body_zoo(name: str, m: int = 360):
    """Bundled body by name; arcs discretized to ``m`` chords per full turn."""
    builders = {
        "cylinder": cylinder_body,
        "A0": tangent_apex_cone,
        "example11_A": counter_arc_hull,
        "example11_B": lambda m: rise_segment(),
        "example11_C": lambda m: minkowski_sum(counter_arc_hull(m), rise_segment()),
    }
    try:
        build = builders[name]
    except KeyError:
        raise UnknownBody(
            f"unknown body {name!r}; known names: {sorted(builders)}"
        ) from None
    return build(m)


ZOO_NAMES = ("cylinder", "A0", "example11_A", "example11_B", "example11_C")


def crease_samples(m: int, ts) -> tuple[np.ndarray, np.ndarray]:
    """Points on the crease of the arc-hull-plus-segment sum body.

    Each parameter t in [-pi/2, pi/2] \\ {0} is snapped to the nearest nonzero
    arc angle; the returned point is the stored arc vertex at that angle plus
    the vertical offset that keeps the point on the crease.  Landing exactly
    on vertices keeps the per-point decomposition a singleton, so downstream
    solvers are fully pinned.  Returns (snapped angles, points (k, 3)).
    """
    _check_resolution(m)
    n = m // 2
    step = math.pi / n
    upper, lower = _upper_arc(m), _lower_arc(m)
    snapped, pts = [], []
    for t in np.atleast_1d(np.asarray(ts, dtype=float)):
        if not -math.pi / 2 <= t <= math.pi / 2:
            raise ValueError(f"crease parameter {t} outside [-pi/2, pi/2]")
        k = int(np.clip(round(abs(t) / step), 1, n // 2))
        if t >= 0:
            a = upper[k]
            c = a + np.array([0.0, 0.0, 1.0 - 2.0 * k / n])
            snapped.append(k * step)
        else:
            a = lower[n - k]
            c = a + np.array([0.0, 0.0, 2.0 * k / n])
            snapped.append(-(k * step))
        pts.append(c)
    return np.array(snapped), np.array(pts)


def crease_anchor(m: int, t: float) -> np.ndarray:
    """The forced arc-hull summand for the crease point at (snapped) angle t."""
    n = m // 2
    step = math.pi / n
    k = int(np.clip(round(abs(t) / step), 1, n // 2))
    return _upper_arc(m)[k] if t >= 0 else _lower_arc(m)[n - k]
