"""Centralized numerical tolerances.

Every module pulls its thresholds from a single :class:`Tolerances` record so
that a run can be tightened globally (env ``SVSPLIT_TOL_PROFILE=strict``)
without touching call sites.  Functions accept an optional ``tol`` argument
and fall back to :func:`active_tolerances`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    feasibility: float = 1e-9    # constraint satisfaction slack
    optimality: float = 1e-8     # duality gap / reduced cost threshold
    rank: float = 1e-10          # relative singular value cutoff
    membership: float = 1e-8     # point-in-body certificates
    dedupe: float = 1e-9         # vertex / facet merging resolution
    tie: float = 1e-9            # tie detection for lexicographic rules


PROFILES = {
    "default": Tolerances(),
    "strict": Tolerances(
        feasibility=1e-11,
        optimality=1e-10,
        rank=1e-12,
        membership=1e-10,
        dedupe=1e-11,
        tie=1e-11,
    ),
}


def active_tolerances() -> Tolerances:
    """Tolerance record selected by ``SVSPLIT_TOL_PROFILE`` (default profile otherwise)."""
    name = os.environ.get("SVSPLIT_TOL_PROFILE", "default")
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(
            f"unknown tolerance profile {name!r}; expected one of {sorted(PROFILES)}"
        ) from None


def tolerances_or_default(tol: Tolerances | None) -> Tolerances:
    return tol if tol is not None else active_tolerances()


def scaled(tol: Tolerances, factor: float) -> Tolerances:
    """Uniformly loosened copy, used by sampling-based estimators."""
    return replace(
        tol,
        feasibility=tol.feasibility * factor,
        optimality=tol.optimality * factor,
        membership=tol.membership * factor,
    )
