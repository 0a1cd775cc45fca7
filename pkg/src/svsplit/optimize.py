"""Dense LP / projection-QP / enclosing-ball kernels.

Deliberately self-contained: runs must be reproducible bit-for-bit across
machines, so nothing here delegates to an external solver.  The instances this
toolkit produces have few variables and many constraints, hence
:func:`lp_solve` works on the dual, whose simplex basis stays tiny while each
iteration is a vectorized pass over the columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Tolerances, tolerances_or_default
from .errors import DimError, EmptyInput, SolverStall

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_REFACTOR_EVERY = 150
_BLAND_PATIENCE = 40


def _as_matrix(a, n: int, name: str) -> np.ndarray:
    if a is None:
        return np.zeros((0, n))
    m = np.atleast_2d(np.asarray(a, dtype=float))
    if m.size == 0:
        return np.zeros((0, n))
    if m.shape[1] != n:
        raise DimError(f"{name} has {m.shape[1]} columns, expected {n}")
    return m


def _as_vector(v, m: int, name: str) -> np.ndarray:
    if v is None:
        return np.zeros(0)
    w = np.atleast_1d(np.asarray(v, dtype=float)).ravel()
    if w.size != m:
        raise DimError(f"{name} has length {w.size}, expected {m}")
    return w


@dataclass
class LinearProgram:
    """min <objective, x>  subject to  lhs_ineq x <= rhs_ineq, lhs_eq x = rhs_eq."""

    objective: np.ndarray
    lhs_ineq: np.ndarray | None = None
    rhs_ineq: np.ndarray | None = None
    lhs_eq: np.ndarray | None = None
    rhs_eq: np.ndarray | None = None

    def __post_init__(self):
        self.objective = np.atleast_1d(np.asarray(self.objective, dtype=float)).ravel()
        n = self.objective.size
        self.lhs_ineq = _as_matrix(self.lhs_ineq, n, "lhs_ineq")
        self.rhs_ineq = _as_vector(self.rhs_ineq, self.lhs_ineq.shape[0], "rhs_ineq")
        self.lhs_eq = _as_matrix(self.lhs_eq, n, "lhs_eq")
        self.rhs_eq = _as_vector(self.rhs_eq, self.lhs_eq.shape[0], "rhs_eq")

    @property
    def n_vars(self) -> int:
        return self.objective.size


@dataclass(frozen=True)
class LpResult:
    status: str
    value: float | None
    x: np.ndarray | None


def _standard_form_simplex(M: np.ndarray, r: np.ndarray, q: np.ndarray, tol: Tolerances):
    """min q.z  s.t.  M z = r, z >= 0.

    Returns (status, pi) where pi are the optimal row multipliers; callers of
    the dual route read the primal optimizer straight from pi.
    """
    k, ncols = M.shape
    if k == 0:
        if ncols and (q < -tol.optimality).any():
            return UNBOUNDED, np.zeros(0)
        return OPTIMAL, np.zeros(0)

    M = M.copy()
    r = r.copy()
    flip = r < 0
    M[flip] *= -1.0
    r[flip] *= -1.0

    A = np.hstack([M, np.eye(k)])
    n_total = ncols + k
    art = np.arange(ncols, n_total)
    basis = list(art)
    Binv = np.eye(k)
    xB = r.copy()
    scale = 1.0 + float(np.abs(r).max(initial=0.0))
    piv_tol = max(tol.rank, 1e-12) * max(1.0, float(np.abs(A).max(initial=1.0)))
    max_iter = 400 + 40 * k + 3 * n_total

    def run_phase(cost: np.ndarray, allow_mask: np.ndarray) -> str:
        nonlocal Binv, xB, basis
        bland = False
        stall = 0
        prev_obj = np.inf
        for it in range(max_iter):
            if it and it % _REFACTOR_EVERY == 0:
                Binv = np.linalg.inv(A[:, basis])
                xB = Binv @ r
            cB = cost[basis]
            pi = cB @ Binv
            red = cost - pi @ A
            cand = np.flatnonzero(allow_mask & (red < -tol.optimality))
            if cand.size == 0:
                return OPTIMAL
            if bland:
                j = int(cand[0])
            else:
                j = int(cand[np.argmin(red[cand])])
            d = Binv @ A[:, j]
            is_art = np.isin(basis, art)
            up = d > piv_tol
            # basic artificials sit at zero and must not rise again
            down_art = is_art & (d < -piv_tol)
            if not up.any() and not down_art.any():
                return UNBOUNDED
            ratios = np.full(k, np.inf)
            ratios[up] = xB[up] / d[up]
            ratios[down_art] = 0.0
            rmin = ratios.min()
            ties = np.flatnonzero(ratios <= rmin + tol.tie * scale)
            art_ties = ties[is_art[ties]]
            pool = art_ties if art_ties.size else ties
            row = int(pool[np.argmin(np.asarray(basis)[pool])])
            piv = d[row]
            Binv[row] /= piv
            xB[row] /= piv
            others = np.arange(k) != row
            Binv[others] -= np.outer(d[others], Binv[row])
            xB[others] -= d[others] * xB[row]
            xB[np.abs(xB) < piv_tol] = np.maximum(xB[np.abs(xB) < piv_tol], 0.0)
            basis[row] = j
            obj = float(cost[basis] @ xB)
            if obj < prev_obj - tol.optimality * (1.0 + abs(prev_obj)):
                stall = 0
            else:
                stall += 1
                if stall > _BLAND_PATIENCE:
                    bland = True
            prev_obj = obj
        raise SolverStall(f"simplex exceeded {max_iter} iterations")

    cost1 = np.zeros(n_total)
    cost1[art] = 1.0
    allow1 = np.ones(n_total, dtype=bool)
    status = run_phase(cost1, allow1)
    if status != OPTIMAL:
        raise SolverStall("phase-1 objective unbounded; numerical breakdown")
    if float(cost1[basis] @ xB) > tol.feasibility * scale:
        return INFEASIBLE, np.zeros(k)

    cost2 = np.concatenate([q, np.zeros(k)])
    allow2 = np.zeros(n_total, dtype=bool)
    allow2[:ncols] = True
    status = run_phase(cost2, allow2)
    pi = cost2[basis] @ Binv
    pi = pi.copy()
    pi[flip] *= -1.0
    if status == UNBOUNDED:
        return UNBOUNDED, pi
    return OPTIMAL, pi


def _solve_dual_route(c, A, b, E, e, tol):
    """Statuses refer to the primal min-form problem."""
    n = c.size
    if A.shape[0] == 0 and E.shape[0] == 0:
        if np.abs(c).max(initial=0.0) <= tol.optimality:
            return OPTIMAL, np.zeros(n)
        return UNBOUNDED, None
    M = np.hstack([A.T, E.T, -E.T]) if E.shape[0] else A.T.copy()
    q = np.concatenate([b, e, -e]) if E.shape[0] else b.copy()
    status, pi = _standard_form_simplex(M, -c, q, tol)
    if status == OPTIMAL:
        return OPTIMAL, pi
    if status == UNBOUNDED:
        # dual unbounded below -> primal infeasible
        return INFEASIBLE, None
    return "dual_infeasible", None


def lp_solve(
    lp: LinearProgram,
    tol: Tolerances | None = None,
    lexicographic: bool = True,
    _probe: bool = False,
) -> LpResult:
    """Solve a dense LP.

    Returns status ``optimal`` (with value and optimizer), ``infeasible``, or
    ``unbounded``.  With ``lexicographic=True`` the reported optimizer is the
    lexicographically smallest point of the optimal face, which keeps golden
    outputs deterministic; it costs one extra solve per coordinate.
    """
    t = tolerances_or_default(tol)
    c = lp.objective
    A, b = lp.lhs_ineq, lp.rhs_ineq
    E, e = lp.lhs_eq, lp.rhs_eq

    status, x = _solve_dual_route(c, A, b, E, e, t)
    if status == OPTIMAL:
        feas_gap = _violation(x, A, b, E, e)
        if feas_gap > 1e4 * t.feasibility * _row_scale(A, b, E, e):
            raise SolverStall(f"dual-route optimizer violates constraints by {feas_gap:.3e}")
        value = float(c @ x)
        if lexicographic:
            refined = _lex_refine(c, A, b, E, e, value, t)
            if refined is not None:
                x = refined
        return LpResult(OPTIMAL, value, x)
    if status == INFEASIBLE:
        return LpResult(INFEASIBLE, None, None)

    # dual infeasible: primal is unbounded or infeasible; probe feasibility
    if _probe:
        return LpResult(UNBOUNDED, None, None)
    n = c.size
    probe = LinearProgram(
        objective=np.concatenate([np.zeros(n), [1.0]]),
        lhs_ineq=np.vstack(
            [
                np.hstack([A, -np.ones((A.shape[0], 1))]),
                np.hstack([E, -np.ones((E.shape[0], 1))]),
                np.hstack([-E, -np.ones((E.shape[0], 1))]),
            ]
        ),
        rhs_ineq=np.concatenate([b, e, -e]),
    )
    pres = lp_solve(probe, tol=t, lexicographic=False, _probe=True)
    feasible = pres.status == UNBOUNDED or (
        pres.status == OPTIMAL and pres.value <= t.feasibility * _row_scale(A, b, E, e)
    )
    return LpResult(UNBOUNDED if feasible else INFEASIBLE, None, None)


def _row_scale(A, b, E, e) -> float:
    out = 1.0
    for arr in (A, b, E, e):
        if arr.size:
            out = max(out, float(np.abs(arr).max()))
    return out


def _violation(x, A, b, E, e) -> float:
    v = 0.0
    if A.shape[0]:
        v = max(v, float((A @ x - b).max(initial=0.0)))
    if E.shape[0]:
        v = max(v, float(np.abs(E @ x - e).max(initial=0.0)))
    return v


def _lex_refine(c, A, b, E, e, value, t: Tolerances) -> np.ndarray | None:
    """Lexicographically smallest point of the optimal face, pinned by equality rows."""
    n = c.size
    Eext = np.vstack([E, c[None, :]]) if E.shape[0] else c[None, :].copy()
    eext = np.concatenate([e, [value]])
    x = None
    for i in range(n):
        obj = np.zeros(n)
        obj[i] = 1.0
        status, xi = _solve_dual_route(obj, A, b, Eext, eext, t)
        if status != OPTIMAL:
            break  # coordinate unbounded below on the optimal face; keep last point
        x = xi
        Eext = np.vstack([Eext, obj[None, :]])
        eext = np.concatenate([eext, [xi[i]]])
    return x


def linear_minimize(c, A=None, b=None, E=None, e=None, tol: Tolerances | None = None) -> LpResult:
    """Bare minimum-form solve without the lexicographic pass (hot-path helper)."""
    return lp_solve(
        LinearProgram(objective=c, lhs_ineq=A, rhs_ineq=b, lhs_eq=E, rhs_eq=e),
        tol=tol,
        lexicographic=False,
    )


def combination_residual(groups, x, tol: Tolerances | None = None) -> float:
    """L1 distance from ``x`` to a sum of convex hulls.

    ``groups`` is a list of vertex arrays; the target set is
    hull(groups[0]) + hull(groups[1]) + ... and the returned value is the
    optimum of  min |u|_1 + |w|_1  over  sum_g V_g^T lam_g + u - w = x  with
    each lam_g on the simplex.  Zero (up to tolerance) certifies membership.
    """
    t = tolerances_or_default(tol)
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    mats = [np.atleast_2d(np.asarray(g, dtype=float)) for g in groups]
    if not mats:
        raise EmptyInput("need at least one vertex group")
    for g in mats:
        if g.shape[1] != n:
            raise DimError("vertex group dimension does not match the point")
    counts = [len(g) for g in mats]
    total = sum(counts)
    top = np.hstack([np.vstack(mats).T, np.eye(n), -np.eye(n)])
    rows = [top]
    at = 0
    for cnt in counts:
        ind = np.zeros(total + 2 * n)
        ind[at : at + cnt] = 1.0
        rows.append(ind[None, :])
        at += cnt
    M = np.vstack(rows)
    r = np.concatenate([x, np.ones(len(mats))])
    q = np.concatenate([np.zeros(total), np.ones(2 * n)])
    status, pi = _standard_form_simplex(M, r, q, t)
    if status != OPTIMAL:
        raise SolverStall("membership feasibility program did not solve")
    return max(0.0, float(pi @ r))


# ---------------------------------------------------------------------------
# projection QP


@dataclass(frozen=True)
class QpResult:
    point: np.ndarray
    distance: float
    vi_residual: float
    active: tuple[int, ...]


def nearest_point_qp(
    target,
    lhs_ineq=None,
    rhs_ineq=None,
    lhs_eq=None,
    rhs_eq=None,
    tol: Tolerances | None = None,
) -> QpResult:
    """Euclidean projection of ``target`` onto {x: lhs_ineq x <= rhs_ineq, lhs_eq x = rhs_eq}.

    Primal active-set iteration; optimality is certified by the variational
    inequality residual returned on the result.  Raises ``LpResult``-style
    infeasibility as a ``ValueError`` since an empty region has no projection.
    """
    t = tolerances_or_default(tol)
    target = np.atleast_1d(np.asarray(target, dtype=float)).ravel()
    n = target.size
    A = _as_matrix(lhs_ineq, n, "lhs_ineq")
    b = _as_vector(rhs_ineq, A.shape[0], "rhs_ineq")
    E = _as_matrix(lhs_eq, n, "lhs_eq")
    e = _as_vector(rhs_eq, E.shape[0], "rhs_eq")
    scale = _row_scale(A, b, E, e) + float(np.abs(target).max(initial=0.0))
    feas = t.feasibility * scale

    if _violation(target, A, b, E, e) <= feas:
        return QpResult(target.copy(), 0.0, 0.0, ())

    x = _feasible_start(A, b, E, e, t)
    work: list[int] = []
    max_iter = 100 + 12 * (A.shape[0] + n)
    for _ in range(max_iter):
        C = np.vstack([A[work], E]) if (work or E.shape[0]) else np.zeros((0, n))
        d = np.concatenate([b[work], e]) if C.shape[0] else np.zeros(0)
        if C.shape[0]:
            nu, *_ = np.linalg.lstsq(C @ C.T, C @ target - d, rcond=None)
            x_star = target - C.T @ nu
        else:
            nu = np.zeros(0)
            x_star = target.copy()
        step = x_star - x
        if np.linalg.norm(step) <= 10.0 * feas:
            lam = nu[: len(work)]
            neg = np.flatnonzero(lam < -t.optimality * scale)
            if neg.size == 0:
                return _qp_certificate(target, x_star, A, b, E, e, work, t)
            drop = int(neg[np.argmin(lam[neg])])
            work.pop(drop)
            continue
        alpha = 1.0
        blocker = -1
        if A.shape[0]:
            free = np.setdiff1d(np.arange(A.shape[0]), work, assume_unique=False)
            adv = A[free] @ step
            room = b[free] - A[free] @ x
            hit = adv > feas
            if hit.any():
                ratios = room[hit] / adv[hit]
                ratios = np.maximum(ratios, 0.0)
                idx = int(np.argmin(ratios))
                if ratios[idx] < alpha - t.tie:
                    alpha = float(ratios[idx])
                    blocker = int(free[hit][idx])
        x = x + alpha * step
        if blocker >= 0:
            work.append(blocker)
            work.sort()
    raise SolverStall("active-set projection did not converge")


def _feasible_start(A, b, E, e, t: Tolerances) -> np.ndarray:
    n = A.shape[1] if A.shape[0] else E.shape[1]
    probe = LinearProgram(
        objective=np.concatenate([np.zeros(n), [1.0]]),
        lhs_ineq=np.hstack([A, -np.ones((A.shape[0], 1))]) if A.shape[0] else None,
        rhs_ineq=b if A.shape[0] else None,
        lhs_eq=np.hstack([E, np.zeros((E.shape[0], 1))]) if E.shape[0] else None,
        rhs_eq=e if E.shape[0] else None,
    )
    res = lp_solve(probe, tol=t, lexicographic=False)
    scale = _row_scale(A, b, E, e)
    if res.status == UNBOUNDED:
        res = LpResult(OPTIMAL, -1.0, np.zeros(n + 1))
    if res.status != OPTIMAL or res.value > t.feasibility * scale:
        raise ValueError("projection target region is empty")
    return res.x[:n]


def _qp_certificate(target, x, A, b, E, e, work, t: Tolerances) -> QpResult:
    n = target.size
    C = np.vstack([A[work], E]) if (work or E.shape[0]) else np.zeros((0, n))
    if C.shape[0]:
        nu, *_ = np.linalg.lstsq(C.T, target - x, rcond=None)
        lam = nu[: len(work)]
        lam = np.maximum(lam, 0.0)
        mult = np.concatenate([lam, nu[len(work):]])
        resid = float(np.linalg.norm((target - x) - C.T @ mult))
    else:
        resid = float(np.linalg.norm(target - x))
    return QpResult(x, float(np.linalg.norm(x - target)), resid, tuple(work))


# ---------------------------------------------------------------------------
# minimum enclosing ball


def min_enclosing_ball(points, tol: Tolerances | None = None, seed: int = 0):
    """Smallest ball containing ``points`` (Welzl, randomized move-to-front).

    Returns ``(center, radius)``.  Deterministic for a fixed seed.
    """
    t = tolerances_or_default(tol)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ValueError("min_enclosing_ball needs at least one point")
    n, d = pts.shape
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    scale = 1.0 + float(np.abs(pts).max())
    eps = max(t.feasibility * scale, 1e-12 * scale)

    def circumball(boundary: list[np.ndarray]):
        if not boundary:
            return None
        base = boundary[0]
        diffs = np.array([p - base for p in boundary[1:]])
        if diffs.size == 0:
            return base.copy(), 0.0
        rhs = 0.5 * (diffs * diffs).sum(axis=1)
        offset, *_ = np.linalg.lstsq(diffs, rhs, rcond=None)
        center = base + offset
        radius = float(np.sqrt(((np.array(boundary) - center) ** 2).sum(axis=1).max()))
        return center, radius

    def welzl(idx: np.ndarray, boundary: list[np.ndarray]):
        ball = circumball(boundary)
        if len(boundary) == d + 1:
            return ball
        for i, pi in enumerate(idx):
            p = pts[pi]
            if ball is None or np.linalg.norm(p - ball[0]) > ball[1] + eps:
                ball = welzl(idx[:i], boundary + [p])
        return ball

    center, radius = welzl(order, [])
    radius = float(np.sqrt(((pts - center) ** 2).sum(axis=1).max()))
    return center, radius
