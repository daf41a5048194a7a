"""Dense two-phase simplex and the polyhedral predicates built on it.

Problems here are tiny (tens of rows, at most a dozen variables), so a dense
tableau with Bland's rule is fast enough and pivots deterministically.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .system import InequalitySystem

FEAS_TOL = 1e-9
INCLUSION_TOL = 1e-7
_PIVOT_TOL = 1e-11
_MAX_PIVOTS = 50_000


class LpStatus(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    value: float
    witness: np.ndarray | None = None
    # multipliers y >= 0 with y @ A == objective and y @ b == value
    dual: np.ndarray | None = None

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class UnboundedRegionError(ValueError):
    pass


def _pivot(T: np.ndarray, r: int, j: int) -> None:
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run_bland(T: np.ndarray, basis: list[int], ncols: int) -> str:
    """Iterate the primal simplex on tableau ``T`` restricted to the first ``ncols`` columns."""
    m = len(basis)
    for _ in range(_MAX_PIVOTS):
        reduced = T[m, :ncols]
        entering = np.flatnonzero(reduced < -_PIVOT_TOL)
        if entering.size == 0:
            return "optimal"
        j = int(entering[0])
        col = T[:m, j]
        pos = np.flatnonzero(col > _PIVOT_TOL)
        if pos.size == 0:
            return "unbounded"
        ratios = T[pos, -1] / col[pos]
        best = ratios.min()
        ties = pos[ratios <= best + 1e-12 * max(1.0, abs(best))]
        r = int(min(ties, key=lambda t: basis[t]))
        _pivot(T, r, j)
        basis[r] = j
    raise RuntimeError("simplex pivot limit exceeded")


def simplex_max(A: np.ndarray, b: np.ndarray, c: np.ndarray) -> LpResult:
    """Maximize ``c @ x`` subject to ``A @ x <= b`` with ``x`` free."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if m == 0:
        if np.any(c != 0):
            return LpResult(LpStatus.UNBOUNDED, np.inf)
        return LpResult(LpStatus.OPTIMAL, 0.0, np.zeros(n), np.zeros(0))

    b = np.where(np.abs(b) < 1e-14, 0.0, b)
    sign = np.where(b < 0, -1.0, 1.0)
    art_rows = np.flatnonzero(b < 0)
    n_art = art_rows.size
    n_struct = 2 * n + m  # u, w (x = u - w), slacks
    T = np.zeros((m + 1, n_struct + n_art + 1))
    SA = A * sign[:, None]
    T[:m, :n] = SA
    T[:m, n:2 * n] = -SA
    T[:m, 2 * n:n_struct][np.arange(m), np.arange(m)] = sign
    T[:m, -1] = b * sign
    basis = [2 * n + i for i in range(m)]
    for k, r in enumerate(art_rows):
        T[r, n_struct + k] = 1.0
        basis[r] = n_struct + k

    if n_art:
        T[m, :] = -T[art_rows].sum(axis=0)
        T[m, n_struct:n_struct + n_art] = 0.0
        _run_bland(T, basis, n_struct + n_art)
        if T[m, -1] < -FEAS_TOL * max(1.0, np.abs(b).max()):
            return LpResult(LpStatus.INFEASIBLE, np.nan)
        # pivot lingering zero-level artificials out; rows that cannot pivot are dependent
        keep = []
        for r in range(m):
            if basis[r] >= n_struct:
                cand = np.flatnonzero(np.abs(T[r, :n_struct]) > 1e-9)
                if cand.size == 0:
                    continue
                _pivot(T, r, int(cand[0]))
                basis[r] = int(cand[0])
            keep.append(r)
        T = np.vstack([T[keep], T[m:m + 1]])
        T = np.delete(T, np.s_[n_struct:n_struct + n_art], axis=1)
        basis = [basis[r] for r in keep]
        m = len(basis)

    cost = np.concatenate([c, -c, np.zeros(T.shape[1] - 1 - 2 * n)])
    cb = cost[basis]
    T[m, :-1] = cb @ T[:m, :-1] - cost
    T[m, -1] = cb @ T[:m, -1]
    if _run_bland(T, basis, T.shape[1] - 1) == "unbounded":
        return LpResult(LpStatus.UNBOUNDED, np.inf)

    z = np.zeros(T.shape[1] - 1)
    z[basis] = T[:m, -1]
    x = z[:n] - z[n:2 * n]
    y = T[m, 2 * n:2 * n + A.shape[0]].copy()
    return LpResult(LpStatus.OPTIMAL, float(T[m, -1]), x, y)


def lp_max(sys: InequalitySystem, objective: Sequence[float]) -> LpResult:
    objective = np.asarray(objective, dtype=float)
    if objective.shape != (sys.dim,):
        raise ValueError(f"objective has length {objective.size}, system has {sys.dim} variables")
    return simplex_max(sys.A, sys.b, objective)


def contains_point(sys: InequalitySystem, x: Sequence[float], tol: float = FEAS_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (sys.dim,):
        raise ValueError(f"point has dimension {x.size}, system has {sys.dim}")
    if len(sys) == 0:
        return True
    return bool(np.all(sys.A @ x <= sys.b + tol))


def _check_same_vars(a: InequalitySystem, b: InequalitySystem) -> None:
    if a.vars != b.vars:
        raise ValueError(f"variable lists differ: {a.vars} vs {b.vars}")


def region_includes(outer: InequalitySystem, inner: InequalitySystem, tol: float = INCLUSION_TOL) -> bool:
    """True iff every point of ``inner`` satisfies every row of ``outer``."""
    _check_same_vars(outer, inner)
    tight = inner.tightest()
    for row in outer.rows:
        # a row of inner with the same normal and no larger offset settles it without an LP
        if row.coeffs in tight and tight[row.coeffs] <= row.rhs + tol:
            continue
        res = lp_max(inner, row.coeffs)
        if res.status is LpStatus.INFEASIBLE:
            return True
        if res.status is LpStatus.UNBOUNDED or res.value > row.rhs + tol:
            return False
    return True


def regions_equal(a: InequalitySystem, b: InequalitySystem, tol: float = INCLUSION_TOL) -> bool:
    return region_includes(a, b, tol) and region_includes(b, a, tol)


def certified_gap(inner: InequalitySystem, outer: InequalitySystem, k: int | None = None) -> float:
    """Smallest per-user shift ``b`` for which the shifted outer region fits in ``inner``.

    For every inner row with positive coefficient sum, the LP maximum of its
    normal over ``outer`` exceeds the row offset by at most ``b`` times the
    coefficient sum.
    """
    _check_same_vars(inner, outer)
    if k is not None and k != inner.dim:
        raise ValueError(f"k={k} but systems have {inner.dim} variables")
    gap = 0.0
    for row in inner.rows:
        weight = sum(row.coeffs)
        if weight <= 0:
            continue
        res = lp_max(outer, row.coeffs)
        if res.status is LpStatus.UNBOUNDED:
            raise UnboundedRegionError(f"outer region unbounded along {row.coeffs}")
        if res.status is LpStatus.INFEASIBLE:
            return 0.0
        gap = max(gap, (res.value - row.rhs) / weight)
    return gap


def symmetric_max(sys: InequalitySystem, k: int | None = None) -> float:
    """Largest ``t`` such that the equal-rate point ``(t, ..., t)`` satisfies every row."""
    if k is not None and k != sys.dim:
        raise ValueError(f"k={k} but system has {sys.dim} variables")
    best = np.inf
    for row in sys.rows:
        weight = sum(row.coeffs)
        if weight > 0:
            best = min(best, row.rhs / weight)
    return float(best)


@dataclass(frozen=True)
class Polygon:
    vertices: list[tuple[float, float]]
    feasible: bool


def _clip(poly: list[tuple[float, float]], a: float, b: float, c: float) -> list[tuple[float, float]]:
    """Clip a convex polygon against ``a x + b y <= c``."""
    out = []
    if not poly:
        return out
    tol = 1e-12 * max(1.0, abs(c))
    prev = poly[-1]
    prev_val = a * prev[0] + b * prev[1] - c
    for cur in poly:
        cur_val = a * cur[0] + b * cur[1] - c
        if cur_val <= tol:
            if prev_val > tol:
                t = prev_val / (prev_val - cur_val)
                out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
            out.append(cur)
        elif prev_val <= tol:
            t = prev_val / (prev_val - cur_val)
            out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
        prev, prev_val = cur, cur_val
    return out


def _tidy(poly: list[tuple[float, float]], tol: float = 1e-9) -> list[tuple[float, float]]:
    pts = []
    for p in poly:
        if not pts or abs(p[0] - pts[-1][0]) > tol or abs(p[1] - pts[-1][1]) > tol:
            pts.append(p)
    while len(pts) > 1 and abs(pts[0][0] - pts[-1][0]) <= tol and abs(pts[0][1] - pts[-1][1]) <= tol:
        pts.pop()
    # drop collinear middle points
    changed = True
    while changed and len(pts) > 2:
        changed = False
        for idx in range(len(pts)):
            p0, p1, p2 = pts[idx - 1], pts[idx], pts[(idx + 1) % len(pts)]
            cross = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p1[1] - p0[1]) * (p2[0] - p0[0])
            if abs(cross) <= tol:
                del pts[idx]
                changed = True
                break
    return pts


def slice_2d(sys: InequalitySystem, i: int, j: int, fixed: Sequence[float] = ()) -> Polygon:
    """Counterclockwise cross-section in the ``(x_i, x_j)`` plane (0-based indices).

    ``fixed`` gives the values of the remaining coordinates in index order.
    Unbounded sections are truncated to a box of half-width 1e6.
    """
    n = sys.dim
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"bad slice axes ({i}, {j}) for {n} variables")
    others = [t for t in range(n) if t not in (i, j)]
    if len(fixed) != len(others):
        raise ValueError(f"expected {len(others)} fixed values, got {len(fixed)}")
    A, b = sys.A, sys.b
    rhs = b - (A[:, others] @ np.asarray(fixed, dtype=float) if others else 0.0)
    A2 = A[:, [i, j]]
    flat = np.all(A2 == 0, axis=1)
    if np.any(rhs[flat] < -FEAS_TOL):
        return Polygon([], False)
    A2, rhs = A2[~flat], rhs[~flat]

    bounds = []
    for direction in ((1, 0), (0, 1), (-1, 0), (0, -1)):
        res = simplex_max(A2, rhs, np.array(direction, dtype=float))
        if res.status is LpStatus.INFEASIBLE:
            return Polygon([], False)
        bounds.append(res.value if res.optimal else 1e6)
    xmax, ymax, xmin, ymin = bounds[0], bounds[1], -bounds[2], -bounds[3]
    pad = 1e-6 * max(1.0, abs(xmax), abs(ymax), abs(xmin), abs(ymin))
    poly = [(xmin - pad, ymin - pad), (xmax + pad, ymin - pad), (xmax + pad, ymax + pad), (xmin - pad, ymax + pad)]
    for (a, bb), c in zip(A2, rhs):
        poly = _clip(poly, float(a), float(bb), float(c))
        if not poly:
            return Polygon([], False)
    scale = max(1.0, max(abs(v) for p in poly for v in p))
    polished = [_polish(p, A2, rhs, scale) for p in poly]
    snapped = [tuple(0.0 if abs(v) <= 1e-12 * scale else v for v in p) for p in polished]
    return Polygon(_tidy(snapped), True)


def _polish(p: tuple[float, float], A2: np.ndarray, rhs: np.ndarray, scale: float) -> tuple[float, float]:
    """Recompute a clipped vertex as the exact crossing of its two tightest lines."""
    slack = rhs - A2 @ np.asarray(p)
    order = np.argsort(np.abs(slack))
    first = order[0] if order.size else None
    if first is None or abs(slack[first]) > 1e-7 * scale:
        return p
    for second in order[1:]:
        if abs(slack[second]) > 1e-7 * scale:
            break
        M = A2[[first, second]]
        if abs(np.linalg.det(M)) > 1e-12:
            x = np.linalg.solve(M, rhs[[first, second]])
            return float(x[0]), float(x[1])
    return p
