"""Rebuild the HK region by projecting out common-message rates.

The starting point is, per receiver, the polymatroid on the private rate
``S_i`` and common rates ``T_i, T_{i+1}``.  Substituting ``S_i = R_i - T_i``
and eliminating ``T_1 ... T_K`` one at a time leaves a system in the
rates alone, which is then compared against the closed form.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

import numpy as np

from .channel import HkParams
from .polyhedra import FEAS_TOL, LpStatus, simplex_max
from .system import InequalitySystem, Row, make_row

# coefficient magnitudes in this family never exceed 2; anything past this is a bug
COEFF_TRIPWIRE = 4


class EliminationError(ValueError):
    pass


def polymatroid_system(hk: HkParams, k: int) -> InequalitySystem:
    """The ``7k`` rows over ``R_1..R_k, T_1..T_k`` after substituting out private rates."""
    if hk.k != k or k < 2:
        raise EliminationError(f"parameters have {hk.k} users, expected k={k} >= 2")
    names = tuple(f"R{i + 1}" for i in range(k)) + tuple(f"T{i + 1}" for i in range(k))
    rows = []

    def add(terms: dict[int, int], rhs: float, user: int):
        c = [0] * (2 * k)
        for idx, val in terms.items():
            c[idx] += val
        rows.append(make_row(c, rhs, "polymatroid", {"i": user + 1}, history=[len(rows)]))

    for i in range(k):
        R, T, Tn = i, k + i, k + (i + 1) % k
        add({R: 1, T: -1}, hk.a[i], i)
        add({R: 1}, hk.d[i], i)
        add({R: 1, T: -1, Tn: 1}, hk.e[i], i)
        add({R: 1, Tn: 1}, hk.g[i], i)
        add({R: -1, T: 1}, 0.0, i)
        add({T: -1}, 0.0, i)
        add({R: -1}, 0.0, i)
    return InequalitySystem(names, tuple(rows))


def _normalize(coeffs: list[int], rhs: float) -> tuple[tuple[int, ...], float]:
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
    if g > 1:
        return tuple(c // g for c in coeffs), rhs / g
    return tuple(coeffs), rhs


def _sort_key(row: Row):
    return (tuple(-c for c in row.coeffs), row.rhs, sorted(row.history))


def eliminate_variable(sys: InequalitySystem, var: str) -> InequalitySystem:
    """One Fourier-Motzkin step: project ``var`` out of ``sys``."""
    if var not in sys.vars:
        raise EliminationError(f"variable {var!r} not in {sys.vars}")
    col = sys.vars.index(var)
    keep_cols = [t for t in range(sys.dim) if t != col]
    names = tuple(sys.vars[t] for t in keep_cols)

    zero, pos, neg = [], [], []
    for row in sys.rows:
        c = row.coeffs[col]
        (zero if c == 0 else pos if c > 0 else neg).append(row)

    out: list[Row] = []
    seen: set = set()

    def emit(coeffs, rhs, history, family="polymatroid", params=()):
        coeffs, rhs = _normalize(list(coeffs), rhs)
        if all(c == 0 for c in coeffs) and rhs >= 0:
            return
        if max(abs(c) for c in coeffs) > COEFF_TRIPWIRE:
            raise EliminationError(f"coefficient blow-up {coeffs}")
        key = (coeffs, rhs)
        if key in seen:
            return
        seen.add(key)
        out.append(Row(coeffs, float(rhs), family, tuple(params), frozenset(history)))

    for row in zero:
        emit((row.coeffs[t] for t in keep_cols), row.rhs, row.history, row.family, row.params)
    for p in pos:
        cp = p.coeffs[col]
        for q in neg:
            cq = -q.coeffs[col]
            g = gcd(cp, cq)
            sp, sq = cq // g, cp // g
            combined = [sp * p.coeffs[t] + sq * q.coeffs[t] for t in keep_cols]
            emit(combined, sp * p.rhs + sq * q.rhs, p.history | q.history)

    out.sort(key=_sort_key)
    return InequalitySystem(names, tuple(out))


def remove_redundant(sys: InequalitySystem, tol: float = FEAS_TOL) -> InequalitySystem:
    """Drop rows implied by the others; the remaining rows define the same set.

    Parallel rows collapse to the tightest one first, then each row is tested
    by maximizing its normal over the rows still kept.  A row whose LP is
    unbounded or infeasible is kept.  A single sequential pass already
    reaches the fixed point: a row that is needed against a superset of the
    final rows stays needed against the final rows.
    """
    rows = []
    for row in sys.rows:
        if all(c == 0 for c in row.coeffs) and row.rhs >= -tol:
            continue
        rows.append(row)
    best: dict[tuple[int, ...], Row] = {}
    for row in rows:
        if row.coeffs not in best or row.rhs < best[row.coeffs].rhs:
            best[row.coeffs] = row
    rows = [row for row in rows if best[row.coeffs] is row]

    A = np.array([r.coeffs for r in rows], dtype=float).reshape(len(rows), sys.dim)
    b = np.array([r.rhs for r in rows], dtype=float)
    alive = np.ones(len(rows), dtype=bool)
    for idx in range(len(rows)):
        alive[idx] = False
        res = simplex_max(A[alive], b[alive], A[idx])
        if not (res.status is LpStatus.OPTIMAL and res.value <= b[idx] + tol):
            alive[idx] = True
    return sys.with_rows(row for row, ok in zip(rows, alive) if ok)


def _family_of(coeffs: Sequence[int], k: int) -> tuple[str, dict[str, int]]:
    """Tag a rate-only row with the family its coefficient pattern belongs to."""
    c = list(coeffs)
    support = [t for t in range(k) if c[t] != 0]
    if len(support) == 1 and c[support[0]] == -1:
        return "nonneg", {"i": support[0] + 1}
    if any(v < 0 for v in c):
        return "polymatroid", {}
    if sum(c) == 1:
        return "individual", {"i": support[0] + 1}
    if all(v == 1 for v in c):
        return "full_sum", {}
    if sorted(c) == [1] * (k - 1) + [2]:
        return "sum_plus_one", {"i": c.index(2) + 1}
    if all(v in (0, 1) for v in c):
        # a cyclic window: its start is the unique user whose predecessor is absent
        starts = [t for t in support if c[(t - 1) % k] == 0]
        if len(starts) == 1:
            return "adjacent_sum", {"m": starts[0] + 1, "l": len(support)}
    return "polymatroid", {}


def tag_families(sys: InequalitySystem) -> InequalitySystem:
    k = sys.dim
    rows = []
    for row in sys.rows:
        family, params = _family_of(row.coeffs, k)
        rows.append(Row(row.coeffs, row.rhs, family, tuple(params.items()), row.history))
    return sys.with_rows(rows)


def project_to_rates(
    hk: HkParams,
    k: int,
    order: Sequence[int] | None = None,
    prune_history: bool = True,
) -> InequalitySystem:
    """Eliminate every common rate and return the region over ``R_1..R_k``.

    ``order`` is a permutation of 1-based user indices giving the elimination
    order of the T variables (default ``1..k``).  With ``prune_history``,
    rows built from more than ``s + 1`` original rows after ``s``
    eliminations are discarded before the LP redundancy pass; such rows are
    always implied by the others (Chernikov's rule).
    """
    sys = polymatroid_system(hk, k)
    order = list(order) if order is not None else list(range(1, k + 1))
    if sorted(order) != list(range(1, k + 1)):
        raise EliminationError(f"elimination order {order} is not a permutation of 1..{k}")
    for step, user in enumerate(order, start=1):
        sys = eliminate_variable(sys, f"T{user}")
        if prune_history:
            sys = sys.with_rows(r for r in sys.rows if len(r.history) <= step + 1)
        sys = remove_redundant(sys)
    return tag_families(sys)
