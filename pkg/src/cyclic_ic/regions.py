"""Rate regions of the cyclic channel as explicit inequality systems.

Every ``min{...}`` bound is expanded into one row per branch; rows carry a
family tag plus 1-based ``i``/``m``/``l`` parameters so that the achievable
and outer systems can be matched family by family.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import (
    ChannelInstance,
    HkParams,
    OuterParams,
    PowerSplit,
    Regime,
    check_split,
    classify_regime,
)
from .system import InequalitySystem, Row, make_row, rate_vars


class RegimeError(ValueError):
    pass


class StructureError(ValueError):
    pass


def _window(k: int, start: int, length: int) -> list[int]:
    return [(start + t) % k for t in range(length)]


def _coeffs(k: int, users, extra: int | None = None) -> tuple[int, ...]:
    c = [0] * k
    for u in users:
        c[u] += 1
    if extra is not None:
        c[extra] += 1
    return tuple(c)


def _nonneg_rows(k: int) -> list[Row]:
    rows = []
    for i in range(k):
        c = [0] * k
        c[i] = -1
        rows.append(make_row(c, 0.0, "nonneg", {"i": i + 1}))
    return rows


def _check_len(k: int, *arrays) -> None:
    if k < 2:
        raise StructureError(f"need k >= 2, got {k}")
    for arr in arrays:
        if len(arr) != k:
            raise StructureError(f"parameter length {len(arr)} does not match k={k}")


def _build(k: int, individual, adjacent, full, sum_plus_one) -> InequalitySystem:
    """Assemble the four families given callables returning branch right-hand sides."""
    rows = []
    for i in range(k):
        for branch, rhs in enumerate(individual(i), start=1):
            rows.append(make_row(_coeffs(k, [i]), rhs, "individual", {"i": i + 1, "branch": branch}))
    for m in range(k):
        for length in range(2, k):
            users = _window(k, m, length)
            for branch, rhs in enumerate(adjacent(m, length), start=1):
                rows.append(make_row(_coeffs(k, users), rhs, "adjacent_sum",
                                     {"m": m + 1, "l": length, "branch": branch}))
    for branch, rhs in enumerate(full(), start=1):
        rows.append(make_row(_coeffs(k, range(k)), rhs, "full_sum", {"branch": branch}))
    for i in range(k):
        rows.append(make_row(_coeffs(k, range(k), extra=i), sum_plus_one(i), "sum_plus_one", {"i": i + 1}))
    rows.extend(_nonneg_rows(k))
    return InequalitySystem(rate_vars(k), tuple(rows)).without_duplicates()


def achievable_region(hk: HkParams, k: int) -> InequalitySystem:
    """Han-Kobayashi region for a fixed input distribution."""
    _check_len(k, hk.a)
    a, d, e, g, r = hk.a, hk.d, hk.e, hk.g, hk.r
    E = float(np.sum(e))

    def individual(i):
        return [d[i], a[i] + e[(i - 1) % k]]

    def adjacent(m, length):
        last = (m + length - 1) % k
        inner = sum(float(e[j]) for j in _window(k, m + 1, length - 2))
        shifted = sum(float(e[j]) for j in _window(k, m - 1, length))
        return [g[m] + inner + a[last], shifted + a[last]]

    def full():
        return [E] + [r[i] for i in range(k)]

    def sum_plus_one(i):
        return a[i] + g[i] + sum(float(e[j]) for j in range(k) if j != i)

    return _build(k, individual, adjacent, full, sum_plus_one)


def outer_region(ob: OuterParams, k: int) -> InequalitySystem:
    """Weak-regime capacity outer bound, family-aligned with :func:`achievable_region`."""
    _check_len(k, ob.alpha)
    alpha, beta, gamma, lam, mu, rho = ob.alpha, ob.beta, ob.gamma, ob.lam, ob.mu, ob.rho

    def individual(i):
        return [lam[i]]

    def adjacent(m, length):
        last = (m + length - 1) % k
        inner = sum(float(alpha[j]) for j in _window(k, m + 1, length - 2))
        from_m = sum(float(alpha[j]) for j in _window(k, m, length - 1))
        return [gamma[m] + inner + beta[last], mu[m] + from_m + beta[last]]

    def full():
        return [float(np.sum(alpha))] + [rho[i] for i in range(k)]

    def sum_plus_one(i):
        return beta[i] + gamma[i] + sum(float(alpha[j]) for j in range(k) if j != i)

    return _build(k, individual, adjacent, full, sum_plus_one)


def ts_region_3(hk: HkParams) -> InequalitySystem:
    """Three-user region reached by time-sharing ETW with its marginalizations.

    Identical to the K=3 HK region except that the ``a_i + e_{i-1}`` cap on
    individual rates is gone.
    """
    if hk.k != 3:
        raise StructureError(f"time-sharing region is defined for k=3 only, got k={hk.k}")
    full = achievable_region(hk, 3)
    rows = [row for row in full.rows if not (row.family == "individual" and row.param_dict["branch"] == 2)]
    return full.with_rows(rows)


def marginalize_split(ch: ChannelInstance, split: PowerSplit, i: int) -> PowerSplit:
    """Drop user ``i``'s common message (1-based): all of its power becomes private."""
    check_split(ch, split)
    if not 1 <= i <= ch.k:
        raise IndexError(f"user index {i} outside 1..{ch.k}")
    p = split.inr_private.copy()
    p[i - 1] = ch.inr[i - 1]
    p.setflags(write=False)
    return PowerSplit(p)


def strong_region(ch: ChannelInstance) -> InequalitySystem:
    """Capacity region in the strong regime: single-user caps plus per-receiver sum caps."""
    regime = classify_regime(ch)
    if regime not in (Regime.STRONG, Regime.VERY_STRONG):
        raise RegimeError(f"strong-regime capacity needs INR_i >= SNR_i for all i; regime is {regime.value}")
    k = ch.k
    snr, inr = ch.snr, ch.inr
    rows = [make_row(_coeffs(k, [i]), np.log2(1 + snr[i]), "box", {"i": i + 1}) for i in range(k)]
    for i in range(k):
        nxt = (i + 1) % k
        rows.append(make_row(_coeffs(k, [i, nxt]), np.log2(1 + snr[i] + inr[nxt]), "mac", {"i": i + 1}))
    rows.extend(_nonneg_rows(k))
    return InequalitySystem(rate_vars(k), tuple(rows)).without_duplicates()


def mac_intersection(ch: ChannelInstance) -> InequalitySystem:
    """Intersection of the K two-user MAC regions seen at each receiver."""
    k = ch.k
    snr, inr = ch.snr, ch.inr
    rows = []
    for i in range(k):
        nxt = (i + 1) % k
        rows.append(make_row(_coeffs(k, [i]), np.log2(1 + snr[i]), "mac", {"i": i + 1, "branch": 1}))
        rows.append(make_row(_coeffs(k, [nxt]), np.log2(1 + inr[nxt]), "mac", {"i": i + 1, "branch": 2}))
        rows.append(make_row(_coeffs(k, [i, nxt]), np.log2(1 + snr[i] + inr[nxt]), "mac", {"i": i + 1, "branch": 3}))
    rows.extend(_nonneg_rows(k))
    return InequalitySystem(rate_vars(k), tuple(rows))


@dataclass(frozen=True)
class FamilyGap:
    family: str
    params: dict[str, int]
    l: int
    delta: float
    bound: float
    proof_bound: float
    passed: bool


@dataclass(frozen=True)
class GapReport:
    families: list[FamilyGap]
    regime: Regime | None = None
    certified_b: float | None = None
    pipeline: str = "hk"

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.families)


def _rate_terms(coeffs) -> int:
    return int(sum(coeffs))


def _family_key(row: Row) -> tuple[str, tuple[tuple[str, int], ...]]:
    params = tuple((key, val) for key, val in row.params if key != "branch")
    return row.family, params


def _bounds(family: str, length: int, k: int, time_sharing: bool) -> tuple[float, float]:
    """(stated bound, bound the proof actually establishes) for one family."""
    if time_sharing:
        return {"individual": (1.0, 1.0), "adjacent_sum": (3.0, 3.0),
                "full_sum": (3.0, 3.0), "sum_plus_one": (4.0, 4.0)}[family]
    if family == "individual":
        return 2.0, 2.0
    if family == "adjacent_sum":
        return 2.0 * length, length + 1.0
    if family == "full_sum":
        return 2.0 * k, float(k)
    return 2.0 * (k + 1), k + 1.0


def match_families(inner: InequalitySystem, outer: InequalitySystem, k: int,
                   time_sharing: bool = False) -> list[FamilyGap]:
    """Per-family difference between the tightest outer and tightest inner row."""
    def group(sys):
        out: dict = {}
        for row in sys.rows:
            if row.family == "nonneg":
                continue
            key = _family_key(row)
            entry = out.setdefault(key, [row.coeffs, np.inf])
            if entry[0] != row.coeffs:
                raise StructureError(f"family {key} mixes coefficient vectors")
            entry[1] = min(entry[1], row.rhs)
        return out

    gi, go = group(inner), group(outer)
    if gi.keys() != go.keys():
        raise StructureError("achievable and outer systems have different family structure")
    report = []
    for key, (coeffs, inner_min) in gi.items():
        outer_coeffs, outer_min = go[key]
        if outer_coeffs != coeffs:
            raise StructureError(f"family {key} has different coefficients in the two systems")
        family, params = key
        length = _rate_terms(coeffs)
        bound, proof_bound = _bounds(family, length, k, time_sharing)
        delta = float(outer_min - inner_min)
        report.append(FamilyGap(family, dict(params), length, delta, bound, proof_bound, delta <= bound + 1e-12))
    return report


def family_gaps(hk: HkParams, ob: OuterParams, k: int, time_sharing: bool = False) -> GapReport:
    """Matched-family deltas between the HK (or K=3 time-sharing) region and the outer bound."""
    if hk.k != k or ob.k != k:
        raise StructureError(f"parameters have {hk.k}/{ob.k} users, expected {k}")
    inner = ts_region_3(hk) if time_sharing else achievable_region(hk, k)
    outer = outer_region(ob, k)
    return GapReport(match_families(inner, outer, k, time_sharing),
                     pipeline="ts3" if time_sharing else "hk")


def family_census(sys: InequalitySystem) -> int:
    """Number of distinct coefficient vectors, nonnegativity rows excluded."""
    return len(sys.families())
