"""Acceptance criteria, one test each, with a PASS/FAIL line in the run summary."""

import time

import numpy as np

from cyclic_ic.channel import (
    Regime,
    classify_regime,
    etw_closed_form,
    etw_split,
    hk_params,
    make_channel,
    outer_params,
    useful_inequalities,
)
from cyclic_ic.fourier_motzkin import eliminate_variable, polymatroid_system, project_to_rates, remove_redundant
from cyclic_ic.gdof import dsym_formula, gdof_sweep
from cyclic_ic.polyhedra import certified_gap, contains_point, lp_max, regions_equal
from cyclic_ic.regions import (
    achievable_region,
    family_census,
    family_gaps,
    mac_intersection,
    marginalize_split,
    outer_region,
    strong_region,
    ts_region_3,
)
from cyclic_ic.sampling import (
    make_rng,
    random_strong_channel,
    random_very_strong_channel,
    random_weak_channel,
    sample_region_points,
)


def test_two_user_reduction(criterion):
    # Raw elimination must reproduce every closed-form row verbatim, and the
    # pruned projection must equal the irredundant closed form row for row
    # (the facet description of a full-dimensional polytope is unique).
    rng = make_rng(1)
    channels = [make_channel(2, [15, 15], [3, 3])] + [random_weak_channel(rng, 2) for _ in range(50)]
    worst, exact, missing = 0.0, True, 0
    start = time.perf_counter()
    for ch in channels:
        hk = hk_params(ch, etw_split(ch))
        closed = achievable_region(hk, 2)
        raw = eliminate_variable(eliminate_variable(polymatroid_system(hk, 2), "T1"), "T2")
        for row in closed.rows:
            missing += not any(r.coeffs == row.coeffs and abs(r.rhs - row.rhs) <= 1e-9 for r in raw.rows)
        fm = project_to_rates(hk, 2).tightest()
        facets = remove_redundant(closed).tightest()
        exact &= set(fm) == set(facets)
        if exact:
            worst = max(worst, max(abs(fm[c] - facets[c]) for c in facets))
    elapsed = time.perf_counter() - start
    example = project_to_rates(hk_params(channels[0], etw_split(channels[0])), 2)
    five = len(example.families()) == 5
    ok = exact and missing == 0 and five and worst <= 1e-9 and elapsed < 1.0
    criterion("1 two-user reduction", ok,
              f"{len(channels)} instances, closed-form rows missing from raw elimination={missing}, "
              f"facets coefficient-exact={exact}, max rhs error {worst:.1e}, "
              f"example keeps all 5 families={five}, {elapsed:.2f}s")
    assert ok


def test_oracle_equality(criterion):
    start = time.perf_counter()
    failures = []
    for k in (3, 4, 5, 6):
        rng = make_rng(1000 + k)
        for trial in range(100):
            ch = random_weak_channel(rng, k)
            hk = hk_params(ch, etw_split(ch))
            if not regions_equal(project_to_rates(hk, k), achievable_region(hk, k), 1e-7):
                failures.append((k, trial))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    criterion("2 oracle equality", ok, f"400 instances K=3..6, failures={failures}, {elapsed:.1f}s")
    assert ok


def test_constraint_census(criterion):
    rng = make_rng(3)
    counts = {}
    for k in range(2, 9):
        ch = random_weak_channel(rng, k)
        counts[k] = (family_census(achievable_region(hk_params(ch, etw_split(ch)), k)),
                     family_census(outer_region(outer_params(ch), k)))
    ok = all(c == (k * k + 1, k * k + 1) for k, c in counts.items())
    criterion("3 constraint census", ok, f"(achievable, outer) families per K: {counts}")
    assert ok


def test_theorem3_gap(criterion):
    rng = make_rng(4)
    worst_b, bad_families = 0.0, 0
    for k in (2, 3, 4, 5, 6):
        for _ in range(200):
            ch = random_weak_channel(rng, k)
            hk, ob = hk_params(ch, etw_split(ch)), outer_params(ch)
            worst_b = max(worst_b, certified_gap(achievable_region(hk, k), outer_region(ob, k), k))
            bad_families += sum(not f.passed for f in family_gaps(hk, ob, k).families)
    ok = worst_b <= 2.0 and bad_families == 0
    criterion("4 two-bit gap", ok, f"1000 instances, worst certified b={worst_b:.4f}, family violations={bad_families}")
    assert ok


def test_theorem4_gap(criterion):
    rng = make_rng(5)
    worst_b, worst_delta = 0.0, {}
    bad = 0
    for _ in range(1000):
        ch = random_weak_channel(rng, 3)
        hk, ob = hk_params(ch, etw_split(ch)), outer_params(ch)
        worst_b = max(worst_b, certified_gap(ts_region_3(hk), outer_region(ob, 3), 3))
        for f in family_gaps(hk, ob, 3, time_sharing=True).families:
            bad += not f.passed
            worst_delta[f.family] = max(worst_delta.get(f.family, -np.inf), f.delta)
    ok = worst_b <= 1.5 and bad == 0
    deltas = ", ".join(f"{k}={v:.3f}" for k, v in worst_delta.items())
    criterion("5 one-and-a-half-bit gap", ok, f"1000 instances, worst b={worst_b:.4f}, worst deltas {deltas}")
    assert ok


def test_useful_inequalities_suite(criterion):
    rng = make_rng(6)
    failures, worst_eq = 0, 0.0
    for _ in range(1000):
        ch = random_weak_channel(rng, int(rng.integers(2, 7)))
        for c in useful_inequalities(ch, etw_closed_form(ch), outer_params(ch)):
            failures += not c.passed
            if c.name == "gamma-g":
                worst_eq = max(worst_eq, abs(c.value - 1.0))
    ok = failures == 0 and worst_eq <= 1e-12
    criterion("6 six per-user inequalities", ok,
              f"1000 weak instances, failures={failures}, max |gamma-g-1|={worst_eq:.1e}")
    assert ok


def test_strong_regime(criterion):
    rng = make_rng(7)
    mismatches = 0
    for _ in range(100):
        ch = random_strong_channel(rng, int(rng.integers(2, 7)))
        mismatches += not regions_equal(remove_redundant(mac_intersection(ch)), strong_region(ch))
    box_failures = 0
    for _ in range(100):
        ch = random_very_strong_channel(rng, int(rng.integers(2, 7)))
        assert classify_regime(ch) is Regime.VERY_STRONG
        region = strong_region(ch)
        kept = {r.coeffs for r in remove_redundant(region).rows if r.family != "nonneg"}
        units = {tuple(int(t == i) for t in range(ch.k)) for i in range(ch.k)}
        # each pairwise row is implied by the box: its LP max over the remaining rows stays below its rhs
        for row in region.rows:
            if row.family == "mac":
                rest = region.with_rows(r for r in region.rows if r is not row)
                box_failures += lp_max(rest, row.coeffs).value > row.rhs + 1e-9
        box_failures += kept != units
    ok = mismatches == 0 and box_failures == 0
    criterion("7 strong regime", ok,
              f"100 strong: MAC mismatches={mismatches}; 100 very strong: non-box results={box_failures}")
    assert ok


def test_gdof(criterion):
    snr = 1e8
    grid = np.round(np.arange(0, 2.0001, 0.1), 10)
    worst_excess = -np.inf
    curves = {}
    for k in (2, 3, 5):
        curves[k] = gdof_sweep(k, grid, snr)
        for p in curves[k]:
            tol = 0.1 if 0.9 <= p.alpha <= 1.1 else 0.05
            err = max(abs(p.dsym_lower - dsym_formula(p.alpha)), abs(p.dsym_upper - dsym_formula(p.alpha)))
            worst_excess = max(worst_excess, err - tol)
    spread = max(max(abs(a.dsym_lower - b.dsym_lower), abs(a.dsym_upper - b.dsym_upper))
                 for a, b in zip(curves[2], curves[5]))
    ok = worst_excess <= 0 and spread <= 0.08
    criterion("8 GDoF curve", ok,
              f"worst (error - tolerance)={worst_excess:.4f}, K=2 vs K=5 max difference={spread:.2e}")
    assert ok


def test_time_sharing_union(criterion):
    rng = make_rng(9)
    misses, covered_by_marginal = 0, 0
    for _ in range(200):
        ch = random_weak_channel(rng, 3)
        split = etw_split(ch)
        regions = [achievable_region(hk_params(ch, split), 3)]
        for i in (1, 2, 3):
            regions.append(achievable_region(hk_params(ch, marginalize_split(ch, split, i)), 3))
        for x in sample_region_points(ts_region_3(hk_params(ch, split)), rng, 100):
            hits = [contains_point(r, x, 1e-7) for r in regions]
            misses += not any(hits)
            covered_by_marginal += not hits[0] and any(hits)
    ok = misses == 0
    criterion("9 time-sharing union", ok,
              f"20000 points, uncovered={misses}, covered only by a marginalized region={covered_by_marginal}")
    assert ok
