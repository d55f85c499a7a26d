"""Acceptance suite: one test (and one pass/fail line) per criterion.

Each test prints "ACCEPTANCE <n> PASS|FAIL: <summary>" before asserting, so
the log carries an explicit verdict line even under pytest's capture.

Criterion 3 (the blanket strong-condition sweep over k < max(d/3,
d/2 - 2.6 log d)) is known to fail at exactly (13, 4), (16, 5), (19, 6):
the claimed region slightly overshoots the true threshold for small odd-ish
d, where the margin is solidly positive (about +0.18 at (13, 4)).  The test
states the claim faithfully and is expected red; see the criterion-10-style
soft checks for the behavior that actually holds.
"""

import math
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, str(__import__("pathlib").Path(__file__).parent))
from _cubic import all_cubic_graphs

from stardecomp.conditions import (
    C0,
    bound_case1,
    check_x_bounds,
    find_x_bounds,
    gamma_beta,
    k_sc,
    scan_quarter_case,
    star_params,
    strong_condition,
    weak_certificate,
)
from stardecomp.decompose import (
    StarDecomposition,
    StarProfile,
    brute_force_condition,
    decompose,
)
from stardecomp.experiments import run_decomposition_trials
from stardecomp.graph import edges_within, enumerate_pairings
from stardecomp.numerics import (
    DomainError,
    F_main_term_bound,
    F_upper_estimate,
    InfeasibleError,
    SubgraphCount,
    Z_upper,
    entropy_H,
    exact_P_Mr,
    rate_F,
    rate_F_dt,
)


def _verdict(n: int, ok: bool, summary: str) -> None:
    print(f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {summary}")


# ---------------------------------------------------------------------- 1

THRESHOLD_TABLE = dict(
    zip(
        list(range(13, 30))
        + [30, 40, 50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150, 160, 500],
        [3, 4, 4, 4, 5, 5, 5, 6, 6, 7, 7, 7, 8, 8, 9, 9, 10]
        + [10, 14, 19, 24, 28, 33, 38, 42, 47, 52, 57, 62, 67, 71, 239],
    )
)


def test_criterion_01_threshold_tables():
    start = time.monotonic()
    mismatches = [
        (d, k_sc(d).k_sc, want)
        for d, want in THRESHOLD_TABLE.items()
        if k_sc(d).k_sc != want
    ]
    elapsed = time.monotonic() - start
    ok = not mismatches and elapsed < 60
    _verdict(1, ok, f"32 threshold values, {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert mismatches == []
    assert elapsed < 60


# ---------------------------------------------------------------------- 2


def test_criterion_02_named_constants():
    g5, g1, c0 = gamma_beta(0.5), gamma_beta(0.1), C0()
    ident = c0 * (0.5 - math.log(2)) + 1
    ok = (
        abs(g5 - (-0.040852)) < 1e-5
        and abs(g1 - (-0.005378)) < 1e-5
        and abs(c0 - 5.1774) < 1e-4
        and abs(ident) < 1e-12
    )
    _verdict(2, ok, f"gamma(0.5)={g5:.6f} gamma(0.1)={g1:.6f} C0={c0:.5f}")
    assert abs(g5 - (-0.040852)) < 1e-5
    assert abs(g1 - (-0.005378)) < 1e-5
    assert abs(c0 - 5.1774) < 1e-4
    assert abs(ident) < 1e-12


# ---------------------------------------------------------------------- 3


def test_criterion_03_strong_condition_sweep():
    """Known red: the claimed k-region overshoots at (13,4), (16,5), (19,6)."""
    start = time.monotonic()
    failures = []
    for d in range(13, 201):
        bound = max(d / 3.0, d / 2.0 - 2.6 * math.log(d))
        for k in range(2, math.ceil(bound)):
            if k >= bound:
                break
            p = star_params(d, k)
            if p.r == 0:
                continue  # 2k | d: trivially decomposable
            res = strong_condition(p)
            if not res.holds:
                failures.append((d, k, res.margin))
    elapsed = time.monotonic() - start
    ok = not failures and elapsed < 300
    _verdict(
        3,
        ok,
        f"sweep 13<=d<=200, {len(failures)} failing pairs "
        f"{[(d, k) for d, k, _ in failures]}, {elapsed:.1f}s",
    )
    assert elapsed < 300
    assert failures == [], (
        "strong condition fails inside the claimed region at: "
        + ", ".join(f"(d={d}, k={k}, margin={m:+.4f})" for d, k, m in failures)
    )


# ---------------------------------------------------------------------- 4


def test_criterion_04_quarter_case_scan():
    max_value, verdict = scan_quarter_case(grid=10_000)
    ok = verdict and max_value < -1.0 / 9.0
    _verdict(4, ok, f"max over beta grid = {max_value:.6f} < -1/9")
    assert verdict


# ---------------------------------------------------------------------- 5


def test_criterion_05_weak_certificate_sweep():
    start = time.monotonic()
    false_verdicts = []
    n_pairs = 0
    for d in range(13, 121):
        lo = k_sc(d).k_sc
        for k in range(lo + 1, d // 2):
            if not k < d / 2 - 1:
                continue
            n_pairs += 1
            cert = weak_certificate(star_params(d, k))
            if not cert.verdict:
                false_verdicts.append((d, k, cert.max_bound))
    r2 = weak_certificate(star_params(98, 48))
    elapsed = time.monotonic() - start
    ok = not false_verdicts and not r2.verdict and elapsed < 600
    _verdict(
        5,
        ok,
        f"{n_pairs} pairs certified, {len(false_verdicts)} false; "
        f"(98,48) verdict={r2.verdict} (want False); {elapsed:.1f}s",
    )
    assert false_verdicts == []
    assert not r2.verdict and r2.max_bound > 0
    assert elapsed < 600


# ---------------------------------------------------------------------- 6


def test_criterion_06_d99_k48_reproduction():
    p = star_params(99, 48)
    _, x_plus = find_x_bounds(p)
    check_x_bounds(p, 0.002, x_plus)  # explicit x_minus = 0.002 is accepted
    xs = np.arange(0.002, 1.0 / 32.0, 1e-5)
    vals = np.asarray(bound_case1(xs, p))
    ok = bool(np.all(vals < 0))
    _verdict(
        6,
        ok,
        f"x_minus=0.002 accepted; bound curve max on [0.002, 1/32] = {vals.max():.6f}",
    )
    assert ok


# ---------------------------------------------------------------------- 7


def _profiles_for(rng, N, m):
    """Five random profiles with k * sum(j) = m, over the k dividing m."""
    ks = [k for k in (2, 3) if m % k == 0]
    for i in range(5):
        k = ks[i % len(ks)]
        j = np.zeros(N, dtype=int)
        for v in rng.integers(0, N, size=m // k):
            j[v] += 1
        yield StarProfile(k=k, j_of=tuple(int(x) for x in j))


def test_criterion_07_flow_vs_brute_force_on_all_cubic_graphs():
    rng = np.random.default_rng(2024)
    n_graphs = n_cases = 0
    disagreements = []
    for n in (4, 6, 8, 10):
        for G in all_cubic_graphs(n):
            n_graphs += 1
            for prof in _profiles_for(rng, G.N, len(G.edges)):
                n_cases += 1
                flow = decompose(G, prof.k, prof)
                brute = brute_force_condition(G, prof)
                if isinstance(flow, StarDecomposition) != (brute is True):
                    disagreements.append((n, G.edges, prof.j_of))
    ok = not disagreements and n_graphs == 30
    _verdict(
        7,
        ok,
        f"{n_graphs} cubic graphs (exhaustive, counts certified), "
        f"{n_cases} profile cases, {len(disagreements)} disagreements",
    )
    assert n_graphs == 30  # 1 + 2 + 6 + 21 simple cubic graphs up to n = 10
    assert disagreements == []


# ---------------------------------------------------------------------- 8


def _feasible_cells(N, d, M):
    for c in range(0, M * d // 2 + 1):
        try:
            yield SubgraphCount(N, d, M, c)
        except (DomainError, InfeasibleError):
            pass


def test_criterion_08_exact_probability_oracle():
    worst = 0.0
    checked = 0
    for N in range(1, 13):
        for d in range(1, 13):
            if N * d > 12 or (N * d) % 2 or (d > 1 and N == 1 and d % 2):
                continue
            try:
                pairings = list(enumerate_pairings(N, d))
            except Exception:
                continue
            for M in range(1, N + 1):
                U = frozenset(range(M))
                counts = {}
                for G in pairings:
                    c = edges_within(G, U)
                    counts[c] = counts.get(c, 0) + 1
                for cell in _feasible_cells(N, d, M):
                    expected = counts.get(cell.half_edge_pairs_inside, 0) / len(pairings)
                    got = math.exp(exact_P_Mr(cell))
                    if expected == 0:
                        assert got < 1e-12
                        continue
                    rel = abs(got - expected) / expected
                    worst = max(worst, rel)
                    checked += 1
                    assert rel < 1e-9, (N, d, M, cell.half_edge_pairs_inside)
    sums_ok = True
    for N, d in [(8, 3), (6, 4), (12, 2), (4, 6), (24, 1), (3, 8), (2, 12)]:
        for M in range(1, N + 1):
            total = sum(math.exp(exact_P_Mr(c)) for c in _feasible_cells(N, d, M))
            sums_ok &= abs(total - 1.0) < 1e-9
            assert abs(total - 1.0) < 1e-9, (N, d, M, total)
    _verdict(8, sums_ok, f"{checked} cells vs enumeration, worst rel err {worst:.2e}; sums to 1")


# ---------------------------------------------------------------------- 9


def test_criterion_09_analytic_bound_properties():
    rng = np.random.default_rng(99)
    # F <= 0 with equality cases
    for _ in range(500):
        x = rng.uniform(0, 1)
        t = rng.uniform(0, 1)
        if (2 - t) * x > 1:
            continue
        assert rate_F(x, t) <= 1e-12
    for x in np.linspace(0, 1, 101):
        assert abs(rate_F(float(x), float(x))) < 1e-12
        assert rate_F(0.0, float(min(x, 1.0))) == 0.0
    # complement symmetry to 1e-12
    for _ in range(500):
        x = rng.uniform(0.02, 0.98)
        t = rng.uniform(0, 1)
        if (2 - t) * x > 1:
            continue
        tp = (1 - (2 - t) * x) / (1 - x)
        if not 0 <= tp <= 1:
            continue
        assert abs(rate_F(x, t) - rate_F(1 - x, tp)) < 1e-12
    # derivative vs central finite differences to 1e-6
    for _ in range(300):
        x = rng.uniform(0.02, 0.6)
        t = rng.uniform(x + 0.05, 0.95)
        if (2 - t) * x > 0.98:
            continue
        fd = (rate_F(x, t + 1e-6) - rate_F(x, t - 1e-6)) / 2e-6
        assert abs(rate_F_dt(x, t) - fd) < 1e-6
    # dominance of the analytic estimates on 100x100 grids
    for x in np.linspace(0.001, 0.6, 100):
        ts = np.linspace(x, 1.0, 100)
        mask = (2 - ts) * x <= 1.0
        est = F_upper_estimate(np.full(mask.sum(), x), ts[mask])
        assert np.all(est >= rate_F(np.full(mask.sum(), x), ts[mask]) - 1e-12)
    for x in np.linspace(0.001, 0.2, 100):
        ts = np.linspace(2 * x / (1 + x), 1.0, 100)
        est = F_main_term_bound(np.full(100, x), ts)
        assert np.all(est >= rate_F(np.full(100, x), ts) - 1e-12)
    # Z bound dominates the exact cell probability on all Nd <= 12 cells
    for N in range(1, 13):
        for d in range(1, 13):
            if N * d > 12 or (N * d) % 2:
                continue
            for M in range(1, N + 1):
                for cell in _feasible_cells(N, d, M):
                    if cell.inside_average_degree < 2:
                        continue
                    lhs = math.comb(N, M) * math.exp(exact_P_Mr(cell))
                    assert lhs <= Z_upper(cell) * (1 + 1e-9), (N, d, M)
    _verdict(9, True, "sign/symmetry/derivative/dominance properties all hold")


# --------------------------------------------------------------------- 10


def test_criterion_10_monte_carlo_soft_check():
    rates = {}
    for N in (36, 60):
        rep = run_decomposition_trials(
            d=10, k=3, N=N, trials=200, a_mode="random", seed=0, keep_records=True
        )
        rates[N] = rep.success_rate
        for rec in rep.records:
            if not rec.success:
                print(f"  d=10 k=3 N={N} trial {rec.trial}: witness {rec.witness}")
    eul = run_decomposition_trials(
        d=4, k=2, N=30, trials=200, a_mode="random", seed=0, keep_records=False
    )
    ok = all(r >= 0.95 for r in rates.values()) and eul.success_rate == 1.0
    _verdict(
        10,
        ok,
        f"d=10 k=3 rates {rates}; Eulerian d=4 k=2 rate {eul.success_rate}",
    )
    for N, r in rates.items():
        assert r >= 0.95, f"N={N} success rate {r}"
    assert eul.success_rate == 1.0
