"""Acceptance criteria 1-13, each at its stated tolerance and time limit.

Every test logs one PASS/FAIL line through the ``record`` fixture before it
asserts, and the lines are repeated in the terminal summary.
"""
import csv
import io
import json
import math
import random
import time
from contextlib import contextmanager

import numpy as np
import pytest

import oracles
from fplab.bounds import large_threshold
from fplab.calibration import (
    TRIPLE_DEVIATION_PRIMES,
    difference_product_ratios,
    relation_gaps,
    triple_deviation_max_ratios,
)
from fplab.charsum import SparsePoly, eval_sparse_sum, eval_sum_subgroup_decomposed
from fplab.cli import main
from fplab.energy import d_times, mult_energy
from fplab.field import divisors, is_prime, make_field, multiplicative_order, subgroup
from fplab.incidence import (
    collinear_triples,
    collinear_triples_bruteforce,
    iota_moments,
    line_histogram,
    second_moment_closed_form,
)
from fplab.sumsets import romanoff_coverage, three_fold_sumset

SEED = 20240611


@contextmanager
def stopwatch():
    box = {}
    start = time.perf_counter()
    yield box
    box["seconds"] = time.perf_counter() - start


def odd_primes(lo, hi):
    return [q for q in oracles.primes_upto(hi) if q >= lo]


@pytest.mark.xfail(
    strict=True,
    reason="M2 = |A|^2|B|^2 - |A||B|^2 + p|A||B| only holds when lam*A/mu = A and B/mu = B "
    "(e.g. lam = mu = 1); for random lam, mu the exact moment differs, see the corrected "
    "closed form checked in test_criterion_01_corrected_moment",
)
def test_criterion_01_moment_identities(record):
    rng = random.Random(SEED + 101)
    primes = odd_primes(5, 101)
    m1_ok = literal_ok = exact_ok = 0
    with stopwatch() as clock:
        for _ in range(200):
            p = rng.choice(primes)
            A = rng.sample(range(p), rng.randint(1, min(12, p)))
            B = rng.sample(range(p), rng.randint(1, min(12, p)))
            lam, mu = rng.randrange(1, p), rng.randrange(1, p)
            m = iota_moments(make_field(p), A, B, lam, mu)
            nA, nB = len(A), len(B)
            m1_ok += m.m1 == m.m1_scaled == p * nA * nB
            literal_ok += m.m2 == nA**2 * nB**2 - nA * nB**2 + p * nA * nB
            exact_ok += m.m2 == oracles.moments(p, A, B, lam, mu)[2]
    ok = m1_ok == literal_ok == 200 and clock["seconds"] < 10
    record(
        1, ok,
        f"M1 exact {m1_ok}/200, M2 = |A|^2|B|^2 - |A||B|^2 + p|A||B| on {literal_ok}/200, "
        f"M2 equals brute force {exact_ok}/200, {clock['seconds']:.2f}s",
    )
    assert m1_ok == 200
    assert exact_ok == 200
    assert clock["seconds"] < 10
    assert literal_ok == 200


def test_criterion_01_corrected_moment():
    rng = random.Random(SEED + 101)
    primes = odd_primes(5, 101)
    for _ in range(200):
        p = rng.choice(primes)
        A = rng.sample(range(p), rng.randint(1, min(12, p)))
        B = rng.sample(range(p), rng.randint(1, min(12, p)))
        lam, mu = rng.randrange(1, p), rng.randrange(1, p)
        ctx = make_field(p)
        assert iota_moments(ctx, A, B, lam, mu).m2 == second_moment_closed_form(ctx, A, B, lam, mu)
        nA, nB = len(A), len(B)
        assert iota_moments(ctx, A, B, 1, 1).m2 == nA**2 * nB**2 - nA * nB**2 + p * nA * nB


def test_criterion_02_triples_oracle(record):
    rng = random.Random(SEED + 102)
    primes = odd_primes(5, 31)
    agree = 0
    with stopwatch() as clock:
        for _ in range(100):
            p = rng.choice(primes)
            ctx = make_field(p)
            U1 = rng.sample(range(1, p), rng.randint(1, min(5, p - 1)))
            U2 = rng.sample(range(1, p), rng.randint(1, min(5, p - 1)))
            l1, l2 = rng.randrange(1, p), rng.randrange(1, p)
            agree += collinear_triples(ctx, U1, U2, l1, l2) == collinear_triples_bruteforce(ctx, U1, U2, l1, l2)
    ok = agree == 100 and clock["seconds"] < 30
    record(2, ok, f"{agree}/100 exact matches, {clock['seconds']:.2f}s")
    assert ok


def test_criterion_03_character_sanity(record):
    rng = random.Random(SEED + 103)
    primes = odd_primes(3, 100_000)
    worst_principal = 0.0
    for _ in range(20):
        p = rng.choice(primes)
        a = rng.randrange(1, p)
        s = eval_sparse_sum(make_field(p), SparsePoly(((a, 1),)), 0)
        worst_principal = max(worst_principal, abs(s + 1))
    worst_gauss = 0.0
    for p in rng.sample(primes, 10):
        s = eval_sparse_sum(make_field(p), SparsePoly(((1, 1),)), (p - 1) // 2)
        worst_gauss = max(worst_gauss, abs(abs(s) - math.sqrt(p)))
    ok = worst_principal < 1e-9 and worst_gauss < 1e-6
    record(3, ok, f"max |S0+1| = {worst_principal:.2e}, max ||S|-sqrt(p)| = {worst_gauss:.2e}")
    assert ok


def test_criterion_04_decomposition(record):
    rng = random.Random(SEED + 104)
    worst = 0.0
    with stopwatch() as clock:
        for i in range(50):
            p = (31, 101, 1009, 2003)[i % 4]
            ctx = make_field(p)
            exps = rng.sample(range(1, 3 * p), 3)
            poly = SparsePoly(tuple((rng.randrange(1, p), k) for k in exps))
            j = rng.randrange(p - 1)
            direct = eval_sparse_sum(ctx, poly, j)
            averaged = eval_sum_subgroup_decomposed(ctx, poly, j)
            worst = max(worst, abs(averaged - direct) / max(abs(direct), 1.0))
    ok = worst < 1e-6 and clock["seconds"] < 60
    record(4, ok, f"max relative error {worst:.2e} (floor 1), {clock['seconds']:.2f}s")
    assert ok


def test_criterion_05_weil_ceiling(record):
    rng = random.Random(SEED + 105)
    primes = odd_primes(5, 2003)
    worst_slack = -math.inf
    for _ in range(100):
        p = rng.choice(primes)
        exps = rng.sample(range(1, p - 1), 3)
        poly = SparsePoly(tuple((rng.randrange(1, p), k) for k in exps))
        s = abs(eval_sparse_sum(make_field(p), poly, rng.randrange(p - 1)))
        worst_slack = max(worst_slack, s - max(exps) * math.sqrt(p))
    ok = worst_slack <= 1e-6
    record(5, ok, f"max (|S| - weil) = {worst_slack:.3f}")
    assert ok


def test_criterion_06_triple_deviation_regression(record, calibration):
    with stopwatch() as clock:
        measured = triple_deviation_max_ratios(seed=calibration["seed"])
    expected = {int(k): v for k, v in calibration["triple_deviation_max_ratio"].items()}
    rel = {p: abs(measured[p] - expected[p]) / expected[p] for p in TRIPLE_DEVIATION_PRIMES}
    finite = all(math.isfinite(v) for v in measured.values())
    ok = finite and max(rel.values()) <= 0.05 and clock["seconds"] < 600
    detail = ", ".join(f"p={p}: {measured[p]:.4f}" for p in TRIPLE_DEVIATION_PRIMES)
    record(6, ok, f"max ratios {detail}; worst drift {max(rel.values()):.2%}, {clock['seconds']:.1f}s")
    assert ok


def test_criterion_07_energy_exactness(record):
    subgroups = bad = 0
    for p in odd_primes(3, 499):
        ctx = make_field(p)
        for d in divisors(p - 1):
            G = subgroup(ctx, d)
            subgroups += 1
            bad += mult_energy(ctx, G, G) != d**3
    rng = random.Random(SEED + 107)
    oracle_ok = 0
    for _ in range(50):
        p = rng.choice(odd_primes(3, 101))
        U = rng.sample(range(p), rng.randint(1, min(8, p)))
        V = rng.sample(range(p), rng.randint(1, min(8, p)))
        oracle_ok += mult_energy(make_field(p), U, V) == oracles.mult_energy(p, U, V)
    dx = d_times(make_field(7), [1, 2])
    ok = bad == 0 and oracle_ok == 50 and dx == 152
    record(7, ok, f"E(G)=|G|^3 on {subgroups - bad}/{subgroups} subgroups, oracle {oracle_ok}/50, D({{1,2}})={dx}")
    assert ok


def test_criterion_08_relation_gap(record, calibration):
    C = calibration["relation_gap_constant"]
    rows = relation_gaps(seed=calibration["seed"])
    negative = sum(gap < 0 for _, gap, _ in rows)
    over = sum(c > C for *_, c in rows)
    sizes_ok = all(inst.d_g <= 60 and inst.d_h <= 60 and inst.p <= 499 for inst, *_ in rows)
    ok = len(rows) == 100 and negative == 0 and over == 0 and sizes_ok
    record(8, ok, f"{len(rows)} pairs, {negative} negative gaps, max gap/(|G|^3|H|) = "
                  f"{max(c for *_, c in rows):.3f} vs C = {C}")
    assert ok


def test_criterion_09_large_subgroup_sumsets(record):
    rng = random.Random(SEED + 109)
    checked = failures = 0
    with stopwatch() as clock:
        for p in odd_primes(3, 499):
            ctx = make_field(p)
            for d in divisors(p - 1):
                if d < large_threshold(p):
                    continue
                G = subgroup(ctx, d)
                for _ in range(5):
                    r = three_fold_sumset(ctx, G, rng.randrange(1, p), rng.randrange(1, p))
                    checked += 1
                    failures += not r.covered
    ok = failures == 0 and clock["seconds"] < 120
    record(9, ok, f"{checked - failures}/{checked} triples (p, G, lam, mu) cover F_p^*, {clock['seconds']:.2f}s")
    assert ok


def test_criterion_10_romanoff(record):
    checked = failures = 0
    for p in odd_primes(5, 499):
        ctx = make_field(p)
        if multiplicative_order(ctx, 2) < large_threshold(p):
            continue
        checked += 1
        failures += romanoff_coverage(ctx, 2).missing != 0
    ok = failures == 0 and checked > 0
    record(10, ok, f"{checked - failures}/{checked} primes with ord(2) >= p^(2/3) fully covered")
    assert ok


def test_criterion_11_difference_products(record, calibration):
    C = calibration["difference_product_constant"]
    rows = difference_product_ratios(seed=calibration["seed"])
    worst = max(float(r) for *_, r in rows)
    ok = len(rows) == 50 and all(n <= 100 for _, n, _ in rows) and worst <= C
    record(11, ok, f"max D/(|U|^2 T + |U|^6) = {worst:.4f} vs C = {C:.4f} over {len(rows)} sets")
    assert ok


def test_criterion_12_sweep_determinism(record, tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "schema_version": 1,
        "primes": [1009, 2003],
        "subgroup_orders": "all",
        "max_order": 1000,
        "lambda_sampling": {"count": 2, "seed": 3},
        "outputs": ["T", "main_term", "deviation", "regime", "bound", "ratio", "energy", "energy_ratio", "s1_covered"],
    }))
    outs = []
    for jobs in (1, 4):
        out = tmp_path / f"jobs{jobs}.csv"
        assert main(["sweep", "--spec", str(spec), "--jobs", str(jobs), "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    rows = list(csv.DictReader(io.StringIO(outs[0].decode())))
    finite = all(math.isfinite(float(r["ratio"])) for r in rows)
    ok = outs[0] == outs[1] and finite and len(rows) > 0
    record(12, ok, f"jobs=1 vs jobs=4: {len(outs[0])} bytes, identical={outs[0] == outs[1]}, "
                   f"{len(rows)} rows, ratio finite={finite}")
    assert ok


def test_criterion_13_performance(record):
    p = next(q for q in range(1_000_001, 1_100_000, 500) if is_prime(q))
    ctx = make_field(p)
    G = subgroup(ctx, 500)
    collinear_triples(make_field(101), [1, 2], [3, 4], 1, 2)
    line_histogram(make_field(101), [1, 2], [3, 4])
    with stopwatch() as t1:
        T = collinear_triples(ctx, G, G, 1, 3)
    rng = np.random.default_rng(SEED)
    small = make_field(10007)
    A = rng.choice(np.arange(1, 10007), 100, replace=False)
    B = rng.choice(np.arange(1, 10007), 100, replace=False)
    with stopwatch() as t2:
        h = line_histogram(small, A, B)
    ok = t1["seconds"] < 10 and t2["seconds"] < 5 and h.total() == 10007 * 10**4 and T > 0
    record(13, ok, f"collinear_triples |G|=500 p={p}: {t1['seconds']:.2f}s; "
                   f"line_histogram |A||B|=1e4 p=10007: {t2['seconds']:.2f}s")
    assert ok
