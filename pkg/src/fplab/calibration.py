"""Seeded measurement suites that pin the unstated implied constants.

Each suite is deterministic given its seed. ``calibrate`` runs all of them and
writes the measured constants to a JSON fixture; the test suite re-runs the
same suites and compares against that file, so drift in any kernel shows up
as a fixture mismatch.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .bounds import bound_report, root_threshold
from .charsum import SparsePoly
from .energy import dx_vs_t_check, t_energy_relation
from .field import divisors, make_field, primes_below, subgroup
from .incidence import collinear_triples, iota_cube_sum, triple_deviation_report
from .sumsets import ratio_shift_set, three_fold_sumset
from .sweep import sample_lambdas

SCHEMA_VERSION = 1
DEFAULT_SEED = 20240611
TRIPLE_DEVIATION_PRIMES = (1009, 2003, 10007)
TRIPLE_DEVIATION_MAX_ORDER = 1000
TRIPLE_DEVIATION_LAMBDAS = 3


def triple_deviation_max_ratios(
    primes=TRIPLE_DEVIATION_PRIMES,
    max_order: int = TRIPLE_DEVIATION_MAX_ORDER,
    lambdas: int = TRIPLE_DEVIATION_LAMBDAS,
    seed: int = DEFAULT_SEED,
) -> dict[int, float]:
    """Max of ``|T_lam(G) - |G|^6/p| / bound`` over all orders ``<= max_order``."""
    out = {}
    for p in primes:
        ctx = make_field(p)
        worst = 0.0
        for d in divisors(p - 1):
            if d > max_order:
                continue
            G = subgroup(ctx, d)
            for lam in sample_lambdas(p, d, lambdas, seed):
                ratio = triple_deviation_report(ctx, G, lam).ratio
                if not math.isfinite(ratio):
                    raise ArithmeticError(f"non-finite ratio at p={p}, d={d}, lambda={lam}")
                worst = max(worst, ratio)
        out[p] = worst
    return out


@dataclass(frozen=True)
class RelationInstance:
    p: int
    d_g: int
    d_h: int
    lam: int
    mu: int


def relation_instances(count: int = 100, seed: int = DEFAULT_SEED, max_order: int = 60, max_p: int = 499):
    rng = random.Random(seed)
    primes = [int(q) for q in primes_below(max_p + 1) if q >= 5]
    out = []
    for _ in range(count):
        p = rng.choice(primes)
        orders = [d for d in divisors(p - 1) if d <= max_order]
        out.append(RelationInstance(p, rng.choice(orders), rng.choice(orders),
                                    rng.randrange(1, p), rng.randrange(1, p)))
    return out


def relation_gaps(count: int = 100, seed: int = DEFAULT_SEED):
    """``(instance, gap, gap / (|G|^3 |H|))`` for each randomized subgroup pair."""
    rows = []
    for inst in relation_instances(count, seed):
        ctx = make_field(inst.p)
        G, H = subgroup(ctx, inst.d_g), subgroup(ctx, inst.d_h)
        rel = t_energy_relation(ctx, G, H, inst.lam, inst.mu)
        rows.append((inst, rel.gap, rel.gap / (inst.d_g**3 * inst.d_h)))
    return rows


def _random_subset(rng: random.Random, p: int, size: int) -> list[int]:
    return sorted(rng.sample(range(1, p), size))


def difference_product_ratios(count: int = 50, seed: int = DEFAULT_SEED, max_size: int = 100):
    """``D(U) / (|U|^2 T(U) + |U|^6)`` for random ``U`` in ``F_p^*``."""
    rng = random.Random(seed + 1)
    primes = [int(q) for q in primes_below(1000) if q >= 5]
    rows = []
    for _ in range(count):
        p = rng.choice(primes)
        U = _random_subset(rng, p, rng.randint(1, min(max_size, p - 1)))
        check = dx_vs_t_check(make_field(p), U)
        rows.append((p, len(U), check.ratio))
    return rows


def cube_sum_differences(count: int = 60, seed: int = DEFAULT_SEED):
    """``|cube sum - T| / (|A|^2 |B|^2)`` for random ``A, B`` in ``F_p^*``, ``p <= 101``."""
    rng = random.Random(seed + 2)
    primes = [int(q) for q in primes_below(102) if q >= 5]
    rows = []
    for _ in range(count):
        p = rng.choice(primes)
        ctx = make_field(p)
        A = _random_subset(rng, p, rng.randint(1, min(12, p - 1)))
        B = _random_subset(rng, p, rng.randint(1, min(12, p - 1)))
        lam, mu = rng.randrange(1, p), rng.randrange(1, p)
        cube = iota_cube_sum(ctx, A, B, lam, mu)
        T = collinear_triples(ctx, A, B, lam, mu)
        rows.append((p, len(A), len(B), abs(cube - T) / (len(A) ** 2 * len(B) ** 2)))
    return rows


def sumset_floor_ratios(seed: int = DEFAULT_SEED, max_p: int = 499, pairs: int = 3):
    """``|S_i| log|G| / |G|^2`` over subgroups with ``|G| <= sqrt(p log p)``."""
    rng = random.Random(seed + 3)
    rows = []
    for p in (int(q) for q in primes_below(max_p + 1) if q >= 5):
        ctx = make_field(p)
        for d in divisors(p - 1):
            if d < 2 or d > root_threshold(p):
                continue
            G = subgroup(ctx, d)
            floor = d * d / max(math.log(d), 1.0)
            for _ in range(pairs):
                lam, mu = rng.randrange(1, p), rng.randrange(1, p)
                s1 = three_fold_sumset(ctx, G, lam, mu).size
                s2 = ratio_shift_set(ctx, G, lam, mu).size
                rows.append((p, d, lam, mu, s1 / floor, s2 / floor))
    return rows


def difference_product_table(p: int) -> list[tuple[int, str, Fraction]]:
    """``(order, regime, D(G) / (|G|^2 T(G) + |G|^6))`` for every subgroup of small order."""
    ctx = make_field(p)
    rows = []
    for d in divisors(p - 1):
        if d > 300:
            break
        regime = "large" if d >= root_threshold(p) else "small"
        rows.append((d, regime, dx_vs_t_check(ctx, subgroup(ctx, d)).ratio))
    return rows


REFERENCE_TRINOMIAL = (31, "3,10;5,6;1,15", 0)


def reference_best_bound() -> str:
    p, poly, j = REFERENCE_TRINOMIAL
    return bound_report(make_field(p), SparsePoly.parse(poly), j).best


def calibrate(seed: int = DEFAULT_SEED) -> dict:
    worst = triple_deviation_max_ratios(seed=seed)
    gaps = relation_gaps(seed=seed)
    floors = sumset_floor_ratios(seed=seed)
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "triple_deviation_max_ratio": {str(p): v for p, v in worst.items()},
        "relation_gap_constant": max(c for _, _, c in gaps),
        "difference_product_constant": float(max(r for _, _, r in difference_product_ratios(seed=seed))),
        "cube_sum_constant": max(r for *_, r in cube_sum_differences(seed=seed)),
        "sumset_floor_constant": {
            "S1": min(r[4] for r in floors),
            "S2": min(r[5] for r in floors),
        },
        "reference_best_bound": reference_best_bound(),
    }


def write_fixture(path: str | Path, seed: int = DEFAULT_SEED) -> dict:
    data = calibrate(seed)
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return data


def load_fixture(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
