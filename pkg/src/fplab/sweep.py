"""Parameter sweeps over ``(p, d, lambda)`` grids with deterministic CSV output.

A sweep is described by a JSON document::

    {
      "schema_version": 1,
      "primes": [1009, 2003],
      "subgroup_orders": "all",
      "max_order": 1000,
      "lambda_sampling": {"count": 3, "seed": 0},
      "outputs": ["T", "main_term", "deviation", "regime", "bound", "ratio"],
      "jobs": 4
    }

``primes`` may be replaced by ``"prime_range": {"start": a, "stop": b,
"count": n}`` (the first ``n`` primes in ``[a, b)``). Lambdas are drawn per
``(seed, p, d)`` so the rows never depend on the worker count.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .bounds import large_threshold
from .energy import energy_deviation_report, mult_energy, t_energy_relation
from .field import divisors, is_prime, make_field, subgroup
from .incidence import (
    collinear_triples,
    collinear_triples_bruteforce,
    iota_moments,
    second_moment_closed_form,
    triple_deviation_report,
)
from .sumsets import three_fold_sumset

SCHEMA_VERSION = 1

COLUMN_GROUPS = {
    "triples": ("T", "main_term", "deviation", "regime", "bound", "ratio"),
    "energy": (
        "energy", "energy_main_term", "energy_deviation",
        "energy_regime", "energy_bound", "energy_ratio",
    ),
    "s1": ("s1_size", "s1_missing", "s1_regime", "s1_covered"),
}
COLUMN_TO_GROUP = {col: grp for grp, cols in COLUMN_GROUPS.items() for col in cols}
KEY_COLUMNS = ("p", "d", "lambda")


class SpecError(ValueError):
    """Malformed sweep spec file."""


@dataclass(frozen=True)
class SweepSpec:
    primes: tuple[int, ...]
    subgroup_orders: str | tuple[int, ...] = "all"
    max_order: int | None = None
    lambda_count: int = 1
    seed: int = 0
    outputs: tuple[str, ...] = COLUMN_GROUPS["triples"]
    jobs: int = 1

    @classmethod
    def from_dict(cls, doc: dict) -> "SweepSpec":
        if not isinstance(doc, dict):
            raise SpecError("sweep spec must be a JSON object")
        version = doc.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise SpecError(f"unsupported schema_version {version}")
        if "primes" in doc:
            primes = tuple(_as_int(x, "primes") for x in doc["primes"])
        elif "prime_range" in doc:
            rng = doc["prime_range"]
            try:
                start, stop, count = int(rng["start"]), int(rng["stop"]), int(rng["count"])
            except (KeyError, TypeError, ValueError) as exc:
                raise SpecError("prime_range needs integer start, stop and count") from exc
            primes = tuple(q for q in range(max(start, 3), stop) if is_prime(q))[:count]
        else:
            raise SpecError("spec needs 'primes' or 'prime_range'")
        if not primes:
            raise SpecError("no primes selected")
        for q in primes:
            if q < 3 or q >= 2**31 or not is_prime(q):
                raise SpecError(f"{q} is not an odd prime below 2**31")

        orders = doc.get("subgroup_orders", "all")
        if orders != "all":
            if not isinstance(orders, list):
                raise SpecError("subgroup_orders must be 'all' or a list of integers")
            orders = tuple(sorted({_as_int(d, "subgroup_orders") for d in orders}))
        max_order = doc.get("max_order")
        if max_order is not None:
            max_order = _as_int(max_order, "max_order")

        sampling = doc.get("lambda_sampling", {})
        if not isinstance(sampling, dict):
            raise SpecError("lambda_sampling must be an object")
        count = _as_int(sampling.get("count", 1), "lambda_sampling.count")
        seed = _as_int(sampling.get("seed", 0), "lambda_sampling.seed")
        if count < 1:
            raise SpecError("lambda_sampling.count must be >= 1")

        outputs = tuple(doc.get("outputs", COLUMN_GROUPS["triples"]))
        unknown = [c for c in outputs if c not in COLUMN_TO_GROUP]
        if unknown:
            raise SpecError(f"unknown output columns: {unknown}")
        jobs = _as_int(doc.get("jobs", 1), "jobs")
        if jobs < 1:
            raise SpecError("jobs must be >= 1")
        return cls(primes, orders, max_order, count, seed, outputs, jobs)

    @classmethod
    def load(cls, path: str | Path) -> "SweepSpec":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read sweep spec: {exc}") from exc
        return cls.from_dict(doc)

    @property
    def groups(self) -> tuple[str, ...]:
        return tuple(g for g in COLUMN_GROUPS if any(COLUMN_TO_GROUP[c] == g for c in self.outputs))


def _as_int(x, name: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SpecError(f"{name} must be an integer, got {x!r}")
    return x


def sample_lambdas(p: int, d: int, count: int, seed: int) -> list[int]:
    """``count`` distinct nonzero residues, a pure function of ``(seed, p, d)``."""
    if count >= p - 1:
        return list(range(1, p))
    rng = np.random.default_rng([seed, p, d])
    picks = rng.choice(p - 1, size=count, replace=False) + 1
    return sorted(int(x) for x in picks)


def orders_for(p: int, spec_orders, max_order: int | None) -> list[int]:
    divs = divisors(p - 1)
    if spec_orders != "all":
        divs = [d for d in divs if d in set(spec_orders)]
    if max_order is not None:
        divs = [d for d in divs if d <= max_order]
    return divs


def cells(spec: SweepSpec) -> list[tuple[int, int, int]]:
    out = []
    for p in sorted(spec.primes):
        for d in orders_for(p, spec.subgroup_orders, spec.max_order):
            for lam in sample_lambdas(p, d, spec.lambda_count, spec.seed):
                out.append((p, d, lam))
    return out


@lru_cache(maxsize=8)
def _field(p: int):
    return make_field(p)


def compute_cell(p: int, d: int, lam: int, groups: tuple[str, ...]) -> dict:
    ctx = _field(p)
    G = subgroup(ctx, d)
    row: dict = {"p": p, "d": d, "lambda": lam}
    if "triples" in groups:
        r = triple_deviation_report(ctx, G, lam)
        row.update(T=r.T, main_term=r.main_term, deviation=r.deviation,
                   regime=r.regime, bound=r.regime_bound, ratio=r.ratio)
    if "energy" in groups:
        r = energy_deviation_report(ctx, G, lam)
        row.update(energy=r.energy, energy_main_term=r.main_term,
                   energy_deviation=r.deviation, energy_regime=r.regime,
                   energy_bound=r.regime_bound, energy_ratio=r.ratio)
    if "s1" in groups:
        r = three_fold_sumset(ctx, G, lam, 1)
        row.update(s1_size=r.size, s1_missing=r.missing_nonzero,
                   s1_regime=r.regime, s1_covered=r.covered)
    return row


def check_cell(p: int, d: int, lam: int) -> list[str]:
    """Run the exact property suite on one cell; returns violation messages."""
    ctx = _field(p)
    G = subgroup(ctx, d)
    where = f"p={p} d={d} lambda={lam}"
    problems = []
    if p * (d * d + p) <= 5 * 10**8:
        m = iota_moments(ctx, G, G, lam, lam)
        if m.m1 != p * d * d or m.m1_scaled != p * d * d:
            problems.append(f"{where}: first moment identity failed")
        if m.m2 != second_moment_closed_form(ctx, G, G, lam, lam):
            problems.append(f"{where}: second moment identity failed")
        if lam in G and m.m2 != d**4 - d**3 + p * d * d:
            problems.append(f"{where}: second moment differs from the invariant-set formula")
    if mult_energy(ctx, G, G) != d**3:
        problems.append(f"{where}: E(G) != |G|^3")
    if d <= 200 and t_energy_relation(ctx, G, G, lam, lam).gap < 0:
        problems.append(f"{where}: negative T/energy gap")
    if d <= 4 and collinear_triples(ctx, G, G, 1, lam) != collinear_triples_bruteforce(ctx, G, G, 1, lam):
        problems.append(f"{where}: collinear_triples disagrees with brute force")
    if d >= large_threshold(p) and not three_fold_sumset(ctx, G, lam, 1).covered:
        problems.append(f"{where}: large subgroup sumset misses a nonzero residue")
    if d <= 2000 and not math.isfinite(triple_deviation_report(ctx, G, lam).ratio):
        problems.append(f"{where}: non-finite triple ratio")
    return problems


def _cell_task(args):
    p, d, lam, groups, check = args
    row = compute_cell(p, d, lam, groups)
    return row, (check_cell(p, d, lam) if check else [])


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


@dataclass
class SweepResult:
    header: tuple[str, ...]
    rows: list[dict]
    violations: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_value(row[c]) for c in self.header])
        return buf.getvalue()


def run_sweep(spec: SweepSpec, jobs: int | None = None, check: bool = False) -> SweepResult:
    jobs = spec.jobs if jobs is None else jobs
    groups = spec.groups
    tasks = [(p, d, lam, groups, check) for p, d, lam in cells(spec)]
    if jobs == 1 or len(tasks) <= 1:
        results = [_cell_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_cell_task, tasks, chunksize=1))
    rows = sorted((r for r, _ in results), key=lambda r: (r["p"], r["d"], r["lambda"]))
    violations = [msg for _, msgs in results for msg in msgs]
    return SweepResult(KEY_COLUMNS + spec.outputs, rows, violations)
