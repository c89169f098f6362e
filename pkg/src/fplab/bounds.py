"""Closed-form bound calculators and the measured-vs-bound comparator.

Implied constants are taken to be 1 and ``log`` is the natural logarithm.
Factors of ``log |G|`` are floored at 1 so that bounds never vanish for
``|G| <= e`` (the hidden constant absorbs the difference).

Every regime-split bound returns ``(value, regime)``. Subgroup-size splits
use the labels ``large`` (``n >= p^(2/3)``), ``middle``
(``p^(2/3) > n >= sqrt(p) log p``) and ``small``; splits against
``sqrt(p log p)`` use ``large``/``middle``/``small`` in the order the cases
are listed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from math import gcd, log, sqrt

from .charsum import SparsePoly, eval_sparse_sum
from .errors import NotATrinomial
from .field import FieldContext


def _log_floor(x: float) -> float:
    return max(log(x), 1.0)


def _pow(x: int, e: float) -> float:
    """``x**e`` for arbitrarily large integers ``x`` without float overflow."""
    return math.exp(e * log(x))


def large_threshold(p: int) -> float:
    return p ** (2.0 / 3.0)


def middle_threshold(p: int) -> float:
    return sqrt(p) * log(p)


def root_threshold(p: int) -> float:
    return sqrt(p * log(p))


def size_regime(p: int, n: float) -> str:
    if n >= large_threshold(p):
        return "large"
    if n >= middle_threshold(p):
        return "middle"
    return "small"


# -- single-sum bounds -------------------------------------------------------

def trivial_bound(p: int) -> float:
    return float(p - 1)


def weil_bound(p: int, poly: SparsePoly) -> float:
    return max(poly.exponents) * sqrt(p)


def ccp1_bound(p: int, k: int, l: int, m: int) -> float:
    return _pow(k * l * m // max(k, l, m), 0.25) * p ** 0.875


def cp_bound(p: int, k: int, l: int, m: int) -> float:
    return _pow(k * l * m, 1.0 / 9.0) * p ** (5.0 / 6.0)


def ccp2_bound(p: int, k: int, l: int, m: int) -> float:
    D = gcd(gcd(k, l), gcd(m, p - 1))
    return sqrt(D) * p ** 0.875 + _pow(k * l * m, 0.25) * p ** 0.625


@dataclass(frozen=True)
class GcdParams:
    """Gcd data for a trinomial, under one assignment of exponents to roles.

    ``assignment[i]`` is the index of the input exponent playing role
    ``i`` in ``(k, l, m)``.
    """

    d: int
    e: int
    f: int
    g: int
    h: int
    assignment: tuple[int, int, int] = field(default=(0, 1, 2))

    @property
    def ordered(self) -> bool:
        return self.f >= self.g >= self.h


def gcd_params_for(p: int, k: int, l: int, m: int, assignment=(0, 1, 2)) -> GcdParams:
    """Gcd parameters with ``k``, ``l``, ``m`` in the given roles, no search."""
    exps = (k, l, m)
    kk, ll, mm = (exps[i] for i in assignment)
    d, e, f = gcd(kk, p - 1), gcd(ll, p - 1), gcd(mm, p - 1)
    return GcdParams(d, e, f, d // gcd(d, f), e // gcd(e, f), tuple(assignment))


def thm16_bound(p: int, params: GcdParams) -> tuple[float, str]:
    threshold = root_threshold(p)
    f, g, h = params.f, params.g, params.h
    if h >= threshold:
        return p ** 0.875 * f ** 0.125, "large"
    if g >= threshold:
        return p ** (15 / 16) * (f / h) ** 0.125 * log(p) ** (1 / 16), "middle"
    return p * (f / (g * h)) ** 0.125 * log(p) ** 0.125, "small"


def gcd_params(p: int, k: int, l: int, m: int) -> GcdParams:
    """Role assignment with ``f >= g >= h`` giving the smallest trinomial bound.

    Ties go to the first assignment in lexicographic permutation order. One
    valid assignment always exists: give the largest gcd the ``f`` role and
    order the other two so that ``g >= h``.
    """
    best = None
    for perm in permutations(range(3)):
        params = gcd_params_for(p, k, l, m, perm)
        if not params.ordered:
            continue
        value = thm16_bound(p, params)[0]
        if best is None or value < best[0]:
            best = (value, params)
    assert best is not None
    return best[1]


# -- counting bounds -----------------------------------------------------------

def triple_count_bound(p: int, n: int) -> tuple[float, str]:
    """Deviation bound for collinear triples in a subgroup of order ``n``."""
    regime = size_regime(p, n)
    if regime == "large":
        return sqrt(p) * n ** 3.5, regime
    if regime == "middle":
        return n ** 5 / sqrt(p), regime
    return n ** 4 * _log_floor(n), regime


def shifted_energy_bound(p: int, n: int) -> tuple[float, str]:
    """Deviation bound for the multiplicative energy of a shifted subgroup."""
    regime = size_regime(p, n)
    if regime == "large":
        return sqrt(p) * n ** 1.5, regime
    if regime == "middle":
        return n ** 3 / sqrt(p), regime
    return n ** 2 * _log_floor(n), regime


def subgroup_difference_bound(p: int, n: int) -> tuple[float, str]:
    """Bound on the difference-product count of a subgroup of order ``n``."""
    if n >= root_threshold(p):
        return n ** 8 / p, "large"
    return n ** 6 * _log_floor(n), "small"


def trilinear_bound(p: int, F: int, G: int, H: int) -> tuple[float, str]:
    """Trilinear subgroup-sum bound; sizes are sorted so that ``F >= G >= H``."""
    F, G, H = sorted((F, G, H), reverse=True)
    threshold = root_threshold(p)
    if H >= threshold:
        return F ** 0.875 * G * H, "large"
    if G >= threshold:
        return p ** (1 / 16) * F ** 0.875 * G * H ** 0.875 * log(p) ** (1 / 16), "middle"
    return p ** 0.125 * (F * G * H) ** 0.875 * log(p) ** 0.125, "small"


def bilinear_bound(p: int, X: int, Y: int) -> float:
    return sqrt(p * X * Y)


def sumset_deficiency_bound(p: int, n: int) -> tuple[float, str]:
    """Bound on ``p - |S_i|``, or for the ``small`` regime the floor
    ``|G|^2 / log |G|`` on ``|S_i|``.

    Regimes: ``large`` (``n >= p^(2/3)``), ``middle``
    (``n >= sqrt(p) log p``), ``lower`` (``n > sqrt(p log p)``), ``small``.
    """
    if n >= large_threshold(p):
        return p ** 2.5 * n ** -2.5, "large"
    if n >= middle_threshold(p):
        return p ** 1.5 / n, "middle"
    if n > root_threshold(p):
        return p ** 2 / n ** 2 * log(p), "lower"
    return n ** 2 / _log_floor(n), "small"


# -- comparator ----------------------------------------------------------------

BOUND_NAMES = ("trivial", "weil", "ccp1", "cp", "ccp2", "thm16")


@dataclass(frozen=True)
class BoundReport:
    actual: float
    trivial: float
    weil: float
    weil_applicable: bool
    ccp1: float
    cp: float
    ccp2: float
    thm16: float
    thm16_regime: str
    params: GcdParams
    best: str
    ratios: dict[str, float]
    value: complex = 0j

    def bounds(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in BOUND_NAMES}

    def as_dict(self) -> dict:
        return {
            "actual": self.actual,
            "bounds": self.bounds(),
            "weil_applicable": self.weil_applicable,
            "thm16_regime": self.thm16_regime,
            "gcd_params": {
                "d": self.params.d, "e": self.params.e, "f": self.params.f,
                "g": self.params.g, "h": self.params.h,
                "assignment": list(self.params.assignment),
            },
            "best": self.best,
            "ratios": self.ratios,
        }


def bound_report(ctx: FieldContext, poly: SparsePoly, j: int, value: complex | None = None) -> BoundReport:
    """Measure ``|S_chi(Psi)|`` for a trinomial and set it against every bound."""
    if len(poly) != 3:
        raise NotATrinomial(f"expected 3 terms, got {len(poly)}")
    p = ctx.p
    if value is None:
        value = eval_sparse_sum(ctx, poly, j)
    k, l, m = poly.exponents
    params = gcd_params(p, k, l, m)
    thm16, regime = thm16_bound(p, params)
    bounds = {
        "trivial": trivial_bound(p),
        "weil": weil_bound(p, poly),
        "ccp1": ccp1_bound(p, k, l, m),
        "cp": cp_bound(p, k, l, m),
        "ccp2": ccp2_bound(p, k, l, m),
        "thm16": thm16,
    }
    actual = abs(value)
    best = min(BOUND_NAMES, key=lambda name: bounds[name])
    return BoundReport(
        actual=actual,
        weil_applicable=max(poly.exponents) < p and not poly.is_constant_mod(ctx),
        thm16_regime=regime,
        params=params,
        best=best,
        ratios={name: actual / v for name, v in bounds.items()},
        value=value,
        **bounds,
    )
