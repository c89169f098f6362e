"""Additive structure of subgroups: three-fold sumsets, shifted ratio sets and
modular Romanoff coverage."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .bounds import sumset_deficiency_bound, size_regime
from .errors import BaseDivisibleByP, EmptyRatioSet, FieldError, TooLarge
from .field import (
    ElementSet,
    FieldContext,
    Subgroup,
    as_elements,
    dilate_set,
    multiplicative_order,
    primes_below,
)
from .incidence import _scalar

SUMSET_MAX_WORK = 10**9
RATIO_MAX_PAIRS = 10**8


@dataclass(frozen=True)
class SumsetReport:
    kind: str
    p: int
    order: int
    size: int
    missing_nonzero: int
    regime: str
    bound: float
    covered: bool
    q_size: int | None = None
    zero_in_q: bool | None = None

    @property
    def deficiency_bound(self) -> float | None:
        return None if self.regime == "small" else self.bound

    @property
    def floor_bound(self) -> float | None:
        return self.bound if self.regime == "small" else None


def _missing_nonzero(mask: np.ndarray) -> int:
    return int(mask.size - 1 - np.count_nonzero(mask[1:]))


def three_fold_sumset_mask(ctx: FieldContext, G: ElementSet, lam: int, mu: int) -> np.ndarray:
    G = as_elements(ctx, G)
    n = G.size
    if n**3 > SUMSET_MAX_WORK and n * ctx.p > SUMSET_MAX_WORK:
        raise TooLarge("three-fold sumset exceeds the desk-scale work cap")
    lam = _scalar(ctx, lam, "lambda")
    mu = _scalar(ctx, mu, "mu")
    two = kernels.sumset_mask(G, dilate_set(ctx, G, lam), ctx.p)
    return kernels.sumset_mask(np.flatnonzero(two), dilate_set(ctx, G, mu), ctx.p)


def three_fold_sumset(ctx: FieldContext, G: Subgroup, lam: int, mu: int) -> SumsetReport:
    """``S1 = G + lam G + mu G`` with its coverage of ``F_p^*``."""
    mask = three_fold_sumset_mask(ctx, G, lam, mu)
    missing = _missing_nonzero(mask)
    bound, regime = sumset_deficiency_bound(ctx.p, len(G))
    return SumsetReport(
        kind="S1",
        p=ctx.p,
        order=len(G),
        size=int(np.count_nonzero(mask)),
        missing_nonzero=missing,
        regime=regime,
        bound=bound,
        covered=missing == 0,
    )


def ratio_shift_set_mask(ctx: FieldContext, G: Subgroup, lam: int, mu: int) -> np.ndarray:
    if len(G) ** 2 > RATIO_MAX_PAIRS:
        raise TooLarge(f"ratio sets support |G|^2 <= {RATIO_MAX_PAIRS}")
    mask, nonempty = kernels.ratio_set_mask(
        G.elements, _scalar(ctx, lam, "lambda"), _scalar(ctx, mu, "mu"), ctx.p
    )
    if not nonempty:
        raise EmptyRatioSet("every denominator v - mu vanishes")
    return mask


def ratio_shift_set(ctx: FieldContext, G: Subgroup, lam: int, mu: int) -> SumsetReport:
    """``S2 = {(u - lam)/(v - mu)}`` and the coverage of ``Q = G * S2``.

    Pairs with ``v = mu`` are undefined and skipped. ``0 in Q`` exactly when
    ``lam in G``.
    """
    mask = ratio_shift_set_mask(ctx, G, lam, mu)
    q = kernels.productset_mask(G.elements, np.flatnonzero(mask), ctx.p)
    bound, regime = sumset_deficiency_bound(ctx.p, len(G))
    return SumsetReport(
        kind="S2",
        p=ctx.p,
        order=len(G),
        size=int(np.count_nonzero(mask)),
        missing_nonzero=_missing_nonzero(mask),
        regime=regime,
        bound=bound,
        covered=_missing_nonzero(q) == 0,
        q_size=int(np.count_nonzero(q)),
        zero_in_q=bool(q[0]),
    )


class RomanoffResult(NamedTuple):
    missing: int
    order: int
    regime: str


def romanoff_coverage(ctx: FieldContext, base: int) -> RomanoffResult:
    """Count residues mod ``p`` not of the form ``l + g^k + g^m + g^n``.

    ``l`` runs over primes below ``p`` and ``k, m, n`` over ``[1, p-1]``; the
    powers of ``g`` then form the cyclic group it generates.
    """
    base = int(base)
    if abs(base) < 2:
        raise FieldError("the base must satisfy |g| >= 2")
    if ctx.p < 5:
        raise FieldError("romanoff coverage needs p >= 5")
    g = base % ctx.p
    if g == 0:
        raise BaseDivisibleByP(f"{base} is divisible by {ctx.p}")
    order = multiplicative_order(ctx, g)
    powers = np.empty(order, dtype=np.int64)
    x = 1
    for i in range(order):
        x = x * g % ctx.p
        powers[i] = x
    two = kernels.sumset_mask(powers, powers, ctx.p)
    three = kernels.sumset_mask(np.flatnonzero(two), powers, ctx.p)
    covered = kernels.sumset_mask(primes_below(ctx.p), np.flatnonzero(three), ctx.p)
    missing = int(ctx.p - np.count_nonzero(covered))
    return RomanoffResult(missing, order, size_regime(ctx.p, order))
