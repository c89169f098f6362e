"""Multiplicative energy and difference-product counts.

``E(U, V)`` counts solutions of ``u1 v1 = u2 v2`` and ``D(U)`` counts
solutions of ``(u1-v1)(u2-v2) = (u3-v3)(u4-v4)``; both reduce to a histogram
``h`` of products followed by ``sum h(t)^2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import kernels
from .bounds import shifted_energy_bound
from .errors import EmptySet, TooLarge, ZeroArgument
from .field import ElementSet, FieldContext, Subgroup, as_elements, inverse, translate_set
from .incidence import _scalar, collinear_triples, exact_dot

DTIMES_MAX_SIZE = 5000
DTIMES_MAX_WORK = 4 * 10**10
RELATION_MAX_SIZE = 500
ENERGY_REPORT_MAX_SIZE = 5000
DX_CHECK_MAX_SIZE = 300


def mult_energy(ctx: FieldContext, U: ElementSet, V: ElementSet) -> int:
    U = as_elements(ctx, U)
    V = as_elements(ctx, V)
    if U.size == 0 or V.size == 0:
        raise EmptySet("multiplicative energy needs nonempty sets")
    h = kernels.product_histogram(U, V, ctx.p)
    return exact_dot(h, h, U.size * V.size * min(U.size, V.size))


def difference_product_histogram(ctx: FieldContext, U: ElementSet) -> np.ndarray:
    """``h[t] = #{(u1,v1,u2,v2) in U^4 : (u1-v1)(u2-v2) = t}``."""
    U = as_elements(ctx, U)
    if U.size == 0:
        raise EmptySet("U is empty")
    if U[0] == 0:
        raise ZeroArgument("U must lie in F_p^*")
    if U.size > DTIMES_MAX_SIZE:
        raise TooLarge(f"d_times supports |U| <= {DTIMES_MAX_SIZE}")
    diffs = kernels.difference_histogram(U, ctx.p)
    support = int(np.count_nonzero(diffs[1:]))
    if support * support > DTIMES_MAX_WORK:
        raise TooLarge("difference support too large for the direct convolution")
    return kernels.multiplicative_convolution(diffs, ctx.p)


def d_times(ctx: FieldContext, U: ElementSet) -> int:
    h = difference_product_histogram(ctx, U)
    n = as_elements(ctx, U).size
    return exact_dot(h, h, n**8)


class EnergyRelation(NamedTuple):
    T: int
    product_form: int
    gap: int


def t_energy_relation(
    ctx: FieldContext, G: Subgroup, H: Subgroup, lam: int, mu: int
) -> EnergyRelation:
    """Compare ``T_{lam,mu}(G,H)`` with ``|G||H| E(G - 1/lam, H - 1/mu)``.

    Substituting ``v = u v'`` and ``w = u w'`` shows that, for fixed
    ``(u1, u2)``, the sextuples are solutions of
    ``x1 y1 = x2 y2`` with ``x in 1 - lam G`` and ``y in 1 - mu H``, minus
    those with a vanishing denominator. Dilating by ``-1/lam`` and
    ``-1/mu`` gives the translates used here, so ``gap >= 0`` exactly.
    """
    nG, nH = len(G), len(H)
    if max(nG, nH) > RELATION_MAX_SIZE:
        raise TooLarge(f"t_energy_relation supports |G|, |H| <= {RELATION_MAX_SIZE}")
    lam = _scalar(ctx, lam, "lambda")
    mu = _scalar(ctx, mu, "mu")
    T = collinear_triples(ctx, G, H, lam, mu)
    shifted_G = translate_set(ctx, G, -inverse(ctx, lam))
    shifted_H = translate_set(ctx, H, -inverse(ctx, mu))
    product_form = nG * nH * mult_energy(ctx, shifted_G, shifted_H)
    return EnergyRelation(T, product_form, product_form - T)


@dataclass(frozen=True)
class EnergyReport:
    p: int
    order: int
    lam: int
    energy: int
    main_term: float
    deviation: float
    regime: str
    regime_bound: float
    ratio: float


def energy_deviation_report(ctx: FieldContext, G: Subgroup, lam: int) -> EnergyReport:
    """``E(G + lam)`` set against ``|G|^4 / p`` and the three-regime bound."""
    n = len(G)
    if n > ENERGY_REPORT_MAX_SIZE:
        raise TooLarge(f"energy reports support |G| <= {ENERGY_REPORT_MAX_SIZE}")
    lam = _scalar(ctx, lam, "lambda")
    shifted = translate_set(ctx, G, lam)
    energy = mult_energy(ctx, shifted, shifted)
    main = Fraction(n**4, ctx.p)
    deviation = float(abs(energy - main))
    bound, regime = shifted_energy_bound(ctx.p, n)
    return EnergyReport(
        p=ctx.p,
        order=n,
        lam=lam,
        energy=energy,
        main_term=float(main),
        deviation=deviation,
        regime=regime,
        regime_bound=bound,
        ratio=deviation / bound,
    )


class DxCheck(NamedTuple):
    lhs: int
    rhs: int
    ratio: Fraction


def dx_vs_t_check(ctx: FieldContext, U: ElementSet) -> DxCheck:
    """``D(U)`` against ``|U|^2 T(U) + |U|^6``."""
    U = as_elements(ctx, U)
    if U.size > DX_CHECK_MAX_SIZE:
        raise TooLarge(f"dx_vs_t_check supports |U| <= {DX_CHECK_MAX_SIZE}")
    lhs = d_times(ctx, U)
    n = U.size
    rhs = n**2 * collinear_triples(ctx, U, U, 1, 1) + n**6
    return DxCheck(lhs, rhs, Fraction(lhs, rhs))
