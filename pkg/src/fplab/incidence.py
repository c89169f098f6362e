"""Line incidences and collinear-triple counts.

For sets ``A, B`` in ``F_p`` and the non-vertical line ``l_{a,b}: y = a x + b``
the incidence is ``iota(l_{a,b}) = |l_{a,b} ∩ (A x B)|``. The collinear-triple
count ``T_{lam1,lam2}(U1, U2)`` is the number of sextuples with

    (u1 - lam1 v1) / (u1 - lam1 w1) = (u2 - lam2 v2) / (u2 - lam2 w2),

counted only where both denominators are nonzero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import numpy as np

from . import kernels
from .bounds import triple_count_bound
from .errors import EmptySet, TooLarge, ZeroArgument, ZeroScalar
from .field import ElementSet, FieldContext, Subgroup, as_elements, inverse

TRIPLES_MAX_SIZE = 2000
BRUTEFORCE_MAX_WORK = 64
DENSE_HIST_LIMIT = 1 << 26
LINE_HIST_MAX_BYTES = 1 << 31


def _nonempty(ctx: FieldContext, U: ElementSet, name: str) -> np.ndarray:
    arr = as_elements(ctx, U)
    if arr.size == 0:
        raise EmptySet(f"{name} is empty")
    return arr


def _scalar(ctx: FieldContext, lam: int, name: str = "scalar") -> int:
    lam = int(lam) % ctx.p
    if lam == 0:
        raise ZeroScalar(f"{name} must be nonzero mod p")
    return lam


def _units(ctx: FieldContext, U: ElementSet, name: str) -> np.ndarray:
    arr = as_elements(ctx, U)
    if arr.size and arr[0] == 0:
        raise ZeroArgument(f"{name} must lie in F_p^*")
    return arr


def exact_dot(h1: np.ndarray, h2: np.ndarray, bound: int) -> int:
    """``sum h1*h2`` exactly; falls back to Python ints when int64 could overflow."""
    if bound < 2**63:
        return int(h1 @ h2)
    idx = np.flatnonzero((h1 != 0) & (h2 != 0))
    return sum(int(a) * int(b) for a, b in zip(h1[idx].tolist(), h2[idx].tolist()))


@dataclass(frozen=True, eq=False)
class LineHistogram:
    """``counts[a, b] = iota(l_{a,b})`` for every slope ``a`` and intercept ``b``."""

    A: np.ndarray
    B: np.ndarray
    counts: np.ndarray

    @property
    def p(self) -> int:
        return self.counts.shape[0]

    def iota(self, a: int, b: int) -> int:
        return int(self.counts[a % self.p, b % self.p])

    def total(self) -> int:
        return int(self.counts.sum(dtype=np.int64))


def _count_dtype(n: int):
    for dt in (np.uint8, np.uint16, np.uint32):
        if n <= np.iinfo(dt).max:
            return dt
    return np.int64


def line_histogram(ctx: FieldContext, A: ElementSet, B: ElementSet) -> LineHistogram:
    A = _nonempty(ctx, A, "A")
    B = _nonempty(ctx, B, "B")
    dtype = _count_dtype(A.size)
    if ctx.p * ctx.p * np.dtype(dtype).itemsize > LINE_HIST_MAX_BYTES:
        raise TooLarge(f"a dense {ctx.p}x{ctx.p} line histogram exceeds the memory cap")
    return LineHistogram(A, B, kernels.line_histogram(A, B, ctx.p, dtype))


class Moments(NamedTuple):
    m1: int
    m1_scaled: int
    m2: int


def iota_moments(ctx: FieldContext, A: ElementSet, B: ElementSet, lam: int, mu: int) -> Moments:
    """Sums of ``iota(l_{a,b})``, ``iota(l_{lam a, mu b})`` and their product over all lines."""
    A = _nonempty(ctx, A, "A")
    B = _nonempty(ctx, B, "B")
    m1, m1s, m2, _ = kernels.iota_sums(A, B, _scalar(ctx, lam), _scalar(ctx, mu), ctx.p)
    return Moments(m1, m1s, m2)


def second_moment_closed_form(ctx: FieldContext, A: ElementSet, B: ElementSet, lam: int, mu: int) -> int:
    """Exact value of ``Moments.m2`` from pair counts alone.

    A quadruple ``(u, v, x, y)`` lies on ``p`` common lines when ``mu u = lam x``
    and ``mu v = y``, on none when only the first equation holds, and on
    exactly one otherwise. With ``alpha`` and ``beta`` the numbers of pairs
    solving each equation this gives ``(|A|^2 - alpha)|B|^2 + alpha beta p``,
    which is ``|A|^2|B|^2 - |A||B|^2 + p|A||B|`` when ``lam = mu = 1``.
    """
    A = _nonempty(ctx, A, "A")
    B = _nonempty(ctx, B, "B")
    lam, mu = _scalar(ctx, lam), _scalar(ctx, mu)
    ratio = lam * inverse(ctx, mu) % ctx.p
    alpha = int(np.isin(A * ratio % ctx.p, A).sum())
    beta = int(np.isin(B * inverse(ctx, mu) % ctx.p, B).sum())
    return (A.size**2 - alpha) * B.size**2 + alpha * beta * ctx.p


def iota_cube_sum(ctx: FieldContext, A: ElementSet, B: ElementSet, lam: int, mu: int) -> int:
    """``sum_{a,b} iota(l_{a,b}) * iota(l_{lam a, mu b})**2``."""
    A = _nonempty(ctx, A, "A")
    B = _nonempty(ctx, B, "B")
    return kernels.iota_sums(A, B, _scalar(ctx, lam), _scalar(ctx, mu), ctx.p)[3]


def ratio_histogram(ctx: FieldContext, U: ElementSet, lam: int) -> np.ndarray:
    """Per-side histogram ``h(r)`` of ``(u - lam v)/(u - lam w)`` over ``U^3``."""
    U = _units(ctx, U, "U")
    if ctx.p > DENSE_HIST_LIMIT:
        raise TooLarge(f"dense ratio histograms are capped at p <= {DENSE_HIST_LIMIT}")
    return kernels.ratio_histogram(U, _scalar(ctx, lam), ctx.p)


def collinear_triples(
    ctx: FieldContext, U1: ElementSet, U2: ElementSet, lam1: int, lam2: int
) -> int:
    """Exact ``T_{lam1,lam2}(U1, U2)`` in ``O(n^3)`` via per-side ratio histograms."""
    U1 = _units(ctx, U1, "U1")
    U2 = _units(ctx, U2, "U2")
    lam1 = _scalar(ctx, lam1, "lam1")
    lam2 = _scalar(ctx, lam2, "lam2")
    if max(U1.size, U2.size) > TRIPLES_MAX_SIZE:
        raise TooLarge(f"collinear_triples supports |U_i| <= {TRIPLES_MAX_SIZE}")
    if U1.size == 0 or U2.size == 0:
        return 0
    h1 = ratio_histogram(ctx, U1, lam1)
    if lam1 == lam2 and np.array_equal(U1, U2):
        h2 = h1
    else:
        h2 = ratio_histogram(ctx, U2, lam2)
    return exact_dot(h1, h2, U1.size**3 * U2.size**3)


def collinear_triples_bruteforce(
    ctx: FieldContext, U1: ElementSet, U2: ElementSet, lam1: int, lam2: int
) -> int:
    """Literal enumeration of all sextuples; ground truth for tiny sets."""
    U1 = _units(ctx, U1, "U1").tolist()
    U2 = _units(ctx, U2, "U2").tolist()
    lam1 = _scalar(ctx, lam1, "lam1")
    lam2 = _scalar(ctx, lam2, "lam2")
    if len(U1) * len(U2) > BRUTEFORCE_MAX_WORK:
        raise TooLarge(f"brute force needs |U1||U2| <= {BRUTEFORCE_MAX_WORK}")
    p = ctx.p
    count = 0
    for u1, v1, w1, u2, v2, w2 in product(U1, U1, U1, U2, U2, U2):
        den1 = (u1 - lam1 * w1) % p
        den2 = (u2 - lam2 * w2) % p
        if den1 == 0 or den2 == 0:
            continue
        left = (u1 - lam1 * v1) * pow(den1, p - 2, p) % p
        right = (u2 - lam2 * v2) * pow(den2, p - 2, p) % p
        count += left == right
    return count


@dataclass(frozen=True)
class TripleCountReport:
    p: int
    order: int
    lam: int
    T: int
    main_term: float
    deviation: float
    regime: str
    regime_bound: float
    ratio: float


def triple_deviation_report(ctx: FieldContext, G: Subgroup, lam: int) -> TripleCountReport:
    """``T_lam(G) = T_{1,lam}(G, G)`` set against the three-regime deviation bound."""
    n = len(G)
    if n > TRIPLES_MAX_SIZE:
        raise TooLarge(f"triple reports support |G| <= {TRIPLES_MAX_SIZE}")
    lam = _scalar(ctx, lam, "lambda")
    T = collinear_triples(ctx, G, G, 1, lam)
    main = Fraction(n**6, ctx.p)
    deviation = float(abs(T - main))
    bound, regime = triple_count_bound(ctx.p, n)
    return TripleCountReport(
        p=ctx.p,
        order=n,
        lam=lam,
        T=T,
        main_term=float(main),
        deviation=deviation,
        regime=regime,
        regime_bound=bound,
        ratio=deviation / bound,
    )
