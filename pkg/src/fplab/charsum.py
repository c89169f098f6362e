"""Additive and multiplicative characters and sparse exponential sums.

The central object is

    S_chi(Psi) = sum_{x in F_p^*} chi(x) e_p(Psi(x)),    e_p(u) = exp(2 pi i u / p),

for a sparse polynomial ``Psi(X) = sum a_i X^{k_i}`` and the character
``chi_j(x) = exp(2 pi i j dlog(x) / (p-1))``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import gcd, pi

import numpy as np

from . import kernels
from .errors import (
    InvalidPolynomial,
    NotATrinomial,
    OutOfRange,
    TooLarge,
    ZeroArgument,
    ZeroCoefficient,
)
from .field import FieldContext, Subgroup, as_elements, dlog, dlog_array, subgroup
from .kernels._np import powmod

SUM_LIMIT = 10**8
DECOMPOSED_WORK_LIMIT = 2 * 10**9
TRILINEAR_WORK_LIMIT = 10**9


@dataclass(frozen=True)
class SparsePoly:
    """``Psi(X) = sum a_i X^{k_i}`` as a tuple of ``(a_i, k_i)`` pairs.

    Exponents are positive and pairwise distinct as integers; they may be as
    large as ``2**63 - 1`` and are only reduced mod ``p-1`` at evaluation.
    """

    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        terms = tuple((int(a), int(k)) for a, k in self.terms)
        if not terms:
            raise InvalidPolynomial("a sparse polynomial needs at least one term")
        exps = [k for _, k in terms]
        if any(k < 1 for k in exps):
            raise InvalidPolynomial("exponents must be positive")
        if len(set(exps)) != len(exps):
            raise InvalidPolynomial("exponents must be pairwise distinct")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def parse(cls, text: str) -> "SparsePoly":
        """Parse ``"a,k;b,l;c,m"`` (decimal integers)."""
        terms = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            parts = chunk.split(",")
            if len(parts) != 2:
                raise InvalidPolynomial(f"bad term {chunk!r}; expected 'coefficient,exponent'")
            try:
                terms.append((int(parts[0]), int(parts[1])))
            except ValueError as exc:
                raise InvalidPolynomial(f"bad term {chunk!r}") from exc
        return cls(tuple(terms))

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def coefficients(self) -> list[int]:
        return [a for a, _ in self.terms]

    @property
    def exponents(self) -> list[int]:
        return [k for _, k in self.terms]

    def reduced(self, ctx: FieldContext) -> tuple[np.ndarray, np.ndarray]:
        """Coefficients mod ``p`` and exponents mod ``p-1``."""
        coeffs = np.array([a % ctx.p for a in self.coefficients], dtype=np.int64)
        if np.any(coeffs == 0):
            raise ZeroCoefficient("a coefficient vanishes mod p")
        exps = np.array([k % (ctx.p - 1) for k in self.exponents], dtype=np.int64)
        return coeffs, exps

    def is_constant_mod(self, ctx: FieldContext) -> bool:
        """True if ``Psi`` is constant on ``F_p^*`` (all reduced terms collapse)."""
        combined: dict[int, int] = {}
        for a, k in self.terms:
            r = k % (ctx.p - 1)
            combined[r] = (combined.get(r, 0) + a) % ctx.p
        return all(r == 0 or c == 0 for r, c in combined.items())


def _check_character(ctx: FieldContext, j: int) -> int:
    j = int(j)
    if not 0 <= j <= ctx.p - 2:
        raise OutOfRange(f"character index {j} outside [0, {ctx.p - 2}]")
    return j


def additive_char(ctx: FieldContext, u: int) -> complex:
    """``e_p(u)`` for a pre-reduced residue ``u``."""
    u = int(u)
    if not 0 <= u < ctx.p:
        raise OutOfRange(f"{u} is not reduced mod {ctx.p}")
    return cmath.exp(2j * pi * u / ctx.p)


def mult_char(ctx: FieldContext, j: int, x: int) -> complex:
    """``chi_j(x)``; the principal character returns exactly 1."""
    j = _check_character(ctx, j)
    if int(x) % ctx.p == 0:
        raise ZeroArgument("characters are defined on F_p^* only")
    r = j * dlog(ctx, x) % (ctx.p - 1)
    if r == 0:
        return 1 + 0j
    return cmath.exp(2j * pi * r / (ctx.p - 1))


def eval_sparse_sum(ctx: FieldContext, poly: SparsePoly, j: int) -> complex:
    """Direct evaluation of ``S_chi_j(Psi)`` with compensated accumulation.

    Runs over ``x = g**t`` so that ``x**k = g**(t*k mod p-1)`` is a table
    lookup and ``chi_j(x) = e(j*t/(p-1))`` needs no discrete log.
    """
    j = _check_character(ctx, j)
    if ctx.p > SUM_LIMIT:
        raise TooLarge(f"direct summation is capped at p <= {SUM_LIMIT}")
    coeffs, exps = poly.reduced(ctx)
    return kernels.sparse_sum(ctx.power_table, coeffs, exps, j, ctx.p)


def eval_sum_subgroup_decomposed(ctx: FieldContext, poly: SparsePoly, j: int) -> complex:
    """``S_chi(Psi)`` for a trinomial via averaging over two subgroups.

    With ``d = gcd(k, p-1)``, ``e = gcd(l, p-1)`` and ``G_d``, ``G_e`` the
    subgroups of those orders,

        S = 1/(de) sum_x sum_{y in G_d} sum_{z in G_e}
                chi(x) chi(y) chi(z) e_p(a x^k z^k + b x^l y^l + c x^m y^m z^m),

    using ``y^k = 1`` and ``z^l = 1``. Powers are taken by modular
    exponentiation on element values, independent of the power table used by
    :func:`eval_sparse_sum`.
    """
    if len(poly) != 3:
        raise NotATrinomial(f"expected 3 terms, got {len(poly)}")
    j = _check_character(ctx, j)
    p, n = ctx.p, ctx.p - 1
    coeffs, _ = poly.reduced(ctx)
    (a, b, c), (k, l, m) = coeffs.tolist(), [e % n for e in poly.exponents]
    d = gcd(poly.exponents[0], n)
    e = gcd(poly.exponents[1], n)
    if n * d * e > DECOMPOSED_WORK_LIMIT:
        raise TooLarge(f"(p-1)*d*e = {n * d * e} exceeds {DECOMPOSED_WORK_LIMIT}")

    xs = np.arange(1, p, dtype=np.int64)
    Gd = subgroup(ctx, d).elements
    Ge = subgroup(ctx, e).elements
    total = kernels.decomposed_sum(
        powmod(xs, k, p), powmod(xs, l, p), powmod(xs, m, p), dlog_array(ctx, xs),
        powmod(Gd, l, p), powmod(Gd, m, p), dlog_array(ctx, Gd),
        powmod(Ge, k, p), powmod(Ge, m, p), dlog_array(ctx, Ge),
        a, b, c, j, p,
    )
    return total / (d * e)


@dataclass(frozen=True)
class WeightTable:
    """Weights ``rho[u,v]``, ``sigma[u,w]``, ``tau[v,w]`` of modulus at most 1.

    Rows and columns follow the ascending element order of the subgroups.
    """

    rho: np.ndarray
    sigma: np.ndarray
    tau: np.ndarray

    @classmethod
    def ones(cls, nF: int, nG: int, nH: int) -> "WeightTable":
        return cls(
            np.ones((nF, nG), dtype=np.complex128),
            np.ones((nF, nH), dtype=np.complex128),
            np.ones((nG, nH), dtype=np.complex128),
        )

    def validate(self, nF: int, nG: int, nH: int) -> None:
        shapes = {"rho": (nF, nG), "sigma": (nF, nH), "tau": (nG, nH)}
        for name, shape in shapes.items():
            arr = np.asarray(getattr(self, name))
            if arr.shape != shape:
                raise ValueError(f"{name} has shape {arr.shape}, expected {shape}")
            if arr.size and np.max(np.abs(arr)) > 1 + 1e-12:
                raise ValueError(f"{name} has an entry of modulus > 1")


def eval_trilinear(
    ctx: FieldContext,
    F: Subgroup,
    G: Subgroup,
    H: Subgroup,
    a: int,
    w: WeightTable,
) -> complex:
    """``sum_{u,v,w} rho[u,v] sigma[u,w] tau[v,w] e_p(a u v w)`` by direct triple loop."""
    if int(a) % ctx.p == 0:
        raise ZeroCoefficient("the trilinear sum needs a nonzero coefficient")
    Fe, Ge, He = (as_elements(ctx, S) for S in (F, G, H))
    work = Fe.size * Ge.size * He.size
    if work > TRILINEAR_WORK_LIMIT:
        raise TooLarge(f"|F||G||H| = {work} exceeds {TRILINEAR_WORK_LIMIT}")
    w.validate(Fe.size, Ge.size, He.size)
    return kernels.trilinear_sum(Fe, Ge, He, int(a) % ctx.p, w.rho, w.sigma, w.tau, ctx.p)
