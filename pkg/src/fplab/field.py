"""Prime-field arithmetic: contexts, discrete logs, subgroups and element sets.

Residues are stored as ``int64`` values in ``[0, p-1]``. Because ``p < 2**31``
every product of two residues stays below ``2**62`` and fits in a signed
64-bit word, so plain numpy integer arithmetic is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import isqrt
from typing import Iterable, Union

import numpy as np

from .errors import (
    CompositeModulus,
    EvenModulus,
    NotADivisor,
    TooLarge,
    ZeroArgument,
    ZeroDilation,
)

MAX_MODULUS = 2**31
DLOG_TABLE_LIMIT = 10**7


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation by trial division (instant for n < 2**31)."""
    factors: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            factors[q] = factors.get(q, 0) + 1
            n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def divisors(n: int) -> list[int]:
    divs = [1]
    for q, e in factorize(n).items():
        divs = [d * q**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def primes_below(n: int) -> np.ndarray:
    """All primes strictly less than ``n`` (sieve of Eratosthenes)."""
    if n <= 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n, dtype=bool)
    flags[:2] = False
    for q in range(2, isqrt(n - 1) + 1):
        if flags[q]:
            flags[q * q :: q] = False
    return np.flatnonzero(flags).astype(np.int64)


def _power_table(g: int, p: int) -> np.ndarray:
    """``table[t] = g**t mod p`` for ``t`` in ``[0, p-2]``, built by doubling."""
    n = p - 1
    table = np.empty(n, dtype=np.int64)
    table[0] = 1
    filled = 1
    while filled < n:
        take = min(filled, n - filled)
        step = pow(g, filled, p)
        np.multiply(table[:take], step, out=table[filled : filled + take])
        table[filled : filled + take] %= p
        filled += take
    table.setflags(write=False)
    return table


def _smallest_primitive_root(p: int, prime_factors: Iterable[int]) -> int:
    exps = [(p - 1) // q for q in prime_factors]
    for g in range(2, p):
        if all(pow(g, e, p) != 1 for e in exps):
            return g
    # p = 3 falls through only if the loop range is empty, which cannot happen
    raise AssertionError("no primitive root found")


@dataclass(frozen=True, eq=False)
class FieldContext:
    """An odd prime ``p`` together with a primitive root and lookup tables.

    ``dlog_table[x]`` is the index of ``x`` to base ``primitive_root``
    (``dlog_table[0] == -1``). It is present when ``p <= 10**7``; above that
    discrete logs fall back to baby-step giant-step.
    """

    p: int
    primitive_root: int
    dlog_table: np.ndarray | None = field(default=None, repr=False)

    @cached_property
    def order_factors(self) -> dict[int, int]:
        return factorize(self.p - 1)

    @cached_property
    def power_table(self) -> np.ndarray:
        """``power_table[t] = primitive_root**t mod p`` for ``t < p-1``."""
        return _power_table(self.primitive_root, self.p)

    @cached_property
    def _bsgs_baby_steps(self) -> tuple[int, dict[int, int], int]:
        m = isqrt(self.p - 1) + 1
        baby: dict[int, int] = {}
        x = 1
        for j in range(m):
            baby.setdefault(x, j)
            x = x * self.primitive_root % self.p
        giant = pow(self.primitive_root, -m, self.p)
        return m, baby, giant

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, primitive_root={self.primitive_root})"


def make_field(p: int) -> FieldContext:
    """Validate ``p`` and build its context with the smallest primitive root."""
    p = int(p)
    if p == 2:
        raise EvenModulus("p = 2 is excluded; an odd prime is required")
    if p >= MAX_MODULUS:
        raise TooLarge(f"p = {p} exceeds the 2**31 desk-scale cap")
    if not is_prime(p):
        raise CompositeModulus(f"{p} is not prime")
    factors = factorize(p - 1)
    g = _smallest_primitive_root(p, factors)
    table = None
    ctx = FieldContext(p, g, None)
    if p <= DLOG_TABLE_LIMIT:
        powers = ctx.power_table
        table = np.full(p, -1, dtype=np.int64)
        table[powers] = np.arange(p - 1, dtype=np.int64)
        table.setflags(write=False)
        object.__setattr__(ctx, "dlog_table", table)
    ctx.__dict__["order_factors"] = factors
    return ctx


def dlog(ctx: FieldContext, x: int) -> int:
    """Index of ``x`` to base ``ctx.primitive_root``, in ``[0, p-2]``."""
    x = int(x) % ctx.p
    if x == 0:
        raise ZeroArgument("discrete log of 0 is undefined")
    if ctx.dlog_table is not None:
        return int(ctx.dlog_table[x])
    m, baby, giant = ctx._bsgs_baby_steps
    y = x
    for i in range(m + 1):
        j = baby.get(y)
        if j is not None:
            return (i * m + j) % (ctx.p - 1)
        y = y * giant % ctx.p
    raise AssertionError("baby-step giant-step failed; primitive root invalid")


def dlog_array(ctx: FieldContext, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.int64)
    if np.any(xs % ctx.p == 0):
        raise ZeroArgument("discrete log of 0 is undefined")
    if ctx.dlog_table is not None:
        return ctx.dlog_table[xs % ctx.p]
    return np.array([dlog(ctx, int(x)) for x in xs], dtype=np.int64)


def multiplicative_order(ctx: FieldContext, g: int) -> int:
    """Smallest ``t >= 1`` with ``g**t == 1 (mod p)``."""
    g = int(g) % ctx.p
    if g == 0:
        raise ZeroArgument("0 has no multiplicative order")
    t = ctx.p - 1
    for q in ctx.order_factors:
        while t % q == 0 and pow(g, t // q, ctx.p) == 1:
            t //= q
    return t


@dataclass(frozen=True, eq=False)
class Subgroup:
    """The unique subgroup of ``F_p^*`` of a given order, elements ascending."""

    order: int
    generator: int
    elements: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.elements.tolist())

    def __contains__(self, x) -> bool:
        i = np.searchsorted(self.elements, x)
        return bool(i < self.order and self.elements[i] == x)


def subgroup(ctx: FieldContext, d: int) -> Subgroup:
    d = int(d)
    if d < 1 or (ctx.p - 1) % d:
        raise NotADivisor(f"{d} does not divide p-1 = {ctx.p - 1}")
    step = (ctx.p - 1) // d
    gen = pow(ctx.primitive_root, step, ctx.p)
    if ctx.p - 1 <= DLOG_TABLE_LIMIT or "power_table" in ctx.__dict__:
        elems = np.sort(ctx.power_table[::step])
    else:
        elems = np.empty(d, dtype=np.int64)
        x = 1
        for i in range(d):
            elems[i] = x
            x = x * gen % ctx.p
        elems.sort()
    elems.setflags(write=False)
    return Subgroup(d, gen, elems)


ElementSet = Union[Subgroup, Iterable[int], np.ndarray]


def as_elements(ctx: FieldContext, U: ElementSet) -> np.ndarray:
    """Normalise any element collection to a sorted, duplicate-free int64 array."""
    if isinstance(U, Subgroup):
        return U.elements
    arr = np.asarray(list(U) if not isinstance(U, np.ndarray) else U, dtype=np.int64)
    return np.unique(arr % ctx.p)


def translate_set(ctx: FieldContext, U: ElementSet, lam: int) -> np.ndarray:
    """``{u + lam : u in U}``."""
    return np.sort((as_elements(ctx, U) + int(lam) % ctx.p) % ctx.p)


def dilate_set(ctx: FieldContext, U: ElementSet, lam: int) -> np.ndarray:
    """``{lam * u : u in U}`` for nonzero ``lam``."""
    lam = int(lam) % ctx.p
    if lam == 0:
        raise ZeroDilation("dilation by 0 is not a bijection")
    return np.sort(as_elements(ctx, U) * lam % ctx.p)


def inverse(ctx: FieldContext, x: int) -> int:
    x = int(x) % ctx.p
    if x == 0:
        raise ZeroArgument("0 has no inverse")
    return pow(x, ctx.p - 2, ctx.p)
