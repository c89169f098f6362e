import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fplab.bounds import size_regime
from fplab.errors import EmptySet, TooLarge, ZeroArgument, ZeroScalar
from fplab.field import make_field, subgroup
from fplab.incidence import (
    collinear_triples,
    collinear_triples_bruteforce,
    exact_dot,
    iota_cube_sum,
    iota_moments,
    line_histogram,
    ratio_histogram,
    second_moment_closed_form,
    triple_deviation_report,
)

PRIMES = oracles.primes_upto(61)[2:]


@st.composite
def field_and_sets(draw, max_size=8, units=False, primes=PRIMES):
    p = draw(st.sampled_from(primes))
    lo = 1 if units else 0
    A = draw(st.sets(st.integers(lo, p - 1), min_size=1, max_size=min(max_size, p - lo)))
    B = draw(st.sets(st.integers(lo, p - 1), min_size=1, max_size=min(max_size, p - lo)))
    lam = draw(st.integers(1, p - 1))
    mu = draw(st.integers(1, p - 1))
    return p, sorted(A), sorted(B), lam, mu


def test_line_histogram_examples():
    h = line_histogram(make_field(5), [1, 2], [1, 2])
    assert h.total() == 20
    h = line_histogram(make_field(7), [0], [0])
    assert all(h.iota(a, 0) == 1 for a in range(7))
    assert h.total() == 7
    full = line_histogram(make_field(7), range(7), range(7))
    assert np.all(full.counts == 7)
    with pytest.raises(EmptySet):
        line_histogram(make_field(7), [], [1])


@settings(max_examples=60, deadline=None)
@given(field_and_sets())
def test_line_histogram_matches_oracle(case):
    p, A, B, _, _ = case
    h = line_histogram(make_field(p), A, B)
    expected = oracles.line_counts(p, A, B)
    dense = np.zeros((p, p), dtype=np.int64)
    for (a, b), v in expected.items():
        dense[a, b] = v
    assert np.array_equal(h.counts.astype(np.int64), dense)
    assert h.counts[1:].max() <= min(len(A), len(B))
    assert h.counts.max() <= len(A)


def second_moment(p, A, B, lam, mu):
    """Closed form for the second moment with arbitrary nonzero ``lam, mu``.

    A quadruple ``(u, v, x, y)`` pins down ``p`` lines when ``mu u = lam x`` and
    ``mu v = y``, none when only the first holds, and exactly one otherwise.
    """
    alpha = sum(1 for u in A for x in A if (mu * u - lam * x) % p == 0)
    beta = sum(1 for v in B for y in B if (mu * v - y) % p == 0)
    return (len(A) ** 2 - alpha) * len(B) ** 2 + alpha * beta * p


def test_moment_examples():
    m = iota_moments(make_field(5), [1, 2], [1, 2], 1, 1)
    assert (m.m1, m.m1_scaled, m.m2) == (20, 20, 28)
    # (3, 5) lies on exactly one line l_{a,b} whose image l_{2a,3b} also passes through it
    assert iota_moments(make_field(7), [3], [5], 2, 3).m2 == 1
    with pytest.raises(ZeroScalar):
        iota_moments(make_field(7), [3], [5], 7, 3)


@settings(max_examples=80, deadline=None)
@given(field_and_sets(max_size=10))
def test_moment_identities(case):
    p, A, B, lam, mu = case
    nA, nB = len(A), len(B)
    m = iota_moments(make_field(p), A, B, lam, mu)
    assert m.m1 == m.m1_scaled == p * nA * nB
    assert m.m2 == second_moment(p, A, B, lam, mu)
    assert m.m2 == second_moment_closed_form(make_field(p), A, B, lam, mu)
    assert (m.m1, m.m1_scaled, m.m2) == oracles.moments(p, A, B, lam, mu)[:3]


@settings(max_examples=60, deadline=None)
@given(field_and_sets(max_size=10))
def test_second_moment_unit_scalars(case):
    p, A, B, _, _ = case
    nA, nB = len(A), len(B)
    assert iota_moments(make_field(p), A, B, 1, 1).m2 == nA**2 * nB**2 - nA * nB**2 + p * nA * nB


def test_second_moment_dilation_invariant_sets():
    ctx = make_field(61)
    G, H = subgroup(ctx, 6), subgroup(ctx, 10)
    nG, nH = len(G), len(H)
    for lam in G:
        for mu in H:
            if pow(lam * pow(mu, -1, 61), 6, 61) != 1:
                continue
            assert iota_moments(ctx, G, H, lam, mu).m2 == nG**2 * nH**2 - nG * nH**2 + 61 * nG * nH


@settings(max_examples=40, deadline=None)
@given(field_and_sets(max_size=6))
def test_cube_sum_matches_oracle(case):
    p, A, B, lam, mu = case
    assert iota_cube_sum(make_field(p), A, B, lam, mu) == oracles.moments(p, A, B, lam, mu)[3]


def test_cube_sum_examples():
    assert iota_cube_sum(make_field(5), [1], [1], 1, 1) == 5
    with pytest.raises(EmptySet):
        iota_cube_sum(make_field(5), [], [], 1, 1)


def test_cube_sum_close_to_triples(calibration):
    from fplab.calibration import cube_sum_differences

    rows = cube_sum_differences()
    assert max(r[-1] for r in rows) == calibration["cube_sum_constant"]


def test_triples_examples():
    assert collinear_triples(make_field(5), [1], [1], 1, 1) == 0
    assert collinear_triples(make_field(5), [1, 2], [1, 2], 1, 1) == 8
    assert collinear_triples_bruteforce(make_field(5), [1, 2], [1, 2], 1, 1) == 8
    h = ratio_histogram(make_field(5), [1, 2], 1)
    assert {r: int(c) for r, c in enumerate(h) if c} == {0: 2, 1: 2}
    ctx = make_field(7)
    G = subgroup(ctx, 3)
    assert collinear_triples(ctx, G, G, 1, 3) == collinear_triples_bruteforce(ctx, G, G, 1, 3)
    assert collinear_triples(ctx, [1], [1, 2, 3], 2, 1) == collinear_triples_bruteforce(ctx, [1], [1, 2, 3], 2, 1)


def test_triples_preconditions():
    ctx = make_field(7)
    with pytest.raises(ZeroArgument):
        collinear_triples(ctx, [0, 1], [1], 1, 1)
    with pytest.raises(ZeroScalar):
        collinear_triples(ctx, [1], [1], 0, 1)
    with pytest.raises(TooLarge):
        collinear_triples_bruteforce(make_field(101), range(1, 10), range(1, 10), 1, 1)
    with pytest.raises(TooLarge):
        collinear_triples(make_field(4001), range(1, 2002), [1], 1, 1)


@settings(max_examples=80, deadline=None)
@given(field_and_sets(max_size=4, units=True, primes=oracles.primes_upto(31)[2:]))
def test_triples_three_ways(case):
    p, U1, U2, l1, l2 = case
    ctx = make_field(p)
    fast = collinear_triples(ctx, U1, U2, l1, l2)
    assert fast == collinear_triples_bruteforce(ctx, U1, U2, l1, l2)
    assert fast == oracles.collinear_triples(p, U1, U2, l1, l2)
    assert fast == collinear_triples(ctx, U2, U1, l2, l1)
    assert 0 <= fast <= len(U1) ** 3 * len(U2) ** 3


def test_exact_dot_overflow_path():
    h = np.array([2**31, 3, 0], dtype=np.int64)
    assert exact_dot(h, h, 2**64) == 2**62 + 9


def test_report_small_instance():
    ctx = make_field(13)
    G = subgroup(ctx, 3)
    assert G.elements.tolist() == [1, 3, 9]
    r = triple_deviation_report(ctx, G, 1)
    assert r.T == oracles.collinear_triples(13, [1, 3, 9], [1, 3, 9], 1, 1)
    assert r.main_term == 3**6 / 13
    assert math.isfinite(r.ratio)


def test_regime_labels():
    assert size_regime(1009, 144) == "large"
    assert size_regime(1009, 48) == "small"
    assert size_regime(10007, 5000) == "large"
    # below roughly 10**8 the sqrt(p) log p cut sits above p**(2/3), leaving no middle band
    p = 2_147_483_647
    assert size_regime(p, 10**6) == "middle"
    assert size_regime(p, 9 * 10**5) == "small"
    assert size_regime(p, 2 * 10**6) == "large"
