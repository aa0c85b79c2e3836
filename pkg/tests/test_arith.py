import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specrecip.arith import (check_sumXiF, check_sumXiXiF, divisor_eigenvalue, euler_phi,
                             gl3_from_rank1, hecke_relation_deviation, kloosterman,
                             kloosterman_direct, kloosterman_table, mobius, num_divisors,
                             phi_hurwitz, random_coefficients, ramanujan_direct, ramanujan_sum,
                             units, voronoi_functional_equation_gap, weil_bound)
from specrecip.errors import DomainError, ParameterError

ints = st.integers(min_value=1, max_value=60)


def brute_kloosterman(m, n, c):
    return sum(np.exp(2j * np.pi * (m * d + n * pow(d, -1, c)) / c)
               for d in range(1, c + 1) if math.gcd(d, c) == 1) if c > 1 else 1.0


@given(ints, ints, st.integers(min_value=1, max_value=80))
@settings(max_examples=150, deadline=None)
def test_kloosterman_real_and_matches_brute_force(m, n, c):
    ref = brute_kloosterman(m, n, c)
    assert abs(kloosterman(m, n, c) - ref) < 1e-9
    assert abs(kloosterman_direct(m, n, c) - ref) < 1e-9


@given(ints, ints, st.integers(min_value=1, max_value=120))
@settings(max_examples=150, deadline=None)
def test_kloosterman_symmetries_and_weil(m, n, c):
    s = kloosterman(m, n, c)
    assert abs(s - kloosterman(n, m, c)) < 1e-9
    assert abs(s - kloosterman(m + c, n, c)) < 1e-9
    assert abs(s) <= weil_bound(m, n, c) * (1 + 1e-12)


def test_kloosterman_twisted_multiplicativity():
    for c1, c2 in [(3, 4), (5, 7), (8, 9), (11, 2)]:
        for m, n in [(1, 1), (2, 5), (6, 3)]:
            c = c1 * c2
            lhs = kloosterman(m, n, c)
            i1, i2 = pow(c2, -1, c1), pow(c1, -1, c2)
            rhs = kloosterman(m * i1, n * i1, c1) * kloosterman(m * i2, n * i2, c2)
            assert abs(lhs - rhs) < 1e-9


def test_kloosterman_table_matches_scalar():
    T = kloosterman_table(6, 7, 15)
    for m in range(1, 7):
        for n in range(1, 8):
            assert abs(T[m - 1, n - 1] - kloosterman(m, n, 15)) < 1e-10


def test_kloosterman_with_zero_is_ramanujan():
    for c in range(1, 40):
        for n in range(1, 30):
            assert abs(kloosterman(0, n, c) - ramanujan_sum(c, n)) < 1e-9


@given(st.integers(min_value=1, max_value=300), st.integers(min_value=1, max_value=300))
@settings(max_examples=200, deadline=None)
def test_ramanujan_exact_vs_direct(c, n):
    assert abs(ramanujan_sum(c, n) - ramanujan_direct(c, n)) < 1e-9


def test_multiplicative_functions_against_brute_force():
    for n in range(1, 200):
        divs = [d for d in range(1, n + 1) if n % d == 0]
        assert num_divisors(n) == len(divs)
        assert euler_phi(n) == sum(1 for d in range(1, n + 1) if math.gcd(d, n) == 1)
        assert len(units(n)) == euler_phi(n)
        assert sum(mobius(d) for d in divs) == (1 if n == 1 else 0)


def test_divisor_eigenvalue_brute_force_and_hecke():
    t = 3.7
    for n in range(1, 40):
        ref = sum((a / (n // a)) ** (1j * t) for a in range(1, n + 1) if n % a == 0)
        assert abs(divisor_eigenvalue(n, t) - ref.real) < 1e-12
        assert abs(ref.imag) < 1e-12
    # Hecke relation lambda(m) lambda(n) = sum_{d | (m,n)} lambda(mn/d^2)
    for m, n in [(2, 4), (6, 9), (12, 8)]:
        rhs = sum(divisor_eigenvalue(m * n // d ** 2, t) for d in range(1, math.gcd(m, n) + 1)
                  if m % d == 0 and n % d == 0)
        assert abs(divisor_eigenvalue(m, t) * divisor_eigenvalue(n, t) - rhs) < 1e-10


@pytest.mark.parametrize("ell", [1, 2, 6, 12])
def test_sum_xif_identity(ell):
    co = random_coefficients(12, 24, seed=ell)
    for w in (0.3 + 2j, 1.7 - 4j):
        for sign in (1, -1):
            assert check_sumXiF(ell, w, sign, co)["max_rel_deviation"] < 1e-10


def test_sum_xif_printed_statement_differs():
    co = random_coefficients(12, 24, seed=1)
    r = check_sumXiF(6, 0.3 + 2j, 1, co, statement="printed")
    assert r["max_rel_deviation"] > 1e-3


def test_sum_xif_rejects_small_table_and_bad_statement():
    co = random_coefficients(4, 4, seed=0)
    with pytest.raises(DomainError):
        check_sumXiF(12, 0.5, 1, co, n2_max=4)
    with pytest.raises(ParameterError):
        check_sumXiF(2, 0.5, 1, random_coefficients(12, 24, seed=0), statement="other")


@pytest.mark.parametrize("ell", [1, 4, 6, 9])
def test_sum_xixif_identity(ell):
    co = random_coefficients(10, 16, seed=ell)
    r = check_sumXiXiF(ell, 0.4 + 1j, -0.2 + 3j, (1, -1), co)
    assert r["max_rel_deviation"] < 1e-10
    assert r["mismatches"] == 0


def test_gl3_rank1_coefficients_satisfy_hecke_relation():
    rng = np.random.default_rng(3)
    a1n = np.concatenate([[1], rng.normal(size=30)])
    an1 = np.concatenate([[1], rng.normal(size=30)])
    co = gl3_from_rank1(a1n, an1)
    assert hecke_relation_deviation(co) < 1e-10


def test_gl1_voronoi_functional_equation():
    for c, d in [(1, 0), (5, 2), (7, 3)]:
        for w in (0.3 + 2j, -0.5 + 1j):
            assert voronoi_functional_equation_gap(c, d, w) < 1e-9 * max(1.0, abs(phi_hurwitz(c, d, w)))
