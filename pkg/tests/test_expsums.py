"""Exponential sums: scalar oracles, exact symmetries, and the Weil grid."""

import cmath
import math

import numpy as np
import pytest

from kloosterlab.errors import CapacityError, CoverageError
from kloosterlab.expsums import (
    ExpSumQuery,
    inverse_phase_sum,
    kloosterman,
    kloosterman_grid,
    max_prime_sum,
    prime_sum,
    short_inverse_sum,
    weil_ratio,
)


def _oracle_sum(ns, a, q, weights=None):
    """Term-by-term reference with cmath, no tables, no vectorization."""
    total = 0j
    for i, n in enumerate(ns):
        if math.gcd(n, q) != 1:
            continue
        w = 1.0 if weights is None else weights[i]
        total += w * cmath.exp(2j * math.pi * a * pow(n, -1, q) / q)
    return total


def test_inverse_phase_sum_against_oracle():
    for q in (2, 3, 7, 12, 97):
        for a in (0, 1, 3, q - 1):
            ns = list(range(1, 60))
            got = inverse_phase_sum(ns, a, q)
            want = _oracle_sum(ns, a, q)
            assert abs(got.value - want) < 1e-12
            assert got.term_count == sum(1 for n in ns if math.gcd(n, q) == 1)


def test_weights_and_error_bound():
    ns = [2, 3, 4, 5, 6]
    w = [0.5, 1.0, 2.0, 0.25, 3.0]
    got = inverse_phase_sum(ns, 1, 7, weights=w)
    want = _oracle_sum(ns, 1, 7, w)
    assert abs(got.value - want) < 1e-12
    assert got.magnitude <= got.weight_sum + got.accumulation_error_bound
    assert got.accumulation_error_bound < 1e-12


def test_zero_twist_counts_units_exactly():
    ns = list(range(1, 500))
    got = inverse_phase_sum(ns, 0, 12)
    # every phase is e(0) = 1, so the sum is exactly the unit count
    assert got.value == complex(got.term_count)


def test_batch_and_single_inversion_bitwise_equal():
    q = ExpSumQuery(a=3, q=23, x=50)
    fast = prime_sum(q, use_batch=True)
    slow = prime_sum(q, use_batch=False)
    assert fast.value == slow.value
    assert fast.term_count == slow.term_count


def test_conjugate_twist_is_exact_conjugate():
    for (a, q, x) in [(1, 7, 10), (2, 9, 25), (5, 31, 100)]:
        plus = prime_sum(ExpSumQuery(a=a, q=q, x=x))
        minus = prime_sum(ExpSumQuery(a=q - a, q=q, x=x))
        # bitwise, thanks to the mirrored unit-root table
        assert minus.value == plus.value.conjugate()


def test_prime_sum_oracle_small_window(prime_table):
    query = ExpSumQuery(a=1, q=7, x=10)
    got = prime_sum(query)
    want = _oracle_sum([11, 13, 17, 19], 1, 7)
    assert abs(got.value - want) < 1e-12
    assert got.term_count == 4


def test_von_mangoldt_weight_includes_prime_powers(tables):
    query = ExpSumQuery(a=1, q=5, x=8)
    got = prime_sum(query, weight="von_mangoldt", tables=tables)
    # window [8, 16): 8 = 2^3, 9 = 3^2, 11, 13 contribute log 2, log 3, log 11, log 13
    ns = [8, 9, 11, 13]
    ws = [math.log(2), math.log(3), math.log(11), math.log(13)]
    want = _oracle_sum(ns, 1, 5, ws)
    assert abs(got.value - want) < 1e-12
    assert got.term_count == 4


def test_prime_sum_rejects_unknown_weight():
    with pytest.raises(ValueError):
        prime_sum(ExpSumQuery(a=1, q=5, x=10), weight="log")


def test_prime_sum_coverage_error():
    from kloosterlab.arith import build_multiplicative_tables

    tiny = build_multiplicative_tables(100)
    with pytest.raises(CoverageError):
        prime_sum(ExpSumQuery(a=1, q=5, x=90), tables=tiny)


@pytest.mark.parametrize("q", [5, 8, 12, 13, 30, 47])
def test_max_prime_sum_against_full_scan(q, prime_table):
    x = 30.0
    a_star, mag = max_prime_sum(q, x, table=prime_table)
    assert 1 <= a_star <= q // 2
    assert math.gcd(a_star, q) == 1
    mags = {
        a: prime_sum(ExpSumQuery(a=a, q=q, x=x), tables=None, use_batch=True).magnitude
        for a in range(1, q)
        if math.gcd(a, q) == 1
    }
    best = max(mags.values())
    assert mag == pytest.approx(best, abs=1e-9)
    assert mags[a_star] == pytest.approx(best, abs=1e-9)


def test_max_prime_sum_capacity():
    with pytest.raises(CapacityError):
        max_prime_sum(10 ** 6 + 1, 100.0)
    with pytest.raises(CapacityError):
        max_prime_sum(5000, 100.0, scan_limit=100)


def test_kloosterman_known_value():
    # K(1, 1; 5) = 2 + 2 cos(4 pi / 5) = (3 - sqrt 5) / 2
    assert kloosterman(1, 1, 5) == pytest.approx((3 - math.sqrt(5)) / 2, abs=1e-12)
    # K(a, 0; q) is a Ramanujan sum; at q prime and a unit it is -1
    assert kloosterman(1, 0, 7) == pytest.approx(-1.0, abs=1e-12)


def test_kloosterman_symmetry():
    for q in (5, 7, 11, 13):
        for a in (1, 2, 3):
            for b in (1, 2):
                assert kloosterman(a, b, q) == pytest.approx(kloosterman(b, a, q), abs=1e-9)


def test_kloosterman_grid_matches_scalar():
    for q in (5, 7, 12, 15):
        grid = kloosterman_grid(q)
        assert np.abs(grid.imag).max() < 1e-9
        for a in range(q):
            for b in range(q):
                assert grid[a, b].real == pytest.approx(kloosterman(a, b, q), abs=1e-9)


def test_weil_bound_on_prime_sample(prime_table):
    for p in (101, 211, 499):
        grid = kloosterman_grid(p)
        mags = np.abs(grid[1:, 1:])
        assert mags.max() <= 2 * math.sqrt(p) + 1e-6


def test_short_sum_full_period_is_ramanujan(tables):
    # over a full period the inverse substitution is a bijection on units,
    # so the sum collapses to the Ramanujan sum c_q(1) = mobius(q)
    for q in (5, 6, 9, 12, 30, 97):
        got = short_inverse_sum(1, q, 0, q)
        assert abs(got.value - int(tables.mobius[q])) < 1e-9


def test_short_sum_interval_convention():
    got = short_inverse_sum(1, 7, 2.5, 9.5)
    want = _oracle_sum([3, 4, 5, 6, 8, 9], 1, 7)
    assert abs(got.value - want) < 1e-12


def test_weil_ratio_report(prime_table):
    rep = weil_ratio(1, 101, 0, 50)
    assert rep.lhs == pytest.approx(short_inverse_sum(1, 101, 0, 50).magnitude)
    assert set(rep.rhs_terms) == {"gcd(a,q)*((Z-Y)/q+1)", "sqrt(q)"}
    assert rep.ratio == pytest.approx(rep.lhs / rep.rhs_total)
    assert rep.trivial_bound == 50.0


def test_weil_ratio_envelope(prime_table):
    # recorded envelope: the measured worst ratio over this grid is ~1.27
    worst = 0.0
    for p in [int(v) for v in prime_table.primes if 101 <= v <= 1999]:
        for a in (1, 7):
            for lo, hi in [(0, p / 3), (p / 4, p / 2), (0, 2 * p / 3)]:
                worst = max(worst, weil_ratio(a, p, lo, hi).ratio)
    assert worst <= 1.5
