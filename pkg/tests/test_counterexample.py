"""Coordinate-family divergence: exact arithmetic, MC cross-check, control case."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stablelab import (
    CounterexampleRow,
    DomainError,
    counterexample_exact,
    counterexample_mc,
    divergence_table,
    rademacher_complexity_exact,
    sphere_family_case,
)


def test_exact_reference_dimensions():
    # the published schedule: lhs n/2, bound n^(1/p), quotient at n=64 exact
    rows = divergence_table([4, 16, 64, 256], 1.5)
    assert [r.lhs for r in rows] == [2.0, 8.0, 32.0, 128.0]
    for r, n in zip(rows, (4, 16, 64, 256)):
        assert r.rhs_bound == pytest.approx(n ** (2.0 / 3.0), rel=1e-14)
    assert rows[2].rhs_bound == 16.0
    assert rows[2].ratio == 2.0          # bit-exact, not approximately
    ratios = [r.ratio for r in rows]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert all(r.divergent for r in rows)


def test_exact_p_one_boundary():
    rows = divergence_table([4, 16, 64, 256], 1.0)
    assert all(r.ratio == 0.5 for r in rows)
    assert not any(r.divergent for r in rows)


def test_counterexample_exact_rejects_p_one():
    # the single-row helper is for the divergent regime only
    with pytest.raises(DomainError):
        counterexample_exact(4, 1.0)
    with pytest.raises(DomainError):
        counterexample_exact(4, 2.5)
    with pytest.raises(DomainError):
        counterexample_exact(0, 1.5)


def test_row_validation():
    with pytest.raises(DomainError):
        CounterexampleRow(n=0, p=1.5, lhs=0.0, rhs_bound=1.0, ratio=0.0)
    with pytest.raises(DomainError):
        CounterexampleRow(n=1, p=0.5, lhs=0.5, rhs_bound=1.0, ratio=0.5)


@settings(max_examples=60)
@given(st.integers(1, 10 ** 6), st.integers(2, 10 ** 6),
       st.floats(1.01, 2.0))
def test_ratio_strictly_grows(n1, n2, p):
    if n1 == n2:
        return
    lo, hi = sorted((n1, n2))
    a = counterexample_exact(lo, p)
    b = counterexample_exact(hi, p)
    assert b.ratio > a.ratio


def test_power_of_two_roots_are_exact():
    assert counterexample_exact(64, 1.5).rhs_bound == 16.0
    assert counterexample_exact(4096, 1.5).rhs_bound == 256.0
    assert counterexample_exact(16, 2.0).rhs_bound == 4.0


def test_mc_confirms_exact_lhs():
    row, est = counterexample_mc(16, 1.5, 30000, seed=8)
    assert row == counterexample_exact(16, 1.5)
    assert est.trials == 30000
    assert est.stderr > 0.0
    assert abs(est.estimate - row.lhs) < 4.0 * est.stderr


def test_mc_needs_enough_trials():
    with pytest.raises(DomainError):
        counterexample_mc(4, 1.5, 1, seed=1)


def test_sphere_family_exact_zero():
    for n in (1, 10, 100):
        lhs, rhs = sphere_family_case(n)
        assert lhs == 0.0               # exact integer cancellation
        assert rhs == float(n)


def test_sphere_family_matches_enumeration():
    # direct 2^n enumeration of the same functional for small n
    for n in (1, 5, 12):
        lhs, _ = sphere_family_case(n)
        brute = rademacher_complexity_exact(np.ones((n, 1)))
        assert lhs == brute == 0.0


def test_divergence_table_domain():
    with pytest.raises(DomainError):
        divergence_table([], 1.5)
    with pytest.raises(DomainError):
        divergence_table([4], 0.9)
    with pytest.raises(DomainError):
        divergence_table([0], 1.5)
