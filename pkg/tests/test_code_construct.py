#!/usr/bin/env python3
"""
Tests for the brute-force construction of C_D and its weight statistics.
"""

import os
import sys

import numpy as np
import pytest

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils.code_construct import (
    InjectivityError,
    WeightDistribution,
    build_defining_set,
    code_params,
    codeword_weight,
    cwe_bruteforce,
    griesmer_bound,
    griesmer_classify,
    n_rho,
    n_rho_direct,
    pless_checks,
    profile_table,
    symbol_count_table,
    trace_profile,
    trace_value_counts,
    weight_count,
    weight_distribution,
)
from utils.finite_field import CodeSpec, field

F9 = field(3, 2)
F81 = field(3, 4)

EXAMPLE1_CWE = {
    (12, 0, 0): 1,
    (0, 12, 0): 1,
    (0, 0, 12): 1,
    (4, 4, 4): 54,
    (3, 3, 6): 4,
    (3, 6, 3): 4,
    (0, 6, 6): 4,
    (6, 3, 3): 4,
    (6, 6, 0): 4,
    (6, 0, 6): 4,
}


def test_defining_set_sizes():
    ds = build_defining_set(F9, 1)
    assert (len(ds.d1), len(ds.d2), ds.n) == (4, 3, 12)
    ds = build_defining_set(F81, 1)
    assert ds.n == 972
    ds = build_defining_set(F81, 2)
    assert ds.n == 810


def test_defining_set_rejects_bad_l():
    with pytest.raises(ValueError):
        build_defining_set(F9, 0)


def test_trace_value_counts():
    assert trace_value_counts(F9, 1) == {0: 1, 1: 4, 2: 4}
    counts = trace_value_counts(F81, 1)
    assert sum(counts.values()) == 81
    assert counts[1] == counts[2] == 36


def test_trace_profile_and_table_agree():
    ds = build_defining_set(F9, 1)
    table = profile_table(F9, ds.d1)
    for a in F9.elements():
        assert list(trace_profile(F9, a, ds.d1)) == list(table[a.index])
    assert list(trace_profile(F9, F9.zero, ds.d1)) == [4, 0, 0]


def test_convolution_matches_direct_count():
    ds = build_defining_set(F9, 1)
    table = symbol_count_table(ds)
    for a in F9.elements():
        for b in F9.elements():
            counts = n_rho(ds, a, b)
            assert counts == n_rho_direct(ds, a, b)
            assert list(table[a.index, b.index]) == list(counts.counts)
            assert counts.n == 12


def test_zero_codeword_and_weight():
    ds = build_defining_set(F9, 1)
    zero = n_rho(ds, F9.zero, F9.zero)
    assert zero.counts == (12, 0, 0)
    assert codeword_weight(zero) == 0
    # b = 1, a = 0 is the constant word 1
    assert n_rho(ds, F9.zero, F9.one).counts == (0, 12, 0)


def test_example1_cwe():
    cwe = cwe_bruteforce(F9, 1)
    assert cwe.terms == EXAMPLE1_CWE
    assert cwe.total == 81
    assert cwe.n == 12


def test_cwe_is_independent_of_worker_count():
    assert cwe_bruteforce(F81, 1, jobs=1).terms == cwe_bruteforce(F81, 1, jobs=4).terms


def test_cwe_is_independent_of_modulus():
    other = field(3, 2, (2, 1, 1))
    assert cwe_bruteforce(other, 1).terms == EXAMPLE1_CWE


def test_example1_parameters():
    cwe = cwe_bruteforce(F9, 1)
    wd = weight_distribution(cwe, 12)
    assert wd.counts == {0: 1, 6: 12, 8: 54, 9: 8, 12: 6}
    assert code_params(wd, 12, 3, 2) == (12, 4, 6)
    assert weight_count(wd) == 4


@pytest.mark.parametrize(
    "l, n, expected",
    [
        (1, 972, {0: 1, 486: 12, 648: 6534, 729: 8, 972: 6}),
        (2, 810, {0: 1, 486: 110, 540: 6318, 567: 100, 648: 30, 810: 2}),
    ],
)
def test_published_distributions_over_f81(l, n, expected):
    wd = weight_distribution(cwe_bruteforce(F81, l), n)
    assert wd.counts == expected
    assert code_params(wd, n, 3, 4) == (n, 8, 486)


def test_injectivity_is_checked():
    with pytest.raises(InjectivityError):
        code_params(WeightDistribution(12, {0: 3, 6: 78}), 12, 3, 2)
    with pytest.raises(InjectivityError):
        code_params(WeightDistribution(12, {0: 1, 6: 12}), 12, 3, 2)


def test_pless_moments_example1():
    spec = CodeSpec(p=3, e=2, l=1)
    wd = WeightDistribution(12, {0: 1, 6: 12, 8: 54, 9: 8, 12: 6})
    report = pless_checks(wd, spec)
    assert report.passed
    assert [c.lhs for c in report.checks] == [80, 648, 5400]


def test_pless_moments_detect_a_wrong_distribution():
    spec = CodeSpec(p=3, e=2, l=1)
    wd = WeightDistribution(12, {0: 1, 6: 13, 8: 53, 9: 8, 12: 6})
    report = pless_checks(wd, spec)
    assert not report.passed
    assert report.checks[0].passed


@pytest.mark.parametrize("l", [1, 2, 3])
def test_pless_moments_over_f81(l):
    spec = CodeSpec(p=3, e=4, l=l)
    ds = build_defining_set(F81, l)
    wd = weight_distribution(cwe_bruteforce(F81, l), ds.n)
    assert pless_checks(wd, spec).passed


def test_griesmer():
    assert griesmer_bound(4, 6, 3) == 10
    assert griesmer_bound(8, 486, 3) == 730
    result = griesmer_classify(12, 4, 6, 3)
    assert result.bound == 10
    assert result.classification == "almost-optimal"
    assert griesmer_classify(4, 2, 3, 3).classification == "optimal"
    assert griesmer_classify(972, 8, 486, 3).classification == "neither"


def test_griesmer_rejects_degenerate_parameters():
    with pytest.raises(ValueError):
        griesmer_classify(12, 0, 6, 3)
    with pytest.raises(ValueError):
        griesmer_classify(12, 4, 0, 3)


def test_symbol_counts_sum_to_length():
    ds = build_defining_set(F81, 2)
    table = symbol_count_table(ds, np.arange(0, 81, 7))
    assert table.shape == (12, 81, 3)
    assert (table.sum(axis=2) == 810).all()
