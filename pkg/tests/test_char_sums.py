#!/usr/bin/env python3
"""
Tests for characters, Gauss sums, quadratic-polynomial sums and Weil sums.
"""

import math
import os
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils.char_sums import (
    EXTENSION_FIELD,
    PRIME_FIELD,
    additive_char,
    artin_map,
    eta,
    eta_table,
    gauss_sum,
    homogeneous_kernel_size,
    is_permutation_map,
    quad_poly_char_sum,
    quad_poly_eta_sum,
    quadratic_char,
    solvable_beta_count,
    solve_artin,
    weil_sum,
    weil_sum_closed,
    weil_sum_table,
)
from utils.cyclotomic import CycInt, zeta_pow
from utils.finite_field import field

F9 = field(3, 2)
F25 = field(5, 2)
F81 = field(3, 4)

# a non-square of F_9
H = F9.primitive_element


def test_eta():
    assert [eta(3, v) for v in range(3)] == [0, 1, -1]
    assert [eta(5, v) for v in range(5)] == [0, 1, -1, -1, 1]
    assert eta(5, -1) == 1
    assert eta(7, -1) == -1


def test_quadratic_char_domains():
    assert quadratic_char(PRIME_FIELD, 2, p=3) == -1
    assert quadratic_char(PRIME_FIELD, F9.scalar(2)) == -1
    # every element of F_p is a square in F_{p^2}
    assert quadratic_char(EXTENSION_FIELD, F9.scalar(2)) == 1
    assert quadratic_char(EXTENSION_FIELD, H) == -1
    assert quadratic_char(EXTENSION_FIELD, F9.zero) == 0
    with pytest.raises(ValueError):
        quadratic_char(PRIME_FIELD, H)
    with pytest.raises(ValueError):
        quadratic_char("other", 1, p=3)


def test_additive_char():
    x = F9.element([0, 1])
    assert additive_char(F9, F9.one, F9.one) == zeta_pow(3, 2)
    assert additive_char(F9, F9.one, x) == 1
    assert additive_char(F9, F9.zero, x) == 1


def test_gauss_sum_over_f3():
    gs = gauss_sum(PRIME_FIELD, F9)
    assert gs.value == CycInt(3, (1, 2))
    assert gs.square == -3
    assert gs.closed_form is None
    assert gs.matches


@pytest.mark.parametrize("p", [3, 5, 7])
def test_gauss_sum_square(p):
    gs = gauss_sum(PRIME_FIELD, field(p, 2))
    assert gs.square == eta(p, -1) * p
    assert gs.matches


@pytest.mark.parametrize("p, e, expected", [(3, 2, 3), (3, 4, -9), (5, 2, -5)])
def test_gauss_sum_over_extension(p, e, expected):
    gs = gauss_sum(EXTENSION_FIELD, field(p, e))
    assert gs.closed_form == expected
    assert gs.value == expected
    assert gs.matches


def test_quadratic_polynomial_sums():
    zero = F9.zero
    comparison = quad_poly_char_sum(F9, F9.one, zero, zero)
    assert comparison.brute == 3
    assert comparison.matches
    comparison = quad_poly_char_sum(F9, H, zero, zero)
    assert comparison.brute == -3
    assert comparison.matches


@pytest.mark.parametrize(
    "a2, a0, expected",
    [
        (F9.one, F9.zero, 8),
        (F9.one, F9.one, -1),
        (H, F9.one, 1),
        (H, F9.zero, -8),
    ],
)
def test_quadratic_eta_sums(a2, a0, expected):
    comparison = quad_poly_eta_sum(F9, a2, F9.zero, a0)
    assert comparison.brute == expected
    assert comparison.closed == expected


def test_quadratic_sums_exhaustively_over_f9():
    nonzero = [x for x in F9.elements() if not x.is_zero()]
    for a2 in nonzero:
        for a1 in F9.elements():
            for a0 in F9.elements():
                assert quad_poly_char_sum(F9, a2, a1, a0).matches
                assert quad_poly_eta_sum(F9, a2, a1, a0).matches


@pytest.mark.parametrize("p, e", [(3, 2), (5, 2), (7, 2), (3, 4)])
def test_eta_table_is_a_multiplicative_character(p, e):
    ctx = field(p, e)
    table = eta_table(ctx)
    assert table[0] == 0
    assert np.count_nonzero(table == 1) == (ctx.q - 1) // 2
    assert np.count_nonzero(table == -1) == (ctx.q - 1) // 2
    products = np.outer(table[1:], table[1:])
    assert (products == table[ctx.mul_table[1:, 1:]]).all()


def test_quadratic_sums_need_a_leading_coefficient():
    with pytest.raises(ValueError):
        quad_poly_char_sum(F9, F9.zero, F9.one, F9.one)
    with pytest.raises(ValueError):
        quad_poly_eta_sum(F9, F9.zero, F9.one, F9.one)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=24),
    st.integers(min_value=0, max_value=24),
    st.integers(min_value=0, max_value=24),
)
def test_quadratic_sums_over_f25(a2, a1, a0):
    a2, a1, a0 = F25.from_index(a2), F25.from_index(a1), F25.from_index(a0)
    assert quad_poly_char_sum(F25, a2, a1, a0).matches
    assert quad_poly_eta_sum(F25, a2, a1, a0).matches


def test_known_weil_sums():
    x = F9.element([0, 1])
    assert weil_sum(F9, 1, F9.one, F9.zero) == -3
    assert weil_sum(F9, 1, F9.one, F9.one) == zeta_pow(3, 1).scale(-3)
    assert weil_sum(F9, 1, x, F9.zero) == 9
    assert weil_sum(F81, 1, F81.one, F81.zero) == -27
    assert weil_sum(F9, 1, F9.zero, F9.one) == 0


def test_weil_sum_table_matches_single_sums():
    table = weil_sum_table(F9, 1, F9.one)
    assert table == [weil_sum(F9, 1, F9.one, beta) for beta in F9.elements()]


@pytest.mark.parametrize("p, e, l", [(3, 2, 1), (3, 2, 3), (5, 2, 1), (3, 4, 1), (3, 4, 2), (3, 4, 3)])
def test_weil_closed_form_matches_brute_force(p, e, l):
    ctx = field(p, e)
    for alpha in ctx.elements():
        if alpha.is_zero():
            continue
        brute = weil_sum_table(ctx, l, alpha)
        for beta in ctx.elements():
            assert weil_sum_closed(ctx, l, alpha, beta) == brute[beta.index], (alpha, beta)


def test_weil_closed_form_rejects():
    with pytest.raises(ValueError):
        weil_sum_closed(F9, 1, F9.zero, F9.one)
    with pytest.raises(ValueError, match="e/s must be even"):
        weil_sum_closed(F9, 2, F9.one, F9.one)
    with pytest.raises(ValueError):
        solve_artin(F9, 1, F9.zero, F9.one)


def test_artin_solver():
    solutions = solve_artin(F9, 1, F9.one, F9.one)
    assert solutions == [F9.one]
    amap = artin_map(F9, 1, F9.one)
    assert amap.is_bijective
    assert amap.apply(F9.one) == F9.scalar(2)


def test_artin_kernel_in_exceptional_class():
    x = F9.element([0, 1])
    amap = artin_map(F9, 1, x)
    assert amap.kernel_dimension == 2
    assert len(solve_artin(F9, 1, x, F9.zero)) == 9
    assert solve_artin(F9, 1, x, F9.one) == []


@pytest.mark.parametrize("p, e, l, expected", [(3, 4, 1, 9), (5, 4, 1, 25), (3, 4, 3, 9)])
def test_solvable_beta_count(p, e, l, expected):
    assert solvable_beta_count(field(p, e), l) == expected


def test_solvable_beta_count_needs_even_ratio():
    with pytest.raises(ValueError):
        solvable_beta_count(F9, 1)


def test_permutation_criterion():
    g = F81.primitive_element
    assert is_permutation_map(F81, 1, F81.one) == (False, False)
    assert is_permutation_map(F81, 1, g) == (True, True)
    assert is_permutation_map(F9, 1, F9.one) == (True, True)
    assert is_permutation_map(F9, 1, F9.element([0, 1])) == (False, False)


def test_homogeneous_kernel_size():
    assert homogeneous_kernel_size(F81, 1, F81.one) == 9
    assert homogeneous_kernel_size(F81, 1, F81.primitive_element) == 1
    assert homogeneous_kernel_size(F9, 1, F9.element([0, 1])) == 9


@pytest.mark.parametrize("p, e, l", [(3, 2, 1), (5, 2, 1), (3, 4, 1), (3, 4, 2)])
def test_permutation_criterion_agrees_with_rank(p, e, l):
    ctx = field(p, e)
    for alpha in ctx.elements():
        if alpha.is_zero():
            continue
        bijective, criterion = is_permutation_map(ctx, l, alpha)
        assert bijective == criterion


@pytest.mark.parametrize("p, e, l", [(3, 2, 1), (5, 2, 1), (7, 2, 1), (3, 4, 1), (3, 4, 2)])
def test_artin_solution_counts(p, e, l):
    ctx = field(p, e)
    s = math.gcd(l, e)
    allowed = {0, 1, p ** (2 * s)}
    for alpha in ctx.elements():
        if alpha.is_zero():
            continue
        for beta in ctx.elements():
            solutions = solve_artin(ctx, l, alpha, beta)
            assert len(solutions) in allowed
            assert len(set(solutions)) == len(solutions)
