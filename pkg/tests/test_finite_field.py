#!/usr/bin/env python3
"""
Tests for F_p and F_{p^e} arithmetic, the enumeration order and CodeSpec validation.
"""

import concurrent.futures
import os
import sys

import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

# Add the parent directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils.finite_field import (
    CodeSpec,
    FieldCtx,
    arith,
    enumerate_elements,
    field,
    format_modulus,
    frobenius_iter,
    is_irreducible,
    smallest_irreducible,
    trace,
)

F9 = field(3, 2)
F25 = field(5, 2)
F81 = field(3, 4)


def elements_of(ctx):
    return st.integers(min_value=0, max_value=ctx.q - 1).map(ctx.from_index)


def test_smallest_irreducible():
    assert smallest_irreducible(3, 2) == (1, 0, 1)
    assert is_irreducible((1, 0, 1), 3)
    assert not is_irreducible((2, 0, 1), 3)
    assert format_modulus((1, 0, 1)) == "X^2 + 1"


def test_enumeration_order():
    elements = enumerate_elements(F9)
    assert len(elements) == 9
    assert [x.index for x in elements] == list(range(9))
    # residue c has index c, X has index p
    assert F9.scalar(2).index == 2
    assert F9.element([0, 1]).index == 3
    assert F9.from_index(5).coeffs == (2, 1)


def test_primitive_element():
    assert F9.primitive_index == 4
    assert F9.order(F9.primitive_element) == 8
    assert F81.order(F81.primitive_element) == 80


def test_known_products():
    x = F9.element([0, 1])
    assert (x * x).index == 2
    assert arith("mul", x, x) == F9.scalar(-1)
    assert arith("pow", x, 4) == F9.one
    assert arith("inv", x) == -x


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        F9.zero.inverse()


def test_unknown_operation():
    with pytest.raises(ValueError):
        arith("root", F9.one, F9.one)


def test_trace_values():
    x = F9.element([0, 1])
    assert trace(F9, F9.one) == 2
    assert trace(F9, x) == 0
    assert trace(F9, F9.element([1, 1])) == 2


def test_frobenius():
    x = F9.element([0, 1])
    assert frobenius_iter(F9, x, 1) == F9.element([0, 2])
    assert frobenius_iter(F9, x, 2) == x
    assert frobenius_iter(F9, x, 5) == frobenius_iter(F9, x, 1)
    with pytest.raises(ValueError):
        frobenius_iter(F9, x, -1)


@pytest.mark.parametrize("ctx", [F9, F25, F81], ids=["F9", "F25", "F81"])
def test_frobenius_iterates_are_prime_powers(ctx):
    for k in range(2 * ctx.e + 1):
        for x in ctx.elements():
            assert frobenius_iter(ctx, x, k) == x ** (ctx.p ** k)


def test_lookup_tables_are_built_once_across_threads():
    ctx = FieldCtx(3, 4)
    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as executor:
        future_to_worker = {executor.submit(lambda: ctx.trace_form): worker for worker in range(16)}
        forms = [future.result() for future in concurrent.futures.as_completed(future_to_worker)]
    assert all(form is forms[0] for form in forms)
    assert not forms[0].flags.writeable
    x = ctx.element([0, 1])
    for a in ctx.elements():
        assert forms[0][a.index, x.index] == trace(ctx, a * x)


def test_modulus_override():
    other = field(3, 2, (2, 1, 1))
    assert other.modulus == (2, 1, 1)
    assert other.key != F9.key
    with pytest.raises(ValueError, match="reducible"):
        field(3, 2, (2, 0, 1))
    with pytest.raises(ValueError, match="monic"):
        field(3, 2, (1, 0, 2))


def test_elements_of_different_fields_do_not_mix():
    other = field(3, 2, (2, 1, 1))
    with pytest.raises(ValueError):
        F9.one + other.one


@settings(max_examples=200)
@given(elements_of(F25), elements_of(F25), elements_of(F25))
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == F25.zero
    if not a.is_zero():
        assert a * a.inverse() == F25.one


@settings(max_examples=200)
@given(elements_of(F81), elements_of(F81))
def test_trace_is_linear_and_frobenius_invariant(x, y):
    p = F81.p
    assert trace(F81, x + y) == (trace(F81, x) + trace(F81, y)) % p
    assert trace(F81, x * 2) == (2 * trace(F81, x)) % p
    assert trace(F81, frobenius_iter(F81, x, 1)) == trace(F81, x)


@given(elements_of(F81))
def test_frobenius_is_multiplicative_power(x):
    assert frobenius_iter(F81, x, 1) == x ** 3
    assert frobenius_iter(F81, x, 4) == x


def test_code_spec_derived_fields():
    spec = CodeSpec(p=3, e=4, l=1)
    assert (spec.m, spec.s, spec.q, spec.parity) == (2, 1, 81, 0)
    spec = CodeSpec(p=3, e=4, l=2)
    assert (spec.m, spec.s, spec.parity) == (2, 2, 1)


@pytest.mark.parametrize(
    "p, e, l, message",
    [
        (2, 2, 1, "p must be an odd prime"),
        (9, 2, 1, "p must be an odd prime"),
        (3, 3, 1, "e must be even"),
        (3, 2, 0, "l must be a positive integer"),
        (3, 2, 2, "e/s must be even"),
        (3, 4, 4, "e/s must be even"),
    ],
)
def test_code_spec_rejects(p, e, l, message):
    with pytest.raises(ValidationError, match=message):
        CodeSpec(p=p, e=e, l=l)
