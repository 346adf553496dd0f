"""Tests for partition combinatorics."""

from __future__ import annotations

import math
from fractions import Fraction as F
from functools import cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p1qcurve.exactcore import ExactError, Polynomial
from p1qcurve.partitions import (
    boxes_added,
    boxes_removed,
    conjugate,
    dimension,
    hook_lengths,
    hook_product,
    hook_refinement_check,
    is_partition,
    offset_difference_check,
    offset_product,
    padded,
    partitions,
)


def test_enumeration_order_and_counts():
    assert partitions(0) == ((),)
    assert partitions(3) == ((3,), (2, 1), (1, 1, 1))
    assert partitions(4) == ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    # partition numbers p(0..10) = 1,1,2,3,5,7,11,15,22,30,42
    counts = [len(partitions(d)) for d in range(11)]
    assert counts == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_validation():
    assert is_partition(()) and is_partition((3, 1, 1))
    assert not is_partition((1, 2))
    assert not is_partition((0,))
    with pytest.raises(ExactError):
        hook_product((1, 2))


def test_conjugate_involution():
    assert conjugate((3, 1)) == (2, 1, 1)
    for d in range(9):
        for p in partitions(d):
            assert conjugate(conjugate(p)) == p


def test_hook_lengths_known_shape():
    # verified by drawing the diagram of (3, 2)
    assert hook_lengths((3, 2)) == ((4, 3, 1), (2, 1))
    assert hook_product((3, 2)) == 24
    assert hook_product(()) == 1


def test_hook_product_conjugation_invariant():
    for d in range(10):
        for p in partitions(d):
            assert hook_product(p) == hook_product(conjugate(p))


@cache
def _chain_count(p):
    """Independent oracle for dimension: count increasing box-by-box chains
    from the empty diagram, which is exactly the number of standard fillings."""
    if not p:
        return 1
    return sum(_chain_count(q) for q in boxes_removed(p))


def test_dimension_matches_chain_counting():
    for d in range(9):
        for p in partitions(d):
            assert dimension(p) == _chain_count(p)


def test_dimension_squares_sum_to_factorial():
    for d in range(9):
        assert sum(dimension(p) ** 2 for p in partitions(d)) == math.factorial(d)


def test_boxes_added_removed_adjoint():
    for d in range(8):
        for p in partitions(d):
            for q in boxes_added(p):
                assert sum(q) == d + 1
                assert p in boxes_removed(q)
            for q in boxes_removed(p):
                assert sum(q) == d - 1
                assert p in boxes_added(q)


def test_padded():
    assert padded((2, 1), 4) == (2, 1, 0, 0)
    with pytest.raises(ExactError):
        padded((2, 1), 1)


def test_offset_product_small_cases():
    # verified by hand from the definition
    assert offset_product(()) == Polynomial.one()
    assert offset_product((1,)) == Polynomial([0, 1])                 # y
    assert offset_product((2,)) == Polynomial([-2, -1, 1])            # (y+1)(y-2)
    assert offset_product((1, 1)) == Polynomial([0, -1, 1])           # y(y-1)
    p3 = offset_product((2, 1))  # (y+1)(y-1)(y-3)
    assert p3 == Polynomial.from_roots([-1, 1, 3])


def test_offset_product_monic_of_degree_boxcount():
    for d in range(1, 8):
        for p in partitions(d):
            g = offset_product(p)
            assert g.degree == d
            assert g.leading() == 1


def test_hook_refinement_small_cases():
    # mu = (1): covers are (2) and (1,1), both with hook product 2
    assert sum(F(1, hook_product(q)) for q in boxes_added((1,))) == F(1, 1)
    for d in range(8):
        for mu in partitions(d):
            assert hook_refinement_check(mu)


def test_offset_difference_identity_small():
    # d = 0: both sides equal the constant 1 (checked by hand)
    # d = 1: both sides equal y (checked by hand)
    assert offset_difference_check(0)
    assert offset_difference_check(1)


@given(st.integers(min_value=0, max_value=7))
@settings(max_examples=8, deadline=None)
def test_offset_difference_identity_property(d):
    assert offset_difference_check(d)
