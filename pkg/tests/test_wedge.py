"""Tests for the partition-eigenvalue engine for stationary invariants."""

import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p1qcurve.exactcore import ExactError, TruncatedSeries, series_log
from p1qcurve.partitions import dimension, partitions
from p1qcurve.wedge import (
    catalan_inverse,
    connected_coefficient,
    connected_npoint,
    disconnected_npoint,
    e0_eigenvalue,
    fock_weight,
    squared_dimension,
    stationary_invariant,
    unit_insertions,
    unstable_series_check,
    unstable_series_report,
    vacuum_total,
    zeta_reciprocal,
    zeta_series,
)


# ---------------------------------------------------------------------------
# zeta and eigenvalue series
# ---------------------------------------------------------------------------


def test_zeta_leading_coefficients():
    zs = zeta_series(7)
    assert zs.min_exp == 1
    assert zs.coefficient(1) == 1
    assert zs.coefficient(2) == 0
    assert zs.coefficient(3) == F(1, 24)
    assert zs.coefficient(5) == F(1, 1920)


def test_zeta_is_odd():
    zs = zeta_series(12)
    assert all(zs.coefficient(k) == 0 for k in range(2, 13, 2))


def test_zeta_reciprocal_leading_terms():
    zr = zeta_reciprocal(5)
    assert zr.min_exp == -1
    assert zr.coefficient(-1) == 1
    assert zr.coefficient(0) == 0
    assert zr.coefficient(1) == F(-1, 24)
    assert zr.coefficient(3) == F(7, 5760)


def test_zeta_times_reciprocal_is_one():
    order = 10
    prod = zeta_series(order + 2) * zeta_reciprocal(order)
    assert prod.coefficient(0) == 1
    assert all(prod.coefficient(k) == 0 for k in range(1, prod.order + 1))


def test_eigenvalue_empty_partition_is_reciprocal_zeta():
    eig = e0_eigenvalue((), 8).series
    assert (eig - zeta_reciprocal(8)).is_zero()


def test_eigenvalue_single_box_is_zeta_plus_reciprocal():
    eig = e0_eigenvalue((1,), 8).series
    expected = zeta_series(8) + zeta_reciprocal(8)
    assert (eig - expected).is_zero()
    assert eig.coefficient(1) == F(23, 24)


def test_eigenvalue_tail_is_power_series():
    for d in range(5):
        for lam in partitions(d):
            tail = e0_eigenvalue(lam, 6).series - zeta_reciprocal(6)
            assert tail.is_zero() or tail.min_exp >= 0


def test_fock_weight_and_vacuum_normalization():
    assert squared_dimension((2, 1)) == 4
    assert fock_weight((2, 1)) == F(4, 36)
    for d in range(13):
        assert vacuum_total(d) == F(1, math.factorial(d))


# ---------------------------------------------------------------------------
# disconnected and connected series
# ---------------------------------------------------------------------------


def test_disconnected_degree0_is_reciprocal_zeta():
    D = disconnected_npoint(0, 1, 6)
    zr = zeta_reciprocal(6)
    for k in range(-1, 7):
        assert D.coefficient((k,)) == zr.coefficient(k)


def test_disconnected_degree1_value():
    # zeta + 1/zeta at the linear coefficient: 1 - 1/24
    D = disconnected_npoint(1, 1, 5)
    assert D.coefficient((1,)) == F(23, 24)


def test_connected_corrects_disconnected():
    # the vacuum-division and cumulant step must turn 23/24 into exactly 1
    C = connected_npoint(1, 1, 5)
    assert C.coefficient((1,)) == 1


def test_connected_degree0_two_point_vanishes_at_11():
    assert connected_npoint(0, 2, 4).coefficient((1, 1)) == 0


def test_connected_two_point_degree1():
    assert connected_npoint(1, 2, 4).coefficient((1, 1)) == 1


def test_point_bound_enforced():
    with pytest.raises(ExactError):
        disconnected_npoint(1, 5, 3)
    with pytest.raises(ExactError):
        connected_npoint(1, 5, 3)
    disconnected_npoint(1, 5, 3, max_points=5)  # configurable


def test_dual_routes_agree_everywhere():
    # Moebius/cumulant route vs single-coefficient logarithm route
    for n, order in ((1, 8), (2, 6), (3, 4)):
        for d in range(4):
            C = connected_npoint(d, n, order)
            for exps in itertools.product(range(-1, order + 1), repeat=n):
                b = tuple(sorted(e - 1 for e in exps))
                assert C.coefficient(exps) == connected_coefficient(d, b), (n, d, exps)


def test_dimension_parity_filter():
    for d in range(4):
        C = connected_npoint(d, 2, 6)
        for exps in itertools.product(range(-1, 7), repeat=2):
            b = tuple(e - 1 for e in exps)
            twog = sum(b) + 2 - 2 * d
            if twog < 0 or twog % 2:
                assert C.coefficient(exps) == 0, (d, b)


# ---------------------------------------------------------------------------
# stationary invariants
# ---------------------------------------------------------------------------


def test_convention_anchors():
    assert stationary_invariant(0, 1, 0, (-2,)) == 1
    assert stationary_invariant(0, 1, 1, (0,)) == 1
    assert stationary_invariant(0, 3, 1, (0, 0, 0)) == 1
    assert stationary_invariant(1, 1, 0, (0,)) == F(-1, 24)


def test_one_point_genus0_values_are_inverse_square_factorials():
    # <tau_{2d-2}>^d_{0,1} = 1/(d!)^2, a consequence of the closed form
    for d in range(1, 7):
        assert stationary_invariant(0, 1, d, (2 * d - 2,)) == F(1, math.factorial(d) ** 2)


def test_dimension_violation_flag():
    value, flag = stationary_invariant(0, 1, 1, (5,), explain=True)
    assert value == 0 and flag == "dimension-violation"
    value, flag = stationary_invariant(0, 1, 1, (0,), explain=True)
    assert value == 1 and flag is None


def test_exponent_validation():
    with pytest.raises(ExactError):
        stationary_invariant(0, 1, 0, (-3,))
    with pytest.raises(ExactError):
        stationary_invariant(0, 2, 0, (-2,))  # n mismatch


@given(st.permutations([0, 1, 2, 3]))
@settings(max_examples=12, deadline=None)
def test_permutation_symmetry(perm):
    base = (0, 1, 2, 3)
    d = 2  # sum(b) = 6 = 2g - 2 + 2d with g = 2
    assert stationary_invariant(2, 4, d, base) == stationary_invariant(2, 4, d, tuple(perm))


def test_vacuum_connected_coefficient():
    # [q^d] log(e^q) = q: degree 1 only
    assert connected_coefficient(1, ()) == 1
    for d in (0, 2, 3, 4):
        assert connected_coefficient(d, ()) == 0


# ---------------------------------------------------------------------------
# unit insertions via the string recursion
# ---------------------------------------------------------------------------


def test_unit_insertions_base_case():
    assert unit_insertions(0, 1, 2, 0, (0,)) == 1


def test_unit_insertions_chain():
    for k in range(2, 7):
        assert unit_insertions(0, 1, k, 0, (k - 2,)) == 1


def test_unit_insertions_delegates_at_k0():
    assert unit_insertions(0, 1, 1, 1, (1,)) == stationary_invariant(0, 1, 1, (0,))
    assert unit_insertions(1, 1, 0, 0, (0,)) == F(-1, 24)


def test_string_identity_two_point():
    # <tau_0(1) tau_{b+1}(omega)>^d_{0,2} = <tau_b(omega)>^d_{0,1}
    for d in range(1, 6):
        assert unit_insertions(0, 1, 1, d, (2 * d - 1,)) == stationary_invariant(
            0, 1, d, (2 * d - 2,)
        )


def test_unit_insertions_multinomial_closed_form():
    # <tau_0(1)^k prod_i tau_{b_i}(omega)>^d with all-zero b at degree d = n:
    # repeated string reduction gives the multinomial count of lowering paths.
    # Cross-check a genuinely recursive case against an independent expansion:
    # <tau_0(1) tau_0 tau_1>^1_{0,3}: lowering the tau_1 slot gives
    # <tau_0 tau_0>^1_{0,2} = 1; lowering tau_0 gives zero.
    assert unit_insertions(0, 2, 1, 1, (0, 1)) == stationary_invariant(0, 2, 1, (0, 0))


def test_unit_insertions_dimension_gate():
    assert unit_insertions(0, 1, 1, 1, (0,)) == 0


def test_unit_insertions_negative_exponent_rules():
    # tau_{-1}(omega) vanishes identically
    assert unit_insertions(0, 1, 1, 0, (-1,)) == 0
    # tau_{-2}(omega) mixed with units has no string semantics; pick exponents
    # that pass the dimension gate so the guard itself is exercised
    with pytest.raises(ExactError):
        unit_insertions(0, 2, 1, 0, (-2, 1))


def test_unit_insertions_undefined_unstable_errors():
    # <tau_0(1)^2>^0_{0,2} is unstable with no base case
    with pytest.raises(ExactError) as exc:
        unit_insertions(0, 0, 2, 0, ())
    assert "unstable" in str(exc.value)


def test_unit_insertions_cross_identity():
    # sum_d (2d-1)! <tau_0(1) tau_{2d-1}>^d_{0,2} w^{2d} == log(1 + z(w)^2)
    order = 12
    z = catalan_inverse(order + 2)
    rhs = series_log(TruncatedSeries.constant("w", 1, order + 2) + z * z).truncate(order)
    for d in range(1, order // 2 + 1):
        lhs = math.factorial(2 * d - 1) * unit_insertions(0, 1, 1, d, (2 * d - 1,))
        assert lhs == rhs.coefficient(2 * d)


# ---------------------------------------------------------------------------
# closed-form series comparison
# ---------------------------------------------------------------------------


def test_catalan_inverse_coefficients():
    z = catalan_inverse(11)
    assert [z.coefficient(k) for k in range(1, 12, 2)] == [1, 1, 2, 5, 14, 42]
    assert all(z.coefficient(k) == 0 for k in range(2, 11, 2))


def test_catalan_inverse_inverts_the_curve():
    # z + 1/z = x exactly, i.e. z^2 - x z + 1 = O(w^large)
    order = 14
    z = catalan_inverse(order)
    lhs = z * z - z.shift_exponent(-1) + TruncatedSeries.constant("w", 1, order)
    assert lhs.is_zero()


def test_unstable_series_check_small_orders():
    assert unstable_series_check(5)
    assert unstable_series_check(9)


def test_unstable_series_negative_controls():
    ok, msg = unstable_series_report(5, perturb={("01", 2): F(1, 7)})
    assert not ok and "x^-3" in msg
    ok, msg = unstable_series_report(5, perturb={("02", 1, 1): F(1, 3)})
    assert not ok and "x1^-2" in msg and "x2^-2" in msg
