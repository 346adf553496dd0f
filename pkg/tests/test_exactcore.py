"""Tests for the exact arithmetic kernel."""

from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p1qcurve.exactcore import (
    BranchLogError,
    ExactError,
    FactorError,
    LocalExpr,
    MultiSeries,
    PoleEvaluationError,
    Polynomial,
    RationalFunction,
    TruncatedSeries,
    TruncationError,
    local_laurent,
    partial_fractions,
    rational_from_json,
    rational_to_json,
    residue,
    series_compose,
    series_exp,
    series_log,
)

fracs = st.fractions(min_value=-60, max_value=60, max_denominator=12)
small_fracs = st.fractions(min_value=-9, max_value=9, max_denominator=5)


def poly(coeffs):
    return Polynomial(coeffs)


# ---------------------------------------------------------------------------
# rationals on the wire
# ---------------------------------------------------------------------------


def test_rational_json_lowest_terms():
    assert rational_to_json(F(2, 4)) == "1/2"
    assert rational_to_json(F(-6, 3)) == "-2"
    assert rational_to_json(F(0)) == "0"
    assert rational_from_json("-7/3") == F(-7, 3)


@given(fracs)
def test_rational_json_roundtrip(x):
    assert rational_from_json(rational_to_json(x)) == x


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def test_zero_polynomial_sentinel():
    assert Polynomial.zero().degree is None
    assert poly([0, 0]).degree is None
    assert poly([3]).degree == 0


def test_poly_divmod_exact():
    a = poly([2, 0, -3, 1])
    b = poly([-1, 1])
    q, r = divmod(a, b)
    assert q * b + r == a


@given(st.lists(small_fracs, max_size=6), st.lists(small_fracs, min_size=1, max_size=4))
def test_poly_divmod_property(ac, bc):
    a, b = poly(ac), poly(bc)
    if b.is_zero():
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


def test_poly_shift_and_compose():
    p = poly([0, 0, 1])  # t^2
    assert p.shift(3) == poly([9, 6, 1])
    assert p(poly([1, 1])) == poly([1, 2, 1])


def test_poly_gcd_monic():
    a = poly([-1, 0, 1]) * poly([2, 1])
    b = poly([1, 1]) * poly([2, 1]) * 5
    g = a.gcd(b)
    assert g == poly([1, 1]) * poly([2, 1])  # monic product
    assert g.leading() == 1


def test_poly_json_roundtrip():
    p = poly([F(1, 2), 0, -3])
    assert Polynomial.from_json(p.to_json()) == p


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


def test_rational_function_canonical():
    f = RationalFunction(poly([0, 2]), poly([2, 2]))
    assert f.den.leading() == 1
    assert f.num.gcd(f.den).degree == 0


def test_rational_function_pole_evaluation():
    f = RationalFunction(poly([1]), poly([-1, 1]))
    with pytest.raises(PoleEvaluationError):
        f(1)
    assert f(2) == 1


def test_reciprocal_substitution_involution():
    f = RationalFunction(poly([1, 3, 1]), poly([0, 0, 1]))  # (1+3t+t^2)/t^2
    assert f.reciprocal_substitution().reciprocal_substitution() == f


@given(
    st.lists(small_fracs, min_size=1, max_size=4),
    st.lists(small_fracs, min_size=1, max_size=4),
)
def test_field_ops_consistent_with_evaluation(nc, dc):
    num, den = poly(nc), poly(dc)
    if den.is_zero():
        return
    f = RationalFunction(num, den)
    g = RationalFunction(poly([1, 1]), poly([2, -1, 1]))
    h = (f + g) * (f - g) - (f * f - g * g)
    assert h.is_zero()


def test_derivative_quotient_rule():
    f = RationalFunction(poly([0, 1]), poly([1, 1]))  # t/(1+t)
    assert f.derivative() == RationalFunction(poly([1]), poly([1, 2, 1]))


# ---------------------------------------------------------------------------
# partial fractions
# ---------------------------------------------------------------------------


def test_partial_fractions_simple():
    # (3t+1)/((t-1)(t+2)^2), residues computed by hand
    den = Polynomial.from_roots([1, -2, -2])
    pf = partial_fractions(RationalFunction(poly([1, 3]), den))
    d = pf.as_dict()
    assert d[(F(1), 1)] == F(4, 9)
    assert d[(F(-2), 2)] == F(5, 3)
    assert d[(F(-2), 1)] == F(-4, 9)
    assert pf.poly_part.is_zero()


def test_partial_fractions_poly_part():
    f = RationalFunction(poly([0, 0, 0, 1]), poly([0, 1]) * poly([1, 1]))
    pf = partial_fractions(f)
    assert pf.reassemble() == f
    assert not pf.poly_part.is_zero()


def test_partial_fractions_rejects_irrational_poles():
    with pytest.raises(FactorError):
        partial_fractions(RationalFunction(poly([1]), poly([1, 0, 1])))  # 1/(1+t^2)


def test_partial_fractions_random_reassembly():
    """Randomized exact reassembly over assorted pole configurations."""
    rng = random.Random(20260815)
    root_pool = [F(0), F(1), F(-1), F(2), F(-2), F(1, 2), F(-3, 2), F(5)]
    for _ in range(1000):
        roots = []
        for _ in range(rng.randint(1, 4)):
            roots.extend([rng.choice(root_pool)] * rng.randint(1, 2))
        den = Polynomial.from_roots(roots)
        num = poly([F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(1, len(roots) + 2))])
        if num.is_zero():
            continue
        f = RationalFunction(num, den)
        assert partial_fractions(f).reassemble() == f


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------


def test_truncation_barrier():
    s = TruncatedSeries("t", 0, [1, 2, 3], 2)
    assert s.coefficient(2) == 3
    assert s.coefficient(-5) == 0
    with pytest.raises(TruncationError):
        s.coefficient(3)


def test_mul_order_bookkeeping():
    a = TruncatedSeries("t", -1, [1, 0, 0, 0], 2)   # 1/t known through t^2
    b = TruncatedSeries("t", 2, [1], 2)              # t^2 known through t^2
    p = a * b
    assert p.order == 1                               # min(2+2, 2-1) = 1
    assert p.coefficient(1) == 1


def test_inverse_of_laurent_unit():
    s = TruncatedSeries("t", -1, [1, 1, 0, 0, 0, 0], 4)  # 1/t + 1
    inv = s.inverse()
    assert (s * inv).coefficient(0) == 1
    assert all((s * inv).coefficient(k) == 0 for k in range(1, (s * inv).order + 1))


def test_geometric_series_inverse():
    one_minus_t = TruncatedSeries("t", 0, [1, -1] + [0] * 9, 10)
    geo = one_minus_t.inverse()
    assert all(geo.coefficient(k) == 1 for k in range(11))


@given(st.lists(small_fracs, min_size=1, max_size=9))
@settings(max_examples=60)
def test_exp_log_roundtrip(cs):
    order = 12
    body = [F(c) for c in cs] + [F(0)] * (order - len(cs))
    s = TruncatedSeries("t", 1, body, order)
    assert series_log(series_exp(s)) == s
    u = series_exp(s)
    assert series_exp(series_log(u)) == u


def test_exp_rejects_constant_term():
    with pytest.raises(ExactError):
        series_exp(TruncatedSeries("t", 0, [1, 1], 1))
    with pytest.raises(ExactError):
        series_exp(TruncatedSeries("t", -1, [1, 0, 1], 1))


def test_log_requires_unit_constant():
    with pytest.raises(ExactError):
        series_log(TruncatedSeries("t", 0, [2, 1], 1))


def test_compose_against_rational_identity():
    # f(t) = 1/(1-t), g(t) = t + t^2;  f(g(t)) = 1/(1 - t - t^2) generates Fibonacci
    order = 10
    f = TruncatedSeries("t", 0, [1] * (order + 1), order)
    g = TruncatedSeries("t", 1, [1, 1] + [0] * (order - 2), order)
    comp = series_compose(f, g)
    fib = [1, 1]
    while len(fib) <= order:
        fib.append(fib[-1] + fib[-2])
    assert [comp.coefficient(k) for k in range(order + 1)] == fib[: order + 1]


def test_compose_negative_exponents():
    # f(t) = 1/t composed with g = t/(1+t): result (1+t)/t = 1/t + 1
    order = 8
    f = TruncatedSeries("t", -1, [1] + [0] * (order + 1), order)
    g_rf = RationalFunction(poly([0, 1]), poly([1, 1]))
    g = g_rf.laurent_at(0, order)
    comp = series_compose(f, g)
    assert comp.coefficient(-1) == 1
    assert comp.coefficient(0) == 1
    assert all(comp.coefficient(k) == 0 for k in range(1, comp.order + 1))


@given(
    st.lists(small_fracs, min_size=1, max_size=6),
    st.lists(small_fracs, min_size=1, max_size=6),
)
@settings(max_examples=40)
def test_truncation_soundness_vs_doubled_order(ac, bc):
    """Coefficients inside the declared window never change when inputs carry
    more information: recompute the same product at doubled order and compare."""
    order = 6
    pad = lambda cs, n: [F(c) for c in cs][: n + 1] + [F(0)] * max(0, n + 1 - len(cs))
    a1 = TruncatedSeries("t", 0, pad(ac, order), order)
    b1 = TruncatedSeries("t", 0, pad(bc, order), order)
    a2 = TruncatedSeries("t", 0, pad(ac, 2 * order), 2 * order)
    b2 = TruncatedSeries("t", 0, pad(bc, 2 * order), 2 * order)
    p1 = a1 * b1
    p2 = a2 * b2
    for k in range(p1.order + 1):
        assert p1.coefficient(k) == p2.coefficient(k)


def test_series_json_roundtrip():
    s = TruncatedSeries("t", -1, [F(1, 3), 0, 2, F(-5, 7)], 2)
    assert TruncatedSeries.from_json(s.to_json()) == s


# ---------------------------------------------------------------------------
# multivariate series
# ---------------------------------------------------------------------------


def test_multiseries_outer_and_truncation():
    a = TruncatedSeries("x1", -1, [1, 2, 3], 1)
    b = TruncatedSeries("x2", 0, [5, 7], 1)
    m = MultiSeries.outer_product([a, b])
    assert m.coefficient((0, 1)) == 14
    with pytest.raises(TruncationError):
        m.coefficient((2, 0))


def test_multiseries_product_respects_orders():
    m1 = MultiSeries(("x",), (0,), (3,), {(1,): 1, (3,): 2})
    m2 = MultiSeries(("x",), (1,), (3,), {(1,): 1})
    p = m1 * m2
    # sound order: unknown tail of m2 (beyond x^3) meets m1's x^0 at x^4
    assert p.orders == (3,)
    assert p.coefficient((2,)) == 1
    with pytest.raises(TruncationError):
        p.coefficient((4,))


def test_multiseries_json_roundtrip():
    m = MultiSeries(("x1", "x2"), (-1, 0), (2, 2), {(-1, 2): F(3, 4), (0, 0): -2})
    assert MultiSeries.from_json(m.to_json()) == m


# ---------------------------------------------------------------------------
# local expansions and residues
# ---------------------------------------------------------------------------


def z_rational(num, den):
    return LocalExpr.rational(RationalFunction(poly(num), poly(den)))


def test_known_residue_with_log_factor():
    # 1/((z-1) log z) about z=1: substitute z=1+t, expand, read the 1/t term.
    # Brute expansion gives t^-2 + (1/2) t^-1 + ...; frozen oracle value 1/2.
    e = z_rational([1], [-1, 1]) * LocalExpr.log_z().inv()
    assert residue(e, 1) == F(1, 2)
    s = local_laurent(e, 1, 3)
    assert s.coefficient(-2) == 1
    assert s.coefficient(-1) == F(1, 2)


def test_rational_residues_match_partial_fractions():
    f = RationalFunction(poly([1, 3]), Polynomial.from_roots([1, -1, -1]))
    pf = partial_fractions(f).as_dict()
    assert residue(LocalExpr.rational(f), 1) == pf[(F(1), 1)]
    assert residue(LocalExpr.rational(f), -1) == pf[(F(-1), 1)]


def test_log_branch_constant_cancels_in_involution_difference():
    # log(1/z) - log z about z = -1 equals -2 log(-z) with no branch constant
    diff = LocalExpr.log_z_reciprocal() - LocalExpr.log_z()
    s = local_laurent(diff, -1, 5)
    assert s.coefficient(1) == 2
    assert s.coefficient(2) == 1
    assert s.coefficient(3) == F(2, 3)


def test_log_branch_constant_obstructs_lone_log():
    with pytest.raises(BranchLogError):
        local_laurent(LocalExpr.log_z(), -1, 2)
    with pytest.raises(BranchLogError):
        local_laurent(LocalExpr.log_z().inv(), -1, 2)
    # residue slot carrying the branch constant: log(z)/(z+1) about z = -1
    with pytest.raises(BranchLogError):
        residue(LocalExpr.log_z() * z_rational([1], [1, 1]), -1)
    # but a log whose branch constant sits away from the 1/t slot is harmless
    assert residue(LocalExpr.log_z(), -1) == 0


def test_log_has_no_expansion_at_zero():
    with pytest.raises(ExactError):
        local_laurent(LocalExpr.log_z(), 0, 3)


def test_log_expansions_at_plus_one():
    s = local_laurent(LocalExpr.log_z(), 1, 4)
    assert [s.coefficient(k) for k in range(1, 5)] == [F(1), F(-1, 2), F(1, 3), F(-1, 4)]
    r = local_laurent(LocalExpr.log_z_reciprocal(), 1, 4)
    assert [r.coefficient(k) for k in range(1, 5)] == [F(-1), F(1, 2), F(-1, 3), F(1, 4)]


def test_residue_of_regular_point_is_zero():
    f = z_rational([1], [2, 1])  # 1/(2+z), regular at +-1
    assert residue(f, 1) == 0
    assert residue(f, -1) == 0
