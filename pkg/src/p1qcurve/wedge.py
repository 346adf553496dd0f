"""Stationary curve-count invariants from a diagonal operator on partition vectors.

Every degree-d, n-point invariant computed here reduces to finite exact sums
over integer partitions: each partition vector is an eigenvector of the
relevant diagonal operator family, with eigenvalue series

    eps_lam(t) = sum_i (e^{t(lam_i - i + 1/2)} - e^{t(1/2 - i)}) + 1/zeta(t),

where zeta(t) = e^{t/2} - e^{-t/2}.  Disconnected n-point data is the
squared-dimension-weighted sum of eigenvalue products; connected data is the
logarithm (equivalently, the set-partition cumulant combination after dividing
out the vacuum factor e^q).  Both passages are implemented independently and
cross-checked.  A string-type recursion extends the stationary values to
insertions of the unit class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Frac
from functools import cache
from itertools import combinations

from .exactcore import (
    ExactError,
    MultiSeries,
    TruncatedSeries,
    multiseries_log,
    series_log,
)
from .partitions import Partition, dimension, is_partition, partitions

__all__ = [
    "EigenSeries",
    "catalan_inverse",
    "connected_coefficient",
    "connected_npoint",
    "disconnected_npoint",
    "e0_eigenvalue",
    "fock_weight",
    "squared_dimension",
    "stationary_invariant",
    "unit_insertions",
    "unstable_series_check",
    "unstable_series_report",
    "vacuum_total",
    "zeta_reciprocal",
    "zeta_series",
]


# ---------------------------------------------------------------------------
# Eigenvalue series
# ---------------------------------------------------------------------------


def zeta_series(order: int, var: str = "t") -> TruncatedSeries:
    """The odd series e^{t/2} - e^{-t/2} = t + t^3/24 + t^5/1920 + ...

    truncated at `order` (inclusive).
    """
    if order < 1:
        raise ExactError("zeta_series needs order >= 1")

    def coeff(k: int) -> Frac:
        if k % 2 == 1:
            return Frac(2, 2**k * math.factorial(k))
        return Frac(0)

    return TruncatedSeries.from_function(var, coeff, 1, order)


def zeta_reciprocal(order: int, var: str = "t") -> TruncatedSeries:
    """1/zeta as a Laurent series, t^{-1} - t/24 + 7 t^3/5760 - ...,

    known through `order` (inclusive); min_exp is -1.
    """
    if order < -1:
        raise ExactError("zeta_reciprocal needs order >= -1")
    return zeta_series(order + 2, var).inverse()


def squared_dimension(lam: Partition) -> int:
    """(number of standard tableaux)^2 for the partition."""
    return dimension(lam) ** 2


def fock_weight(lam: Partition) -> Frac:
    """(dim lam / d!)^2, the normalized weight of a partition vector."""
    d = sum(lam)
    return Frac(squared_dimension(lam), math.factorial(d) ** 2)


@dataclass(frozen=True)
class EigenSeries:
    """Eigenvalue series of the diagonal point-insertion operator on one
    partition vector; the series minus 1/zeta is a power series."""

    partition: Partition
    series: TruncatedSeries

    def __post_init__(self) -> None:
        tail = self.series - zeta_reciprocal(self.series.order, self.series.var)
        if not tail.is_zero() and tail.min_exp < 0:
            raise ExactError("eigenvalue series must equal 1/zeta plus a power series")


def _exp_linear(c: Frac, order: int, var: str) -> TruncatedSeries:
    """e^{c t} truncated at `order`."""
    return TruncatedSeries.from_function(
        var, lambda k: Frac(c**k, math.factorial(k)), 0, order
    )


@cache
def e0_eigenvalue(lam: Partition, order: int, var: str = "t") -> EigenSeries:
    """Eigenvalue series eps_lam(t) of the diagonal insertion operator:

        sum_{i=1}^{len(lam)} (e^{t(lam_i-i+1/2)} - e^{t(1/2-i)}) + 1/zeta(t).
    """
    if not is_partition(lam):
        raise ExactError(f"not a partition: {lam!r}")
    total = zeta_reciprocal(order, var)
    for i, part in enumerate(lam, start=1):
        a = Frac(2 * (part - i) + 1, 2)
        bshift = Frac(1 - 2 * i, 2)
        total = total + _exp_linear(a, order, var) - _exp_linear(bshift, order, var)
    return EigenSeries(tuple(lam), total)


def _eigen_coefficient(lam: Partition, exp: int) -> Frac:
    """Coefficient of t^exp in eps_lam; exp >= -1."""
    if exp < -1:
        return Frac(0)
    return e0_eigenvalue(tuple(lam), max(exp, 1)).series.coefficient(exp)


# ---------------------------------------------------------------------------
# Disconnected and connected n-point series
# ---------------------------------------------------------------------------


def _point_vars(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1))


def vacuum_total(d: int) -> Frac:
    """sum over partitions of d of (dim/d!)^2; equals 1/d!."""
    return sum((fock_weight(lam) for lam in partitions(d)), Frac(0))


def disconnected_npoint(d: int, n: int, order: int, max_points: int = 4) -> MultiSeries:
    """Degree-d disconnected n-point series: sum over partitions of d of
    (dim/d!)^2 prod_i eps_lam(x_i).  Per-variable min_exp is -1."""
    if n < 1:
        raise ExactError("disconnected_npoint needs n >= 1")
    if n > max_points:
        raise ExactError(f"n={n} exceeds the configured point bound {max_points}")
    if d < 0:
        raise ExactError("degree must be nonnegative")
    vars = _point_vars(n)
    total = MultiSeries.zero(vars, (-1,) * n, (order,) * n)
    for lam in partitions(d):
        eig = e0_eigenvalue(lam, order).series
        factors = [eig.rename(v) for v in vars]
        total = total + fock_weight(lam) * MultiSeries.outer_product(factors)
    return total


def _disjoint_product(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    """Tensor product of two series on disjoint point-variable sets; per-variable
    windows carry over from whichever factor owns the variable."""
    if set(a.vars) & set(b.vars):
        raise ExactError("factors must live on disjoint variable sets")
    vars = tuple(sorted(a.vars + b.vars, key=lambda v: int(v[1:])))
    pos_a = [vars.index(v) for v in a.vars]
    pos_b = [vars.index(v) for v in b.vars]
    mins = [0] * len(vars)
    orders = [0] * len(vars)
    for p, m, o in zip(pos_a, a.min_exps, a.orders):
        mins[p], orders[p] = m, o
    for p, m, o in zip(pos_b, b.min_exps, b.orders):
        mins[p], orders[p] = m, o
    data: dict[tuple[int, ...], Frac] = {}
    for ea, ca in a.data.items():
        for eb, cb in b.data.items():
            full = [0] * len(vars)
            for p, e in zip(pos_a, ea):
                full[p] = e
            for p, e in zip(pos_b, eb):
                full[p] = e
            key = tuple(full)
            data[key] = data.get(key, Frac(0)) + ca * cb
    return MultiSeries(vars, tuple(mins), tuple(orders), data)


def connected_npoint(d: int, n: int, order: int, max_points: int = 4) -> MultiSeries:
    """Degree-d connected n-point series, by vacuum division followed by the
    set-partition cumulant combination over the marked points with degree
    compositions.  Coefficient of prod x_i^{b_i+1} is the connected invariant
    (genus resolved by the dimension constraint)."""
    if n < 1:
        raise ExactError("connected_npoint needs n >= 1")
    if n > max_points:
        raise ExactError(f"n={n} exceeds the configured point bound {max_points}")
    if d < 0:
        raise ExactError("degree must be nonnegative")

    # Disconnected data per nonempty subset of points and per degree, each on
    # the subset's own variables; then divide by the vacuum factor e^q:
    # tilde_m = sum_j (-1)^j/j! * disc_{m-j}.
    points = tuple(range(1, n + 1))
    tilde: dict[tuple[int, ...], list[MultiSeries]] = {}
    for size in range(1, n + 1):
        for subset in combinations(points, size):
            svars = tuple(f"x{i}" for i in subset)
            per_degree = []
            for m in range(d + 1):
                total = MultiSeries.zero(svars, (-1,) * size, (order,) * size)
                for lam in partitions(m):
                    eig = e0_eigenvalue(lam, order).series
                    total = total + fock_weight(lam) * MultiSeries.outer_product(
                        [eig.rename(v) for v in svars]
                    )
                per_degree.append(total)
            tilde[subset] = [
                _msum(
                    (Frac((-1) ** j, math.factorial(j)) * per_degree[m - j] for j in range(m + 1)),
                    MultiSeries.zero(svars, (-1,) * size, (order,) * size),
                )
                for m in range(d + 1)
            ]

    # Cumulant recursion pinned at the least point of each subset.
    conn: dict[tuple[tuple[int, ...], int], MultiSeries] = {}

    def connected(subset: tuple[int, ...], m: int) -> MultiSeries:
        key = (subset, m)
        if key in conn:
            return conn[key]
        first, rest = subset[0], subset[1:]
        total = tilde[subset][m]
        for size in range(0, len(rest)):
            for extra in combinations(rest, size):
                block = tuple(sorted((first,) + extra))
                if block == subset:
                    continue
                comp = tuple(sorted(set(subset) - set(block)))
                for a in range(m + 1):
                    right = tilde[comp][m - a]
                    if right.is_zero():
                        continue
                    total = total - _disjoint_product(connected(block, a), right)
        conn[key] = total
        return total

    return connected(points, d)


def _msum(terms, start: MultiSeries) -> MultiSeries:
    total = start
    for t in terms:
        total = total + t
    return total


@cache
def connected_coefficient(d: int, b: tuple[int, ...]) -> Frac:
    """Single connected invariant by the logarithm route, valid for any number
    of points: coefficient of q^d prod y_j^{m_j} (times prod m_j!) in the log of
    the source-deformed vacuum sum

        M(q, y) = sum_{d'<=d} q^{d'} sum_{lam |- d'} (dim/d'!)^2
                  prod_j exp(y_j * [t^{v_j+1}] eps_lam),

    where v_1 < ... < v_J are the distinct entries of b and m_j their
    multiplicities.  The empty b gives the connected vacuum, [q^d] q.
    """
    if d < 0:
        raise ExactError("degree must be nonnegative")
    if any(bi < -2 for bi in b):
        raise ExactError("descendant exponents must be >= -2")
    b = tuple(sorted(b))
    if not b:
        return Frac(1) if d == 1 else Frac(0)
    values = sorted(set(b))
    mults = [b.count(v) for v in values]
    vars = ("q",) + tuple(f"y{j}" for j in range(1, len(values) + 1))
    orders = (d,) + tuple(mults)
    zero = MultiSeries.zero(vars, (0,) * len(vars), orders)
    total = zero
    for dp in range(d + 1):
        qfactor = TruncatedSeries.monomial("q", dp, 1, d)
        for lam in partitions(dp):
            factors = [qfactor]
            for v, m, j in zip(values, mults, range(1, len(values) + 1)):
                c = _eigen_coefficient(lam, v + 1)
                factors.append(_exp_linear(c, m, f"y{j}"))
            total = total + fock_weight(lam) * MultiSeries.outer_product(factors)
    log_total = multiseries_log(total)
    target = (d,) + tuple(mults)
    out = log_total.coefficient(target)
    for m in mults:
        out *= math.factorial(m)
    return out


# ---------------------------------------------------------------------------
# Stationary invariants and unit insertions
# ---------------------------------------------------------------------------


def _dimension_genus(d: int, b: tuple[int, ...], units: int = 0) -> int | None:
    """The unique genus g >= 0 with sum(b) = 2g - 2 + 2d + units, or None."""
    twog = sum(b) + 2 - 2 * d - units
    if twog < 0 or twog % 2:
        return None
    return twog // 2


def stationary_invariant(g: int, n: int, d: int, b, *, explain: bool = False):
    """The connected invariant with n point classes and descendant exponents b
    (each >= -2) at genus g and degree d.

    Returns the exact rational value; with ``explain=True`` returns
    ``(value, flag)`` where flag is ``"dimension-violation"`` when the
    constraint sum(b) = 2g - 2 + 2d fails (value 0) and ``None`` otherwise.
    """
    b = tuple(int(x) for x in b)
    if len(b) != n:
        raise ExactError(f"expected {n} descendant exponents, got {len(b)}")
    if g < 0 or d < 0:
        raise ExactError("genus and degree must be nonnegative")
    if any(bi < -2 for bi in b):
        raise ExactError("descendant exponents must be >= -2")
    if sum(b) != 2 * g - 2 + 2 * d:
        return (Frac(0), "dimension-violation") if explain else Frac(0)
    value = connected_coefficient(d, tuple(sorted(b)))
    return (value, None) if explain else value


_STRING_BASE: dict[tuple[int, int, tuple[int, ...]], Frac] = {
    # genus, unit count, descendant exponents  ->  value (degree 0)
    (0, 2, (0,)): Frac(1),
}


@cache
def _unit_insertions(g: int, k: int, d: int, b: tuple[int, ...]) -> Frac:
    if sum(b) != 2 * g - 2 + 2 * d + k:
        return Frac(0)
    if k == 0:
        return connected_coefficient(d, b)
    if any(bi == -1 for bi in b):
        return Frac(0)
    if any(bi < 0 for bi in b):
        raise ExactError(
            "string reduction does not apply to descendant exponents below -1: "
            f"<tau_0(1)^{k} {b}>_{g} degree {d}"
        )
    npts = len(b) + k
    if d == 0 and 2 * g - 2 + npts - 1 <= 0:
        key = (g, k, b)
        if key in _STRING_BASE:
            return _STRING_BASE[key]
        raise ExactError(
            "string reduction reached an undefined unstable correlator: "
            f"genus {g}, degree 0, {k} unit insertions, exponents {b}"
        )
    total = Frac(0)
    for i, bi in enumerate(b):
        if bi == 0:
            continue  # lowers to exponent -1, which vanishes
        lowered = tuple(sorted(b[:i] + (bi - 1,) + b[i + 1 :]))
        total += _unit_insertions(g, k - 1, d, lowered)
    return total


def unit_insertions(g: int, n: int, k: int, d: int, b) -> Frac:
    """The connected invariant with k unit-class insertions and n point-class
    insertions with descendant exponents b, genus g, degree d; computed by
    repeated string-equation reduction to stationary invariants plus the
    degree-0 base case with two units and one point class."""
    b = tuple(int(x) for x in b)
    if len(b) != n:
        raise ExactError(f"expected {n} descendant exponents, got {len(b)}")
    if g < 0 or d < 0 or k < 0:
        raise ExactError("genus, degree and unit count must be nonnegative")
    if any(bi < -2 for bi in b):
        raise ExactError("descendant exponents must be >= -2")
    return _unit_insertions(g, k, d, tuple(sorted(b)))


# ---------------------------------------------------------------------------
# Closed-form comparison for the unstable (0,1) and (0,2) series
# ---------------------------------------------------------------------------


def catalan_inverse(order: int, var: str = "w") -> TruncatedSeries:
    """The series z(x) = sum_m Catalan(m) x^{-(2m+1)} inverting x = z + 1/z
    near z = 0, written in the variable w = 1/x."""
    if order < 1:
        raise ExactError("catalan_inverse needs order >= 1")

    def coeff(k: int) -> Frac:
        if k % 2 == 0:
            return Frac(0)
        m = (k - 1) // 2
        return Frac(math.comb(2 * m, m), m + 1)

    return TruncatedSeries.from_function(var, coeff, 1, order)


def _one_point_closed_form(order: int, var: str = "w") -> TruncatedSeries:
    """-2z + (z + 1/z) log(1 + z^2) with z = z(x), as a series in w = 1/x."""
    z = catalan_inverse(order + 2, var)
    log_part = series_log(TruncatedSeries.constant(var, 1, order + 2) + z * z)
    return (-2) * z.truncate(order) + log_part.shift_exponent(-1).truncate(order)


def _two_point_closed_form(order: int, v1: str = "w1", v2: str = "w2") -> MultiSeries:
    """-log(1 - z(x1) z(x2)) as a series in w_i = 1/x_i."""
    z1 = catalan_inverse(order, v1)
    z2 = catalan_inverse(order, v2)
    total = MultiSeries.zero((v1, v2), (0, 0), (order, order))
    k = 1
    while k <= order:
        total = total + Frac(1, k) * MultiSeries.outer_product([z1**k, z2**k])
        k += 1
    return total


def unstable_series_report(order: int, perturb=None) -> tuple[bool, str | None]:
    """Compare the degree-summed engine series against the closed forms.

    One-point side: -sum_d (2d-2)! <tau_{2d-2}>_{0,1}^d x^{-(2d-1)} must equal
    -2z + (z+1/z) log(1+z^2).  Two-point side:
    sum b_1! b_2! <tau_{b_1} tau_{b_2}>_{0,2}^d x_1^{-(b_1+1)} x_2^{-(b_2+1)}
    must equal -log(1 - z_1 z_2).  Both compared through x^{-order}.

    `perturb` optionally maps ("01", d) or ("02", b1, b2) to a rational shift
    of the corresponding engine invariant (negative-control hook).  Returns
    (ok, None) on success or (False, message) naming the first mismatching
    exponent.
    """
    if order < 1:
        raise ExactError("unstable_series_check needs order >= 1")
    perturb = perturb or {}

    rhs1 = _one_point_closed_form(order)
    for dd in range(1, order + 2):
        exp = 2 * dd - 1
        if exp > order:
            break
        value = stationary_invariant(0, 1, dd, (2 * dd - 2,))
        value += perturb.get(("01", dd), Frac(0))
        lhs = -math.factorial(2 * dd - 2) * value
        if lhs != rhs1.coefficient(exp):
            return False, (
                f"one-point series mismatch at exponent x^-{exp}: "
                f"engine {lhs}, closed form {rhs1.coefficient(exp)}"
            )
    for exp in range(1, order + 1):
        if exp % 2 == 0 and rhs1.coefficient(exp) != 0:
            return False, f"one-point closed form has even exponent x^-{exp}"

    rhs2 = _two_point_closed_form(order)
    for e1 in range(1, order + 1):
        for e2 in range(1, order + 1):
            b1, b2 = e1 - 1, e2 - 1
            if (b1 + b2) % 2 == 0:
                dd = (b1 + b2 + 2) // 2
                value = stationary_invariant(0, 2, dd, (b1, b2))
                value += perturb.get(("02", b1, b2), Frac(0))
                lhs = math.factorial(b1) * math.factorial(b2) * value
            else:
                lhs = Frac(0)
            if lhs != rhs2.coefficient((e1, e2)):
                return False, (
                    f"two-point series mismatch at exponent x1^-{e1} x2^-{e2}: "
                    f"engine {lhs}, closed form {rhs2.coefficient((e1, e2))}"
                )
    return True, None


def unstable_series_check(order: int) -> bool:
    """True iff both degree-summed unstable series match their closed forms
    through x^{-order}; see unstable_series_report."""
    ok, _ = unstable_series_report(order)
    return ok
