"""Wave-function assembly and the difference-operator consistency checks.

The stationary invariants computed by :mod:`p1qcurve.wedge` assemble into the
logarithm of a wave function.  Every ingredient of that assembly lives in a
small bigraded space: finite combinations of

    (x - x log x)/hbar,     log x,      hbar^p * x^{-i}   (i >= -1),

each carrying an explicit power of hbar.  The space is closed under the
substitution t -> -hbar d/dx applied to log x (for any Laurent series a(t)
with minimal exponent -1), under x-differentiation, and therefore under the
shift operators exp(m hbar d/dx) realized as truncated Taylor expansions.

On top of that calculus the module verifies, all in exact arithmetic:

* ``bernoulli_operator`` -- the scalar prefactor B(-hbar d/dx) applied to
  (x - x log x)/hbar, with B(t) = t/(e^t - 1);
* ``theta_resummation_check`` -- resumming the unit-class insertions of a
  fixed (genus, points, degree) block into a half-step shift of x;
* ``build_degree_graded_x`` -- the degree-graded comparison between the
  exponentiated positive-degree blocks (from stationary invariants) and the
  partition sums of :mod:`p1qcurve.qcurve`, order by order in 1/u, u = x/hbar;
* ``conjugation_check`` -- conjugating the unit shifts e^{+-hbar d/dx} by the
  exponentiated Bernoulli prefactor produces the weighted shifts 1/(x+hbar)
  e^{hbar d/dx} and x e^{-hbar d/dx};
* ``qce_verification`` -- the factored verification of the difference
  equation [e^{hbar d/dx} + e^{-hbar d/dx} - x] Psi = 0: shift recursion of
  the partition sums, conjugation identities, and the degree-graded match;
* ``semiclassical_check`` -- the hbar^0 and hbar^1 terms of the formal
  exponent reproduce the plane curve x = z + 1/z and its subleading
  correction exactly;
* ``toda_specialization_check`` -- the second difference of the Bernoulli
  prefactor telescopes to x/(x+hbar), and the quadratic lattice relations of
  the partition sums hold degree by degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Frac
from functools import cache
from itertools import combinations_with_replacement
from typing import Iterator, Mapping

from .exactcore import (
    ExactError,
    Polynomial,
    RationalFunction,
    TruncatedSeries,
)
from .qcurve import toda_quadratic_check, verify_xd_recursion, x_partition
from .toprec import s0_s1_closed_forms
from .wedge import stationary_invariant, unit_insertions

__all__ = [
    "DegreeGradedX",
    "LogLaurentForm",
    "QceReport",
    "XEntry",
    "apply_laurent_operator",
    "bernoulli_number",
    "bernoulli_operator",
    "build_degree_graded_x",
    "conjugation_check",
    "form_derivative",
    "qce_verification",
    "semiclassical_check",
    "shift_form",
    "theta_resummation_check",
    "toda_specialization_check",
]


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------


@cache
def bernoulli_number(m: int) -> Frac:
    """Exact Bernoulli number B_m with B_1 = -1/2 (so that
    t/(e^t - 1) = sum_m B_m t^m / m!)."""
    if m < 0:
        raise ExactError("Bernoulli index must be nonnegative")
    if m == 0:
        return Frac(1)
    # sum_{j=0}^{m} C(m+1, j) B_j = 0
    total = Frac(0)
    for j in range(m):
        total += math.comb(m + 1, j) * bernoulli_number(j)
    return -total / (m + 1)


# ---------------------------------------------------------------------------
# The bigraded log-Laurent space
# ---------------------------------------------------------------------------


def _clean_map(items: Mapping) -> dict:
    return {k: Frac(v) for k, v in items.items() if v}


class LogLaurentForm:
    """Finite combination of (x - x log x)/hbar, log x, and hbar^p x^{-i}.

    ``anti`` maps an hbar-power p to the coefficient of
    hbar^p * (x - x log x)/hbar; ``log`` maps p to the coefficient of
    hbar^p * log x; ``tail`` maps (p, i) with i >= -1 to the coefficient of
    hbar^p * x^{-i}.  ``order`` is the hbar-order through which the tail is
    complete; arithmetic keeps the minimum of the operands' orders.
    """

    __slots__ = ("anti", "log", "tail", "order")

    def __init__(
        self,
        anti: Mapping[int, Frac],
        log: Mapping[int, Frac],
        tail: Mapping[tuple[int, int], Frac],
        order: int,
    ):
        self.anti = _clean_map(anti)
        self.log = _clean_map(log)
        self.tail = _clean_map(tail)
        for _, i in self.tail:
            if i < -1:
                raise ExactError("tail exponents are restricted to x^{-i}, i >= -1")
        self.order = order

    @classmethod
    def zero(cls, order: int) -> "LogLaurentForm":
        return cls({}, {}, {}, order)

    def is_zero(self) -> bool:
        return not (self.anti or self.log or self.tail)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogLaurentForm):
            return NotImplemented
        return (
            self.anti == other.anti
            and self.log == other.log
            and self.tail == other.tail
        )

    def __hash__(self):
        raise TypeError("LogLaurentForm is mutable-by-convention; not hashable")

    def __add__(self, other: "LogLaurentForm") -> "LogLaurentForm":
        if not isinstance(other, LogLaurentForm):
            return NotImplemented
        anti = dict(self.anti)
        for p, c in other.anti.items():
            anti[p] = anti.get(p, Frac(0)) + c
        log = dict(self.log)
        for p, c in other.log.items():
            log[p] = log.get(p, Frac(0)) + c
        tail = dict(self.tail)
        for key, c in other.tail.items():
            tail[key] = tail.get(key, Frac(0)) + c
        return LogLaurentForm(anti, log, tail, min(self.order, other.order))

    def __neg__(self) -> "LogLaurentForm":
        return self.scaled(Frac(-1))

    def __sub__(self, other: "LogLaurentForm") -> "LogLaurentForm":
        return self + (-other)

    def scaled(self, c) -> "LogLaurentForm":
        c = Frac(c)
        return LogLaurentForm(
            {p: c * v for p, v in self.anti.items()},
            {p: c * v for p, v in self.log.items()},
            {k: c * v for k, v in self.tail.items()},
            self.order,
        )

    def hbar_slice(self, p: int) -> dict:
        """The content at one hbar-power: coefficients of
        (x - x log x)/hbar, log x, and the map i -> coefficient of x^{-i}."""
        return {
            "anti": self.anti.get(p, Frac(0)),
            "log": self.log.get(p, Frac(0)),
            "tail": {i: c for (q, i), c in self.tail.items() if q == p},
        }

    def __repr__(self) -> str:
        bits = []
        for p, c in sorted(self.anti.items()):
            bits.append(f"{c}*h^{p}*(x-xlogx)/h")
        for p, c in sorted(self.log.items()):
            bits.append(f"{c}*h^{p}*logx")
        for (p, i), c in sorted(self.tail.items()):
            bits.append(f"{c}*h^{p}*x^{-i}")
        body = " + ".join(bits) if bits else "0"
        return f"LogLaurentForm({body}; order={self.order})"


def form_derivative(form: LogLaurentForm) -> LogLaurentForm:
    """d/dx on the bigraded space:

        d/dx (x - x log x)/hbar = -(log x)/hbar,
        d/dx log x = x^{-1},
        d/dx x^{-i} = -i x^{-(i+1)}.
    """
    log: dict[int, Frac] = {}
    tail: dict[tuple[int, int], Frac] = {}
    for p, c in form.anti.items():
        log[p - 1] = log.get(p - 1, Frac(0)) - c
    for p, c in form.log.items():
        key = (p, 1)
        tail[key] = tail.get(key, Frac(0)) + c
    for (p, i), c in form.tail.items():
        if i == 0:
            continue
        key = (p, i + 1)
        tail[key] = tail.get(key, Frac(0)) - i * c
    return LogLaurentForm({}, log, tail, form.order)


def _grade_shift(form: LogLaurentForm, j: int, order: int) -> LogLaurentForm:
    """Multiply by hbar^j, dropping content above the working hbar-order."""
    return LogLaurentForm(
        {p + j: c for p, c in form.anti.items() if p + j <= order},
        {p + j: c for p, c in form.log.items() if p + j <= order},
        {(p + j, i): c for (p, i), c in form.tail.items() if p + j <= order},
        order,
    )


def shift_form(form: LogLaurentForm, m: int, order: int | None = None) -> LogLaurentForm:
    """The shifted form f(x + m*hbar) as a truncated Taylor expansion

        f(x + m hbar) = sum_{j>=0} (m hbar)^j / j! * f^{(j)}(x),

    exact through the working hbar-order.  On the log x piece this realizes
    the rewrite log(x + m hbar) = log x + sum_j (-1)^{j+1} (m hbar/x)^j / j.
    """
    if order is None:
        order = form.order
    total = LogLaurentForm(form.anti, form.log, form.tail, order)
    deriv = form
    for j in range(1, order + 2):
        deriv = form_derivative(deriv)
        if deriv.is_zero():
            break
        term = _grade_shift(deriv, j, order).scaled(Frac(m**j, math.factorial(j)))
        total = total + term
    return total


# ---------------------------------------------------------------------------
# The operator image of a Laurent series, and the Bernoulli prefactor
# ---------------------------------------------------------------------------


def apply_laurent_operator(a: TruncatedSeries, order: int) -> LogLaurentForm:
    """Image of log x under a(-hbar d/dx) for a Laurent series a with minimal
    exponent -1:

        a(-hbar d/dx)(log x) = a_{-1} (x - x log x)/hbar + a_0 log x
                               - sum_{i>=1} a_i (i-1)! hbar^i / x^i.
    """
    if a.min_exp < -1:
        raise ExactError("operator series must not go below 1/t")
    upto = min(order, a.order)
    anti: dict[int, Frac] = {}
    log: dict[int, Frac] = {}
    tail: dict[tuple[int, int], Frac] = {}
    c = a.coefficient(-1) if a.min_exp <= -1 else Frac(0)
    if c:
        anti[0] = c
    c = a.coefficient(0) if a.min_exp <= 0 <= upto else Frac(0)
    if c:
        log[0] = c
    for i in range(1, upto + 1):
        c = a.coefficient(i)
        if c:
            tail[(i, i)] = -c * math.factorial(i - 1)
    return LogLaurentForm(anti, log, tail, upto)


def bernoulli_operator(order: int) -> LogLaurentForm:
    """B(-hbar d/dx) applied to (x - x log x)/hbar, through hbar-order
    ``order``; B(t) = t/(e^t - 1).

    Since (-hbar d/dx)((x - x log x)/hbar) = log x, this is the image of the
    Laurent series B(t)/t = 1/t - 1/2 + sum_{m>=2} B_m t^{m-1}/m! under
    :func:`apply_laurent_operator`; the expansion starts

        (x - x log x)/hbar - (1/2) log x - hbar/(12 x) + O(hbar^3).
    """
    if order < 0:
        raise ExactError("order must be nonnegative")
    series = TruncatedSeries.from_function(
        "t",
        lambda k: Frac(bernoulli_number(k + 1), math.factorial(k + 1)),
        -1,
        order,
    )
    return apply_laurent_operator(series, order)


# ---------------------------------------------------------------------------
# Diagonal (pure hbar/x) series helpers
# ---------------------------------------------------------------------------


def _rmul(a: list[Frac], b: list[Frac], order: int) -> list[Frac]:
    out = [Frac(0)] * (order + 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if i + j > order:
                break
            out[i + j] += ai * bj
    return out


def _rexp(a: list[Frac], order: int) -> list[Frac]:
    if a[0]:
        raise ExactError("exponential needs a vanishing constant term")
    out = [Frac(0)] * (order + 1)
    out[0] = Frac(1)
    term = [Frac(1)] + [Frac(0)] * order
    for j in range(1, order + 1):
        term = _rmul(term, a, order)
        inv = Frac(1, math.factorial(j))
        for k in range(order + 1):
            out[k] += inv * term[k]
        if all(c == 0 for c in term):
            break
    return out


def _binomial_series(exponent: int, m: int, order: int) -> list[Frac]:
    """(1 + m*r)^exponent as a list of r-coefficients, exponent in Z."""
    out = []
    for l in range(order + 1):
        c = Frac(1)
        for t in range(l):
            c *= Frac(exponent - t)
        out.append(c * Frac(m**l, math.factorial(l)))
    return out


def _diagonal_series(form: LogLaurentForm, order: int) -> list[Frac]:
    """Read a form with no (x - x log x)/hbar part and purely diagonal tail
    (hbar-power equal to 1/x-power) as a series in r = hbar/x."""
    if form.anti:
        raise ExactError("form still contains the antiderivative piece")
    out = [Frac(0)] * (order + 1)
    for (p, i), c in form.tail.items():
        if p != i:
            raise ExactError(f"tail is not diagonal at {(p, i)}")
        if 0 <= p <= order:
            out[p] = c
    return out


def _exp_of_difference(delta: LogLaurentForm, order: int) -> tuple[int, list[Frac]]:
    """Exponentiate a form of the shape c*log x + (diagonal tail with zero
    constant term); returns (c, exp(tail)) with c required integral, so that
    the exponential is x^c times a series in r = hbar/x."""
    if set(delta.log) - {0}:
        raise ExactError("log x appears at a nonzero hbar-power")
    c = delta.log.get(0, Frac(0))
    if c.denominator != 1:
        raise ExactError("log x coefficient must be an integer to exponentiate")
    series = _diagonal_series(delta, order)
    return int(c), _rexp(series, order)


# ---------------------------------------------------------------------------
# Conjugation of the unit shifts by the Bernoulli prefactor
# ---------------------------------------------------------------------------


def conjugation_check(k_max: int, hbar_order: int = 8) -> bool:
    """Verify, on the monomial family x^k for k = 0..k_max and through
    hbar-order ``hbar_order``, the three conjugation identities

        exp(-A) e^{+hbar d/dx} exp(A) = (x + hbar)^{-1} e^{+hbar d/dx},
        exp(-A) e^{-hbar d/dx} exp(A) = x e^{-hbar d/dx},
        exp(-A) x exp(A) = x,

    where A is the Bernoulli prefactor of :func:`bernoulli_operator`.
    Applied to x^k the first identity reads
    exp(A(x+hbar) - A(x)) * (x+hbar)^k = (x+hbar)^{k-1}, and likewise with
    x - hbar and the weight x for the second; both sides are expanded in the
    bigraded truncation and compared exactly.
    """
    if k_max < 1:
        raise ExactError("k_max must be at least 1")
    order = hbar_order
    prefactor = bernoulli_operator(order)
    diff_up = shift_form(prefactor, 1, order) - prefactor
    diff_down = shift_form(prefactor, -1, order) - prefactor
    xpow_up, exp_up = _exp_of_difference(diff_up, order)
    xpow_down, exp_down = _exp_of_difference(diff_down, order)
    # the exponentials must carry the weights 1/x and x respectively
    if xpow_up != -1 or xpow_down != 1:
        return False
    for k in range(k_max + 1):
        # first identity applied to x^k: both sides are x^{k-1} times a
        # series in r = hbar/x
        lhs = _rmul(exp_up, _binomial_series(k, 1, order), order)
        rhs = _binomial_series(k - 1, 1, order)
        if lhs != rhs:
            return False
        # second identity applied to x^k: both sides are x^{k+1} times a
        # series in r
        lhs = _rmul(exp_down, _binomial_series(k, -1, order), order)
        rhs = _binomial_series(k, -1, order)
        if lhs != rhs:
            return False
        # third identity: the prefactor exponentials are multiplication
        # operators, so conjugating x by them leaves x^{k+1} unchanged --
        # nothing to compute
    return True


# ---------------------------------------------------------------------------
# Resummation of the unit-class insertions
# ---------------------------------------------------------------------------


def _sorted_compositions(total: int, n: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Weakly increasing exponent tuples with the given sum, together with the
    number of ordered rearrangements of each."""
    if total < 0:
        return
    for tup in combinations_with_replacement(range(total + 1), n):
        if sum(tup) != total:
            continue
        count = math.factorial(n)
        for v in set(tup):
            count //= math.factorial(tup.count(v))
        yield tup, count


def _theta_definition(g: int, n: int, d: int, order: int) -> LogLaurentForm:
    """The (g, n, d) block as defined: the sum over k unit-class insertions

        sum_k sum_b <tau_0(1)^k prod tau_{b_i}(omega)>_{g,n+k}^d
              * (-hbar/2)^k / k! * prod b_i! / x^{n + sum b},

    with the two closed extra terms -(x - x log x) * hbar^0 ... for the
    unstable (0, 1, 0) block, which starts -x + x log x + (hbar/2) log x.
    Nonzero terms are asserted to sit on the diagonal
    (1/x-power) - (hbar-power) = 2g - 2 + n + 2d: the genus grading is checked,
    not assumed.
    """
    anti: dict[int, Frac] = {}
    log: dict[int, Frac] = {}
    tail: dict[tuple[int, int], Frac] = {}
    offset = 2 * g - 2 + n + 2 * d
    if (g, n, d) == (0, 1, 0):
        anti[1] = Frac(-1)
        log[1] = Frac(1, 2)
    for k in range(order + 1):
        for sb in range(0, offset + k - n + 1):
            for b, count in _sorted_compositions(sb, n):
                value = unit_insertions(g, n, k, d, b)
                if not value:
                    continue
                if sb != 2 * g - 2 + 2 * d + k:
                    raise ExactError(
                        "grading violation: nonzero correlator off the "
                        f"dimension diagonal at g={g}, n={n}, d={d}, k={k}, b={b}"
                    )
                coeff = value * Frac((-1) ** k * count, 2**k * math.factorial(k))
                for bi in b:
                    coeff *= math.factorial(bi)
                key = (k, n + sb)
                assert key[1] - key[0] == offset
                tail[key] = tail.get(key, Frac(0)) + coeff
    return LogLaurentForm(anti, log, tail, order)


def _theta_shifted(g: int, n: int, d: int, order: int) -> LogLaurentForm:
    """The same block after resummation: no unit-class insertions, but every
    x replaced by x + hbar/2, expanded back into the bigraded truncation.

    For (0, 1, 0) this is -(x + hbar/2) + (x + hbar/2) log(x + hbar/2);
    otherwise sum_b <prod tau_{b_i}(omega)>_{g,n}^d prod b_i! /
    (x + hbar/2)^{n + sum b}.
    """
    anti: dict[int, Frac] = {}
    log: dict[int, Frac] = {}
    tail: dict[tuple[int, int], Frac] = {}
    if (g, n, d) == (0, 1, 0):
        # -(x + h/2) + (x + h/2)(log x + log(1 + h/(2x)))
        anti[1] = Frac(-1)
        log[1] = Frac(1, 2)
        tail[(1, 0)] = Frac(-1, 2)
        for j in range(1, order + 1):
            c = Frac((-1) ** (j + 1), j * 2**j)
            key = (j, j - 1)
            tail[key] = tail.get(key, Frac(0)) + c  # x * log(1 + h/(2x))
            if j + 1 <= order:
                key = (j + 1, j)
                tail[key] = tail.get(key, Frac(0)) + c / 2  # (h/2) * same log
        return LogLaurentForm(anti, log, tail, order)
    sb = 2 * g - 2 + 2 * d
    if sb < 0:
        return LogLaurentForm({}, {}, {}, order)
    for b, count in _sorted_compositions(sb, n):
        value = stationary_invariant(g, n, d, b)
        if not value:
            continue
        coeff = value * count
        for bi in b:
            coeff *= math.factorial(bi)
        m = n + sb
        # (x + hbar/2)^{-m} = sum_l C(m-1+l, l) (-1/2)^l hbar^l x^{-(m+l)}
        for l in range(order + 1):
            key = (l, m + l)
            c = coeff * math.comb(m - 1 + l, l) * Frac((-1) ** l, 2**l)
            tail[key] = tail.get(key, Frac(0)) + c
    return LogLaurentForm(anti, log, tail, order)


def theta_resummation_check(g: int, n: int, d: int, order: int) -> bool:
    """True iff the unit-insertion sum for the (g, n, d) block equals its
    resummed half-step-shifted form, coefficientwise through hbar-order
    ``order`` in the bigraded truncation."""
    if g < 0 or n < 1 or d < 0 or order < 1:
        raise ExactError("need g >= 0, n >= 1, d >= 0, order >= 1")
    return _theta_definition(g, n, d, order) == _theta_shifted(g, n, d, order)


# ---------------------------------------------------------------------------
# Degree-graded comparison with the partition sums
# ---------------------------------------------------------------------------


@cache
def _degree_block(d: int, order: int, route: str) -> tuple[Frac, ...]:
    """Coefficients (in w = 1/u, u = x/hbar) of the degree-d block of the
    specialized generating function: the sum over genus and point number of

        (-1)^n / n! * (block of _theta_definition/_theta_shifted in u-units).

    A term with k unit insertions and exponents b sits at
    w^(2g - 2 + n + 2d + k); the degree-1 block also carries the unmarked
    constant, equal to the one-point invariant by the divisor equation.
    """
    if d < 1:
        raise ExactError("degree blocks are formed for d >= 1")
    out = [Frac(0)] * (order + 1)
    if d == 1:
        out[0] += stationary_invariant(0, 1, 1, (0,))
    g = 0
    while 2 * g - 1 + 2 * d <= order:
        for n in range(1, order + 1):
            lead = 2 * g - 2 + n + 2 * d
            if lead > order:
                break
            prefac = Frac((-1) ** n, math.factorial(n))
            if route == "shift":
                sb = 2 * g - 2 + 2 * d
                for b, count in _sorted_compositions(sb, n):
                    value = stationary_invariant(g, n, d, b)
                    if not value:
                        continue
                    coeff = prefac * value * count
                    for bi in b:
                        coeff *= math.factorial(bi)
                    m = n + sb
                    for l in range(order - lead + 1):
                        out[lead + l] += (
                            coeff * math.comb(m - 1 + l, l) * Frac((-1) ** l, 2**l)
                        )
            elif route == "definition":
                for k in range(order - lead + 1):
                    sb = 2 * g - 2 + 2 * d + k
                    for b, count in _sorted_compositions(sb, n):
                        value = unit_insertions(g, n, k, d, b)
                        if not value:
                            continue
                        coeff = prefac * value * count
                        coeff *= Frac((-1) ** k, 2**k * math.factorial(k))
                        for bi in b:
                            coeff *= math.factorial(bi)
                        out[lead + k] += coeff
            else:
                raise ExactError(f"unknown route {route!r}")
        g += 1
    # dimension forces the block to start at w^(2d-1) (constant excepted)
    for j in range(1, 2 * d - 1):
        if out[j]:
            raise ExactError(f"degree-{d} block has unexpected support at 1/u^{j}")
    return tuple(out)


@dataclass(frozen=True)
class XEntry:
    """One degree of the degree-graded comparison: the geometric series in
    1/u next to the partition-sum rational function of u."""

    degree: int
    geometric: TruncatedSeries
    partition_sum: RationalFunction


@dataclass(frozen=True)
class DegreeGradedX:
    """Both sides of the degree-graded generating function, per degree, plus
    the list of disagreements (empty when the two constructions match)."""

    order: int
    entries: tuple[XEntry, ...]
    disagreements: tuple[tuple[int, int, Frac, Frac], ...]

    def mismatches(self) -> tuple[tuple[int, int, Frac, Frac], ...]:
        """(degree, exponent, geometric value, partition-sum value) tuples."""
        return self.disagreements

    def __bool__(self) -> bool:
        return not self.disagreements


def build_degree_graded_x(
    d_max: int = 4,
    order: int = 12,
    route: str = "shift",
    strict: bool = True,
) -> DegreeGradedX:
    """Build X_d two ways for 0 <= d <= d_max and compare through 1/u-order
    ``order``.

    Geometric side: exponentiate the positive-degree blocks of the
    specialized generating function,

        sum_d q^d X_d^{geom} = exp( sum_{d>=1} q^d * degree-d block ),

    every block a series in 1/u assembled from stationary invariants.
    Partition-sum side: the rational functions of :func:`qcurve.x_partition`,
    expanded at u = infinity.  With ``strict`` a disagreement raises,
    reporting (degree, exponent, both values).
    """
    if d_max < 0 or order < 1:
        raise ExactError("need d_max >= 0 and order >= 1")
    blocks = {dd: _degree_block(dd, order, route) for dd in range(1, d_max + 1)}
    # exponentiate in q, coefficients are 1/u-series
    zero = [Frac(0)] * (order + 1)
    one = [Frac(1)] + [Frac(0)] * order
    geom: list[list[Frac]] = [list(one)] + [list(zero) for _ in range(d_max)]
    power: list[list[Frac]] = [list(one)] + [list(zero) for _ in range(d_max)]
    for m in range(1, d_max + 1):
        nxt: list[list[Frac]] = [list(zero) for _ in range(d_max + 1)]
        for da in range(d_max):
            if all(c == 0 for c in power[da]):
                continue
            for db in range(1, d_max + 1 - da):
                prod = _rmul(power[da], list(blocks[db]), order)
                for j in range(order + 1):
                    nxt[da + db][j] += prod[j]
        power = nxt
        inv = Frac(1, math.factorial(m))
        for dd in range(1, d_max + 1):
            for j in range(order + 1):
                geom[dd][j] += inv * power[dd][j]
    entries = []
    bad: list[tuple[int, int, Frac, Frac]] = []
    for dd in range(d_max + 1):
        series = TruncatedSeries("uinv", 0, geom[dd], order)
        comb_side = x_partition(dd)
        expansion = comb_side.series_at_infinity(order, "uinv")
        for j in range(order + 1):
            a, b = series.coefficient(j), expansion.coefficient(j)
            if a != b:
                bad.append((dd, j, a, b))
        entries.append(XEntry(dd, series, comb_side))
    result = DegreeGradedX(order, tuple(entries), tuple(bad))
    if strict and bad:
        dd, j, a, b = bad[0]
        raise ExactError(
            f"degree-graded mismatch at degree {dd}, 1/u-exponent {j}: "
            f"geometric side {a}, partition-sum side {b}"
        )
    return result


# ---------------------------------------------------------------------------
# The factored difference-equation verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QceReport:
    """Outcome of the three-link verification; truthy iff every link holds."""

    d_max: int
    links: tuple[tuple[str, bool], ...]
    first_failure: str | None

    def __bool__(self) -> bool:
        return all(ok for _, ok in self.links)


def qce_verification(
    d_max: int,
    recursion_perturbation: Mapping[int, RationalFunction] | None = None,
) -> QceReport:
    """Verify the difference equation on the wave function through its three
    exact links:

    1. ``recursion`` -- the shift recursion of the partition sums for
       1 <= d <= d_max (the degree-d component of the weighted difference
       equation);
    2. ``conjugation`` -- the weight-producing conjugation identities through
       hbar-order 8 on the monomials x^0..x^6;
    3. ``degree-graded`` -- the geometric-vs-partition-sum match for
       d <= min(d_max, 4) through 1/u-order 12.

    ``recursion_perturbation`` adds the given rational functions to the named
    degrees inside the recursion link only (negative-control hook).  All
    three links are evaluated and reported; ``first_failure`` names the first
    broken one, e.g. ``"recursion, d=3"``.
    """
    if d_max < 1:
        raise ExactError("d_max must be at least 1")
    rec_ok = True
    rec_detail: str | None = None
    if recursion_perturbation is None:
        for dd in range(1, d_max + 1):
            if not verify_xd_recursion(dd):
                rec_ok = False
                rec_detail = f"recursion, d={dd}"
                break
    else:
        def perturbed(j: int) -> RationalFunction:
            base = x_partition(j)
            extra = recursion_perturbation.get(j)
            return base + extra if extra is not None else base

        u = RationalFunction.identity()
        u_plus_one = RationalFunction(Polynomial([1, 1]))
        for dd in range(1, d_max + 1):
            xd = perturbed(dd)
            lhs = perturbed(dd - 1).shift(1) / u_plus_one + u * (xd.shift(-1) - xd)
            if not lhs.is_zero():
                rec_ok = False
                rec_detail = f"recursion, d={dd}"
                break
    conj_ok = conjugation_check(6, hbar_order=8)
    graded = build_degree_graded_x(min(d_max, 4), 12, strict=False)
    graded_ok = bool(graded)
    links = (
        ("recursion", rec_ok),
        ("conjugation", conj_ok),
        ("degree-graded", graded_ok),
    )
    first = None
    for name, ok in links:
        if not ok:
            first = rec_detail if name == "recursion" else name
            break
    return QceReport(d_max, links, first)


# ---------------------------------------------------------------------------
# Semiclassical and lattice checks
# ---------------------------------------------------------------------------


def semiclassical_check(order: int = 12) -> bool:
    """The leading and subleading terms of the formal exponent, exactly.

    Writing the exponent as S_0/hbar + S_1 + O(hbar) with e^{S_0'} = z, the
    difference equation forces, order by order in hbar:

        hbar^0:  z + 1/z - x(z) = 0,
        hbar^1:  (z - 1/z) S_1' + (1/2)(z + 1/z) S_0'' = 0,

    with S_0''(x) = 1/(z - 1/z).  The closed forms of S_0 and S_1 are the
    ones certified by :func:`toprec.s0_s1_closed_forms` (which is run first,
    at the same order, as the data source); here the two coefficient
    identities are verified as exact rational functions of z.
    """
    if not s0_s1_closed_forms(order):
        return False
    z = RationalFunction.identity()
    one = RationalFunction.one()
    x_of_z = z + one / z
    dz_dx = RationalFunction(Polynomial([0, 0, 1]), Polynomial([-1, 0, 1]))
    # hbar^0: the exponentiated slope lands back on the curve
    if not (z + one / z - x_of_z).is_zero():
        return False
    # second derivative of the leading exponent: d(log z)/dx
    s0_second = (one / z) * dz_dx
    target = RationalFunction(Polynomial([0, 1]), Polynomial([-1, 0, 1]))
    if not (s0_second - target).is_zero():
        return False
    # subleading slope from the closed form S_1 = -(1/2) log(z - 1/z)
    s1_slope = (
        RationalFunction(Polynomial([0, 1]), Polynomial([1, 0, -1]))
        + one / (z * 2)
    ) * dz_dx
    residual = (z - one / z) * s1_slope + x_of_z * s0_second * Frac(1, 2)
    return residual.is_zero()


def toda_specialization_check(order: int = 8, d_max: int = 4) -> bool:
    """Three exact facts tying the family to the quadratic lattice relations:

    (a) the second difference of the Bernoulli prefactor telescopes:
        exp(A(x+hbar) + A(x-hbar) - 2 A(x)) = x/(x+hbar), through hbar-order
        ``order``;
    (b) the quadratic lattice relations of the partition sums, both variants,
        for 0 <= d <= d_max;
    (c) the kernel identity behind (a): (e^{t/2} - e^{-t/2})^2 * t/(e^t - 1)
        = t (1 - e^{-t}), checked as truncated series.
    """
    if order < 2:
        raise ExactError("order must be at least 2")
    prefactor = bernoulli_operator(order)
    second_difference = (
        (shift_form(prefactor, 1, order) - prefactor)
        + (shift_form(prefactor, -1, order) - prefactor)
    )
    xpow, expanded = _exp_of_difference(second_difference, order)
    # x/(x + hbar) = x^0 * (1 + r)^{-1} in r = hbar/x
    if xpow != 0 or expanded != _binomial_series(-1, 1, order):
        return False
    # kernel identity as series in t
    zeta = [
        Frac(1, 2 ** (m - 1) * math.factorial(m)) if m % 2 else Frac(0)
        for m in range(order + 1)
    ]
    bern = [Frac(bernoulli_number(m), math.factorial(m)) for m in range(order + 1)]
    lhs = _rmul(_rmul(zeta, zeta, order), bern, order)
    rhs = [Frac(0)] * (order + 1)
    for j in range(2, order + 1):
        rhs[j] = Frac((-1) ** j, math.factorial(j - 1))
    if lhs != rhs:
        return False
    for dd in range(d_max + 1):
        if not toda_quadratic_check(dd, "full"):
            return False
        if not toda_quadratic_check(dd, "one-level"):
            return False
    return True
