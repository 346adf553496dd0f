"""Exact arithmetic kernel.

Everything in this package computes over the rationals, exactly.  This module
supplies the shared machinery:

* ``Frac``         -- alias of :class:`fractions.Fraction`; the only scalar type.
* ``Polynomial``   -- dense univariate polynomial, ascending coefficients.
* ``RationalFunction`` -- reduced quotient of polynomials with monic denominator.
* ``partial_fractions`` -- exact partial-fraction decomposition over rational poles.
* ``TruncatedSeries``  -- univariate Laurent series with an explicit inclusive
  truncation order; reading a coefficient past the order raises
  :class:`TruncationError` instead of silently returning zero.
* ``MultiSeries``  -- sparse multivariate series with per-variable orders.
* ``LocalExpr`` / ``local_laurent`` / ``residue`` -- local Laurent expansion of
  expressions built from rational functions and ``log z`` about the points
  ``z = +1, -1, 0``.  At ``z = -1`` the branch constant ``log(-1)`` is kept as
  a formal symbol ``L`` that must cancel before a plain series or a residue is
  returned.

No floats enter any code path; all comparisons are exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction as Frac
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[Frac, int]

__all__ = [
    "Frac",
    "ExactError",
    "TruncationError",
    "FactorError",
    "BranchLogError",
    "PoleEvaluationError",
    "Polynomial",
    "RationalFunction",
    "PartialFractions",
    "partial_fractions",
    "TruncatedSeries",
    "series_exp",
    "series_log",
    "series_compose",
    "MultiSeries",
    "LocalExpr",
    "local_laurent",
    "residue",
    "rational_to_json",
    "rational_from_json",
]


class ExactError(ValueError):
    """Base class for errors raised by the exact kernel."""


class TruncationError(ExactError):
    """A coefficient beyond the known truncation order was requested."""


class FactorError(ExactError):
    """A denominator did not factor into rational linear factors."""


class BranchLogError(ExactError):
    """The formal branch constant log(-1) failed to cancel."""


class PoleEvaluationError(ExactError):
    """A rational function was evaluated at a pole."""


def _frac(x: Scalar) -> Frac:
    if isinstance(x, Frac):
        return x
    if isinstance(x, int):
        return Frac(x)
    raise TypeError(f"expected an exact scalar, got {type(x).__name__}")


def rational_to_json(x: Frac) -> str:
    """Render a rational as ``"p/q"`` in lowest terms, ``"p"`` when q == 1."""
    return str(Frac(x))


def rational_from_json(s: str) -> Frac:
    """Parse the ``"p/q"`` wire form produced by :func:`rational_to_json`."""
    return Frac(s)


# ---------------------------------------------------------------------------
# Polynomial
# ---------------------------------------------------------------------------


class Polynomial:
    """Dense univariate polynomial over Q, coefficients stored ascending.

    The zero polynomial is the empty coefficient tuple and reports
    ``degree is None`` (a deliberate sentinel: arithmetic on a fake degree of
    ``-1`` breeds off-by-one bugs).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):  # ascending
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Frac, ...] = tuple(cs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((1,))

    @classmethod
    def constant(cls, c: Scalar) -> "Polynomial":
        return cls((c,))

    @classmethod
    def identity(cls) -> "Polynomial":
        """The polynomial ``t``."""
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> "Polynomial":
        p = cls.one()
        for r in roots:
            p = p * cls((-_frac(r), 1))
        return p

    # -- basic queries -----------------------------------------------------

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Frac:
        if k < 0:
            raise IndexError("polynomial coefficients start at exponent 0")
        return self.coeffs[k] if k < len(self.coeffs) else Frac(0)

    def leading(self) -> Frac:
        if not self.coeffs:
            raise ExactError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Frac)):
            return Polynomial((other,))
        return None

    def __add__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Polynomial(
            (self.coefficient(k) + o.coefficient(k) for k in range(n))
        )

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial((-c for c in self.coeffs))

    def __sub__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return Polynomial.zero()
        out = [Frac(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                if b:
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ExactError("negative polynomial powers are not polynomials")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other) -> tuple["Polynomial", "Polynomial"]:
        o = self._coerce(other)
        if o is None or o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q: list[Frac] = []
        r = list(self.coeffs)
        dn, dd = len(r) - 1, o.degree
        lead = o.leading()
        qcs = [Frac(0)] * max(0, dn - dd + 1)
        for k in range(dn - dd, -1, -1):
            c = r[dd + k] / lead
            qcs[k] = c
            if c:
                for j, b in enumerate(o.coeffs):
                    r[k + j] -= c * b
        return Polynomial(qcs), Polynomial(r[:dd] if dd > 0 else ())

    def __floordiv__(self, other) -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Polynomial":
        return divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash(("Polynomial", self.coeffs))

    # -- calculus & composition --------------------------------------------

    def derivative(self) -> "Polynomial":
        return Polynomial((k * c for k, c in enumerate(self.coeffs) if k))

    def __call__(self, value):
        """Evaluate (Horner).  Accepts scalars, polynomials, rational functions."""
        if isinstance(value, (int, Frac)):
            acc = Frac(0)
            for c in reversed(self.coeffs):
                acc = acc * value + c
            return acc
        acc2 = Polynomial.zero() if isinstance(value, Polynomial) else None
        if isinstance(value, Polynomial):
            for c in reversed(self.coeffs):
                acc2 = acc2 * value + Polynomial.constant(c)
            return acc2
        if isinstance(value, RationalFunction):
            accr = RationalFunction.zero()
            for c in reversed(self.coeffs):
                accr = accr * value + RationalFunction.constant(c)
            return accr
        raise TypeError(f"cannot evaluate polynomial at {type(value).__name__}")

    def shift(self, c: Scalar) -> "Polynomial":
        """Return ``p(t + c)``."""
        return self(Polynomial((_frac(c), 1)))

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lead = self.leading()
        return Polynomial((c / lead for c in self.coeffs))

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else Polynomial.zero()

    # -- serialization & display ---------------------------------------------

    def to_json(self) -> list[str]:
        return [rational_to_json(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Polynomial":
        return cls(rational_from_json(s) for s in data)

    def pretty(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                pw = var if k == 1 else f"{var}^{k}"
                body = pw if mag == 1 else f"{mag}*{pw}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))  # type: ignore[arg-type]
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Polynomial({list(map(str, self.coeffs))})"


# ---------------------------------------------------------------------------
# RationalFunction
# ---------------------------------------------------------------------------


class RationalFunction:
    """Reduced quotient of two polynomials with monic denominator.

    The canonical form (num/den coprime, den monic) makes equality structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial | Scalar, den: Polynomial | Scalar = 1):
        if not isinstance(num, Polynomial):
            num = Polynomial((num,))
        if not isinstance(den, Polynomial):
            den = Polynomial((den,))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num = Polynomial.zero()
            self.den = Polynomial.one()
            return
        g = num.gcd(den)
        if g.degree not in (None, 0):
            num = num // g
            den = den // g
        lead = den.leading()
        if lead != 1:
            num = num * Polynomial.constant(Frac(1) / lead)
            den = den.monic()
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls(Polynomial.zero())

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls(Polynomial.one())

    @classmethod
    def constant(cls, c: Scalar) -> "RationalFunction":
        return cls(Polynomial.constant(c))

    @classmethod
    def identity(cls) -> "RationalFunction":
        """The rational function ``t``."""
        return cls(Polynomial.identity())

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise ExactError("rational function is not a polynomial")
        return self.num

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "RationalFunction | None":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Frac)):
            return RationalFunction(Polynomial((other,)))
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return None

    def __add__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(
            self.num * o.den + o.num * self.den, self.den * o.den
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash(("RationalFunction", self.num.coeffs, self.den.coeffs))

    # -- evaluation, calculus, substitution ------------------------------------

    def __call__(self, value):
        if isinstance(value, (int, Frac)):
            dv = self.den(value)
            if dv == 0:
                raise PoleEvaluationError(f"evaluation at pole {value}")
            return self.num(value) / dv
        if isinstance(value, (Polynomial, RationalFunction)):
            numv = self.num(value)
            denv = self.den(value)
            if isinstance(numv, Polynomial):
                numv = RationalFunction(numv)
            if isinstance(denv, Polynomial):
                denv = RationalFunction(denv)
            return numv / denv
        raise TypeError(f"cannot evaluate at {type(value).__name__}")

    def derivative(self) -> "RationalFunction":
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def shift(self, c: Scalar) -> "RationalFunction":
        """Return ``f(t + c)``."""
        return RationalFunction(self.num.shift(c), self.den.shift(c))

    def reciprocal_substitution(self) -> "RationalFunction":
        """Return ``f(1/t)`` as a rational function of ``t``."""
        d = max(len(self.num.coeffs), len(self.den.coeffs)) - 1
        if d < 0:
            return RationalFunction.zero()

        def rev(p: Polynomial) -> Polynomial:
            cs = [Frac(0)] * (d + 1)
            for k, c in enumerate(p.coeffs):
                cs[d - k] = c
            return Polynomial(cs)

        return RationalFunction(rev(self.num), rev(self.den))

    # -- expansions --------------------------------------------------------------

    def laurent_at(self, center: Scalar, order: int, var: str = "t") -> "TruncatedSeries":
        """Laurent expansion in ``t = z - center`` through ``t**order`` inclusive."""
        num = self.num.shift(center)
        den = self.den.shift(center)
        if self.is_zero():
            return TruncatedSeries.zero(var, order)
        v = 0
        while den.coefficient(v) == 0:
            v += 1
        unit = Polynomial(den.coeffs[v:])
        top = order + v
        num_series = TruncatedSeries(var, 0, tuple(num.coefficient(k) for k in range(top + 1)), top)
        unit_series = TruncatedSeries(var, 0, tuple(unit.coefficient(k) for k in range(top + 1)), top)
        quot = num_series * unit_series.inverse()
        return quot.shift_exponent(-v).truncate(order)

    def series_at_infinity(self, order: int, var: str = "xinv") -> "TruncatedSeries":
        """Expansion in ``w = 1/t`` through ``w**order``; requires deg num <= deg den+order."""
        return self.reciprocal_substitution().laurent_at(0, order, var)

    # -- serialization & display ----------------------------------------------------

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "RationalFunction":
        return cls(Polynomial.from_json(data["num"]), Polynomial.from_json(data["den"]))

    def pretty(self, var: str = "t") -> str:
        if self.is_polynomial():
            return self.num.pretty(var)
        return f"({self.num.pretty(var)}) / ({self.den.pretty(var)})"

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"


# ---------------------------------------------------------------------------
# Partial fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PartialFractions:
    """Exact decomposition ``f = poly_part + sum c/(t - root)**mult``.

    ``terms`` maps ``(root, mult)`` to the coefficient of ``1/(t-root)**mult``.
    """

    poly_part: Polynomial
    terms: tuple[tuple[tuple[Frac, int], Frac], ...]

    def as_dict(self) -> dict[tuple[Frac, int], Frac]:
        return dict(self.terms)

    def reassemble(self) -> RationalFunction:
        total = RationalFunction(self.poly_part)
        for (root, mult), coeff in self.terms:
            denom = Polynomial((-root, 1)) ** mult
            total = total + RationalFunction(Polynomial.constant(coeff), denom)
        return total


def _rational_linear_roots(p: Polynomial) -> dict[Frac, int]:
    """Roots with multiplicity of a polynomial that splits over Q (else FactorError)."""
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t**k for k, c in enumerate(p.coeffs))
    _, factors = sympy.Poly(expr, t, domain="QQ").factor_list()
    roots: dict[Frac, int] = {}
    for fac, mult in factors:
        if fac.degree() != 1:
            raise FactorError(
                "denominator has an irreducible factor of degree "
                f"{fac.degree()}; only rational poles are supported"
            )
        a1, a0 = fac.all_coeffs()
        root = Frac(int(sympy.numer(-a0 / a1)), int(sympy.denom(-a0 / a1)))
        roots[root] = roots.get(root, 0) + int(mult)
    return roots


def partial_fractions(f: RationalFunction) -> PartialFractions:
    """Exact partial fractions of ``f`` over rational poles.

    Raises :class:`FactorError` if the denominator has an irreducible factor of
    degree greater than one.
    """
    poly_part, rem = divmod(f.num, f.den)
    if rem.is_zero():
        return PartialFractions(poly_part, ())
    proper = RationalFunction(rem, f.den)
    roots = _rational_linear_roots(proper.den)
    if sum(roots.values()) != proper.den.degree:
        raise FactorError("denominator did not split into rational linear factors")
    terms: list[tuple[tuple[Frac, int], Frac]] = []
    for root in sorted(roots):
        m = roots[root]
        expansion = proper.laurent_at(root, -1)
        for k in range(1, m + 1):
            c = expansion.coefficient(-k)
            if c != 0:
                terms.append(((root, k), c))
    result = PartialFractions(poly_part, tuple(terms))
    if result.reassemble() != f:
        raise ExactError("internal error: partial fractions failed to reassemble")
    return result


# ---------------------------------------------------------------------------
# TruncatedSeries
# ---------------------------------------------------------------------------


class TruncatedSeries:
    """Univariate Laurent series known exactly through an inclusive order.

    ``coeffs[k]`` is the coefficient of ``var**(min_exp + k)``; the last entry
    is the coefficient of ``var**order``.  All coefficients below ``min_exp``
    are exactly zero (knowledge, not truncation); coefficients above ``order``
    are unknown and raise :class:`TruncationError` when requested.

    Arithmetic propagates the truncation order soundly: the order of a product
    is ``min(o1 + m2, o2 + m1)`` where ``m`` are the declared lowest exponents.
    """

    __slots__ = ("var", "min_exp", "order", "coeffs")

    def __init__(self, var: str, min_exp: int, coeffs: Iterable[Scalar], order: int):
        self.var = var
        self.min_exp = int(min_exp)
        self.order = int(order)
        cs = tuple(_frac(c) for c in coeffs)
        if len(cs) != self.order - self.min_exp + 1:
            raise ExactError(
                f"coefficient count {len(cs)} does not match range "
                f"[{self.min_exp}, {self.order}]"
            )
        # Normalize: leading zeros raise min_exp (they are knowledge of zeroness,
        # representation stays canonical with a nonzero first stored coefficient
        # whenever one exists).
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        if lead:
            self.min_exp += lead
            cs = cs[lead:]
        if not cs:
            self.min_exp = self.order + 1  # canonical empty: zero through order
        self.coeffs = cs

    # -- constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, var: str, order: int) -> "TruncatedSeries":
        return cls(var, order + 1, (), order)

    @classmethod
    def constant(cls, var: str, c: Scalar, order: int) -> "TruncatedSeries":
        if order < 0:
            raise ExactError("constant series needs order >= 0")
        return cls(var, 0, (c,) + (0,) * order, order)

    @classmethod
    def variable(cls, var: str, order: int) -> "TruncatedSeries":
        if order < 1:
            raise ExactError("variable series needs order >= 1")
        return cls(var, 1, (1,) + (0,) * (order - 1), order)

    @classmethod
    def monomial(cls, var: str, exp: int, c: Scalar, order: int) -> "TruncatedSeries":
        if exp > order:
            raise ExactError("monomial exponent exceeds requested order")
        return cls(var, exp, (c,) + (0,) * (order - exp), order)

    @classmethod
    def from_function(cls, var: str, fn, min_exp: int, order: int) -> "TruncatedSeries":
        return cls(var, min_exp, (fn(k) for k in range(min_exp, order + 1)), order)

    # -- queries -------------------------------------------------------------------

    def coefficient(self, k: int) -> Frac:
        if k > self.order:
            raise TruncationError(
                f"coefficient of {self.var}^{k} requested, series only known "
                f"through {self.var}^{self.order}"
            )
        if k < self.min_exp:
            return Frac(0)
        return self.coeffs[k - self.min_exp]

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int | None:
        """Exponent of the first known-nonzero coefficient, or None if all zero."""
        return self.min_exp if self.coeffs else None

    def items(self):
        for k, c in enumerate(self.coeffs):
            if c:
                yield self.min_exp + k, c

    # -- structural ops -----------------------------------------------------------

    def truncate(self, new_order: int) -> "TruncatedSeries":
        if new_order > self.order:
            raise TruncationError("cannot extend a series by truncation")
        if new_order >= self.order:
            return self
        keep = max(0, new_order - self.min_exp + 1)
        return TruncatedSeries(self.var, self.min_exp, self.coeffs[:keep], new_order)

    def shift_exponent(self, delta: int) -> "TruncatedSeries":
        return TruncatedSeries(self.var, self.min_exp + delta, self.coeffs, self.order + delta)

    def rename(self, var: str) -> "TruncatedSeries":
        return TruncatedSeries(var, self.min_exp, self.coeffs, self.order)

    def map_coefficients(self, fn) -> "TruncatedSeries":
        return TruncatedSeries(self.var, self.min_exp, (fn(c) for c in self.coeffs), self.order)

    # -- arithmetic -------------------------------------------------------------------

    def _check_var(self, other: "TruncatedSeries") -> None:
        if self.var != other.var:
            raise ExactError(f"variable mismatch: {self.var} vs {other.var}")

    def __add__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Frac)):
            other = TruncatedSeries.constant(self.var, other, max(self.order, 0))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_var(other)
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp, order + 1)
        return TruncatedSeries(
            self.var,
            lo,
            (
                (self.coefficient(k) if k >= self.min_exp and k <= self.order else Frac(0))
                + (other.coefficient(k) if k >= other.min_exp and k <= other.order else Frac(0))
                for k in range(lo, order + 1)
            ),
            order,
        )

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.var, self.min_exp, (-c for c in self.coeffs), self.order)

    def __sub__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Frac)):
            other = TruncatedSeries.constant(self.var, other, max(self.order, 0))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Frac)):
            c = _frac(other)
            if c == 0:
                return TruncatedSeries.zero(self.var, self.order)
            return TruncatedSeries(self.var, self.min_exp, (c * a for a in self.coeffs), self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check_var(other)
        if self.is_zero() or other.is_zero():
            m1 = self.min_exp if self.coeffs else self.order + 1
            m2 = other.min_exp if other.coeffs else other.order + 1
            order = min(self.order + other.min_exp, other.order + self.min_exp)
            return TruncatedSeries.zero(self.var, order)
        order = min(self.order + other.min_exp, other.order + self.min_exp)
        lo = self.min_exp + other.min_exp
        out = [Frac(0)] * (order - lo + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            e1 = self.min_exp + i
            jmax = min(len(other.coeffs) - 1, order - e1 - other.min_exp)
            for j in range(jmax + 1):
                b = other.coeffs[j]
                if b:
                    out[e1 + other.min_exp + j - lo] += a * b
        return TruncatedSeries(self.var, lo, out, order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Frac)):
            c = _frac(other)
            if c == 0:
                raise ZeroDivisionError("series division by zero scalar")
            return self * (Frac(1) / c)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return TruncatedSeries.constant(self.var, 1, max(self.order, 0))
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result  # type: ignore[return-value]

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; needs a nonzero stored leading coefficient."""
        if self.is_zero():
            raise ExactError("cannot invert a series with no known nonzero coefficient")
        v = self.min_exp  # normalized: first stored coefficient is nonzero
        n = self.order - v  # unit part known through t^n
        a0 = self.coeffs[0]
        inv: list[Frac] = [Frac(1) / a0]
        for k in range(1, n + 1):
            acc = Frac(0)
            for j in range(1, k + 1):
                aj = self.coeffs[j] if j < len(self.coeffs) else Frac(0)
                if aj:
                    acc += aj * inv[k - j]
            inv.append(-acc / a0)
        return TruncatedSeries(self.var, -v, inv, n - v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.var == other.var
            and self.order == other.order
            and self.min_exp == other.min_exp
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.var, self.min_exp, self.order, self.coeffs))

    # -- calculus ------------------------------------------------------------------------

    def derivative(self) -> "TruncatedSeries":
        pairs = [(k - 1, k * c) for k, c in zip(range(self.min_exp, self.order + 1), self.coeffs) if k != 0]
        order = self.order - 1
        if not pairs:
            return TruncatedSeries.zero(self.var, order)
        lo = pairs[0][0]
        out = [Frac(0)] * (order - lo + 1)
        for e, c in pairs:
            out[e - lo] = c
        return TruncatedSeries(self.var, lo, out, order)

    def integrate(self) -> "TruncatedSeries":
        """Term-wise antiderivative with zero constant; rejects a 1/t term."""
        if self.min_exp <= -1 <= self.order and self.coefficient(-1) != 0:
            raise ExactError("antiderivative of a 1/t term is not a Laurent series")
        order = self.order + 1
        lo = min(self.min_exp + 1, 0)
        out = [Frac(0)] * (order - lo + 1)
        for k, c in self.items():
            out[k + 1 - lo] = c / (k + 1)
        return TruncatedSeries(self.var, lo, out, order)

    # -- serialization & display -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "var": self.var,
            "min_exp": self.min_exp,
            "order": self.order,
            "coeffs": [rational_to_json(c) for c in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "TruncatedSeries":
        return cls(
            data["var"],
            int(data["min_exp"]),
            [rational_from_json(s) for s in data["coeffs"]],
            int(data["order"]),
        )

    def pretty(self) -> str:
        terms = []
        for k, c in self.items():
            if k == 0:
                terms.append(f"{c}")
            elif k == 1:
                terms.append(f"{c}*{self.var}")
            else:
                terms.append(f"{c}*{self.var}^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({self.var}^{self.order + 1})"

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.pretty()})"


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    """Exponential of a series with strictly positive valuation.

    Rejects any known-nonzero coefficient at exponent <= 0 (the exponential of
    such a series is not a power series with rational coefficients).
    """
    for k, c in s.items():
        if k <= 0:
            raise ExactError(f"series_exp needs positive valuation, found {s.var}^{k}")
        break  # items are in increasing order; only the first matters
    order = s.order
    out = [Frac(0)] * (order + 1)
    out[0] = Frac(1)
    # exp(f)' = f' exp(f):  (k)·e_k = sum_{j} j·f_j·e_{k-j}
    f = [s.coefficient(k) if s.min_exp <= k <= s.order else Frac(0) for k in range(order + 1)]
    for k in range(1, order + 1):
        acc = Frac(0)
        for j in range(1, k + 1):
            if f[j]:
                acc += j * f[j] * out[k - j]
        out[k] = acc / k
    return TruncatedSeries(s.var, 0, out, order)


def series_log(s: TruncatedSeries) -> TruncatedSeries:
    """Logarithm of a series with constant term 1 and no negative exponents."""
    if s.min_exp < 0:
        raise ExactError("series_log needs a series with no negative exponents")
    if s.coefficient(0) != 1:
        raise ExactError("series_log needs constant term exactly 1")
    order = s.order
    f = [s.coefficient(k) for k in range(order + 1)]
    # log(f)' = f'/f:  k·g_k = k·f_k - sum_{j=1}^{k-1} j·g_j·f_{k-j}
    g = [Frac(0)] * (order + 1)
    for k in range(1, order + 1):
        acc = k * f[k]
        for j in range(1, k):
            if g[j] and f[k - j]:
                acc -= j * g[j] * f[k - j]
        g[k] = acc / k
    return TruncatedSeries(s.var, 0, g, order)


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """Substitute ``inner`` (valuation >= 1) into ``outer``.

    The truncation order of the result is whatever the sound arithmetic of the
    parts supports; it is never padded with unknown zeros.
    """
    val = inner.valuation()
    if val is None or val < 1 or inner.min_exp < 1:
        raise ExactError("series_compose needs inner valuation >= 1")
    # positive/zero part by Horner, negative part with explicit inverse powers
    nonneg = [outer.coefficient(k) for k in range(0, outer.order + 1)]
    acc = TruncatedSeries.zero(inner.var, inner.order)
    for c in reversed(nonneg):
        acc = acc * inner + c
    result = acc
    if outer.min_exp < 0:
        inv = inner.inverse()
        powk = inv
        for k in range(1, -outer.min_exp + 1):
            c = outer.coefficient(-k)
            if c:
                result = result + powk * c
            if k < -outer.min_exp:
                powk = powk * inv
    return result


# ---------------------------------------------------------------------------
# MultiSeries
# ---------------------------------------------------------------------------


class MultiSeries:
    """Sparse multivariate series with per-variable inclusive orders.

    ``data`` maps exponent tuples to nonzero coefficients.  Coefficients with
    any exponent below the per-variable ``min_exps`` are exactly zero;
    requesting an exponent above the per-variable order raises
    :class:`TruncationError`.
    """

    __slots__ = ("vars", "min_exps", "orders", "data")

    def __init__(
        self,
        vars: Sequence[str],
        min_exps: Sequence[int],
        orders: Sequence[int],
        data: Mapping[tuple[int, ...], Scalar],
    ):
        self.vars = tuple(vars)
        self.min_exps = tuple(int(m) for m in min_exps)
        self.orders = tuple(int(o) for o in orders)
        if not (len(self.vars) == len(self.min_exps) == len(self.orders)):
            raise ExactError("vars, min_exps, orders must have equal length")
        clean: dict[tuple[int, ...], Frac] = {}
        for exps, c in data.items():
            if len(exps) != len(self.vars):
                raise ExactError("exponent tuple arity mismatch")
            fc = _frac(c)
            if fc == 0:
                continue
            for e, m, o in zip(exps, self.min_exps, self.orders):
                if e < m or e > o:
                    raise ExactError(f"exponent {exps} outside declared window")
            clean[tuple(int(e) for e in exps)] = fc
        self.data = clean

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str], min_exps: Sequence[int], orders: Sequence[int]) -> "MultiSeries":
        return cls(vars, min_exps, orders, {})

    @classmethod
    def constant(cls, vars: Sequence[str], c: Scalar, orders: Sequence[int]) -> "MultiSeries":
        n = len(vars)
        return cls(vars, (0,) * n, orders, {(0,) * n: c})

    @classmethod
    def outer_product(cls, factors: Sequence[TruncatedSeries]) -> "MultiSeries":
        """Tensor product of univariate series into one multivariate series."""
        vars = tuple(s.var for s in factors)
        if len(set(vars)) != len(vars):
            raise ExactError("outer_product needs distinct variable names")
        min_exps = tuple(min(s.min_exp, 0) if s.is_zero() else s.min_exp for s in factors)
        orders = tuple(s.order for s in factors)
        data: dict[tuple[int, ...], Frac] = {}
        pools = [list(s.items()) for s in factors]
        if all(pools):
            for combo in itertools.product(*pools):
                exps = tuple(k for k, _ in combo)
                coeff = Frac(1)
                for _, c in combo:
                    coeff *= c
                data[exps] = data.get(exps, Frac(0)) + coeff
        return cls(vars, min_exps, orders, data)

    # -- queries -------------------------------------------------------------------

    def coefficient(self, exps: Sequence[int]) -> Frac:
        key = tuple(int(e) for e in exps)
        if len(key) != len(self.vars):
            raise ExactError("exponent tuple arity mismatch")
        for e, o, v in zip(key, self.orders, self.vars):
            if e > o:
                raise TruncationError(f"coefficient in {v}^{e} beyond order {o}")
        return self.data.get(key, Frac(0))

    def is_zero(self) -> bool:
        return not self.data

    def items(self):
        return self.data.items()

    # -- arithmetic ---------------------------------------------------------------------

    def _check_compat(self, other: "MultiSeries") -> None:
        if self.vars != other.vars:
            raise ExactError("variable mismatch in multivariate arithmetic")

    def __add__(self, other) -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._check_compat(other)
        orders = tuple(min(a, b) for a, b in zip(self.orders, other.orders))
        min_exps = tuple(min(a, b) for a, b in zip(self.min_exps, other.min_exps))
        data: dict[tuple[int, ...], Frac] = {}
        for src in (self.data, other.data):
            for exps, c in src.items():
                if all(e <= o for e, o in zip(exps, orders)):
                    data[exps] = data.get(exps, Frac(0)) + c
        return MultiSeries(self.vars, min_exps, orders, data)

    def __neg__(self) -> "MultiSeries":
        return MultiSeries(self.vars, self.min_exps, self.orders, {k: -v for k, v in self.data.items()})

    def __sub__(self, other) -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "MultiSeries":
        if isinstance(other, (int, Frac)):
            c = _frac(other)
            if c == 0:
                return MultiSeries.zero(self.vars, self.min_exps, self.orders)
            return MultiSeries(
                self.vars, self.min_exps, self.orders, {k: c * v for k, v in self.data.items()}
            )
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._check_compat(other)
        orders = tuple(
            min(o1 + m2, o2 + m1)
            for o1, o2, m1, m2 in zip(self.orders, other.orders, self.min_exps, other.min_exps)
        )
        min_exps = tuple(m1 + m2 for m1, m2 in zip(self.min_exps, other.min_exps))
        data: dict[tuple[int, ...], Frac] = {}
        for e1, c1 in self.data.items():
            for e2, c2 in other.data.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if all(e <= o for e, o in zip(exps, orders)):
                    data[exps] = data.get(exps, Frac(0)) + c1 * c2
        return MultiSeries(self.vars, min_exps, orders, data)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (
            self.vars == other.vars
            and self.orders == other.orders
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.vars, self.min_exps, self.orders, tuple(sorted(self.data.items()))))

    def truncate(self, orders: Sequence[int]) -> "MultiSeries":
        orders = tuple(int(o) for o in orders)
        for o_new, o_old in zip(orders, self.orders):
            if o_new > o_old:
                raise TruncationError("cannot extend a multivariate series by truncation")
        data = {k: v for k, v in self.data.items() if all(e <= o for e, o in zip(k, orders))}
        return MultiSeries(self.vars, self.min_exps, orders, data)

    # -- serialization ----------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "min_exps": list(self.min_exps),
            "orders": list(self.orders),
            "terms": {
                ",".join(map(str, k)): rational_to_json(v)
                for k, v in sorted(self.data.items())
            },
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiSeries":
        terms = {
            tuple(int(p) for p in key.split(",")): rational_from_json(val)
            for key, val in data["terms"].items()
        }
        return cls(data["vars"], data["min_exps"], data["orders"], terms)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self.data.items()))
        return f"MultiSeries[{','.join(self.vars)}]({{{body}}})"


def multiseries_log(m: MultiSeries) -> MultiSeries:
    """Logarithm of a multivariate series with constant term 1.

    Requires nonnegative exponents throughout so that the correction term is
    nilpotent within the truncation window.
    """
    n = len(m.vars)
    if any(e < 0 for e in m.min_exps):
        raise ExactError("multiseries_log needs nonnegative exponents")
    if m.coefficient((0,) * n) != 1:
        raise ExactError("multiseries_log needs constant term exactly 1")
    w = m - MultiSeries.constant(m.vars, 1, m.orders)
    total = MultiSeries.zero(m.vars, m.min_exps, m.orders)
    power = MultiSeries.constant(m.vars, 1, m.orders)
    for k in range(1, sum(m.orders) + 1):
        power = power * w
        if power.is_zero():
            break
        total = total + power * Frac((-1) ** (k + 1), k)
    return total


# ---------------------------------------------------------------------------
# Local expansions with a formal branch constant
# ---------------------------------------------------------------------------


class _LPoly:
    """Tiny polynomial in the formal branch constant L = log(-1), coefficients in Q."""

    __slots__ = ("c",)

    def __init__(self, c: Mapping[int, Frac] | Scalar = 0):
        if isinstance(c, (int, Frac)):
            cc = {0: _frac(c)} if c else {}
        else:
            cc = {int(k): _frac(v) for k, v in c.items() if v != 0}
        self.c: dict[int, Frac] = cc

    def __add__(self, other: "_LPoly") -> "_LPoly":
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, Frac(0)) + v
        return _LPoly(out)

    def __neg__(self) -> "_LPoly":
        return _LPoly({k: -v for k, v in self.c.items()})

    def __sub__(self, other: "_LPoly") -> "_LPoly":
        return self + (-other)

    def __mul__(self, other: "_LPoly") -> "_LPoly":
        out: dict[int, Frac] = {}
        for k1, v1 in self.c.items():
            for k2, v2 in other.c.items():
                k = k1 + k2
                out[k] = out.get(k, Frac(0)) + v1 * v2
        return _LPoly(out)

    def scale(self, s: Frac) -> "_LPoly":
        return _LPoly({k: s * v for k, v in self.c.items()})

    def is_zero(self) -> bool:
        return not self.c

    def is_scalar(self) -> bool:
        return set(self.c) <= {0}

    def scalar(self) -> Frac:
        if not self.is_scalar():
            raise BranchLogError("formal branch constant log(-1) did not cancel")
        return self.c.get(0, Frac(0))

    def inverse(self) -> "_LPoly":
        if not self.is_scalar() or self.is_zero():
            raise BranchLogError(
                "cannot invert a coefficient carrying the formal branch constant"
            )
        return _LPoly(Frac(1) / self.c[0])

    def __eq__(self, other) -> bool:
        return isinstance(other, _LPoly) and self.c == other.c

    def __repr__(self) -> str:
        if not self.c:
            return "0"
        return " + ".join(f"{v}*L^{k}" if k else f"{v}" for k, v in sorted(self.c.items()))


class FormalLaurent:
    """Laurent series in the local variable with coefficients in Q[L], L = log(-1)."""

    __slots__ = ("min_exp", "order", "coeffs")

    def __init__(self, min_exp: int, coeffs: Sequence[_LPoly], order: int):
        cs = list(coeffs)
        if len(cs) != order - min_exp + 1:
            raise ExactError("coefficient count mismatch in FormalLaurent")
        while cs and cs[0].is_zero():
            cs.pop(0)
            min_exp += 1
        if not cs:
            min_exp = order + 1
        self.min_exp = min_exp
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def from_series(cls, s: TruncatedSeries) -> "FormalLaurent":
        return cls(s.min_exp, [_LPoly(c) for c in s.coeffs], s.order)

    @classmethod
    def constant_L(cls, order: int) -> "FormalLaurent":
        """The series whose value is the bare branch constant L."""
        return cls(0, [_LPoly({1: Frac(1)})] + [_LPoly(0)] * order, order)

    def lcoefficient(self, k: int) -> _LPoly:
        if k > self.order:
            raise TruncationError(f"coefficient at exponent {k} beyond order {self.order}")
        if k < self.min_exp:
            return _LPoly(0)
        return self.coeffs[k - self.min_exp]

    def __add__(self, other: "FormalLaurent") -> "FormalLaurent":
        order = min(self.order, other.order)
        lo = min(self.min_exp, other.min_exp, order + 1)
        return FormalLaurent(
            lo,
            [self.lcoefficient(k) + other.lcoefficient(k) for k in range(lo, order + 1)],
            order,
        )

    def __neg__(self) -> "FormalLaurent":
        return FormalLaurent(self.min_exp, [-c for c in self.coeffs], self.order)

    def __sub__(self, other: "FormalLaurent") -> "FormalLaurent":
        return self + (-other)

    def __mul__(self, other: "FormalLaurent") -> "FormalLaurent":
        if not self.coeffs or not other.coeffs:
            order = min(self.order + other.min_exp, other.order + self.min_exp)
            return FormalLaurent(order + 1, [], order)
        order = min(self.order + other.min_exp, other.order + self.min_exp)
        lo = self.min_exp + other.min_exp
        out = [_LPoly(0) for _ in range(order - lo + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            e1 = self.min_exp + i
            for j, b in enumerate(other.coeffs):
                e = e1 + other.min_exp + j
                if e > order:
                    break
                if not b.is_zero():
                    out[e - lo] = out[e - lo] + a * b
        return FormalLaurent(lo, out, order)

    def inverse(self) -> "FormalLaurent":
        if not self.coeffs:
            raise ExactError("cannot invert a series with no known nonzero coefficient")
        v = self.min_exp
        lead = self.coeffs[0]
        lead_inv = lead.inverse()  # raises BranchLogError when L-laden
        n = self.order - v
        inv = [lead_inv]
        for k in range(1, n + 1):
            acc = _LPoly(0)
            for j in range(1, k + 1):
                aj = self.coeffs[j] if j < len(self.coeffs) else _LPoly(0)
                if not aj.is_zero():
                    acc = acc + aj * inv[k - j]
            inv.append((-acc) * lead_inv)
        return FormalLaurent(-v, inv, n - v)

    def power(self, n: int) -> "FormalLaurent":
        if n < 0:
            return self.inverse().power(-n)
        result = FormalLaurent(0, [_LPoly(1)] + [_LPoly(0)] * max(self.order, 0), max(self.order, 0))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_branch_free(self) -> bool:
        return all(c.is_scalar() for c in self.coeffs)

    def to_series(self, var: str) -> TruncatedSeries:
        if not self.is_branch_free():
            raise BranchLogError("formal branch constant log(-1) did not cancel")
        return TruncatedSeries(
            var, self.min_exp, [c.scalar() for c in self.coeffs], self.order
        )


class LocalExpr:
    """Expression tree over rational functions of z and the symbol log z.

    Build expressions with the constructors and operators, then expand locally
    with :func:`local_laurent` or take exact residues with :func:`residue`.
    The node for ``log z`` composed with the involution ``z -> 1/z`` is kept
    separate because its expansion about z = -1 differs from ``-log z`` by the
    formal constant ``2 L`` (the two local branches straddle the cut).
    """

    __slots__ = ("kind", "payload")

    def __init__(self, kind: str, payload):
        self.kind = kind
        self.payload = payload

    # -- constructors --------------------------------------------------------

    @classmethod
    def rational(cls, f: RationalFunction | Polynomial | Scalar) -> "LocalExpr":
        if not isinstance(f, RationalFunction):
            f = RationalFunction(f if isinstance(f, Polynomial) else Polynomial.constant(f))
        return cls("rat", f)

    @classmethod
    def log_z(cls) -> "LocalExpr":
        return cls("log", None)

    @classmethod
    def log_z_reciprocal(cls) -> "LocalExpr":
        """The branch-consistent local expansion of ``log(1/z)``."""
        return cls("log_inv", None)

    # -- operators -------------------------------------------------------------

    def _coerce(self, other) -> "LocalExpr | None":
        if isinstance(other, LocalExpr):
            return other
        if isinstance(other, (int, Frac, Polynomial, RationalFunction)):
            return LocalExpr.rational(other)
        return None

    def __add__(self, other) -> "LocalExpr":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LocalExpr("add", (self, o))

    __radd__ = __add__

    def __neg__(self) -> "LocalExpr":
        return LocalExpr("mul", (LocalExpr.rational(-1), self))

    def __sub__(self, other) -> "LocalExpr":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "LocalExpr":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other) -> "LocalExpr":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LocalExpr("mul", (self, o))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LocalExpr":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other) -> "LocalExpr":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int) -> "LocalExpr":
        return LocalExpr("pow", (self, int(n)))

    def inv(self) -> "LocalExpr":
        return LocalExpr("inv", self)

    # -- expansion ------------------------------------------------------------------

    def _expand(self, center: int, order: int) -> FormalLaurent:
        if self.kind == "rat":
            f: RationalFunction = self.payload
            return FormalLaurent.from_series(f.laurent_at(center, order, "t"))
        if self.kind in ("log", "log_inv"):
            sign = Frac(1) if self.kind == "log" else Frac(-1)
            if center == 1:
                # log z = log(1 + t)
                s = TruncatedSeries(
                    "t",
                    1,
                    [Frac((-1) ** (k + 1), k) for k in range(1, order + 1)],
                    order,
                ) if order >= 1 else TruncatedSeries.zero("t", order)
                return FormalLaurent.from_series(s * sign)
            if center == -1:
                # log z = L + log(-z), -z = 1 - t:   L - sum t^k/k
                # log(1/z) = L + log(-1/z), -1/z = 1/(1-t):   L + sum t^k/k
                s = TruncatedSeries(
                    "t",
                    1,
                    [Frac(-1, k) for k in range(1, order + 1)],
                    order,
                ) if order >= 1 else TruncatedSeries.zero("t", order)
                base = FormalLaurent.from_series(s * sign)
                return base + FormalLaurent.constant_L(order)
            raise ExactError("log z has no Laurent expansion about z = 0")
        if self.kind == "add":
            a, b = self.payload
            return a._expand(center, order) + b._expand(center, order)
        if self.kind == "mul":
            a, b = self.payload
            # headroom: expanding factors deeper compensates pole orders
            pad = 8
            fa = a._expand(center, order + pad)
            fb = b._expand(center, order + pad)
            prod = fa * fb
            if prod.order < order:
                fa = a._expand(center, order + 2 * pad + 16)
                fb = b._expand(center, order + 2 * pad + 16)
                prod = fa * fb
            if prod.order < order:
                raise TruncationError("product expansion fell short of requested order")
            return _fl_truncate(prod, order)
        if self.kind == "pow":
            base, n = self.payload
            pad = 8 + 4 * abs(n)
            fb = base._expand(center, order + pad)
            res = fb.power(n)
            if res.order < order:
                raise TruncationError("power expansion fell short of requested order")
            return _fl_truncate(res, order)
        if self.kind == "inv":
            pad = 8
            fb = self.payload._expand(center, order + pad)
            res = fb.inverse()
            if res.order < order:
                fb = self.payload._expand(center, order + 3 * pad)
                res = fb.inverse()
            if res.order < order:
                raise TruncationError("inverse expansion fell short of requested order")
            return _fl_truncate(res, order)
        raise ExactError(f"unknown expression node {self.kind}")


def _fl_truncate(f: FormalLaurent, order: int) -> FormalLaurent:
    if order >= f.order:
        return f
    keep = max(0, order - f.min_exp + 1)
    return FormalLaurent(f.min_exp, list(f.coeffs[:keep]), order)


def local_laurent(
    expr: LocalExpr,
    center: int,
    order: int,
    var: str = "t",
    allow_branch_constant: bool = False,
):
    """Laurent expansion of ``expr`` in ``t = z - center`` through ``t**order``.

    ``center`` must be one of +1, -1, 0.  About z = -1 the constant
    ``L = log(-1)`` of the local branch is formal; if it survives in any
    coefficient the expansion is returned as a :class:`FormalLaurent` when
    ``allow_branch_constant`` is set and raises :class:`BranchLogError`
    otherwise.
    """
    if center not in (1, -1, 0):
        raise ExactError("expansion centers are restricted to +1, -1, 0")
    raw = expr._expand(center, order)
    if allow_branch_constant:
        return raw
    return raw.to_series(var)


def residue(expr: LocalExpr, center: int, depth: int = 16) -> Frac:
    """Exact residue of ``expr`` at ``center`` (coefficient of 1/(z-center)).

    ``depth`` bounds the pole order probed.  The branch constant must cancel
    in the 1/t coefficient; otherwise :class:`BranchLogError` propagates.
    """
    raw = expr._expand(center, 0)
    if raw.min_exp < -depth:
        raise ExactError(f"pole deeper than probe depth {depth} at center {center}")
    c = raw.lcoefficient(-1)
    return c.scalar()
