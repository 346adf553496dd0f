"""
Degree-graded partition sums as exact rational functions
========================================================

A tour of the combinatorial side of the package: for each degree d the
hook-weighted sum over integer partitions of d collapses to a rational
function of u, and that family satisfies a shift recursion, an
orthogonal-polynomial closed form, and quadratic lattice relations --
all verified here in exact arithmetic.
"""

from fractions import Fraction

from p1qcurve import (
    partitions,
    hook_product,
    x_partition,
    x_laguerre,
    verify_xd_recursion,
    xd_pole_report,
    toda_quadratic_check,
    y_polynomial,
)

# ---------------------------------------------------------------------------
# The first few sums, written out.  x_partition(d) is
#     sum over partitions p of d of  (1/H_p^2) * prod_i (u + i - p_i)/(u + i)
# with H_p the product of hook lengths; everything telescopes to num/den.
# ---------------------------------------------------------------------------

for d in range(5):
    print(f"X_{d}(u) =", x_partition(d).pretty("u"))

# The value at u -> infinity is sum 1/H_p^2 = 1/d!  (a hook-length identity):
for d in range(5):
    lead = sum(Fraction(1, hook_product(p) ** 2) for p in partitions(d))
    print(f"sum over |p|={d} of 1/H_p^2 =", lead)

# ---------------------------------------------------------------------------
# The shift recursion.  Each X_d ties to X_{d-1} through
#     X_{d-1}(u+1)/(u+1) + u*(X_d(u-1) - X_d(u)) = 0,
# an exact identity of rational functions -- the degree-d slice of the
# difference equation the whole package revolves around.
# ---------------------------------------------------------------------------

print("recursion holds for d = 1..12:",
      all(verify_xd_recursion(d) for d in range(1, 13)))

# ---------------------------------------------------------------------------
# Orthogonal-polynomial form: the same X_d arises from a classical-polynomial
# quotient (numerator and denominator built from Laguerre-type recurrences).
# ---------------------------------------------------------------------------

print("closed form matches for d = 0..10:",
      all(x_partition(d) == x_laguerre(d) for d in range(11)))

# All poles of X_d are simple and sit at negative integers:
print("poles of X_4:", {str(a): m for a, m in sorted(xd_pole_report(4).items())})

# ---------------------------------------------------------------------------
# The vanishing polynomial family: a hook-weighted combination that is
# identically zero for every degree, with an inductive step linking
# consecutive degrees by a forward difference.
# ---------------------------------------------------------------------------

print("vanishing polynomial is zero for d = 1..10:",
      all(y_polynomial(d).is_zero() for d in range(1, 11)))

# ---------------------------------------------------------------------------
# Quadratic lattice relations: products of shifted X's match weighted
# convolutions, degree by degree, in two equivalent variants.
# ---------------------------------------------------------------------------

print("lattice relations for d = 0..6:",
      all(toda_quadratic_check(d, v) for d in range(7)
          for v in ("full", "one-level")))
