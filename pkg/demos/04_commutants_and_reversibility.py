"""The negative answer, end to end.

Question: is every uniformly isochronous polynomial center either reversible
or endowed with a nontrivial polynomial commuting system?  The bundled cubic
counterexample says no.  This script walks the whole argument: no symmetry
axis (non-reversible), the top-degree determinant filter, the exhaustive
exact nullspace search (only multiples of the field itself), and the two
structural form checks, which both fail.
"""

from isochrone import (
    admissible_top_degrees,
    build_eq2,
    check_form7,
    check_form8,
    commutant_nullspace,
    counterexample_system,
    lie_bracket,
    radial_commuter,
    restrict_to_circle,
    symmetry_axes,
    vector_field,
)
from isochrone.polyalg import X, Y

s = counterexample_system()
Xf = vector_field(s.uniform)

print(f"system: H = {s.H}")
print()

axes = symmetry_axes(restrict_to_circle(s.Q))
print(f"symmetry axes of the circle restriction: {axes or 'none'}  ->  non-reversible")

degs = sorted(admissible_top_degrees(Xf))
print(f"admissible top degrees for a commuting field: {degs}")

basis = commutant_nullspace(Xf, max(degs))
print(f"exact commutant nullspace up to degree {max(degs)}: dimension {basis.dimension}, "
      f"contains the field itself: {basis.contains_self}")
for f in basis.basis:
    check = lie_bracket(Xf, f).is_zero
    print(f"   basis field brackets to zero: {check}")

f7, f8 = check_form7(s.H), check_form8(s.H)
print(f"structural form checks: even-base radial product {f7.matches}, "
      f"alpha/beta power form {f8.matches}")

rad = radial_commuter(s)
print(f"radial commuter for odd k: non-polynomial, radial exponent {rad.radial_exponent}")
print()
print("=> a center, not reversible, commuting only with its own multiples.")
print()

# contrast: an even-degree system has a genuine polynomial commuter
even = build_eq2(X * X - Y * Y, (1,))
Xe = vector_field(even.uniform)
be = commutant_nullspace(Xe, even.H.degree() + 1)
re = radial_commuter(even)
print(f"contrast, Q = x^2 - y^2: nullspace dimension {be.dimension}; "
      f"polynomial radial commuter ({re.P}, {re.S}) "
      f"brackets to zero: {lie_bracket(Xe, re).is_zero}")
