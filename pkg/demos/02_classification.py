"""Boundary types: how many unbounded trajectories border the center region.

In polar form d(rho)/d(theta) = rho^(k+1) q(theta) R(rho), a solution
escapes exactly where the accumulated integral F of q exhausts the finite
budget left in the radial quadrature g.  The global maxima of F are the
escape directions; their count nu names the type B^nu, with nu <= k and the
bound attained by pure k-th harmonics.
"""

import math

from isochrone import boundary_radius, build_eq2, classify, counterexample_system
from isochrone.polyalg import X, Y, circle_harmonic


def describe(name, s, grid=0):
    rep = classify(s, boundary_grid=grid)
    dirs = ", ".join(f"{d:.4f}" for d in rep.asymptote_directions)
    print(f"{name:<34} type {rep.type_label}   asymptotes at theta = [{dirs}]"
          f"   generic = {rep.generic}")
    return rep


print("-- the harmonic family attains the bound nu = k --")
for k in range(1, 6):
    describe(f"Q ~ sin({k} theta), a = (1)", build_eq2(circle_harmonic(k, "sin"), (1,)))

print()
print("-- even degree forces an antipodal pair (O-symmetry) --")
describe("Q = x^2 - y^2, a = (1)", build_eq2(X * X - Y * Y, (1,)))

print()
print("-- the cubic counterexample is a generic B^1 --")
s = counterexample_system()
rep = describe("counterexample", s, grid=180)

print()
print("boundary of its center region (quadrature inversion):")
for theta in (0.0, math.pi / 2, 3 * math.pi / 4, math.pi):
    rb = boundary_radius(s, theta)
    shown = f"{rb:.6f}" if math.isfinite(rb) else "infinite (asymptote)"
    print(f"   rho_b({theta:.4f}) = {shown}")

finite = [r for _, r in rep.boundary_samples]
print(f"   sampled boundary: {len(finite)} finite radii, min = {min(finite):.6f}")
