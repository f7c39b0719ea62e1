"""Build uniformly isochronous systems and decide center existence.

The family under study is (xdot, ydot) = (-y + x*H, x + y*H): every orbit
turns around the origin at unit angular speed, so the only question is
whether nearby orbits close up.  For H = Q * sum_i a_i r^(2i) with Q
homogeneous the answer is exact: the origin is a center iff Q has zero mean
on the unit circle.
"""

from isochrone import (
    build_eq2,
    counterexample_system,
    invariant_circles,
    is_center,
    isochronicity_check,
    restrict_to_circle,
    return_map,
    vector_field,
)
from isochrone.polyalg import X, Y, circle_harmonic

systems = {
    "counterexample (cubic, a = (1, 1))": counterexample_system(),
    "Q = y, a = (1)": build_eq2(Y, (1,)),
    "Q = x^2 (fails the mean test)": build_eq2(X**2, (1,)),
    "Q = sin-3t harmonic, a = (-1, 1)": build_eq2(circle_harmonic(3, "sin"), (-1, 1)),
}

for name, s in systems.items():
    t = restrict_to_circle(s.Q, homogeneous_required=True)
    v = vector_field(s.uniform)
    print(f"== {name}")
    print(f"   H = {s.H}")
    print(f"   field: ({v.P}, {v.S})")
    print(f"   circle restriction: {t!r}")
    print(f"   mean over a period = {t.c0}  ->  center: {is_center(s)}")
    circles = invariant_circles(s) if not s.degenerate else []
    if circles:
        print(f"   invariant circles at rho = {[round(r, 6) for r in circles]}")
    print()

# every trajectory of a center returns to its start radius after one turn
s = counterexample_system()
print("return map of the counterexample (one full turn):")
for rho0 in (0.05, 0.2, 0.35):
    print(f"   rho(2pi) - rho0 = {return_map(s, rho0) - rho0:+.2e}   (rho0 = {rho0})")

# and the angular speed is 1 no matter what H is
dev = isochronicity_check(s, samples=6)
print(f"max |d(theta)/dt - 1| along sampled trajectories: {dev:.2e}")
