"""Center tests, quadrature machinery, classification, numeric cross-checks."""

import math
from fractions import Fraction

import numpy as np
import pytest

from isochrone.centerlab import (
    RadialQuadrature,
    boundary_radius,
    boundary_radius_by_escape,
    cartesian_trajectory,
    classify,
    conserved_quantity,
    is_center,
    isochronicity_check,
    polar_rhs,
    polar_trajectory,
    return_map,
)
from isochrone.errors import (
    BlowUpError,
    NotACenterError,
    OutsideValidIntervalError,
    ZeroRadialError,
)
from isochrone.polyalg import BivarPoly, R2, X, Y, circle_harmonic
from isochrone.system import (
    UniformSystem,
    build_eq2,
    build_thm2,
    counterexample_system,
    invariant_circles,
)
from isochrone.trig import TrigPoly, restrict_to_circle

from conftest import random_fraction, random_homogeneous

TWO_PI = 2.0 * math.pi


def rotation_system() -> UniformSystem:
    return UniformSystem(BivarPoly.zero())


class TestPolarRhs:
    def test_counterexample_pair(self):
        s = counterexample_system()
        trig, radial = polar_rhs(s)
        assert trig == restrict_to_circle(s.Q)
        assert radial.R(0.0) == pytest.approx(1.0)
        assert radial.R(2.0) == pytest.approx(5.0)  # 1 + rho^2
        assert radial.sign == 1

    def test_simple_pairs(self):
        trig, radial = polar_rhs(build_eq2(Y, (1,)))
        assert trig == TrigPoly(0, {1: (0, 1)})
        assert radial.R(3.0) == pytest.approx(1.0)
        trig2, _ = polar_rhs(build_eq2(X**2 - Y**2, (1,)))
        assert trig2 == TrigPoly(0, {2: (1, 0)})

    def test_zero_radial_propagates(self):
        with pytest.raises(ZeroRadialError):
            polar_rhs(build_eq2(Y, (0,)))


class TestIsCenter:
    def test_counterexample(self):
        assert is_center(counterexample_system())

    def test_even_mean_fails(self):
        assert not is_center(build_eq2(X**2, (1,)))

    def test_odd_degree_always(self, rng):
        for _ in range(10):
            deg = int(rng.choice([1, 3, 5]))
            assert is_center(build_eq2(random_homogeneous(rng, deg), (1, 1)))

    def test_degenerate_is_center(self):
        assert is_center(build_eq2(X**2, (0,)))


class TestRadialQuadrature:
    def test_closed_form_k1(self):
        # k = 1, R = 1: g(rho) = 1 - 1/rho anchored at rho_ref = 1
        rq = RadialQuadrature.for_unbounded(1, (Fraction(1),))
        for rho in (0.25, 0.5, 2.0, 7.5):
            assert rq.g(rho) == pytest.approx(1 - 1 / rho, abs=1e-11)
        assert rq.g_inf == pytest.approx(1.0, abs=1e-11)

    def test_counterexample_closed_form(self):
        # g(rho) = f(rho) - f(1), f = -1/(3 rho^3) + 1/rho + atan rho
        rq = RadialQuadrature.for_unbounded(3, (Fraction(1), Fraction(1)))
        f = lambda r: -1 / (3 * r**3) + 1 / r + math.atan(r)
        for rho in (0.3, 0.7, 1.8, 10.0):
            assert rq.g(rho) == pytest.approx(f(rho) - f(1.0), abs=1e-11)
        assert rq.g_inf == pytest.approx(math.pi / 2 - f(1.0), abs=1e-11)

    def test_inversion_round_trip(self):
        rq = RadialQuadrature.for_unbounded(3, (Fraction(1), Fraction(1)))
        for rho in (0.2, 0.9, 3.3):
            assert rq.invert(rq.g(rho)) == pytest.approx(rho, abs=1e-10)
        assert rq.invert(rq.g_inf + 1.0) == math.inf

    def test_component_selection(self):
        # R = rho^2 - 1: root at 1 splits (0, 1) and (1, inf)
        inner = RadialQuadrature.for_point(1, (Fraction(-1), Fraction(1)), 0.5)
        assert inner.lo == 0.0 and inner.hi == pytest.approx(1.0)
        assert inner.sign == -1
        outer = RadialQuadrature.for_unbounded(1, (Fraction(-1), Fraction(1)))
        assert outer.lo == pytest.approx(1.0) and math.isinf(outer.hi)
        assert outer.rho_ref == pytest.approx(2.0)
        with pytest.raises(OutsideValidIntervalError):
            outer.g(0.5)

    def test_monotone_decreasing_component(self):
        inner = RadialQuadrature.for_point(1, (Fraction(-1), Fraction(1)), 0.5)
        assert inner.g(0.6) < inner.g(0.5) < inner.g(0.4)
        assert inner.invert(inner.g(0.37)) == pytest.approx(0.37, abs=1e-10)


class TestReturnMap:
    def test_pure_rotation_identity(self):
        assert return_map(rotation_system(), 0.7) == pytest.approx(0.7, abs=1e-13)

    def test_counterexample_periodicity(self):
        s = counterexample_system()
        for rho0 in (0.05, 0.1, 0.2, 0.3):
            assert abs(return_map(s, rho0) - rho0) <= 1e-8

    def test_blow_up_outside_region(self):
        with pytest.raises(BlowUpError) as err:
            return_map(counterexample_system(), 10.0)
        assert 0 < err.value.theta_escape < 0.01

    def test_invariant_circle_is_fixed(self):
        s = build_eq2(circle_harmonic(1, "sin"), (-1, 1))
        assert abs(return_map(s, 1.0) - 1.0) <= 1e-9

    def test_generalized_systems_periodic(self, rng):
        for _ in range(5):
            k = int(rng.integers(1, 5))
            p = random_homogeneous(rng, k)
            h = BivarPoly({(0, 0): 1, (0, 1): random_fraction(rng, -2, 3, 2)})
            u = build_thm2(p, Fraction(1, 2), h)
            assert abs(return_map(u, 0.05) - 0.05) <= 1e-8


class TestConservedQuantity:
    def test_closed_form_k1(self):
        s = build_eq2(Y, (1,))
        phi = conserved_quantity(s)
        # Phi = g(rho) - (1 - cos t), g = 1 - 1/rho
        got = phi(0.3 * math.cos(1.1), 0.3 * math.sin(1.1))
        expect = (1 - 1 / 0.3) - (1 - math.cos(1.1))
        assert got == pytest.approx(expect, abs=1e-10)

    def test_constant_along_trajectories(self):
        s = build_eq2(Y, (1,))
        phi = conserved_quantity(s)
        _, xs, ys = cartesian_trajectory(s, 0.25, 0.0, n_samples=80, tol=1e-12, atol=1e-14)
        vals = [phi(x, y) for x, y in zip(xs, ys)]
        assert max(vals) - min(vals) <= 1e-8

    def test_counterexample_drift(self):
        s = counterexample_system()
        phi = conserved_quantity(s)
        _, xs, ys = cartesian_trajectory(s, 0.3, 0.0, n_samples=120, tol=1e-12, atol=1e-14)
        vals = [phi(x, y) for x, y in zip(xs, ys)]
        assert max(vals) - min(vals) <= 1e-7

    def test_degenerate_level_sets_are_circles(self):
        phi = conserved_quantity(build_eq2(Y, (0,)))
        same = phi(0.5, 0.0), phi(0.0, 0.5), phi(-0.5, 0.0)
        assert same[0] == pytest.approx(same[1], abs=1e-12)
        assert same[0] == pytest.approx(same[2], abs=1e-12)
        assert phi(0.7, 0.0) != pytest.approx(same[0], abs=1e-3)

    def test_outside_interval_rejected(self):
        s = build_eq2(circle_harmonic(1, "sin"), (-1, 1))
        phi = conserved_quantity(s)
        with pytest.raises(OutsideValidIntervalError):
            phi(0.3, 0.0)
        with pytest.raises(OutsideValidIntervalError):
            phi(0.0, 0.0)

    def test_not_a_center_rejected(self):
        with pytest.raises(NotACenterError):
            conserved_quantity(build_eq2(X**2, (1,)))


class TestClassify:
    def test_counterexample(self):
        rep = classify(counterexample_system(), boundary_grid=64)
        assert rep.is_center and rep.nu == 1 and rep.type_label == "B^1"
        assert rep.asymptote_directions == pytest.approx([math.pi], abs=1e-9)
        assert rep.generic and not rep.tied and not rep.degenerate
        assert rep.invariant_circles == []
        assert all(r > 0.44 for _, r in rep.boundary_samples)

    def test_sharpness_attains_bound(self):
        for k in range(1, 6):
            s = build_eq2(circle_harmonic(k, "sin"), (1,))
            rep = classify(s, boundary_grid=0)
            assert rep.nu == k
            assert rep.type_label == f"B^{k}"
            expected = [(2 * j + 1) * math.pi / k for j in range(k)]
            assert rep.asymptote_directions == pytest.approx(expected, abs=1e-9)

    def test_even_degree_antipodal(self):
        rep = classify(build_eq2(X**2 - Y**2, (1,)), boundary_grid=0)
        assert rep.nu == 2 and rep.generic
        assert rep.asymptote_directions == pytest.approx(
            [math.pi / 4, 5 * math.pi / 4], abs=1e-9
        )

    def test_even_degree_pi_shift_invariance(self, rng):
        # zero-mean even-degree Q built from random even harmonics padded
        # with r^2 powers; the argmax set must be invariant under a pi shift
        done = 0
        while done < 5:
            deg = int(rng.choice([2, 4]))
            Q = BivarPoly.zero()
            for j in range(2, deg + 1, 2):
                a, b = random_fraction(rng), random_fraction(rng)
                base = circle_harmonic(j, "cos").scale(a) + circle_harmonic(j, "sin").scale(b)
                Q = Q + base * R2 ** ((deg - j) // 2)
            if Q.is_zero:
                continue
            rep = classify(build_eq2(Q, (1,)), boundary_grid=0)
            dirs = rep.asymptote_directions
            assert rep.nu % 2 == 0 and rep.nu >= 2
            for d in dirs:
                partner = (d + math.pi) % TWO_PI
                assert any(abs(partner - e) < 1e-8 for e in dirs)
            done += 1

    def test_nu_bound_random(self, rng):
        for _ in range(8):
            k = int(rng.choice([1, 3, 5]))
            s = build_eq2(random_homogeneous(rng, k), (1,))
            rep = classify(s, boundary_grid=0)
            assert rep.nu <= k

    def test_degenerate_rotation(self):
        rep = classify(build_eq2(X, (0,)))
        assert rep.degenerate and rep.nu == 0 and rep.type_label == "B^0"
        assert rep.asymptote_directions == [] and rep.boundary_samples == []

    def test_not_a_center_rejected(self):
        with pytest.raises(NotACenterError):
            classify(build_eq2(X**2, (1,)))

    def test_boundary_exceeds_invariant_circles(self):
        s = build_eq2(circle_harmonic(1, "sin"), (-1, 1))
        rep = classify(s, boundary_grid=48)
        assert rep.invariant_circles == pytest.approx([1.0], abs=1e-9)
        assert all(r > 1.0 for _, r in rep.boundary_samples)

    def test_sign_flipped_radial_same_classification(self):
        s9 = counterexample_system()
        flipped = build_eq2(-s9.Q, (-1, -1))
        rep = classify(flipped, boundary_grid=0)
        assert rep.nu == 1
        assert rep.asymptote_directions == pytest.approx([math.pi], abs=1e-9)


class TestBoundary:
    def test_counterexample_at_zero(self):
        rb = boundary_radius(counterexample_system(), 0.0)
        # independent oracle: bisection on the closed form
        f = lambda r: -1 / (3 * r**3) + 1 / r + math.atan(r)
        target = math.pi / 2 - 8.0 / 3.0
        lo, hi = 0.01, 10.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if f(mid) < target:
                lo = mid
            else:
                hi = mid
        assert rb == pytest.approx(0.5 * (lo + hi), abs=1e-8)
        assert rb == pytest.approx(0.446, abs=1e-3)

    def test_escape_cross_validation(self):
        s = counterexample_system()
        rb = boundary_radius(s, 0.0)
        rb_rk = boundary_radius_by_escape(s, 0.0, tol=1e-5)
        assert abs(rb - rb_rk) <= 1e-4

    def test_asymptote_direction_infinite(self):
        assert boundary_radius(counterexample_system(), math.pi) == math.inf

    def test_degenerate_infinite_everywhere(self):
        assert boundary_radius(build_eq2(X, (0,)), 1.23) == math.inf


class TestQuadratureOdeAgreement:
    def test_random_center_systems(self, rng):
        checked = 0
        while checked < 12:
            k = int(rng.choice([1, 3, 5]))
            m = int(rng.integers(0, 3))
            a = tuple(random_fraction(rng, -2, 3, 2) for _ in range(m + 1))
            if all(c == 0 for c in a):
                continue
            s = build_eq2(random_homogeneous(rng, k), a)
            trig = restrict_to_circle(s.Q)
            F = trig.antiderivative()
            # start inside the component around a small radius
            roots = sorted(invariant_circles(s))
            rho0 = 0.4 * roots[0] if roots else 0.1
            try:
                radial = RadialQuadrature.for_point(s.k, s.a, rho0)
            except OutsideValidIntervalError:
                continue
            # shrink until the whole solution stays safely interior to the
            # component (near-threshold starts dip below integrator resolution)
            g0 = radial.g(rho0)
            fvals = F.evaluate(np.linspace(0, TWO_PI, 512))
            if math.isinf(radial.hi):
                margin = 0.02 * (1.0 + float(np.max(np.abs(fvals))))
                cap_g = radial.sign * radial.g_inf - margin
            else:
                cap_g = radial.sign * radial.g(0.9 * radial.hi)
            while radial.sign * g0 + max(radial.sign * fvals) >= cap_g:
                rho0 *= 0.5
                g0 = radial.g(rho0)
            thetas, rhos, escaped, _ = polar_trajectory(s, rho0, 0.0, TWO_PI, n_samples=17)
            assert not escaped
            for th, rk in zip(thetas, rhos):
                quad_rho = radial.invert(g0 + float(F.evaluate(th)))
                assert abs(quad_rho - rk) <= 1e-7
            checked += 1


class TestIsochronicity:
    def test_counterexample(self):
        assert isochronicity_check(counterexample_system(), samples=10) <= 1e-9

    def test_pure_rotation(self):
        assert isochronicity_check(rotation_system(), samples=3) <= 1e-12

    def test_generalized(self, rng):
        u = build_thm2(X * Y, 1, BivarPoly.monomial(1, 0, 1))
        assert isochronicity_check(u, samples=4) <= 1e-10
