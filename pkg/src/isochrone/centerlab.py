"""Center verification and boundary-type classification.

In polar coordinates a factored system reduces to the separable equation
d(rho)/d(theta) = rho^(k+1) * q(theta) * R(rho) with q the circle
restriction of Q.  Solutions satisfy g(rho(theta)) = g(rho_0) + F(theta)
where F is the antiderivative of q and g integrates dr / (r^(k+1) R(r)).
Everything here flows from that identity: the center test (zero mean of q),
the conserved quantity g - F, the boundary of the center region (where the
accumulated F first reaches the finite tail budget of g), and the count of
unbounded boundary trajectories, which is the number of global maxima of F.
An adaptive Runge-Kutta route run directly on the ODE provides an
independent cross-check of the quadrature route throughout.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import IntegrationWarning, quad, solve_ivp
from scipy.optimize import brentq

from . import _univar
from .errors import (
    BlowUpError,
    NotACenterError,
    OutsideValidIntervalError,
    ZeroRadialError,
)
from .polyalg import BivarPoly
from .system import FactoredSystem, UniformSystem, vector_field
from .trig import TrigPoly, global_maxima, mean_is_zero, restrict_to_circle

TWO_PI = 2.0 * math.pi

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
DEFAULT_CEILING = 1e6


def _compile_poly(p: BivarPoly) -> Callable[[float, float], float]:
    terms = [(float(c), i, j) for (i, j), c in p.items()]

    def f(x: float, y: float) -> float:
        s = 0.0
        for c, i, j in terms:
            s += c * x**i * y**j
        return s

    return f


def _coerce_uniform(s: Union[UniformSystem, FactoredSystem]) -> UniformSystem:
    return s.uniform if isinstance(s, FactoredSystem) else s


class RadialQuadrature:
    """Numeric antiderivative g(rho) of 1 / (rho^(k+1) R(rho)) on a root-free interval.

    g is strictly monotone on the interval (increasing when R > 0 there) and
    has a finite limit g_inf at +infinity because the integrand decays like
    r^(-k-1-2m).  Values are computed by adaptive quadrature from the nearest
    cached anchor, so repeated evaluations during inversion stay cheap.
    """

    def __init__(self, k: int, a: Sequence, lo: float, hi: float, rho_ref: float):
        self.k = int(k)
        self.a = tuple(a)
        self.lo = float(lo)
        self.hi = float(hi)
        self.rho_ref = float(rho_ref)
        self._coeffs = [float(c) for c in a]
        self.sign = 1 if self.R(rho_ref) > 0 else -1
        self._anchors_rho = [self.rho_ref]
        self._anchors_g = [0.0]
        self._g_inf = None

    # -- construction --------------------------------------------------------

    @classmethod
    def for_unbounded(cls, k: int, a: Sequence) -> "RadialQuadrature":
        """Quadrature on the unbounded root-free component (largest root, inf).

        The reference point is 1 when that lies comfortably inside the
        component, otherwise largest_root + 1.
        """
        roots = _positive_radii(a)
        lo = max(roots) if roots else 0.0
        rho_ref = 1.0 if lo <= 0.9 else lo + 1.0
        return cls(k, a, lo, math.inf, rho_ref)

    @classmethod
    def for_point(cls, k: int, a: Sequence, rho: float) -> "RadialQuadrature":
        """Quadrature on the root-free component containing `rho`."""
        roots = _positive_radii(a)
        lo = max((r for r in roots if r < rho), default=0.0)
        hi = min((r for r in roots if r > rho), default=math.inf)
        if any(abs(r - rho) < 1e-12 * max(1.0, rho) for r in roots):
            raise OutsideValidIntervalError(f"rho = {rho} sits on an invariant circle")
        return cls(k, a, lo, hi, rho)

    # -- evaluation ----------------------------------------------------------

    def R(self, rho: float) -> float:
        """Float value of the radial factor at rho."""
        u = rho * rho
        acc = 0.0
        for c in reversed(self._coeffs):
            acc = acc * u + c
        return acc

    def integrand(self, r: float) -> float:
        return 1.0 / (r ** (self.k + 1) * self.R(r))

    def valid(self, rho: float) -> bool:
        return self.lo < rho < self.hi

    def g(self, rho: float) -> float:
        if not self.valid(rho):
            raise OutsideValidIntervalError(
                f"rho = {rho} outside root-free interval ({self.lo}, {self.hi})"
            )
        idx = bisect.bisect_left(self._anchors_rho, rho)
        best = None
        for cand in (idx - 1, idx):
            if 0 <= cand < len(self._anchors_rho):
                d = abs(self._anchors_rho[cand] - rho)
                if best is None or d < best[0]:
                    best = (d, cand)
        anchor_rho = self._anchors_rho[best[1]]
        anchor_g = self._anchors_g[best[1]]
        if anchor_rho == rho:
            return anchor_g
        with warnings.catch_warnings():
            # near the interval ends the integrand is close to its singularity;
            # the adaptive subdivision still converges to the requested accuracy
            warnings.simplefilter("ignore", IntegrationWarning)
            val, _ = quad(self.integrand, anchor_rho, rho, epsabs=1e-13, epsrel=1e-12, limit=200)
        out = anchor_g + val
        if best[0] > 1e-6 * max(1.0, rho) and len(self._anchors_rho) < 512:
            pos = bisect.bisect_left(self._anchors_rho, rho)
            self._anchors_rho.insert(pos, rho)
            self._anchors_g.insert(pos, out)
        return out

    @property
    def g_inf(self) -> float:
        """Limit of g at +infinity (finite; only for the unbounded component)."""
        if not math.isinf(self.hi):
            raise OutsideValidIntervalError("g_inf only exists on the unbounded component")
        if self._g_inf is None:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", IntegrationWarning)
                val, _ = quad(
                    self.integrand, self.rho_ref, math.inf, epsabs=1e-13, epsrel=1e-12, limit=200
                )
            self._g_inf = val
        return self._g_inf

    # -- inversion -----------------------------------------------------------

    def invert(self, target: float) -> float:
        """The unique rho with g(rho) = target, or inf when target is past g_inf.

        Monotone Brent solve on the cached g; both orientations of R's sign
        are handled.
        """
        sgn = self.sign

        def h(r: float) -> float:
            return sgn * self.g(r)

        t = sgn * target
        # h is increasing; range is (-inf, sgn*g_inf] on the unbounded component
        if math.isinf(self.hi):
            if t >= sgn * self.g_inf - 1e-15:
                return math.inf
            hi_b = max(self.rho_ref, 1.0)
            while h(hi_b) < t:
                hi_b *= 2.0
                if hi_b > 1e12:
                    return math.inf
        else:
            hi_b = self.hi - (self.hi - self.rho_ref) / 2.0
            while h(hi_b) < t:
                hi_b = self.hi - (self.hi - hi_b) / 2.0
                if self.hi - hi_b < 1e-14 * self.hi:
                    raise OutsideValidIntervalError("target unreachable before interval end")
        lo_b = self.rho_ref
        if h(lo_b) > t:
            while h(lo_b) > t:
                lo_b = self.lo + (lo_b - self.lo) / 2.0
                if lo_b - self.lo < 1e-300:
                    raise OutsideValidIntervalError("target unreachable near interval start")
        if lo_b == hi_b:
            return lo_b
        return brentq(lambda r: h(r) - t, lo_b, hi_b, xtol=1e-13, rtol=1e-15)


def _positive_radii(a: Sequence) -> List[float]:
    coeffs = _univar.trim(a)
    if not coeffs:
        raise ZeroRadialError("radial factor R is identically zero")
    return [u**0.5 for u in _univar.positive_roots(coeffs)]


@dataclass
class CenterReport:
    """Classification of a factored system's center and its region boundary."""

    is_center: bool
    nu: int
    type_label: str
    invariant_circles: List[float] = field(default_factory=list)
    asymptote_directions: List[float] = field(default_factory=list)
    boundary_samples: List[Tuple[float, float]] = field(default_factory=list)
    generic: bool = False
    tied: bool = False
    degenerate: bool = False

    def to_json(self) -> dict:
        return {
            "is_center": self.is_center,
            "nu": self.nu,
            "type_label": self.type_label,
            "invariant_circles": list(self.invariant_circles),
            "asymptote_directions": list(self.asymptote_directions),
            "boundary_samples": [[t, r] for t, r in self.boundary_samples],
            "generic": self.generic,
            "tied": self.tied,
            "degenerate": self.degenerate,
        }


def polar_rhs(s: FactoredSystem) -> Tuple[TrigPoly, RadialQuadrature]:
    """The pair (q, g-machinery) that fully determines d(rho)/d(theta)."""
    trig = restrict_to_circle(s.Q, homogeneous_required=True)
    radial = RadialQuadrature.for_unbounded(s.k, s.a)
    return trig, radial


def is_center(s: FactoredSystem) -> bool:
    """Exact center test: the circle restriction of Q has zero mean.

    Degenerate systems (R identically zero, hence H = 0) are pure rotations
    and report True regardless of Q.
    """
    if s.degenerate:
        return True
    return mean_is_zero(restrict_to_circle(s.Q, homogeneous_required=True))


class ConservedQuantity:
    """Evaluator of Phi(x, y) = g(rho) - F(theta), constant along trajectories.

    Valid on the quadrature's root-free interval; raises
    OutsideValidIntervalError elsewhere (including the origin).
    """

    def __init__(self, F: TrigPoly, radial: RadialQuadrature):
        self.F = F
        self.radial = radial

    def __call__(self, x: float, y: float) -> float:
        rho = math.hypot(x, y)
        if rho <= 0.0 or not self.radial.valid(rho):
            raise OutsideValidIntervalError(f"point at rho = {rho} outside valid interval")
        theta = math.atan2(y, x) % TWO_PI
        return self.radial.g(rho) - float(self.F.evaluate(theta))


def conserved_quantity(s: FactoredSystem) -> ConservedQuantity:
    """Quadrature first integral of a factored center system.

    For the degenerate H = 0 case (pure rotation) the radius itself is
    conserved; the returned Phi is then a monotone function of rho alone
    (built with a unit radial factor) and its level sets are circles.
    """
    if not is_center(s):
        raise NotACenterError("conserved quantity requires the center condition")
    if s.degenerate:
        radial = RadialQuadrature(s.k, (1,), 0.0, math.inf, 1.0)
        return ConservedQuantity(TrigPoly(0), radial)
    trig, radial = polar_rhs(s)
    return ConservedQuantity(trig.antiderivative(), radial)


def return_map(
    s: Union[UniformSystem, FactoredSystem],
    rho0: float,
    tol: float = DEFAULT_RTOL,
    ceiling: float = DEFAULT_CEILING,
) -> float:
    """rho(2*pi) for the polar scalar equation, by adaptive Runge-Kutta.

    Integrates d(rho)/d(theta) = rho * H(rho cos, rho sin), which covers the
    factored family (rho^(k+1) q R form) and the generalized family alike.
    This route is independent of the quadrature machinery and is used to
    cross-validate it.  Raises BlowUpError(theta) past the ceiling.
    """
    thetas, rhos, escaped, theta_esc = polar_trajectory(
        s, rho0, 0.0, TWO_PI, n_samples=2, tol=tol, ceiling=ceiling
    )
    if escaped:
        raise BlowUpError(theta_esc)
    return float(rhos[-1])


def polar_trajectory(
    s: Union[UniformSystem, FactoredSystem],
    rho0: float,
    theta0: float = 0.0,
    theta1: float = TWO_PI,
    n_samples: int = 361,
    tol: float = DEFAULT_RTOL,
    ceiling: float = DEFAULT_CEILING,
):
    """Integrate the polar scalar equation over [theta0, theta1].

    Returns (thetas, rhos, escaped, theta_escape); when the trajectory hits
    the blow-up ceiling the arrays cover the pre-escape span only.
    """
    uni = _coerce_uniform(s)
    H = _compile_poly(uni.H)

    # Rate cap: true blow-up reaches infinity at finite theta, which stalls
    # the integrator in sub-epsilon steps before the ceiling event can fire.
    # Capping the radial growth rate far above any bounded trajectory's
    # regime leaves the dynamics untouched below ~(cap)^(1/deg) and lets the
    # solver cross the ceiling within ~1e-8 of the true escape angle.
    rate_cap = 1e9

    def rhs(theta, r):
        rho = r[0]
        v = rho * H(rho * math.cos(theta), rho * math.sin(theta))
        lim = rate_cap * (1.0 + abs(rho))
        if v > lim:
            v = lim
        elif v < -lim:
            v = -lim
        return [v]

    def hit_ceiling(theta, r):
        return r[0] - ceiling

    hit_ceiling.terminal = True
    hit_ceiling.direction = 1

    t_eval = np.linspace(theta0, theta1, max(2, n_samples))
    sol = solve_ivp(
        rhs,
        (theta0, theta1),
        [float(rho0)],
        method="DOP853",
        rtol=tol,
        atol=DEFAULT_ATOL,
        dense_output=False,
        t_eval=t_eval,
        events=[hit_ceiling],
    )
    escaped = bool(sol.t_events[0].size)
    theta_esc = float(sol.t_events[0][0]) if escaped else math.nan
    if not sol.success and not escaped:
        raise BlowUpError(float(sol.t[-1]) if sol.t.size else theta0)
    return sol.t, sol.y[0], escaped, theta_esc


def classify(
    s: FactoredSystem,
    boundary_grid: int = 720,
    cluster_tol: float = 1e-9,
    root_tol: float = 1e-12,
) -> CenterReport:
    """Type classification of the center via the quadrature solution.

    The count nu of unbounded boundary trajectories equals the number of
    global maxima of the accumulated circle integral F: a solution escapes
    exactly where F first exhausts the finite budget g_inf - g(rho_0), and
    the boundary trajectory's budget equals max F.  (This realizes the
    isocline/asymptote picture computably; it is an interpretation in the
    non-generic tie cases, which are reported with tied=True.)  When R < 0
    on the unbounded component the sign-flipped pair (-q, -R), which induces
    the same system, is classified instead.
    """
    if s.degenerate:
        return CenterReport(
            is_center=True, nu=0, type_label="B^0", generic=False, degenerate=True
        )
    trig = restrict_to_circle(s.Q, homogeneous_required=True)
    if not mean_is_zero(trig):
        raise NotACenterError("mean of Q over the circle is nonzero")
    circles = _positive_radii(s.a)
    radial = RadialQuadrature.for_unbounded(s.k, s.a)
    sgn = radial.sign
    F = (trig if sgn > 0 else trig.scale(-1)).antiderivative()
    maxima = global_maxima(F, cluster_tol)
    if maxima.degenerate:
        return CenterReport(
            is_center=True,
            nu=0,
            type_label="B^0",
            invariant_circles=circles,
            generic=False,
            degenerate=True,
        )
    nu = len(maxima.argmax)
    assert nu <= s.k, f"nu = {nu} exceeds the harmonic bound k = {s.k}"
    samples: List[Tuple[float, float]] = []
    if boundary_grid > 0:
        g_inf = radial.g_inf
        thetas = np.linspace(0.0, TWO_PI, boundary_grid, endpoint=False)
        fvals = F.evaluate(thetas)
        for theta, fv in zip(thetas, fvals):
            deficit = maxima.value - float(fv)
            if deficit <= cluster_tol:
                continue
            rho_b = radial.invert(g_inf - sgn * deficit)
            if math.isfinite(rho_b):
                samples.append((float(theta), float(rho_b)))
    return CenterReport(
        is_center=True,
        nu=nu,
        type_label=f"B^{nu}",
        invariant_circles=circles,
        asymptote_directions=list(maxima.argmax),
        boundary_samples=samples,
        generic=(nu == (1 if s.k % 2 else 2)) and not maxima.tied,
        tied=maxima.tied,
        degenerate=False,
    )


def boundary_radius(s: FactoredSystem, theta: float, cluster_tol: float = 1e-9) -> float:
    """Radius of the center-region boundary on the ray at `theta`.

    Solves g(rho_b) = g_inf - (max F - F(theta)); returns inf on asymptote
    directions (and everywhere for the degenerate pure rotation).
    """
    if s.degenerate:
        return math.inf
    trig = restrict_to_circle(s.Q, homogeneous_required=True)
    if not mean_is_zero(trig):
        raise NotACenterError("boundary exists only for centers")
    radial = RadialQuadrature.for_unbounded(s.k, s.a)
    sgn = radial.sign
    F = (trig if sgn > 0 else trig.scale(-1)).antiderivative()
    maxima = global_maxima(F, cluster_tol)
    if maxima.degenerate:
        return math.inf
    deficit = maxima.value - float(F.evaluate(theta % TWO_PI))
    if deficit <= cluster_tol:
        return math.inf
    return radial.invert(radial.g_inf - sgn * deficit)


def boundary_radius_by_escape(
    s: FactoredSystem,
    theta: float,
    tol: float = 1e-4,
    ceiling: float = DEFAULT_CEILING,
    ode_tol: float = 1e-9,
) -> float:
    """Independent boundary estimate: bisection on the RK escape test.

    A start radius is inside the center region iff its trajectory survives a
    full revolution without hitting the ceiling.  This route never touches
    the quadrature machinery, so it cross-validates `boundary_radius`.
    """

    def escapes(rho0: float) -> bool:
        _, _, esc, _ = polar_trajectory(
            s, rho0, theta, theta + TWO_PI, n_samples=2, tol=ode_tol, ceiling=ceiling
        )
        return esc

    lo = 1e-3
    while escapes(lo):
        lo /= 4.0
        if lo < 1e-12:
            raise NotACenterError("no surviving start radius found")
    hi = max(2 * lo, 0.1)
    while not escapes(hi):
        hi *= 2.0
        if hi > 1e9:
            return math.inf
    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if escapes(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def isochronicity_check(
    s: Union[UniformSystem, FactoredSystem],
    samples: int = 10,
    rho_max: float = 0.3,
    seed: int = 0,
    tol: float = DEFAULT_RTOL,
) -> float:
    """Max |d(theta)/dt - 1| along integrated Cartesian trajectories.

    The angular speed is evaluated from the vector field at the integrator's
    own trajectory points, so a structural error in the field construction
    shows up immediately; analytically the deviation is zero.
    """
    uni = _coerce_uniform(s)
    v = vector_field(uni)
    fP, fS = _compile_poly(v.P), _compile_poly(v.S)

    def rhs(t, xy):
        x, y = xy
        return [fP(x, y), fS(x, y)]

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        rho0 = float(rng.uniform(0.02, rho_max))
        th0 = float(rng.uniform(0.0, TWO_PI))
        x0, y0 = rho0 * math.cos(th0), rho0 * math.sin(th0)
        sol = solve_ivp(
            rhs,
            (0.0, TWO_PI),
            [x0, y0],
            method="DOP853",
            rtol=tol,
            atol=DEFAULT_ATOL,
            t_eval=np.linspace(0.0, TWO_PI, 128),
        )
        xs, ys = sol.y
        for x, y in zip(xs, ys):
            r2 = x * x + y * y
            if r2 == 0.0:
                continue
            omega = (x * fS(x, y) - y * fP(x, y)) / r2
            worst = max(worst, abs(omega - 1.0))
    return worst


def cartesian_trajectory(
    s: Union[UniformSystem, FactoredSystem],
    x0: float,
    y0: float,
    t1: float = TWO_PI,
    n_samples: int = 257,
    tol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
):
    """Integrate the planar system itself; returns (t, x, y) arrays."""
    uni = _coerce_uniform(s)
    v = vector_field(uni)
    fP, fS = _compile_poly(v.P), _compile_poly(v.S)

    def rhs(t, xy):
        x, y = xy
        return [fP(x, y), fS(x, y)]

    sol = solve_ivp(
        rhs,
        (0.0, t1),
        [x0, y0],
        method="DOP853",
        rtol=tol,
        atol=atol,
        t_eval=np.linspace(0.0, t1, n_samples),
    )
    return sol.t, sol.y[0], sol.y[1]
