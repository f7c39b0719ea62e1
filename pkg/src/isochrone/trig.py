"""Exact trigonometric polynomials and circle restrictions.

A homogeneous polynomial q of degree k satisfies q(x, y) = r^k * t(theta) on
x = r cos(theta), y = r sin(theta); this module computes the finite Fourier
series t exactly (rational coefficients via power-reduction in the complex
exponential basis), and provides the analysis used by the center machinery:
antiderivatives, zero/extremum isolation on a period, and symmetry-axis
detection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .errors import IdenticallyZeroError, NonHomogeneousError, NonzeroMeanError
from .polyalg import BivarPoly, homogeneous_components

Scalar = Union[int, Fraction]

TWO_PI = 2.0 * math.pi

# Unit factors (-i)^j for j mod 4, as (re, im) rational pairs.
_NEG_I_POW = {0: (1, 0), 1: (0, -1), 2: (-1, 0), 3: (0, 1)}


class TrigPoly:
    """Finite Fourier series c0 + sum_j (a_j cos j*theta + b_j sin j*theta).

    Coefficients are exact rationals; all-zero harmonics are not stored.
    Instances are immutable by convention.
    """

    __slots__ = ("c0", "_h", "_float_cache")

    def __init__(self, c0: Scalar = 0, harmonics: Dict[int, Tuple[Scalar, Scalar]] | None = None):
        self.c0 = Fraction(c0)
        clean: Dict[int, Tuple[Fraction, Fraction]] = {}
        if harmonics:
            for j, (a, b) in harmonics.items():
                if j < 1:
                    raise ValueError("harmonic index must be >= 1")
                a, b = Fraction(a), Fraction(b)
                if a or b:
                    clean[int(j)] = (a, b)
        self._h = clean
        self._float_cache = None

    # -- inspection ----------------------------------------------------------

    @property
    def harmonics(self) -> Dict[int, Tuple[Fraction, Fraction]]:
        return dict(self._h)

    def harmonic(self, j: int) -> Tuple[Fraction, Fraction]:
        return self._h.get(j, (Fraction(0), Fraction(0)))

    @property
    def max_harmonic(self) -> int:
        return max(self._h) if self._h else 0

    @property
    def is_zero(self) -> bool:
        return self.c0 == 0 and not self._h

    @property
    def is_constant(self) -> bool:
        return not self._h

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.c0 == other.c0 and self._h == other._h

    def __hash__(self):
        return hash((self.c0, frozenset(self._h.items())))

    def __repr__(self) -> str:
        parts = [str(self.c0)] if self.c0 else []
        for j in sorted(self._h):
            a, b = self._h[j]
            if a:
                parts.append(f"{a}*cos({j}t)")
            if b:
                parts.append(f"{b}*sin({j}t)")
        return "TrigPoly(" + (" + ".join(parts) if parts else "0") + ")"

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other) -> "TrigPoly":
        if isinstance(other, (int, Fraction)):
            other = TrigPoly(other)
        if not isinstance(other, TrigPoly):
            return NotImplemented
        h = dict(self._h)
        for j, (a, b) in other._h.items():
            a0, b0 = h.get(j, (Fraction(0), Fraction(0)))
            h[j] = (a0 + a, b0 + b)
        return TrigPoly(self.c0 + other.c0, h)

    __radd__ = __add__

    def __neg__(self) -> "TrigPoly":
        return self.scale(-1)

    def __sub__(self, other) -> "TrigPoly":
        return self + (-other if isinstance(other, TrigPoly) else TrigPoly(-Fraction(other)))

    def scale(self, c: Scalar) -> "TrigPoly":
        c = Fraction(c)
        return TrigPoly(self.c0 * c, {j: (a * c, b * c) for j, (a, b) in self._h.items()})

    def __mul__(self, other) -> "TrigPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TrigPoly):
            return NotImplemented
        prod: Dict[int, List[Fraction]] = {}
        for m1, (r1, i1) in _to_exponential(self).items():
            for m2, (r2, i2) in _to_exponential(other).items():
                m = m1 + m2
                re = r1 * r2 - i1 * i2
                im = r1 * i2 + i1 * r2
                acc = prod.setdefault(m, [Fraction(0), Fraction(0)])
                acc[0] += re
                acc[1] += im
        return _from_exponential(prod)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TrigPoly":
        if n < 0:
            raise ValueError("negative power of a trig polynomial")
        out = TrigPoly(1)
        for _ in range(n):
            out = out * self
        return out

    # -- calculus ----------------------------------------------------------------

    def derivative(self) -> "TrigPoly":
        return TrigPoly(0, {j: (j * b, -j * a) for j, (a, b) in self._h.items()})

    def antiderivative(self) -> "TrigPoly":
        """The antiderivative F with F(0) = 0; requires zero mean.

        A nonzero mean would make F unbounded (linear drift), which signals a
        non-center input upstream.
        """
        if self.c0 != 0:
            raise NonzeroMeanError(f"mean {self.c0} != 0: antiderivative would be unbounded")
        h = {j: ((-b) / j, a / j) for j, (a, b) in self._h.items()}
        c0 = sum((b / j for j, (_, b) in self._h.items()), Fraction(0))
        return TrigPoly(c0, h)

    # -- evaluation ----------------------------------------------------------------

    def _floats(self):
        if self._float_cache is None:
            js = np.array(sorted(self._h), dtype=float)
            a = np.array([float(self._h[int(j)][0]) for j in js])
            b = np.array([float(self._h[int(j)][1]) for j in js])
            self._float_cache = (float(self.c0), js, a, b)
        return self._float_cache

    def evaluate(self, theta):
        """Float evaluation at a scalar or array of angles."""
        c0, js, a, b = self._floats()
        th = np.asarray(theta, dtype=float)
        if js.size == 0:
            out = np.full_like(th, c0, dtype=float)
            return float(out) if out.ndim == 0 else out
        ang = np.multiply.outer(th, js)
        out = c0 + np.cos(ang) @ a + np.sin(ang) @ b
        return float(out) if np.ndim(theta) == 0 else out

    def __call__(self, theta):
        return self.evaluate(theta)

    def amplitude_bound(self) -> float:
        return abs(float(self.c0)) + float(
            sum(abs(a) + abs(b) for a, b in self._h.values())
        )

    def to_json(self) -> dict:
        return {
            "c0": str(self.c0),
            "harmonics": [[j, str(a), str(b)] for j, (a, b) in sorted(self._h.items())],
        }


def _to_exponential(t: TrigPoly) -> Dict[int, Tuple[Fraction, Fraction]]:
    out: Dict[int, Tuple[Fraction, Fraction]] = {0: (t.c0, Fraction(0))}
    for j, (a, b) in t.harmonics.items():
        out[j] = (a / 2, -b / 2)
        out[-j] = (a / 2, b / 2)
    return out


def _from_exponential(coeffs: Dict[int, Sequence[Fraction]]) -> TrigPoly:
    c0 = Fraction(0)
    h: Dict[int, Tuple[Fraction, Fraction]] = {}
    ms = {abs(m) for m in coeffs}
    for m in sorted(ms):
        rp, ip = coeffs.get(m, (Fraction(0), Fraction(0)))
        rn, im_ = coeffs.get(-m, (Fraction(0), Fraction(0)))
        if m == 0:
            c0 = rp
            continue
        a = rp + rn
        b = im_ - ip
        if a or b:
            h[m] = (a, b)
    return TrigPoly(c0, h)


def restrict_to_circle(q: BivarPoly, homogeneous_required: bool = False) -> TrigPoly:
    """Exact Fourier series of q(cos theta, sin theta).

    Power-reduction is done in the complex exponential basis with Gaussian
    rational arithmetic, so coefficients are exact.  For homogeneous q of
    degree k only harmonics of the parity of k (and <= k) appear.
    """
    if homogeneous_required and not q.is_homogeneous():
        raise NonHomogeneousError(f"polynomial is not homogeneous: {q}")
    acc: Dict[int, List[Fraction]] = {}
    for (i, j), c in q.items():
        scale = c / Fraction(2 ** (i + j))
        ur, ui = _NEG_I_POW[j % 4]
        for a_ in range(i + 1):
            ca = math.comb(i, a_)
            for b_ in range(j + 1):
                cb = math.comb(j, b_) * (-1 if (j - b_) % 2 else 1)
                m = 2 * a_ - i + 2 * b_ - j
                w = scale * ca * cb
                cell = acc.setdefault(m, [Fraction(0), Fraction(0)])
                cell[0] += w * ur
                cell[1] += w * ui
    return _from_exponential(acc)


def mean_is_zero(t: TrigPoly) -> bool:
    """Exact test that the mean over a period vanishes (c0 = 0)."""
    return t.c0 == 0


def antiderivative(t: TrigPoly) -> TrigPoly:
    return t.antiderivative()


@dataclass(frozen=True)
class TrigZero:
    """A zero of a trig polynomial with its crossing kind.

    crossing is "down" (+ to -), "up" (- to +), or "touch" (no sign change).
    """

    theta: float
    crossing: str


@dataclass
class MaxSet:
    """Global maxima of a trig polynomial over one period.

    `tied` warns that the argmax set depends on the clustering tolerance:
    some angle attains the maximum within cluster_tol but not within float
    precision (a near-tie, as opposed to an exact symmetric tie).
    """

    value: float
    argmax: List[float] = field(default_factory=list)
    degenerate: bool = False
    tied: bool = False


def zeros_on_period(t: TrigPoly, tol: float = 1e-12) -> List[TrigZero]:
    """All zeros of t in [0, 2*pi), isolated to within `tol`.

    Scans a uniform grid of 64 * max_harmonic samples (the harmonic bound
    caps the zero count at 2 * max_harmonic, so simple zeros are separated),
    then refines sign changes by bisection.  Touch zeros are recovered from
    critical points where |t| falls below an amplitude-scaled threshold.
    """
    if t.is_zero:
        raise IdenticallyZeroError("zero trig polynomial")
    if t.is_constant:
        return []
    n = max(t.max_harmonic, 1)
    grid_n = 64 * n
    amp = t.amplitude_bound()
    zero_eps = 1e-13 * amp
    thetas = np.linspace(0.0, TWO_PI, grid_n, endpoint=False)
    vals = t.evaluate(thetas)

    found: List[TrigZero] = []

    def classify_at(idx: int) -> None:
        before = after = 0.0
        for step in range(1, grid_n):
            v = vals[(idx - step) % grid_n]
            if abs(v) > zero_eps:
                before = v
                break
        for step in range(1, grid_n):
            v = vals[(idx + step) % grid_n]
            if abs(v) > zero_eps:
                after = v
                break
        if before > 0 and after < 0:
            kind = "down"
        elif before < 0 and after > 0:
            kind = "up"
        else:
            kind = "touch"
        found.append(TrigZero(float(thetas[idx]), kind))

    on_grid = [i for i in range(grid_n) if abs(vals[i]) <= zero_eps]
    on_grid_set = set(on_grid)
    for i in on_grid:
        classify_at(i)

    f = t.evaluate

    def cell(i: int) -> tuple:
        lo = thetas[i]
        hi = thetas[i + 1] if i + 1 < grid_n else TWO_PI
        return lo, hi

    for i in range(grid_n):
        if i in on_grid_set or (i + 1) % grid_n in on_grid_set:
            continue
        v0, v1 = vals[i], vals[(i + 1) % grid_n]
        if (v0 > 0) == (v1 > 0):
            continue
        lo, hi = cell(i)
        root = brentq(f, lo, hi, xtol=tol)
        found.append(TrigZero(float(root % TWO_PI), "down" if v0 > 0 else "up"))

    # touch zeros off the grid: critical points where t nearly vanishes
    deriv = t.derivative()
    if not deriv.is_zero:
        dvals = deriv.evaluate(thetas)
        damp = deriv.amplitude_bound()
        for i in range(grid_n):
            v0, v1 = dvals[i], dvals[(i + 1) % grid_n]
            if (v0 > 0) == (v1 > 0):
                continue
            lo, hi = cell(i)
            # re-evaluate on the exact endpoints; a grazing of size ~rounding
            # is not a robust crossing and cannot hide a genuine touch zero
            flo, fhi = deriv.evaluate(lo), deriv.evaluate(hi)
            if min(abs(flo), abs(fhi)) <= 1e-13 * damp or (flo > 0) == (fhi > 0):
                continue
            crit = brentq(deriv.evaluate, lo, hi, xtol=tol)
            if abs(f(crit)) <= 1e-11 * amp:
                th = float(crit % TWO_PI)
                if all(_angle_gap(th, z.theta) > 16 * tol for z in found):
                    found.append(TrigZero(th, "touch"))

    found.sort(key=lambda z: z.theta)
    deduped: List[TrigZero] = []
    for z in found:
        if deduped and _angle_gap(z.theta, deduped[-1].theta) <= 16 * tol:
            continue
        deduped.append(z)
    if len(deduped) > 1 and _angle_gap(deduped[0].theta, deduped[-1].theta) <= 16 * tol:
        deduped.pop()
    return deduped


def _angle_gap(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def global_maxima(t: TrigPoly, cluster_tol: float = 1e-9) -> MaxSet:
    """All angles attaining the global maximum of t over [0, 2*pi).

    Candidates are the downward zero crossings of the derivative.  Values
    within `cluster_tol` of the best are reported together (tied=True) since
    downstream type counting is sensitive to near-ties.  A constant input is
    flagged degenerate with an empty argmax.
    """
    if t.is_constant:
        return MaxSet(value=float(t.c0), argmax=[], degenerate=True)
    deriv = t.derivative()
    candidates = [z.theta for z in zeros_on_period(deriv) if z.crossing == "down"]
    values = [float(t.evaluate(th)) for th in candidates]
    vmax = max(values)
    argmax = sorted(th for th, v in zip(candidates, values) if vmax - v <= cluster_tol)
    strict_tol = 1e-13 * max(1.0, abs(vmax))
    n_strict = sum(1 for v in values if vmax - v <= strict_tol)
    return MaxSet(value=vmax, argmax=argmax, tied=len(argmax) != n_strict)


def symmetry_axes(t: TrigPoly, angle_tol: float = 1e-12) -> List[float]:
    """All axis directions theta* in [0, pi) with t(2*theta* - u) = t(u) for all u.

    Reflection symmetry holds iff every nonzero harmonic A_j cos(j*u - phi_j)
    satisfies the phase condition j*theta* = phi_j (mod pi).  Candidates come
    from the lowest nonzero harmonic and are checked against all others.
    """
    if t.is_zero:
        raise IdenticallyZeroError("zero trig polynomial")
    if t.is_constant:
        raise IdenticallyZeroError(
            "constant trig polynomial: every direction is a symmetry axis"
        )
    phases = {j: math.atan2(float(b), float(a)) for j, (a, b) in t.harmonics.items()}
    j0 = min(phases)
    base = phases[j0] / j0
    step = math.pi / j0
    axes = []
    for s in range(j0):
        cand = (base + s * step) % math.pi
        ok = True
        for j, phi in phases.items():
            if _mod_pi_distance(j * cand - phi) > angle_tol * max(1.0, j):
                ok = False
                break
        if ok:
            axes.append(cand % math.pi)
    return sorted(axes)


def _mod_pi_distance(x: float) -> float:
    r = x % math.pi
    return min(r, math.pi - r)


def degree3_axis_criterion(a1: Scalar, a3: Scalar, b1: Scalar, b3: Scalar) -> bool:
    """Axis-existence test for a1 cos t + a3 cos 3t + b1 sin t + b3 sin 3t.

    Uses the identity a1*b3*(a1^2 - 3*b1^2) = a3*b1*(3*a1^2 - b1^2), which is
    equivalent to tan(3*phi_1) = tan(phi_3) in homogenized form (so the poles
    of tan need no special casing).  When either harmonic vanishes entirely
    the remaining single harmonic always has axes.
    """
    a1, a3, b1, b3 = Fraction(a1), Fraction(a3), Fraction(b1), Fraction(b3)
    if (a1 == 0 and b1 == 0) or (a3 == 0 and b3 == 0):
        return True
    return a1 * b3 * (a1**2 - 3 * b1**2) == a3 * b1 * (3 * a1**2 - b1**2)


def symmetry_axes_of_polynomial(p: BivarPoly, angle_tol: float = 1e-12) -> List[float]:
    """Common symmetry axes of all homogeneous components' circle restrictions.

    A line x sin(theta*) = y cos(theta*) is a symmetry line of the induced
    uniformly isochronous system iff every component's restriction is
    symmetric about theta*; components restricting to constants impose no
    constraint.
    """
    axes = None
    for _, part in homogeneous_components(p):
        t = restrict_to_circle(part)
        if t.is_constant:
            continue
        part_axes = symmetry_axes(t, angle_tol)
        if axes is None:
            axes = part_axes
        else:
            axes = [
                a
                for a in axes
                if any(_mod_pi_distance(a - b) <= 8 * angle_tol for b in part_axes)
            ]
        if not axes:
            return []
    return axes if axes is not None else []
