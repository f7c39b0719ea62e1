"""Uniformly isochronous systems and their Darboux data.

The core family is (xdot, ydot) = (-y + x*H, x + y*H) for a polynomial H
with H(0, 0) = 0; the factored subfamily takes H = Q * sum_i a_i * r^(2i)
with Q homogeneous, which admits exact invariants f1 = r^2 and
f2 = sum_i a_i r^(2i) with polynomial cofactors, plus a cofactor-divergence
identity that is verified here exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from . import _univar
from .errors import (
    EmptyRadialError,
    IdentityViolationError,
    NonHomogeneousError,
    ZeroRadialError,
)
from .polyalg import BivarPoly, R2, X, Y, rotational_derivative

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class UniformSystem:
    """(-y + x*H, x + y*H): every orbit circles the origin at unit angular speed."""

    H: BivarPoly

    def __post_init__(self):
        if self.H.coeff(0, 0) != 0:
            raise ValueError("H must vanish at the origin")

    @property
    def degree(self) -> int:
        """Degree of the full vector field (1 for the pure rotation H = 0)."""
        return max(1, self.H.degree() + 1)


@dataclass(frozen=True)
class PolyVectorField:
    """A planar polynomial vector field (P, S)."""

    P: BivarPoly
    S: BivarPoly

    def __call__(self, x: float, y: float) -> Tuple[float, float]:
        return self.P(x, y), self.S(x, y)

    def degree(self) -> int:
        return max(self.P.degree(), self.S.degree())

    @property
    def is_zero(self) -> bool:
        return self.P.is_zero and self.S.is_zero


class FactoredSystem:
    """The factored family: Q homogeneous of degree k, radial coefficients a_0..a_m.

    H = Q * sum_i a_i (x^2+y^2)^i, and in polar coordinates
    d(rho)/d(theta) = rho^(k+1) * Q(cos, sin) * R(rho) with
    R(rho) = sum_i a_i rho^(2i).
    """

    def __init__(self, Q: BivarPoly, a: Sequence[Scalar]):
        if Q.is_zero or not Q.is_homogeneous():
            raise NonHomogeneousError("Q must be homogeneous and nonzero")
        if Q.degree() < 1:
            raise NonHomogeneousError("Q must have degree >= 1")
        a = tuple(Fraction(c) for c in a)
        if not a:
            raise EmptyRadialError("radial coefficient sequence is empty")
        self.Q = Q
        self.a = a
        radial = BivarPoly.zero()
        r2pow = BivarPoly.constant(1)
        for c in a:
            radial = radial + r2pow.scale(c)
            r2pow = r2pow * R2
        self._radial_poly = radial
        self.H = Q * radial

    @property
    def k(self) -> int:
        return self.Q.degree()

    @property
    def m(self) -> int:
        return len(self.a) - 1

    @property
    def degenerate(self) -> bool:
        """True when every radial coefficient vanishes (H = 0, pure rotation)."""
        return all(c == 0 for c in self.a)

    @property
    def radial_factor(self) -> BivarPoly:
        """sum_i a_i (x^2+y^2)^i as a polynomial (this is also f2)."""
        return self._radial_poly

    def radial_coeffs_in_u(self) -> List[Fraction]:
        """R as a polynomial in u = rho^2: [a_0, a_1, ...] trimmed."""
        return _univar.trim(self.a)

    def R_of_rho(self, rho: float) -> float:
        u = rho * rho
        acc = 0.0
        for c in reversed(self.a):
            acc = acc * u + float(c)
        return acc

    @property
    def uniform(self) -> UniformSystem:
        return UniformSystem(self.H)

    def __repr__(self) -> str:
        return f"FactoredSystem(Q={self.Q}, a={[str(c) for c in self.a]})"


def build_eq2(Q: BivarPoly, a: Sequence[Scalar]) -> FactoredSystem:
    """Construct the factored system from Q and the radial coefficients."""
    return FactoredSystem(Q, a)


def build_thm2(p: BivarPoly, c: Scalar, h_coeffs: BivarPoly) -> UniformSystem:
    """Generalized center family: H = q * h(x^2 + y^2, p) with q = c * (x p_y - y p_x).

    `h_coeffs` is a polynomial in the two slot variables (u, v) |-> (r^2, p);
    its (i, j) term contributes coeff * r^(2i) * p^j.  The result always has
    H(0, 0) = 0 because q is homogeneous of degree >= 1.
    """
    if p.is_zero or not p.is_homogeneous() or p.degree() < 1:
        raise NonHomogeneousError("p must be homogeneous of degree >= 1")
    q = rotational_derivative(p).scale(Fraction(c))
    h_subst = BivarPoly.zero()
    for (i, j), coeff in h_coeffs.items():
        h_subst = h_subst + (R2**i * p**j).scale(coeff)
    return UniformSystem(q * h_subst)


def vector_field(s: UniformSystem) -> PolyVectorField:
    """The exact field (-y + x*H, x + y*H)."""
    return PolyVectorField(-Y + X * s.H, X + Y * s.H)


def divergence(v: PolyVectorField) -> BivarPoly:
    return v.P.partial_x() + v.S.partial_y()


def apply_field(v: PolyVectorField, f: BivarPoly) -> BivarPoly:
    """Directional derivative of f along v: P*f_x + S*f_y."""
    return v.P * f.partial_x() + v.S * f.partial_y()


@dataclass(frozen=True)
class DarbouxReport:
    """Invariants f1, f2 with cofactors K1, K2 and the divergence identity.

    identity_holds certifies, exactly: X(f1) = K1*f1, X(f2) = K2*f2, and
    (k+2)/2 * K1 + K2 = div.  mu_exponents are the exponents (e1, e2) of the
    reciprocal integrating factor f1^e1 * f2^e2 (kept as exact rationals; for
    odd k the factor involves a square root of f1 and is reported rather
    than expanded).
    """

    f1: BivarPoly
    f2: BivarPoly
    K1: BivarPoly
    K2: BivarPoly
    identity_holds: bool
    mu_exponents: Tuple[Fraction, Fraction]

    def to_json(self) -> dict:
        return {
            "f1": str(self.f1),
            "f2": str(self.f2),
            "K1": str(self.K1),
            "K2": str(self.K2),
            "identity_holds": self.identity_holds,
            "mu_exponents": [str(e) for e in self.mu_exponents],
        }


def darboux_report(s: FactoredSystem) -> DarbouxReport:
    """Build and exactly verify the invariant/cofactor data of a factored system.

    Raises IdentityViolationError if any of the three identities fails, which
    would indicate an arithmetic bug rather than a property of the input.
    """
    f1 = R2
    f2 = s.radial_factor
    # K2 = 2*Q * sum_i i * a_i * r^(2i)
    weighted = BivarPoly.zero()
    r2pow = BivarPoly.constant(1)
    for i, c in enumerate(s.a):
        weighted = weighted + r2pow.scale(c * i)
        r2pow = r2pow * R2
    K1 = (s.Q * f2).scale(2)
    K2 = (s.Q * weighted).scale(2)
    v = vector_field(s.uniform)
    ok = (
        apply_field(v, f1) == K1 * f1
        and apply_field(v, f2) == K2 * f2
        and K1.scale(Fraction(s.k + 2, 2)) + K2 == divergence(v)
    )
    if not ok:
        raise IdentityViolationError("cofactor/divergence identity failed exactly")
    return DarbouxReport(
        f1=f1,
        f2=f2,
        K1=K1,
        K2=K2,
        identity_holds=True,
        mu_exponents=(Fraction(s.k + 2, 2), Fraction(1)),
    )


def invariant_circles(s: FactoredSystem, tol: float = 1e-12) -> List[float]:
    """Radii rho_i > 0 of invariant circles: positive roots of R(rho).

    Roots are isolated exactly (Sturm on the squarefree part in u = rho^2)
    and returned as floats accurate to `tol`; even-multiplicity roots are
    found.  Raises ZeroRadialError when R is identically zero.
    """
    coeffs = s.radial_coeffs_in_u()
    if not coeffs:
        raise ZeroRadialError("radial factor R is identically zero")
    # u-interval width w gives rho error ~ w / (2 sqrt(u)); squaring the
    # requested tolerance keeps the mapped error below tol for any root scale
    width = min(Fraction(tol).limit_denominator(10**18) ** 2, Fraction(1, 10**24))
    return [u**0.5 for u in _univar.positive_roots(coeffs, width)]


def counterexample_system() -> FactoredSystem:
    """The bundled cubic counterexample: Q = y(x-y)(2x-y), a = (1, 1).

    A uniformly isochronous center that has no symmetry axis and admits no
    polynomial commuting system beyond its own multiples.
    """
    Q = Y * (X - Y) * (2 * X - Y)
    return FactoredSystem(Q, (1, 1))
