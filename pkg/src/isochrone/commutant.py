"""Lie brackets, exhaustive polynomial commutant search, and structural criteria.

A polynomial field Y commutes with X when [X, Y] = (DY)X - (DX)Y vanishes
identically.  For a uniformly isochronous X the bracket condition on the top
homogeneous pair forces deg Y into {1, deg X} (the determinant of the 2x2
top-degree system factors as (1-n)(d+1-n) H_d^2 by Euler's identity), and the
full commutant is the nullspace of an exact linear system in the unknown
coefficients of Y, solved here by fraction-free elimination.

The structural alternative: X commutes with some polynomial field iff H has
the even-base radial product shape (check_form7) or the alpha/beta power
shape with the rotation side condition (check_form8).  Both checks are exact
and return reconstructible witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import _linalg, _univar
from .errors import ZeroInputError, ZeroTopPartError
from .polyalg import (
    BivarPoly,
    R2,
    X as PX,
    Y as PY,
    homogeneous_components,
)
from .system import FactoredSystem, PolyVectorField, UniformSystem, vector_field


def lie_bracket(Xf: PolyVectorField, Yf: PolyVectorField) -> PolyVectorField:
    """[X, Y] = (DY)X - (DX)Y, exact; bilinear and antisymmetric."""
    b1 = (
        Yf.P.partial_x() * Xf.P
        + Yf.P.partial_y() * Xf.S
        - Xf.P.partial_x() * Yf.P
        - Xf.P.partial_y() * Yf.S
    )
    b2 = (
        Yf.S.partial_x() * Xf.P
        + Yf.S.partial_y() * Xf.S
        - Xf.S.partial_x() * Yf.P
        - Xf.S.partial_y() * Yf.S
    )
    return PolyVectorField(b1, b2)


def _try_divide(num: BivarPoly, den: BivarPoly) -> Optional[BivarPoly]:
    """Exact quotient num / den, or None when den does not divide num.

    Single-divisor reduction by the graded-lex leading term of den.
    """
    if den.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    (li, lj), lc = den.sorted_terms()[0]
    quot = BivarPoly.zero()
    rem = num
    while not rem.is_zero:
        (i, j), c = rem.sorted_terms()[0]
        if i < li or j < lj:
            return None
        t = BivarPoly.monomial(c / lc, i - li, j - lj)
        quot = quot + t
        rem = rem - t * den
    return quot


def _field_to_H(Xf: PolyVectorField) -> BivarPoly:
    """Recover H from a field of the uniformly isochronous shape, or raise."""
    T = PX * Xf.P + PY * Xf.S
    H = _try_divide(T, R2)
    if H is None or PolyVectorField(-PY + PX * H, PX + PY * H) != Xf:
        raise ValueError("field is not of the uniformly isochronous form")
    return H


def admissible_top_degrees(Xf: Union[PolyVectorField, UniformSystem]) -> set:
    """Degrees n at which a commuting field may have a nonzero top pair: {1, d+1}.

    d is the degree of H's top homogeneous part H_d; the top-degree bracket
    equations have determinant (1-n)(d+1-n) H_d^2, so any other degree forces
    the top pair of the commuter to vanish.  Raises ZeroTopPartError when
    H = 0 (pure rotation: every degree admissible, no finite filter).
    """
    H = Xf.H if isinstance(Xf, UniformSystem) else _field_to_H(Xf)
    if H.is_zero:
        raise ZeroTopPartError("H is identically zero")
    d = H.degree()
    return {1, d + 1}


@dataclass
class CommutantBasis:
    """Exact basis of the commuting polynomial fields up to a degree bound.

    Every basis field has zero constant term (the search space starts at
    degree 1) and brackets to exactly (0, 0) with the reference field.
    """

    degree_bound: int
    basis: List[PolyVectorField]
    contains_self: bool

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {
            "degree_bound": self.degree_bound,
            "dimension": self.dimension,
            "contains_self": self.contains_self,
            "basis": [[str(f.P), str(f.S)] for f in self.basis],
        }


def _unknown_monomials(n_max: int, include_constants: bool) -> List[Tuple[int, int, int]]:
    """(component, i, j) unknowns: component-major, degree ascending, x-lex."""
    out = []
    lo = 0 if include_constants else 1
    for comp in (0, 1):
        for d in range(lo, n_max + 1):
            for i in range(d, -1, -1):
                out.append((comp, i, d - i))
    return out


def _field_from_vector(vec: Sequence[Fraction], monos: Sequence[Tuple[int, int, int]]) -> PolyVectorField:
    terms: Tuple[Dict, Dict] = ({}, {})
    for c, (comp, i, j) in zip(vec, monos):
        if c:
            terms[comp][(i, j)] = c
    return PolyVectorField(BivarPoly(terms[0]), BivarPoly(terms[1]))


def _vector_from_field(f: PolyVectorField, monos: Sequence[Tuple[int, int, int]]) -> Optional[List[Fraction]]:
    index = {m: pos for pos, m in enumerate(monos)}
    vec = [Fraction(0)] * len(monos)
    for comp, poly in ((0, f.P), (1, f.S)):
        for (i, j), c in poly.items():
            key = (comp, i, j)
            if key not in index:
                return None
            vec[index[key]] = c
    return vec


def commutant_nullspace(
    Xf: Union[PolyVectorField, UniformSystem],
    n_max: int,
    include_constants: bool = False,
) -> CommutantBasis:
    """All polynomial fields Y with deg Y <= n_max, Y(0,0) = 0 and [X, Y] = 0.

    The bracket is linear in Y, so its coefficient equations form an exact
    rational linear system; the nullspace is computed by fraction-free
    elimination and re-verified field by field.  `include_constants` widens
    the search to constant terms for exploratory use (beyond the degree-1
    starting point of the standard expansion).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if isinstance(Xf, UniformSystem):
        Xf = vector_field(Xf)
    monos = _unknown_monomials(n_max, include_constants)
    columns = []
    row_index: Dict[Tuple[int, Tuple[int, int]], int] = {}
    col_entries = []
    for comp, i, j in monos:
        mono_poly = BivarPoly.monomial(1, i, j)
        e = (
            PolyVectorField(mono_poly, BivarPoly.zero())
            if comp == 0
            else PolyVectorField(BivarPoly.zero(), mono_poly)
        )
        br = lie_bracket(Xf, e)
        entries = {}
        for bcomp, poly in ((0, br.P), (1, br.S)):
            for exp, c in poly.items():
                key = (bcomp, exp)
                if key not in row_index:
                    row_index[key] = len(row_index)
                entries[row_index[key]] = c
        col_entries.append(entries)
    nrows, ncols = len(row_index), len(monos)
    rows = [[Fraction(0)] * ncols for _ in range(nrows)]
    for cidx, entries in enumerate(col_entries):
        for ridx, c in entries.items():
            rows[ridx][cidx] = c
    kernel = _linalg.nullspace_basis(rows, ncols)
    basis = [_field_from_vector(v, monos) for v in kernel]
    for f in basis:
        if not lie_bracket(Xf, f).is_zero:
            raise AssertionError("nullspace field fails exact bracket re-verification")
    xvec = _vector_from_field(Xf, monos)
    contains_self = xvec is not None and bool(kernel) and _linalg.in_span(kernel, xvec)
    return CommutantBasis(degree_bound=n_max, basis=basis, contains_self=contains_self)


@dataclass(frozen=True)
class NonPolynomialCommuter:
    """Report that the radial commuting field needs a half-integer power of r^2.

    The field (x, y) * (x^2+y^2)^radial_exponent * sum_i a_i (x^2+y^2)^i
    commutes with the system but is not polynomial for odd k.
    """

    radial_exponent: Fraction


def radial_commuter(s: FactoredSystem) -> Union[PolyVectorField, NonPolynomialCommuter]:
    """The radial field commuting with a factored system.

    Polynomial exactly when k is even: (x, y) * r^k * sum_i a_i r^(2i).
    For odd k the r^k factor has half-integer exponent in r^2 and a report
    is returned instead.
    """
    if s.k % 2 == 1:
        return NonPolynomialCommuter(radial_exponent=Fraction(s.k, 2))
    W = R2 ** (s.k // 2) * s.radial_factor
    return PolyVectorField(PX * W, PY * W)


@dataclass(frozen=True)
class Form7Witness:
    base: BivarPoly
    a: Tuple[Fraction, ...]

    def reconstruct(self) -> BivarPoly:
        out = BivarPoly.zero()
        pw = BivarPoly.constant(1)
        for c in self.a:
            out = out + (self.base * pw).scale(c)
            pw = pw * R2
        return out


@dataclass(frozen=True)
class Form8Witness:
    l: int
    alpha: BivarPoly
    beta: BivarPoly
    a: Tuple[Fraction, ...]

    def reconstruct(self) -> BivarPoly:
        out = BivarPoly.zero()
        pw = BivarPoly.constant(1)
        for c in self.a:
            out = out + (self.alpha * pw).scale(c)
            pw = pw * self.beta
        return out


@dataclass
class FormCheckResult:
    """Outcome of a structural form check.

    `inconclusive` is set only by the beta-kernel search of check_form8 when
    the one free parameter would have to be irrational; the check is then
    neither a confirmed match nor a confirmed non-match.
    """

    matches: bool
    witness: Optional[Union[Form7Witness, Form8Witness]] = None
    inconclusive: bool = False

    def to_json(self) -> dict:
        out = {"matches": self.matches, "inconclusive": self.inconclusive}
        if isinstance(self.witness, Form7Witness):
            out["witness"] = {
                "base": str(self.witness.base),
                "a": [str(c) for c in self.witness.a],
            }
        elif isinstance(self.witness, Form8Witness):
            out["witness"] = {
                "l": self.witness.l,
                "alpha": str(self.witness.alpha),
                "beta": str(self.witness.beta),
                "a": [str(c) for c in self.witness.a],
            }
        return out


def _require_valid_H(H: BivarPoly) -> None:
    if H.is_zero:
        raise ZeroInputError("H is identically zero")
    if H.coeff(0, 0) != 0:
        raise ValueError("H must vanish at the origin")


def _scalar_ratio(target: BivarPoly, base: BivarPoly) -> Optional[Fraction]:
    """The scalar a with target = a * base, or None (base nonzero)."""
    if base.is_zero:
        return None
    exp, c = base.sorted_terms()[0]
    a = target.coeff(*exp) / c
    return a if base.scale(a) == target else None


def check_form7(H: BivarPoly) -> FormCheckResult:
    """Does H equal P * sum_j a_j (x^2+y^2)^j with P homogeneous of even degree?

    The lowest homogeneous component (normalized a_0 = 1) must have even
    degree and every higher component must be an exact scalar multiple of
    r^(2j) * P; gaps (a_j = 0) are allowed.
    """
    _require_valid_H(H)
    comps = homogeneous_components(H)
    d0 = comps[0][0]
    if d0 % 2 == 1 or any(d % 2 for d, _ in comps):
        return FormCheckResult(matches=False)
    base = comps[0][1]
    jmax = (comps[-1][0] - d0) // 2
    coeffs = [Fraction(0)] * (jmax + 1)
    coeffs[0] = Fraction(1)
    for d, part in comps[1:]:
        j = (d - d0) // 2
        a = _scalar_ratio(part, base * R2**j)
        if a is None:
            return FormCheckResult(matches=False)
        coeffs[j] = a
    witness = Form7Witness(base=base, a=tuple(coeffs))
    if witness.reconstruct() != H:
        raise AssertionError("form-7 witness failed exact reconstruction")
    return FormCheckResult(matches=True, witness=witness)


def _rotation_matrix(l: int) -> Tuple[List[List[Fraction]], List[Tuple[int, int]]]:
    """Matrix of p -> x p_y - y p_x on the degree-l monomial basis."""
    basis = [(l - t, t) for t in range(l + 1)]
    index = {m: pos for pos, m in enumerate(basis)}
    rows = [[Fraction(0)] * len(basis) for _ in basis]
    for col, (i, j) in enumerate(basis):
        # x * d/dy - y * d/dx of x^i y^j
        if j > 0:
            rows[index[(i + 1, j - 1)]][col] += j
        if i > 0:
            rows[index[(i - 1, j + 1)]][col] -= i
    return rows, basis


def _poly_to_vec(p: BivarPoly, basis: Sequence[Tuple[int, int]]) -> List[Fraction]:
    return [p.coeff(i, j) for i, j in basis]


def _vec_to_poly(v: Sequence[Fraction], basis: Sequence[Tuple[int, int]]) -> BivarPoly:
    return BivarPoly({m: c for m, c in zip(basis, v)})


def _divisors_of(n: int) -> List[int]:
    return [l for l in range(1, n + 1) if n % l == 0]


def check_form8(H: BivarPoly) -> FormCheckResult:
    """Does H equal alpha * sum_k a_k beta^k with rot(beta) = l * alpha?

    alpha, beta are homogeneous of degree l for some divisor l of n = deg H,
    with components of H allowed only at degrees l, 2l, ..., n and normalized
    a_0 = 1 (so the degree-l component must be present and equals alpha).
    beta is recovered by exactly solving the rotation operator's linear
    system; for even l its one-dimensional kernel (multiples of r^l) adds a
    free rational parameter, determined by the proportionality constraints
    of the higher components (gcd of the constraint polynomials, rational
    roots only; a forced irrational parameter yields inconclusive=True).
    """
    _require_valid_H(H)
    n = H.degree()
    comps = dict(homogeneous_components(H))
    inconclusive_any = False
    for l in _divisors_of(n):
        if any(d % l for d in comps):
            continue
        alpha = comps.get(l)
        if alpha is None:
            continue
        rot_rows, basis = _rotation_matrix(l)
        rhs = _poly_to_vec(alpha.scale(l), basis)
        beta0_vec = _linalg.solve(rot_rows, rhs)
        if beta0_vec is None:
            continue
        beta0 = _vec_to_poly(beta0_vec, basis)
        kernel = _linalg.nullspace_basis(rot_rows, len(basis))
        if not kernel:
            result = _form8_fixed_beta(H, comps, n, l, alpha, beta0)
            if result is not None:
                return result
            continue
        assert len(kernel) == 1, "rotation operator kernel dimension must be <= 1"
        kpoly = _vec_to_poly(kernel[0], basis)
        result, inconclusive = _form8_parametric_beta(H, comps, n, l, alpha, beta0, kpoly)
        if result is not None:
            return result
        inconclusive_any = inconclusive_any or inconclusive
    return FormCheckResult(matches=False, inconclusive=inconclusive_any)


def _form8_fixed_beta(H, comps, n, l, alpha, beta) -> Optional[FormCheckResult]:
    K = n // l - 1
    coeffs = [Fraction(0)] * (K + 1)
    coeffs[0] = Fraction(1)
    for c in range(1, K + 1):
        target = comps.get((c + 1) * l)
        if target is None:
            continue
        a = _scalar_ratio(target, alpha * beta**c)
        if a is None:
            return None
        coeffs[c] = a
    witness = Form8Witness(l=l, alpha=alpha, beta=beta, a=tuple(coeffs))
    if witness.reconstruct() != H:
        return None
    return FormCheckResult(matches=True, witness=witness)


def _form8_parametric_beta(H, comps, n, l, alpha, beta0, kpoly):
    """Search beta = beta0 + t * kpoly over rational t.

    Returns (result_or_None, inconclusive_flag).
    """
    K = n // l - 1
    constraints: List[List[Fraction]] = []
    for c in range(1, K + 1):
        target = comps.get((c + 1) * l)
        if target is None:
            continue
        # alpha * (beta0 + t*kpoly)^c = sum_i t^i * B_i
        B = [
            (alpha * beta0 ** (c - i) * kpoly**i).scale(math.comb(c, i))
            for i in range(c + 1)
        ]
        support = set()
        for b in B:
            support.update(e for e, _ in b.items())
        support.update(e for e, _ in target.items())
        e0, t_e0 = None, Fraction(0)
        for e in sorted(support):
            if target.coeff(*e):
                e0, t_e0 = e, target.coeff(*e)
                break
        if e0 is None:
            continue
        g_e0 = [b.coeff(*e0) for b in B]
        for e in sorted(support):
            g_e = [b.coeff(*e) for b in B]
            t_e = target.coeff(*e)
            minor = [ge * t_e0 - g0 * t_e for ge, g0 in zip(g_e, g_e0)]
            minor = _univar.trim(minor)
            if minor:
                constraints.append(minor)
    if not constraints:
        result = _form8_fixed_beta(H, comps, n, l, alpha, beta0)
        return result, False
    g = constraints[0]
    for c in constraints[1:]:
        g = _univar.poly_gcd(g, c)
        if _univar.degree(g) == 0:
            return None, False
    if not g:
        result = _form8_fixed_beta(H, comps, n, l, alpha, beta0)
        return result, False
    if _univar.degree(g) == 0:
        return None, False
    rational_ts = _univar.rational_roots(g)
    for t in rational_ts:
        beta = beta0 + kpoly.scale(t)
        result = _form8_fixed_beta(H, comps, n, l, alpha, beta)
        if result is not None:
            return result, False
    # deflate the rational roots; leftover real roots would be irrational
    rem = list(g)
    for t in rational_ts:
        while True:
            q, r = _univar._divmod(rem, [-t, Fraction(1)])
            if r:
                break
            rem = q
    return None, _univar.has_real_root(rem)


def predicts_polynomial_commuter(H: BivarPoly) -> bool:
    """Structural prediction: some polynomial field commutes iff form 7 or form 8."""
    _require_valid_H(H)
    return check_form7(H).matches or check_form8(H).matches
