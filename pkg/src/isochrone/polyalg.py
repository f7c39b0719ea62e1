"""Exact sparse arithmetic for bivariate polynomials over the rationals.

A polynomial is a dictionary from exponent pairs (i, j), meaning x^i * y^j,
to Fraction coefficients.  Zero coefficients are never stored, so equality is
plain dictionary equality and the zero polynomial has an empty term map.
All arithmetic is exact; floating evaluation is a separate, clearly marked
path (`evaluate`).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Scalar = Union[int, Fraction]

_TERM_RE = re.compile(
    r"^(?P<sign>[+-]?)\s*(?P<coeff>\d+(?:/\d+)?)?"
    r"(?:\*?(?P<x>x(?:\^(?P<i>\d+))?))?"
    r"(?:\*?(?P<y>y(?:\^(?P<j>\d+))?))?$"
)


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected int or Fraction coefficient, got {type(c).__name__}")


class BivarPoly:
    """Bivariate polynomial with exact rational coefficients.

    Instances are treated as immutable: all operations return new objects.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, Scalar] | None = None):
        clean = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent in term ({i}, {j})")
                f = _as_fraction(c)
                if f != 0:
                    clean[(int(i), int(j))] = f
        self._terms = clean

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zero(cls) -> "BivarPoly":
        return cls()

    @classmethod
    def constant(cls, c: Scalar) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c: Scalar, i: int, j: int) -> "BivarPoly":
        return cls({(i, j): c})

    # -- inspection ----------------------------------------------------------

    def items(self) -> Iterator[tuple]:
        return iter(self._terms.items())

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self._terms:
            return -1
        return max(i + j for i, j in self._terms)

    def is_homogeneous(self) -> bool:
        """True for the zero polynomial and for single-degree polynomials."""
        degs = {i + j for i, j in self._terms}
        return len(degs) <= 1

    def num_terms(self) -> int:
        return len(self._terms)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "BivarPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return _raw(out)

    __radd__ = __add__

    def __neg__(self) -> "BivarPoly":
        return _raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "BivarPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "BivarPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> "BivarPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                e = (i1 + i2, j1 + j2)
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return _raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BivarPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = BivarPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, c: Scalar) -> "BivarPoly":
        f = _as_fraction(c)
        if f == 0:
            return BivarPoly.zero()
        return _raw({e: coef * f for e, coef in self._terms.items()})

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- calculus ------------------------------------------------------------

    def partial_x(self) -> "BivarPoly":
        out = {}
        for (i, j), c in self._terms.items():
            if i > 0:
                out[(i - 1, j)] = c * i
        return _raw(out)

    def partial_y(self) -> "BivarPoly":
        out = {}
        for (i, j), c in self._terms.items():
            if j > 0:
                out[(i, j - 1)] = c * j
        return _raw(out)

    # -- evaluation ----------------------------------------------------------

    def evaluate_exact(self, x: Scalar, y: Scalar) -> Fraction:
        x, y = _as_fraction(x), _as_fraction(y)
        total = Fraction(0)
        for (i, j), c in self._terms.items():
            total += c * x**i * y**j
        return total

    def __call__(self, x: float, y: float) -> float:
        return evaluate(self, x, y)

    # -- printing ------------------------------------------------------------

    def sorted_terms(self) -> list:
        """Terms in canonical order: descending total degree, x before y."""
        return sorted(self._terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0]))

    def __str__(self) -> str:
        return poly_to_text(self)

    def __repr__(self) -> str:
        return f"BivarPoly({poly_to_text(self)!r})"


def _raw(terms: dict) -> BivarPoly:
    p = BivarPoly.__new__(BivarPoly)
    p._terms = terms
    return p


def _coerce(v) -> BivarPoly:
    if isinstance(v, BivarPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return BivarPoly.constant(v)
    return NotImplemented


#: The coordinate polynomials, for building expressions in tests and demos.
X = BivarPoly({(1, 0): 1})
Y = BivarPoly({(0, 1): 1})
ONE = BivarPoly.constant(1)
R2 = X * X + Y * Y


def partials(p: BivarPoly) -> tuple:
    """Both exact partial derivatives (p_x, p_y)."""
    return p.partial_x(), p.partial_y()


def rotational_derivative(p: BivarPoly) -> BivarPoly:
    """x*p_y - y*p_x: the derivative of p along the unit rotation field.

    Maps homogeneous polynomials of degree d to the same degree, and on the
    unit circle acts as d/dtheta on the restriction.
    """
    return X * p.partial_y() - Y * p.partial_x()


def homogeneous_components(p: BivarPoly) -> list:
    """Partition of p by total degree, ascending: [(degree, part), ...].

    The sum of the parts reconstructs p exactly; the zero polynomial yields
    an empty list.
    """
    buckets: dict = {}
    for (i, j), c in p.items():
        buckets.setdefault(i + j, {})[(i, j)] = c
    return [(d, _raw(buckets[d])) for d in sorted(buckets)]


def homogeneous_part(p: BivarPoly, degree: int) -> BivarPoly:
    """The degree-`degree` homogeneous component of p (zero if absent)."""
    return _raw({e: c for e, c in p.items() if e[0] + e[1] == degree})


def evaluate(p: BivarPoly, x: float, y: float) -> float:
    """Floating evaluation via a nested Horner scheme.

    Groups terms by x-power and applies Horner in x over inner Horner-in-y
    polynomials.  For exact evaluation at rational points use
    `BivarPoly.evaluate_exact`.
    """
    if not math.isfinite(x) or not math.isfinite(y):
        raise ValueError("evaluate requires finite inputs")
    by_x: dict = {}
    for (i, j), c in p.items():
        by_x.setdefault(i, {})[j] = float(c)
    if not by_x:
        return 0.0
    for i, inner in by_x.items():
        jmax = max(inner)
        acc = 0.0
        for j in range(jmax, -1, -1):
            acc = acc * y + inner.get(j, 0.0)
        by_x[i] = acc
    total = 0.0
    for i in range(max(by_x), -1, -1):
        total = total * x + by_x.get(i, 0.0)
    return total


def euler_degree_identity(p: BivarPoly) -> BivarPoly:
    """x*p_x + y*p_y, which equals d*p for homogeneous p of degree d."""
    return X * p.partial_x() + Y * p.partial_y()


def circle_harmonic(k: int, kind: str = "sin") -> BivarPoly:
    """Homogeneous degree-k polynomial restricting to sin(k*theta) or cos(k*theta).

    These are Im((x+iy)^k) and Re((x+iy)^k); useful for building systems
    whose circle restriction is a single harmonic.
    """
    if k < 1:
        raise ValueError("harmonic order must be >= 1")
    re_terms: dict = {}
    im_terms: dict = {}
    for b in range(k + 1):
        c = Fraction(math.comb(k, b))
        # (x + iy)^k term x^(k-b) * (iy)^b ; i^b cycles 1, i, -1, -i
        r = b % 4
        if r == 0:
            re_terms[(k - b, b)] = re_terms.get((k - b, b), Fraction(0)) + c
        elif r == 1:
            im_terms[(k - b, b)] = im_terms.get((k - b, b), Fraction(0)) + c
        elif r == 2:
            re_terms[(k - b, b)] = re_terms.get((k - b, b), Fraction(0)) - c
        else:
            im_terms[(k - b, b)] = im_terms.get((k - b, b), Fraction(0)) - c
    if kind == "sin":
        return BivarPoly(im_terms)
    if kind == "cos":
        return BivarPoly(re_terms)
    raise ValueError("kind must be 'sin' or 'cos'")


# -- canonical text form -----------------------------------------------------


def poly_to_text(p: BivarPoly) -> str:
    """Canonical text form: graded-lex term order, rationals as num/den.

    Example: 2*x^2*y - 3*x*y^2 + y^3.  Stable across runs; used in JSON
    reports and accepted back by `poly_from_text`.
    """
    if p.is_zero:
        return "0"
    pieces = []
    for (i, j), c in p.sorted_terms():
        factors = []
        if i:
            factors.append("x" if i == 1 else f"x^{i}")
        if j:
            factors.append("y" if j == 1 else f"y^{j}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = str(mag) + "*" + "*".join(factors)
        if not pieces:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)


def poly_from_text(text: str) -> BivarPoly:
    """Parse the canonical text form produced by `poly_to_text`."""
    s = text.strip()
    if s == "0" or not s:
        return BivarPoly.zero()
    s = s.replace("- ", "-").replace("+ ", "+")
    chunks = re.split(r"(?=[+-])", s.replace(" ", ""))
    terms: dict = {}
    for chunk in chunks:
        if not chunk:
            continue
        m = _TERM_RE.match(chunk)
        if not m or (m.group("coeff") is None and m.group("x") is None and m.group("y") is None):
            raise ValueError(f"cannot parse polynomial term {chunk!r}")
        coeff = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
        if m.group("sign") == "-":
            coeff = -coeff
        i = int(m.group("i")) if m.group("i") else (1 if m.group("x") else 0)
        j = int(m.group("j")) if m.group("j") else (1 if m.group("y") else 0)
        terms[(i, j)] = terms.get((i, j), Fraction(0)) + coeff
    return BivarPoly(terms)


def poly_from_triples(triples: Iterable) -> BivarPoly:
    """Build a polynomial from [coeff_string, i, j] triples (spec-file form)."""
    terms: dict = {}
    for entry in triples:
        if len(entry) != 3:
            raise ValueError(f"term triple must be [coeff, i, j], got {entry!r}")
        c, i, j = entry
        coeff = Fraction(str(c))
        i, j = int(i), int(j)
        terms[(i, j)] = terms.get((i, j), Fraction(0)) + coeff
    return BivarPoly(terms)


def poly_to_triples(p: BivarPoly) -> list:
    """The [coeff_string, i, j] triple list for a polynomial, canonical order."""
    return [[str(c), i, j] for (i, j), c in p.sorted_terms()]
